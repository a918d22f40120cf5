//! A charge of weakly bounded variation with no Jordan decomposition, built from
//! Clifford matrices.

use opmeasure::jordan::{anticommutation_defect, clifford_generators, clifford_variation_series, weak_variation, CliffordBlockCharge};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=4 {
        println!("n = {n}: anticommutation defect {:.1e}", anticommutation_defect(&clifford_generators(n)?));
    }
    let series = clifford_variation_series(12, None)?;
    println!(" N   S_N (trace norm)   HS proxy");
    for (i, (s, hs)) in series.s.iter().zip(&series.hs).enumerate() {
        println!("{:2}   {s:16.6}   {hs:8.6}", i + 1);
    }
    let block = CliffordBlockCharge::new(5)?;
    let f = block.extremal_vector();
    println!("weak variation of block 5 at the extremal vector: {:.12}", weak_variation(&block.charge, &f, &f)?);
    Ok(())
}
