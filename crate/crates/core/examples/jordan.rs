//! Jordan decomposition of a Hermitian measure-charge and its trace-norm variation.

use opmeasure::jordan::{jordan_decompose, trace_norm_variation, variation_over_partition};
use opmeasure::linalg;
use opmeasure::sampling::{random_charge, rng, MeasureShape};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut r = rng(8);
    let ch = random_charge(&mut r, MeasureShape { dim: 3, atoms: 2, cells: 3 })?;
    let (p, n) = jordan_decompose(&ch);
    println!("trace of positive part {:.6}", p.total().trace().re);
    println!("trace of negative part {:.6}", n.total().trace().re);

    let t = linalg::identity(3);
    for cuts in [vec![], vec![0.0], vec![-1.0, 0.0, 1.0]] {
        println!("partition {cuts:?}: {:.6}", variation_over_partition(&ch, &t, &cuts)?.value);
    }
    println!("supremum: {:.6}", trace_norm_variation(&ch, &t)?.value);
    Ok(())
}
