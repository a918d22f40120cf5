//! Spectral subordination and equivalence, and the multiplication-operator test.

use opmeasure::l2::q_unitarily_equivalent;
use opmeasure::linalg::diag;
use opmeasure::measure::MatrixMeasure;
use opmeasure::multiplicity::{is_spectrally_equivalent, is_spectrally_subordinate};
use opmeasure::sampling::{random_psd, rng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = MatrixMeasure::atomic(
        2,
        vec![(1.0, diag(&[1.0, 0.0])), (2.0, diag(&[0.0, 1.0])), (3.0, diag(&[1.0, 1.0]))],
    )?;
    let mut r = rng(4);
    let b = MatrixMeasure::atomic(
        3,
        vec![(1.0, random_psd(&mut r, 3, 1)), (2.0, random_psd(&mut r, 3, 1)), (3.0, random_psd(&mut r, 3, 2))],
    )?;
    let c = MatrixMeasure::atomic(2, vec![(1.0, diag(&[1.0, 0.0])), (3.0, diag(&[2.0, 1.0]))])?;
    for (name, other) in [("b", &b), ("c", &c)] {
        println!(
            "a vs {name}: subordinate {}, reverse {}, equivalent {}, Q unitarily equivalent {}",
            is_spectrally_subordinate(&a, other),
            is_spectrally_subordinate(other, &a),
            is_spectrally_equivalent(&a, other),
            q_unitarily_equivalent(&a, other)?
        );
    }
    Ok(())
}
