//! Naimark dilation of the trine POVM.

use opmeasure::dilation::{naimark_dilate, verify_dilation_equivalence};
use opmeasure::linalg::{real, real_vector};
use opmeasure::measure::MatrixMeasure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let atoms = (0..3)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            let v = real_vector(&[angle.cos(), angle.sin()]);
            (k as f64, &v * v.adjoint() * real(2.0 / 3.0))
        })
        .collect();
    let m = MatrixMeasure::atomic(2, atoms)?;
    let d = naimark_dilate(&m)?;
    println!("dilation dimension {}, minimal {}", d.big_dim, d.minimal);
    println!("|V*V - I| = {:.2e}", d.isometry_deviation());
    println!("|V*E V - Sigma| = {:.2e}", d.reconstruction_deviation(&m));
    println!("V ={}", d.v);
    println!("spectrally equivalent to its dilation: {}", verify_dilation_equivalence(&m)?);
    Ok(())
}
