//! Vectors of maximal type: sampling one, and the Monte-Carlo fraction.

use opmeasure::linalg::{self, real_vector};
use opmeasure::maximal::{is_maximal_type, maximal_type_fraction, sample_maximal_type, support_of_vector};
use opmeasure::measure::{AcPart, Atom, MatrixMeasure};
use opmeasure::sampling::{random_psd, rng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut r = rng(17);
    let atoms = vec![Atom::new(0.0, random_psd(&mut r, 3, 1)), Atom::new(1.0, random_psd(&mut r, 3, 2))];
    let ac = AcPart::new(vec![-1.0, -0.5, 0.5], vec![random_psd(&mut r, 3, 3), random_psd(&mut r, 3, 1)])?;
    let m = MatrixMeasure::new(3, atoms, Some(ac))?;

    let e1 = real_vector(&[1.0, 0.0, 0.0]);
    let support: Vec<String> = support_of_vector(&m, &e1)?.ids().map(|id| id.to_string()).collect();
    println!("support of e1: {} (maximal: {})", support.join(" "), is_maximal_type(&m, &e1)?);

    let sample = sample_maximal_type(&m, 5, 100)?;
    println!("maximal vector after {} tries: {}", sample.tries, sample.vector);
    let fraction = maximal_type_fraction(&m, &linalg::identity(3), 1000, 9)?;
    println!("fraction of Gaussian samples of maximal type: {fraction}");
    Ok(())
}
