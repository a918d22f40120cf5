//! The norm in L2(Sigma, H) computed directly and through the density.

use opmeasure::l2::{norm_squared, norm_via_density, random_function};
use opmeasure::linalg;
use opmeasure::sampling::{random_conditioned, random_measure, rng, MeasureShape};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut r = rng(3);
    let m = random_measure(&mut r, MeasureShape { dim: 4, atoms: 3, cells: 5 })?;
    let f = random_function(&mut r, &m);
    println!("(f, f)                = {:.15}", norm_squared(&f, &m)?);
    println!("via density, T = I    = {:.15}", norm_via_density(&f, &m, &linalg::identity(4))?);
    for i in 0..3 {
        let t = random_conditioned(&mut r, 4, 1e3);
        println!("via density, random T{i} = {:.15}", norm_via_density(&f, &m, &t)?);
    }
    Ok(())
}
