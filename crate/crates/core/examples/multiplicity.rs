//! Multiplicity function and Hellinger supports of a measure.
//!
//! `cargo run --example multiplicity [measure.json]`

use opmeasure::linalg::diag;
use opmeasure::measure::MatrixMeasure;
use opmeasure::multiplicity::multiplicity_function;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = match std::env::args().nth(1) {
        Some(path) => opmeasure::io::parse_measure(&std::fs::read_to_string(path)?)?,
        None => MatrixMeasure::atomic(
            2,
            vec![(1.0, diag(&[1.0, 0.0])), (2.0, diag(&[0.0, 1.0])), (3.0, diag(&[1.0, 1.0]))],
        )?,
    };
    let n = multiplicity_function(&m);
    for cell in n.cells() {
        println!("N({}) = {}", cell.cell, cell.multiplicity);
    }
    println!("total multiplicity {}", n.total());
    for (i, gamma) in n.supports().iter().enumerate() {
        let labels: Vec<String> = gamma.ids().map(|id| id.to_string()).collect();
        println!("Gamma_{} = {}", i + 1, labels.join(" "));
    }
    Ok(())
}
