//! Builds a certified Hellinger chain and looks for junior-type vectors.

use opmeasure::hellinger::{build_hellinger_chain, exterior_support, junior_type_vector_search};
use opmeasure::linalg::diag;
use opmeasure::maximal::sample_maximal_type;
use opmeasure::measure::MatrixMeasure;
use opmeasure::multiplicity::multiplicity_function;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = MatrixMeasure::atomic(
        2,
        vec![(1.0, diag(&[1.0, 0.0])), (2.0, diag(&[0.0, 1.0])), (3.0, diag(&[1.0, 1.0]))],
    )?;
    let h = sample_maximal_type(&m, 1, 100)?.vector;
    let chain = build_hellinger_chain(&m, &h, 2, 100)?;
    println!("verified depth {} of {}", chain.verified_depth(), multiplicity_function(&m).total());
    for k in 1..=chain.verified_depth() {
        let support: Vec<String> = exterior_support(&m, &chain, k)?.ids().map(|id| id.to_string()).collect();
        println!("level {k}: exterior support {}", support.join(" "));
    }

    let junior = junior_type_vector_search(&m, 2, 1000, 3)?;
    match (&junior.found, &junior.exact) {
        (Some(v), _) => println!("junior vector for level 2: {v}"),
        (None, Some(exact)) => {
            println!("no vector has support Gamma_2; reachable supports {:?}", exact.achievable)
        }
        (None, None) => println!("no junior vector in {} samples", junior.samples_tried),
    }
    Ok(())
}
