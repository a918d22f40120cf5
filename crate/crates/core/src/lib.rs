pub mod borel;
pub mod cli;
pub mod dilation;
pub mod error;
pub mod hellinger;
pub mod io;
pub mod jordan;
pub mod l2;
pub mod linalg;
pub mod maximal;
pub mod measure;
pub mod multiplicity;
pub mod sampling;
pub mod tol;
