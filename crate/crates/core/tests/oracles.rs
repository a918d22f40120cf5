//! Library results checked against independent computations.

mod common;

use common::{cofactor_det, gram_schmidt_rank, random_atomic, random_measure, s5, submatrix, subsets};
use num_complex::Complex64;
use opmeasure::borel::BorelSet;
use opmeasure::dilation::{classical_multiplicity, is_cyclic, naimark_dilate};
use opmeasure::hellinger::{build_hellinger_chain, exterior_density, exterior_support};
use opmeasure::jordan::{self, clifford_generators, clifford_variation_series, CliffordBlockCharge};
use opmeasure::l2::{inner_product, multiplication_operator, StepVectorFunction};
use opmeasure::linalg::{self, c, diag, real, real_matrix, real_vector, Mat};
use opmeasure::maximal::sample_maximal_type;
use opmeasure::measure::{self, trace_measure, CellId, MatrixCharge, MatrixMeasure};
use opmeasure::multiplicity::{hellinger_support, multiplicity_function};
use opmeasure::sampling::{self, rng, MeasureShape};
use std::f64::consts::FRAC_1_SQRT_2;

/// `(∧^k Ψ φ, φ)` for `φ = e_1 ∧ … ∧ e_k`, from compound matrices of minors.
fn compound_form(psi: &Mat, e: &Mat) -> f64 {
    let n = psi.nrows();
    let k = e.ncols();
    let cols: Vec<usize> = (0..k).collect();
    let index = subsets(n, k);
    let phi: Vec<Complex64> = index.iter().map(|rows| cofactor_det(&submatrix(e, rows, &cols))).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (i, rows) in index.iter().enumerate() {
        for (j, cols_j) in index.iter().enumerate() {
            total += phi[i].conj() * cofactor_det(&submatrix(psi, rows, cols_j)) * phi[j];
        }
    }
    total.re
}

#[test]
fn exterior_density_equals_compound_matrix_form() {
    let mut r = rng(11);
    let mut checked = 0;
    for case in 0..25 {
        let m = random_measure(&mut r, 4, 4, 3);
        let h = sample_maximal_type(&m, case, 100).unwrap().vector;
        let chain = build_hellinger_chain(&m, &h, case + 1000, 100).unwrap();
        let field = measure::density(&m, &trace_measure(&m)).unwrap();
        for k in 1..=chain.len() {
            let density = exterior_density(&m, &chain, k).unwrap();
            let support = exterior_support(&m, &chain, k).unwrap();
            let e = chain.subspace(k);
            for cell in field.cells() {
                let oracle = compound_form(&cell.density, &e) * cell.weight;
                let value = density.mass_on(&cell.id);
                if support.contains(&cell.id) {
                    assert!((value - oracle).abs() <= 1e-9 * oracle.abs().max(1e-300), "{value} vs {oracle}");
                    checked += 1;
                } else {
                    assert_eq!(value, 0.0);
                    assert!(oracle.abs() <= 1e-10 * cell.weight, "singular cell carries {oracle}");
                }
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn golden_exterior_density_by_hand() {
    let m = s5();
    let h = real_vector(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
    let chain = build_hellinger_chain(&m, &h, 0, 10).unwrap();
    let ext = exterior_density(&m, &chain, 2).unwrap();
    // Ψ(3) = I/2 and ρ({3}) = 2, so det(I/2)·2 = 1/2; atoms 1 and 2 have rank one.
    assert!((ext.mass_on(&CellId::Atom(3.0)) - 0.5).abs() < 1e-12);
    assert_eq!(ext.mass_on(&CellId::Atom(1.0)), 0.0);
    assert_eq!(ext.mass_on(&CellId::Atom(2.0)), 0.0);
    let first = exterior_density(&m, &chain, 1).unwrap();
    assert!((first.mass_on(&CellId::Atom(1.0)) - 0.5).abs() < 1e-12);
    assert!((first.mass_on(&CellId::Atom(2.0)) - 0.5).abs() < 1e-12);
    assert!((first.mass_on(&CellId::Atom(3.0)) - 1.0).abs() < 1e-12);
}

#[test]
fn trace_measure_matches_eigenvalue_sum() {
    let mut r = rng(3);
    for _ in 0..10 {
        let a = sampling::random_psd(&mut r, 3, 3);
        let m = MatrixMeasure::atomic(3, vec![(0.0, a.clone())]).unwrap();
        let eig = nalgebra::SymmetricEigen::new(a).eigenvalues.sum();
        assert!((trace_measure(&m).total() - eig).abs() < 1e-12 * eig);
    }
}

#[test]
fn multiplicity_matches_gram_schmidt_rank() {
    let mut r = rng(5);
    let b = sampling::gaussian_matrix(&mut r, 4, 2);
    let m = MatrixMeasure::atomic(4, vec![(0.0, &b * b.adjoint())]).unwrap();
    assert_eq!(gram_schmidt_rank(&(&b * b.adjoint()), 1e-8), 2);
    assert_eq!(multiplicity_function(&m).get(&CellId::Atom(0.0)), Some(2));

    for _ in 0..30 {
        let m = random_measure(&mut r, 5, 4, 4);
        let n = multiplicity_function(&m);
        let rho = trace_measure(&m);
        for cell in m.cells() {
            let weight = rho.mass_on(&cell.id);
            if weight <= 1e-12 * rho.total() {
                assert_eq!(n.get(&cell.id), None);
                continue;
            }
            assert_eq!(n.get(&cell.id), Some(gram_schmidt_rank(&cell.mass, 1e-8)), "cell {}", cell.id);
        }
    }
}

#[test]
fn l2_norms_through_the_dilation_isometry() {
    let mut r = rng(8);
    for _ in 0..20 {
        let dim = 3;
        let m = sampling::random_povm(&mut r, dim, 4).unwrap();
        let d = naimark_dilate(&m).unwrap();
        let h = sampling::gaussian_vector(&mut r, dim);
        let constant = StepVectorFunction::constant(&m, &h).unwrap();
        let whole = inner_product(&constant, &constant, &m).unwrap().re;
        assert!((whole - (&d.v * &h).norm_squared()).abs() < 1e-10 * whole);
        for atom in m.atoms() {
            let id = CellId::Atom(atom.location);
            let f = StepVectorFunction::indicator(&m, &h, |c| *c == id).unwrap();
            let e = d.e.mass_on(&id);
            let oracle = (e * (&d.v * &h)).norm_squared();
            assert!((inner_product(&f, &f, &m).unwrap().re - oracle).abs() < 1e-10 * whole);
        }
    }
}

#[test]
fn multiplication_spectrum_repeats_locations_by_rank() {
    let mut r = rng(21);
    for _ in 0..20 {
        let m = random_atomic(&mut r, 4, 5);
        let mut expected: Vec<f64> = Vec::new();
        for a in m.atoms() {
            for _ in 0..gram_schmidt_rank(&a.value, 1e-8) {
                expected.push(a.location);
            }
        }
        let q = multiplication_operator(&m).unwrap();
        assert_eq!(q.spectrum(), expected);
        assert!(linalg::hermitian_deviation(&q.matrix) < 1e-15);
    }
}

#[test]
fn clifford_generators_by_hand() {
    let x = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let z = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let g = clifford_generators(2).unwrap();
    #[rustfmt::skip]
    let x1 = real_matrix(4, 4, &[
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
    ]);
    #[rustfmt::skip]
    let x2 = real_matrix(4, 4, &[
        0.0, 1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, -1.0, 0.0,
    ]);
    assert_eq!(g[0], x1);
    assert_eq!(g[1], x2);
    assert_eq!(g[1], z.kronecker(&x));
    assert!(linalg::max_abs(&(&g[0] * &g[1] + &g[1] * &g[0])) == 0.0);
}

#[test]
fn clifford_trace_norm_from_involution_spectrum() {
    // x² = I and tr x = 0 force eigenvalues ±1 with equal multiplicity, so ‖x‖₁ = 2ⁿ.
    for n in 1..=6 {
        let size = 1usize << n;
        for x in clifford_generators(n).unwrap() {
            assert!(linalg::max_abs_diff(&(&x * &x), &linalg::identity(size)) < 1e-15);
            assert!(x.trace().norm() < 1e-15);
            let svd: f64 = x.clone().svd(false, false).singular_values.sum();
            assert!((svd - size as f64).abs() < 1e-8);
            assert!((linalg::trace_norm(&x) - size as f64).abs() < 1e-8);
        }
    }
}

#[test]
fn clifford_series_against_harmonic_sums() {
    let s = clifford_variation_series(12, None).unwrap();
    let mut harmonic = 0.0;
    let mut zeta = 0.0;
    for n in 1..=12 {
        harmonic += 1.0 / n as f64;
        zeta += (n as f64).powf(-1.5);
        assert!((s.s[n - 1] - harmonic / 2f64.sqrt()).abs() < 1e-12);
        assert!((s.hs[n - 1] - zeta).abs() < 1e-12);
    }
    // S_N with t_n² = 4^{-n} is Σ 2^{-n} √(n/2), bounded by Σ n 2^{-n} / √2 = √2.
    let weights: Vec<f64> = (1..=30).map(|n| 2f64.powi(-n)).collect();
    let g = clifford_variation_series(30, Some(&weights)).unwrap();
    let oracle: f64 = (1..=30).map(|n| 2f64.powi(-n) * (n as f64 / 2.0).sqrt()).sum();
    assert!((g.s[29] - oracle).abs() < 1e-12);
    assert!(g.s[29] < 2f64.sqrt());
}

#[test]
fn clifford_weak_variation_bound_on_random_vectors() {
    let mut r = rng(4);
    for n in 1..=6 {
        let block = CliffordBlockCharge::new(n).unwrap();
        for _ in 0..20 {
            let f = sampling::gaussian_vector(&mut r, 1 << n);
            let f = &f / real(f.norm());
            // Σ_k (x_k f, f)² ≤ 1 since ‖Σ a_k x_k‖ = |a|; Cauchy–Schwarz gives the bound.
            let squares: f64 = block.generators.iter().map(|x| linalg::quadratic_form(x, &f).powi(2)).sum();
            assert!(squares <= 1.0 + 1e-12);
            let w = jordan::weak_variation(&block.charge, &f, &f).unwrap();
            assert!(w <= FRAC_1_SQRT_2 + 1e-10);
        }
    }
}

#[test]
fn jordan_split_trace_equals_singular_value_sum() {
    let mut r = rng(13);
    for _ in 0..20 {
        let ch = sampling::random_charge(&mut r, MeasureShape { dim: 4, atoms: 3, cells: 2 }).unwrap();
        let (p, n) = jordan::jordan_decompose(&ch);
        for ((cp, cn), cell) in p.cells().iter().zip(n.cells()).zip(ch.cells()) {
            let svd: f64 = cell.mass.clone().svd(false, false).singular_values.sum();
            let split = cp.mass.trace().re + cn.mass.trace().re;
            assert!((split - svd).abs() < 1e-10 * svd.max(1.0));
        }
    }
}

#[test]
fn eigen_cluster_policy() {
    let mut r = rng(17);
    let u = sampling::random_unitary(&mut r, 4);
    let a = &u * diag(&[1.0, 1.0 + 5e-12, 1.0 + 1e-3, 2.0]) * u.adjoint();
    let a = linalg::hermitian_part(&a);
    let n = classical_multiplicity(&a).unwrap();
    let mults: Vec<usize> = n.cells().iter().map(|c| c.multiplicity).collect();
    assert_eq!(mults, vec![2, 1, 1]);
}

#[test]
fn cyclicity_by_vandermonde_determinant() {
    let s = 1.0 / 3f64.sqrt();
    let l = real_matrix(3, 1, &[s, s, s]);
    // P_λ l for λ = 1, 2, 3 are the scaled coordinate vectors; the Krylov matrix [l, Al, A²l] is Vandermonde.
    let a = diag(&[1.0, 2.0, 3.0]);
    let krylov = Mat::from_fn(3, 3, |i, j| c(s * ((i + 1) as f64).powi(j as i32), 0.0));
    assert!(cofactor_det(&krylov).norm() > 1e-3);
    assert!(is_cyclic(&a, &l).unwrap());
}

#[test]
fn golden_evaluations() {
    let m = s5();
    assert_eq!(m.eval(&BorelSet::point(1.0)), diag(&[1.0, 0.0]));
    assert_eq!(m.eval(&BorelSet::interval(0.0, 2.5)), linalg::identity(2));
    assert_eq!(m.eval(&BorelSet::empty()), Mat::zeros(2, 2));
    let h = FRAC_1_SQRT_2;
    let line = m.compress(&real_matrix(2, 1, &[h, h])).unwrap();
    let weights: Vec<f64> = line.atoms().iter().map(|a| a.value[(0, 0)].re).collect();
    for (w, e) in weights.iter().zip([0.5, 0.5, 1.0]) {
        assert!((w - e).abs() < 1e-15);
    }
    let e1 = m.compress(&real_matrix(2, 1, &[1.0, 0.0])).unwrap();
    assert_eq!(hellinger_support(&e1, 1).atom_locations(), vec![1.0, 3.0]);
    let field = measure::density(&m, &trace_measure(&m)).unwrap();
    assert_eq!(field.get(&CellId::Atom(3.0)).unwrap().density, diag(&[0.5, 0.5]));
    assert_eq!(field.get(&CellId::Atom(1.0)).unwrap().density, diag(&[1.0, 0.0]));
}

#[test]
fn charge_cells_sum_to_total() {
    let mut r = rng(2);
    let ch: MatrixCharge = sampling::random_charge(&mut r, MeasureShape { dim: 3, atoms: 2, cells: 3 }).unwrap();
    let sum = ch.cells().iter().fold(Mat::zeros(3, 3), |acc, cell| acc + &cell.mass);
    assert!(linalg::max_abs_diff(&sum, &ch.total()) < 1e-12);
}
