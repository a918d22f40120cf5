mod common;

use common::{perturbed, random_atomic, random_measure, s5};
use opmeasure::borel::BorelSet;
use opmeasure::dilation::{
    compress_resolution, is_cyclic, is_minimal, naimark_dilate, resolution_of_identity, verify_dilation_equivalence,
};
use opmeasure::hellinger::{build_hellinger_chain, chain_criterion, exterior_density, exterior_support};
use opmeasure::jordan::{jordan_decompose, trace_norm_variation, variation_over_partition};
use opmeasure::l2::{self, inner_product, norm_squared, norm_via_density, q_unitarily_equivalent};
use opmeasure::linalg;
use opmeasure::maximal::{is_maximal_type, sample_maximal_type, support_of_vector};
use opmeasure::measure::{self, trace_measure, CellId};
use opmeasure::multiplicity::{
    hellinger_support, is_spectrally_equivalent, is_spectrally_subordinate, multiplicity_function,
    multiplicity_function_with,
};
use opmeasure::sampling::{self, rng, MeasureShape};
use opmeasure::tol::Tolerances;
use proptest::prelude::*;
use rand::Rng;

fn random_set(r: &mut sampling::SeededRng) -> BorelSet {
    let mut intervals = Vec::new();
    for _ in 0..r.random_range(0..3) {
        let a: f64 = r.random_range(-10.0..8.0);
        intervals.push((a, a + r.random_range(0.0..4.0)));
    }
    let points = (0..r.random_range(0..3)).map(|_| r.random_range(0..6) as f64).collect();
    BorelSet::from_parts(intervals, points)
}

fn split(s: &BorelSet, cut: f64) -> (BorelSet, BorelSet) {
    let left = BorelSet::interval(f64::NEG_INFINITY, cut);
    let right = BorelSet::interval(cut, f64::INFINITY);
    (s.intersection(&left), s.intersection(&right))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evaluation_is_additive(seed in any::<u64>(), cut in -8.0f64..6.0) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 4, 4, 5);
        let s = random_set(&mut r);
        let (a, b) = split(&s, cut);
        prop_assert!(a.is_disjoint(&b));
        let whole = m.eval(&a.union(&b));
        let parts = m.eval(&a) + m.eval(&b);
        prop_assert!(linalg::max_abs_diff(&whole, &parts) <= 1e-12 * linalg::max_abs(&whole).max(1.0));
    }

    #[test]
    fn density_reconstructs_every_cell(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 4, 4, 5);
        let field = measure::density(&m, &trace_measure(&m)).unwrap();
        for cell in m.cells() {
            let back = field.integrate(&cell.id.as_set());
            prop_assert!(linalg::max_abs_diff(&back, &cell.mass) <= 1e-12 * linalg::max_abs(&cell.mass).max(1.0));
        }
        for c in field.cells() {
            prop_assert!((c.density.trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_vanishes_only_on_null_sets(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 4, 4, 5);
        let s = random_set(&mut r);
        let value = m.eval(&s);
        let scale = linalg::max_abs(&m.total()).max(1.0);
        let trace_zero = value.trace().re.abs() <= 1e-12 * scale;
        let norm_zero = linalg::max_abs(&value) <= 1e-12 * scale;
        prop_assert_eq!(trace_zero, norm_zero);
    }

    #[test]
    fn vector_measures_are_subordinate(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 5, 4, 4);
        let f = sampling::gaussian_vector(&mut r, m.dim());
        let support = support_of_vector(&m, &f).unwrap();
        prop_assert!(support.is_subset_mod(&hellinger_support(&m, 1)));
        let mask: Vec<bool> = (0..m.dim()).map(|_| r.random_bool(0.5)).collect();
        let g = f.map_with_location(|i, _, z| if mask[i] { z } else { linalg::ZERO });
        prop_assert!(support_of_vector(&m, &g).unwrap().is_subset_mod(&hellinger_support(&m, 1)));
    }

    #[test]
    fn maximality_is_scale_invariant(seed in any::<u64>(), re in -5.0f64..5.0, im in -5.0f64..5.0) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let mut r = rng(seed);
        let m = random_measure(&mut r, 4, 4, 3);
        let f = sampling::gaussian_vector(&mut r, m.dim());
        let e1 = f.map_with_location(|i, _, z| if i == 0 { z } else { linalg::ZERO });
        for v in [f, e1] {
            let scaled = &v * linalg::c(re, im);
            prop_assert_eq!(is_maximal_type(&m, &v).unwrap(), is_maximal_type(&m, &scaled).unwrap());
        }
    }

    #[test]
    fn l2_norm_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 5, 6, 8);
        let f = l2::random_function(&mut r, &m);
        let g = l2::random_function(&mut r, &m);
        let direct = norm_squared(&f, &m).unwrap();
        prop_assert!(direct >= 0.0);
        let via = norm_via_density(&f, &m, &linalg::identity(m.dim())).unwrap();
        prop_assert!((direct - via).abs() <= 1e-10 * (1.0 + direct));
        let fg = inner_product(&f, &g, &m).unwrap();
        let gf = inner_product(&g, &f, &m).unwrap();
        prop_assert!((fg - gf.conj()).norm() <= 1e-12 * (1.0 + fg.norm()));
        prop_assert!(l2::same_class(&f, &f, &m).unwrap());
    }

    #[test]
    fn jordan_parts_are_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.random_range(1..=4);
        let shape = MeasureShape { dim, atoms: r.random_range(0..=4), cells: r.random_range(1..=4) };
        let ch = sampling::random_charge(&mut r, shape).unwrap();
        let (p, n) = jordan_decompose(&ch);
        for ((cp, cn), cell) in p.cells().iter().zip(n.cells()).zip(ch.cells()) {
            prop_assert!(linalg::hermitian_eigenvalues(&cp.mass)[0] >= -1e-12);
            prop_assert!(linalg::hermitian_eigenvalues(&cn.mass)[0] >= -1e-12);
            prop_assert!(linalg::max_abs_diff(&(&cp.mass - &cn.mass), &cell.mass) <= 1e-12);
            let split = cp.mass.trace().re + cn.mass.trace().re;
            prop_assert!((split - linalg::trace_norm(&cell.mass)).abs() <= 1e-10 * split.max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn refining_a_partition_never_decreases_variation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = MeasureShape { dim: r.random_range(1..=3), atoms: r.random_range(0..=4), cells: r.random_range(1..=4) };
        let ch = sampling::random_charge(&mut r, shape).unwrap();
        let coarse: Vec<f64> = (0..r.random_range(0..4)).map(|_| r.random_range(-6.0..5.0)).collect();
        let mut fine = coarse.clone();
        fine.extend((0..r.random_range(1..5)).map(|_| r.random_range(-6.0..5.0)));
        let t = sampling::random_conditioned(&mut r, ch.dim(), 10.0);
        let a = variation_over_partition(&ch, &t, &coarse).unwrap();
        let b = variation_over_partition(&ch, &t, &fine).unwrap();
        let sup = trace_norm_variation(&ch, &t).unwrap();
        prop_assert!(b.value >= a.value - 1e-10 * a.value.max(1.0));
        prop_assert!(sup.value >= b.value - 1e-10 * b.value.max(1.0));
        prop_assert!((sup.value - sup.per_cell.iter().sum::<f64>()).abs() < 1e-12 * sup.value.max(1.0));
    }

    #[test]
    fn dilation_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.random_range(1..=5);
        let atoms = r.random_range(1..=6);
        let m = sampling::random_povm(&mut r, dim, atoms).unwrap();
        let d = naimark_dilate(&m).unwrap();
        prop_assert!(d.isometry_deviation() < 1e-12);
        prop_assert!(d.reconstruction_deviation(&m) < 1e-12);
        prop_assert!(d.minimal && is_minimal(&d.e, &d.v));
        let back = compress_resolution(&d.e, &d.v).unwrap();
        for (a, b) in back.atoms().iter().zip(m.atoms()) {
            prop_assert!(linalg::max_abs_diff(&a.value, &b.value) < 1e-12);
        }
        prop_assert!(is_spectrally_subordinate(&back, &d.e));
        prop_assert!(verify_dilation_equivalence(&m).unwrap());
    }

    #[test]
    fn q_equivalence_matches_spectral_equivalence(seed in any::<u64>(), perturb in 0usize..4) {
        let mut r = rng(seed);
        let a = random_atomic(&mut r, 4, 5);
        let b = perturbed(&mut r, &a, perturb);
        prop_assert_eq!(q_unitarily_equivalent(&a, &b).unwrap(), is_spectrally_equivalent(&a, &b));
    }

    #[test]
    fn exterior_supports_realize_hellinger_types(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 5, 4, 3);
        let h = sample_maximal_type(&m, seed, 100).unwrap().vector;
        let chain = build_hellinger_chain(&m, &h, seed ^ 1, 100).unwrap();
        prop_assert_eq!(chain.verified_depth(), multiplicity_function(&m).total());
        prop_assert!(linalg::orthonormality_deviation(&chain.subspace(chain.len())) < 1e-10);
        let mut previous = None;
        for k in 1..=chain.verified_depth() {
            let support = exterior_support(&m, &chain, k).unwrap();
            prop_assert!(support.equivalent(&hellinger_support(&m, k)));
            let density = exterior_density(&m, &chain, k).unwrap();
            let positive = density.cells().into_iter().filter(|(_, w)| *w > 0.0).count();
            prop_assert_eq!(positive, support.len());
            if let Some(prev) = &previous {
                prop_assert!(support.is_subset_mod(prev));
            }
            previous = Some(support);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn multiplicity_is_basis_independent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 5, 4, 4);
        let u = sampling::random_unitary(&mut r, m.dim());
        let n = multiplicity_function(&m);
        prop_assert!(n.same_values(&multiplicity_function(&m.conjugate_by(&u).unwrap())));
    }

    #[test]
    fn multiplicity_is_reference_independent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 5, 4, 4);
        let rho = trace_measure(&m);
        let factors: Vec<f64> = (0..32).map(|_| r.random_range(0.01..100.0)).collect();
        let rescaled = rho
            .rescaled(|id: &CellId| {
                let key = match *id { CellId::Atom(t) => t, CellId::Interval(a, _) => a };
                factors[(key.abs() * 7.0) as usize % factors.len()]
            })
            .unwrap();
        let a = multiplicity_function(&m);
        let b = multiplicity_function_with(&m, &rescaled, &Tolerances::DEFAULT).unwrap();
        prop_assert!(a.same_values(&b));
        for i in 1..=m.dim() {
            prop_assert!(a.support(i).ids().eq(b.support(i).ids()));
            prop_assert!(a.support(i + 1).is_subset_mod(&a.support(i)));
        }
    }

    #[test]
    fn leading_minor_ranks_reach_full_rank(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 5, 4, 4);
        let u = sampling::random_unitary(&mut r, m.dim());
        let field = measure::density(&m, &trace_measure(&m)).unwrap();
        for cell in field.cells() {
            let psi = u.adjoint() * &cell.density * &u;
            let full = linalg::numerical_rank(&psi, 1e-10);
            let sup = (1..=m.dim())
                .map(|n| linalg::numerical_rank(&psi.view((0, 0), (n, n)).into_owned(), 1e-10))
                .max()
                .unwrap();
            prop_assert_eq!(sup, full);
        }
    }

    #[test]
    fn conjugation_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 4, 4, 4);
        let t = sampling::random_conditioned(&mut r, m.dim(), 1e3);
        let t_inv = t.clone().try_inverse().unwrap();
        let back = m.conjugate_by(&t).unwrap().conjugate_by(&t_inv).unwrap();
        for (a, b) in back.cells().iter().zip(m.cells()) {
            prop_assert!(linalg::max_abs_diff(&a.mass, &b.mass) <= 1e-9 * linalg::max_abs(&b.mass).max(1.0));
        }
        let s = BorelSet::interval(-2.0, 1.5);
        let lhs = t.adjoint() * m.eval(&s) * &t;
        let rhs = m.conjugate_by(&t).unwrap().eval(&s);
        prop_assert!(linalg::max_abs_diff(&lhs, &rhs) <= 1e-10 * linalg::max_abs(&lhs).max(1.0));
    }

    #[test]
    fn l2_norm_is_independent_of_t(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_measure(&mut r, 5, 6, 8);
        let f = l2::random_function(&mut r, &m);
        let base = norm_via_density(&f, &m, &linalg::identity(m.dim())).unwrap();
        let t = sampling::random_conditioned(&mut r, m.dim(), 1e3);
        let other = norm_via_density(&f, &m, &t).unwrap();
        prop_assert!((base - other).abs() <= 1e-8 * base.max(1e-300));
    }

    #[test]
    fn orthogonal_measure_specialization(seed in any::<u64>(), lo in -3.0f64..3.0, len in 0.0f64..4.0) {
        let mut r = rng(seed);
        let n = r.random_range(1..=5);
        let a = sampling::random_hermitian(&mut r, n);
        let e = resolution_of_identity(&a).unwrap();
        let h = sampling::gaussian_vector(&mut r, n);
        let delta = BorelSet::interval(lo, lo + len);
        let f = l2::StepVectorFunction::indicator(&e, &h, |id| id.fraction_in(&delta) > 0.0).unwrap();
        let lhs = linalg::quadratic_form(&e.eval(&delta), &h);
        let t = sampling::random_conditioned(&mut r, n, 10.0);
        let rhs = norm_via_density(&f, &e, &t).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs));
    }

    #[test]
    fn classical_multiplicity_agrees_with_definition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=6);
        let a = if r.random_bool(0.5) {
            sampling::random_hermitian(&mut r, n)
        } else {
            // repeated eigenvalues
            let u = sampling::random_unitary(&mut r, n);
            let values: Vec<f64> = (0..n).map(|_| r.random_range(0..3) as f64).collect();
            linalg::hermitian_part(&(&u * linalg::diag(&values) * u.adjoint()))
        };
        let classical = opmeasure::dilation::classical_multiplicity(&a).unwrap();
        let e = resolution_of_identity(&a).unwrap();
        prop_assert!(classical.same_values(&multiplicity_function(&e)));
    }

    #[test]
    fn compressions_are_equivalent_exactly_for_cyclic_ranges(seed in any::<u64>(), cyclic in any::<bool>()) {
        let mut r = rng(seed);
        let n = r.random_range(2..=6);
        let u = sampling::random_unitary(&mut r, n);
        let points = r.random_range(1..=n);
        let values: Vec<f64> = (0..n).map(|i| (i % points) as f64).collect();
        let a = linalg::hermitian_part(&(&u * linalg::diag(&values) * u.adjoint()));
        let e = resolution_of_identity(&a).unwrap();
        let max_mult = (0..points).map(|p| values.iter().filter(|&&v| v == p as f64).count()).max().unwrap();
        let k = if cyclic { r.random_range(max_mult..=n) } else { r.random_range(1..=max_mult) };
        let mut v = sampling::gaussian_matrix(&mut r, n, k);
        if !cyclic {
            // confine the range to the orthogonal complement of one eigenvector of the largest eigenspace
            let p = (0..points).find(|&p| values.iter().filter(|&&x| x == p as f64).count() == max_mult).unwrap();
            let col = values.iter().position(|&x| x == p as f64).unwrap();
            let w = u.column(col).into_owned();
            for j in 0..k {
                let overlap = w.dotc(&v.column(j));
                let fixed = v.column(j) - &w * overlap;
                v.set_column(j, &fixed);
            }
        }
        let basis = linalg::orthonormal_range(&v, 1e-10);
        prop_assume!(basis.ncols() == k);
        let compressed = compress_resolution(&e, &basis).unwrap();
        let cyc = is_cyclic(&a, &basis).unwrap();
        prop_assert_eq!(is_spectrally_equivalent(&compressed, &e), cyc);
        if !cyclic {
            prop_assert!(!cyc);
        }
    }
}

#[test]
fn basis_chain_certifies_exactly_when_supports_match() {
    // Orthogonal measure with spectrally orthogonal basis vectors.
    let e = resolution_of_identity(&linalg::diag(&[1.0, 2.0, 2.0, 3.0])).unwrap();
    let basis: Vec<_> = (0..4)
        .map(|i| linalg::real_vector(&(0..4).map(|j| f64::from(u8::from(i == j))).collect::<Vec<_>>()))
        .collect();
    let order_ok = [basis[1].clone(), basis[2].clone()];
    let supports_ok = order_ok.iter().enumerate().all(|(i, v)| {
        support_of_vector(&e, v).unwrap().equivalent(&hellinger_support(&e, i + 1))
    });
    assert_eq!(chain_criterion(&e, &order_ok).unwrap(), supports_ok);
    let order_bad = [basis[0].clone(), basis[1].clone()];
    let supports_bad = order_bad.iter().enumerate().all(|(i, v)| {
        support_of_vector(&e, v).unwrap().equivalent(&hellinger_support(&e, i + 1))
    });
    assert!(!supports_bad);
    assert_eq!(chain_criterion(&e, &order_bad).unwrap(), supports_bad);
    assert!(chain_criterion(&s5(), &[]).unwrap());
}
