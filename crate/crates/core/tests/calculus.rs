mod common;

use common::{cond, random_basis, spec, Diagonalizable, CORPUS};
use ddcalc::divdiff::{corner_of, dd_value, opitz_matrix};
use ddcalc::funcalc::{bottleneck_assignment, calc_auto, calc_diag, calc_extended, calc_newton};
use ddcalc::funcspec::{DomainSpec, FunctionSpec};
use ddcalc::numkit::{eigenvalues, mat_poly_eval, op_norm, MatrixC, ToleranceConfig};
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 120, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn diag_path_matches_conjugated_oracle(seed in any::<u64>(), k in 1usize..=6, fi in 0usize..CORPUS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Diagonalizable::random(&mut rng, k, 1e-2, 1e4);
        let f = spec(&CORPUS[fi]);
        let want = d.apply(CORPUS[fi].eval);
        let scale = 1.0 + op_norm(&want);
        let got = calc_diag(&f, &d.x, &tol()).unwrap().value;
        prop_assert!(op_norm(&(&got - &want)) <= 1e-6 * scale * cond(&d.p));
    }

    #[test]
    fn similarity_equivariance(seed in any::<u64>(), k in 1usize..=6, fi in 0usize..CORPUS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Diagonalizable::random(&mut rng, k, 1e-2, 1e3);
        let g = random_basis(&mut rng, k, 0.4, 100.0);
        let g_inv = g.inverse().unwrap();
        let f = spec(&CORPUS[fi]);
        let fx = calc_auto(&f, &d.x, &tol()).unwrap().value;
        let conj = &(&g * &d.x) * &g_inv;
        let lhs = calc_auto(&f, &conj, &tol()).unwrap().value;
        let rhs = &(&g * &fx) * &g_inv;
        let c = cond(&g);
        prop_assert!(op_norm(&(&lhs - &rhs)) <= 1e-6 * c * c * (1.0 + op_norm(&fx)));
    }

    #[test]
    fn spectral_mapping(seed in any::<u64>(), k in 1usize..=6, fi in 0usize..CORPUS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Diagonalizable::random(&mut rng, k, 1e-2, 1e2);
        let f = spec(&CORPUS[fi]);
        let fx = calc_auto(&f, &d.x, &tol()).unwrap().value;
        let mapped: Vec<C> = d.eigs.iter().map(|&z| (CORPUS[fi].eval)(z)).collect();
        let (_, dist) = bottleneck_assignment(&eigenvalues(&fx).unwrap(), &mapped);
        prop_assert!(dist <= 1e-7 * (1.0 + op_norm(&fx)) * cond(&d.p));
    }

    #[test]
    fn paths_agree_on_simple_spectrum(seed in any::<u64>(), k in 1usize..=6, fi in 0usize..CORPUS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Diagonalizable::random(&mut rng, k, 1e-2, 1e2);
        let f = spec(&CORPUS[fi]);
        let a = calc_diag(&f, &d.x, &tol()).unwrap().value;
        let b = calc_newton(&f, &d.x, &tol()).unwrap().value;
        let e = calc_extended(&f, &d.x, &tol()).unwrap().value;
        let scale = 1.0 + op_norm(&a);
        prop_assert!(op_norm(&(&a - &b)) <= 1e-7 * scale);
        prop_assert!(op_norm(&(&a - &e)) <= 1e-7 * scale);
    }

    #[test]
    fn two_by_two_closed_form(seed in any::<u64>(), fi in 0usize..CORPUS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Diagonalizable::random(&mut rng, 2, 1e-2, 1e2);
        let e = &CORPUS[fi];
        let f = spec(e);
        let fa = calc_auto(&f, &d.x, &tol()).unwrap().value;
        let (z, w) = (d.eigs[0], d.eigs[1]);
        let dzw = ((e.eval)(w) - (e.eval)(z)) / (w - z);
        let closed = &MatrixC::identity(2).scale((e.eval)(z)) + &d.x.shifted(-z).scale(dzw);
        let scale = (1.0 + op_norm(&fa)) * cond(&d.p);
        prop_assert!(op_norm(&(&fa - &closed)) <= 1e-8 * scale);
        prop_assert!((fa.trace() - (e.eval)(z) - (e.eval)(w)).norm() <= 1e-8 * scale);
    }

    #[test]
    fn polynomial_exactness(seed in any::<u64>(), k in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Diagonalizable::random(&mut rng, k, 1e-2, 1e2);
        let coeffs: Vec<f64> = (0..k).map(|_| rng.random_range(-2.0..2.0)).collect();
        let text: Vec<String> = coeffs.iter().enumerate().map(|(i, c)| format!("({c})*z^{i}")).collect();
        let f = FunctionSpec::expression(&text.join(" + "), DomainSpec::WholePlane).unwrap();
        let cs: Vec<C> = coeffs.iter().map(|&c| C::new(c, 0.0)).collect();
        let want = mat_poly_eval(&cs, &d.x);
        let got = calc_auto(&f, &d.x, &tol()).unwrap().value;
        prop_assert!(op_norm(&(&got - &want)) <= 1e-8 * (1.0 + op_norm(&want)) * cond(&d.p));
    }

    #[test]
    fn divided_differences_are_symmetric(seed in any::<u64>(), k in 1usize..=7, fi in 0usize..CORPUS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nodes = common::separated_nodes(&mut rng, k, 2.0, 0.1);
        let f = spec(&CORPUS[fi]);
        let a = dd_value(&f, &nodes).unwrap();
        let oracle = common::lagrange_dd(CORPUS[fi].eval, &nodes);
        nodes.reverse();
        nodes.rotate_left(k / 2);
        let b = dd_value(&f, &nodes).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()));
        prop_assert!((a - oracle).norm() <= 1e-8 * (1.0 + a.norm()));
    }

    #[test]
    fn opitz_corner(seed in any::<u64>(), k in 2usize..=6, fi in 0usize..CORPUS.len(), ei in 0usize..3) {
        let eps = [1e-2, 1.0, 10.0][ei];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nodes = common::separated_nodes(&mut rng, k, 2.0, 0.1);
        let f = spec(&CORPUS[fi]);
        let a = opitz_matrix(&nodes, eps).unwrap();
        let corner = corner_of(&calc_auto(&f, &a, &tol()).unwrap().value);
        let amp = eps.powi(k as i32 - 1);
        let want = common::lagrange_dd(CORPUS[fi].eval, &nodes) * amp;
        // absolute floor follows the amplified rounding of the f(z_i)
        let fmax = nodes.iter().map(|&z| (CORPUS[fi].eval)(z).norm()).fold(0.0, f64::max);
        prop_assert!((corner - want).norm() <= 1e-7 * want.norm() + 1e-12 * amp * (1.0 + fmax), "{corner} vs {want}");
    }
}

#[test]
fn exp_of_swap_matrix() {
    let x = MatrixC::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
    let f = spec(&CORPUS[0]);
    let v = calc_auto(&f, &x, &tol()).unwrap().value;
    let (ch, sh) = (1f64.cosh(), 1f64.sinh());
    let want = MatrixC::from_real_rows(2, &[ch, sh, sh, ch]).unwrap();
    assert!(op_norm(&(&v - &want)) <= 1e-12);
}

#[test]
fn exp_of_nilpotent_plus_zero() {
    let mut x = MatrixC::zeros(3);
    x.set(0, 1, C::new(1.0, 0.0));
    let f = spec(&CORPUS[0]);
    let v = calc_auto(&f, &x, &tol()).unwrap().value;
    let want = &MatrixC::identity(3) + &x;
    assert!(op_norm(&(&v - &want)) <= 1e-12);
}
