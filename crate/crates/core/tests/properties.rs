//! Randomized structural properties tying the modules together: inner
//! product algebra, operator identities, series calculus, and solver
//! invariances that must hold for every input, not just the curated cases.

use num_complex::Complex64;
use proptest::prelude::*;
use wcslab_core::families::MultiplicativeSequence;
use wcslab_core::hardy::CoeffVector;
use wcslab_core::rh::{dist_to_span, dist_to_span_dense};
use wcslab_core::semigroup::{apply_w, apply_w_star};

fn cpx() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn poly(max_len: usize) -> impl Strategy<Value = CoeffVector> {
    prop::collection::vec(cpx(), 1..=max_len).prop_map(CoeffVector::exact_poly)
}

/// Fixed-length variant so families share a storage degree.
fn poly_exact_len(len: usize) -> impl Strategy<Value = CoeffVector> {
    prop::collection::vec(cpx(), len).prop_map(CoeffVector::exact_poly)
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn inner_product_is_conjugate_symmetric(f in poly(40), g in poly(40)) {
        let fg = f.inner_product(&g).value;
        let gf = g.inner_product(&f).value;
        let scale = f.norm().value() * g.norm().value() + 1.0;
        prop_assert!((fg - gf.conj()).norm() <= 1e-14 * scale);
    }

    #[test]
    fn inner_product_of_a_vector_with_itself_is_its_squared_norm(f in poly(40)) {
        let ip = f.inner_product(&f).value;
        prop_assert_eq!(ip.im, 0.0);
        let n = f.norm().value();
        prop_assert!((ip.re - n * n).abs() <= 1e-13 * (1.0 + ip.re));
    }

    #[test]
    fn lin_comb_matches_coefficientwise_arithmetic(
        f in poly(30),
        g in poly(30),
        a in cpx(),
        b in cpx(),
    ) {
        let h = CoeffVector::lin_comb(&[(a, &f), (b, &g)]).unwrap();
        let at = |v: &CoeffVector, j: usize| {
            if j <= v.degree() { v.coeff(j) } else { Complex64::ZERO }
        };
        for j in 0..=h.degree() {
            let expect = a * at(&f, j) + b * at(&g, j);
            prop_assert!((h.coeff(j) - expect).norm() <= 1e-14);
        }
    }

    #[test]
    fn forward_and_adjoint_are_a_dual_pair(f in poly(30), g in poly(90), n in 1usize..=6) {
        let wf = apply_w(n, &f).unwrap();
        let wsg = apply_w_star(n, &g).unwrap();
        let lhs = wf.inner_product(&g).value;
        let rhs = f.inner_product(&wsg).value;
        let scale = wf.norm().value() * g.norm().value() + 1.0;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale, "{lhs} vs {rhs}");
    }

    #[test]
    fn adjoint_after_forward_multiplies_by_n(f in poly(50), n in 1usize..=9) {
        let back = apply_w_star(n, &apply_w(n, &f).unwrap()).unwrap();
        prop_assert_eq!(back.degree(), f.degree());
        for j in 0..=f.degree() {
            let expect = f.coeff(j) * n as f64;
            prop_assert!(
                (back.coeff(j) - expect).norm() <= 1e-13 * (1.0 + expect.norm()),
                "coefficient {j}"
            );
        }
    }

    #[test]
    fn forward_maps_compose_multiplicatively(f in poly(25), m in 1usize..=5, n in 1usize..=5) {
        let nested = apply_w(m, &apply_w(n, &f).unwrap()).unwrap();
        let collapsed = apply_w(m * n, &f).unwrap();
        // Pure coefficient copies on both routes, so the match is bitwise.
        prop_assert_eq!(nested.stored(), collapsed.stored());
        prop_assert_eq!(nested.trusted_len(), collapsed.trusted_len());
    }

    #[test]
    fn adjoint_maps_compose_multiplicatively(f in poly(100), m in 1usize..=4, n in 1usize..=4) {
        let nested = apply_w_star(m, &apply_w_star(n, &f).unwrap()).unwrap();
        let collapsed = apply_w_star(m * n, &f).unwrap();
        let scale = f.norm().value() * (m * n) as f64 + 1.0;
        for j in 0..collapsed.trusted_len().min(nested.trusted_len()) {
            prop_assert!(
                (nested.coeff(j) - collapsed.coeff(j)).norm() <= 1e-13 * scale,
                "coefficient {j}"
            );
        }
    }

    #[test]
    fn forward_scales_every_norm_by_sqrt_n(f in poly(60), n in 1usize..=9) {
        let wf = apply_w(n, &f).unwrap();
        let expect = (n as f64).sqrt() * f.norm().value();
        prop_assert!((wf.norm().value() - expect).abs() <= 1e-13 * (1.0 + expect));
    }

    #[test]
    fn shift_preserves_inner_products_of_padded_vectors(
        mut fc in prop::collection::vec(cpx(), 1..30),
        mut gc in prop::collection::vec(cpx(), 1..30),
    ) {
        // A zero top coefficient makes the shift an exact isometry at
        // fixed storage.
        let len = fc.len().max(gc.len()) + 1;
        fc.resize(len, Complex64::ZERO);
        gc.resize(len, Complex64::ZERO);
        let f = CoeffVector::exact_poly(fc);
        let g = CoeffVector::exact_poly(gc);
        let before = f.inner_product(&g).value;
        let after = f.shift().inner_product(&g.shift()).value;
        prop_assert!((before - after).norm() <= 1e-15 * (1.0 + before.norm()));
    }

    #[test]
    fn cumsum_inverts_the_one_minus_z_product(f in poly(50)) {
        // d = (1 - z) f has one more coefficient; summing it back
        // telescopes to f (with fp cancellation noise).
        let d_len = f.degree() + 2;
        let mut d = vec![Complex64::ZERO; d_len];
        for j in 0..d_len {
            let cur = if j <= f.degree() { f.coeff(j) } else { Complex64::ZERO };
            let prev = if j >= 1 { f.coeff(j - 1) } else { Complex64::ZERO };
            d[j] = cur - prev;
        }
        let summed = CoeffVector::exact_poly(d).cumsum();
        for j in 0..=f.degree() {
            prop_assert!((summed.coeff(j) - f.coeff(j)).norm() <= 1e-13);
        }
        prop_assert!(summed.coeff(f.degree() + 1).norm() <= 1e-13);
    }

    #[test]
    fn truncation_brackets_the_full_norm(f in poly(60), keep in 0usize..60) {
        let g = f.truncated(keep);
        let full = f.norm().value();
        prop_assert!(g.norm().value() <= full * (1.0 + 1e-14));
        prop_assert!(g.norm().upper() >= full * (1.0 - 1e-14));
    }

    #[test]
    fn completely_multiplicative_powers_factor(
        re in -2.0f64..0.49,
        im in -3.0f64..3.0,
        m in 1u64..=900,
        n in 1u64..=900,
    ) {
        let seq = MultiplicativeSequence::power(Complex64::new(re, im));
        let prod = seq.value(m) * seq.value(n);
        let joint = seq.value(m * n);
        prop_assert!(
            (prod - joint).norm() <= 1e-12 * (1.0 + joint.norm()),
            "{prod} vs {joint}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn span_distance_ignores_basis_rescaling(
        basis_coeffs in prop::collection::vec(poly_exact_len(24), 3),
        target in poly_exact_len(24),
        scales in prop::collection::vec((0.2f64..3.0, -1.0f64..1.0), 3),
    ) {
        let refs: Vec<&CoeffVector> = basis_coeffs.iter().collect();
        let solved = match dist_to_span(&target, &basis_coeffs, 0.0) {
            Ok(s) => s,
            Err(_) => return Ok(()), // degenerate random basis
        };
        prop_assume!(solved.condition < 1e8);
        let rescaled: Vec<CoeffVector> = refs
            .iter()
            .zip(&scales)
            .map(|(b, (r, i))| b.scaled(Complex64::new(*r, *i) + Complex64::new(0.5, 0.0)))
            .collect();
        let again = dist_to_span(&target, &rescaled, 0.0).unwrap();
        prop_assert!(
            (solved.distance - again.distance).abs() <= 1e-9 * (1.0 + solved.distance),
            "{} vs {}",
            solved.distance,
            again.distance
        );
    }

    #[test]
    fn the_two_distance_routes_agree_on_random_input(
        basis_coeffs in prop::collection::vec(poly_exact_len(20), 2),
        target in poly_exact_len(20),
    ) {
        let solved = match dist_to_span(&target, &basis_coeffs, 0.0) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        prop_assume!(solved.condition < 1e8);
        let oracle = dist_to_span_dense(&target, &basis_coeffs).unwrap();
        prop_assert!(
            (solved.distance - oracle).abs() <= 1e-8 * (1.0 + oracle),
            "{} vs {oracle}",
            solved.distance
        );
    }
}
