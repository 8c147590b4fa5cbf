//! Closed-form families tied to the adjoint semigroup, with stored tail
//! bounds.
//!
//! - `f_k`: `f_hat(0) = 1`, `f_hat(n) = (n+1)^{-k} - n^{-k}`; satisfies
//!   `W_n^* f_k = n^{-k} f_k`.
//! - `g_k`: `g_hat(n) = (n+1)^{-k}`; satisfies `(1 - z) g_k = f_k`.
//! - `phi(j, s) = -(1/s) ((j+1)^{1-s} - j^{1-s})` with `phi(0, s) = -1/s`;
//!   these are the coefficients of the kernels below and vanish for
//!   `j >= 1` at `s = 1`.
//! - `kappa_s`: coefficient `j` equals `phi(j, conj(s))`, defined for
//!   `Re s > 1/2`; satisfies `W_n^* kappa_s = n^{1 - conj(s)} kappa_s`, an
//!   eigenvalue of modulus `n^{1 - Re s}`.
//! - `h_k = (1/(1-z)) log((1 + z + ... + z^{k-1}) / k)`, generated through
//!   the closed form `log((1 - z^k)/(k(1 - z))) = -log k + sum_j c_j z^j`
//!   with `c_j = (1 - k [k | j]) / j`, then cumulative sums.
//!
//! Every generator fills the whole requested storage with true
//! coefficients (trusted degree = storage degree) and attaches an l2 bound
//! on the discarded tail, derived by integral comparison.
//!
//! Powers `n^w` always mean `exp(w ln n)` on the principal branch.

use num_complex::Complex64;

use crate::error::Error;
use crate::hardy::CoeffVector;

/// `n^w` for integer `n >= 1` on the principal branch.
pub fn int_pow(n: u64, w: Complex64) -> Complex64 {
    debug_assert!(n >= 1);
    (w * (n as f64).ln()).exp()
}

/// A sequence `lambda_n` with `lambda_1 = 1`, meant to be completely
/// multiplicative. Multiplicativity itself is property-tested, not proven
/// at construction.
pub struct MultiplicativeSequence {
    eval: Box<dyn Fn(u64) -> Complex64 + Send + Sync>,
    certified_l2_diff: bool,
}

impl MultiplicativeSequence {
    /// Wraps an evaluator. `certified_l2_diff` asserts that the difference
    /// sequence `lambda_{n+1} - lambda_n` is square-summable, which the
    /// eigenvector builder requires.
    pub fn new(
        eval: impl Fn(u64) -> Complex64 + Send + Sync + 'static,
        certified_l2_diff: bool,
    ) -> Result<Self, Error> {
        let at_one = eval(1);
        if (at_one - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidParam(format!(
                "multiplicative sequence must have lambda_1 = 1, got {at_one}"
            )));
        }
        Ok(MultiplicativeSequence {
            eval: Box::new(eval),
            certified_l2_diff,
        })
    }

    /// `lambda_n = n^w`. The difference sequence decays like `n^{Re w - 1}`,
    /// so it is certified square-summable exactly when `Re w < 1/2`.
    pub fn power(w: Complex64) -> Self {
        MultiplicativeSequence {
            eval: Box::new(move |n| int_pow(n, w)),
            certified_l2_diff: w.re < 0.5,
        }
    }

    /// The constant sequence 1 (the eigenvalue family of the constants).
    pub fn constant_one() -> Self {
        MultiplicativeSequence {
            eval: Box::new(|_| Complex64::new(1.0, 0.0)),
            certified_l2_diff: true,
        }
    }

    pub fn value(&self, n: u64) -> Complex64 {
        assert!(n >= 1, "sequences are indexed from 1");
        (self.eval)(n)
    }

    pub fn certified_l2_diff(&self) -> bool {
        self.certified_l2_diff
    }
}

/// Descriptor for the generated families; knows how to build its vector,
/// what eigenvalue (if any) it carries, and whether its tail decays slowly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenFamilySpec {
    F { k: u32, degree: usize },
    G { k: u32, degree: usize },
    Kappa { s: Complex64, degree: usize },
    H { k: u32, degree: usize },
}

impl EigenFamilySpec {
    pub fn generate(&self) -> Result<CoeffVector, Error> {
        match *self {
            EigenFamilySpec::F { k, degree } => make_f(k, degree),
            EigenFamilySpec::G { k, degree } => make_g(k, degree),
            EigenFamilySpec::Kappa { s, degree } => make_kappa(s, degree),
            EigenFamilySpec::H { k, degree } => make_h(k, degree),
        }
    }

    /// Adjoint eigenvalue under `W_n^*`, for the families that have one.
    pub fn eigenvalue(&self, n: u64) -> Option<Complex64> {
        match *self {
            EigenFamilySpec::F { k, .. } => {
                Some(int_pow(n, Complex64::new(-(k as f64), 0.0)))
            }
            EigenFamilySpec::Kappa { s, .. } => {
                Some(int_pow(n, Complex64::new(1.0, 0.0) - s.conj()))
            }
            _ => None,
        }
    }

    /// True when the stored tail bound decays no faster than `D^{-1/2}`,
    /// which front ends surface as a warning in report metadata.
    pub fn slow_tail(&self) -> bool {
        match *self {
            EigenFamilySpec::F { .. } => false,
            EigenFamilySpec::G { k, .. } => k == 1,
            EigenFamilySpec::Kappa { s, .. } => s.re <= 1.0,
            EigenFamilySpec::H { .. } => true,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            EigenFamilySpec::F { k, .. } => format!("f{k}"),
            EigenFamilySpec::G { k, .. } => format!("g{k}"),
            EigenFamilySpec::Kappa { s, .. } => format!("kappa({}+{}i)", s.re, s.im),
            EigenFamilySpec::H { k, .. } => format!("h{k}"),
        }
    }
}

/// `f_k` truncated at `degree`, with tail bound
/// `sqrt(k^2 / ((2k+1) D^{2k+1}))` from `|f_hat(n)| <= k n^{-(k+1)}`.
pub fn make_f(k: u32, degree: usize) -> Result<CoeffVector, Error> {
    if k < 1 {
        return Err(Error::InvalidParam("family f requires k >= 1".into()));
    }
    if degree < 1 {
        return Err(Error::InvalidParam("family f requires degree >= 1".into()));
    }
    let kf = k as f64;
    let mut coeffs = Vec::with_capacity(degree + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    for n in 1..=degree {
        let v = ((n + 1) as f64).powi(-(k as i32)) - (n as f64).powi(-(k as i32));
        coeffs.push(Complex64::new(v, 0.0));
    }
    let d = degree as f64;
    let tail = kf / (2.0 * kf + 1.0).sqrt() * d.powf(-(kf + 0.5));
    CoeffVector::from_parts(coeffs, degree + 1, false, tail)
}

/// `g_k` truncated at `degree`, with tail bound
/// `sqrt((2k-1)^{-1} (D+1)^{-(2k-1)})`. For `k = 1` this decays like
/// `D^{-1/2}`; the descriptor flags it as slow.
pub fn make_g(k: u32, degree: usize) -> Result<CoeffVector, Error> {
    if k < 1 {
        return Err(Error::InvalidParam("family g requires k >= 1".into()));
    }
    if degree < 1 {
        return Err(Error::InvalidParam("family g requires degree >= 1".into()));
    }
    let kf = k as f64;
    let coeffs = (0..=degree)
        .map(|n| Complex64::new(((n + 1) as f64).powi(-(k as i32)), 0.0))
        .collect();
    let d1 = (degree + 1) as f64;
    let tail = d1.powf(-(kf - 0.5)) / (2.0 * kf - 1.0).sqrt();
    CoeffVector::from_parts(coeffs, degree + 1, false, tail)
}

/// `phi(j, s) = -(1/s)((j+1)^{1-s} - j^{1-s})`, with the `j = 0` case
/// `-1/s` (the term `0^{1-s}` is taken as 0). Vanishes for `j >= 1` when
/// `s = 1`.
pub fn phi(j: usize, s: Complex64) -> Result<Complex64, Error> {
    if s == Complex64::ZERO {
        return Err(Error::InvalidParam("phi is undefined at s = 0".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    if j == 0 {
        return Ok(-one / s);
    }
    let w = one - s;
    Ok(-(int_pow(j as u64 + 1, w) - int_pow(j as u64, w)) / s)
}

/// The kernel vector `kappa_s` truncated at `degree`: coefficient `j` is
/// `phi(j, conj(s))`. Requires `Re s > 1/2`. The tail bound comes from
/// `|phi_j(conj s)| <= (|1-s| / |s|) j^{-Re s}` by the mean value bound on
/// the increment, integrated beyond `D`.
pub fn make_kappa(s: Complex64, degree: usize) -> Result<CoeffVector, Error> {
    if !(s.re > 0.5) {
        return Err(Error::InvalidParam(format!(
            "kappa requires Re s > 1/2, got Re s = {}",
            s.re
        )));
    }
    if degree < 1 {
        return Err(Error::InvalidParam("kappa requires degree >= 1".into()));
    }
    let sbar = s.conj();
    let mut coeffs = Vec::with_capacity(degree + 1);
    for j in 0..=degree {
        let v = phi(j, sbar).expect("Re s > 1/2 implies s != 0");
        coeffs.push(v);
    }
    let sigma = s.re;
    let big_c = (Complex64::new(1.0, 0.0) - s).norm() / s.norm();
    let d = degree as f64;
    let tail = big_c * d.powf(-(sigma - 0.5)) / (2.0 * sigma - 1.0).sqrt();
    CoeffVector::from_parts(coeffs, degree + 1, false, tail)
}

/// `h_k` truncated at `degree`, through the log expansion and cumulative
/// sums. Requires `k >= 2` and `degree >= 2k` (the tail derivation below
/// needs room).
///
/// Tail bound: writing `h_hat_k(m) = H_m - H_floor(m/k) - log k` with
/// harmonic numbers `H`, partial summation gives `|h_hat_k(m)| <= 4k/m`
/// for `m >= 2k`, hence an l2 tail of at most `4k / sqrt(D)`.
pub fn make_h(k: u32, degree: usize) -> Result<CoeffVector, Error> {
    if k < 2 {
        return Err(Error::InvalidParam("family h requires k >= 2".into()));
    }
    if degree < 2 * k as usize {
        return Err(Error::InvalidParam(format!(
            "family h requires degree >= 2k = {}",
            2 * k
        )));
    }
    let kf = k as f64;
    let mut log_coeffs = Vec::with_capacity(degree + 1);
    log_coeffs.push(Complex64::new(-kf.ln(), 0.0));
    for j in 1..=degree {
        let num = if j % (k as usize) == 0 { 1.0 - kf } else { 1.0 };
        log_coeffs.push(Complex64::new(num / j as f64, 0.0));
    }
    let log_vec = CoeffVector::from_parts(log_coeffs, degree + 1, false, f64::INFINITY)?;
    let h = log_vec.cumsum();
    h.with_tail_bound(4.0 * kf / (degree as f64).sqrt())
}

/// Common eigenvector of every `W_n^*` built from a multiplicative
/// sequence: `f_hat(0) = f0`, `f_hat(n) = (lambda_{n+1} - lambda_n) f0`.
/// Then `W_n^* f = lambda_n f` for all n. The tail is unknown (it depends
/// on the sequence); callers with decay knowledge attach a bound.
pub fn make_common_eigenvector(
    lambda: &MultiplicativeSequence,
    f0: Complex64,
    degree: usize,
) -> Result<CoeffVector, Error> {
    if f0 == Complex64::ZERO {
        return Err(Error::InvalidParam(
            "common eigenvector requires f_hat(0) != 0".into(),
        ));
    }
    if !lambda.certified_l2_diff() {
        return Err(Error::InvalidParam(
            "common eigenvector requires a sequence with certified square-summable differences"
                .into(),
        ));
    }
    let mut coeffs = Vec::with_capacity(degree + 1);
    coeffs.push(f0);
    for n in 1..=degree as u64 {
        coeffs.push((lambda.value(n + 1) - lambda.value(n)) * f0);
    }
    CoeffVector::from_parts(coeffs, degree + 1, false, f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::apply_w_star;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent oracle for log series coefficients: with `p_0 != 0` the
    /// coefficients of `q = log p` obey
    /// `m q_m p_0 = m p_m - sum_{j=1}^{m-1} j q_j p_{m-j}`.
    fn log_series_oracle(k: u32, m_max: usize) -> Vec<f64> {
        let ku = k as usize;
        let p: Vec<f64> = (0..=m_max)
            .map(|j| if j < ku { 1.0 / k as f64 } else { 0.0 })
            .collect();
        let mut q = vec![0.0; m_max + 1];
        q[0] = (1.0 / k as f64).ln();
        for m in 1..=m_max {
            let mut acc = m as f64 * p[m];
            for j in 1..m {
                acc -= j as f64 * q[j] * p[m - j];
            }
            q[m] = acc / (m as f64 * p[0]);
        }
        q
    }

    #[test]
    fn f_has_the_stated_coefficients() {
        let f1 = make_f(1, 10).unwrap();
        assert_eq!(f1.coeff(0), c(1.0, 0.0));
        assert_eq!(f1.coeff(1), c(0.5 - 1.0, 0.0));
        assert_relative_eq!(f1.coeff(2).re, 1.0 / 3.0 - 0.5, max_relative = 1e-15);
    }

    #[test]
    fn f_is_an_adjoint_eigenvector() {
        for (n, k) in [(2usize, 1u32), (3, 2), (5, 3)] {
            let d = 4000;
            let f = make_f(k, d).unwrap();
            let wf = apply_w_star(n, &f).unwrap();
            let lambda = (n as f64).powi(-(k as i32));
            let resid = CoeffVector::lin_comb(&[
                (c(1.0, 0.0), &wf),
                (c(-lambda, 0.0), &f.truncated(wf.degree())),
            ])
            .unwrap();
            let bound = resid.tail_bound();
            assert!(
                resid.norm().value() <= 10.0 * bound,
                "n = {n}, k = {k}: {} vs {}",
                resid.norm().value(),
                bound
            );
        }
    }

    #[test]
    fn f_tail_bound_dominates_the_dropped_mass() {
        let d = 200;
        let f_long = make_f(2, 40 * d).unwrap();
        let mut dropped = 0.0;
        for j in d + 1..=40 * d {
            dropped += f_long.coeff(j).norm_sqr();
        }
        let f = make_f(2, d).unwrap();
        assert!(dropped.sqrt() <= f.tail_bound());
    }

    #[test]
    fn g_has_the_stated_coefficients_and_unit_mean() {
        let g2 = make_g(2, 50).unwrap();
        assert_eq!(g2.coeff(0), c(1.0, 0.0));
        assert_eq!(g2.coeff(1), c(0.25, 0.0));
        assert_eq!(g2.inner_product(&CoeffVector::one(0)).value, c(1.0, 0.0));
    }

    #[test]
    fn one_minus_z_takes_g_to_f() {
        for k in 1..=3u32 {
            let d = 300;
            let g = make_g(k, d).unwrap();
            let f = make_f(k, d).unwrap();
            let moved = CoeffVector::lin_comb(&[(c(1.0, 0.0), &g), (c(-1.0, 0.0), &g.shift())])
                .unwrap();
            // Compare coefficientwise on the trusted range.
            assert!(moved.trusted_distance(&f) <= 1e-14);
        }
    }

    #[test]
    fn phi_special_values() {
        assert_eq!(phi(0, c(2.0, 0.0)).unwrap(), c(-0.5, 0.0));
        assert_relative_eq!(phi(1, c(2.0, 0.0)).unwrap().re, 0.25, max_relative = 1e-15);
        assert_eq!(phi(0, c(1.0, 0.0)).unwrap(), c(-1.0, 0.0));
        for j in 1..6 {
            assert!(phi(j, c(1.0, 0.0)).unwrap().norm() <= 1e-15);
        }
        assert!(phi(3, Complex64::ZERO).is_err());
    }

    #[test]
    fn kappa_rejects_the_left_half_strip() {
        assert!(make_kappa(c(0.5, 2.0), 100).is_err());
        assert!(make_kappa(c(0.3, 0.0), 100).is_err());
        assert!(make_kappa(c(0.75, 3.0), 100).is_ok());
    }

    #[test]
    fn kappa_is_an_adjoint_eigenvector() {
        for s in [c(0.75, 3.0), c(1.0, 2.0), c(0.9, -1.0)] {
            let d = 6000;
            let kappa = make_kappa(s, d).unwrap();
            for n in [2usize, 3] {
                let wk = apply_w_star(n, &kappa).unwrap();
                let lambda = int_pow(n as u64, c(1.0, 0.0) - s.conj());
                let resid = CoeffVector::lin_comb(&[
                    (c(1.0, 0.0), &wk),
                    (-lambda, &kappa.truncated(wk.degree())),
                ])
                .unwrap();
                let nk = kappa.norm().value();
                assert!(
                    resid.norm().value() <= 1e-12 * nk,
                    "s = {s}, n = {n}: {}",
                    resid.norm().value()
                );
                // Eigenvalue modulus n^{1 - Re s}.
                assert_relative_eq!(
                    lambda.norm(),
                    (n as f64).powf(1.0 - s.re),
                    max_relative = 1e-13
                );
            }
        }
    }

    #[test]
    fn kappa_on_the_one_line_has_unimodular_eigenvalues() {
        let s = c(1.0, 2.0);
        let spec = EigenFamilySpec::Kappa { s, degree: 10 };
        for n in 2..=5u64 {
            let lambda = spec.eigenvalue(n).unwrap();
            assert_relative_eq!(lambda.norm(), 1.0, max_relative = 1e-14);
            // lambda = n^{i t} = exp(i t log n) for s = 1 + i t.
            let expected = c(0.0, 2.0 * (n as f64).ln()).exp();
            assert!((lambda - expected).norm() <= 1e-14);
        }
    }

    #[test]
    fn kappa_tail_bound_dominates_the_dropped_mass() {
        let s = c(0.75, 3.0);
        let d = 500;
        let long = make_kappa(s, 60 * d).unwrap();
        let mut dropped = 0.0;
        for j in d + 1..=60 * d {
            dropped += long.coeff(j).norm_sqr();
        }
        let short = make_kappa(s, d).unwrap();
        assert!(dropped.sqrt() <= short.tail_bound());
    }

    #[test]
    fn pairing_against_monomials_recovers_phi() {
        // <z^j, kappa_s> = phi(j, s): the defining normative identity.
        let s = c(0.8, 1.5);
        let kappa = make_kappa(s, 64).unwrap();
        for j in [0usize, 1, 5, 17] {
            let zj = CoeffVector::monomial(j, 64).unwrap();
            let got = zj.inner_product(&kappa).value;
            let want = phi(j, s).unwrap();
            assert!((got - want).norm() <= 1e-15, "j = {j}: {got} vs {want}");
        }
    }

    #[test]
    fn h_matches_hand_values_and_h2_identity() {
        let h2 = make_h(2, 100).unwrap();
        assert_relative_eq!(h2.coeff(0).re, -(2f64.ln()), max_relative = 1e-15);
        assert_relative_eq!(h2.coeff(1).re, 1.0 - 2f64.ln(), max_relative = 1e-14);
        let h3 = make_h(3, 100).unwrap();
        assert_relative_eq!(h3.coeff(0).re, -(3f64.ln()), max_relative = 1e-15);
    }

    #[test]
    fn h_agrees_with_the_log_recurrence_oracle() {
        for k in [2u32, 3, 5] {
            let m_max = 500;
            let q = log_series_oracle(k, m_max);
            // cumsum of the oracle log series gives the oracle h series.
            let mut acc = 0.0;
            let h = make_h(k, m_max).unwrap();
            for (m, qm) in q.iter().enumerate() {
                acc += qm;
                assert!(
                    (h.coeff(m).re - acc).abs() <= 1e-10,
                    "k = {k}, m = {m}: {} vs {acc}",
                    h.coeff(m).re
                );
                assert_eq!(h.coeff(m).im, 0.0);
            }
        }
    }

    #[test]
    fn h_coefficient_decay_supports_the_tail_constant() {
        // The stored bound uses |h_hat_k(m)| <= 4k/m for m >= 2k; verify a
        // healthy margin numerically.
        for k in [2u32, 3, 5, 11] {
            let d = 6000;
            let h = make_h(k, d).unwrap();
            for m in (2 * k as usize)..=d {
                let bound = 4.0 * k as f64 / m as f64;
                assert!(
                    h.coeff(m).re.abs() <= bound,
                    "k = {k}, m = {m}: {} vs {bound}",
                    h.coeff(m).re
                );
            }
        }
    }

    #[test]
    fn h_tail_bound_dominates_the_dropped_mass() {
        let k = 3u32;
        let d = 300;
        let long = make_h(k, 50 * d).unwrap();
        let mut dropped = 0.0;
        for j in d + 1..=50 * d {
            dropped += long.coeff(j).norm_sqr();
        }
        let short = make_h(k, d).unwrap();
        assert!(dropped.sqrt() <= short.tail_bound());
    }

    #[test]
    fn h_rejects_small_parameters() {
        assert!(make_h(1, 100).is_err());
        assert!(make_h(5, 9).is_err());
    }

    #[test]
    fn common_eigenvector_reproduces_f() {
        let k = 2u32;
        let lambda = MultiplicativeSequence::power(c(-(k as f64), 0.0));
        let v = make_common_eigenvector(&lambda, c(1.0, 0.0), 50).unwrap();
        let f = make_f(k, 50).unwrap();
        assert!(v.trusted_distance(&f) <= 1e-14);
    }

    #[test]
    fn common_eigenvector_reproduces_kappa_up_to_scale() {
        let s = c(0.8, 2.0);
        let lambda = MultiplicativeSequence::power(c(1.0, 0.0) - s.conj());
        // kappa has f_hat(0) = -1/conj(s) and the same increments.
        let f0 = -Complex64::new(1.0, 0.0) / s.conj();
        let v = make_common_eigenvector(&lambda, f0, 40).unwrap();
        let kappa = make_kappa(s, 40).unwrap();
        assert!(v.trusted_distance(&kappa) <= 1e-13);
    }

    #[test]
    fn common_eigenvector_is_an_eigenvector() {
        let lambda = MultiplicativeSequence::power(c(-1.5, 1.0));
        let v = make_common_eigenvector(&lambda, c(2.0, -1.0), 3000).unwrap();
        for n in [2usize, 3, 5] {
            let wv = apply_w_star(n, &v).unwrap();
            let lam = lambda.value(n as u64);
            let resid = CoeffVector::lin_comb(&[
                (c(1.0, 0.0), &wv),
                (-lam, &v.truncated(wv.degree())),
            ])
            .unwrap();
            assert!(resid.trusted_distance(&CoeffVector::zero(resid.degree())) <= 1e-12);
        }
    }

    #[test]
    fn constant_sequence_gives_the_constants() {
        let lambda = MultiplicativeSequence::constant_one();
        let v = make_common_eigenvector(&lambda, c(3.0, 0.0), 10).unwrap();
        assert_eq!(v.coeff(0), c(3.0, 0.0));
        for j in 1..=10 {
            assert_eq!(v.coeff(j), Complex64::ZERO);
        }
    }

    #[test]
    fn common_eigenvector_preconditions() {
        let ok = MultiplicativeSequence::power(c(-1.0, 0.0));
        assert!(make_common_eigenvector(&ok, Complex64::ZERO, 10).is_err());
        let uncertified = MultiplicativeSequence::power(c(0.9, 0.0));
        assert!(!uncertified.certified_l2_diff());
        assert!(make_common_eigenvector(&uncertified, c(1.0, 0.0), 10).is_err());
    }

    #[test]
    fn sequences_must_start_at_one() {
        assert!(MultiplicativeSequence::new(|_| c(2.0, 0.0), true).is_err());
        assert!(MultiplicativeSequence::new(|n| c(n as f64, 0.0) / c(n as f64, 0.0), true).is_ok());
    }

    #[test]
    fn power_sequences_are_multiplicative() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let lambda = MultiplicativeSequence::power(c(-0.7, 1.3));
        for _ in 0..200 {
            let m = rng.gen_range(1..=1000u64);
            let n = rng.gen_range(1..=1000u64);
            let lhs = lambda.value(m * n);
            let rhs = lambda.value(m) * lambda.value(n);
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }
    }
}
