//! Exact coefficient actions of the weighted composition operators.
//!
//! Forward action: `W_n f(z) = (1 + z + ... + z^{n-1}) f(z^n)`, which at the
//! coefficient level copies `f_hat(i)` into the n output indices
//! `ni..ni+n-1`, so `(W_n f)_hat(j) = f_hat(floor(j/n))`.
//!
//! Adjoint action: `(W_n^* f)_hat(k) = f_hat(nk) + ... + f_hat(nk+n-1)`,
//! the block sums of length n.
//!
//! Consequences used as test oracles everywhere: `W_n^* W_n = n I`,
//! `||W_n f||^2 = n ||f||^2`, `W_m W_n = W_{mn}`, and `W_n^* 1 = 1`.
//!
//! Iterates collapse through the semigroup law, `W_n^m = W_{n^m}`; the
//! m-fold loop is kept alongside and their agreement is itself a test.

use num_complex::Complex64;

use crate::error::Error;
use crate::hardy::CoeffVector;

/// Which action of the pair to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// `W_n`
    Forward,
    /// `W_n^*`
    Adjoint,
}

/// A member of the semigroup (or its adjoint) by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub n: usize,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidParam(
                "operator index n must be at least 1".into(),
            ));
        }
        Ok(OperatorSpec { kind, n })
    }

    /// Applies the operator once, with full output expansion for `W_n`.
    pub fn apply(&self, f: &CoeffVector) -> Result<CoeffVector, Error> {
        match self.kind {
            OperatorKind::Forward => apply_w(self.n, f),
            OperatorKind::Adjoint => apply_w_star(self.n, f),
        }
    }
}

/// Range of output indices dropped by a capped forward application, with
/// the l2 mass of the trusted ones (already folded into the tail bound).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationInfo {
    pub first_dropped: usize,
    pub last_dropped: usize,
    pub dropped_trusted_l2: f64,
}

/// Result of [`apply_w_capped`].
#[derive(Debug, Clone)]
pub struct WOutput {
    pub vector: CoeffVector,
    pub truncation: Option<TruncationInfo>,
}

/// `W_n f` with the full output degree `n (D + 1) - 1`.
///
/// Trusted degree maps `V -> nV + n - 1`, the tail scales by `sqrt(n)`
/// (every true coefficient is copied n times), exactness is preserved.
pub fn apply_w(n: usize, f: &CoeffVector) -> Result<CoeffVector, Error> {
    if n == 0 {
        return Err(Error::InvalidParam(
            "operator index n must be at least 1".into(),
        ));
    }
    let in_len = f.stored().len();
    let out_len = n
        .checked_mul(in_len)
        .ok_or_else(|| Error::IndexOverflow(format!("n * (D + 1) with n = {n}, D + 1 = {in_len}")))?;
    let mut coeffs = Vec::with_capacity(out_len);
    for x in f.stored() {
        for _ in 0..n {
            coeffs.push(*x);
        }
    }
    let tail = if f.tail_bound() == 0.0 {
        0.0
    } else {
        (n as f64).sqrt() * f.tail_bound()
    };
    CoeffVector::from_parts(coeffs, n * f.trusted_len(), f.exact(), tail)
}

/// `W_n f` truncated to storage degree `max_degree`. Dropped trusted
/// coefficients are reported and their mass joins the tail bound; nothing
/// is dropped silently.
pub fn apply_w_capped(n: usize, f: &CoeffVector, max_degree: usize) -> Result<WOutput, Error> {
    let full = apply_w(n, f)?;
    if max_degree >= full.degree() {
        return Ok(WOutput {
            vector: full,
            truncation: None,
        });
    }
    let keep = max_degree + 1;
    let mut dropped_trusted_l2 = 0.0;
    for x in &full.trusted()[keep.min(full.trusted_len())..] {
        dropped_trusted_l2 += x.norm_sqr();
    }
    let info = TruncationInfo {
        first_dropped: keep,
        last_dropped: full.degree(),
        dropped_trusted_l2: dropped_trusted_l2.sqrt(),
    };
    Ok(WOutput {
        vector: full.truncated(max_degree),
        truncation: Some(info),
    })
}

/// `W_n^* f` by block sums of length n.
///
/// A block is trusted only when all n members are trusted, so the trusted
/// length maps `V + 1 -> floor((V + 1) / n)`; a result with no trusted
/// coefficients is legal and flagged through `has_trusted()`. For exact
/// inputs the missing block members are true zeros and the result stays
/// exact with trusted length `ceil((V + 1) / n)`.
pub fn apply_w_star(n: usize, f: &CoeffVector) -> Result<CoeffVector, Error> {
    if n == 0 {
        return Err(Error::InvalidParam(
            "operator index n must be at least 1".into(),
        ));
    }
    let in_len = f.stored().len();
    let out_len = in_len.div_ceil(n);
    let mut coeffs = Vec::with_capacity(out_len);
    for k in 0..out_len {
        let lo = n * k;
        let hi = (lo + n).min(in_len);
        let mut acc = Complex64::ZERO;
        for j in lo..hi {
            acc += f.stored()[j];
        }
        coeffs.push(acc);
    }
    if f.exact() {
        // Exact inputs trust all storage, so every block sum is a true
        // coefficient (members past storage are true zeros).
        return CoeffVector::from_parts(coeffs, out_len, true, 0.0);
    }
    let trusted_len = f.trusted_len() / n;
    // True coefficients past the last full trusted block: the leftover
    // trusted ones (fewer than n) plus the tail; each output block obeys
    // |B(k)|^2 <= n * sum of its members' squares.
    let mut leftover_sq = 0.0;
    for x in &f.trusted()[n * trusted_len..] {
        leftover_sq += x.norm_sqr();
    }
    let tail = if f.tail_bound() == 0.0 && leftover_sq == 0.0 {
        0.0
    } else {
        ((n as f64) * (leftover_sq + f.tail_bound() * f.tail_bound())).sqrt()
    };
    CoeffVector::from_parts(coeffs, trusted_len, false, tail)
}

/// `n^m` with overflow detection.
fn pow_index(n: usize, m: u32) -> Result<usize, Error> {
    n.checked_pow(m)
        .ok_or_else(|| Error::IndexOverflow(format!("n^m with n = {n}, m = {m}")))
}

/// m-th iterate through the semigroup collapse `W_n^m = W_{n^m}` (and
/// `(W_n^*)^m = W_{n^m}^*`). `m = 0` is the identity.
pub fn apply_iterate(spec: &OperatorSpec, m: u32, f: &CoeffVector) -> Result<CoeffVector, Error> {
    if m == 0 {
        return Ok(f.clone());
    }
    let nm = pow_index(spec.n, m)?;
    match spec.kind {
        OperatorKind::Forward => apply_w(nm, f),
        OperatorKind::Adjoint => apply_w_star(nm, f),
    }
}

/// m-th iterate by the literal m-fold loop. Kept as an independent route;
/// agreement with [`apply_iterate`] is asserted in tests.
pub fn apply_iterate_loop(
    spec: &OperatorSpec,
    m: u32,
    f: &CoeffVector,
) -> Result<CoeffVector, Error> {
    // Fail fast on budgets the collapsed route would also reject.
    pow_index(spec.n, m)?;
    let mut v = f.clone();
    for _ in 0..m {
        v = spec.apply(&v)?;
    }
    Ok(v)
}
