//! Truncated Hardy-space vectors and the coefficient arithmetic everything
//! else builds on.
//!
//! An element `f(z) = sum f_hat(j) z^j` of H^2 is carried as a dense,
//! 0-based coefficient array `f_hat(0..=D)` plus truncation metadata:
//!
//! - the trusted degree `V <= D`: indices `0..=V` hold the represented
//!   function's true coefficients (up to rounding),
//! - an `exact` flag: the function *is* the stored polynomial of degree
//!   `<= V`, no tail exists,
//! - `tail_bound`: an upper bound on the l2 norm of the true coefficients
//!   above `V`, with `f64::INFINITY` standing for "unknown".
//!
//! The bracketing contract every operation preserves:
//! `sum_{0..V} |f_hat(j)|^2  <=  ||f||^2  <=  sum_{0..V} |f_hat(j)|^2 + tail_bound^2`.
//!
//! Stored coefficients above `V` are kept (they are useful diagnostics and
//! keep operator actions cheap) but no operation reads them into a trusted
//! region of a result.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Sentinel tail bound meaning "no bound is known".
pub const TAIL_UNKNOWN: f64 = f64::INFINITY;

/// A truncated H^2 element: dense coefficients with trust and tail metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    coeffs: Vec<Complex64>,
    /// Number of leading trusted coefficients, i.e. `V + 1`. Zero means no
    /// coefficient is trusted.
    trusted_len: usize,
    exact: bool,
    tail_bound: f64,
}

/// Result of an inner product: the trusted partial sum plus an error radius
/// bounding the contribution of both tails.
#[derive(Debug, Clone, Copy)]
pub struct InnerProduct {
    pub value: Complex64,
    pub error_radius: f64,
}

/// Result of a norm: the true norm lies in `[value, upper]`.
#[derive(Debug, Clone, Copy)]
pub struct NormBound {
    value: f64,
    upper: f64,
}

impl NormBound {
    /// Square root of the trusted partial sum (a lower bound on the norm).
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Upper bound from the tail metadata; infinite when the tail is unknown.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn radius(&self) -> f64 {
        self.upper - self.value
    }
}

/// `a * b` with the convention `0 * inf = 0`, used when a zero tail should
/// suppress an unknown factor.
fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// Neumaier compensated accumulator. Norms and inner products here routinely
/// run over millions of same-sign terms, where a naive fold loses enough
/// precision to break 1e-12 identity checks; compensation keeps the error at
/// a few ulps independent of length.
#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(self) -> f64 {
        self.sum + self.carry
    }
}

impl CoeffVector {
    /// Builds a vector from raw parts, validating every metadata invariant.
    pub fn from_parts(
        coeffs: Vec<Complex64>,
        trusted_len: usize,
        exact: bool,
        tail_bound: f64,
    ) -> Result<Self, Error> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParam(
                "coefficient array must hold at least the constant term".into(),
            ));
        }
        if trusted_len > coeffs.len() {
            return Err(Error::InvalidParam(format!(
                "trusted length {} exceeds storage length {}",
                trusted_len,
                coeffs.len()
            )));
        }
        if tail_bound.is_nan() || tail_bound < 0.0 {
            return Err(Error::InvalidParam(format!(
                "tail bound must be a nonnegative real, got {tail_bound}"
            )));
        }
        if exact && tail_bound != 0.0 {
            return Err(Error::InvalidParam(
                "exact vectors must carry tail bound 0".into(),
            ));
        }
        if exact && trusted_len != coeffs.len() {
            return Err(Error::InvalidParam(
                "exact vectors must trust every stored coefficient".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParam(
                "coefficients must be finite".into(),
            ));
        }
        Ok(CoeffVector {
            coeffs,
            trusted_len,
            exact,
            tail_bound,
        })
    }

    /// An exact polynomial: every stored coefficient trusted, no tail.
    pub fn exact_poly(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs a constant term");
        let trusted_len = coeffs.len();
        CoeffVector {
            coeffs,
            trusted_len,
            exact: true,
            tail_bound: 0.0,
        }
    }

    /// Exact polynomial from real coefficients.
    pub fn exact_poly_re(coeffs: &[f64]) -> Self {
        Self::exact_poly(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The exact zero function stored to `degree`.
    pub fn zero(degree: usize) -> Self {
        Self::exact_poly(vec![Complex64::ZERO; degree + 1])
    }

    /// The exact constant 1 stored to `degree`.
    pub fn one(degree: usize) -> Self {
        let mut c = vec![Complex64::ZERO; degree + 1];
        c[0] = Complex64::new(1.0, 0.0);
        Self::exact_poly(c)
    }

    /// The exact monomial `z^power` stored to `degree`.
    pub fn monomial(power: usize, degree: usize) -> Result<Self, Error> {
        if power > degree {
            return Err(Error::InvalidParam(format!(
                "monomial power {power} exceeds storage degree {degree}"
            )));
        }
        let mut c = vec![Complex64::ZERO; degree + 1];
        c[power] = Complex64::new(1.0, 0.0);
        Ok(Self::exact_poly(c))
    }

    /// Storage degree `D`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Trusted degree `V` as a signed integer; `-1` means nothing is trusted.
    pub fn valid_degree(&self) -> i64 {
        self.trusted_len as i64 - 1
    }

    pub fn trusted_len(&self) -> usize {
        self.trusted_len
    }

    pub fn has_trusted(&self) -> bool {
        self.trusted_len > 0
    }

    pub fn exact(&self) -> bool {
        self.exact
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn tail_known(&self) -> bool {
        self.tail_bound.is_finite()
    }

    /// All stored coefficients, trusted or not.
    pub fn stored(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// The trusted prefix `f_hat(0..=V)`.
    pub fn trusted(&self) -> &[Complex64] {
        &self.coeffs[..self.trusted_len]
    }

    /// Stored coefficient at index `j`; panics beyond storage.
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs[j]
    }

    /// Replaces the tail bound with a caller-derived one. The caller owns
    /// the correctness of the new bound.
    pub fn with_tail_bound(mut self, tail_bound: f64) -> Result<Self, Error> {
        if tail_bound.is_nan() || tail_bound < 0.0 {
            return Err(Error::InvalidParam(format!(
                "tail bound must be a nonnegative real, got {tail_bound}"
            )));
        }
        if self.exact && tail_bound != 0.0 {
            return Err(Error::InvalidParam(
                "exact vectors must carry tail bound 0".into(),
            ));
        }
        self.tail_bound = tail_bound;
        Ok(self)
    }

    /// `<f, g> = sum f_hat(j) conj(g_hat(j))` over the common trusted range,
    /// with an error radius `tail_f ||g||_up + tail_g ||f||_up` covering both
    /// tails (Cauchy-Schwarz).
    pub fn inner_product(&self, other: &CoeffVector) -> InnerProduct {
        let m = self.trusted_len.min(other.trusted_len);
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for j in 0..m {
            let term = self.coeffs[j] * other.coeffs[j].conj();
            re.add(term.re);
            im.add(term.im);
        }
        let radius = mul0(self.tail_bound, other.norm().upper())
            + mul0(other.tail_bound, self.norm().upper());
        InnerProduct {
            value: Complex64::new(re.total(), im.total()),
            error_radius: radius,
        }
    }

    /// Norm bracketing from the trusted partial sum and the tail bound.
    pub fn norm(&self) -> NormBound {
        let mut acc = Compensated::default();
        for c in self.trusted() {
            acc.add(c.norm_sqr());
        }
        let partial = acc.total();
        let value = partial.sqrt();
        let upper = if self.tail_bound == 0.0 {
            value
        } else {
            (partial + self.tail_bound * self.tail_bound).sqrt()
        };
        NormBound { value, upper }
    }

    /// `sum_i c_i v_i` elementwise over the union of storages.
    ///
    /// When every operand is exact the whole result is exact (coefficients
    /// beyond an operand's storage are true zeros). Otherwise the output
    /// trusts `min V_i`; trusted coefficients of longer operands above that
    /// bound are demoted to untrusted storage and their mass joins the tail
    /// bound, so the bracketing contract survives.
    pub fn lin_comb(terms: &[(Complex64, &CoeffVector)]) -> Result<CoeffVector, Error> {
        if terms.is_empty() {
            return Err(Error::EmptyCombination);
        }
        let out_len = terms.iter().map(|(_, v)| v.coeffs.len()).max().unwrap();
        let mut coeffs = vec![Complex64::ZERO; out_len];
        for (c, v) in terms {
            for (j, x) in v.coeffs.iter().enumerate() {
                coeffs[j] += c * x;
            }
        }
        let exact = terms.iter().all(|(_, v)| v.exact);
        if exact {
            return CoeffVector::from_parts(coeffs, out_len, true, 0.0);
        }
        let trusted_len = terms.iter().map(|(_, v)| v.trusted_len).min().unwrap();
        let mut tail_bound = 0.0;
        for (c, v) in terms {
            // l2 mass of v above the common trusted bound: demoted trusted
            // coefficients plus v's own tail. Exact operands hold true
            // zeros beyond storage and contribute nothing.
            let mut demoted = 0.0;
            for x in &v.coeffs[trusted_len..v.trusted_len] {
                demoted += x.norm_sqr();
            }
            let beyond = if v.tail_bound == 0.0 && demoted == 0.0 {
                0.0
            } else {
                (demoted + v.tail_bound * v.tail_bound).sqrt()
            };
            tail_bound += mul0(c.norm(), beyond);
        }
        CoeffVector::from_parts(coeffs, trusted_len, false, tail_bound)
    }

    /// `c * f`. Same metadata rules as a one-term `lin_comb`.
    pub fn scaled(&self, c: Complex64) -> CoeffVector {
        CoeffVector::lin_comb(&[(c, self)]).expect("single term combination")
    }

    /// Multiplication by `z`: coefficients move up one index within the same
    /// storage. A trusted top coefficient that falls off the end joins the
    /// tail bound; exactness survives only if nothing real was dropped.
    pub fn shift(&self) -> CoeffVector {
        let len = self.coeffs.len();
        let mut coeffs = vec![Complex64::ZERO; len];
        coeffs[1..].copy_from_slice(&self.coeffs[..len - 1]);
        if self.trusted_len == len {
            let dropped = self.coeffs[len - 1];
            let dropped_sq = dropped.norm_sqr();
            let tail_bound = if dropped_sq == 0.0 && self.tail_bound == 0.0 {
                0.0
            } else {
                (self.tail_bound * self.tail_bound + dropped_sq).sqrt()
            };
            let exact = self.exact && dropped_sq == 0.0;
            CoeffVector {
                coeffs,
                trusted_len: len,
                exact,
                tail_bound,
            }
        } else {
            CoeffVector {
                coeffs,
                trusted_len: self.trusted_len + 1,
                exact: self.exact,
                tail_bound: self.tail_bound,
            }
        }
    }

    /// Running coefficient sums, the truncated action of `1/(1-z)`.
    ///
    /// Trusted range is preserved (prefix sums of trusted coefficients are
    /// true coefficients of `f/(1-z)`), exactness is dropped and the tail is
    /// unknown; callers with analytic knowledge attach a bound afterwards
    /// via [`CoeffVector::with_tail_bound`].
    pub fn cumsum(&self) -> CoeffVector {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let mut acc = Complex64::ZERO;
        for c in &self.coeffs {
            acc += c;
            coeffs.push(acc);
        }
        CoeffVector {
            coeffs,
            trusted_len: self.trusted_len,
            exact: false,
            tail_bound: TAIL_UNKNOWN,
        }
    }

    /// Drops storage above `new_degree`. Dropped trusted mass joins the tail
    /// bound; `new_degree >= D` is the identity.
    pub fn truncated(&self, new_degree: usize) -> CoeffVector {
        if new_degree >= self.degree() {
            return self.clone();
        }
        let keep = new_degree + 1;
        let coeffs = self.coeffs[..keep].to_vec();
        let trusted_len = self.trusted_len.min(keep);
        // Trusted coefficients at indices keep..V are real coefficients of
        // the represented function; dropping them grows the tail.
        let mut dropped_sq = 0.0;
        for x in &self.coeffs[keep.min(self.trusted_len)..self.trusted_len] {
            dropped_sq += x.norm_sqr();
        }
        let tail_bound = if dropped_sq == 0.0 {
            self.tail_bound
        } else {
            (self.tail_bound * self.tail_bound + dropped_sq).sqrt()
        };
        let exact = self.exact && dropped_sq == 0.0;
        CoeffVector {
            coeffs,
            trusted_len,
            exact,
            tail_bound,
        }
    }

    /// Pads storage with zeros up to `new_degree`. For exact vectors the
    /// padding is trusted (the true coefficients are zero); otherwise it is
    /// untrusted storage and the metadata is unchanged.
    pub fn extended(&self, new_degree: usize) -> CoeffVector {
        if new_degree <= self.degree() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(new_degree + 1, Complex64::ZERO);
        let trusted_len = if self.exact {
            new_degree + 1
        } else {
            self.trusted_len
        };
        CoeffVector {
            coeffs,
            trusted_len,
            exact: self.exact,
            tail_bound: self.tail_bound,
        }
    }

    /// l2 distance over the common trusted prefix, ignoring both tails.
    /// This is the raw diagnostic used by orbit and period experiments.
    pub fn trusted_distance(&self, other: &CoeffVector) -> f64 {
        let m = self.trusted_len.min(other.trusted_len);
        let mut acc = Compensated::default();
        for j in 0..m {
            acc.add((self.coeffs[j] - other.coeffs[j]).norm_sqr());
        }
        acc.total().sqrt()
    }
}

/// Serialization schema for a [`CoeffVector`], shared by every front end.
///
/// `valid_degree` is `V` (so `-1` encodes "no trusted coefficients") and the
/// coefficient arrays both hold exactly `degree + 1` entries. File input and
/// output itself lives in the front end; this type only fixes the shape.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffVectorFile {
    pub degree: u64,
    pub valid_degree: i64,
    pub exact: bool,
    pub tail_bound: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl CoeffVectorFile {
    /// Validates the schema and builds the vector. Error messages name the
    /// first offending field.
    pub fn into_vector(self) -> Result<CoeffVector, Error> {
        let len = self.degree as usize + 1;
        if self.re.len() != len {
            return Err(Error::InvalidParam(format!(
                "field 're': expected {} entries for degree {}, got {}",
                len,
                self.degree,
                self.re.len()
            )));
        }
        if self.im.len() != len {
            return Err(Error::InvalidParam(format!(
                "field 'im': expected {} entries for degree {}, got {}",
                len,
                self.degree,
                self.im.len()
            )));
        }
        if self.valid_degree < -1 || self.valid_degree > self.degree as i64 {
            return Err(Error::InvalidParam(format!(
                "field 'valid_degree': must lie in [-1, {}], got {}",
                self.degree, self.valid_degree
            )));
        }
        if self.tail_bound.is_nan() || self.tail_bound < 0.0 || self.tail_bound.is_infinite() {
            return Err(Error::InvalidParam(format!(
                "field 'tail_bound': must be a finite nonnegative real, got {}",
                self.tail_bound
            )));
        }
        for (j, x) in self.re.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidParam(format!(
                    "field 're'[{j}]: coefficient must be finite, got {x}"
                )));
            }
        }
        for (j, x) in self.im.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidParam(format!(
                    "field 'im'[{j}]: coefficient must be finite, got {x}"
                )));
            }
        }
        let coeffs = self
            .re
            .iter()
            .zip(self.im.iter())
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        CoeffVector::from_parts(
            coeffs,
            (self.valid_degree + 1) as usize,
            self.exact,
            self.tail_bound,
        )
    }

    /// Schema view of a vector. Fails only for unknown tails, which have no
    /// file representation.
    pub fn from_vector(v: &CoeffVector) -> Result<Self, Error> {
        if !v.tail_known() {
            return Err(Error::UnknownTail(
                "vectors with unknown tail bounds cannot be serialized".into(),
            ));
        }
        Ok(CoeffVectorFile {
            degree: v.degree() as u64,
            valid_degree: v.valid_degree(),
            exact: v.exact(),
            tail_bound: v.tail_bound(),
            re: v.stored().iter().map(|c| c.re).collect(),
            im: v.stored().iter().map(|c| c.im).collect(),
        })
    }
}
