//! Orbit, periodic-point, Gram-rank, spectral-radius and expansivity
//! experiments for the semigroup and its adjoints.
//!
//! Everything here is a finite-horizon surrogate for an infinite-time
//! notion, and says so in its output: orbit norms carry propagated error
//! radii, the visit density is a prefix-minimum lower estimate, and Gram
//! ranks are ranks at an explicit eigenvalue threshold.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::Error;
use crate::families::make_kappa;
use crate::hardy::{CoeffVector, NormBound};
use crate::semigroup::{apply_w, apply_w_star, OperatorKind, OperatorSpec};

/// Default cap on the coefficients a single orbit vector may occupy.
pub const DEFAULT_MAX_LEN: usize = 1 << 24;

/// Options for [`run_orbit`].
#[derive(Debug, Clone, Copy)]
pub struct OrbitOptions {
    /// Record a snapshot of the iterate every `stride` steps (stride 1
    /// keeps every step, including step 0). `None` keeps norms only.
    pub snapshot_stride: Option<usize>,
    /// Storage budget per iterate; forward orbits stop before exceeding it.
    pub max_len: usize,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            snapshot_stride: None,
            max_len: DEFAULT_MAX_LEN,
        }
    }
}

/// Why an orbit ended before the requested step count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStop {
    /// The next iterate would have no trusted coefficients.
    TrustedRangeExhausted { at_step: usize },
    /// The next iterate would exceed the storage budget.
    DegreeBudget { at_step: usize },
}

/// Norms (with error radii) and optional snapshots along one orbit.
#[derive(Debug)]
pub struct OrbitRecord {
    pub operator: OperatorSpec,
    pub requested_steps: usize,
    /// `norms[m]` brackets the norm of the m-th iterate; `norms[0]` is the
    /// start vector's norm. Length is `completed_steps + 1`.
    pub norms: Vec<NormBound>,
    pub snapshots: Vec<(usize, CoeffVector)>,
    pub stopped: Option<OrbitStop>,
}

impl OrbitRecord {
    pub fn completed_steps(&self) -> usize {
        self.norms.len() - 1
    }
}

/// Applies `T = W_n` or `W_n^*` repeatedly, recording norms and snapshots.
/// Runs that exhaust trust or the degree budget return a truncated record
/// with an explicit stop flag rather than failing.
pub fn run_orbit(
    spec: &OperatorSpec,
    start: &CoeffVector,
    steps: usize,
    opts: &OrbitOptions,
) -> Result<OrbitRecord, Error> {
    if let Some(stride) = opts.snapshot_stride {
        if stride == 0 {
            return Err(Error::InvalidParam(
                "snapshot stride must be at least 1".into(),
            ));
        }
    }
    let mut norms = vec![start.norm()];
    let mut snapshots = Vec::new();
    if opts.snapshot_stride.is_some() {
        snapshots.push((0, start.clone()));
    }
    let mut v = start.clone();
    let mut stopped = None;
    for m in 1..=steps {
        if spec.kind == OperatorKind::Forward {
            let next_len = v.stored().len().checked_mul(spec.n);
            match next_len {
                Some(l) if l <= opts.max_len => {}
                _ => {
                    stopped = Some(OrbitStop::DegreeBudget { at_step: m });
                    break;
                }
            }
        }
        let next = spec.apply(&v)?;
        if !next.has_trusted() {
            stopped = Some(OrbitStop::TrustedRangeExhausted { at_step: m });
            break;
        }
        v = next;
        norms.push(v.norm());
        if let Some(stride) = opts.snapshot_stride {
            if m % stride == 0 {
                snapshots.push((m, v.clone()));
            }
        }
    }
    Ok(OrbitRecord {
        operator: *spec,
        requested_steps: steps,
        norms,
        snapshots,
        stopped,
    })
}

/// Finite-horizon lower estimate of the visit density of an orbit in the
/// ball around `target`.
///
/// Counts hits among the snapshots `0..=N` and takes the minimum of
/// `hits / (N + 1)` over every recorded prefix. A period-p orbit starting
/// at `target` scores exactly `1/p`; an orbit that never enters the ball
/// scores 0. Distances are trusted-range distances. Requires stride-1
/// snapshots.
pub fn visit_density(
    record: &OrbitRecord,
    target: &CoeffVector,
    radius: f64,
) -> Result<f64, Error> {
    if !(radius >= 0.0) {
        return Err(Error::InvalidParam(
            "visit radius must be nonnegative".into(),
        ));
    }
    let m = record.norms.len();
    let stride_one = record.snapshots.len() == m
        && record.snapshots.iter().enumerate().all(|(i, (s, _))| *s == i);
    if !stride_one {
        return Err(Error::MissingSnapshots);
    }
    let mut density: f64 = 1.0;
    let mut hits = 0usize;
    for (n, (_, snap)) in record.snapshots.iter().enumerate() {
        if snap.trusted_distance(target) <= radius {
            hits += 1;
        }
        density = density.min(hits as f64 / (n + 1) as f64);
    }
    Ok(density)
}

/// A candidate periodic point of `W_n^*`: the kernel at `s = 1 + i t` with
/// `t = pi * alpha / log n`, `alpha = p/q` in lowest terms. The adjoint
/// eigenvalue there is `e^{i pi alpha}`, so the predicted period is the
/// least `m >= 1` with `alpha * m` an even integer: `q` when `p` is even,
/// `2q` when `p` is odd.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicPointSpec {
    pub n: usize,
    /// Reduced numerator of alpha (sign preserved).
    pub p: i64,
    /// Reduced denominator of alpha, at least 1.
    pub q: i64,
    pub t: f64,
    pub s: Complex64,
    pub predicted_period: u32,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl PeriodicPointSpec {
    pub fn new(n: usize, p: i64, q: i64) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::InvalidParam(
                "periodic points need n >= 2".into(),
            ));
        }
        if q < 1 {
            return Err(Error::InvalidParam(
                "alpha denominator must be at least 1".into(),
            ));
        }
        let g = gcd(p.unsigned_abs(), q as u64).max(1) as i64;
        let (p, q) = (p / g, q / g);
        let t = std::f64::consts::PI * p as f64 / (q as f64 * (n as f64).ln());
        let predicted_period = if p % 2 == 0 { q as u32 } else { 2 * q as u32 };
        Ok(PeriodicPointSpec {
            n,
            p,
            q,
            t,
            s: Complex64::new(1.0, t),
            predicted_period,
        })
    }

    /// `e^{i pi alpha}`, the eigenvalue of `W_n^*` at the kernel.
    pub fn eigenvalue(&self) -> Complex64 {
        Complex64::new(0.0, std::f64::consts::PI * self.p as f64 / self.q as f64).exp()
    }
}

/// Outcome of a period detection run. `found == None` means no iterate
/// returned within the predicted period at this degree and tolerance; the
/// residual profile says how close each step came.
#[derive(Debug, Clone)]
pub struct PeriodResult {
    pub n: usize,
    pub predicted_period: u32,
    pub found: Option<u32>,
    /// `residuals[m - 1]` is the trusted-range distance after m steps.
    pub residuals: Vec<f64>,
    pub degree: usize,
    pub tol: f64,
}

/// Builds the kernel at the spec's `s`, iterates the adjoint, and returns
/// the first step whose trusted-range return distance is below `tol`.
///
/// Requires the kernel truncation tail at this degree to sit below
/// `tol / 4`, so the decision quantity is dominated by the return distance
/// rather than the truncation.
pub fn detect_period(
    spec: &PeriodicPointSpec,
    degree: usize,
    tol: f64,
) -> Result<PeriodResult, Error> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParam("tolerance must be positive".into()));
    }
    let kappa = make_kappa(spec.s, degree)?;
    if kappa.tail_bound() > tol / 4.0 {
        return Err(Error::InvalidParam(format!(
            "degree {} too small for tolerance {}: kernel tail bound {:.3e} exceeds tol/4",
            degree,
            tol,
            kappa.tail_bound()
        )));
    }
    let mut v = kappa.clone();
    let mut residuals = Vec::new();
    let mut found = None;
    for m in 1..=spec.predicted_period {
        v = apply_w_star(spec.n, &v)?;
        if !v.has_trusted() {
            return Err(Error::TrustedRangeExhausted(format!(
                "adjoint iterate {m} has no trusted coefficients at degree {degree}"
            )));
        }
        let r = v.trusted_distance(&kappa);
        residuals.push(r);
        if r <= tol {
            found = Some(m);
            break;
        }
    }
    Ok(PeriodResult {
        n: spec.n,
        predicted_period: spec.predicted_period,
        found,
        residuals,
        degree,
        tol,
    })
}

/// Gram matrix of a family with its Hermitian eigenvalue diagnostics.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub labels: Vec<String>,
    pub gram: DMatrix<Complex64>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Count of eigenvalues above `tau`.
    pub effective_rank: usize,
    pub tau: f64,
    /// `max / min` eigenvalue, infinite when the minimum is not positive.
    pub condition_estimate: f64,
}

impl GramReport {
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, Error> {
        if labels.len() != self.labels.len() {
            return Err(Error::MismatchedRanges(format!(
                "{} labels for {} vectors",
                labels.len(),
                self.labels.len()
            )));
        }
        self.labels = labels;
        Ok(self)
    }
}

/// Builds the (exactly Hermitian) Gram matrix of trusted inner products and
/// its eigenvalue diagnostics. `tau` defaults to `1e-8 * max_eigenvalue`.
///
/// All vectors must share one storage degree and trusted range, so every
/// entry is a sum over the same index set.
pub fn span_gram(vectors: &[CoeffVector], tau: Option<f64>) -> Result<GramReport, Error> {
    if vectors.is_empty() {
        return Err(Error::InvalidParam(
            "gram needs at least one vector".into(),
        ));
    }
    let d0 = vectors[0].degree();
    let t0 = vectors[0].trusted_len();
    for (i, v) in vectors.iter().enumerate() {
        if v.degree() != d0 || v.trusted_len() != t0 {
            return Err(Error::MismatchedRanges(format!(
                "vector {i} has degree {} and trusted length {}, expected {d0} and {t0}",
                v.degree(),
                v.trusted_len()
            )));
        }
    }
    let k = vectors.len();
    let mut gram = DMatrix::<Complex64>::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let val = vectors[i].inner_product(&vectors[j]).value;
            gram[(i, j)] = val;
            if i != j {
                gram[(j, i)] = val.conj();
            }
        }
    }
    let mut eigenvalues: Vec<f64> = gram
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let min_eigenvalue = eigenvalues[0];
    let max_eigenvalue = eigenvalues[eigenvalues.len() - 1];
    let tau = tau.unwrap_or(1e-8 * max_eigenvalue.max(0.0));
    let effective_rank = eigenvalues.iter().filter(|&&l| l > tau).count();
    let condition_estimate = if min_eigenvalue > 0.0 {
        max_eigenvalue / min_eigenvalue
    } else {
        f64::INFINITY
    };
    Ok(GramReport {
        labels: (0..k).map(|i| format!("v{i}")).collect(),
        gram,
        eigenvalues,
        min_eigenvalue,
        max_eigenvalue,
        effective_rank,
        tau,
        condition_estimate,
    })
}

/// `(||(W_n^*)^m e_m||)^{1/m}` for the unit probes `e_m = W_{n^m} 1 / n^{m/2}`.
///
/// Since `W^* W = (index) I` exactly, every entry equals `sqrt(n)` up to
/// rounding; the sequence is the Gelfand-limit diagnostic for the spectral
/// radius and must sit within 1e-3 of `sqrt(n)`.
pub fn spectral_radius_probe(n: usize, m_max: u32) -> Result<Vec<f64>, Error> {
    if n < 1 {
        return Err(Error::InvalidParam(
            "spectral radius probe needs n >= 1".into(),
        ));
    }
    if m_max < 1 {
        return Err(Error::InvalidParam(
            "spectral radius probe needs m_max >= 1".into(),
        ));
    }
    let top = n
        .checked_pow(m_max)
        .ok_or_else(|| Error::IndexOverflow(format!("n^m with n = {n}, m = {m_max}")))?;
    if top > DEFAULT_MAX_LEN {
        return Err(Error::DegreeBudget {
            needed: top,
            budget: DEFAULT_MAX_LEN,
        });
    }
    let one = CoeffVector::one(0);
    let mut values = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let nm = n.pow(m);
        let probe = apply_w(nm, &one)?
            .scaled(Complex64::new(1.0 / (nm as f64).sqrt(), 0.0));
        let iterated = apply_w_star(nm, &probe)?;
        values.push(iterated.norm().value().powf(1.0 / m as f64));
    }
    Ok(values)
}

/// Uniform-expansivity measurements for `W_k`.
#[derive(Debug, Clone)]
pub struct ExpansivityReport {
    pub k: usize,
    pub trials: usize,
    pub degree: usize,
    pub m_max: u32,
    pub seed: u64,
    /// Largest relative deviation of `||W_k^m f||` from `k^{m/2} ||f||`.
    pub max_rel_err: f64,
    /// Per-m largest relative deviation across trials.
    pub per_m_rel_err: Vec<f64>,
    /// First m with `||W_k^m f|| >= 2 ||f||`, measured on the trials.
    pub witness_measured: u32,
    /// First m with `k^m >= 4`, the closed form `ceil(2 log 2 / log k)`.
    pub witness_formula: u32,
}

/// Random polynomial with coefficients uniform on the complex unit square,
/// exact metadata.
pub fn random_exact_poly(rng: &mut impl Rng, degree: usize) -> CoeffVector {
    let coeffs = (0..=degree)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    CoeffVector::exact_poly(coeffs)
}

/// Random exact polynomial scaled to unit norm.
pub fn random_unit_poly(rng: &mut impl Rng, degree: usize) -> CoeffVector {
    loop {
        let f = random_exact_poly(rng, degree);
        let norm = f.norm().value();
        if norm > 1e-6 {
            return f.scaled(Complex64::new(1.0 / norm, 0.0));
        }
    }
}

/// Checks `||W_k^m f|| = k^{m/2} ||f||` on seeded random unit polynomials
/// of degree up to `degree`, and reports the first doubling step.
pub fn expansivity_check(
    k: usize,
    trials: usize,
    degree: usize,
    m_max: u32,
    seed: u64,
) -> Result<ExpansivityReport, Error> {
    if k < 2 {
        return Err(Error::InvalidParam("expansivity needs k >= 2".into()));
    }
    if trials < 1 {
        return Err(Error::InvalidParam("expansivity needs trials >= 1".into()));
    }
    let top = k
        .checked_pow(m_max)
        .and_then(|p| p.checked_mul(degree + 1))
        .ok_or_else(|| Error::IndexOverflow(format!("k^m (D+1) with k = {k}, m = {m_max}")))?;
    if top > DEFAULT_MAX_LEN {
        return Err(Error::DegreeBudget {
            needed: top,
            budget: DEFAULT_MAX_LEN,
        });
    }
    let witness_formula = {
        let mut m = 1u32;
        let mut p = k;
        while p < 4 {
            p *= k;
            m += 1;
        }
        m
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_m_rel_err = vec![0.0f64; m_max as usize];
    let mut witness_measured = 0u32;
    for _ in 0..trials {
        let deg = rng.gen_range(0..=degree);
        let f = random_unit_poly(&mut rng, deg);
        let base = f.norm().value();
        let mut v = f.clone();
        let mut trial_witness = None;
        for m in 1..=m_max {
            v = apply_w(k, &v)?;
            let expected = (k as f64).powi(m as i32).sqrt() * base;
            let got = v.norm().value();
            let rel = (got - expected).abs() / expected;
            let slot = &mut per_m_rel_err[m as usize - 1];
            if rel > *slot {
                *slot = rel;
            }
            // At the doubling step the norm hits 2 ||f|| exactly in real
            // arithmetic, so admit rounding well below the per-step accuracy.
            if trial_witness.is_none() && got >= 2.0 * base * (1.0 - 1e-9) {
                trial_witness = Some(m);
            }
        }
        if let Some(w) = trial_witness {
            witness_measured = witness_measured.max(w);
        }
    }
    let max_rel_err = per_m_rel_err.iter().copied().fold(0.0, f64::max);
    Ok(ExpansivityReport {
        k,
        trials,
        degree,
        m_max,
        seed,
        max_rel_err,
        per_m_rel_err,
        witness_measured,
        witness_formula,
    })
}
