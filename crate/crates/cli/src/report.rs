//! Report envelope shared by every experiment command. Each report echoes
//! the full run configuration (seed included) and embeds a block of
//! operator-identity self-checks computed at run time, so an artifact on
//! its own says whether the binary that produced it was computing the
//! basic identities correctly.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wcslab_core::dynamics::random_exact_poly;
use wcslab_core::hardy::CoeffVector;
use wcslab_core::semigroup::{apply_w, apply_w_star};

use crate::io::json_num;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub seed: u64,
    pub params: BTreeMap<&'static str, String>,
}

impl RunConfig {
    pub fn new(subcommand: &'static str, seed: u64) -> Self {
        RunConfig {
            subcommand,
            seed,
            params: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &'static str, value: impl Display) -> Self {
        self.params.insert(key, value.to_string());
        self
    }

    pub fn param_opt(self, key: &'static str, value: Option<impl Display>) -> Self {
        match value {
            Some(v) => self.param(key, v),
            None => self,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Identity spot checks embedded in every report: the adjoint inverts the
/// forward map up to the factor n, the adjoint fixes the constant, and the
/// two maps form a dual pair under the inner product.
pub fn run_self_checks(seed: u64) -> Vec<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_exact_poly(&mut rng, 32);
    let g = random_exact_poly(&mut rng, 96);
    let mut checks = Vec::new();

    let back = apply_w_star(2, &apply_w(2, &f).expect("forward")).expect("adjoint");
    let mut err: f64 = 0.0;
    for j in 0..=f.degree() {
        err = err.max((back.coeff(j) - f.coeff(j) * 2.0).norm());
    }
    checks.push(SelfCheck {
        name: "adjoint_after_forward_is_n_times_identity",
        passed: err <= 1e-12,
        detail: format!("n = 2, max coefficient error {}", crate::io::fmt_float(err)),
    });

    let one = CoeffVector::one(0);
    let fixed = apply_w_star(5, &one).expect("adjoint");
    let ok = fixed.exact()
        && fixed.stored() == [Complex64::new(1.0, 0.0)];
    checks.push(SelfCheck {
        name: "adjoint_fixes_the_constant",
        passed: ok,
        detail: if ok {
            "exact".into()
        } else {
            format!("got {:?}", fixed.stored())
        },
    });

    let wf = apply_w(3, &f).expect("forward");
    let wsg = apply_w_star(3, &g).expect("adjoint");
    let lhs = wf.inner_product(&g).value;
    let rhs = f.inner_product(&wsg).value;
    let scale = wf.norm().value() * g.norm().value() + 1.0;
    let gap = (lhs - rhs).norm() / scale;
    checks.push(SelfCheck {
        name: "forward_and_adjoint_are_a_dual_pair",
        passed: gap <= 1e-12,
        detail: format!("n = 3, relative pairing gap {}", crate::io::fmt_float(gap)),
    });

    checks
}

pub fn all_passed(checks: &[SelfCheck]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Standard report layout around a command-specific `results` object.
pub fn envelope(config: &RunConfig, checks: &[SelfCheck], results: Value) -> Value {
    let params: Value = config
        .params
        .iter()
        .map(|(k, v)| ((*k).to_string(), Value::from(v.clone())))
        .collect::<serde_json::Map<String, Value>>()
        .into();
    json!({
        "command": config.subcommand,
        "config": {
            "params": params,
            "seed": config.seed,
        },
        "self_checks": checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
        "results": results,
    })
}

/// Norm sequence entry with its bracketing radius (null when unknown).
pub fn norm_entry(step: usize, value: f64, radius: f64) -> Value {
    json!({
        "step": step,
        "value": json_num(value),
        "radius": json_num(radius),
    })
}
