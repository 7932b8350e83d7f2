//! The invariant suite: every identity of the other modules, run against
//! one instance and collected into a [`VerificationReport`].
//!
//! Each check draws from its own seeded stream, so reports depend only on
//! `(instance, seed, tolerance)`. Checks run concurrently; the report is
//! sorted by check id.

use std::fmt;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::element::{BasisKey, CoefficientElement, L1Element, L2Vector};
use crate::fusion_data::{
    self, conjugate_character, fuse_characters, validate, CharacterRingElement, QuantumGroupData, Violation,
};
use crate::instances::Instance;
use crate::l1_algebra::{
    self as l1, beta1, character_l1, convolve, involute, is_central, lambda_hat, matrix_unit, quantum_character_l1,
    CentralityMode,
};
use crate::l2_space::{
    self as l2, a_map, b_map, beta2_haar, beta2_haar_via_coproduct, character_l2, convolve_l2,
    expand_quantum_characters, inner, is_central_l2, pq_projection, quantum_character_l2, restrict_r, star,
};
use crate::random::{self, rng_for};
use crate::{Error, Result};

/// Number of random samples per randomized check.
pub const SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: CheckStatus,
    pub worst_residual: Option<f64>,
    pub witness: Option<String>,
    /// Why the check was skipped.
    pub reason: Option<String>,
    /// The check passes by detecting a violation.
    pub expected_failure: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub instance: String,
    pub seed: u64,
    pub tolerance: f64,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "instance {}  seed {}  tolerance {:e}",
            self.instance, self.seed, self.tolerance
        )?;
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(5).max(5);
        writeln!(f, "{:<width$}  {:<7}  {:>10}  detail", "check", "status", "residual")?;
        for c in &self.checks {
            let status = match (c.status, c.expected_failure) {
                (CheckStatus::Pass, true) => "pass*",
                (CheckStatus::Pass, false) => "pass",
                (CheckStatus::Fail, _) => "FAIL",
                (CheckStatus::Skipped, _) => "skipped",
            };
            let residual = c.worst_residual.map_or("-".to_string(), |r| format!("{r:.2e}"));
            let detail = c.reason.as_deref().or(c.witness.as_deref()).unwrap_or("");
            writeln!(f, "{:<width$}  {:<7}  {:>10}  {}", c.id, status, residual, detail)?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} checks, {} failed{}",
            self.checks.len(),
            failed,
            if self.checks.iter().any(|c| c.expected_failure) {
                " (* = expected violation detected)"
            } else {
                ""
            }
        )
    }
}

enum Outcome {
    Pass {
        residual: Option<f64>,
        witness: Option<String>,
    },
    Fail {
        residual: Option<f64>,
        witness: String,
    },
    Skipped(String),
}

/// Running maximum of residuals, remembering where it occurred.
struct Worst {
    residual: f64,
    witness: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Self {
            residual: 0.0,
            witness: None,
        }
    }

    fn see(&mut self, r: f64, at: impl FnOnce() -> String) {
        if r > self.residual || r.is_nan() {
            self.residual = r;
            self.witness = Some(at());
        }
    }

    fn finish(self, tol: f64) -> Outcome {
        if self.residual <= tol {
            Outcome::Pass {
                residual: Some(self.residual),
                witness: None,
            }
        } else {
            Outcome::Fail {
                residual: Some(self.residual),
                witness: self.witness.unwrap_or_default(),
            }
        }
    }
}

struct Ctx<'a> {
    inst: &'a Instance,
    g: QuantumGroupData,
    tol: f64,
    basis: Vec<BasisKey>,
}

type CheckFn = fn(&Ctx, &mut ChaCha8Rng) -> Result<Outcome>;

struct Check {
    id: &'static str,
    run: CheckFn,
    /// Whether, on this instance, the check is an expected-violation check.
    expected_failure: fn(&Ctx) -> bool,
}

fn never(_: &Ctx) -> bool {
    false
}

fn non_kac(ctx: &Ctx) -> bool {
    !ctx.g.is_kac()
}

const CHECKS: &[Check] = &[
    Check {
        id: "instance.irrep_data",
        run: check_irrep_data,
        expected_failure: never,
    },
    Check {
        id: "fusion.consistency",
        run: check_fusion_consistency,
        expected_failure: never,
    },
    Check {
        id: "fusion.character_ring",
        run: check_character_ring,
        expected_failure: never,
    },
    Check {
        id: "l2.orthogonality_basis",
        run: check_orthogonality_basis,
        expected_failure: never,
    },
    Check {
        id: "l2.orthogonality_characters",
        run: check_orthogonality_characters,
        expected_failure: never,
    },
    Check {
        id: "l1.idempotent_quantum_characters",
        run: check_idem,
        expected_failure: never,
    },
    Check {
        id: "l1.two_sided_action",
        run: check_two_sided_action,
        expected_failure: never,
    },
    Check {
        id: "l1.associativity",
        run: check_l1_associativity,
        expected_failure: never,
    },
    Check {
        id: "l1.involution",
        run: check_l1_involution,
        expected_failure: never,
    },
    Check {
        id: "l1.matrix_units",
        run: check_matrix_units,
        expected_failure: never,
    },
    Check {
        id: "l1.lambda_hat_homomorphism",
        run: check_lambda_hat,
        expected_failure: never,
    },
    Check {
        id: "l1.centrality_modes_agree",
        run: check_modes_agree,
        expected_failure: never,
    },
    Check {
        id: "l1.center_is_quantum_character_span",
        run: check_center_span,
        expected_failure: never,
    },
    Check {
        id: "l1.quantum_character_centrality",
        run: check_quantum_character_centrality,
        expected_failure: never,
    },
    Check {
        id: "l1.plain_character_centrality",
        run: check_plain_character_centrality,
        expected_failure: non_kac,
    },
    Check {
        id: "l1.convolution_oracle",
        run: check_convolution_oracle,
        expected_failure: never,
    },
    Check {
        id: "l1.beta1_idempotent",
        run: check_beta1_idempotent,
        expected_failure: never,
    },
    Check {
        id: "l1.beta1_range",
        run: check_beta1_range,
        expected_failure: never,
    },
    Check {
        id: "l1.beta1_module",
        run: check_beta1_module,
        expected_failure: never,
    },
    Check {
        id: "l1.beta1_oracle",
        run: check_beta1_oracle,
        expected_failure: never,
    },
    Check {
        id: "l1.beta1_contractivity",
        run: check_beta1_contractivity,
        expected_failure: never,
    },
    Check {
        id: "l2.ab_transport",
        run: check_ab_transport,
        expected_failure: never,
    },
    Check {
        id: "l2.convolution_associativity",
        run: check_l2_associativity,
        expected_failure: never,
    },
    Check {
        id: "l2.b_homomorphism",
        run: check_b_homomorphism,
        expected_failure: never,
    },
    Check {
        id: "l2.beta2_route_equality",
        run: check_beta2_routes,
        expected_failure: never,
    },
    Check {
        id: "l2.beta2_idempotent",
        run: check_beta2_idempotent,
        expected_failure: never,
    },
    Check {
        id: "l2.beta2_self_adjoint",
        run: check_beta2_self_adjoint,
        expected_failure: never,
    },
    Check {
        id: "l2.beta2_range",
        run: check_beta2_range,
        expected_failure: never,
    },
    Check {
        id: "l2.pq_idempotent",
        run: check_pq_idempotent,
        expected_failure: never,
    },
    Check {
        id: "l2.pq_self_adjoint",
        run: check_pq_self_adjoint,
        expected_failure: never,
    },
    Check {
        id: "l2.pq_centrality",
        run: check_pq_centrality,
        expected_failure: never,
    },
    Check {
        id: "l2.pq_kac_coincidence",
        run: check_pq_kac,
        expected_failure: never,
    },
    Check {
        id: "l2.plain_character_centrality",
        run: check_plain_character_centrality_l2,
        expected_failure: non_kac,
    },
    Check {
        id: "l2.expansion_identity",
        run: check_expansion,
        expected_failure: never,
    },
    Check {
        id: "l2.star_involution",
        run: check_star_involution,
        expected_failure: never,
    },
    Check {
        id: "l2.star_characters",
        run: check_star_characters,
        expected_failure: never,
    },
    Check {
        id: "l2.star_isometry_characters",
        run: check_star_isometry,
        expected_failure: never,
    },
    Check {
        id: "l2.star_traciality",
        run: check_star_traciality,
        expected_failure: never,
    },
    Check {
        id: "l2.restriction_formula",
        run: check_restriction_formula,
        expected_failure: never,
    },
    Check {
        id: "l2.restriction_idempotent",
        run: check_restriction_idempotent,
        expected_failure: never,
    },
];

/// Ids of all registered checks, in registry order.
pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

/// Runs every registered check. The instance must pass structural checks;
/// numeric invariants that fail show up as failed checks.
pub fn run_suite(inst: &Instance, seed: u64, tolerance: f64) -> Result<VerificationReport> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let g = inst.data.with_tolerance(tolerance)?;
    let ctx = Ctx {
        inst,
        basis: g.basis(),
        g,
        tol: tolerance,
    };
    let mut checks: Vec<CheckRecord> = std::thread::scope(|scope| {
        let handles: Vec<_> = CHECKS
            .iter()
            .enumerate()
            .map(|(stream, check)| {
                let ctx = &ctx;
                scope.spawn(move || {
                    let mut rng = rng_for(seed, stream as u64);
                    record(check, ctx, (check.run)(ctx, &mut rng))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("check panicked")).collect()
    });
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(VerificationReport {
        instance: inst.data.name().to_string(),
        seed,
        tolerance,
        checks,
    })
}

fn record(check: &Check, ctx: &Ctx, outcome: Result<Outcome>) -> CheckRecord {
    let expected_failure = (check.expected_failure)(ctx);
    let (status, worst_residual, witness, reason) = match outcome {
        Ok(Outcome::Pass { residual, witness }) => (CheckStatus::Pass, residual, witness, None),
        Ok(Outcome::Fail { residual, witness }) => (CheckStatus::Fail, residual, Some(witness), None),
        Ok(Outcome::Skipped(reason)) => (CheckStatus::Skipped, None, None, Some(reason)),
        Err(e) => (CheckStatus::Fail, None, Some(format!("error: {e}")), None),
    };
    CheckRecord {
        id: check.id.to_string(),
        status,
        worst_residual: worst_residual.map(|r| if r.is_finite() { r } else { f64::MAX }),
        witness,
        reason,
        expected_failure,
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn from_violations(violations: Vec<&Violation>) -> Outcome {
    match violations.first() {
        None => Outcome::Pass {
            residual: Some(0.0),
            witness: None,
        },
        Some(_) => Outcome::Fail {
            residual: Some(violations.iter().map(|v| v.residual).fold(0.0, f64::max)),
            witness: violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
        },
    }
}

const FUSION_INVARIANTS: &[&str] = &[
    fusion_data::INV_FUSION_UNIT,
    fusion_data::INV_FUSION_DIMENSION,
    fusion_data::INV_FUSION_QDIM,
    fusion_data::INV_FUSION_ASSOCIATIVITY,
    fusion_data::INV_FUSION_CONJUGATE,
];

fn check_irrep_data(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let report = validate(&ctx.g);
    Ok(from_violations(
        report
            .violations
            .iter()
            .filter(|v| !FUSION_INVARIANTS.contains(&v.invariant))
            .collect(),
    ))
}

fn check_fusion_consistency(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let report = validate(&ctx.g);
    Ok(from_violations(
        report
            .violations
            .iter()
            .filter(|v| FUSION_INVARIANTS.contains(&v.invariant))
            .collect(),
    ))
}

/// Associativity of `fuse_characters` over complete triples, plus
/// conjugation being an involution.
fn check_character_ring(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    let labels: Vec<_> = g.labels().cloned().collect();
    let mut triples = 0usize;
    for a in &labels {
        for b in &labels {
            for c in &labels {
                let (x, y, z) = (
                    CharacterRingElement::character(a.clone()),
                    CharacterRingElement::character(b.clone()),
                    CharacterRingElement::character(c.clone()),
                );
                let lhs = fuse_characters(g, &x, &y).and_then(|xy| fuse_characters(g, &xy, &z));
                let rhs = fuse_characters(g, &y, &z).and_then(|yz| fuse_characters(g, &x, &yz));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => {
                        triples += 1;
                        worst.see(l.max_abs_diff(&r), || format!("({a}, {b}, {c})"));
                    }
                    (Err(Error::TruncationOverflow { .. }), _) | (_, Err(Error::TruncationOverflow { .. })) => {}
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                }
            }
        }
    }
    for _ in 0..SAMPLES {
        let x = random::random_character_ring_element(g, rng);
        let back = conjugate_character(g, &conjugate_character(g, &x)?)?;
        worst.see(back.max_abs_diff(&x), || "conjugation involution".into());
    }
    let out = worst.finish(ctx.tol);
    Ok(match out {
        Outcome::Pass { residual, .. } => Outcome::Pass {
            residual,
            witness: Some(format!("{triples} complete triples")),
        },
        other => other,
    })
}

fn check_orthogonality_basis(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let vectors: Vec<L2Vector> = ctx
        .basis
        .iter()
        .map(|k| L2Vector::basis(k.irrep.clone(), k.row, k.col))
        .collect();
    let mut worst = Worst::new();
    for (a, ka) in ctx.basis.iter().enumerate() {
        let info = g.irrep(&ka.irrep)?;
        let diag = 1.0 / (info.f_eigenvalues[ka.row] * info.quantum_dimension());
        for (b, kb) in ctx.basis.iter().enumerate() {
            let expected = if a == b { diag } else { 0.0 };
            let r = (inner(g, &vectors[a], &vectors[b])? - re(expected)).norm();
            worst.see(r, || format!("<{ka}, {kb}>"));
        }
    }
    Ok(worst.finish(ctx.tol))
}

fn check_orthogonality_characters(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for a in g.labels() {
        for b in g.labels() {
            let expected = re(if a == b { 1.0 } else { 0.0 });
            let plain = inner(g, &character_l2(g, a)?, &character_l2(g, b)?)?;
            let quantum = inner(g, &quantum_character_l2(g, a)?, &quantum_character_l2(g, b)?)?;
            worst.see((plain - expected).norm(), || format!("<chi^{a}, chi^{b}>"));
            worst.see((quantum - expected).norm(), || format!("<chi_q^{a}, chi_q^{b}>"));
        }
    }
    Ok(worst.finish(ctx.tol))
}

fn check_idem(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for (a, info) in g.irreps() {
        let q = quantum_character_l1(g, a)?;
        let lhs = convolve(g, &q, &q)?;
        let rhs = q.scale(re(1.0 / info.quantum_dimension()));
        worst.see(lhs.max_abs_diff(&rhs), || format!("phi_q^{a}"));
    }
    Ok(worst.finish(ctx.tol))
}

fn check_two_sided_action(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for (a, info) in g.irreps() {
        let q = quantum_character_l1(g, a)?;
        let d = info.quantum_dimension();
        for k in &ctx.basis {
            let e = L1Element::basis(k.irrep.clone(), k.row, k.col);
            let expected = if &k.irrep == a {
                e.scale(re(1.0 / d))
            } else {
                L1Element::zero()
            };
            worst.see(convolve(g, &q, &e)?.max_abs_diff(&expected), || {
                format!("phi_q^{a} * {k}")
            });
            worst.see(convolve(g, &e, &q)?.max_abs_diff(&expected), || {
                format!("{k} * phi_q^{a}")
            });
        }
    }
    Ok(worst.finish(ctx.tol))
}

fn check_l1_associativity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let f: L1Element = random::random_element(g, rng);
        let h: L1Element = random::random_element(g, rng);
        let k: L1Element = random::random_element(g, rng);
        let lhs = convolve(g, &convolve(g, &f, &h)?, &k)?;
        let rhs = convolve(g, &f, &convolve(g, &h, &k)?)?;
        worst.see(lhs.max_abs_diff(&rhs), || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

fn check_l1_involution(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let f: L1Element = random::random_element(g, rng);
        let h: L1Element = random::random_element(g, rng);
        worst.see(involute(g, &involute(g, &f)?)?.max_abs_diff(&f), || {
            format!("(f^o)^o, sample {s}")
        });
        let lhs = involute(g, &convolve(g, &f, &h)?)?;
        let rhs = convolve(g, &involute(g, &h)?, &involute(g, &f)?)?;
        worst.see(lhs.max_abs_diff(&rhs), || format!("(f*h)^o, sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

fn check_matrix_units(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let units: Vec<_> = ctx
        .basis
        .iter()
        .map(|k| matrix_unit(g, &k.irrep, k.row, k.col))
        .collect::<Result<_>>()?;
    let position = |k: &BasisKey| -> Result<usize> {
        let mut offset = 0;
        for (l, info) in g.irreps() {
            if l == &k.irrep {
                return Ok(offset + k.row * info.dim + k.col);
            }
            offset += info.dim * info.dim;
        }
        Err(Error::UnknownLabel(k.irrep.to_string()))
    };
    let mut worst = Worst::new();
    let zero = l1::BlockMatrixFamily::zero();
    for (a, ka) in ctx.basis.iter().enumerate() {
        let adjoint_target = &units[position(&BasisKey::new(ka.irrep.clone(), ka.col, ka.row))?];
        worst.see(units[a].adjoint().max_abs_diff(adjoint_target), || format!("e({ka})*"));
        for (b, kb) in ctx.basis.iter().enumerate() {
            let product = units[a].mul(&units[b]);
            let r = if ka.irrep == kb.irrep && ka.col == kb.row {
                product.max_abs_diff(&units[position(&BasisKey::new(ka.irrep.clone(), ka.row, kb.col))?])
            } else {
                product.max_abs_diff(&zero)
            };
            worst.see(r, || format!("e({ka}) e({kb})"));
        }
    }
    Ok(worst.finish(ctx.tol))
}

fn check_lambda_hat(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let f: L1Element = random::random_element(g, rng);
        let h: L1Element = random::random_element(g, rng);
        let lhs = lambda_hat(g, &convolve(g, &f, &h)?)?;
        let rhs = lambda_hat(g, &f)?.mul(&lambda_hat(g, &h)?);
        worst.see(lhs.max_abs_diff(&rhs), || format!("homomorphism, sample {s}"));
        let star_lhs = lambda_hat(g, &involute(g, &f)?)?;
        let star_rhs = lambda_hat(g, &f)?.adjoint();
        worst.see(star_lhs.max_abs_diff(&star_rhs), || format!("*-map, sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

/// Elements whose centrality is decided, for cross-validation of modes.
fn centrality_probe_set(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Vec<(String, L1Element)>> {
    let g = &ctx.g;
    let mut out = Vec::new();
    for a in g.labels() {
        out.push((format!("phi^{a}"), character_l1(g, a)?));
        out.push((format!("phi_q^{a}"), quantum_character_l1(g, a)?));
    }
    for k in &ctx.basis {
        out.push((format!("phi({k})"), L1Element::basis(k.irrep.clone(), k.row, k.col)));
    }
    for s in 0..SAMPLES {
        if s % 2 == 0 {
            out.push((format!("random central {s}"), random::random_central(g, rng)?));
        } else {
            out.push((format!("random {s}"), random::random_element(g, rng)));
        }
    }
    Ok(out)
}

fn check_modes_agree(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    for (name, f) in centrality_probe_set(ctx, rng)? {
        let comm = is_central(g, &f, CentralityMode::Commutator)?;
        let blocks = is_central(g, &f, CentralityMode::ScalarBlocks)?;
        if comm.central != blocks.central {
            return Ok(Outcome::Fail {
                residual: None,
                witness: format!("{name}: commutator={} scalar-blocks={}", comm.central, blocks.central),
            });
        }
    }
    Ok(Outcome::Pass {
        residual: None,
        witness: None,
    })
}

/// Membership in `span{φ_q^α}`, decided from coefficients alone: each block
/// must be a multiple of `diag(λ^α)`.
fn in_quantum_character_span(g: &QuantumGroupData, f: &L1Element, tol: f64) -> Result<bool> {
    for (label, m) in f.blocks(g)? {
        let lam = &g.irrep(&label)?.f_eigenvalues;
        let c = m[(0, 0)] / lam[0];
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let target = if i == j { c * lam[i] } else { re(0.0) };
                if (m[(i, j)] - target).norm() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn check_center_span(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut probes = centrality_probe_set(ctx, rng)?;
    for s in 0..SAMPLES / 4 {
        // central element nudged off the centre in one off-diagonal slot
        let mut f = random::random_central(g, rng)?;
        if let Some((label, info)) = g.irreps().find(|(_, i)| i.dim > 1) {
            f.add_term(BasisKey::new(label.clone(), 0, info.dim - 1), re(1e-3));
            probes.push((format!("perturbed central {s}"), f));
        }
    }
    for (name, f) in probes {
        let central = is_central(g, &f, CentralityMode::ScalarBlocks)?.central;
        let in_span = in_quantum_character_span(g, &f, ctx.tol)?;
        if central != in_span {
            return Ok(Outcome::Fail {
                residual: None,
                witness: format!("{name}: central={central} in span={in_span}"),
            });
        }
    }
    if g.is_kac() {
        for a in g.labels() {
            if !in_quantum_character_span(g, &character_l1(g, a)?, ctx.tol)? {
                return Ok(Outcome::Fail {
                    residual: None,
                    witness: format!("Kac instance but phi^{a} not in span of quantum characters"),
                });
            }
        }
    }
    Ok(Outcome::Pass {
        residual: None,
        witness: None,
    })
}

fn check_quantum_character_centrality(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    for a in g.labels() {
        let q = quantum_character_l1(g, a)?;
        for mode in [CentralityMode::Commutator, CentralityMode::ScalarBlocks] {
            let c = is_central(g, &q, mode)?;
            if let Some(w) = c.witness {
                return Ok(Outcome::Fail {
                    residual: Some(w.residual),
                    witness: format!("phi_q^{a}: {w}"),
                });
            }
        }
        let c = is_central_l2(g, &quantum_character_l2(g, a)?)?;
        if let Some(w) = c.witness {
            return Ok(Outcome::Fail {
                residual: Some(w.residual),
                witness: format!("Lambda(chi_q^{a}) in L2: {w}"),
            });
        }
    }
    Ok(Outcome::Pass {
        residual: Some(0.0),
        witness: None,
    })
}

/// Irreps whose F-matrix is not the identity; their plain characters are
/// exactly the non-central ones.
fn deformed_irreps(ctx: &Ctx) -> Vec<crate::IrrepLabel> {
    ctx.g
        .irreps()
        .filter(|(_, i)| i.f_eigenvalues.iter().any(|l| (l - 1.0).abs() > ctx.tol))
        .map(|(l, _)| l.clone())
        .collect()
}

fn check_plain_character_centrality(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let deformed = deformed_irreps(ctx);
    let mut witnesses = Vec::new();
    for a in g.labels() {
        let chi = character_l1(g, a)?;
        let comm = is_central(g, &chi, CentralityMode::Commutator)?;
        let blocks = is_central(g, &chi, CentralityMode::ScalarBlocks)?;
        let expect_central = !deformed.contains(a);
        if comm.central != expect_central || blocks.central != expect_central {
            return Ok(Outcome::Fail {
                residual: comm.witness.as_ref().map(|w| w.residual),
                witness: format!(
                    "phi^{a}: expected central={expect_central}, commutator={}, scalar-blocks={}",
                    comm.central, blocks.central
                ),
            });
        }
        if let Some(w) = comm.witness {
            witnesses.push(format!("phi^{a}: {}", w.at));
        }
    }
    Ok(Outcome::Pass {
        residual: None,
        witness: if witnesses.is_empty() {
            None
        } else {
            Some(witnesses.join(", "))
        },
    })
}

fn check_plain_character_centrality_l2(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let deformed = deformed_irreps(ctx);
    let mut witnesses = Vec::new();
    let mut smallest: Option<f64> = None;
    for a in g.labels() {
        let c = is_central_l2(g, &character_l2(g, a)?)?;
        match (deformed.contains(a), c.witness) {
            (false, None) => {}
            (false, Some(w)) => {
                return Ok(Outcome::Fail {
                    residual: Some(w.residual),
                    witness: format!("Lambda(chi^{a}) unexpectedly non-central: {w}"),
                })
            }
            (true, None) => {
                return Ok(Outcome::Fail {
                    residual: None,
                    witness: format!("Lambda(chi^{a}) expected non-central"),
                })
            }
            (true, Some(w)) => {
                if w.residual <= 10.0 * ctx.tol {
                    return Ok(Outcome::Fail {
                        residual: Some(w.residual),
                        witness: format!("Lambda(chi^{a}) commutator too small to separate: {w}"),
                    });
                }
                smallest = Some(smallest.map_or(w.residual, |s: f64| s.min(w.residual)));
                witnesses.push(format!("chi^{a} vs Lambda(u^{}) norm {:.3e}", w.at, w.residual));
            }
        }
    }
    Ok(Outcome::Pass {
        residual: smallest,
        witness: if witnesses.is_empty() {
            None
        } else {
            Some(witnesses.join(", "))
        },
    })
}

fn skip_without_brute_force(ctx: &Ctx) -> Option<Outcome> {
    ctx.inst
        .brute_force
        .is_none()
        .then(|| Outcome::Skipped("NoBruteForceOracle: instance is not a finite-group function algebra".into()))
}

fn skip_non_kac(ctx: &Ctx) -> Option<Outcome> {
    (!ctx.g.is_kac()).then(|| Outcome::Skipped("NonKacInstance: beta1 is defined for Kac algebras only".into()))
}

fn function_distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

fn check_convolution_oracle(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    if let Some(skip) = skip_without_brute_force(ctx) {
        return Ok(skip);
    }
    let g = &ctx.g;
    let oracle = ctx.inst.brute_force.as_ref().expect("checked above");
    let mut worst = Worst::new();
    let mut compare = |f: &L1Element, h: &L1Element, at: &dyn Fn() -> String| -> Result<()> {
        let structural = oracle.to_function(&convolve(g, f, h)?)?;
        let direct = oracle.convolve_functions(&oracle.to_function(f)?, &oracle.to_function(h)?);
        worst.see(function_distance(&structural, &direct), at);
        let inv_structural = oracle.to_function(&involute(g, f)?)?;
        let inv_direct = oracle.involute_function(&oracle.to_function(f)?);
        worst.see(function_distance(&inv_structural, &inv_direct), || {
            format!("involution, {}", at())
        });
        Ok(())
    };
    for ka in &ctx.basis {
        for kb in &ctx.basis {
            let f = L1Element::basis(ka.irrep.clone(), ka.row, ka.col);
            let h = L1Element::basis(kb.irrep.clone(), kb.row, kb.col);
            compare(&f, &h, &|| format!("{ka} * {kb}"))?;
        }
    }
    for s in 0..SAMPLES {
        let f: L1Element = random::random_element(g, rng);
        let h: L1Element = random::random_element(g, rng);
        compare(&f, &h, &|| format!("sample {s}"))?;
    }
    Ok(worst.finish(ctx.tol))
}

fn check_beta1_idempotent(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    if let Some(skip) = skip_non_kac(ctx) {
        return Ok(skip);
    }
    let g = &ctx.g;
    let mut worst = Worst::new();
    for k in &ctx.basis {
        let f = L1Element::basis(k.irrep.clone(), k.row, k.col);
        let once = beta1(g, &f)?;
        worst.see(beta1(g, &once)?.max_abs_diff(&once), || format!("{k}"));
    }
    for s in 0..SAMPLES {
        let f: L1Element = random::random_element(g, rng);
        let once = beta1(g, &f)?;
        worst.see(beta1(g, &once)?.max_abs_diff(&once), || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

/// Range is `span{φ^α}`, every image is central (commutator mode), and
/// `β₁(f) = f` exactly for central `f`.
fn check_beta1_range(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    if let Some(skip) = skip_non_kac(ctx) {
        return Ok(skip);
    }
    let g = &ctx.g;
    let mut worst = Worst::new();
    for k in &ctx.basis {
        let image = beta1(g, &L1Element::basis(k.irrep.clone(), k.row, k.col))?;
        let n = g.irrep(&k.irrep)?.dim as f64;
        let expected = if k.row == k.col {
            character_l1(g, &k.irrep)?.scale(re(1.0 / n))
        } else {
            L1Element::zero()
        };
        worst.see(image.max_abs_diff(&expected), || format!("beta1({k})"));
        if !is_central(g, &image, CentralityMode::Commutator)?.central {
            return Ok(Outcome::Fail {
                residual: None,
                witness: format!("beta1({k}) not central"),
            });
        }
    }
    for (name, f) in centrality_probe_set(ctx, rng)? {
        let fixed = beta1(g, &f)?.max_abs_diff(&f) <= ctx.tol;
        let central = is_central(g, &f, CentralityMode::Commutator)?.central;
        if fixed != central {
            return Ok(Outcome::Fail {
                residual: None,
                witness: format!("{name}: fixed={fixed} central={central}"),
            });
        }
    }
    Ok(worst.finish(ctx.tol))
}

fn check_beta1_module(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    if let Some(skip) = skip_non_kac(ctx) {
        return Ok(skip);
    }
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let f = random::random_character_functional(g, rng)?;
        let h: L1Element = random::random_element(g, rng);
        let lhs = beta1(g, &convolve(g, &f, &h)?)?;
        let rhs = convolve(g, &f, &beta1(g, &h)?)?;
        worst.see(lhs.max_abs_diff(&rhs), || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

fn check_beta1_oracle(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    if let Some(skip) = skip_non_kac(ctx).or_else(|| skip_without_brute_force(ctx)) {
        return Ok(skip);
    }
    let g = &ctx.g;
    let oracle = ctx.inst.brute_force.as_ref().expect("checked above");
    let mut worst = Worst::new();
    let mut compare = |f: &L1Element, at: &dyn Fn() -> String| -> Result<()> {
        let structural = oracle.to_function(&beta1(g, f)?)?;
        let averaged = oracle.class_average(&oracle.to_function(f)?);
        worst.see(function_distance(&structural, &averaged), at);
        Ok(())
    };
    for k in &ctx.basis {
        compare(&L1Element::basis(k.irrep.clone(), k.row, k.col), &|| format!("{k}"))?;
    }
    for s in 0..SAMPLES {
        compare(&random::random_element(g, rng), &|| format!("sample {s}"))?;
    }
    Ok(worst.finish(ctx.tol))
}

fn check_beta1_contractivity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    if let Some(skip) = skip_non_kac(ctx) {
        return Ok(skip);
    }
    let Some(oracle) = ctx.inst.norm_oracle() else {
        return Ok(Outcome::Skipped("NoNormOracle: instance provides no L1 norm".into()));
    };
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let f: L1Element = random::random_element(g, rng);
        let before = l1::l1_norm(g, &f, Some(oracle))?;
        let after = l1::l1_norm(g, &beta1(g, &f)?, Some(oracle))?;
        // residual is the amount by which the norm grows
        worst.see((after - before).max(0.0), || format!("sample {s}: {after} > {before}"));
    }
    Ok(worst.finish(ctx.tol))
}

fn check_ab_transport(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let f: L1Element = random::random_element(g, rng);
        worst.see(b_map(g, &a_map(g, &f)?)?.max_abs_diff(&f), || {
            format!("b(a(f)), sample {s}")
        });
    }
    let one = a_map(g, &L1Element::basis(g.trivial().clone(), 0, 0))?;
    worst.see(one.max_abs_diff(&l2::unit_vector(g)), || "a(phi^triv)".into());
    for a in g.labels() {
        let lhs = a_map(g, &quantum_character_l1(g, a)?)?;
        worst.see(lhs.max_abs_diff(&quantum_character_l2(g, a)?), || {
            format!("a(phi_q^{a})")
        });
    }
    Ok(worst.finish(ctx.tol))
}

fn check_l2_associativity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let x: L2Vector = random::random_element(g, rng);
        let y: L2Vector = random::random_element(g, rng);
        let z: L2Vector = random::random_element(g, rng);
        let lhs = convolve_l2(g, &convolve_l2(g, &x, &y)?, &z)?;
        let rhs = convolve_l2(g, &x, &convolve_l2(g, &y, &z)?)?;
        worst.see(lhs.max_abs_diff(&rhs), || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

fn check_b_homomorphism(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let x: L2Vector = random::random_element(g, rng);
        let y: L2Vector = random::random_element(g, rng);
        let lhs = b_map(g, &convolve_l2(g, &x, &y)?)?;
        let rhs = convolve(g, &b_map(g, &x)?, &b_map(g, &y)?)?;
        worst.see(lhs.max_abs_diff(&rhs), || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

fn check_beta2_routes(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for k in &ctx.basis {
        let v = L2Vector::basis(k.irrep.clone(), k.row, k.col);
        let r = beta2_haar(g, &v)?.max_abs_diff(&beta2_haar_via_coproduct(g, &v)?);
        worst.see(r, || format!("Lambda({k})"));
    }
    for s in 0..SAMPLES {
        let v: L2Vector = random::random_element(g, rng);
        let r = beta2_haar(g, &v)?.max_abs_diff(&beta2_haar_via_coproduct(g, &v)?);
        worst.see(r, || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

type Projection = fn(&QuantumGroupData, &L2Vector) -> Result<L2Vector>;

fn idempotence(ctx: &Ctx, rng: &mut ChaCha8Rng, p: Projection) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for k in &ctx.basis {
        let once = p(g, &L2Vector::basis(k.irrep.clone(), k.row, k.col))?;
        worst.see(p(g, &once)?.max_abs_diff(&once), || format!("Lambda({k})"));
    }
    for s in 0..SAMPLES {
        let once = p(g, &random::random_element(g, rng))?;
        worst.see(p(g, &once)?.max_abs_diff(&once), || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

fn self_adjointness(ctx: &Ctx, rng: &mut ChaCha8Rng, p: Projection) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let x: L2Vector = random::random_element(g, rng);
        let y: L2Vector = random::random_element(g, rng);
        let r = (inner(g, &p(g, &x)?, &y)? - inner(g, &x, &p(g, &y)?)?).norm();
        worst.see(r, || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

fn check_beta2_idempotent(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    idempotence(ctx, rng, beta2_haar)
}

fn check_beta2_self_adjoint(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    self_adjointness(ctx, rng, beta2_haar)
}

fn check_pq_idempotent(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    idempotence(ctx, rng, pq_projection)
}

fn check_pq_self_adjoint(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    self_adjointness(ctx, rng, pq_projection)
}

/// Numerical rank of a family of vectors by Gram–Schmidt in the L² inner
/// product; a vector counts if less than `1e-6` of its norm survives.
fn numerical_rank(g: &QuantumGroupData, vectors: &[L2Vector]) -> Result<usize> {
    let mut onb: Vec<L2Vector> = Vec::new();
    for v in vectors {
        let n0 = l2::norm(g, v)?;
        if n0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for e in &onb {
            let c = inner(g, &w, e)?;
            w = &w - &e.scale(c);
        }
        let n = l2::norm(g, &w)?;
        if n > 1e-6 * n0 {
            onb.push(w.scale(re(1.0 / n)));
        }
    }
    Ok(onb.len())
}

/// Every basis image lies in `span{Λχ^α}`, every `Λχ^α` is fixed, and the
/// range has dimension `#irreps`.
fn check_beta2_range(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    let mut images = Vec::with_capacity(ctx.basis.len());
    for k in &ctx.basis {
        let image = beta2_haar(g, &L2Vector::basis(k.irrep.clone(), k.row, k.col))?;
        // component orthogonal to Λχ^α, whose norm is 1
        let chi = character_l2(g, &k.irrep)?;
        let residue = &image - &chi.scale(inner(g, &image, &chi)?);
        worst.see(residue.max_abs(), || format!("beta2(Lambda({k})) leaves span"));
        images.push(image);
    }
    for a in g.labels() {
        let chi = character_l2(g, a)?;
        worst.see(beta2_haar(g, &chi)?.max_abs_diff(&chi), || {
            format!("Lambda(chi^{a}) not fixed")
        });
    }
    let rank = numerical_rank(g, &images)?;
    if rank != g.num_irreps() {
        return Ok(Outcome::Fail {
            residual: Some(worst.residual),
            witness: format!("range dimension {rank}, expected {}", g.num_irreps()),
        });
    }
    Ok(worst.finish(ctx.tol))
}

/// Every vector in the range of `P_q` commutes with every basis vector.
fn check_pq_centrality(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    let basis: Vec<L2Vector> = ctx
        .basis
        .iter()
        .map(|k| L2Vector::basis(k.irrep.clone(), k.row, k.col))
        .collect();
    for s in 0..SAMPLES / 10 {
        let z = pq_projection(g, &random::random_element(g, rng))?;
        for (k, e) in ctx.basis.iter().zip(&basis) {
            let diff = &convolve_l2(g, &z, e)? - &convolve_l2(g, e, &z)?;
            worst.see(l2::norm(g, &diff)?, || format!("sample {s} vs Lambda({k})"));
        }
    }
    for a in g.labels() {
        if let Some(w) = is_central_l2(g, &quantum_character_l2(g, a)?)?.witness {
            worst.see(w.residual, || format!("Lambda(chi_q^{a}): {w}"));
        }
    }
    Ok(worst.finish(ctx.tol))
}

fn check_pq_kac(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    if !ctx.g.is_kac() {
        return Ok(Outcome::Skipped(
            "NonKacInstance: the two projections differ off Kac type".into(),
        ));
    }
    let g = &ctx.g;
    let mut worst = Worst::new();
    for k in &ctx.basis {
        let v = L2Vector::basis(k.irrep.clone(), k.row, k.col);
        worst.see(pq_projection(g, &v)?.max_abs_diff(&beta2_haar(g, &v)?), || {
            format!("Lambda({k})")
        });
    }
    Ok(worst.finish(ctx.tol))
}

fn check_expansion(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for k in &ctx.basis {
        let v = L2Vector::basis(k.irrep.clone(), k.row, k.col);
        worst.see(expand_quantum_characters(g, &v)?.max_abs_diff(&v), || {
            format!("Lambda({k})")
        });
    }
    for s in 0..SAMPLES {
        let v: L2Vector = random::random_element(g, rng);
        worst.see(expand_quantum_characters(g, &v)?.max_abs_diff(&v), || {
            format!("sample {s}")
        });
    }
    Ok(worst.finish(ctx.tol))
}

fn check_star_involution(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for k in &ctx.basis {
        let v = L2Vector::basis(k.irrep.clone(), k.row, k.col);
        worst.see(star(g, &star(g, &v)?)?.max_abs_diff(&v), || format!("Lambda({k})"));
    }
    for s in 0..SAMPLES {
        let v: L2Vector = random::random_element(g, rng);
        worst.see(star(g, &star(g, &v)?)?.max_abs_diff(&v), || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

fn check_star_characters(ctx: &Ctx, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for (a, info) in g.irreps() {
        let image = star(g, &character_l2(g, a)?)?;
        worst.see(image.max_abs_diff(&character_l2(g, &info.conjugate)?), || {
            format!("chi^{a}")
        });
    }
    Ok(worst.finish(ctx.tol))
}

fn check_star_isometry(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let v = random::random_character_vector(g, rng)?;
        let r = (l2::norm(g, &star(g, &v)?)? - l2::norm(g, &v)?).abs();
        worst.see(r, || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

/// `⟨Λ(y), Λ(x)⟩ = ⟨Λ(x*), Λ(y*)⟩` on `span{χ^α}`.
fn check_star_traciality(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let x = random::random_character_vector(g, rng)?;
        let y = random::random_character_vector(g, rng)?;
        let lhs = inner(g, &y, &x)?;
        let rhs = inner(g, &star(g, &x)?, &star(g, &y)?)?;
        worst.see((lhs - rhs).norm(), || format!("sample {s}"));
    }
    Ok(worst.finish(ctx.tol))
}

/// `r(x)` recomputed from pairings: `r(x) = Σ_α ⟨φ^ᾱ, x⟩ χ^α`, with
/// `⟨φ^β, u^α_{ij}⟩ = φ(u^α_{ij} χ^β)` evaluated through
/// `u^β_{kk} = (u^β̄_{σk σk})*` and `φ(u^α_{ij} (u^γ_{mn})*) = δ δ δ λ^α_j/d_α`.
fn restriction_by_pairing(g: &QuantumGroupData, x: &CoefficientElement) -> Result<CharacterRingElement> {
    let mut out = CharacterRingElement::zero();
    for (alpha, _) in g.irreps() {
        let beta = &g.irrep(alpha)?.conjugate; // pair against φ^ᾱ
        let beta_info = g.irrep(beta)?;
        let gamma = &beta_info.conjugate;
        let mut pairing = re(0.0);
        for (key, c) in x.terms() {
            if &key.irrep != gamma {
                continue;
            }
            let info = g.irrep(&key.irrep)?;
            for k in 0..beta_info.dim {
                let s = beta_info.conj_index_map[k];
                if key.row == s && key.col == s {
                    pairing += c * (info.f_eigenvalues[key.col] / info.quantum_dimension());
                }
            }
        }
        out.add_term(alpha.clone(), pairing);
    }
    Ok(out)
}

fn check_restriction_formula(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for k in &ctx.basis {
        let x = CoefficientElement::basis(k.irrep.clone(), k.row, k.col);
        let r = restrict_r(g, &x)?.max_abs_diff(&restriction_by_pairing(g, &x)?);
        worst.see(r, || format!("r(u{k})"));
    }
    for s in 0..SAMPLES {
        let x: CoefficientElement = random::random_element(g, rng);
        let r = restrict_r(g, &x)?.max_abs_diff(&restriction_by_pairing(g, &x)?);
        worst.see(r, || format!("sample {s}"));
    }
    for a in g.labels() {
        let chi = CharacterRingElement::character(a.clone());
        let r = restrict_r(g, &chi.to_coefficients(g)?)?.max_abs_diff(&chi);
        worst.see(r, || format!("r(chi^{a})"));
    }
    Ok(worst.finish(ctx.tol))
}

fn check_restriction_idempotent(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = &ctx.g;
    let mut worst = Worst::new();
    for s in 0..SAMPLES {
        let x: CoefficientElement = random::random_element(g, rng);
        let once = restrict_r(g, &x)?;
        let twice = restrict_r(g, &once.to_coefficients(g)?)?;
        worst.see(twice.max_abs_diff(&once), || format!("sample {s}"));
        let chars = random::random_character_ring_element(g, rng);
        let back = restrict_r(g, &chars.to_coefficients(g)?)?;
        worst.see(back.max_abs_diff(&chars), || format!("character combination {s}"));
    }
    Ok(worst.finish(ctx.tol))
}
