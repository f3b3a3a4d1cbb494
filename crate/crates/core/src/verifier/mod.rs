//! Rigorous certification of the numeric inequalities behind the optimality
//! of the tetrahedral partition.
//!
//! Each claim is a list of checks over interval expressions. A strict check
//! `lhs < rhs` is certified when `hi(lhs) < lo(rhs)`; its margin is the
//! rounded-down gap `lo(rhs) − hi(lhs)`. A claim whose dependencies are not
//! all certified is reported as undecided.

mod expr;
mod interval;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

pub use expr::{acos, int, named, pi, profile, rat, sqrt, EvalContext, EvalError, Expr};
pub use interval::{Interval, IntervalError, ROUNDING_MODE};

/// Names of the decimal constants quoted in the inequality chain.
pub const TETRA_PERIMETER_BOUND: &str = "tetra_perimeter_bound";
pub const FOUR_REGION_BOUND: &str = "four_region_bound";
pub const REGION_PERIMETER_BOUND: &str = "region_perimeter_bound";
pub const SHORT_PERIMETER_BOUND: &str = "short_perimeter_bound";

pub fn default_constants() -> BTreeMap<String, String> {
    [
        (TETRA_PERIMETER_BOUND, "11.47"),
        (FOUR_REGION_BOUND, "10.88"),
        (REGION_PERIMETER_BOUND, "6.62"),
        (SHORT_PERIMETER_BOUND, "1.34"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Failed,
    Undecided,
    Certified,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckKind {
    /// `lhs < rhs` at every point of the enclosures.
    Less { lhs: Expr, rhs: Expr },
    /// `|lhs − rhs| < tol` at every point; used for identities evaluated on
    /// irrational samples.
    Near { lhs: Expr, rhs: Expr, tol: f64 },
    /// Exact equality of two products of rationals `Π num/den`.
    RationalEq { lhs: Vec<(i64, i64)>, rhs: Vec<(i64, i64)> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub description: String,
    pub kind: CheckKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub id: &'static str,
    pub statement: String,
    pub anchor: &'static str,
    pub depends_on: Vec<&'static str>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub description: String,
    pub status: Status,
    /// Certified lower bound on the slack; `None` for exact identities.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: &'static str,
    pub statement: String,
    pub anchor: &'static str,
    pub status: Status,
    /// Smallest margin over the claim's strict checks. Reported even when the claim
    /// is not certified, in which case it may be negative.
    pub margin: Option<f64>,
    pub depends_on: Vec<&'static str>,
    /// Dependencies that kept this claim from being certified.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub blocked_by: Vec<&'static str>,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportHeader {
    pub rounding_mode: &'static str,
    pub pi_width: f64,
    /// Artificial minimum width of every intermediate enclosure (0 normally).
    pub min_width: f64,
    pub constants: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofReport {
    pub header: ReportHeader,
    pub claims: Vec<ClaimResult>,
    pub certified: usize,
    pub total: usize,
    pub overall: Status,
}

impl ProofReport {
    pub fn claim(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn is_certified(&self) -> bool {
        self.overall == Status::Certified
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("claim graph has a cycle through {0}")]
    Cycle(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub constants: BTreeMap<String, String>,
    pub min_width: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            constants: default_constants(),
            min_width: 0.0,
        }
    }
}

impl VerifyOptions {
    /// Replaces one named constant, e.g. `with_constant(TETRA_PERIMETER_BOUND, "11.46")`.
    pub fn with_constant(mut self, name: &str, value: &str) -> Self {
        self.constants.insert(name.to_string(), value.to_string());
        self
    }

    pub fn with_min_width(mut self, width: f64) -> Self {
        self.min_width = width;
        self
    }

    fn context(&self) -> EvalContext {
        EvalContext {
            constants: self.constants.clone(),
            min_width: self.min_width,
        }
    }
}

fn less(description: &str, lhs: Expr, rhs: Expr) -> Check {
    Check {
        description: description.to_string(),
        kind: CheckKind::Less { lhs, rhs },
    }
}

fn near(description: &str, lhs: Expr, rhs: Expr) -> Check {
    Check {
        description: description.to_string(),
        kind: CheckKind::Near { lhs, rhs, tol: 1e-12 },
    }
}

fn rational_eq(description: &str, lhs: &[(i64, i64)], rhs: &[(i64, i64)]) -> Check {
    Check {
        description: description.to_string(),
        kind: CheckKind::RationalEq {
            lhs: lhs.to_vec(),
            rhs: rhs.to_vec(),
        },
    }
}

/// `x π / 25`.
fn pi25(x: i64) -> Expr {
    rat(x, 25) * pi()
}

/// `f_k(t) = B(t) + B(k − t)`.
fn split(k: Expr, t: Expr) -> Expr {
    profile(t.clone()) + profile(k - t)
}

/// The sixteen claims, in dependency order.
pub fn claims() -> Vec<Claim> {
    let mut out = Vec::new();

    let mut c1 = Vec::new();
    for k in 1..32 {
        let a = rat(k, 8) * pi();
        c1.push(near(
            &format!("B(A)² = A(4π−A) at A = {k}π/8"),
            profile(a.clone()) * profile(a.clone()),
            a.clone() * (int(4) * pi() - a),
        ));
    }
    out.push(Claim {
        id: "C1",
        statement: "B(A)² = A(4π−A) on sampled areas A = kπ/8, k = 1..31 (to within 1e−12)".into(),
        anchor: "Isoperimetric lemma: \"P ≥ B(A)= √(A(4π−A))\"",
        depends_on: vec![],
        checks: c1,
    });

    out.push(Claim {
        id: "C2",
        statement: "2π√3 > 10.88, the perimeter bound for four equal areas".into(),
        anchor: "Equal-area corollary: \"greater than 2π√(n−1)\"; \"2π√3 > 10.88\"",
        depends_on: vec!["C1"],
        checks: vec![less("10.88 < 2π√3", named(FOUR_REGION_BOUND), int(2) * pi() * sqrt(int(3)))],
    });

    out.push(Claim {
        id: "C3",
        statement: "6·arccos(−1/3) < 11.47, the tetrahedral perimeter".into(),
        anchor: "Tetrahedral perimeter: \"perimeter 6 arccos(−1/3) < 11.47\"",
        depends_on: vec![],
        checks: vec![less("6·arccos(−1/3) < 11.47", int(6) * acos(rat(-1, 3)), named(TETRA_PERIMETER_BOUND))],
    });

    out.push(Claim {
        id: "C4",
        statement: "2·11.47 − 3π√3 < 6.62: a region of a minimizer has perimeter below 6.62".into(),
        anchor: "Region-perimeter corollary: \"perimeter less than 6.62\"",
        depends_on: vec!["C2", "C3"],
        checks: vec![less(
            "2·11.47 − 3π√3 < 6.62",
            int(2) * named(TETRA_PERIMETER_BOUND) - int(3) * pi() * sqrt(int(3)),
            named(REGION_PERIMETER_BOUND),
        )],
    });

    let k = pi();
    let mut c5 = Vec::new();
    for i in 1..5 {
        c5.push(less(
            &format!("f_π({i}π/10) < f_π({}π/10)", i + 1),
            split(k.clone(), rat(i, 10) * pi()),
            split(k.clone(), rat(i + 1, 10) * pi()),
        ));
    }
    for i in 1..6 {
        c5.push(near(
            &format!("f_π({i}π/10) = f_π(π − {i}π/10)"),
            split(k.clone(), rat(i, 10) * pi()),
            split(k.clone(), pi() - rat(i, 10) * pi()),
        ));
    }
    c5.push(less(
        "endpoint certificate: f_π(0) = B(π) < 2B(π/2) = f_π(π/2); with concavity and symmetry f_π increases on (0, π/2)",
        profile(pi()),
        int(2) * profile(rat(1, 2) * pi()),
    ));
    out.push(Claim {
        id: "C5",
        statement: "f_k(t) = B(t) + B(k−t) is symmetric about k/2 and increasing on (0, k/2) for k = π (grid t = π/10..π/2, concave-sum endpoint certificate)".into(),
        anchor: "Square-root lemma: \"f_k'(t) > 0 for all 0 < t < k/2\"; \"the sum of their square roots is a concave down function\"",
        depends_on: vec!["C1"],
        checks: c5,
    });

    out.push(Claim {
        id: "C6",
        statement: "B(23π/25) + B(2π/25) = (π/25)(√1771 + 14) > 6.62, so some region has a component of area at least 23π/25".into(),
        anchor: "Large-component proposition: \"(π/25)(√(23·77) + 14) ≈ 7 > 6.62\"",
        depends_on: vec!["C4", "C5"],
        checks: vec![
            near("B(23π/25) = (π/25)√1771", profile(pi25(23)), pi25(1) * sqrt(int(1771))),
            rational_eq("23·77 = 1771", &[(23, 1), (77, 1)], &[(1771, 1)]),
            less(
                "6.62 < B(23π/25) + B(2π/25)",
                named(REGION_PERIMETER_BOUND),
                profile(pi25(23)) + profile(pi25(2)),
            ),
        ],
    });

    out.push(Claim {
        id: "C7",
        statement: "B(2π/25) = 14π/25, and B(x) ≥ 7x on [0, 2π/25] since B is concave with B(0) = 0".into(),
        anchor: "Large-component proposition: \"14π/25 = 7A\"; \"B(x) ≥ 7x for x < 2π/25\"",
        depends_on: vec!["C1"],
        checks: vec![
            rational_eq("(2/25)(4 − 2/25) = (14/25)²", &[(2, 25), (98, 25)], &[(14, 25), (14, 25)]),
            near("B(2π/25) = 14π/25", profile(pi25(2)), pi25(14)),
            less("interior sample: 7·(π/25) < B(π/25)", int(7) * pi25(1), profile(pi25(1))),
        ],
    });

    out.push(Claim {
        id: "C8",
        statement: "7π > 6.62: a region made of components smaller than 2π/25 is too long".into(),
        anchor: "Large-component proposition: \"7π ≈ 21.99 > 6.62\"",
        depends_on: vec!["C4", "C7"],
        checks: vec![less("6.62 < 7π", named(REGION_PERIMETER_BOUND), int(7) * pi())],
    });

    out.push(Claim {
        id: "C9",
        statement: "κ₁₂ ≤ (2π/25)/B(23π/25) = 2/√1771 < 1/21".into(),
        anchor: "First curvature bound: \"Pκ_{12} ≤ 2π/25\"; \"κ_{12} < 1/21\"",
        depends_on: vec!["C6", "C7"],
        checks: vec![
            near("(2π/25)/B(23π/25) = 2/√1771", pi25(2) / profile(pi25(23)), int(2) / sqrt(int(1771))),
            less("(2π/25)/B(23π/25) < 1/21", pi25(2) / profile(pi25(23)), rat(1, 21)),
        ],
    });

    out.push(Claim {
        id: "C10",
        statement: "P₁₂ ≥ 21·(19π/75) = 133π/25 > 12. The nonnegative term κ_r·P_r (curvature toward lower-pressure regions) is dropped, which only weakens the bound; its sign convention is not spelled out in the source argument".into(),
        anchor: "Second-triangle proposition: \"P_{12} ≥ 133π/25 > 12\"",
        depends_on: vec!["C9", "C4"],
        checks: vec![
            rational_eq("21·19/75 = 133/25", &[(21, 1), (19, 75)], &[(133, 25)]),
            less("12 < 133π/25", int(12), rat(133, 25) * pi()),
        ],
    });

    out.push(Claim {
        id: "C11",
        statement: "(4/3)·B(23π/25) > 7".into(),
        anchor: "Long-boundary corollary: \"at least (4/3)B(23π/25) > 7\"",
        depends_on: vec!["C6", "C7"],
        checks: vec![less("7 < (4/3)·B(23π/25)", int(7), rat(4, 3) * profile(pi25(23)))],
    });

    out.push(Claim {
        id: "C12",
        statement: "3/√1771 = 3/√(23·77) < 1/14".into(),
        anchor: "Third curvature bound: \"3/√(23·77) < 1/14\"",
        depends_on: vec!["C11"],
        checks: vec![less("3/√1771 < 1/14", int(3) / sqrt(int(1771)), rat(1, 14))],
    });

    out.push(Claim {
        id: "C13",
        statement: "P ≥ 14·(19π/75) = 266π/75 > 11".into(),
        anchor: "Third-triangle proposition: \"P > 266π/75 > 11\"",
        depends_on: vec!["C12", "C4"],
        checks: vec![
            rational_eq("14·19/75 = 266/75", &[(14, 1), (19, 75)], &[(266, 75)]),
            less("11 < 266π/75", int(11), rat(266, 75) * pi()),
        ],
    });

    out.push(Claim {
        id: "C14",
        statement: "P_r ≤ 6.62 − B(23π/25) < 1.34".into(),
        anchor: "Final curvature lemma: \"P_r < 1.34\"",
        depends_on: vec!["C6", "C7"],
        checks: vec![less(
            "6.62 − B(23π/25) < 1.34",
            named(REGION_PERIMETER_BOUND) - profile(pi25(23)),
            named(SHORT_PERIMETER_BOUND),
        )],
    });

    out.push(Claim {
        id: "C15",
        statement: "κ₁₄ ≥ (π/3 − 2π/25)/1.34 > 1/2".into(),
        anchor: "Final curvature lemma: \"κ_{14}P_r ≥ π/3 − 2π/25\"; \"κ_{14} > 1/2\"",
        depends_on: vec!["C14"],
        checks: vec![less(
            "1/2 < (π/3 − 2π/25)/1.34",
            rat(1, 2),
            (rat(1, 3) * pi() - pi25(2)) / named(SHORT_PERIMETER_BOUND),
        )],
    });

    out.push(Claim {
        id: "C16",
        statement: "κ₁₄ ≤ 6/√1771 = 6/√(23·77) < 1/7 < 1/2, contradicting C15".into(),
        anchor: "Main theorem: \"κ_{14} ≤ 6/√(23·77) < 1/7\"",
        depends_on: vec!["C15", "C9"],
        checks: vec![
            less("6/√1771 < 1/7", int(6) / sqrt(int(1771)), rat(1, 7)),
            less("1/7 < 1/2", rat(1, 7), rat(1, 2)),
        ],
    });

    out
}

/// Claims in an order where every dependency comes first.
pub fn topological_order(claims: &[Claim]) -> Result<Vec<&'static str>, VerifyError> {
    let ids: BTreeSet<&str> = claims.iter().map(|c| c.id).collect();
    for c in claims {
        if let Some(d) = c.depends_on.iter().find(|d| !ids.contains(*d)) {
            return Err(VerifyError::UnknownClaim(d.to_string()));
        }
    }
    let mut done: Vec<&'static str> = Vec::new();
    while done.len() < claims.len() {
        let next = claims
            .iter()
            .find(|c| !done.contains(&c.id) && c.depends_on.iter().all(|d| done.contains(d)));
        match next {
            Some(c) => done.push(c.id),
            None => {
                let stuck = claims.iter().find(|c| !done.contains(&c.id)).expect("some claim left");
                return Err(VerifyError::Cycle(stuck.id));
            }
        }
    }
    Ok(done)
}

fn rational_product(factors: &[(i64, i64)]) -> (i128, i128) {
    factors
        .iter()
        .fold((1i128, 1i128), |(n, d), &(a, b)| (n * a as i128, d * b as i128))
}

pub fn evaluate_check(check: &Check, ctx: &EvalContext) -> CheckOutcome {
    let (status, margin) = match &check.kind {
        CheckKind::Less { lhs, rhs } => match (ctx.eval(lhs), ctx.eval(rhs)) {
            (Ok(l), Ok(r)) => {
                let margin = (r.lo() - l.hi()).next_down();
                let status = if l.hi() < r.lo() {
                    Status::Certified
                } else if l.lo() >= r.hi() {
                    Status::Failed
                } else {
                    Status::Undecided
                };
                (status, Some(margin))
            }
            _ => (Status::Undecided, None),
        },
        CheckKind::Near { lhs, rhs, tol } => match (ctx.eval(lhs), ctx.eval(rhs)) {
            (Ok(l), Ok(r)) => {
                let d = l.sub(&r);
                let worst = d.lo().abs().max(d.hi().abs());
                let status = if worst < *tol {
                    Status::Certified
                } else if d.lo() >= *tol || d.hi() <= -*tol {
                    Status::Failed
                } else {
                    Status::Undecided
                };
                (status, Some((tol - worst).next_down()))
            }
            _ => (Status::Undecided, None),
        },
        CheckKind::RationalEq { lhs, rhs } => {
            let (a, b) = rational_product(lhs);
            let (c, d) = rational_product(rhs);
            let status = if a * d == b * c { Status::Certified } else { Status::Failed };
            (status, None)
        }
    };
    CheckOutcome {
        description: check.description.clone(),
        status,
        margin,
    }
}

/// Round-to-nearest evaluation of a strict check with no error control.
/// Exists to show why the interval version is needed.
pub fn naive_check(check: &Check, ctx: &EvalContext) -> Option<bool> {
    match &check.kind {
        CheckKind::Less { lhs, rhs } => Some(ctx.eval_f64(lhs).ok()? < ctx.eval_f64(rhs).ok()?),
        _ => None,
    }
}

fn run(claims: &[Claim], options: &VerifyOptions) -> Result<ProofReport, VerifyError> {
    let order = topological_order(claims)?;
    let ctx = options.context();
    let by_id: BTreeMap<&str, &Claim> = claims.iter().map(|c| (c.id, c)).collect();
    let mut results: BTreeMap<&str, ClaimResult> = BTreeMap::new();
    for id in order {
        let claim = by_id[id];
        let checks: Vec<CheckOutcome> = claim.checks.iter().map(|c| evaluate_check(c, &ctx)).collect();
        let own = checks.iter().map(|c| c.status).min().unwrap_or(Status::Certified);
        // strict checks set the margin; identity tolerances only when nothing else does
        let strict = claim.checks.iter().zip(&checks).filter(|(c, _)| matches!(c.kind, CheckKind::Less { .. }));
        let margin = strict
            .filter_map(|(_, o)| o.margin)
            .reduce(f64::min)
            .or_else(|| checks.iter().filter_map(|c| c.margin).reduce(f64::min));
        let blocked_by: Vec<&'static str> = claim
            .depends_on
            .iter()
            .copied()
            .filter(|d| results[d].status != Status::Certified)
            .collect();
        let status = if blocked_by.is_empty() { own } else { Status::Undecided };
        results.insert(
            id,
            ClaimResult {
                id: claim.id,
                statement: claim.statement.clone(),
                anchor: claim.anchor,
                status,
                margin,
                depends_on: claim.depends_on.clone(),
                blocked_by,
                checks,
            },
        );
    }
    // report in registry order
    let claims: Vec<ClaimResult> = claims.iter().map(|c| results.remove(c.id).expect("evaluated")).collect();
    let certified = claims.iter().filter(|c| c.status == Status::Certified).count();
    let overall = claims.iter().map(|c| c.status).min().unwrap_or(Status::Certified);
    Ok(ProofReport {
        header: ReportHeader {
            rounding_mode: ROUNDING_MODE,
            pi_width: Interval::pi().width(),
            min_width: options.min_width,
            constants: options.constants.clone(),
        },
        total: claims.len(),
        certified,
        overall,
        claims,
    })
}

pub fn verify_all(options: &VerifyOptions) -> ProofReport {
    run(&claims(), options).expect("the built-in claim graph is acyclic")
}

/// Report restricted to claim `id` and everything it depends on.
pub fn verify_with_dependencies(id: &str, options: &VerifyOptions) -> Result<ProofReport, VerifyError> {
    let all = claims();
    let mut wanted: BTreeSet<&str> = BTreeSet::new();
    let mut stack = vec![all
        .iter()
        .find(|c| c.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| VerifyError::UnknownClaim(id.to_string()))?
        .id];
    while let Some(next) = stack.pop() {
        if wanted.insert(next) {
            let claim = all.iter().find(|c| c.id == next).expect("known id");
            stack.extend(claim.depends_on.iter().copied());
        }
    }
    let subset: Vec<Claim> = all.into_iter().filter(|c| wanted.contains(c.id)).collect();
    run(&subset, options)
}

pub fn verify_claim(id: &str, options: &VerifyOptions) -> Result<ClaimResult, VerifyError> {
    let report = verify_with_dependencies(id, options)?;
    let canonical = report
        .claims
        .iter()
        .find(|c| c.id.eq_ignore_ascii_case(id))
        .expect("requested claim is in its own report");
    Ok(canonical.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn all_sixteen_certify() {
        let report = verify_all(&VerifyOptions::default());
        for c in &report.claims {
            assert_eq!(c.status, Status::Certified, "{}: {:?}", c.id, c.checks);
            assert!(c.margin.unwrap() > 0.0, "{}", c.id);
        }
        assert_eq!(report.certified, 16);
        assert!(report.is_certified());
        assert!(report.header.pi_width <= 1e-15);
    }

    #[test]
    fn expected_margins() {
        let report = verify_all(&VerifyOptions::default());
        let m = |id: &str| report.claim(id).unwrap().margin.unwrap();
        assert!(m("C9") > 5e-5 && m("C9") < 2e-4, "{}", m("C9"));
        assert!(m("C16") > 1e-4 && m("C16") < 5e-4, "{}", m("C16"));
        assert!(m("C3") > 3e-3 && m("C3") < 1e-2, "{}", m("C3"));
        assert!(m("C2") >= 2e-3, "{}", m("C2"));
    }

    #[test]
    fn graph_is_acyclic_and_ordered() {
        let order = topological_order(&claims()).unwrap();
        assert_eq!(order.len(), 16);
        for c in claims() {
            let at = order.iter().position(|x| *x == c.id).unwrap();
            for d in &c.depends_on {
                assert!(order.iter().position(|x| x == d).unwrap() < at);
            }
        }
    }

    #[test]
    fn cycle_is_detected() {
        let mut cs = claims();
        cs[0].depends_on.push("C16");
        assert!(matches!(topological_order(&cs), Err(VerifyError::Cycle(_))));
    }

    #[test]
    fn lowering_the_tetrahedral_bound_breaks_the_chain() {
        let opts = VerifyOptions::default().with_constant(TETRA_PERIMETER_BOUND, "11.46");
        let report = verify_all(&opts);
        assert_eq!(report.claim("C3").unwrap().status, Status::Failed);
        for id in ["C4", "C6", "C8", "C9", "C10", "C11", "C12", "C13", "C14", "C15", "C16"] {
            assert_eq!(report.claim(id).unwrap().status, Status::Undecided, "{id}");
        }
        for id in ["C1", "C2", "C5", "C7"] {
            assert_eq!(report.claim(id).unwrap().status, Status::Certified, "{id}");
        }
        assert_eq!(report.overall, Status::Failed);
    }

    #[test]
    fn widening_never_certifies_tight_claims() {
        let report = verify_all(&VerifyOptions::default().with_min_width(1e-3));
        for id in ["C9", "C12", "C16"] {
            assert_eq!(report.claim(id).unwrap().status, Status::Undecided, "{id}");
        }
        assert!(report.claims.iter().all(|c| c.status != Status::Failed));
    }

    #[test]
    fn naive_evaluation_certifies_a_false_strict_inequality() {
        // 3/10 < 1/10 + 2/10 is false over the reals
        let check = less("3/10 < 1/10 + 2/10", rat(3, 10), rat(1, 10) + rat(2, 10));
        let ctx = VerifyOptions::default().context();
        assert_eq!(naive_check(&check, &ctx), Some(true));
        assert_eq!(evaluate_check(&check, &ctx).status, Status::Undecided);
    }

    #[test]
    fn single_claim_brings_its_dependencies() {
        let report = verify_with_dependencies("C9", &VerifyOptions::default()).unwrap();
        let ids: Vec<_> = report.claims.iter().map(|c| c.id).collect();
        assert_eq!(ids, vec!["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C9"]);
        assert_eq!(verify_claim("c3", &VerifyOptions::default()).unwrap().id, "C3");
        assert_eq!(
            verify_claim("C17", &VerifyOptions::default()),
            Err(VerifyError::UnknownClaim("C17".into()))
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let a = crate::json::to_string(&verify_all(&VerifyOptions::default())).unwrap();
        let b = crate::json::to_string(&verify_all(&VerifyOptions::default())).unwrap();
        assert_eq!(a, b);
    }

    fn certified_ids(report: &ProofReport, status: Status) -> BTreeSet<&'static str> {
        report.claims.iter().filter(|c| c.status == status).map(|c| c.id).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn widening_is_monotone(w1 in 0.0..2e-3f64, extra in 0.0..2e-3f64) {
            let narrow = verify_all(&VerifyOptions::default().with_min_width(w1));
            let wide = verify_all(&VerifyOptions::default().with_min_width(w1 + extra));
            prop_assert!(certified_ids(&wide, Status::Certified).is_subset(&certified_ids(&narrow, Status::Certified)));
            prop_assert!(certified_ids(&wide, Status::Failed).is_subset(&certified_ids(&narrow, Status::Failed)));
        }

        #[test]
        fn raising_a_bound_never_fails_a_claim(delta in 0.0..0.5f64) {
            // a larger upper bound for the tetrahedral perimeter can only make C3 easier
            let value = format!("{}", 11.47 + delta);
            let report = verify_all(&VerifyOptions::default().with_constant(TETRA_PERIMETER_BOUND, &value));
            prop_assert_eq!(report.claim("C3").unwrap().status, Status::Certified);
        }
    }
}
