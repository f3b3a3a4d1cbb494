//! Interval enclosures and claim margins against 256-bit reference values.

mod common;

use common::{encloses, Oracle, P, RM};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphere_partition::verifier::{
    claims, default_constants, verify_all, CheckKind, EvalContext, Interval, Status, VerifyOptions,
};

fn random_interval(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> (Interval, f64) {
    let a = rng.gen_range(lo..hi);
    let w = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..(hi - a).min(1.0)) };
    let iv = Interval::new(a, a + w).unwrap();
    let x = (a + rng.gen_range(0.0..=1.0) * w).clamp(iv.lo(), iv.hi());
    (iv, x)
}

#[test]
fn primitives_enclose_exact_results() {
    let mut oracle = Oracle::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let samples = 100_000;
    for i in 0..samples {
        let (x, px) = random_interval(&mut rng, -50.0, 50.0);
        let (y, py) = random_interval(&mut rng, 0.01, 50.0);
        let (bx, by) = (oracle.f(px), oracle.f(py));
        match i % 6 {
            0 => assert!(encloses(&x.add(&y), &bx.add(&by, P, RM))),
            1 => assert!(encloses(&x.sub(&y), &bx.sub(&by, P, RM))),
            2 => assert!(encloses(&x.mul(&y), &bx.mul(&by, P, RM))),
            3 => assert!(encloses(&x.div(&y).unwrap(), &bx.div(&by, P, RM))),
            4 => assert!(encloses(&y.sqrt().unwrap(), &oracle.sqrt(&by))),
            _ => {
                let (c, pc) = random_interval(&mut rng, -1.0, 1.0);
                let exact = oracle.acos(&oracle.f(pc));
                let got = c.acos().unwrap();
                assert!(encloses(&got, &exact), "acos({pc}) ∉ {got}");
            }
        }
    }
}

#[test]
fn acos_at_special_points() {
    let mut oracle = Oracle::new();
    for x in [-1.0, -0.5, -1.0 / 3.0, 0.0, 1.0 / 3.0, 0.5, 5f64.sqrt() / 3.0, 1.0] {
        let got = Interval::exact(x).acos().unwrap();
        let exact = oracle.acos(&oracle.f(x));
        assert!(encloses(&got, &exact), "acos({x})");
        assert!(got.width() < 1e-13, "acos({x}) width {}", got.width());
    }
}

/// Every side of every strict check contains its exact value, and the
/// reported margin never exceeds the exact gap.
#[test]
fn claim_enclosures_and_margins() {
    let mut oracle = Oracle::new();
    let ctx = EvalContext::new(default_constants());
    let report = verify_all(&VerifyOptions::default());
    for claim in claims() {
        let result = report.claim(claim.id).unwrap();
        for (check, outcome) in claim.checks.iter().zip(&result.checks) {
            if let CheckKind::Less { lhs, rhs } = &check.kind {
                let (l, r) = (ctx.eval(lhs).unwrap(), ctx.eval(rhs).unwrap());
                let (el, er) = (oracle.eval(lhs, &ctx), oracle.eval(rhs, &ctx));
                assert!(encloses(&l, &el), "{}: {}", claim.id, check.description);
                assert!(encloses(&r, &er), "{}: {}", claim.id, check.description);
                let gap = oracle.nearest_f64(&er.sub(&el, P, RM));
                let margin = outcome.margin.unwrap();
                assert!(margin <= gap, "{}: margin {margin} > exact gap {gap}", claim.id);
                assert!(gap - margin < 1e-12, "{}: margin {margin} far below gap {gap}", claim.id);
            }
        }
    }
}

#[test]
fn recipes_enclose_exact_values_for_random_constants() {
    let mut oracle = Oracle::new();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let all = claims();
    for _ in 0..100 {
        let mut constants = default_constants();
        for value in constants.values_mut() {
            let base: f64 = value.parse().unwrap();
            *value = format!("{:.6}", base * rng.gen_range(0.8..1.2));
        }
        let ctx = EvalContext::new(constants);
        for claim in &all {
            for check in &claim.checks {
                let sides = match &check.kind {
                    CheckKind::Less { lhs, rhs } | CheckKind::Near { lhs, rhs, .. } => [lhs, rhs],
                    CheckKind::RationalEq { .. } => continue,
                };
                for side in sides {
                    let iv = ctx.eval(side).unwrap();
                    let exact = oracle.eval(side, &ctx);
                    assert!(encloses(&iv, &exact), "{}: {}", claim.id, check.description);
                }
            }
        }
    }
}

#[test]
fn tight_margins_match_reference() {
    let mut oracle = Oracle::new();
    let report = verify_all(&VerifyOptions::default());
    let root = oracle.sqrt(&oracle.f(1771.0));
    let c9 = oracle.rational(1, 21).sub(&oracle.f(2.0).div(&root, P, RM), P, RM);
    let c12 = oracle.rational(1, 14).sub(&oracle.f(3.0).div(&root, P, RM), P, RM);
    let c16 = oracle.rational(1, 7).sub(&oracle.f(6.0).div(&root, P, RM), P, RM);
    let third = oracle.rational(-1, 3);
    let tetra = oracle.acos(&third).mul(&oracle.f(6.0), P, RM);
    let c3 = oracle.decimal("11.47").sub(&tetra, P, RM);
    for (id, exact) in [("C9", c9), ("C12", c12), ("C16", c16), ("C3", c3)] {
        let exact = oracle.nearest_f64(&exact);
        let claim = report.claim(id).unwrap();
        assert_eq!(claim.status, Status::Certified);
        let margin = claim.margin.unwrap();
        assert!(margin <= exact && exact - margin < 1e-12, "{id}: {margin} vs {exact}");
    }
}
