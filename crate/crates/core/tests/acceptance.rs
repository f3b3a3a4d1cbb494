//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use common::{Oracle, P, RM};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphere_partition::catalog::{build_named_net, CatalogName, Counterexample};
use sphere_partition::geom::{isoperimetric_profile, polygon_area, CircleSpec, PolygonBoundary, SpherePoint, Vec3};
use sphere_partition::net::{total_perimeter, validate, Tolerances};
use sphere_partition::optimizer::{
    estimate_edge_structure, gradient, merit, minimize, perturb, DiscretizedNet, OptimizerConfig,
};
use sphere_partition::verifier::{verify_all, Status, VerifyOptions};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tetra_perimeter() -> f64 {
    6.0 * (-1.0f64 / 3.0).acos()
}

fn proof_chain() -> Outcome {
    let start = Instant::now();
    let report = verify_all(&VerifyOptions::default());
    let elapsed = start.elapsed().as_secs_f64();
    ensure(report.certified == 16 && report.total == 16, || {
        format!("{}/{} certified", report.certified, report.total)
    })?;
    ensure(report.claims.iter().all(|c| c.margin.is_some_and(|m| m > 0.0)), || "non-positive margin".into())?;

    let mut oracle = Oracle::new();
    let root = oracle.sqrt(&oracle.f(1771.0));
    let c9 = oracle.rational(1, 21).sub(&oracle.f(2.0).div(&root, P, RM), P, RM);
    let c16 = oracle.rational(1, 7).sub(&oracle.f(6.0).div(&root, P, RM), P, RM);
    let third = oracle.rational(-1, 3);
    let tetra = oracle.acos(&third).mul(&oracle.f(6.0), P, RM);
    let c3 = oracle.decimal("11.47").sub(&tetra, P, RM);
    let windows = [("C9", c9, 5e-5, 2e-4), ("C16", c16, 1e-4, 5e-4), ("C3", c3, 3e-3, 1e-2)];
    let mut notes = Vec::new();
    for (id, exact, lo, hi) in windows {
        let claim = report.claim(id).expect("claim exists");
        ensure(claim.status == Status::Certified, || format!("{id} not certified"))?;
        let margin = claim.margin.expect("certified claims have margins");
        let exact = oracle.nearest_f64(&exact);
        ensure(margin > lo && margin < hi, || format!("{id} margin {margin:e} outside ({lo:e}, {hi:e})"))?;
        ensure(margin <= exact && exact - margin < 1e-12, || {
            format!("{id} margin {margin:e} disagrees with reference {exact:e}")
        })?;
        notes.push(format!("{id} {margin:.6e}"));
    }
    ensure(elapsed < 1.0, || format!("took {elapsed:.3} s"))?;
    Ok(format!("16/16 certified, {}, {:.1} ms", notes.join(", "), elapsed * 1e3))
}

fn reference_constants() -> Outcome {
    let mut oracle = Oracle::new();
    let third = oracle.rational(-1, 3);
    let six_acos = oracle.acos(&third).mul(&oracle.f(6.0), P, RM);
    let exact = oracle.nearest_f64(&six_acos);
    let built = total_perimeter(&build_named_net(CatalogName::Tetrahedral).net);
    ensure((built - exact).abs() < 1e-12, || format!("built tetrahedral net measures {built}"))?;
    ensure(exact > 11.4637 && exact < 11.4638 && exact < 11.47, || format!("6 acos(-1/3) = {exact}"))?;
    let lower = 2.0 * PI * 3f64.sqrt();
    ensure(lower > 10.88, || format!("2π√3 = {lower}"))?;
    let small = isoperimetric_profile(2.0 * PI / 25.0).unwrap();
    ensure((small - 14.0 * PI / 25.0).abs() < 1e-12, || format!("B(2π/25) = {small}"))?;
    let pair = isoperimetric_profile(23.0 * PI / 25.0).unwrap() + small;
    ensure(pair > 6.62, || format!("B(23π/25) + B(2π/25) = {pair}"))?;
    Ok(format!("6 acos(-1/3) = {exact:.9}, 2π√3 = {lower:.6}, B(23π/25) + B(2π/25) = {pair:.6}"))
}

fn optimizer_recovery() -> Outcome {
    let start = Instant::now();
    let exact = DiscretizedNet::from_net(&build_named_net(CatalogName::Tetrahedral).net, 64).unwrap();
    let cfg = OptimizerConfig { m: 64, ..Default::default() };
    let (mut worst_p, mut worst_a, mut worst_angle, mut worst_kappa): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for seed in 1..=20u64 {
        let initial = perturb(&exact, 0.05, seed);
        let out = minimize(&initial, &OptimizerConfig { seed, ..cfg.clone() }).unwrap();
        ensure(out.converged(), || format!("seed {seed}: {}", out.status.as_str()))?;
        worst_p = worst_p.max((out.perimeter() - tetra_perimeter()).abs());
        worst_a = out.net.region_areas().iter().fold(worst_a, |w, a| w.max((a - PI).abs()));
        let s = estimate_edge_structure(&out.net, &out.pressures).unwrap();
        worst_angle = worst_angle.max(s.max_angle_error_deg());
        worst_kappa = worst_kappa.max(s.max_abs_kappa());
    }
    let elapsed = start.elapsed().as_secs_f64();
    let summary = format!(
        "20 runs, |ΔP| ≤ {worst_p:.1e}, |ΔA| ≤ {worst_a:.1e}, |Δθ| ≤ {worst_angle:.1e}°, |κ| ≤ {worst_kappa:.1e}, {elapsed:.1} s"
    );
    ensure(
        worst_p < 1e-5 && worst_a < 1e-6 && worst_angle < 0.01 && worst_kappa < 1e-3 && elapsed < 600.0,
        || summary.clone(),
    )?;
    Ok(summary)
}

fn baselines() -> Outcome {
    let run = |name: CatalogName| {
        let d = DiscretizedNet::from_net(&build_named_net(name).net, 64).unwrap();
        minimize(&perturb(&d, 0.05, 1), &OptimizerConfig { m: 64, ..Default::default() }).unwrap()
    };
    let two = run(CatalogName::GreatCircle);
    ensure(two.converged(), || format!("n = 2: {}", two.status.as_str()))?;
    let e2 = (two.perimeter() - 2.0 * PI).abs();
    ensure(e2 < 1e-6, || format!("n = 2: perimeter {}", two.perimeter()))?;
    let three = run(CatalogName::ThreeSemicircles);
    ensure(three.converged(), || format!("n = 3: {}", three.status.as_str()))?;
    let e3 = (three.perimeter() - 3.0 * PI).abs();
    ensure(e3 < 1e-5, || format!("n = 3: perimeter {}", three.perimeter()))?;
    Ok(format!("n = 2 off by {e2:.1e}, n = 3 off by {e3:.1e}"))
}

/// Largest `|fd − analytic|` over two tangent directions per point, relative
/// to the largest analytic component.
fn fd_error(d: &DiscretizedNet, lambda: &[f64], mu: f64) -> f64 {
    let h = 1e-6;
    let g = gradient(d, lambda, mu);
    let scale = g.iter().map(|v| v.amax()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (i, p) in d.points().iter().enumerate() {
        let helper = if p.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        let u = p.cross(&helper).normalize();
        for dir in [u, p.cross(&u)] {
            let at = |t: f64| {
                let mut pts = d.points().to_vec();
                pts[i] += t * dir;
                merit(&d.with_points(pts), lambda, mu)
            };
            let fd = (at(h) - at(-h)) / (2.0 * h);
            worst = worst.max((fd - g[i].dot(&dir)).abs() / scale);
        }
    }
    worst
}

fn gradient_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut parts = Vec::new();
    for (n, name) in [(2, CatalogName::GreatCircle), (3, CatalogName::ThreeSemicircles), (4, CatalogName::Tetrahedral)] {
        let base = DiscretizedNet::from_net(&build_named_net(name).net, 8).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..10 {
            let d = perturb(&base, rng.gen_range(0.02..0.2), 1000 + k);
            let lambda: Vec<f64> = d.regions().iter().map(|_| rng.gen_range(-2.0..2.0)).collect();
            worst = worst.max(fd_error(&d, &lambda, rng.gen_range(0.0..100.0)));
        }
        ensure(worst < 1e-5, || format!("n = {n}: relative error {worst:.2e}"))?;
        parts.push(format!("n = {n} {worst:.1e}"));
    }
    Ok(format!("max relative error {}", parts.join(", ")))
}

fn random_point(rng: &mut ChaCha8Rng) -> SpherePoint {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return SpherePoint::from_vec(v).unwrap();
        }
    }
}

fn isoperimetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut worst_circle: f64 = 0.0;
    for _ in 0..1000 {
        let circle = CircleSpec::new(random_point(&mut rng), rng.gen_range(1e-3..PI - 1e-3)).unwrap();
        let b = isoperimetric_profile(circle.enclosed_area()).unwrap();
        worst_circle = worst_circle.max((circle.perimeter() - b).abs());
    }
    ensure(worst_circle < 1e-9, || format!("circle deviates by {worst_circle:e}"))?;
    let mut tightest = f64::INFINITY;
    let mut count = 0;
    while count < 1000 {
        let corners = [random_point(&mut rng), random_point(&mut rng), random_point(&mut rng)];
        let Ok(tri) = PolygonBoundary::geodesic(&corners) else { continue };
        let area = polygon_area(&tri);
        if !(1e-6..4.0 * PI - 1e-6).contains(&area) {
            continue;
        }
        let gap = tri.perimeter() - isoperimetric_profile(area).unwrap();
        ensure(gap > 0.0, || format!("triangle {corners:?} has perimeter gap {gap:e}"))?;
        tightest = tightest.min(gap);
        count += 1;
    }
    Ok(format!("circles within {worst_circle:.1e}, smallest triangle gap {tightest:.2e}"))
}

fn validators() -> Outcome {
    let tol = Tolerances::default();
    for name in CatalogName::ALL {
        let report = validate(&build_named_net(name).net, &tol);
        ensure(report.passed(), || format!("{name} fails {:?}", report.failed()))?;
    }
    let mut parts = Vec::new();
    for c in Counterexample::ALL {
        let report = validate(&c.build(), &tol);
        let failed = report.failed();
        ensure(failed.contains(&c.expected_check()), || format!("{c:?} not rejected by {}", c.expected_check()))?;
        parts.push(format!("{c:?} -> {}", failed.join("+")));
    }
    Ok(format!("5 catalog nets pass; {}", parts.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("proof chain certification", proof_chain),
        ("reference constants", reference_constants),
        ("optimizer recovery", optimizer_recovery),
        ("baseline cases", baselines),
        ("gradient check", gradient_check),
        ("isoperimetric property", isoperimetry),
        ("structural validators", validators),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                all = false;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
