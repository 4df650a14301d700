mod common;

use std::process::ExitCode;
use std::time::Instant;

use bryant::bounds::{c_derivative_bound, global_rk4_bound};
use bryant::certify::{certify, check_certificate, parse_grid, path_bounds, sign_changes, sweep_periods, CertifyConfig, Verdict};
use bryant::integrator::{integrate_reference, CoefficientTable, ComplexMatrix, IntegrationConfig, MatrixEnclosure};
use bryant::mesh::{export_obj, immersion_point, parse_obj, sample_surface, GridSpec, PresetName, WeierstrassPreset};
use bryant::period::{period_f1, period_f2, symmetry_matrix};
use bryant::surface::{CoefficientBounds, PolygonalPath, SurfaceParams, Symmetry};
use bryant::{iv_arith, ArithOp};
use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const A: f64 = 1.78;
const N: usize = 4000;
const SWEEP_GRID: &str = "0.0495:0.0505:0.00001";

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn paths() -> [PolygonalPath; 2] {
    [PolygonalPath::alpha1(A), PolygonalPath::alpha2(A)]
}

fn certification_and_endpoints() -> (Outcome, Outcome) {
    let start = Instant::now();
    let cert = match certify(&CertifyConfig::default()) {
        Ok(c) => c,
        Err(e) => return (Err(format!("certify failed: {e}")), Err("no certificate".into())),
    };
    let secs = start.elapsed().as_secs_f64();
    let issues = check_certificate(&cert);
    let first = check(
        cert.verdict == Verdict::Verified && issues.is_empty() && secs < 600.0,
        format!("verdict {:?}, independent check issues {}, {secs:.1} s", cert.verdict, issues.len()),
    );
    let [e1, e2] = &cert.endpoint_enclosures;
    let second = match (e1.f1, e1.f2, e2.f1, e2.f2) {
        (Some(a1), Some(a2), Some(b1), Some(b2)) => check(
            a1.lo() > a2.hi() && b1.hi() < b2.lo(),
            format!("c = {}: f1 {a1} vs f2 {a2}; c = {}: f1 {b1} vs f2 {b2}", e1.c, e2.c),
        ),
        _ => Err("an endpoint enclosure is degenerate".into()),
    };
    (first, second)
}

fn budget_thresholds() -> (Outcome, Outcome) {
    let first = global_rk4_bound(0.0505, 500, &CoefficientBounds::PUBLISHED)
        .map_err(text)
        .and_then(|e| check(e < 1e-5, format!("epsilon = {e:.6e}")));
    let second = c_derivative_bound(4.6, 0.0505)
        .map_err(text)
        .and_then(|d| check(d < 20.0, format!("2.48 M exp(2.4 M c) = {d:.6}")));
    (first, second)
}

fn sweep_shape() -> Outcome {
    let grid = parse_grid(SWEEP_GRID).map_err(text)?;
    let rows = sweep_periods(A, &grid, N).map_err(text)?;
    let above_two = rows.iter().all(|r| matches!((r.f1, r.f2), (Some(x), Some(y)) if x > 2.0 && y > 2.0));
    let changes = sign_changes(&rows);
    check(
        rows.len() == 101 && above_two && changes == 1,
        format!("{} points, all f1, f2 > 2: {above_two}, sign changes {changes}", rows.len()),
    )
}

fn bound_soundness() -> Outcome {
    let (bounds, _) = path_bounds(A).map_err(text)?;
    let fcfg = IntegrationConfig::floating(N).map_err(text)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let mut worst_ratio = 0.0f64;
    for path in paths() {
        let table = CoefficientTable::build(&path, A, &fcfg).map_err(text)?;
        for _ in 0..20 {
            let c = rng.gen_range(0.0495..=0.0505);
            let params = SurfaceParams::new(A, c).map_err(text)?;
            let reference = integrate_reference(&path, &params, 10 * N).map_err(text)?;
            let err = table.integrate_floating(c).max_component_diff(&reference);
            let eps = global_rk4_bound(c, N, &bounds).map_err(text)?;
            worst_ratio = worst_ratio.max(err / eps);
        }
    }
    check(worst_ratio <= 0.1, format!("largest error / bound = {worst_ratio:.3e} over 40 runs"))
}

fn interval_containment() -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut violations = 0;
    let cases = 10_000;
    for _ in 0..cases {
        let x = sample_interval(&mut rng);
        let y = sample_interval(&mut rng);
        let (px, py) = (member(&mut rng, &x), member(&mut rng, &y));
        for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div] {
            if let Ok(r) = iv_arith(op, x, y) {
                match exact_real(op, px, py) {
                    Some(v) if in_interval(&v, &r) => {}
                    _ => violations += 1,
                }
            }
        }
        let (bx, by) = (sample_box(&mut rng), sample_box(&mut rng));
        let (zx, zy) = (box_member(&mut rng, &bx), box_member(&mut rng, &by));
        if !exact_complex_mul(zx, zy).in_box(&(bx * by)) {
            violations += 1;
        }
        if let Ok(q) = bx.try_div(&by) {
            if !exact_complex_div(zx, zy).is_some_and(|v| v.in_box(&q)) {
                violations += 1;
            }
        }
        if let Ok((r, _)) = bx.sqrt_pair() {
            if !box_holds_sqrt(&r, zx) {
                violations += 1;
            }
        }
    }
    (cases, violations)
}

fn richardson_ratios(path: &PolygonalPath, c: f64, ns: &[usize]) -> Result<Vec<f64>, String> {
    let params = SurfaceParams::new(A, c).map_err(text)?;
    let runs: Vec<ComplexMatrix> =
        ns.iter().map(|&n| integrate_reference(path, &params, n)).collect::<Result<_, _>>().map_err(text)?;
    let diffs: Vec<f64> = runs.windows(2).map(|w| w[0].max_abs_diff(&w[1])).collect();
    Ok(diffs.windows(2).map(|d| d[0] / d[1]).collect())
}

fn invariants() -> Outcome {
    let (cases, violations) = interval_containment();
    let cfg = IntegrationConfig::interval(N).map_err(text)?;
    let tables: Vec<CoefficientTable> =
        paths().iter().map(|p| CoefficientTable::build(p, A, &cfg)).collect::<Result<_, _>>().map_err(text)?;
    let one = Complex64::new(1.0, 0.0);
    let (mut integrations, mut det_ok, mut periods, mut real_ok) = (0, 0, 0, 0);
    for &c in &parse_grid(SWEEP_GRID).map_err(text)? {
        let mats: Vec<MatrixEnclosure> = tables.iter().map(|t| t.integrate(c)).collect::<Result<_, _>>().map_err(text)?;
        for m in &mats {
            integrations += 1;
            det_ok += usize::from(m.det().contains(one));
        }
        for p in [period_f1(&mats[0]), period_f2(&mats[1])] {
            periods += 1;
            real_ok += usize::from(p.is_ok_and(|v| v.is_real_consistent()));
        }
    }

    let mut mirrored_ok = true;
    for (path, table) in paths().iter().zip(&tables) {
        let f = table.integrate(0.05).map_err(text)?;
        for s in [Symmetry::Conjugate, Symmetry::Antipodal, Symmetry::ConjugateAntipodal] {
            let mapped = path.mapped(s).map_err(text)?;
            let g = CoefficientTable::build(&mapped, A, &cfg).and_then(|t| t.integrate(0.05)).map_err(text)?;
            integrations += 1;
            det_ok += usize::from(g.det().contains(one));
            mirrored_ok &= g.overlaps(&symmetry_matrix(s, &f));
        }
    }

    let [p1, p2] = paths();
    let mut ratios = richardson_ratios(&p1, 1.0, &[100, 200, 400, 800, 1600])?;
    ratios.extend(richardson_ratios(&p2, 2.0, &[500, 1000, 2000, 4000])?);
    let ratios_ok = ratios.iter().all(|r| (8.0..=32.0).contains(r));

    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    let detail = format!(
        "containment {violations} violations in {cases} cases; det contains 1 in {det_ok}/{integrations}; \
         real periods {real_ok}/{periods}; mirrored paths consistent: {mirrored_ok}; Richardson ratios [{}]",
        shown.join(", ")
    );
    check(violations == 0 && det_ok == integrations && real_ok == periods && mirrored_ok && ratios_ok, detail)
}

fn mesh_validity() -> Outcome {
    let dir = tempfile::tempdir().map_err(text)?;
    let mut notes = Vec::new();
    let mut ok = true;
    for name in PresetName::ALL {
        let mesh = sample_surface(&WeierstrassPreset::new(name), &GridSpec::default()).map_err(text)?;
        let path = dir.path().join(format!("{}.obj", name.as_str()));
        export_obj(&mesh, &path).map_err(text)?;
        let (vs, _) = parse_obj(&std::fs::read_to_string(&path).map_err(text)?).map_err(text)?;
        let inside = vs.iter().all(|v| v.iter().map(|x| x * x).sum::<f64>() < 1.0);
        let residual = mesh.max_quadric_residual();
        ok &= inside && residual.is_none_or(|r| r < 1e-6) && vs.len() == mesh.vertices.len();
        notes.push(format!("{} residual {}", name.as_str(), residual.map_or("n/a".into(), |r| format!("{r:.1e}"))));
    }
    let origin = immersion_point(&ComplexMatrix::identity(), 1.0).map_err(text)?;
    ok &= origin.poincare == [0.0; 3];
    check(ok, format!("{}; identity maps to {:?}", notes.join(", "), origin.poincare))
}

fn main() -> ExitCode {
    let (c1, c4) = certification_and_endpoints();
    let (c2, c3) = budget_thresholds();
    let results = [
        (1, "certification over [0.0495, 0.0505] with n = 4000 and 50 subintervals", c1),
        (2, "discretization bound with published coefficient bounds at n = 500 below 1e-5", c2),
        (3, "parameter derivative bound below 20", c3),
        (4, "endpoint enclosures separate with opposite signs", c4),
        (5, "101-point sweep has f1, f2 > 2 and one sign change", sweep_shape()),
        (6, "reference runs within a tenth of the discretization bound", bound_soundness()),
        (7, "interval, determinant, reality, symmetry and convergence invariants", invariants()),
        (8, "meshes lie in the unit ball on the hyperboloid", mesh_validity()),
    ];
    let mut failed = 0;
    for (k, what, outcome) in results {
        match outcome {
            Ok(detail) => println!("criterion {k}: PASS {what} ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {k}: FAIL {what} ({detail})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
