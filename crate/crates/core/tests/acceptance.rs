//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use gqmean::diagonal::{self, bell};
use gqmean::equality::{self, CheckOptions, Classification, Verdict};
use gqmean::expr::{self, Expr};
use gqmean::generator::{GeneratorPair, Interval, TrigPair};
use gqmean::jet::Elementary;
use gqmean::mean;
use gqmean::measure::{self, mn_measure, Measure, MnKind, PiParams};
use gqmean::{Jet, MeanSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn run(
    n: u32,
    name: &str,
    budget_s: f64,
    body: impl FnOnce() -> Result<String, String>,
) {
    let t0 = Instant::now();
    let outcome = body();
    let dt = t0.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("ACCEPTANCE {n} ({name}): PASS in {dt:.2}s — {detail}");
            assert!(
                dt < budget_s,
                "criterion {n} exceeded its runtime budget: {dt:.2}s >= {budget_s}s"
            );
        }
        Err(msg) => {
            println!("ACCEPTANCE {n} ({name}): FAIL in {dt:.2}s — {msg}");
            panic!("criterion {n} failed: {msg}");
        }
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn interval(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn log_expr() -> Expr {
    Expr::apply(Elementary::Log, Expr::var())
}

#[test]
fn criterion_1_moment_identities() {
    run(1, "moment identities of the pi family", 1.0, || {
        let mut checked = 0;
        for &tau in &[0.0_f64, 0.1, 0.25, 0.4] {
            let ell = ((1.0 - 2.0 * tau) / 4.0).powi(2);
            let cases = [
                (MnKind::TwoAtoms, 2.0),
                (MnKind::TruncatedUniform, 2.0 / 3.0),
            ];
            for (kind, p) in cases {
                let constructive =
                    mn_measure(tau, kind).map_err(|e| e.to_string())?.moments();
                let family =
                    measure::pi_moments(PiParams::new(ell, p).map_err(|e| e.to_string())?, 8)
                        .map_err(|e| e.to_string())?;
                for k in 0..=8 {
                    ensure(
                        (constructive.central(k) - family.central(k)).abs() <= 1e-13,
                        format!("central moment {k} at tau={tau}, p={p}"),
                    )?;
                    ensure(
                        (constructive.raw(k) - family.raw(k)).abs() <= 1e-13,
                        format!("raw moment {k} at tau={tau}, p={p}"),
                    )?;
                    checked += 2;
                }
            }
        }
        Ok(format!("{checked} moment comparisons at 1e-13"))
    });
}

#[test]
fn criterion_2_closed_forms_vs_series_oracle() {
    run(2, "closed forms vs implicit-series oracle", 10.0, || {
        let pairs: Vec<(&str, GeneratorPair)> = vec![
            (
                "(log,1)",
                GeneratorPair::quasiarithmetic(log_expr(), interval(0.4, 3.0)).unwrap(),
            ),
            (
                "(sinh,cosh)",
                GeneratorPair::trig(
                    &TrigPair { a: 1.0, phi: Expr::var(), scale_by_phi_prime: false },
                    interval(0.2, 1.6),
                )
                .unwrap(),
            ),
            ("power(2,1)", GeneratorPair::power(2.0, 1.0, interval(0.5, 5.0)).unwrap()),
            (
                "trig(a=1, phi=0.7x)",
                GeneratorPair::trig(
                    &TrigPair {
                        a: 1.0,
                        phi: expr::mul(Expr::constant(0.7), Expr::var()),
                        scale_by_phi_prime: false,
                    },
                    interval(0.2, 1.6),
                )
                .unwrap(),
            ),
            (
                "trig(a=-1)",
                GeneratorPair::trig(
                    &TrigPair { a: -1.0, phi: Expr::var(), scale_by_phi_prime: false },
                    interval(0.15, 1.35),
                )
                .unwrap(),
            ),
        ];
        let measures: Vec<(&str, Measure)> = vec![
            ("atoms", Measure::endpoint_atoms()),
            ("lebesgue", Measure::lebesgue()),
            ("mn(0.25, atoms)", mn_measure(0.25, MnKind::TwoAtoms).unwrap()),
            ("mn(0.25, uniform)", mn_measure(0.25, MnKind::TruncatedUniform).unwrap()),
        ];
        let mut combos = 0;
        let mut worst: f64 = 0.0;
        for (pname, pair) in &pairs {
            for (mname, m) in &measures {
                for x in pair.domain().interior_grid(3, 0.2) {
                    let closed =
                        diagonal::diagonal_derivatives(pair, m, x).map_err(|e| e.to_string())?;
                    let oracle =
                        diagonal::implicit_series_oracle(pair, m, x).map_err(|e| e.to_string())?;
                    for n in [2usize, 4, 6, 8] {
                        let (a, b) = (closed.order(n), oracle.order(n));
                        let rel = (a - b).abs() / a.abs().max(b.abs()).max(1e-12 / 1e-8);
                        worst = worst.max(rel);
                        ensure(
                            rel <= 1e-8,
                            format!("{pname} under {mname}, x={x}, order {n}: {a} vs {b}"),
                        )?;
                    }
                }
                combos += 1;
            }
        }
        Ok(format!("{combos} (pair, measure) combos, worst relative deviation {worst:.2e}"))
    });
}

#[test]
fn criterion_3_hand_verified_anchor() {
    run(3, "geometric-slice anchor", f64::INFINITY, || {
        let pair = GeneratorPair::quasiarithmetic(log_expr(), interval(0.25, 4.0)).unwrap();
        let got = diagonal::diagonal_derivatives(&pair, &Measure::endpoint_atoms(), 1.0)
            .map_err(|e| e.to_string())?;
        ensure((got.d2 + 0.25).abs() <= 1e-12, format!("d2 = {}", got.d2))?;
        ensure((got.d4 + 3.0 / 16.0).abs() <= 1e-12, format!("d4 = {}", got.d4))?;
        Ok(format!("d2 = {} (want -1/4), d4 = {} (want -3/16)", got.d2, got.d4))
    });
}

#[test]
fn criterion_4_finite_difference_corroboration() {
    run(4, "finite-difference corroboration", f64::INFINITY, || {
        let log_pair = GeneratorPair::quasiarithmetic(log_expr(), interval(0.25, 4.0)).unwrap();
        let hyp = GeneratorPair::trig(
            &TrigPair { a: 1.0, phi: Expr::var(), scale_by_phi_prime: false },
            interval(0.1, 3.6),
        )
        .unwrap();
        let pow = GeneratorPair::power(2.0, 1.0, interval(0.5, 5.0)).unwrap();
        let instances: Vec<(&str, &GeneratorPair, Measure, f64)> = vec![
            ("(log,1) atoms x=1", &log_pair, Measure::endpoint_atoms(), 1.0),
            ("(log,1) lebesgue x=2", &log_pair, Measure::lebesgue(), 2.0),
            ("(sinh,cosh) atoms x=0.5", &hyp, Measure::endpoint_atoms(), 0.5),
            ("power(2,1) lebesgue x=2", &pow, Measure::lebesgue(), 2.0),
            (
                "power(2,1) mn(0.25) x=3",
                &pow,
                mn_measure(0.25, MnKind::TwoAtoms).unwrap(),
                3.0,
            ),
        ];
        let mut worst: f64 = 0.0;
        for (label, pair, m, x) in &instances {
            let res = diagonal::finite_difference_check(pair, m, *x, &[2, 4])
                .map_err(|e| e.to_string())?;
            let (r2, r4) = (res.d2.unwrap(), res.d4.unwrap());
            worst = worst.max(r2).max(r4);
            ensure(r2 <= 1e-6, format!("{label}: d2 residual {r2:e}"))?;
            ensure(r4 <= 1e-6, format!("{label}: d4 residual {r4:e}"))?;
        }
        Ok(format!("5 instances, worst residual {worst:.2e}"))
    });
}

#[test]
fn criterion_5_equality_chain() {
    run(5, "five-condition equality chain", f64::INFINITY, || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let opts = CheckOptions { func_points: 33, mean_grid: 7, ..Default::default() };

        // 10 random (pair, nonsingular transform) positive instances.
        for i in 0..10 {
            let pair = match i % 3 {
                0 => {
                    let a = rng.gen_range(1.2..2.6);
                    let b = rng.gen_range(-1.0..0.4);
                    GeneratorPair::power(a, b, interval(0.6, 3.0)).map_err(|e| e.to_string())?
                }
                1 => GeneratorPair::trig(
                    &TrigPair {
                        a: 1.0,
                        phi: expr::mul(Expr::constant(rng.gen_range(0.4..1.0)), Expr::var()),
                        scale_by_phi_prime: false,
                    },
                    interval(0.2, 1.4),
                )
                .map_err(|e| e.to_string())?,
                _ => GeneratorPair::trig(
                    &TrigPair {
                        a: -1.0,
                        phi: expr::mul(Expr::constant(rng.gen_range(0.4..0.9)), Expr::var()),
                        scale_by_phi_prime: false,
                    },
                    interval(0.1, 1.3),
                )
                .map_err(|e| e.to_string())?,
            };
            let transformed = loop {
                let m: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.2..1.2));
                if (m[0] * m[3] - m[1] * m[2]).abs() < 0.2 {
                    continue;
                }
                if let Ok(t) = pair.equivalent_transform(m[0], m[1], m[2], m[3]) {
                    if t.validate().is_ok() {
                        break t;
                    }
                }
            };
            let m = if i % 2 == 0 { Measure::endpoint_atoms() } else { Measure::lebesgue() };
            let report = equality::check_equality_chain(&pair, &transformed, &m, &opts)
                .map_err(|e| e.to_string())?;
            ensure(
                report.all_passed() && report.verdict == Verdict::Equal,
                format!("positive instance {i}: {report:?}"),
            )?;
        }

        // 10 perturbed negative controls: quasiarithmetic pairs share Ψ ≡ 0,
        // so the hypothesis holds while every condition fails.
        for j in 0..10 {
            let (pair1, pair2) = if j % 2 == 0 {
                let s = rng.gen_range(1.5..2.8);
                let delta = rng.gen_range(0.35..0.8);
                (
                    GeneratorPair::quasiarithmetic(
                        Expr::apply(Elementary::Pow(s), Expr::var()),
                        interval(0.6, 3.0),
                    )
                    .map_err(|e| e.to_string())?,
                    GeneratorPair::quasiarithmetic(
                        Expr::apply(Elementary::Pow(s + delta), Expr::var()),
                        interval(0.6, 3.0),
                    )
                    .map_err(|e| e.to_string())?,
                )
            } else {
                let c1 = rng.gen_range(0.4..0.9);
                let c2 = c1 + rng.gen_range(0.3..0.6);
                let exp_gen = |c: f64| {
                    GeneratorPair::quasiarithmetic(
                        Expr::apply(Elementary::Exp, expr::mul(Expr::constant(c), Expr::var())),
                        interval(0.2, 1.5),
                    )
                };
                (
                    exp_gen(c1).map_err(|e| e.to_string())?,
                    exp_gen(c2).map_err(|e| e.to_string())?,
                )
            };
            let m = if j % 2 == 0 { Measure::endpoint_atoms() } else { Measure::lebesgue() };
            let report = equality::check_equality_chain(&pair1, &pair2, &m, &opts)
                .map_err(|e| e.to_string())?;
            for id in ["i", "iii", "iv", "v"] {
                ensure(
                    !report.condition(id).unwrap().passed,
                    format!("negative control {j}: condition {id} unexpectedly passed"),
                )?;
            }
            ensure(report.verdict == Verdict::NotEqual, format!("negative control {j} verdict"))?;
        }
        Ok("10 positive instances all-true, 10 negative controls refuted".into())
    });
}

#[test]
fn criterion_6_intersection_demo() {
    run(6, "Bajraktarevic-Cauchy intersection demo", 30.0, || {
        let opts = CheckOptions::default();
        let results = equality::intersection_demo(&equality::default_demo_suite(), &opts)
            .map_err(|e| e.to_string())?;
        let expected_constants: [(&str, f64, f64); 3] =
            [("a", 1.0, 0.0), ("a", -1.0, -1.0), ("a", 0.0, 0.0)];
        for (res, (_, want_a, want_b)) in results.iter().zip(expected_constants) {
            ensure(
                res.report.verdict == Verdict::Equal && res.report.all_passed(),
                format!("{}: {:?}", res.label, res.report),
            )?;
            ensure(
                res.matches_quasiarithmetic && res.quasi_residual <= 1e-10,
                format!("{}: A_phi residual {:e}", res.label, res.quasi_residual),
            )?;
            let cond_iv = res.report.condition("iv").unwrap();
            let a = cond_iv.constants["a"];
            let b = cond_iv.constants["b"];
            ensure(
                (a - want_a).abs() <= 1e-8 && (b - want_b).abs() <= 1e-8,
                format!("{}: extracted a = {a}, b = {b}", res.label),
            )?;
            let eta = res.report.condition("v").unwrap().constants["eta"];
            ensure((eta - 1.0).abs() <= 1e-8, format!("{}: eta = {eta}", res.label))?;
        }
        Ok(format!(
            "3 instances certified; worst A_phi residual {:.2e}",
            results.iter().map(|r| r.quasi_residual).fold(0.0_f64, f64::max)
        ))
    });
}

#[test]
fn criterion_7_alzer_ruscheweyh_scan() {
    run(7, "Gini/Stolarsky intersection scan", 300.0, || {
        let grid = equality::parameter_grid(-3.0, 3.0, 21);
        let panel = equality::default_scan_panel();
        let hits = equality::gini_stolarsky_scan(&grid, &grid, &panel, 1e-6)
            .map_err(|e| e.to_string())?;
        ensure(!hits.is_empty(), "scan found no hits at all")?;
        let anomalous: Vec<_> = hits
            .iter()
            .filter(|h| h.classification == Classification::Anomalous)
            .collect();
        ensure(
            anomalous.is_empty(),
            format!("{} anomalous hits, first: {:?}", anomalous.len(), anomalous.first()),
        )?;
        Ok(format!("{} hits over 21^4 parameter combinations, all power-consistent", hits.len()))
    });
}

#[test]
fn criterion_8_family_consistency_identities() {
    run(8, "mean-family consistency identities", f64::INFINITY, || {
        let grid9 = |dom: Interval| -> Vec<(f64, f64)> {
            let xs = dom.interior_grid(9, 0.05);
            xs.iter().flat_map(|&x| xs.iter().map(move |&y| (x, y))).collect()
        };
        let tol = 1e-11;
        let dom = interval(0.5, 4.0);

        // H_a = G_{a,0} = S_{2a,a} and H_0 = G_{a,-a} = S_{a,-a}
        for &a in &[-1.3, 0.6, 2.0] {
            for &(x, y) in &grid9(dom) {
                let h = mean::eval_power(a, x, y).map_err(|e| e.to_string())?;
                let g = mean::eval_gini(a, 0.0, x, y).map_err(|e| e.to_string())?;
                let s = mean::eval_stolarsky(2.0 * a, a, x, y).map_err(|e| e.to_string())?;
                ensure((h - g).abs() <= tol, format!("H_a vs G_(a,0) at a={a}"))?;
                ensure((h - s).abs() <= tol, format!("H_a vs S_(2a,a) at a={a}"))?;
                let h0 = mean::eval_power(0.0, x, y).map_err(|e| e.to_string())?;
                let g0 = mean::eval_gini(a, -a, x, y).map_err(|e| e.to_string())?;
                let s0 = mean::eval_stolarsky(a, -a, x, y).map_err(|e| e.to_string())?;
                ensure((h0 - g0).abs() <= tol, format!("H_0 vs G_(a,-a) at a={a}"))?;
                ensure((h0 - s0).abs() <= tol, format!("H_0 vs S_(a,-a) at a={a}"))?;
            }
        }

        // B_{f,1} = A_f for f = log and f = x².
        for f in [log_expr(), Expr::apply(Elementary::Pow(2.0), Expr::var())] {
            let pair = GeneratorPair::quasiarithmetic(f.clone(), dom).map_err(|e| e.to_string())?;
            for &(x, y) in &grid9(dom) {
                let b = mean::eval_bajraktarevic(&pair, x, y).map_err(|e| e.to_string())?;
                let q = mean::eval_quasiarithmetic(&f, dom, x, y).map_err(|e| e.to_string())?;
                ensure((b - q).abs() <= tol, format!("B_(f,1) vs A_f at ({x}, {y})"))?;
            }
        }

        // C_{φ²,φ} = A_φ for φ = id and φ = log (on a log-friendly domain).
        let cases = [
            (Expr::var(), dom),
            (log_expr(), interval(1.2, 6.0)),
        ];
        for (phi, cdom) in cases {
            let phi_sq = expr::mul(phi.clone(), phi.clone());
            for &(x, y) in &grid9(cdom) {
                let c = mean::eval_cauchy(&phi_sq, &phi, cdom, x, y).map_err(|e| e.to_string())?;
                let q = mean::eval_quasiarithmetic(&phi, cdom, x, y).map_err(|e| e.to_string())?;
                ensure((c - q).abs() <= tol, format!("C vs A at ({x}, {y})"))?;
            }
        }

        // M with ½(δ₀+δ₁) is the Bajraktarević formula: compare the measure
        // route against a direct ratio inversion.
        let pair = GeneratorPair::power(2.0, 1.0, dom).map_err(|e| e.to_string())?;
        for &(x, y) in &grid9(dom) {
            let via_measure = mean::eval_generalized(&pair, &Measure::endpoint_atoms(), x, y)
                .map_err(|e| e.to_string())?;
            // (x², x): B = (x²+y²)/(x+y), the ratio f/g = z inverted directly.
            let direct = (x * x + y * y) / (x + y);
            ensure(
                (via_measure - direct).abs() <= tol,
                format!("M vs B at ({x}, {y}): {via_measure} vs {direct}"),
            )?;
        }

        // M of derivatives under λ is the Cauchy mean.
        let cube = Expr::apply(Elementary::Pow(3.0), Expr::var());
        let sq = Expr::apply(Elementary::Pow(2.0), Expr::var());
        let derived =
            GeneratorPair::cauchy_derived(&cube, &sq, dom).map_err(|e| e.to_string())?;
        for &(x, y) in &grid9(dom) {
            let via_measure = mean::eval_generalized(&derived, &Measure::lebesgue(), x, y)
                .map_err(|e| e.to_string())?;
            let direct = mean::eval_cauchy(&cube, &sq, dom, x, y).map_err(|e| e.to_string())?;
            ensure(
                (via_measure - direct).abs() <= tol,
                format!("M' vs C at ({x}, {y}): {via_measure} vs {direct}"),
            )?;
        }
        Ok("six identity groups hold at 1e-11 on 9x9 grids".into())
    });
}

#[test]
fn criterion_9_property_suites() {
    run(9, "randomized property suites", f64::INFINITY, || {
        let mut rng = ChaCha8Rng::seed_from_u64(40_320);

        // Internality, symmetry, reflexivity of the closed-form families.
        for _ in 0..10_000 {
            let a: f64 = rng.gen_range(-3.0..3.0);
            let b: f64 = rng.gen_range(-3.0..3.0);
            let x: f64 = rng.gen_range(0.05..20.0);
            let y: f64 = rng.gen_range(0.05..20.0);
            let (lo, hi) = (x.min(y), x.max(y));
            for v in [
                mean::eval_power(a, x, y).map_err(|e| e.to_string())?,
                mean::eval_gini(a, b, x, y).map_err(|e| e.to_string())?,
                mean::eval_stolarsky(a, b, x, y).map_err(|e| e.to_string())?,
            ] {
                ensure(lo - 1e-9 <= v && v <= hi + 1e-9, format!("internality: {v} vs [{lo}, {hi}]"))?;
            }
            let s1 = mean::eval_stolarsky(a, b, x, y).map_err(|e| e.to_string())?;
            let s2 = mean::eval_stolarsky(a, b, y, x).map_err(|e| e.to_string())?;
            ensure((s1 - s2).abs() <= 1e-9, "stolarsky symmetry")?;
            let r = mean::eval_gini(a, b, x, x).map_err(|e| e.to_string())?;
            ensure((r - x).abs() <= 1e-13 * x.max(1.0), "gini reflexivity")?;
        }

        // Generator means: internality, symmetry under symmetric measures,
        // reflexivity, and invariance under random generator mixings.
        let dom = interval(0.5, 4.0);
        let pairs = vec![
            GeneratorPair::power(2.0, 1.0, dom).map_err(|e| e.to_string())?,
            GeneratorPair::quasiarithmetic(log_expr(), dom).map_err(|e| e.to_string())?,
            GeneratorPair::trig(
                &TrigPair { a: 1.0, phi: Expr::var(), scale_by_phi_prime: false },
                dom,
            )
            .map_err(|e| e.to_string())?,
        ];
        let measures =
            vec![Measure::endpoint_atoms(), Measure::lebesgue(), mn_measure(0.2, MnKind::TwoAtoms).unwrap()];
        for pair in &pairs {
            for m in &measures {
                for _ in 0..25 {
                    let x = rng.gen_range(0.6..3.8);
                    let y = rng.gen_range(0.6..3.8);
                    let v = mean::eval_generalized(pair, m, x, y).map_err(|e| e.to_string())?;
                    ensure(x.min(y) <= v && v <= x.max(y), "generator-mean internality")?;
                    let w = mean::eval_generalized(pair, m, y, x).map_err(|e| e.to_string())?;
                    ensure((v - w).abs() <= 1e-11, "generator-mean symmetry")?;
                    let r = mean::eval_generalized(pair, m, x, x).map_err(|e| e.to_string())?;
                    ensure((r - x).abs() <= 1e-13, "generator-mean reflexivity")?;
                }
                // A random positivity-preserving mixing must fix the mean.
                let mixed = loop {
                    let t: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                    if (t[0] * t[3] - t[1] * t[2]).abs() < 0.2 {
                        continue;
                    }
                    if let Ok(tp) = pair.equivalent_transform(t[0], t[1], t[2], t[3]) {
                        if tp.validate().is_ok() {
                            break tp;
                        }
                    }
                };
                // and must be detected as an equivalent pair.
                let grid = dom.chebyshev_points(17);
                ensure(
                    pair.are_equivalent(&mixed, &grid, 1e-9).map_err(|e| e.to_string())?,
                    "mixed pair not detected as equivalent",
                )?;
                for _ in 0..10 {
                    let x = rng.gen_range(0.6..3.8);
                    let y = rng.gen_range(0.6..3.8);
                    let v1 = mean::eval_generalized(pair, m, x, y).map_err(|e| e.to_string())?;
                    let v2 = mean::eval_generalized(&mixed, m, x, y).map_err(|e| e.to_string())?;
                    ensure((v1 - v2).abs() <= 1e-11, format!("mixing invariance: {v1} vs {v2}"))?;
                }
            }
        }

        // V-derivative cascade identities on random pairs and exponents.
        for pair in &pairs {
            for _ in 0..8 {
                let p = rng.gen_range(0.3..2.0);
                let x = rng.gen_range(0.7..3.6);
                let w10 = pair.w10_jet(x, 6).map_err(|e| e.to_string())?;
                let v = Elementary::AbsPow(-p).apply(w10).map_err(|e| e.to_string())?;
                let phi = -(v.derivative().try_div(v).map_err(|e| e.to_string())?);
                let vd: Vec<f64> = (0..=5).map(|k| v.derivative_value(k)).collect();
                let ph: Vec<f64> = (0..=4).map(|k| phi.derivative_value(k)).collect();
                let expected = [
                    -vd[0] * ph[0],
                    vd[0] * (ph[0] * ph[0] - ph[1]),
                    vd[0] * (-ph[0].powi(3) + 3.0 * ph[1] * ph[0] - ph[2]),
                    vd[0]
                        * (ph[0].powi(4) - 6.0 * ph[1] * ph[0] * ph[0]
                            + 4.0 * ph[2] * ph[0]
                            + 3.0 * ph[1] * ph[1]
                            - ph[3]),
                    vd[0]
                        * (-ph[0].powi(5) + 10.0 * ph[1] * ph[0].powi(3)
                            - 15.0 * ph[1] * ph[1] * ph[0]
                            - 10.0 * ph[2] * ph[0] * ph[0]
                            + 10.0 * ph[2] * ph[1]
                            + 5.0 * ph[3] * ph[0]
                            - ph[4]),
                ];
                for (k, want) in expected.iter().enumerate() {
                    let got = vd[k + 1];
                    let scale = want.abs().max(vd[0].abs()).max(1e-30);
                    ensure(
                        ((got - want) / scale).abs() <= 1e-8,
                        format!("V-cascade order {} at x={x}, p={p}", k + 1),
                    )?;
                }
            }
        }

        // Wronskian determinant formula with random orders.
        for pair in &pairs {
            for _ in 0..20 {
                let x = rng.gen_range(0.7..3.6);
                let i = rng.gen_range(0..=4usize);
                let j = rng.gen_range(0..=4usize);
                let table = diagonal::recursion_table(pair, x).map_err(|e| e.to_string())?;
                let w10 = pair.wronskian(1, 0, x).map_err(|e| e.to_string())?;
                let direct = pair.wronskian(i, j, x).map_err(|e| e.to_string())?;
                let via = (table.phi[i].value() * table.psi[j].value()
                    - table.phi[j].value() * table.psi[i].value())
                    * w10;
                let scale = direct.abs().max(via.abs()).max(1.0);
                ensure(
                    ((direct - via) / scale).abs() <= 1e-9,
                    format!("W^({i},{j}) formula at x={x}"),
                )?;
            }
        }

        // Two-step recursion identity.
        for pair in &pairs {
            for _ in 0..10 {
                let x = rng.gen_range(0.7..3.6);
                ensure(
                    diagonal::two_step_check(pair, x, 1e-9).map_err(|e| e.to_string())?,
                    format!("two-step recursion identity at x={x}"),
                )?;
            }
        }

        // Bell polynomials: closed forms against the recursive definition.
        for _ in 0..50 {
            let mut xs = [0.0; 8];
            for j in [2usize, 4, 6, 8] {
                xs[j - 1] = rng.gen_range(-2.0..2.0);
            }
            for n in [2usize, 4, 6, 8] {
                for k in 1..=n {
                    let closed = bell::closed_form(n, k, &xs).map_err(|e| e.to_string())?;
                    let rec = bell::recursive(n, k, &xs);
                    ensure(
                        (closed - rec).abs() <= 1e-12 * closed.abs().max(1.0),
                        format!("Bell B_({n},{k})"),
                    )?;
                }
            }
        }

        // Evenness of the diagonal slice for symmetric measures.
        let pair = &pairs[0];
        for m in &measures {
            for _ in 0..10 {
                let x = rng.gen_range(1.0..3.0);
                let u = rng.gen_range(0.0..0.8);
                let plus = mean::eval_generalized(pair, m, x + 0.5 * u, x - 0.5 * u)
                    .map_err(|e| e.to_string())?;
                let minus = mean::eval_generalized(pair, m, x - 0.5 * u, x + 0.5 * u)
                    .map_err(|e| e.to_string())?;
                ensure((plus - minus).abs() <= 1e-12, "slice evenness")?;
            }
        }

        Ok("internality/symmetry/reflexivity, mixing invariance, V-cascade, W-formula, two-step recursion, Bell".into())
    });
}

/// Sanity check that the grid machinery the criteria rely on behaves: the
/// comparison grid must contain near-diagonal and far-from-diagonal points.
#[test]
fn comparison_grid_shape() {
    let dom = interval(0.0, 1.0);
    let grid = equality::mean_comparison_grid(dom, 9);
    assert!(grid.iter().any(|&(x, y)| (x - y).abs() < 0.01));
    assert!(grid.iter().any(|&(x, y)| (x - y).abs() > 0.5));
    let _ = Jet::variable(0.5);
    let _ = MeanSpec::Power { a: 1.0 };
}
