//! Acceptance suite. Each check prints one PASS/FAIL line, visible even
//! without `--nocapture`.

use std::io::Write;
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schroeder::conjugacy::{conjugacy_residual_t, moebius, moebius_inverse, ConjugacyError};
use schroeder::iterators::{estimate_convergence_order, newton_step, schroeder_step};
use schroeder::julia::{mirrored_sign_circle, normalized_circle_exact, schroeder_julia_set};
use schroeder::validation::{boundary_report, convergence_report, seeds_near_roots, BoundarySettings};
use schroeder::{
    classify_grid, julia_locus_general, julia_locus_normalized, render_ppm, Complex, ExtendedComplex, JuliaLocus,
    MethodSpec, OrbitParams, OrbitStatus, Palette, TwoRootPolynomial, Viewport,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn conjugacy_residuals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c4d);
    let mut worst = 0.0f64;
    for m in 1..=6u32 {
        for n in 1..=6u32 {
            let (a, b) = loop {
                let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let b = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                if (a - b).norm() >= 0.5 {
                    break (a, b);
                }
            };
            let mut accepted = 0;
            while accepted < 1000 {
                let w = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                match conjugacy_residual_t(m, n, a, b, w) {
                    Ok(r) => {
                        ensure!(r <= 1e-9, "(m,n)=({m},{n}) w={w}: residual {r:e}");
                        worst = worst.max(r);
                        accepted += 1;
                    }
                    Err(ConjugacyError::PoleProximity { .. }) => continue,
                    Err(e) => return Err(format!("(m,n)=({m},{n}): {e}")),
                }
            }
        }
    }
    // (1,1): M S_f M^{-1} is w -> -w^2
    let (a, b) = (c(0.7, -0.2), c(-1.1, 0.9));
    let p = TwoRootPolynomial::new(a, b, 1, 1).unwrap();
    let mut special = 0.0f64;
    for _ in 0..1000 {
        let w = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        if (w - 1.0).norm() < 1e-3 || w.norm() < 1e-3 {
            continue;
        }
        let ExtendedComplex::Finite(z) = moebius_inverse(a, b, ExtendedComplex::Finite(w)) else {
            continue;
        };
        let s = schroeder_step(&p, z).map_err(|_| format!("singular step at {z}"))?;
        let ExtendedComplex::Finite(back) = moebius(a, b, ExtendedComplex::Finite(s)) else {
            continue;
        };
        let r = (back + w * w).norm() / (1.0 + (w * w).norm());
        special = special.max(r);
    }
    ensure!(special <= 1e-9, "(1,1) special case residual {special:e}");
    Ok(format!(
        "max residual {worst:.2e}; (1,1) -> -w^2 residual {special:.2e}"
    ))
}

fn normalized_circles() -> Outcome {
    let r = |n: i64, d: i64| Ratio::new(n, d);
    let expected = [
        ((2, 1), (r(-5, 3), r(4, 3))),
        ((5, 1), (r(-13, 12), r(5, 12))),
        ((8, 6), (r(-25, 7), r(24, 7))),
    ];
    for ((m, n), want) in expected {
        let got = normalized_circle_exact(m, n).map_err(|e| e.to_string())?;
        ensure!(got == want, "({m},{n}): got {got:?}, want {want:?}");
        // independent formula
        let (mi, ni) = (m as i64, n as i64);
        let d = mi * mi - ni * ni;
        ensure!(
            got == (r(-(mi * mi + ni * ni), d), r(2 * mi * ni, d)),
            "({m},{n}) formula mismatch"
        );
        let JuliaLocus::Circle { center, radius } = julia_locus_normalized(m, n).unwrap() else {
            return Err(format!("({m},{n}) is not a circle"));
        };
        let f = |q: Ratio<i64>| *q.numer() as f64 / *q.denom() as f64;
        ensure!(
            center == c(f(want.0), 0.0) && radius == f(want.1),
            "({m},{n}) float locus differs"
        );
    }
    match julia_locus_normalized(1, 1).unwrap() {
        JuliaLocus::Line { point, direction } => {
            ensure!(
                point.re == 0.0 && direction.re == 0.0 && direction.im != 0.0,
                "(1,1) line is not the imaginary axis"
            );
        }
        other => return Err(format!("(1,1) gave {other:?}")),
    }
    Ok("(2,1) (5,1) (8,6) circles and (1,1) axis exact".into())
}

fn general_circle_sign() -> Outcome {
    let start = Instant::now();
    let (a, b) = (c(1.0, 0.0), c(0.0, 1.0));
    let p = TwoRootPolynomial::new(a, b, 2, 1).unwrap();
    let locus = julia_locus_general(2, 1, a, b).unwrap();
    let want_center = c(-1.0, 4.0) / 3.0;
    let want_radius = 2.0 * 2f64.sqrt() / 3.0;
    ensure!(
        (locus.center().unwrap() - want_center).norm() < 1e-15 && (locus.radius().unwrap() - want_radius).abs() < 1e-15,
        "analytic circle {locus:?}"
    );
    let settings = BoundarySettings {
        n_rays: 64,
        bisect_tol: 1e-8,
        ..BoundarySettings::default()
    };
    let report = boundary_report(&p, MethodSpec::Schroeder, &locus, &settings, None).map_err(|e| e.to_string())?;
    ensure!(
        report.probes.len() >= 64 && report.failures.is_empty(),
        "{} failures",
        report.failures.len()
    );
    let max_dev = report.max_dev.unwrap();
    ensure!(max_dev <= 1e-5, "max deviation {max_dev:e}");
    let mirrored = mirrored_sign_circle(2, 1, a, b).unwrap();
    let min_mirror = report
        .probes
        .iter()
        .map(|pr| mirrored.signed_distance(pr.crossing).abs())
        .fold(f64::INFINITY, f64::min);
    ensure!(
        min_mirror > 0.5,
        "mirrored-sign circle within {min_mirror} of a crossing"
    );
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s");
    Ok(format!(
        "max_dev {max_dev:.2e}; nearest approach to mirrored circle {min_mirror:.3}; {secs:.2}s"
    ))
}

fn reference_boundaries() -> Outcome {
    let mut parts = Vec::new();
    for (m, n) in [(2, 1), (5, 1), (8, 1), (7, 6), (8, 6), (4, 2)] {
        let p = TwoRootPolynomial::new(c(1.0, 0.0), c(-1.0, 0.0), m, n).unwrap();
        let locus = schroeder_julia_set(&p).unwrap();
        let settings = BoundarySettings {
            n_rays: 64,
            ..BoundarySettings::default()
        };
        let report = boundary_report(&p, MethodSpec::Schroeder, &locus, &settings, None).map_err(|e| e.to_string())?;
        let max_dev = report.max_dev.unwrap();
        ensure!(
            report.probes.len() >= 64,
            "({m},{n}): only {} probes",
            report.probes.len()
        );
        ensure!(max_dev <= 1e-5, "({m},{n}): max deviation {max_dev:e}");
        parts.push(format!("({m},{n}) {max_dev:.1e}"));
    }
    Ok(parts.join(", "))
}

fn power_exactness() -> Outcome {
    let mut worst_newton = 0.0f64;
    let z0s = [c(0.9, 0.3), c(-2.0, 1.5), c(0.01, -0.02), c(5.0, 0.0)];
    for k in 2..=9u32 {
        let p = TwoRootPolynomial::single(c(0.0, 0.0), k).unwrap();
        for z0 in z0s {
            let z1 = schroeder_step(&p, z0).map_err(|_| "singular".to_string())?;
            ensure!(z1.norm() <= 1e-12 * z0.norm(), "k={k}: |z1|={:e}", z1.norm());
            let ratio = (k - 1) as f64 / k as f64;
            let mut z = z0;
            for _ in 0..10 {
                let next = newton_step(&p, z).map_err(|_| "singular".to_string())?;
                let err = (next.norm() / z.norm() - ratio).abs();
                ensure!(err <= 1e-12, "k={k}: Newton ratio off by {err:e}");
                worst_newton = worst_newton.max(err);
                z = next;
            }
        }
    }
    Ok(format!(
        "Schröder one-step exact for k=2..9; Newton ratio error {worst_newton:.1e}"
    ))
}

fn quadratic_order() -> Outcome {
    let p = TwoRootPolynomial::new(c(1.0, 0.0), c(-1.0, 0.0), 5, 3).unwrap();
    let seeds = seeds_near_roots(&p, 20, 0.3, 7);
    ensure!(
        seeds.iter().all(|&s| (s - p.a()).norm().min((s - p.b()).norm()) <= 0.3),
        "seed too far"
    );
    let orbit = OrbitParams {
        conv_tol: 1e-13,
        max_iter: 500,
        ..OrbitParams::default()
    };
    let mut summary = Vec::new();
    for (method, lo, hi) in [(MethodSpec::Schroeder, 1.8, 2.2), (MethodSpec::Newton, 0.9, 1.1)] {
        let report = convergence_report(&p, method, &seeds, &orbit, None).map_err(|e| e.to_string())?;
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for (i, o) in report.coc.iter().enumerate() {
            ensure!(
                matches!(o.status, OrbitStatus::ConvergedTo(_)),
                "{} seed {i}: {:?}",
                method.name(),
                o.status
            );
            let q = o
                .coc
                .ok_or_else(|| format!("{} seed {i}: no order estimate", method.name()))?;
            ensure!((lo..=hi).contains(&q), "{} seed {i}: order {q}", method.name());
            min = min.min(q);
            max = max.max(q);
        }
        summary.push(format!("{} in [{min:.3}, {max:.3}]", method.name()));
    }
    // cross-check one orbit against a direct computation of the estimate
    let z0 = seeds[0];
    let mut z = z0;
    let mut e = vec![(z - p.a()).norm()];
    for _ in 0..3 {
        z = schroeder_step(&p, z).unwrap();
        e.push((z - p.a()).norm());
    }
    let direct = (e[3] / e[2]).ln() / (e[2] / e[1]).ln();
    let via_lib = estimate_convergence_order(&e).map_err(|_| "insufficient data".to_string())?;
    ensure!(
        (direct - via_lib).abs() < 1e-12 || e[3] <= 1e2 * f64::EPSILON,
        "estimate mismatch"
    );
    Ok(summary.join("; "))
}

fn hyperbola_and_classes() -> Outcome {
    let mut count = 0;
    for m in 2..=50i128 {
        for n in 1..m {
            let lhs = (m * m + n * n).pow(2) - (2 * m * n).pow(2);
            ensure!(lhs == (m * m - n * n).pow(2), "({m},{n}) identity fails");
            ensure!(
                schroeder::julia::hyperbola_identity_exact(m as u32, n as u32),
                "library disagrees at ({m},{n})"
            );
            count += 1;
        }
    }
    let mut classes = 0;
    for m in 1..=8u32 {
        for n in 1..=m {
            let base = julia_locus_normalized(m, n).unwrap();
            for k in 1..=8 {
                ensure!(
                    julia_locus_normalized(k * m, k * n).unwrap() == base,
                    "({m},{n}) x{k} differs"
                );
                classes += 1;
            }
        }
    }
    Ok(format!("{count} integer identities; {classes} scaled pairs identical"))
}

/// Grid agreement for one configuration against its analytic locus.
fn band_check(poly: &TwoRootPolynomial, vp: &Viewport, threads: Option<usize>) -> Result<(String, Vec<u8>), String> {
    let grid =
        classify_grid(poly, MethodSpec::Schroeder, vp, &OrbitParams::default(), threads).map_err(|e| e.to_string())?;
    let locus = schroeder_julia_set(poly).unwrap();
    let agree = grid.compare_with_locus(&locus);
    ensure!(
        agree.fraction() <= 0.005,
        "disagreement {:.4}%",
        100.0 * agree.fraction()
    );
    ensure!(
        agree.outside_band == 0,
        "{} disagreeing cells beyond one pixel",
        agree.outside_band
    );
    let ppm = render_ppm(&grid, &Palette::default(), Some(&locus));
    Ok((
        format!(
            "{} / {} cells disagree ({:.3}%)",
            agree.disagreements,
            agree.cells,
            100.0 * agree.fraction()
        ),
        ppm,
    ))
}

fn basin_grid() -> Outcome {
    let start = Instant::now();
    let p = TwoRootPolynomial::new(c(1.0, 0.0), c(-1.0, 0.0), 2, 1).unwrap();
    let vp = Viewport::collapsing(512);
    ensure!(
        vp.center == c(-1.0, 0.0) && vp.width == 6.0 && vp.height == 6.0,
        "viewport {vp:?}"
    );
    let (msg, _) = band_check(&p, &vp, None)?;
    // interior of |z + 5/3| = 4/3 belongs to b, exterior to a
    let grid = classify_grid(&p, MethodSpec::Schroeder, &vp, &OrbitParams::default(), None).unwrap();
    let band = vp.pixel_diagonal();
    for j in 0..vp.px_h {
        for i in 0..vp.px_w {
            let z = vp.pixel_center(i, j);
            let d = (z - c(-5.0 / 3.0, 0.0)).norm() - 4.0 / 3.0;
            if d.abs() <= band {
                continue;
            }
            let want = if d < 0.0 {
                schroeder::Root::B
            } else {
                schroeder::Root::A
            };
            ensure!(
                grid.cell(i, j).root() == Some(want),
                "cell ({i},{j}) at {z}: {:?}",
                grid.cell(i, j)
            );
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 120.0, "took {secs:.1}s");
    Ok(format!("{msg}; interior -> b, exterior -> a; {secs:.2}s"))
}

fn determinism() -> Outcome {
    let p = TwoRootPolynomial::new(c(1.0, 0.0), c(0.0, 1.0), 2, 1).unwrap();
    let vp = Viewport::collapsing(96);
    let locus = schroeder_julia_set(&p).unwrap();
    let render = |t| {
        let g = classify_grid(&p, MethodSpec::Schroeder, &vp, &OrbitParams::default(), t).unwrap();
        render_ppm(&g, &Palette::default(), Some(&locus))
    };
    let certify = |t| {
        boundary_report(&p, MethodSpec::Schroeder, &locus, &BoundarySettings::default(), t)
            .unwrap()
            .to_json()
    };
    let (r1, c1) = (render(Some(1)), certify(Some(1)));
    for t in [Some(1), Some(2), Some(4), Some(7), None] {
        ensure!(render(t) == r1, "render bytes differ at {t:?} threads");
        ensure!(certify(t) == c1, "certify JSON differs at {t:?} threads");
    }
    Ok(format!(
        "{} PPM bytes and {} JSON bytes identical for 1/2/4/7/default threads",
        r1.len(),
        c1.len()
    ))
}

fn reference_panels() -> Outcome {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("panels");
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut panels: Vec<(String, TwoRootPolynomial)> = [(2, 1), (5, 1), (8, 1), (6, 6), (7, 6), (8, 6)]
        .into_iter()
        .map(|(m, n)| {
            (
                format!("schroeder_{m}_{n}"),
                TwoRootPolynomial::new(c(1.0, 0.0), c(-1.0, 0.0), m, n).unwrap(),
            )
        })
        .collect();
    panels.push((
        "schroeder_2_1_i".into(),
        TwoRootPolynomial::new(c(1.0, 0.0), c(0.0, 1.0), 2, 1).unwrap(),
    ));
    let mut worst = 0.0f64;
    for (name, p) in &panels {
        let vp = schroeder::config::default_viewport(p, 256, 256);
        let (_, ppm) = band_check(p, &vp, None).map_err(|e| format!("{name}: {e}"))?;
        let decoded = schroeder::ppm::decode(&ppm).map_err(|e| format!("{name}: {e}"))?;
        ensure!(decoded.width == 256 && decoded.height == 256, "{name}: bad dimensions");
        let grid = classify_grid(p, MethodSpec::Schroeder, &vp, &OrbitParams::default(), None).unwrap();
        worst = worst.max(grid.compare_with_locus(&schroeder_julia_set(p).unwrap()).fraction());
        std::fs::write(dir.join(format!("{name}.ppm")), &ppm).map_err(|e| e.to_string())?;
    }
    Ok(format!(
        "{} panels in {}; worst disagreement {:.3}%",
        panels.len(),
        dir.display(),
        100.0 * worst
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("conjugacy residuals", conjugacy_residuals),
        ("exact normalized circles", normalized_circles),
        ("general circle sign", general_circle_sign),
        ("reference boundaries", reference_boundaries),
        ("exactness on z^k", power_exactness),
        ("quadratic order at multiple roots", quadratic_order),
        ("hyperbola and p-classes", hyperbola_and_classes),
        ("basin grid agreement", basin_grid),
        ("determinism", determinism),
        ("reference panels", reference_panels),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => report(format!("PASS {:>2} {name}: {detail}", i + 1)),
            Err(detail) => {
                report(format!("FAIL {:>2} {name}: {detail}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

/// Writes past libtest's output capture so the verdicts show in plain `cargo test` runs.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}
