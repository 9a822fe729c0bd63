//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every criterion is reported even when
//! an earlier one fails; the process exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spiralkit::bounds::{
    alpha_grid, bound_m_digamma, bound_m_series, bound_n, ratio_nm, seq_a, seq_b, seq_c, AlphaParam,
};
use spiralkit::classify::{
    check_hereditary_strongly_starlike, coefficient_condition, convolution_direct,
    convolution_scan, convolution_test_series, silverman_condition, spiral_quotient, GridSpec,
};
use spiralkit::geometry::{lambda_arg, principal, SpiralFrame};
use spiralkit::harmonic::HarmonicMap;
use spiralkit::oracles::{crosscheck_spirallike, crosscheck_strongly_starlike, CrossReport};
use spiralkit::radius::find_radius;
use spiralkit::series::TruncatedSeries;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let k = HarmonicMap::harmonic_koebe();
    let z0 = c(1.0, 2.0) / 3.0;
    let (f, df) = k.eval_f_and_d(z0);
    let q = spiral_quotient(&k, z0, &SpiralFrame::starlike()).map_err(|e| e.to_string())?;
    let ef = (f - c(-17.0, 9.0) / 24.0).norm();
    let ed = (df - c(-15.0, -30.0) / 16.0).norm();
    let eq = (q + 9.0 / 148.0).abs();
    within(start.elapsed(), Duration::from_secs(1))?;
    check(ef <= 1e-12 && ed <= 1e-12 && eq <= 1e-12, || {
        format!("errors k {ef:e}, Dk {ed:e}, quotient {eq:e}")
    })?;
    Ok(format!(
        "Re(Dk/k)(z0) = {q}; errors {ef:.1e}, {ed:.1e}, {eq:.1e}"
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let k = HarmonicMap::harmonic_koebe();
    let out = find_radius(&k, &SpiralFrame::starlike(), 1e-6).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let r = out
        .bracket()
        .ok_or_else(|| format!("no bracket: {out:?}"))?;
    within(elapsed, Duration::from_secs(60))?;
    check(r.upper - r.lower <= 1e-6, || {
        format!("width {}", r.upper - r.lower)
    })?;
    check(r.lower > 0.572154 && r.upper < 0.572155, || {
        format!(
            "bracket [{}, {}] not inside (0.572154, 0.572155)",
            r.lower, r.upper
        )
    })?;
    Ok(format!(
        "bracket [{:.10}, {:.10}] in {elapsed:.2?}",
        r.lower, r.upper
    ))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for alpha in alpha_grid() {
        let a = AlphaParam::new(alpha).unwrap();
        let (s, d) = (bound_m_series(&a), bound_m_digamma(&a));
        worst = worst.max((s - d).abs() / d.max(1.0));
    }
    check(worst <= 1e-10, || {
        format!("M forms differ by {worst:e} (relative)")
    })?;
    let half = AlphaParam::new(0.5).unwrap();
    let em = (bound_m_digamma(&half) - 2.0 * FRAC_PI_2.exp()).abs();
    let en = (bound_n(&half) - FRAC_PI_2 * PI.exp()).abs();
    check(em <= 1e-9 && en <= 1e-9, || {
        format!("M(0.5) error {em:e}, N(0.5) error {en:e}")
    })?;
    Ok(format!(
        "max relative M-form gap {worst:.1e}; M(0.5) err {em:.1e}, N(0.5) err {en:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let mut max_ratio: f64 = 0.0;
    for alpha in alpha_grid() {
        let r = ratio_nm(&AlphaParam::new(alpha).unwrap()).map_err(|e| e.to_string())?;
        check(r <= 2.0 * PI, || format!("N/M = {r} > 2π at α = {alpha}"))?;
        max_ratio = max_ratio.max(r);
    }
    let limit = ratio_nm(&AlphaParam::new(0.999).unwrap()).map_err(|e| e.to_string())?;
    check((limit - 2.0 * PI).abs() < 0.02, || {
        format!("N/M(0.999) = {limit}")
    })?;
    Ok(format!(
        "max N/M on grid {max_ratio:.6}; N/M(0.999) = {limit:.6}"
    ))
}

fn criterion_5() -> Outcome {
    let mut worst_a1: f64 = 0.0;
    for alpha in alpha_grid() {
        let a = AlphaParam::new(alpha).unwrap();
        let two_sin = 2.0 * a.sin_half();
        worst_a1 = worst_a1.max((seq_a(1, &a) - two_sin).abs());
        for n in 2..=100u32 {
            let (an, bn) = (seq_a(n, &a), seq_b(n, &a));
            check(f64::from(n) * two_sin < an && an < bn, || {
                format!(
                    "chain broken at n = {n}, α = {alpha}: {} < {an} < {bn}",
                    f64::from(n) * two_sin
                )
            })?;
        }
    }
    check(worst_a1 <= 1e-12, || {
        format!("A_1 deviates by {worst_a1:e}")
    })?;
    Ok(format!(
        "9801 strict chains hold; max |A_1 − 2 sin(πα/2)| = {worst_a1:.1e}"
    ))
}

fn sharp_grid() -> GridSpec {
    GridSpec {
        r_max: 0.9999,
        angular: 1024,
        ..GridSpec::default()
    }
}

fn criterion_6() -> Outcome {
    let grid = sharp_grid();
    let mut cases = 0;
    for n in [1u32, 2, 3, 5] {
        for alpha in [0.25, 0.5, 0.75] {
            let a = AlphaParam::new(alpha).unwrap();
            let cn = seq_c(n, &a);
            let [plus, minus] = SpiralFrame::strong_pair(alpha).unwrap();
            let frames = [plus, minus];
            let tag = format!("n = {n}, α = {alpha}");

            let below = HarmonicMap::family(Complex64::from_polar(0.99 * cn, 0.37), n).unwrap();
            let coeff = coefficient_condition(&below, alpha).unwrap();
            check(coeff.is_pass(), || {
                format!("{tag}: 0.99·C_n coefficient {coeff:?}")
            })?;
            let v = check_hereditary_strongly_starlike(&below, alpha, &grid).unwrap();
            check(v.is_pass(), || format!("{tag}: 0.99·C_n grid {v:?}"))?;
            for fr in &frames {
                let hit = convolution_scan(&below, fr, &grid).unwrap();
                check(hit.is_none(), || {
                    format!("{tag}: 0.99·C_n convolution vanishes at {hit:?}")
                })?;
            }

            let above = HarmonicMap::family(Complex64::from_polar(1.01 * cn, 0.37), n).unwrap();
            let mut conv_hit = None;
            for fr in &frames {
                if let Some(z) = convolution_scan(&above, fr, &grid).unwrap() {
                    conv_hit = Some(z);
                    break;
                }
            }
            check(conv_hit.is_some(), || {
                format!("{tag}: 1.01·C_n convolution test never fails")
            })?;
            let v = check_hereditary_strongly_starlike(&above, alpha, &grid).unwrap();
            check(v.is_fail(), || format!("{tag}: 1.01·C_n grid {v:?}"))?;
            let w = v.witness().unwrap();
            // the witness must violate |arg Df/f| < πα/2 (or sit in the origin limit)
            if w.norm() > 1e-3 {
                let (fw, dw) = above.eval_f_and_d(w);
                let arg = (dw / fw).arg().abs();
                check(arg > FRAC_PI_2 * alpha, || {
                    format!("{tag}: witness {w} has |arg| {arg}")
                })?;
            }
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} (n, α) cases: 0.99·C_n passes all three, 1.01·C_n fails both with witnesses"
    ))
}

fn random_custom(rng: &mut ChaCha8Rng, degree: usize, scale: f64) -> HarmonicMap {
    let mut h = vec![c(0.0, 0.0), c(1.0, 0.0)];
    let mut g = vec![c(0.0, 0.0)];
    for _ in 2..=degree {
        h.push(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale);
    }
    for _ in 1..=degree {
        g.push(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale);
    }
    HarmonicMap::custom(TruncatedSeries::new(h), TruncatedSeries::new(g))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let custom = random_custom(&mut rng, 6, 0.05);
    let catalog = [
        HarmonicMap::identity(),
        HarmonicMap::harmonic_koebe(),
        HarmonicMap::family(c(0.3, 0.2), 3).unwrap(),
        custom,
    ];
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for f in &catalog {
        let mut worst: f64 = 0.0;
        let mut worst_z = c(0.0, 0.0);
        for _ in 0..16 {
            let z = Complex64::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI));
            let zeta = Complex64::from_polar(1.0, rng.gen_range(-PI..PI));
            let frame = SpiralFrame::new(rng.gen_range(-1.5..1.5)).unwrap();
            let diff = (convolution_test_series(f, &frame, zeta, z)
                - convolution_direct(f, &frame, zeta, z))
            .norm();
            if diff > worst {
                worst = diff;
                worst_z = z;
            }
        }
        summary.push(format!("{} {worst:.1e}", f.name()));
        if !(worst <= 1e-8) {
            failures.push(format!(
                "{}: max |series − direct| = {worst:.3e} at |z| = {:.3} (degree {}, agreement holds for |z| <= {:.2})",
                f.name(),
                worst_z.norm(),
                f.h_series().degree(),
                truncation_radius(f)
            ));
        }
    }
    if failures.is_empty() {
        Ok(summary.join(", "))
    } else {
        Err(failures.join("; "))
    }
}

/// Largest radius on a 0.01 grid up to which the series form stays within
/// 1e-8 of the direct form on 64 angles and a few (ζ, λ).
fn truncation_radius(f: &HarmonicMap) -> f64 {
    let mut good = 0.0;
    for k in 1..100 {
        let r = 0.01 * f64::from(k);
        let ok = (0..64).all(|j| {
            let z = Complex64::from_polar(r, PI * f64::from(j) / 32.0);
            [(0.0, 0.0), (2.0, 0.7), (-1.0, -1.2)]
                .iter()
                .all(|&(t, l)| {
                    let frame = SpiralFrame::new(l).unwrap();
                    let zeta = Complex64::from_polar(1.0, t);
                    (convolution_test_series(f, &frame, zeta, z)
                        - convolution_direct(f, &frame, zeta, z))
                    .norm()
                        <= 1e-8
                })
        });
        if !ok {
            break;
        }
        good = r;
    }
    good
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let maps = [
        HarmonicMap::identity(),
        HarmonicMap::family(c(0.1, 0.05), 2).unwrap(),
        random_custom(&mut rng, 5, 0.02),
    ];
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for f in &maps {
        for lambda in [0.0, 0.5, -0.9] {
            let frame = SpiralFrame::new(lambda).unwrap();
            for r in [0.3, 0.6, 0.9] {
                for j in 0..64 {
                    let theta = PI * (2.0 * f64::from(j) + 0.5) / 64.0;
                    let phi =
                        |t: f64| lambda_arg(f.eval_f(Complex64::from_polar(r, t)), &frame).unwrap();
                    let fd = principal(phi(theta + h) - phi(theta - h)) / (2.0 * h);
                    let q = spiral_quotient(f, Complex64::from_polar(r, theta), &frame).unwrap();
                    check(q > 0.0, || format!("{} not passing at r = {r}", f.name()))?;
                    let err = (fd - q / frame.cos()).abs();
                    worst = worst.max(err);
                    check(err <= 1e-5, || {
                        format!(
                            "{} λ = {lambda} r = {r} θ = {theta}: fd {fd} vs {}",
                            f.name(),
                            q / frame.cos()
                        )
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "max |φ' − Re(e^(-iλ)Df/f)/cos λ| = {worst:.1e} over 1728 points"
    ))
}

fn tally(reports: &[CrossReport], agree: &mut usize, other: &mut usize) -> Result<(), String> {
    for rep in reports {
        check(rep.hard_mismatches() == 0, || {
            format!("hard mismatch:\n{}", rep.report())
        })?;
        for row in &rep.rows {
            if row.agreement == spiralkit::oracles::Agreement::Agree {
                *agree += 1;
            } else {
                *other += 1;
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let (mut agree, mut other) = (0, 0);
    let koebe = crosscheck_spirallike(
        &HarmonicMap::harmonic_koebe(),
        &SpiralFrame::starlike(),
        &[0.5, 0.55, 0.57, 0.575, 0.6, 0.7],
    )
    .map_err(|e| e.to_string())?;
    let flips: Vec<_> = koebe.rows.iter().map(|r| r.geometric.status()).collect();
    tally(std::slice::from_ref(&koebe), &mut agree, &mut other)?;
    let mut fails = 0;
    for n in [1u32, 2, 3, 5] {
        for alpha in [0.25, 0.5, 0.75] {
            let cn = seq_c(n, &AlphaParam::new(alpha).unwrap());
            for factor in [0.5, 1.2] {
                let f = HarmonicMap::family(Complex64::from_polar(factor * cn, 0.37), n).unwrap();
                let reps = crosscheck_strongly_starlike(&f, alpha, &[0.5, 0.9, 0.99])
                    .map_err(|e| e.to_string())?;
                fails += reps
                    .iter()
                    .flat_map(|r| &r.rows)
                    .filter(|row| row.analytic.is_fail() && row.geometric.is_fail())
                    .count();
                tally(&reps, &mut agree, &mut other)?;
            }
        }
    }
    Ok(format!(
        "0 hard mismatches; {agree} agreeing rows ({fails} joint FAILs), {other} other; Koebe geometric {flips:?}"
    ))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let grid = GridSpec::default();
    let mut min_margin = f64::INFINITY;
    for case in 0..500 {
        let alpha = rng.gen_range(0.05..0.95);
        let a = AlphaParam::new(alpha).unwrap();
        let degree = rng.gen_range(2..=8);
        let raw = random_custom(&mut rng, degree, 1.0);
        let bound = 2.0 * a.sin_half();
        let sum = spiralkit::classify::strong_coefficient_sum(&raw, &a);
        let slack = rng.gen_range(1e-3..0.5 * bound);
        let t = (bound - slack) / sum;
        let h: Vec<Complex64> = raw
            .h_series()
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, &v)| if k == 1 { v } else { v * t })
            .collect();
        let g: Vec<Complex64> = raw.g_series().coeffs().iter().map(|&v| v * t).collect();
        let f = HarmonicMap::custom(TruncatedSeries::new(h), TruncatedSeries::new(g));
        let coeff = coefficient_condition(&f, alpha).unwrap();
        check(
            coeff.is_pass() && coeff.margin() >= 1e-3 * (1.0 - 1e-9),
            || format!("case {case}: scaled slack {}", coeff.margin()),
        )?;
        let v = check_hereditary_strongly_starlike(&f, alpha, &grid).unwrap();
        check(v.is_pass(), || {
            format!("case {case} (α = {alpha}): grid {v:?}")
        })?;
        let s = silverman_condition(&f);
        check(s.is_pass(), || format!("case {case}: Silverman {s:?}"))?;
        min_margin = min_margin.min(v.margin());
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "500 maps pass the grid and Silverman checks; min grid margin {min_margin:.2e}, {:.1?}",
        start.elapsed()
    ))
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().to_str().unwrap().to_string();
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_spiralkit"))
        .args(["figure1", "--out", &out])
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    check(status.success(), || format!("figure1 exited with {status}"))?;
    let csv = std::fs::read_to_string(dir.path().join("figure1.csv")).map_err(|e| e.to_string())?;
    let mut lines = csv.lines();
    check(lines.next() == Some("alpha,logM,logN"), || {
        "bad header".into()
    })?;
    let rows: Vec<[f64; 3]> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    check(rows.len() == 197, || format!("{} rows", rows.len()))?;
    for w in rows.windows(2) {
        check(w[1][1] > w[0][1] && w[1][2] > w[0][2], || {
            format!("not increasing at α = {}", w[1][0])
        })?;
    }
    for r in &rows {
        check(r[2] > r[1], || format!("log N ≤ log M at α = {}", r[0]))?;
    }
    let svg = std::fs::read_to_string(dir.path().join("figure1.svg")).map_err(|e| e.to_string())?;
    let doc = roxmltree::Document::parse(&svg).map_err(|e| format!("SVG not well-formed: {e}"))?;
    let polylines = doc
        .descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .count();
    check(polylines == 2, || format!("{polylines} polylines"))?;
    Ok("197 rows, log N > log M, both increasing; SVG parses with 2 polylines".into())
}

fn criterion_12() -> Outcome {
    let k = HarmonicMap::harmonic_koebe();
    let tip = k.eval_f(c(-0.9999, 0.0));
    let err = (tip + 1.0 / 6.0).norm();
    check(err < 1e-4, || format!("|k(−0.9999) + 1/6| = {err:e}"))?;
    Ok(format!(
        "k(−0.9999) = {}, distance to −1/6 = {err:.2e}",
        tip.re
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("harmonic Koebe counterexample at z0", criterion_1),
        ("radius bracket of the harmonic Koebe map", criterion_2),
        ("two forms of M agree; M(0.5), N(0.5)", criterion_3),
        ("N <= 2 pi M and the limit 2 pi", criterion_4),
        ("chain 2n sin < A_n < B_n and A_1", criterion_5),
        ("sharpness of C_n(alpha)", criterion_6),
        (
            "convolution series vs direct form at degree 64",
            criterion_7,
        ),
        ("derivative of the unwrapped lambda-argument", criterion_8),
        ("polygon oracle vs analytic verdicts", criterion_9),
        ("coefficient condition soundness sweep", criterion_10),
        ("growth-bound figure regeneration", criterion_11),
        ("slit tip of the harmonic Koebe map", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {:>2} {name}: {detail} [{elapsed:.2?}]",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "FAIL criterion {:>2} {name}: {detail} [{elapsed:.2?}]",
                    i + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
