//! Acceptance criteria: one PASS/FAIL line each, non-zero exit on any failure.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use recoupling::asym_character::character_asym;
use recoupling::asym_threej::{pair_from_quantum, threej_asym_estimate, AxisPair, LengthConvention, SaddleBranch};
use recoupling::asym_wigner::*;
use recoupling::recoupling_exact::{character_exact_sum, threej_exact};
use recoupling::{Complex, EulerRotation, HalfInt, Precision, Spin};
use recoupling_harness::report::{fit_power, fit_slope, percentile, write_csv, write_json};
use recoupling_harness::sample::{generic_rotations, rng};
use recoupling_harness::sweep::{d_exact, eval_dmatrix};
use recoupling_harness::tables::haar_check;
use recoupling_harness::{run_sweep, Mode, Summary, SweepSpec};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn spin(j: f64) -> Spin {
    Spin::from_f64(j).unwrap()
}

fn half(m: f64) -> HalfInt {
    HalfInt::from_f64(m).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

/// `(x, y, xi^2)` on a lattice where `x J` and `y J` are integers for every `J` divisible by 20.
fn lattice() -> Vec<ReducedParams> {
    let mut out = Vec::new();
    for a in -18..=18 {
        for b in -18..=18 {
            for w in 1..=19 {
                out.push(ReducedParams::new(a as f64 / 20.0, b as f64 / 20.0, w as f64 / 20.0).unwrap());
            }
        }
    }
    out
}

fn pick<T: Clone>(mut v: Vec<T>, n: usize, seed: u64) -> Vec<T> {
    v.shuffle(&mut rng(seed));
    v.truncate(n);
    v
}

fn c1_character() -> Outcome {
    let start = Instant::now();
    let rots = generic_rotations(1, 100);
    let worst = (1..=100u32)
        .into_par_iter()
        .map(|tj| {
            let j = Spin::from_twice(tj);
            rots.iter()
                .map(|g| (character_asym(j, g) - character_exact_sum(j, g).re).abs() / (tj + 1) as f64)
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let t = start.elapsed();
    outcome(
        worst <= 1e-10 && t <= Duration::from_secs(30),
        format!("100 spins x 100 rotations, max |asym - exact|/(2J+1) = {worst:.2e} (<= 1e-10), {}", secs(t)),
    )
}

fn c2_oscillatory() -> Outcome {
    let start = Instant::now();
    // Delta >= 0.15 keeps every point outside the transition band at J = 20.
    let cand: Vec<ReducedParams> =
        lattice().into_iter().filter(|p| p.delta >= 0.15 && boundary_exponent(p.x, p.y, p.xi2) < 0.0).collect();
    let available = cand.len();
    let points = pick(cand, 60, 2);
    let mut r = rng(3);
    let angles: Vec<(f64, f64)> = points.iter().map(|_| (r.random_range(-PI..PI), r.random_range(-PI..PI))).collect();
    let spins = [20.0, 40.0, 80.0, 160.0];
    let mut records = Vec::new();
    let mut keys = Vec::new();
    for &jv in &spins {
        let j = spin(jv);
        let batch: Vec<_> = points
            .par_iter()
            .zip(&angles)
            .map(|(p, &(a, c))| {
                let g = EulerRotation::from_xi2(a, p.xi2, c).unwrap();
                eval_dmatrix(j, half(p.x * jv), half(p.y * jv), &g, Mode::Compare, 1.0, Precision::DEFAULT)
            })
            .collect();
        keys.extend(std::iter::repeat_n(jv, batch.len()));
        records.extend(batch);
    }
    let s = Summary::from_records(&records, &keys);
    let all_osc = records.iter().all(|r| r.region.as_deref() == Some("oscillatory") && r.em_reliable == Some(true));
    let worst = records.iter().map(|r| r.abs_err.unwrap() * r.j1 / r.amplitude.unwrap()).fold(0.0, f64::max);
    let slope = s.fitted_exponent.unwrap_or(f64::NAN);
    let t = start.elapsed();
    outcome(
        points.len() >= 50 && all_osc && s.failed == 0 && slope <= -0.7 && worst <= 5.0 && t <= Duration::from_secs(120),
        format!(
            "{} points (of {available}), fitted exponent {slope:.3} (<= -0.7), max abs_err J/amplitude {worst:.3} (<= 5), {}",
            points.len(),
            secs(t)
        ),
    )
}

fn c3_suppressed() -> Outcome {
    let spins = [20.0, 40.0, 60.0, 80.0, 100.0];
    // Delta <= -0.15 keeps every point outside the transition band at J = 20.
    let cand: Vec<ReducedParams> = lattice()
        .into_iter()
        .filter(|p| p.delta <= -0.15)
        .filter(|p| angles_suppressed(p).is_ok_and(|a| a.xi(p) < 3.0))
        .collect();
    let points = pick(cand, 20, 4);
    let rows: Vec<(f64, f64, f64)> = points
        .par_iter()
        .map(|p| {
            let g = EulerRotation::from_xi2(0.0, p.xi2, 0.0).unwrap();
            let (mut exact, mut model) = (Vec::new(), Vec::new());
            for &jv in &spins {
                let (j, m, mp) = (spin(jv), half(p.x * jv), half(p.y * jv));
                exact.push(d_exact(j, m, mp, &g, Precision::DEFAULT).unwrap().norm().ln());
                model.push(wigner_asym_suppressed(j, m, mp, &g, 1.0).unwrap().amplitude.ln());
            }
            let xi = angles_suppressed(p).unwrap().xi(p);
            (fit_slope(&spins, &exact).unwrap(), fit_slope(&spins, &model).unwrap(), xi)
        })
        .collect();
    let worst = rows.iter().map(|(o, m, _)| (o / m - 1.0).abs()).fold(0.0, f64::max);
    let worst_xi = rows.iter().map(|(o, _, xi)| (o / -xi - 1.0).abs()).fold(0.0, f64::max);
    let positive = rows.iter().filter(|(o, _, xi)| *xi > 0.0 && *o < 0.0).count();
    outcome(
        rows.len() == 20 && worst <= 0.1 && positive == rows.len(),
        format!(
            "{} points, max |oracle slope / module slope - 1| = {worst:.3} (<= 0.1); Xi > 0 with decaying oracle at {positive}/{}; max |oracle slope / -Xi - 1| = {worst_xi:.3}",
            rows.len(),
            rows.len()
        ),
    )
}

fn c4_caustic() -> Outcome {
    let spins: Vec<f64> = (1..=8).map(|k| 20.0 * k as f64).collect();
    let xs: Vec<f64> = (2..=11).map(|k| k as f64 / 20.0).collect();
    let rows: Vec<(f64, f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let (w, _) = caustic_xi2(x, x);
            let g = EulerRotation::from_xi2(0.0, w, 0.0).unwrap();
            let mut mags = Vec::new();
            let mut ratio: (f64, f64) = (f64::INFINITY, 0.0);
            for &jv in &spins {
                let (j, m) = (spin(jv), half(x * jv));
                let d = d_exact(j, m, m, &g, Precision::DEFAULT).unwrap().norm();
                let e = wigner_asym_transition(j, m, m, &g, 1.0).unwrap().value.norm();
                mags.push(d);
                ratio = (ratio.0.min(e / d), ratio.1.max(e / d));
            }
            (fit_power(&spins, &mags).unwrap(), ratio.0, ratio.1)
        })
        .collect();
    let (lo_exp, hi_exp) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r.0), b.max(r.0)));
    let (lo_r, hi_r) = rows.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(r.1), b.max(r.2)));
    outcome(
        lo_exp >= -0.45 && hi_exp <= -0.20 && lo_r >= 0.5 && hi_r <= 2.0,
        format!("10 points, exponents in [{lo_exp:.3}, {hi_exp:.3}] (within [-0.45, -0.20]), estimate/exact in [{lo_r:.3}, {hi_r:.3}] (within [0.5, 2])"),
    )
}

/// Interior configurations: integer spins in `[40, 100]` whose projected triangle has area
/// at least 5% of `J1 J2 + J2 J3 + J3 J1`.
fn threej_configs(seed: u64, n: usize) -> Vec<([i64; 3], [i64; 3])> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let j: [i64; 3] = [0; 3].map(|_| r.random_range(40..=100));
        if j[2] > j[0] + j[1] || j[0] > j[1] + j[2] || j[1] > j[0] + j[2] {
            continue;
        }
        let (m1, m2) = (r.random_range(-j[0]..=j[0]), r.random_range(-j[1]..=j[1]));
        let m = [m1, m2, -m1 - m2];
        if m[2].abs() > j[2] {
            continue;
        }
        let Ok(e) = threej_asym_estimate(twice(j).map(|t| Spin::from_twice(t as u32)), twice(m).map(HalfInt::from_twice), LengthConvention::Bare) else {
            continue;
        };
        let ns = 1.0 / (PI * e.amplitude * e.amplitude);
        if ns >= 0.05 * (j[0] * j[1] + j[1] * j[2] + j[2] * j[0]) as f64 {
            out.push((j, m));
        }
    }
    out
}

fn twice(v: [i64; 3]) -> [i64; 3] {
    v.map(|x| 2 * x)
}

fn threej_errors(configs: &[([i64; 3], [i64; 3])], scale: i64) -> Vec<f64> {
    configs
        .par_iter()
        .map(|(j, m)| {
            let js = twice(j.map(|x| x * scale)).map(|t| Spin::from_twice(t as u32));
            let ms = twice(m.map(|x| x * scale)).map(HalfInt::from_twice);
            let e = threej_asym_estimate(js, ms, LengthConvention::Bare).unwrap();
            (threej_exact(js, ms) - e.value).abs() / e.amplitude
        })
        .collect()
}

fn c5_threej() -> Outcome {
    let configs = threej_configs(5, 200);
    let base = threej_errors(&configs, 1);
    let doubled = threej_errors(&configs, 2);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (p1, p2) = (percentile(&base, 90.0).unwrap(), percentile(&doubled, 90.0).unwrap());
    let (m1, m2) = (mean(&base), mean(&doubled));
    outcome(
        configs.len() >= 200 && p1 <= 0.1 && p2 <= 0.1 && p2 < p1 && m2 < m1,
        format!(
            "{} configs, p90 envelope error {p1:.4} at J in [40,100] -> {p2:.4} at J in [80,200] (<= 0.1, decreasing); mean {m1:.4} -> {m2:.4}",
            configs.len()
        ),
    )
}

fn c6_haar() -> Outcome {
    let start = Instant::now();
    let rows = haar_check(6.0);
    let t = start.elapsed();
    let worst = rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    outcome(
        !rows.is_empty() && worst <= 1e-9 && t <= Duration::from_secs(60),
        format!("{} (J, M, M') triples, max |integral - 3j product| = {worst:.2e} (<= 1e-9), {}", rows.len(), secs(t)),
    )
}

fn osc_points(seed: u64, n: usize) -> Vec<ReducedParams> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let p = ReducedParams::new(r.random_range(-0.95..0.95), r.random_range(-0.95..0.95), r.random_range(0.02..0.98)).unwrap();
        if p.delta > 0.01 {
            out.push(p);
        }
    }
    out
}

fn axis_pairs(seed: u64, n: usize) -> Vec<AxisPair> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let t: [u32; 3] = [0; 3].map(|_| r.random_range(80..=400));
        if (t[0] + t[1] + t[2]) % 2 != 0 {
            continue;
        }
        let mut proj = || {
            let m1 = t[0] as i64 - 2 * r.random_range(0..=t[0] as i64);
            let m2 = t[1] as i64 - 2 * r.random_range(0..=t[1] as i64);
            [m1, m2, -m1 - m2].map(HalfInt::from_twice)
        };
        let (m, mp) = (proj(), proj());
        if let Ok(p) = pair_from_quantum(t.map(Spin::from_twice), m, mp) {
            let s2 = p.s().norm2();
            if p.n().dot(p.s()).powi(2) > 0.01 * s2 && p.k().dot(p.s()).powi(2) > 0.01 * s2 {
                out.push(p);
            }
        }
    }
    out
}

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm()
}

fn c7_identities() -> Outcome {
    let pts = osc_points(7, 200);
    let mut w = [0.0f64; 6];
    for p in &pts {
        let (up, um) = saddle_points(p);
        let (hp, hm) = neg_d2f_at_saddles(p);
        let (kp, km) = prefactor_at_saddles(p);
        let abs2 = (1.0 - p.xi2) * (1.0 + p.x) * (1.0 - p.y);
        let phi = angles_oscillatory(p).unwrap().phi;
        let root = Complex::new(0.0, 2.0 * p.delta.sqrt());
        let v = [
            saddle_residual(p, up).norm().max(saddle_residual(p, um).norm()),
            (up.norm_sqr() - abs2).abs().max((um.norm_sqr() - abs2).abs()),
            action_f_on(p, up, 0.7, -1.3, Sheet::Plus).unwrap().re.abs().max(action_f_on(p, um, 0.7, -1.3, Sheet::Minus).unwrap().re.abs()),
            rel(action_neg_d2f(p, up).unwrap(), hp).max(rel(action_neg_d2f(p, um).unwrap(), hm)),
            rel(prefactor_k(p, up).unwrap(), kp).max(rel(prefactor_k(p, um).unwrap(), km)),
            rel(kp / hp, Complex::from_polar(1.0, phi) / root).max(rel(km / hm, Complex::from_polar(1.0, -phi) / -root)),
        ];
        for (a, b) in w.iter_mut().zip(v) {
            *a = a.max(b);
        }
    }
    let pairs = axis_pairs(8, 120);
    let mut t = [0.0f64; 4];
    for p in &pairs {
        let s2 = p.s().norm2();
        let sj = p.on_n.jvec.iter().map(|v| v.norm()).sum::<f64>();
        let scale = p.on_n.jvec.iter().map(|v| v.norm2()).fold(0.0, f64::max);
        let closed = p.prefactor_closed();
        for b in [SaddleBranch::Plus, SaddleBranch::Minus] {
            let x = p.xi2(b);
            let d = p.deltas(x);
            let vec = p.j2_delta_vector(b);
            let dv = (0..3).map(|i| (p.on_n.jvec[i].norm2() * d[i] - vec[i]).abs() / scale).fold(0.0, f64::max);
            let want = if b == SaddleBranch::Plus { closed } else { -closed };
            let v = [
                p.quartic_residual(x).abs() / s2,
                p.saddle_residual(x, p.signs(b)).abs() / sj,
                dv,
                (p.prefactor(b) - want).abs() / closed.abs(),
            ];
            for (a, b) in t.iter_mut().zip(v) {
                *a = a.max(b);
            }
        }
    }
    let pass = w[0] < 1e-12 && w[1] < 1e-12 && w[2] < 1e-10 && w[3] < 1e-10 && w[4] < 1e-10 && w[5] < 1e-10
        && t[0] < 1e-10 && t[1] < 1e-10 && t[2] < 1e-10 && t[3] < 1e-8;
    outcome(
        pass && pts.len() >= 100 && pairs.len() >= 100,
        format!(
            "{} Wigner points: saddle {:.1e}, |u|^2 {:.1e}, Re f {:.1e}, hessian {:.1e}, prefactor {:.1e}, ratio {:.1e}; {} 3j pairs: quartic {:.1e}, saddle {:.1e}, J^2 Delta {:.1e}, K+- {:.1e}",
            pts.len(), w[0], w[1], w[2], w[3], w[4], w[5], pairs.len(), t[0], t[1], t[2], t[3]
        ),
    )
}

fn c8_gradients() -> Outcome {
    let mut r = rng(9);
    let h = 1e-6;
    let mut worst_f = 0.0f64;
    for p in osc_points(10, 200) {
        let u = Complex::new(r.random_range(-0.5..1.5), r.random_range(0.05..0.8));
        let (a, g) = (r.random_range(-PI..PI), r.random_range(-PI..PI));
        let fd = (action_f(&p, u + h, a, g).unwrap() - action_f(&p, u - h, a, g).unwrap()) / (2.0 * h);
        worst_f = worst_f.max((fd - action_df(&p, u).unwrap()).norm());
    }
    let mut worst_s = 0.0f64;
    let mut n = 0;
    for p in axis_pairs(11, 120) {
        for b in [SaddleBranch::Plus, SaddleBranch::Minus] {
            let w = p.xi2(b);
            if p.deltas(w).iter().any(|&d| d < 1e-3) || !(0.01..0.99).contains(&w) {
                continue;
            }
            let signs = p.signs(b);
            let fd = (p.phase_sum(w + h, signs).unwrap() - p.phase_sum(w - h, signs).unwrap()) / (2.0 * h);
            let an = p.phase_sum_derivative(w, signs);
            worst_s = worst_s.max((fd - an).abs() / an.abs().max(1.0));
            n += 1;
        }
    }
    outcome(
        worst_f <= 1e-6 && worst_s <= 1e-5 && n >= 100,
        format!("200 points: max |FD - df/du| = {worst_f:.1e} (<= 1e-6); {n} 3j saddles: max rel |FD - d/dxi^2| = {worst_s:.1e} (<= 1e-5)"),
    )
}

const DET_SPEC: &str = r#"
quantity = "dmatrix"
j_values = [10, 20.5, 40]
seed = 17

[grid]
x = [-0.6, -0.1, 0.3, 0.85]
y = [-0.4, 0.2, 0.7]
xi2 = [0.15, 0.5, 0.8]
alpha = [0.0, 1.1]
gamma = [-0.7]
"#;

fn c9_determinism() -> Outcome {
    let spec = SweepSpec::from_toml(DET_SPEC).unwrap();
    let render = || {
        let rep = run_sweep(&spec);
        let (mut csv, mut json) = (Vec::new(), Vec::new());
        write_csv(&mut csv, &rep.records).unwrap();
        write_json(&mut json, &spec, &rep.records, &rep.summary).unwrap();
        (csv, json)
    };
    let (a, b) = (render(), render());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.toml");
    std::fs::write(&path, DET_SPEC).unwrap();
    let cli = |fmt: &str| {
        let out = dir.path().join(format!("out{fmt}"));
        let status = Command::new(env!("CARGO_BIN_EXE_su2asym"))
            .args([fmt, "sweep", path.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let csv_runs = (cli("--csv"), cli("--csv"));
    let json_runs = (cli("--json"), cli("--json"));
    let rows = spec.j_values.len() * 4 * 3 * 3 * 2;
    outcome(
        a == b && csv_runs.0 == csv_runs.1 && json_runs.0 == json_runs.1 && csv_runs.0 == a.0,
        format!("{rows}-row sweep: library CSV/JSON and CLI CSV/JSON byte-identical across two runs each"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("character localization", c1_character),
        ("oscillatory convergence", c2_oscillatory),
        ("suppressed decay", c3_suppressed),
        ("caustic scaling", c4_caustic),
        ("3j asymptotics", c5_threej),
        ("Haar cross-check", c6_haar),
        ("identity suite", c7_identities),
        ("gradient checks", c8_gradients),
        ("determinism", c9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
