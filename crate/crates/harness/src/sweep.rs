//! Grid enumeration and per-point evaluation.

use rayon::prelude::*;
use recoupling::asym_character::character_asym;
use recoupling::asym_threej::{threej_asym_estimate, LengthConvention};
use recoupling::asym_wigner::{classify_region, wigner_asym, ReducedParams};
use recoupling::recoupling_exact::{threej_ext, wigner_small_d_ext};
use recoupling::{Complex, EulerRotation, HalfInt, MagneticPair, Precision, Spin};

use crate::config::{Mode, Quantity, SweepSpec};
use crate::report::{ErrorReport, Record, Summary};
use crate::sample::generic_rotations;

/// Nearest admissible projection of spin `j` to `f * J`.
pub fn snap_projection(j: Spin, f: f64) -> HalfInt {
    let t = j.twice() as i64;
    let k = (t as f64 * (1.0 - f.clamp(-1.0, 1.0)) / 2.0).round() as i64;
    HalfInt::from_twice(t - 2 * k.clamp(0, t))
}

/// Exact `D^J_{M M'}(g)` at the given precision.
pub fn d_exact(j: Spin, m: HalfInt, mp: HalfInt, g: &EulerRotation, prec: Precision) -> Result<Complex, recoupling::Error> {
    let d = wigner_small_d_ext(j, m, mp, g.beta, prec)?.to_f64();
    Ok(Complex::from_polar(d, -(g.alpha * m.value() + g.gamma * mp.value())))
}

/// Exact character as the diagonal sum at the given precision.
pub fn character_exact(j: Spin, g: &EulerRotation, prec: Precision) -> Complex {
    j.projections()
        .map(|m| d_exact(j, m, m, g, prec).expect("diagonal projections are admissible"))
        .sum()
}

pub fn eval_dmatrix(
    j: Spin,
    m: HalfInt,
    mp: HalfInt,
    g: &EulerRotation,
    mode: Mode,
    kappa: f64,
    prec: Precision,
) -> Record {
    let mut r = Record {
        quantity: "dmatrix".into(),
        j1: j.value(),
        m1: Some(m.value()),
        mp: Some(mp.value()),
        alpha: Some(g.alpha),
        beta: Some(g.beta),
        gamma: Some(g.gamma),
        xi2: Some(g.xi2()),
        ..Record::default()
    };
    let pair = match MagneticPair::new(j, m, mp) {
        Ok(p) => p,
        Err(e) => {
            r.error = Some(e.to_string());
            return r;
        }
    };
    if j.twice() > 0 {
        let (x, y) = pair.reduced();
        r.x = Some(x);
        r.y = Some(y);
        if let Ok(p) = ReducedParams::from_quantum(&pair, g) {
            r.delta = Some(p.delta);
            r.region = Some(classify_region(j, &p, kappa).region.as_str().into());
        }
    }
    if mode.exact() {
        match d_exact(j, m, mp, g, prec) {
            Ok(v) => {
                r.exact_re = Some(v.re);
                r.exact_im = Some(v.im);
            }
            Err(e) => r.error = Some(e.to_string()),
        }
    }
    if mode.asym() {
        match wigner_asym(j, m, mp, g, kappa) {
            Ok(e) => {
                r.estimate_re = Some(e.value.re);
                r.estimate_im = Some(e.value.im);
                r.amplitude = Some(e.amplitude);
                r.em_reliable = Some(e.em_reliable);
            }
            Err(e) => r.error = Some(e.to_string()),
        }
    }
    r.finish();
    r
}

pub fn eval_character(j: Spin, g: &EulerRotation, mode: Mode, prec: Precision) -> Record {
    let mut r = Record {
        quantity: "character".into(),
        j1: j.value(),
        alpha: Some(g.alpha),
        beta: Some(g.beta),
        gamma: Some(g.gamma),
        xi2: Some(g.xi2()),
        amplitude: Some(j.dim() as f64),
        ..Record::default()
    };
    if mode.exact() {
        let v = character_exact(j, g, prec);
        r.exact_re = Some(v.re);
        r.exact_im = Some(v.im);
    }
    if mode.asym() {
        r.estimate_re = Some(character_asym(j, g));
        r.estimate_im = Some(0.0);
    }
    r.finish();
    r
}

pub fn eval_threej(j: [Spin; 3], m: [HalfInt; 3], mode: Mode, lengths: LengthConvention, prec: Precision) -> Record {
    let mut r = Record {
        quantity: "threej".into(),
        j1: j[0].value(),
        j2: Some(j[1].value()),
        j3: Some(j[2].value()),
        m1: Some(m[0].value()),
        m2: Some(m[1].value()),
        m3: Some(m[2].value()),
        ..Record::default()
    };
    if mode.exact() {
        r.exact_re = Some(threej_ext(j, m, prec).to_f64());
        r.exact_im = Some(0.0);
    }
    if mode.asym() {
        match threej_asym_estimate(j, m, lengths) {
            Ok(e) => {
                r.estimate_re = Some(e.value);
                r.estimate_im = Some(0.0);
                r.amplitude = Some(e.amplitude);
            }
            Err(e) => r.error = Some(e.to_string()),
        }
    }
    r.finish();
    r
}

/// Spins `J_i = scale * r_i` and projections `M_1 = f_1 J_1`, `M_2 = f_2 J_2`, snapped to valid values.
pub fn threej_point(scale: f64, ratios: [f64; 3], fractions: [f64; 2]) -> ([Spin; 3], [HalfInt; 3]) {
    let mut t = ratios.map(|r| (2.0 * scale * r).round().max(0.0) as u32);
    if (t[0] + t[1] + t[2]) % 2 == 1 {
        t[2] += 1;
    }
    let j = t.map(Spin::from_twice);
    let m1 = snap_projection(j[0], fractions[0]);
    let m2 = snap_projection(j[1], fractions[1]);
    (j, [m1, m2, (m1 + m2).neg()])
}

enum Point {
    D { j: Spin, m: HalfInt, mp: HalfInt, g: EulerRotation },
    Char { j: Spin, g: EulerRotation },
    ThreeJ { j: [Spin; 3], m: [HalfInt; 3] },
}

/// Grid points in output order, each with the spin (or spin scale) used for grouping.
fn enumerate(spec: &SweepSpec) -> Vec<(Point, f64)> {
    let g = &spec.grid;
    let mut pts = Vec::new();
    match spec.quantity {
        Quantity::Dmatrix => {
            for &jv in &spec.j_values {
                let j = Spin::from_f64(jv).expect("validated");
                for &x in &g.x {
                    for &y in &g.y {
                        for &w in &g.xi2 {
                            for &a in &g.alpha {
                                for &c in &g.gamma {
                                    let (m, mp) = (snap_projection(j, x), snap_projection(j, y));
                                    let rot = EulerRotation::from_xi2(a, w, c).expect("validated");
                                    pts.push((Point::D { j, m, mp, g: rot }, jv));
                                }
                            }
                        }
                    }
                }
            }
        }
        Quantity::Character => {
            let rots = generic_rotations(spec.seed, g.random_rotations);
            for &jv in &spec.j_values {
                let j = Spin::from_f64(jv).expect("validated");
                pts.extend(rots.iter().map(|&rot| (Point::Char { j, g: rot }, jv)));
            }
        }
        Quantity::Threej => {
            for &scale in &spec.j_values {
                for &ratios in &g.j_ratios {
                    for &fr in &g.m_fractions {
                        let (j, m) = threej_point(scale, ratios, fr);
                        pts.push((Point::ThreeJ { j, m }, scale));
                    }
                }
            }
        }
    }
    pts
}

/// Evaluates every grid point in parallel; records come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> ErrorReport {
    let prec = spec.precision();
    let pts = enumerate(spec);
    let records: Vec<Record> = pts
        .par_iter()
        .enumerate()
        .map(|(index, (p, _))| {
            let mut r = match p {
                Point::D { j, m, mp, g } => eval_dmatrix(*j, *m, *mp, g, spec.mode, spec.kappa, prec),
                Point::Char { j, g } => eval_character(*j, g, spec.mode, prec),
                Point::ThreeJ { j, m } => eval_threej(*j, *m, spec.mode, LengthConvention::Bare, prec),
            };
            r.index = index;
            r
        })
        .collect();
    let keys: Vec<f64> = pts.iter().map(|(_, k)| *k).collect();
    let summary = Summary::from_records(&records, &keys);
    ErrorReport { records, summary }
}
