//! Region maps, suppressed-exponent surfaces and the Haar cross-check table.

use rayon::prelude::*;
use recoupling::asym_wigner::{angles_suppressed, boundary_exponent, classify_region, ReducedParams};
use recoupling::recoupling_exact::{threej_exact, HaarRule};
use recoupling::{EulerRotation, HalfInt, Precision, Spin};
use serde::{Deserialize, Serialize};

use crate::config::ConfigError;
use crate::report::fit_slope;
use crate::sweep::{d_exact, snap_projection};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionRow {
    pub j: f64,
    pub x: f64,
    pub y: f64,
    pub xi2: f64,
    pub delta: f64,
    pub region: String,
    /// Largest real part of the action at the ends of the summation range.
    pub em_exponent: f64,
    pub em_reliable: bool,
}

fn check_open(v: &[f64], field: &'static str, lo: f64, hi: f64) -> Result<(), ConfigError> {
    if v.is_empty() {
        return Err(ConfigError::field(field, "grid is empty"));
    }
    if v.iter().any(|&t| !(t > lo && t < hi)) {
        return Err(ConfigError::field(field, format!("values must lie in ({lo}, {hi})")));
    }
    Ok(())
}

/// Region and boundary-term diagnostic on an `(x, xi^2)` grid, with `y = y_fixed`
/// or on the diagonal `y = x` when `y_fixed` is `None`.
pub fn region_map(
    j: Spin,
    xi2_grid: &[f64],
    x_grid: &[f64],
    y_fixed: Option<f64>,
    kappa: f64,
) -> Result<Vec<RegionRow>, ConfigError> {
    check_open(xi2_grid, "xi2", 0.0, 1.0)?;
    check_open(x_grid, "x", -1.0, 1.0)?;
    if let Some(y) = y_fixed {
        check_open(&[y], "y", -1.0, 1.0)?;
    }
    if j.twice() == 0 {
        return Err(ConfigError::field("j", "must be positive"));
    }
    let mut rows = Vec::with_capacity(xi2_grid.len() * x_grid.len());
    for &w in xi2_grid {
        for &x in x_grid {
            let y = y_fixed.unwrap_or(x);
            let p = ReducedParams::new(x, y, w).expect("grid checked");
            let e = boundary_exponent(x, y, w);
            rows.push(RegionRow {
                j: j.value(),
                x,
                y,
                xi2: w,
                delta: p.delta,
                region: classify_region(j, &p, kappa).region.as_str().into(),
                em_exponent: e,
                em_reliable: e < 0.0,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiRow {
    pub x: f64,
    pub y: f64,
    pub xi2: f64,
    /// `Delta' = -Delta > 0`.
    pub delta_prime: f64,
    pub phi: f64,
    pub psi: f64,
    pub omega: f64,
    /// `Xi = Phi + x Psi - y Omega` at the decaying saddle.
    pub xi: f64,
    pub xi_sign: i8,
    /// Slope of `ln|d_exact|` against `J`.
    pub oracle_slope: Option<f64>,
    /// `oracle_slope / (-Xi) - 1`.
    pub oracle_rel_diff: Option<f64>,
}

/// Slope of `ln|d^J_{M M'}|` against `J` with `M`, `M'` snapped to `x J`, `y J`.
pub fn oracle_decay_slope(x: f64, y: f64, xi2: f64, spins: &[Spin], prec: Precision) -> Option<f64> {
    let g = EulerRotation::from_xi2(0.0, xi2, 0.0).ok()?;
    let mut js = Vec::new();
    let mut logs = Vec::new();
    for &j in spins {
        let d = d_exact(j, snap_projection(j, x), snap_projection(j, y), &g, prec).ok()?.norm();
        if d > 0.0 {
            js.push(j.value());
            logs.push(d.ln());
        }
    }
    fit_slope(&js, &logs)
}

/// `Xi` and friends over an `(x, y)` grid at fixed `xi^2`; only suppressed cells are emitted.
pub fn xi_surface(
    xi2: f64,
    x_grid: &[f64],
    y_grid: &[f64],
    oracle_spins: Option<&[Spin]>,
    prec: Precision,
) -> Result<Vec<XiRow>, ConfigError> {
    check_open(&[xi2], "xi2", 0.0, 1.0)?;
    check_open(x_grid, "x", -1.0, 1.0)?;
    check_open(y_grid, "y", -1.0, 1.0)?;
    let cells: Vec<(f64, f64)> = x_grid.iter().flat_map(|&x| y_grid.iter().map(move |&y| (x, y))).collect();
    let rows: Vec<Option<XiRow>> = cells
        .par_iter()
        .map(|&(x, y)| {
            let p = ReducedParams::new(x, y, xi2).ok()?;
            if p.delta >= 0.0 {
                return None;
            }
            let a = angles_suppressed(&p).ok()?;
            let xi = a.xi(&p);
            let oracle_slope = oracle_spins.and_then(|s| oracle_decay_slope(x, y, xi2, s, prec));
            Some(XiRow {
                x,
                y,
                xi2,
                delta_prime: -p.delta,
                phi: a.phi,
                psi: a.psi,
                omega: a.omega,
                xi,
                xi_sign: if xi > 0.0 { 1 } else if xi < 0.0 { -1 } else { 0 },
                oracle_slope,
                oracle_rel_diff: oracle_slope.map(|s| s / -xi - 1.0),
            })
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaarRow {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub mp1: f64,
    pub mp2: f64,
    pub mp3: f64,
    pub integral_re: f64,
    pub integral_im: f64,
    /// Product of the two Racah 3j symbols.
    pub product: f64,
    pub abs_err: f64,
}

fn projection_triples(j: [Spin; 3]) -> Vec<[HalfInt; 3]> {
    let mut out = Vec::new();
    for m1 in j[0].projections() {
        for m2 in j[1].projections() {
            let m3 = (m1 + m2).neg();
            if j[2].admits(m3) {
                out.push([m1, m2, m3]);
            }
        }
    }
    out
}

/// Spin triples obeying the triangle rule with integer `J1 + J2 + J3 <= max_sum`.
pub fn spin_triples(max_sum: f64) -> Vec<[Spin; 3]> {
    let cap = (2.0 * max_sum).floor() as u32;
    let mut out = Vec::new();
    for a in 0..=cap {
        for b in 0..=cap - a {
            for c in 0..=cap - a - b {
                if (a + b + c) % 2 == 0 && c <= a + b && a <= b + c && b <= a + c {
                    out.push([a, b, c].map(Spin::from_twice));
                }
            }
        }
    }
    out
}

/// Haar integral of three Wigner matrices against the product of two 3j symbols,
/// for every admissible `(J, M, M')` with `J1 + J2 + J3 <= max_sum`.
pub fn haar_check(max_sum: f64) -> Vec<HaarRow> {
    let triples = spin_triples(max_sum);
    let blocks: Vec<Vec<HaarRow>> = triples
        .par_iter()
        .map(|&j| {
            let rule = HaarRule::new(HaarRule::min_resolution(j));
            let ms = projection_triples(j);
            let exact: Vec<f64> = ms.iter().map(|&m| threej_exact(j, m)).collect();
            let mut rows = Vec::with_capacity(ms.len() * ms.len());
            for (a, m) in ms.iter().enumerate() {
                for (b, mp) in ms.iter().enumerate() {
                    let v = rule.integrate(j, *m, *mp).expect("admissible by construction");
                    let product = exact[a] * exact[b];
                    let jv = j.map(|s| s.value());
                    let (mv, mpv) = (m.map(|h| h.value()), mp.map(|h| h.value()));
                    rows.push(HaarRow {
                        j1: jv[0],
                        j2: jv[1],
                        j3: jv[2],
                        m1: mv[0],
                        m2: mv[1],
                        m3: mv[2],
                        mp1: mpv[0],
                        mp2: mpv[1],
                        mp3: mpv[2],
                        integral_re: v.re,
                        integral_im: v.im,
                        product,
                        abs_err: (v - product).norm(),
                    });
                }
            }
            rows
        })
        .collect();
    blocks.into_iter().flatten().collect()
}

/// Counts and worst error of a table.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TableSummary {
    pub rows: usize,
    pub max_abs_err: Option<f64>,
    pub reliable: Option<usize>,
    pub positive_xi: Option<usize>,
}
