//! Semiclassical 3j symbols from the momentum triangle.
//!
//! Three vectors `J_i` of lengths `J_i` with projections `n . J_i = M_i` on
//! the quantisation axis `n` close into a triangle. Its doubled oriented area
//! `S = J_1 x J_2` and five angles built from `n`, `S` and the `J_i` fix the
//! large-spin behaviour of the symbol. A second axis `k` carrying the
//! projections `M'_i` describes the pair product that the Haar integral of
//! three Wigner matrices produces.

use core::f64::consts::PI;

use crate::asym_wigner::{angles_oscillatory, ReducedParams};
use crate::recoupling_exact::{haar_triple_integral, threej_exact};
use crate::vec3::Vec3;
use crate::{Error, HalfInt, Spin};

/// Length assigned to the vector of spin `J`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LengthConvention {
    /// `|J_i| = J_i`.
    #[default]
    Bare,
    /// `|J_i| = J_i + 1/2`.
    Shifted,
}

impl LengthConvention {
    fn length(self, j: Spin) -> f64 {
        match self {
            LengthConvention::Bare => j.value(),
            LengthConvention::Shifted => j.value() + 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumTriangle {
    pub jvec: [Vec3; 3],
    /// Unit quantisation axis.
    pub n: Vec3,
    /// `S = J_1 x J_2`.
    pub s: Vec3,
    pub j: [Spin; 3],
    pub m: [HalfInt; 3],
}

impl MomentumTriangle {
    pub fn n_dot_s(&self) -> f64 {
        self.n.dot(self.s)
    }

    /// The same triangle with a different axis and projections.
    pub fn with_axis(&self, axis: Vec3, m: [HalfInt; 3]) -> Self {
        MomentumTriangle { n: axis, m, ..*self }
    }

    fn scale(&self) -> f64 {
        self.jvec.iter().fold(0.0f64, |a, v| a.max(v.norm()))
    }
}

fn selection_ok(j: [Spin; 3], m: [HalfInt; 3]) -> bool {
    let t = j.map(|x| x.twice() as i64);
    (0..3).all(|i| j[i].admits(m[i]))
        && m.iter().map(|x| x.twice()).sum::<i64>() == 0
        && t[2] <= t[0] + t[1]
        && t[2] >= (t[0] - t[1]).abs()
        && (t[0] + t[1] + t[2]) % 2 == 0
}

pub fn triangle_from_quantum(j: [Spin; 3], m: [HalfInt; 3]) -> Result<MomentumTriangle, Error> {
    triangle_with(j, m, LengthConvention::Bare)
}

/// Builds the triangle about `n = e_z` with `J_1` in the `xz` half-plane `x >= 0`.
///
/// Perpendicular parts `p_i = sqrt(|J_i|^2 - M_i^2)` must close a planar
/// triangle; the mirror image is taken if needed so that `n . S >= 0`, with
/// equality only on the classical boundary.
pub fn triangle_with(j: [Spin; 3], m: [HalfInt; 3], lengths: LengthConvention) -> Result<MomentumTriangle, Error> {
    if !selection_ok(j, m) {
        return Err(Error::SelectionRule);
    }
    let mv = m.map(|x| x.value());
    let p = [0, 1, 2].map(|i| {
        let l = lengths.length(j[i]);
        libm::sqrt((l * l - mv[i] * mv[i]).max(0.0))
    });
    let scale = p.iter().fold(1.0f64, |a, &b| a.max(b));
    if p[2] > p[0] + p[1] + 1e-12 * scale || p[2] < (p[0] - p[1]).abs() - 1e-12 * scale {
        return Err(Error::ClassicallyForbidden);
    }
    let c = if p[0] * p[1] == 0.0 {
        1.0
    } else {
        ((p[2] * p[2] - p[0] * p[0] - p[1] * p[1]) / (2.0 * p[0] * p[1])).clamp(-1.0, 1.0)
    };
    let sn = libm::sqrt(1.0 - c * c);
    let j1 = Vec3::new(p[0], 0.0, mv[0]);
    let mut j2 = Vec3::new(p[1] * c, p[1] * sn, mv[1]);
    if j1.cross(j2).dot(Vec3::Z) < 0.0 {
        j2.0[1] = -j2.0[1];
    }
    let j3 = -(j1 + j2);
    Ok(MomentumTriangle { jvec: [j1, j2, j3], n: Vec3::Z, s: j1.cross(j2), j, m })
}

pub fn area_vector(t: &MomentumTriangle) -> Vec3 {
    t.jvec[0].cross(t.jvec[1])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeJAngles {
    pub phi: [f64; 3],
    pub psi13: f64,
    pub psi23: f64,
}

/// Complex numbers (as `(re, im)`) whose principal arguments are `Phi^i` and `Psi^{j3}`.
pub fn angle_arguments(t: &MomentumTriangle) -> ([(f64, f64); 3], [(f64, f64); 2]) {
    let (n, s) = (t.n, t.s);
    let ns = n.dot(s);
    let phi = [0, 1, 2].map(|i| (n.dot(t.jvec[i].cross(s)), t.jvec[i].norm() * ns));
    let psi = [0, 1].map(|j| (n.cross(t.jvec[j]).dot(n.cross(t.jvec[2])), n.dot(t.jvec[2].cross(t.jvec[j]))));
    (phi, psi)
}

/// `Phi^i = arg[n.(J_i x S) + i |J_i| (n.S)]` and `Psi^{j3} = arg[(n x J_j).(n x J_3) + i n.(J_3 x J_j)]`.
pub fn threej_angles(t: &MomentumTriangle) -> Result<ThreeJAngles, Error> {
    if t.n_dot_s() <= 1e-12 * t.scale() * t.scale() {
        return Err(Error::ClassicallyForbidden);
    }
    if t.jvec.iter().any(|v| t.n.cross(*v).norm2() < 1e-14) {
        return Err(Error::DegenerateAxis);
    }
    let (phi, psi) = angle_arguments(t);
    let arg = |(re, im): (f64, f64)| libm::atan2(im, re);
    Ok(ThreeJAngles { phi: phi.map(arg), psi13: arg(psi[0]), psi23: arg(psi[1]) })
}

/// `Omega = sum_i (J_i + 1/2) Phi^i + M_1 Psi^{13} + M_2 Psi^{23}`.
pub fn phase_omega(t: &MomentumTriangle, a: &ThreeJAngles) -> f64 {
    (0..3).map(|i| (t.j[i].value() + 0.5) * a.phi[i]).sum::<f64>()
        + t.m[0].value() * a.psi13
        + t.m[1].value() * a.psi23
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeJEstimate {
    pub value: f64,
    /// `(pi n.S)^{-1/2}`.
    pub amplitude: f64,
    /// `Omega + pi/4`.
    pub phase: f64,
    /// `(-1)^{J_1 + J_2 - J_3 + 1}`, matching the Condon–Shortley phase.
    pub sign: f64,
}

/// Sign relating the bare cosine formula to Condon–Shortley 3j symbols.
///
/// Measured against the Racah sum: the offset is `(-1)^{J1+J2-J3+1}`, so it
/// depends on the configuration rather than being a single global constant.
pub fn condon_shortley_sign(j: [Spin; 3]) -> f64 {
    let e = (j[0].twice() as i64 + j[1].twice() as i64 - j[2].twice() as i64) / 2 + 1;
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn threej_asym_estimate(j: [Spin; 3], m: [HalfInt; 3], lengths: LengthConvention) -> Result<ThreeJEstimate, Error> {
    let t = triangle_with(j, m, lengths)?;
    let a = threej_angles(&t)?;
    let amplitude = 1.0 / libm::sqrt(PI * t.n_dot_s());
    let phase = phase_omega(&t, &a) + 0.25 * PI;
    let sign = condon_shortley_sign(j);
    Ok(ThreeJEstimate { value: sign * amplitude * libm::cos(phase), amplitude, phase, sign })
}

/// `(-1)^{J1+J2-J3+1} (pi n.S)^{-1/2} cos(Omega + pi/4)`.
pub fn threej_asym(j: [Spin; 3], m: [HalfInt; 3]) -> Result<f64, Error> {
    threej_asym_estimate(j, m, LengthConvention::Bare).map(|e| e.value)
}

/// One triangle seen from two axes: `n` with projections `M_i` and `k` with `M'_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisPair {
    pub on_n: MomentumTriangle,
    pub on_k: MomentumTriangle,
}

impl AxisPair {
    pub fn n(&self) -> Vec3 {
        self.on_n.n
    }
    pub fn k(&self) -> Vec3 {
        self.on_k.n
    }
    pub fn s(&self) -> Vec3 {
        self.on_n.s
    }
    fn xy(&self, i: usize) -> (f64, f64) {
        let jv = self.on_n.jvec[i].norm();
        (self.on_n.m[i].value() / jv, self.on_k.m[i].value() / jv)
    }
}

/// Places the axis `k = a J_1 + b J_2 + c S/|S|` with `k . J_i = M'_i` and `k . S > 0`.
pub fn pair_from_quantum(j: [Spin; 3], m: [HalfInt; 3], mp: [HalfInt; 3]) -> Result<AxisPair, Error> {
    if !selection_ok(j, mp) {
        return Err(Error::SelectionRule);
    }
    let t = triangle_from_quantum(j, m)?;
    let [j1, j2, _] = t.jvec;
    let s2 = t.s.norm2();
    if s2 <= 1e-24 * (t.scale() * t.scale()) * (t.scale() * t.scale()) {
        return Err(Error::ClassicallyForbidden);
    }
    let (g11, g12, g22) = (j1.norm2(), j1.dot(j2), j2.norm2());
    let det = g11 * g22 - g12 * g12;
    let (r1, r2) = (mp[0].value(), mp[1].value());
    let a = (g22 * r1 - g12 * r2) / det;
    let b = (g11 * r2 - g12 * r1) / det;
    let in_plane = j1 * a + j2 * b;
    let rest = 1.0 - in_plane.norm2();
    if rest <= 0.0 {
        return Err(Error::ClassicallyForbidden);
    }
    let k = in_plane + t.s * (libm::sqrt(rest) / libm::sqrt(s2));
    Ok(AxisPair { on_n: t, on_k: t.with_axis(k, mp) })
}

/// The two critical values `xi^2_+ = (1 + n.k)/2` and `xi^2_- = xi^2_+ - (n.S)(k.S)/S^2`.
pub fn xi_saddles(t_n: &MomentumTriangle, t_k: &MomentumTriangle) -> (f64, f64) {
    let s = t_n.s;
    let plus = 0.5 * (1.0 + t_n.n.dot(t_k.n));
    (plus, plus - t_n.n.dot(s) * t_k.n.dot(s) / s.norm2())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaddleBranch {
    Plus,
    Minus,
}

impl AxisPair {
    pub fn xi2(&self, branch: SaddleBranch) -> f64 {
        let (p, m) = xi_saddles(&self.on_n, &self.on_k);
        match branch {
            SaddleBranch::Plus => p,
            SaddleBranch::Minus => m,
        }
    }

    /// `A+ = n x k`, `A- = [(S x n)(k.S) + (S x k)(n.S)] / S^2`.
    pub fn a_vector(&self, branch: SaddleBranch) -> Vec3 {
        let (n, k, s) = (self.n(), self.k(), self.s());
        match branch {
            SaddleBranch::Plus => n.cross(k),
            SaddleBranch::Minus => (s.cross(n) * k.dot(s) + s.cross(k) * n.dot(s)) * (1.0 / s.norm2()),
        }
    }

    /// `eps_i = sign(J_i . A)`.
    pub fn signs(&self, branch: SaddleBranch) -> [f64; 3] {
        let a = self.a_vector(branch);
        self.on_n.jvec.map(|v| if v.dot(a) < 0.0 { -1.0 } else { 1.0 })
    }

    /// `Delta_i = (1 - xi^2)(xi^2 - x_i y_i) - (x_i - y_i)^2 / 4`.
    pub fn deltas(&self, xi2: f64) -> [f64; 3] {
        [0, 1, 2].map(|i| {
            let (x, y) = self.xy(i);
            (1.0 - xi2) * (xi2 - x * y) - 0.25 * (x - y) * (x - y)
        })
    }

    /// `J_i^2 Delta_i` predicted by the vectors: `(J_i . A)^2 / 4`.
    pub fn j2_delta_vector(&self, branch: SaddleBranch) -> [f64; 3] {
        let a = self.a_vector(branch);
        self.on_n.jvec.map(|v| 0.25 * v.dot(a) * v.dot(a))
    }

    /// `sum_i s_i J_i sqrt(Delta_i)`.
    pub fn saddle_residual(&self, xi2: f64, signs: [f64; 3]) -> f64 {
        let d = self.deltas(xi2);
        (0..3).map(|i| signs[i] * self.on_n.jvec[i].norm() * libm::sqrt(d[i].max(0.0))).sum()
    }

    /// `K = -16 pi^2 sum_cyc (J_2.A/2)(J_3.A/2)((2 xi^2 - 1) J_1^2 - M_1 M'_1) / (xi^2 (1 - xi^2))`.
    pub fn prefactor(&self, branch: SaddleBranch) -> f64 {
        let a = self.a_vector(branch);
        let w = self.xi2(branch);
        let v = self.on_n.jvec;
        let sum: f64 = (0..3)
            .map(|i| {
                let (p, q) = ((i + 1) % 3, (i + 2) % 3);
                let mm = self.on_n.m[i].value() * self.on_k.m[i].value();
                0.25 * v[p].dot(a) * v[q].dot(a) * ((2.0 * w - 1.0) * v[i].norm2() - mm)
            })
            .sum();
        -16.0 * PI * PI * sum / (w * (1.0 - w))
    }

    /// `16 pi^2 (n.S)(k.S)`.
    pub fn prefactor_closed(&self) -> f64 {
        16.0 * PI * PI * self.n().dot(self.s()) * self.k().dot(self.s())
    }

    /// Quartic whose roots in `xi^2` are the critical values.
    pub fn quartic_residual(&self, xi2: f64) -> f64 {
        let (n, k, s) = (self.n(), self.k(), self.s());
        let (s2, nk, ns, ks) = (s.norm2(), n.dot(k), n.dot(s), k.dot(s));
        4.0 * xi2 * xi2 * s2 - 4.0 * xi2 * (s2 + nk * s2 - ns * ks) + (1.0 + nk) * (1.0 + nk) * s2
            - 2.0 * ns * ks * (1.0 + nk)
    }

    /// `sum_i s_i J_i (phi_i + x_i psi_i - y_i omega_i)` with the angles at `(x_i, y_i, xi^2)`.
    pub fn phase_sum(&self, xi2: f64, signs: [f64; 3]) -> Result<f64, Error> {
        let mut total = 0.0;
        for i in 0..3 {
            let (x, y) = self.xy(i);
            let p = ReducedParams::new(x, y, xi2)?;
            let a = angles_oscillatory(&p)?;
            total += signs[i] * self.on_n.jvec[i].norm() * (a.phi + x * a.psi - y * a.omega);
        }
        Ok(total)
    }

    /// Closed form of the `xi^2` derivative of [`AxisPair::phase_sum`]: `-sum_i s_i J_i sqrt(Delta_i) / (xi^2 (1 - xi^2))`.
    pub fn phase_sum_derivative(&self, xi2: f64, signs: [f64; 3]) -> f64 {
        -self.saddle_residual(xi2, signs) / (xi2 * (1.0 - xi2))
    }

    /// `cos(Omega_n + pi/4) cos(Omega_k + pi/4) / (pi sqrt((n.S)(k.S)))`.
    pub fn product_estimate(&self) -> Result<f64, Error> {
        let an = threej_angles(&self.on_n)?;
        let ak = threej_angles(&self.on_k)?;
        let on = phase_omega(&self.on_n, &an) + 0.25 * PI;
        let ok = phase_omega(&self.on_k, &ak) + 0.25 * PI;
        Ok(libm::cos(on) * libm::cos(ok) / (PI * libm::sqrt(self.on_n.n_dot_s() * self.on_k.n_dot_s())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMode {
    /// Haar quadrature of three Wigner matrices at the given resolution.
    Quadrature { resolution: usize },
    /// Two-axis semiclassical product.
    Asymptotic,
}

/// Returns `(lhs, rhs)` where `rhs` is the product of two Racah 3j symbols and
/// `lhs` either the Haar integral or its large-spin product estimate.
pub fn threej_pair_check(j: [Spin; 3], m: [HalfInt; 3], mp: [HalfInt; 3], mode: PairMode) -> Result<(f64, f64), Error> {
    let rhs = threej_exact(j, m) * threej_exact(j, mp);
    let lhs = match mode {
        PairMode::Quadrature { resolution } => haar_triple_integral(j, m, mp, resolution)?.re,
        PairMode::Asymptotic => pair_from_quantum(j, m, mp)?.product_estimate()?,
    };
    Ok((lhs, rhs))
}
