//! Large-`J` estimates of generic Wigner matrix elements.
//!
//! Points are described by reduced coordinates `x = M/J`, `y = M'/J` and
//! `xi^2 = cos^2(beta/2)`. The sign of the discriminant
//! `Delta = (1 - xi^2)(xi^2 - x y) - (x - y)^2 / 4` separates an oscillatory
//! region (complex-conjugate saddles), a suppressed region (real saddles)
//! and the Airy band between them.

use core::f64::consts::PI;

use crate::{Complex, Error, EulerRotation, HalfInt, MagneticPair, Spin};

/// `Ai(0) = 3^{-2/3} / Gamma(2/3)`.
pub fn airy_ai_zero() -> f64 {
    libm::pow(3.0, -2.0 / 3.0) / libm::tgamma(2.0 / 3.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedParams {
    pub x: f64,
    pub y: f64,
    pub xi2: f64,
    pub delta: f64,
}

impl ReducedParams {
    pub fn new(x: f64, y: f64, xi2: f64) -> Result<Self, Error> {
        let delta = discriminant(x, y, xi2)?;
        if !(x.abs() < 1.0 && y.abs() < 1.0) {
            return Err(Error::DomainError);
        }
        Ok(ReducedParams { x, y, xi2, delta })
    }

    /// `x = M/J`, `y = M'/J` and `xi^2` from the rotation.
    pub fn from_quantum(pair: &MagneticPair, g: &EulerRotation) -> Result<Self, Error> {
        if !g.is_generic() {
            return Err(Error::NonGeneric);
        }
        if pair.j.twice() == 0 {
            return Err(Error::DomainError);
        }
        let (x, y) = pair.reduced();
        Self::new(x, y, g.xi2())
    }

    fn one_minus_xi2(&self) -> f64 {
        1.0 - self.xi2
    }
}

/// `Delta = (1 - xi^2)(xi^2 - x y) - (x - y)^2 / 4`.
pub fn discriminant(x: f64, y: f64, xi2: f64) -> Result<f64, Error> {
    if !(xi2 > 0.0 && xi2 < 1.0) {
        return Err(Error::NonGeneric);
    }
    Ok((1.0 - xi2) * (xi2 - x * y) - 0.25 * (x - y) * (x - y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Oscillatory,
    Suppressed,
    Transition,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Oscillatory => "oscillatory",
            Region::Suppressed => "suppressed",
            Region::Transition => "transition",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionClass {
    pub region: Region,
    /// Half-width `kappa J^{-2/3}` of the transition band in `Delta`.
    pub band: f64,
}

pub fn transition_band(j: Spin, kappa: f64) -> f64 {
    kappa * libm::pow(j.value(), -2.0 / 3.0)
}

pub fn classify_region(j: Spin, p: &ReducedParams, kappa: f64) -> RegionClass {
    let band = transition_band(j, kappa);
    let region = if p.delta > band {
        Region::Oscillatory
    } else if p.delta < -band {
        Region::Suppressed
    } else {
        Region::Transition
    };
    RegionClass { region, band }
}

/// Roots of `u^2 - u [2(1 - xi^2) + x - y] + (1 - xi^2)(1 + x)(1 - y) = 0`.
///
/// For `Delta >= 0` these are `u± = (1 - xi^2) + (x - y)/2 ± i sqrt(Delta)`;
/// otherwise two real roots, larger first.
pub fn saddle_points(p: &ReducedParams) -> (Complex, Complex) {
    let c = p.one_minus_xi2() + 0.5 * (p.x - p.y);
    if p.delta >= 0.0 {
        let s = libm::sqrt(p.delta);
        (Complex::new(c, s), Complex::new(c, -s))
    } else {
        let s = libm::sqrt(-p.delta);
        (Complex::new(c + s, 0.0), Complex::new(c - s, 0.0))
    }
}

/// Left-hand side of the saddle quadratic, for residual checks.
pub fn saddle_residual(p: &ReducedParams, u: Complex) -> Complex {
    let w = p.one_minus_xi2();
    u * u - u * (2.0 * w + p.x - p.y) + w * (1.0 + p.x) * (1.0 - p.y)
}

/// Which determination of `(-1)^t = e^{± i pi t}` the action uses.
///
/// Both agree on integers. `u+` is a critical point of the `Plus` sheet and
/// `u-` of the `Minus` sheet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }
}

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * libm::log(x.abs())
    }
}

fn zlnz(z: Complex) -> Complex {
    if z == Complex::new(0.0, 0.0) {
        z
    } else {
        z * z.ln()
    }
}

/// The four logarithm arguments `u`, `u - x + y`, `1 + x - u`, `1 - y - u`.
fn log_args(p: &ReducedParams, u: Complex) -> [Complex; 4] {
    [u, u - p.x + p.y, -u + (1.0 + p.x), -u + (1.0 - p.y)]
}

fn check_branch(p: &ReducedParams, u: Complex) -> Result<[Complex; 4], Error> {
    let a = log_args(p, u);
    if a.iter().any(|z| z.norm() < 1e-14) {
        Err(Error::BranchPoint)
    } else {
        Ok(a)
    }
}

/// The action `f(x, y, u)` on the `e^{+i pi u}` sheet.
///
/// Uses principal logarithms and the continuous extension `z ln z -> 0` at
/// `z = 0`, so the boundary values `f(x, x, 0)` and `f(x, x, 1 - x)` are
/// finite. Only derivatives reject branch points.
pub fn action_f(p: &ReducedParams, u: Complex, alpha: f64, gamma: f64) -> Result<Complex, Error> {
    action_f_on(p, u, alpha, gamma, Sheet::Plus)
}

pub fn action_f_on(p: &ReducedParams, u: Complex, alpha: f64, gamma: f64, sheet: Sheet) -> Result<Complex, Error> {
    if !(u.re.is_finite() && u.im.is_finite()) {
        return Err(Error::BranchPoint);
    }
    let (x, y) = (p.x, p.y);
    let i = Complex::i();
    let ln_xi = 0.5 * libm::log(p.xi2);
    let ln_eta = 0.5 * libm::log(p.one_minus_xi2());
    let [a_u, a_v, a_p, a_q] = log_args(p, u);
    let constant = 0.5 * (xlnx(1.0 - x) + xlnx(1.0 + x) + xlnx(1.0 - y) + xlnx(1.0 + y));
    Ok(-i * (alpha * x + gamma * y) + i * (sheet.sign() * PI) * u
        + (-u * 2.0 + (2.0 + x - y)) * ln_xi
        + (u * 2.0 - x + y) * ln_eta
        + constant
        - zlnz(a_p)
        - zlnz(a_q)
        - zlnz(a_u)
        - zlnz(a_v))
}

/// Real part of the action at real `u`, with `0 ln 0 = 0`; `alpha`, `gamma` drop out.
pub fn action_f_real(x: f64, y: f64, xi2: f64, u: f64) -> f64 {
    (1.0 + 0.5 * (x - y) - u) * libm::log(xi2)
        + (u - 0.5 * (x - y)) * libm::log(1.0 - xi2)
        + 0.5 * (xlnx(1.0 - x) + xlnx(1.0 + x) + xlnx(1.0 - y) + xlnx(1.0 + y))
        - xlnx(1.0 + x - u)
        - xlnx(1.0 - y - u)
        - xlnx(u)
        - xlnx(u - x + y)
}

/// `d f / d u` on the `e^{+i pi u}` sheet.
pub fn action_df(p: &ReducedParams, u: Complex) -> Result<Complex, Error> {
    let [a_u, a_v, a_p, a_q] = check_branch(p, u)?;
    Ok(Complex::new(libm::log(p.one_minus_xi2()) - libm::log(p.xi2), PI) + a_p.ln() + a_q.ln()
        - a_u.ln()
        - a_v.ln())
}

/// `-d^2 f / d u^2 = 1/(1+x-u) + 1/(1-y-u) + 1/u + 1/(u-x+y)`.
pub fn action_neg_d2f(p: &ReducedParams, u: Complex) -> Result<Complex, Error> {
    let [a_u, a_v, a_p, a_q] = check_branch(p, u)?;
    Ok(a_p.inv() + a_q.inv() + a_u.inv() + a_v.inv())
}

/// `d^3 f / d u^3 = -[1/(1+x-u)^2 + 1/(1-y-u)^2 - 1/u^2 - 1/(u-x+y)^2]`.
pub fn action_d3f(p: &ReducedParams, u: Complex) -> Result<Complex, Error> {
    let [a_u, a_v, a_p, a_q] = check_branch(p, u)?;
    Ok(-((a_p * a_p).inv() + (a_q * a_q).inv() - (a_u * a_u).inv() - (a_v * a_v).inv()))
}

/// `K = sqrt((1-x^2)(1-y^2)) / (u (1+x-u) (1-y-u) (u-x+y))`.
pub fn prefactor_k(p: &ReducedParams, u: Complex) -> Result<Complex, Error> {
    let [a_u, a_v, a_p, a_q] = check_branch(p, u)?;
    let num = libm::sqrt((1.0 - p.x * p.x) * (1.0 - p.y * p.y));
    Ok((a_u * a_v * a_p * a_q).inv() * num)
}

/// Closed form of `-f''` at `u±` (index 0 is `u+`). Requires `Delta >= 0`.
pub fn neg_d2f_at_saddles(p: &ReducedParams) -> (Complex, Complex) {
    let s = libm::sqrt(p.delta.max(0.0));
    let den = (1.0 - p.x * p.x) * (1.0 - p.y * p.y) * p.xi2 * p.one_minus_xi2();
    let im = 2.0 * s * (1.0 + p.x * p.y - 2.0 * p.xi2);
    (Complex::new(4.0 * p.delta, im) / den, Complex::new(4.0 * p.delta, -im) / den)
}

/// Closed form of `K` at `u±`. Requires `Delta >= 0`.
pub fn prefactor_at_saddles(p: &ReducedParams) -> (Complex, Complex) {
    let s = libm::sqrt(p.delta.max(0.0));
    let (ax, ay) = (1.0 - p.x * p.x, 1.0 - p.y * p.y);
    let den = p.xi2 * p.one_minus_xi2() * ax * ax * ay * ay;
    let c = 2.0 * p.xi2 - 1.0 - p.x * p.y;
    let f = |z: Complex| -(z * z) * libm::sqrt(ax * ay) / den;
    (f(Complex::new(c, 2.0 * s)), f(Complex::new(c, -2.0 * s)))
}

/// The angles `phi`, `psi`, `omega`, principal values in `(-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscAngles {
    pub phi: f64,
    pub psi: f64,
    pub omega: f64,
}

/// Unnormalised complex numbers whose arguments define `phi`, `psi`, `omega`.
pub fn angle_arguments(p: &ReducedParams) -> [Complex; 3] {
    let s = libm::sqrt(p.delta.max(0.0));
    let (x, y, w) = (p.x, p.y, p.xi2);
    [
        Complex::new(2.0 * w - 1.0 - x * y, 2.0 * s),
        Complex::new(0.5 * (x + y) - x * w, s),
        Complex::new(-0.5 * (x + y) + y * w, s),
    ]
}

pub fn angles_oscillatory(p: &ReducedParams) -> Result<OscAngles, Error> {
    if p.delta < 0.0 {
        return Err(Error::NotOscillatory);
    }
    let [a, b, c] = angle_arguments(p);
    Ok(OscAngles { phi: libm::atan2(a.im, a.re), psi: libm::atan2(b.im, b.re), omega: libm::atan2(c.im, c.re) })
}

/// Real angles of the suppressed region, for the decaying saddle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuppressedAngles {
    pub phi: f64,
    pub psi: f64,
    pub omega: f64,
    /// `+1` or `-1`: the determination of `sqrt(Delta')` that was used.
    pub root_sign: f64,
}

impl SuppressedAngles {
    /// Decay exponent `Xi = Phi + x Psi - y Omega`.
    pub fn xi(&self, p: &ReducedParams) -> f64 {
        self.phi + p.x * self.psi - p.y * self.omega
    }
}

/// `(Phi, Psi, Omega)` for one determination `root_sign * sqrt(Delta')`.
///
/// The logarithms take absolute values of their arguments: the three
/// arguments may be negative (for instance at `x = y = 0.8`, `xi^2 = 0.1`),
/// and the sign of the element is tracked separately. Fails with
/// `LogDomain` only for vanishing or non-finite arguments.
pub fn angles_suppressed_root(p: &ReducedParams, root_sign: f64) -> Result<SuppressedAngles, Error> {
    if p.delta >= 0.0 {
        return Err(Error::NotSuppressed);
    }
    let s = root_sign * libm::sqrt(-p.delta);
    let (x, y, w) = (p.x, p.y, p.xi2);
    let wb = p.one_minus_xi2();
    let a1 = (2.0 * w - 1.0 - x * y + 2.0 * s) / libm::sqrt((1.0 - x * x) * (1.0 - y * y));
    let a2 = (0.5 * (x + y) - x * w + s) / libm::sqrt(w * wb * (1.0 - x * x));
    let a3 = (-0.5 * (x + y) + y * w + s) / libm::sqrt(w * wb * (1.0 - y * y));
    let ln = |a: f64| {
        if a == 0.0 || !a.is_finite() {
            Err(Error::LogDomain)
        } else {
            Ok(libm::log(a.abs()))
        }
    };
    Ok(SuppressedAngles { phi: ln(a1)?, psi: ln(a2)?, omega: ln(a3)?, root_sign })
}

/// `(Phi, Psi, Omega)` at the saddle that gives a decaying contribution.
///
/// The two determinations of `sqrt(Delta')` give exponents `Xi` and `-Xi`
/// (the products of paired arguments have unit modulus); the one with
/// `Xi > 0` is returned.
pub fn angles_suppressed(p: &ReducedParams) -> Result<SuppressedAngles, Error> {
    let plus = angles_suppressed_root(p, 1.0)?;
    if plus.xi(p) >= 0.0 {
        Ok(plus)
    } else {
        angles_suppressed_root(p, -1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WignerEstimate {
    pub value: Complex,
    pub region: RegionClass,
    /// Envelope of the estimate; `value = e^{-i(alpha M + gamma M')} amplitude cos(phase)`.
    pub amplitude: f64,
    pub phase: f64,
    pub em_reliable: bool,
    /// `Xi` in the suppressed region.
    pub decay_exponent: Option<f64>,
}

fn euler_phase(pair: &MagneticPair, g: &EulerRotation) -> Complex {
    Complex::from_polar(1.0, -(g.alpha * pair.m.value() + g.gamma * pair.mp.value()))
}

fn prepare(j: Spin, m: HalfInt, mp: HalfInt, g: &EulerRotation) -> Result<(MagneticPair, ReducedParams), Error> {
    let pair = MagneticPair::new(j, m, mp)?;
    let p = ReducedParams::from_quantum(&pair, g)?;
    Ok((pair, p))
}

fn build(pair: &MagneticPair, g: &EulerRotation, p: &ReducedParams, region: RegionClass, amplitude: f64, phase: f64) -> WignerEstimate {
    WignerEstimate {
        value: euler_phase(pair, g) * (amplitude * libm::cos(phase)),
        region,
        amplitude,
        phase,
        em_reliable: boundary_exponent(p.x, p.y, p.xi2) < 0.0,
        decay_exponent: None,
    }
}

/// Oscillatory estimate
/// `e^{-i(alpha M + gamma M')} (pi J sqrt(Delta))^{-1/2} cos[(J+1/2) phi + M psi - M' omega - pi/4]`.
pub fn wigner_asym_oscillatory(j: Spin, m: HalfInt, mp: HalfInt, g: &EulerRotation, kappa: f64) -> Result<WignerEstimate, Error> {
    let (pair, p) = prepare(j, m, mp, g)?;
    let region = classify_region(j, &p, kappa);
    if region.region != Region::Oscillatory {
        return Err(Error::WrongRegion);
    }
    Ok(oscillatory_unchecked(&pair, g, &p, region))
}

fn oscillatory_unchecked(pair: &MagneticPair, g: &EulerRotation, p: &ReducedParams, region: RegionClass) -> WignerEstimate {
    let a = angles_oscillatory(p).expect("delta checked by caller");
    let jv = pair.j.value();
    let amplitude = 1.0 / libm::sqrt(PI * jv * libm::sqrt(p.delta));
    let phase = (jv + 0.5) * a.phi + pair.m.value() * a.psi - pair.mp.value() * a.omega - 0.25 * PI;
    build(pair, g, p, region, amplitude, phase)
}

/// Sign of the element away from the oscillatory region.
///
/// The alternating sum is then dominated by one end of the summation range:
/// the `t_max` end when `2 xi^2 - 1 - x y < 0` (beta near pi) and the
/// `t_min` end otherwise.
fn forbidden_sign(pair: &MagneticPair, p: &ReducedParams) -> f64 {
    let (jpm, _, jpmp, jmmp) = pair.offsets();
    let t_min = (jpm as i64 - jpmp as i64).max(0);
    let t_max = jpm.min(jmmp) as i64;
    let t = if 2.0 * p.xi2 - 1.0 - p.x * p.y < 0.0 { t_max } else { t_min };
    if t % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Suppressed estimate `(2 pi J)^{-1/2} (2 sqrt(Delta'))^{-1/2} e^{-Phi/2} e^{-J Xi}`, signed.
pub fn wigner_asym_suppressed(j: Spin, m: HalfInt, mp: HalfInt, g: &EulerRotation, kappa: f64) -> Result<WignerEstimate, Error> {
    let (pair, p) = prepare(j, m, mp, g)?;
    let region = classify_region(j, &p, kappa);
    if region.region != Region::Suppressed {
        return Err(Error::WrongRegion);
    }
    suppressed_unchecked(&pair, g, &p, region)
}

fn suppressed_unchecked(pair: &MagneticPair, g: &EulerRotation, p: &ReducedParams, region: RegionClass) -> Result<WignerEstimate, Error> {
    let a = angles_suppressed(p)?;
    let xi = a.xi(p);
    let jv = pair.j.value();
    let log_amp = -0.5 * libm::log(2.0 * PI * jv) - 0.25 * libm::log(4.0 * -p.delta) - 0.5 * a.phi - jv * xi;
    let amplitude = libm::exp(log_amp);
    let phase = if forbidden_sign(pair, p) > 0.0 { 0.0 } else { PI };
    let mut e = build(pair, g, p, region, amplitude, phase);
    e.decay_exponent = Some(xi);
    Ok(e)
}

/// Cubic-saddle estimate at the double root `u0 = 1 - xi^2 + (x - y)/2`:
/// `(1/2pi) sqrt|K(u0)| e^{J Re f(u0)} 2 pi Ai(0) (2 / (J |f'''(u0)|))^{1/3}`, signed.
pub fn wigner_asym_transition(j: Spin, m: HalfInt, mp: HalfInt, g: &EulerRotation, kappa: f64) -> Result<WignerEstimate, Error> {
    let (pair, p) = prepare(j, m, mp, g)?;
    let region = classify_region(j, &p, kappa);
    if region.region != Region::Transition {
        return Err(Error::WrongRegion);
    }
    transition_unchecked(&pair, g, &p, region)
}

fn transition_unchecked(pair: &MagneticPair, g: &EulerRotation, p: &ReducedParams, region: RegionClass) -> Result<WignerEstimate, Error> {
    let jv = pair.j.value();
    let u0 = Complex::new(p.one_minus_xi2() + 0.5 * (p.x - p.y), 0.0);
    let k = prefactor_k(p, u0)?;
    let f3 = action_d3f(p, u0)?;
    let re_f = action_f_real(p.x, p.y, p.xi2, u0.re);
    let amplitude = libm::sqrt(k.norm()) * libm::exp(jv * re_f) * airy_ai_zero() * libm::cbrt(2.0 / (jv * f3.norm()));
    let phase = if forbidden_sign(pair, p) > 0.0 { 0.0 } else { PI };
    Ok(build(pair, g, p, region, amplitude, phase))
}

/// Estimate from whichever region the point falls in.
pub fn wigner_asym(j: Spin, m: HalfInt, mp: HalfInt, g: &EulerRotation, kappa: f64) -> Result<WignerEstimate, Error> {
    let (pair, p) = prepare(j, m, mp, g)?;
    let region = classify_region(j, &p, kappa);
    match region.region {
        Region::Oscillatory => Ok(oscillatory_unchecked(&pair, g, &p, region)),
        Region::Suppressed => suppressed_unchecked(&pair, g, &p, region),
        Region::Transition => transition_unchecked(&pair, g, &p, region),
    }
}

/// Largest real part of the action at the two ends of the summation range,
/// `u_min = max(0, x - y)` and `u_max = min(1 + x, 1 - y)`.
///
/// Euler–Maclaurin boundary corrections are exponentially small when this is negative.
pub fn boundary_exponent(x: f64, y: f64, xi2: f64) -> f64 {
    let u_min = (x - y).max(0.0);
    let u_max = (1.0 + x).min(1.0 - y);
    action_f_real(x, y, xi2, u_min).max(action_f_real(x, y, xi2, u_max))
}

/// Diagonal (`M = M'`) boundary diagnostic at the upper end `u = 1 - x`:
/// `x ln xi^2 + (1-x) ln(1-xi^2) + (1+x) ln(1+x) - (1-x) ln(1-x) - 2x ln(2x)`.
///
/// Returns the exponent and whether it is negative.
pub fn em_reliability(x: f64, xi2: f64) -> Result<(f64, bool), Error> {
    if !(x > 0.0 && x < 1.0 && xi2 > 0.0 && xi2 < 1.0) {
        return Err(Error::DomainError);
    }
    let e = x * libm::log(xi2) + (1.0 - x) * libm::log(1.0 - xi2) + xlnx(1.0 + x) - xlnx(1.0 - x) - xlnx(2.0 * x);
    Ok((e, e < 0.0))
}

/// Location `x = xi / sqrt(4 - 3 xi^2)` and value `ln[(xi + sqrt(4 - 3 xi^2))^2 / 4]`
/// of the maximum of the diagonal boundary exponent.
pub fn em_worst_point(xi2: f64) -> (f64, f64) {
    let xi = libm::sqrt(xi2);
    let r = libm::sqrt(4.0 - 3.0 * xi2);
    (xi / r, libm::log((xi + r) * (xi + r) / 4.0))
}

/// `xi^2` on the caustic `Delta = 0` for given `x`, `y`; the smaller root first.
pub fn caustic_xi2(x: f64, y: f64) -> (f64, f64) {
    let r = libm::sqrt((1.0 - x * x) * (1.0 - y * y));
    (0.5 * (1.0 + x * y - r), 0.5 * (1.0 + x * y + r))
}
