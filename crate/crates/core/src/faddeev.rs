//! Non-compact quantum dilogarithm φ_ℏ in double precision, and numerical
//! checks of its algebraic and integral identities.
//!
//! Conventions: `c = i(ℏ+ℏ⁻¹)/2`; φ has poles at `c + i(kℏ⁻¹ + nℏ)` and zeros at
//! `−c − i(kℏ + nℏ⁻¹)` for `k, n ≥ 0`.

use crate::{Error, Result};
use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn cexp(z: C64) -> C64 {
    z.exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HbarParam {
    pub hbar: C64,
    pub c: C64,
    pub zeta: C64,
    pub zeta_inv: C64,
}

impl HbarParam {
    /// `ℏ` must lie in the open first quadrant (so that `Im ℏ² > 0`).
    pub fn new(hbar: C64) -> Result<Self> {
        if !(hbar.re > 0.0 && hbar.im > 0.0) {
            return Err(Error::Invalid(format!("ℏ = {hbar} is not in the open first quadrant")));
        }
        Ok(Self::unchecked(hbar))
    }

    fn unchecked(hbar: C64) -> Self {
        let c = I * (hbar + hbar.inv()) / 2.0;
        let zeta = cexp(PI * I * (C64::new(1.0, 0.0) - 4.0 * c * c) / 12.0);
        let zeta_inv = zeta.powi(-2) * cexp(-PI * I * c * c);
        Self { hbar, c, zeta, zeta_inv }
    }

    /// `ℏ = r·e^{iθ}`.
    pub fn polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(C64::from_polar(r, theta))
    }

    /// Distance from `z` to the nearest pole of φ.
    pub fn pole_distance(&self, z: C64) -> f64 {
        lattice_distance(z - self.c, I * self.hbar.inv(), I * self.hbar)
    }

    /// Distance from `z` to the nearest zero of φ.
    pub fn zero_distance(&self, z: C64) -> f64 {
        lattice_distance(-z - self.c, I * self.hbar, I * self.hbar.inv())
    }
}

/// Distance from `w` to `{k·e1 + n·e2 : k, n ≥ 0}`.
fn lattice_distance(w: C64, e1: C64, e2: C64) -> f64 {
    // solve w = x e1 + y e2 in reals, then scan nearby lattice points
    let det = e1.re * e2.im - e1.im * e2.re;
    let x = (w.re * e2.im - w.im * e2.re) / det;
    let y = (e1.re * w.im - e1.im * w.re) / det;
    let mut best = f64::INFINITY;
    let (x0, y0) = (x.floor() as i64, y.floor() as i64);
    for k in (x0 - 2).max(0)..=(x0 + 2).max(0) {
        for n in (y0 - 2).max(0)..=(y0 + 2).max(0) {
            best = best.min((w - e1 * k as f64 - e2 * n as f64).norm());
        }
    }
    best
}

const LOG_TERM_EPS: f64 = -39.2; // ln 1e-17
const MAX_TERMS: usize = 2_000_000;

/// `Σ_k log(1 − e^{u + k·lq})`, truncated once `|e^{u+k·lq}| < 1e−17`. Works
/// with exponents throughout so that huge arguments do not overflow.
fn log_pochhammer(u: C64, lq: C64) -> Result<C64> {
    if lq.re >= 0.0 {
        return Err(Error::Numerical("|q| ≥ 1: product diverges, use the integral evaluator".into()));
    }
    let mut acc = C64::new(0.0, 0.0);
    let mut v = u;
    let mut k = 0;
    while v.re >= LOG_TERM_EPS {
        acc += if v.re > 20.0 {
            // 1 − e^v = e^v (e^{−v} − 1)
            v + (cexp(-v) - 1.0).ln()
        } else {
            (1.0 - cexp(v)).ln()
        };
        v += lq;
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::Numerical("q-Pochhammer did not converge".into()));
        }
    }
    Ok(acc)
}

/// `log φ_ℏ(z)` as the sum of principal logarithms of the factors of the product
/// formula. Exponentiates to [`phi_ncqd`]; the branch is continuous wherever no
/// factor crosses the negative axis.
pub fn log_phi(z: C64, p: &HbarParam) -> Result<C64> {
    if p.pole_distance(z) < 1e-6 {
        return Err(Error::Numerical(format!("z = {z} is within 1e-6 of a pole")));
    }
    let h = p.hbar;
    let num = log_pochhammer(2.0 * PI * h * (z + p.c), 2.0 * PI * I * h * h)?;
    let den = log_pochhammer(2.0 * PI / h * (z - p.c), -2.0 * PI * I / (h * h))?;
    Ok(num - den)
}

/// φ_ℏ(z) from the double product formula (`Im ℏ² > 0`).
pub fn phi_ncqd(z: C64, p: &HbarParam) -> Result<C64> {
    Ok(cexp(log_phi(z, p)?))
}

/// φ_ℏ(z) from the contour integral `exp(¼∫ e^{−2izt} / (sinh(tℏ) sinh(t/ℏ)) dt/t)`
/// along `Im t = ε`, passing above the origin. Slow; used as a cross-check.
/// Valid for `|Im z| < Re(ℏ+ℏ⁻¹)/2`.
/// Accepts any `ℏ` with `Re(ℏ+ℏ⁻¹) ≠ 0`.
pub fn phi_kashaev(z: C64, h: C64) -> Result<C64> {
    let width = (h + h.inv()).re.abs() / 2.0;
    if z.im.abs() >= width * 0.95 {
        return Err(Error::Numerical(format!("z = {z} outside the strip of the integral representation")));
    }
    // nearest nonzero poles of the integrand: iπk/ℏ, iπkℏ
    let eps = 0.3f64.min(0.45 * (PI * h.inv()).re.abs().min((PI * h).re.abs()));
    let f = |s: f64| {
        let t = C64::new(s, eps);
        cexp(-2.0 * I * z * t) / ((t * h).sinh() * (t / h).sinh() * t)
    };
    let rate = 2.0 * width - 2.0 * z.im.abs();
    let tmax = 40.0 / rate + 5.0;
    let mut prev: Option<C64> = None;
    let mut hstep = 0.05;
    loop {
        let n = (tmax / hstep).ceil() as i64;
        let sum: C64 = (-n..=n).into_par_iter().map(|k| f(k as f64 * hstep)).sum::<C64>() * hstep;
        if let Some(pv) = prev {
            if (sum - pv).norm() < 1e-13 * (1.0 + sum.norm()) {
                return Ok(cexp(sum / 4.0));
            }
        }
        if hstep < 1e-4 {
            return Err(Error::Numerical("integral evaluator did not converge".into()));
        }
        prev = Some(sum);
        hstep /= 2.0;
    }
}

/// Principal branch of the dilogarithm.
pub fn li2(z: C64) -> C64 {
    let pi2_6 = PI * PI / 6.0;
    if z.norm() < 1e-300 {
        return z;
    }
    if (z - 1.0).norm() < 1e-15 {
        return C64::new(pi2_6, 0.0);
    }
    if z.norm() > 1.0 {
        // Li₂(z) = −Li₂(1/z) − π²/6 − ½ log²(−z)
        let l = (-z).ln();
        return -li2(z.inv()) - pi2_6 - l * l / 2.0;
    }
    if z.re > 0.5 {
        // Li₂(z) = π²/6 − log z · log(1−z) − Li₂(1−z)
        let w = C64::new(1.0, 0.0) - z;
        if w.norm() < 1e-300 {
            return C64::new(pi2_6, 0.0);
        }
        return C64::new(pi2_6, 0.0) - z.ln() * w.ln() - li2(w);
    }
    // Bernoulli series in u = −log(1−z), |u| ≲ 1.05 here
    const B: [f64; 16] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
        43867.0 / 798.0,
        -174611.0 / 330.0,
        854513.0 / 138.0,
        -236364091.0 / 2730.0,
        8553103.0 / 6.0,
        -23749461029.0 / 870.0,
        8615841276005.0 / 14322.0,
        -7709321041217.0 / 510.0,
    ];
    let u = -(C64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    let mut acc = u - u2 / 4.0;
    // term for B_{2k}: B_{2k} u^{2k+1} / (2k+1)!
    let mut pw = u;
    let mut fact = 1.0;
    for (k, b) in B.iter().enumerate() {
        let n = 2 * (k + 1);
        pw *= u2;
        fact *= (n as f64) * (n as f64 + 1.0);
        acc += pw * (*b / fact);
    }
    acc
}

// ---------------------------------------------------------------------------
// Contours and quadrature

/// A straight contour `t(s) = e^{iβ}(s + i·height)`, `s ∈ ℝ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub angle: f64,
    pub height: f64,
}

impl Contour {
    pub fn point(&self, s: f64) -> C64 {
        C64::from_polar(1.0, self.angle) * C64::new(s, self.height)
    }

    fn direction(&self) -> C64 {
        C64::from_polar(1.0, self.angle)
    }
}

/// Shape of an integrand `Π φ(t − a_j) / Π φ(t − b_k) · e^{2πiκt}`, used to
/// place the contour below the poles of the numerator factors, above the poles
/// of the reciprocal factors, and along a direction of decay.
#[derive(Clone, Debug)]
pub struct IntegrandShape {
    pub num: Vec<C64>,
    pub den: Vec<C64>,
    pub kappa: C64,
}

const CLEARANCE: f64 = 0.05;

impl IntegrandShape {
    /// Asymptotic profile along `e^{iβ}(s + iH)`: the left end decays like
    /// `e^{−left·|s|}`, the right end behaves like `e^{Q s² + L s}`.
    fn profile(&self, c: &Contour) -> (f64, f64, f64) {
        let e = C64::from_polar(1.0, c.angle);
        let left = -2.0 * PI * (self.kappa * e).im;
        let dq = (self.num.len() as f64) - (self.den.len() as f64);
        let kr = self.kappa + self.den.iter().sum::<C64>() - self.num.iter().sum::<C64>();
        let quad = -PI * dq * (2.0 * c.angle).sin();
        let lin = -2.0 * PI * (dq * c.height * (2.0 * c.angle).cos() + (kr * e).im);
        (left, quad, lin)
    }

    /// `Some(hump)` if the integrand decays at both ends, where `hump` is the
    /// log-height of the transient growth at the right end.
    fn decays(&self, c: &Contour) -> Option<f64> {
        const MIN_RATE: f64 = 0.3;
        let (left, quad, lin) = self.profile(c);
        if left < MIN_RATE {
            return None;
        }
        if quad < -1e-9 {
            Some(if lin > 0.0 { lin * lin / (-4.0 * quad) } else { 0.0 })
        } else if quad.abs() <= 1e-9 && lin < -MIN_RATE {
            Some(0.0)
        } else {
            None
        }
    }

    /// Heights (in the frame rotated by `−β`) of the lowest pole that must lie
    /// above the contour and of the highest one that must lie below.
    fn pole_window(&self, p: &HbarParam, beta: f64) -> (f64, f64) {
        let rot = C64::from_polar(1.0, -beta);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let (ih, ihi) = (I * p.hbar, I * p.hbar.inv());
        for k in 0..12 {
            for n in 0..12 {
                let off = ihi * k as f64 + ih * n as f64;
                for a in &self.num {
                    lo = lo.min(((a + p.c + off) * rot).im);
                }
                for b in &self.den {
                    let off2 = ih * k as f64 + ihi * n as f64;
                    hi = hi.max(((b - p.c - off2) * rot).im);
                }
            }
        }
        (lo, hi)
    }

    /// Picks the contour among a grid of directions and heights: it must
    /// separate the two pole families, decay at both ends with a bounded
    /// transient, and among those has the smallest coarse L¹ norm (the integral
    /// is the same on all of them, so this minimises cancellation).
    pub fn contour(&self, p: &HbarParam) -> Result<Contour> {
        let lim = PI / 2.0 - p.hbar.arg() - 0.05;
        let steps = 20;
        let mut angles: Vec<f64> = (0..=steps).map(|j| -lim + 2.0 * lim * j as f64 / steps as f64).collect();
        for k in 2..7 {
            let b = lim * 0.5f64.powi(k);
            angles.extend([b, -b]);
        }
        self.best_contour(p, &angles)
    }

    /// The contour in a fixed direction `β`.
    pub fn contour_at_angle(&self, p: &HbarParam, beta: f64) -> Result<Contour> {
        if beta.abs() >= PI / 2.0 - p.hbar.arg() {
            return Err(Error::Numerical(format!("direction {beta} leaves the asymptotic sector")));
        }
        self.best_contour(p, &[beta])
    }

    fn heights(&self, p: &HbarParam, beta: f64) -> Vec<f64> {
        let (lo, hi) = self.pole_window(p, beta);
        let steps = [0.1, 0.2, 0.35, 0.5, 0.8, 1.2, 2.0];
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) if lo - hi > 2.0 * CLEARANCE => {
                (1..8).map(|j| hi + (lo - hi) * j as f64 / 8.0).filter(|h| lo - h > CLEARANCE && h - hi > CLEARANCE).collect()
            }
            (true, true) => vec![],
            (true, false) => steps.iter().map(|d| lo - d).collect(),
            (false, true) => steps.iter().map(|d| hi + d).collect(),
            _ => vec![-1.0, -0.5, 0.0, 0.5, 1.0],
        }
    }

    fn best_contour(&self, p: &HbarParam, angles: &[f64]) -> Result<Contour> {
        const MAX_HUMP: f64 = 12.0;
        let mut best: Option<(f64, Contour)> = None;
        for &angle in angles {
            for height in self.heights(p, angle) {
                let cand = Contour { angle, height };
                let Some(hump) = self.decays(&cand) else { continue };
                if hump > MAX_HUMP {
                    continue;
                }
                let Some(cost) = self.coarse_log_l1(&cand, p) else { continue };
                // trapezoid cost grows like 1/(distance to the nearest pole)
                let (lo, hi) = self.pole_window(p, angle);
                let d = (lo - height).min(height - hi).min(1.0);
                let cost = cost.max(hump) - d.ln();
                if best.as_ref().map_or(true, |(b, _)| cost < *b) {
                    best = Some((cost, cand));
                }
            }
        }
        best.map(|(_, c)| c)
            .ok_or_else(|| Error::Numerical("contour intersects pole lattice or integrand does not decay".into()))
    }

    /// `log Σ|f|` over a coarse grid on the contour, computed in log space.
    fn coarse_log_l1(&self, c: &Contour, p: &HbarParam) -> Option<f64> {
        let logs: Vec<f64> = (-40..=40).filter_map(|k| self.log_eval(c.point(k as f64), p).ok().map(|v| v.re)).collect();
        if logs.len() < 70 {
            return None;
        }
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Some(m + logs.iter().map(|v| (v - m).exp()).sum::<f64>().ln())
    }

    /// Whether `c` is admissible for this integrand (cheap test used when
    /// reusing one contour for a family of integrands).
    pub fn admits(&self, c: &Contour, p: &HbarParam) -> bool {
        let (lo, hi) = self.pole_window(p, c.angle);
        self.decays(c).is_some_and(|h| h < 12.0) && c.height < lo - CLEARANCE && c.height > hi + CLEARANCE
    }

    fn log_eval(&self, t: C64, p: &HbarParam) -> Result<C64> {
        let mut l = 2.0 * PI * I * self.kappa * t;
        for a in &self.num {
            l += log_phi(t - a, p)?;
        }
        for b in &self.den {
            l -= log_phi(t - b, p)?;
        }
        Ok(l)
    }

    pub fn eval(&self, t: C64, p: &HbarParam) -> Result<C64> {
        Ok(cexp(self.log_eval(t, p)?))
    }
}

/// Quadrature settings for [`integrate`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Quadrature {
    pub step: f64,
    pub min_step: f64,
    pub tol: f64,
    pub max_half_length: f64,
    /// The contour is truncated where `|f| < cutoff · max|f|`.
    pub cutoff: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { step: 0.05, min_step: 1e-3, tol: 1e-11, max_half_length: 400.0, cutoff: 1e-17 }
    }
}

/// Sum of `f` over `s = (2j+1)·h` (odd) or `s = j·h` (all), `|s| ≤ t`, with the L¹ sum.
fn node_sum<F>(f: &F, c: &Contour, h: f64, t: f64, odd_only: bool) -> Result<(C64, f64)>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    let n = (t / h).ceil() as i64;
    let ks: Vec<i64> = if odd_only { (-n..=n).filter(|k| k % 2 != 0).collect() } else { (-n..=n).collect() };
    let vals: Result<Vec<C64>> = ks.into_par_iter().map(|k| f(c.point(k as f64 * h))).collect();
    let vals = vals?;
    let l1: f64 = vals.iter().map(|v| v.norm()).sum();
    Ok((vals.into_iter().sum::<C64>(), l1))
}

/// Trapezoid rule along the contour: the half-length grows until the integrand
/// is negligible at both ends, then the step is halved until successive
/// results agree to `tol` relative to the result (or, under heavy
/// cancellation, to 1e-4·tol of the L¹ norm).
pub fn integrate<F>(f: F, c: &Contour, q: &Quadrature) -> Result<C64>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    integrate_detailed(f, c, q).map(|r| r.0)
}

/// As [`integrate`], also returning the final step and half-length.
pub fn integrate_detailed<F>(f: F, c: &Contour, q: &Quadrature) -> Result<(C64, f64, f64)>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    let probe = 0.5;
    let mut peak: f64 = 0.0;
    let mut ends = [0.0f64; 2];
    for (i, dir) in [-1.0, 1.0].iter().enumerate() {
        let mut s = 0.0;
        let mut small = 0;
        loop {
            let v = f(c.point(dir * s))?.norm();
            if !v.is_finite() {
                return Err(Error::Numerical("integrand overflow on contour".into()));
            }
            peak = peak.max(v);
            if v < q.cutoff * peak.max(1e-300) {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            s += probe;
            if s > q.max_half_length {
                return Err(Error::Numerical("integrand does not decay along the contour".into()));
            }
        }
        ends[i] = s;
    }
    let t = ends[0].max(ends[1]);
    let dir = c.direction();
    let mut h = q.step;
    let (mut sum, mut l1) = node_sum(&f, c, h, t, false)?;
    let mut prev = sum * h * dir;
    loop {
        h /= 2.0;
        let (s_odd, l_odd) = node_sum(&f, c, h, t, true)?;
        sum += s_odd;
        l1 += l_odd;
        let cur = sum * h * dir;
        let change = (cur - prev).norm();
        if change <= q.tol * cur.norm() || change <= 1e-4 * q.tol * l1 * h {
            return Ok((cur, h, t));
        }
        if h < q.min_step {
            return Err(Error::Numerical(format!(
                "quadrature did not converge (last change {:.2e}, |I| = {:.2e}, L1 = {:.2e})",
                change,
                cur.norm(),
                l1 * h
            )));
        }
        prev = cur;
    }
}

/// Integrates an integrand of the given shape along its automatically chosen contour.
pub fn integrate_shape(s: &IntegrandShape, p: &HbarParam, q: &Quadrature) -> Result<C64> {
    let c = s.contour(p)?;
    integrate(|t| s.eval(t, p), &c, q)
}

// ---------------------------------------------------------------------------
// Identities

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    Inversion,
    FunctionalPlus,
    FunctionalMinus,
    Fourier1,
    Fourier2,
    Beta1,
    Beta2,
    Lemma23,
    Cube,
    CubeSemiclassical,
}

impl Identity {
    pub const ALL: [Identity; 10] = [
        Identity::Inversion,
        Identity::FunctionalPlus,
        Identity::FunctionalMinus,
        Identity::Fourier1,
        Identity::Fourier2,
        Identity::Beta1,
        Identity::Beta2,
        Identity::Lemma23,
        Identity::Cube,
        Identity::CubeSemiclassical,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::Inversion => "inversion",
            Identity::FunctionalPlus => "functional_plus",
            Identity::FunctionalMinus => "functional_minus",
            Identity::Fourier1 => "fourier_1",
            Identity::Fourier2 => "fourier_2",
            Identity::Beta1 => "beta_1",
            Identity::Beta2 => "beta_2",
            Identity::Lemma23 => "lemma23",
            Identity::Cube => "cube",
            Identity::CubeSemiclassical => "cube_semiclassical",
        }
    }

    /// Pass threshold on the reported residual.
    pub fn threshold(&self) -> f64 {
        match self {
            Identity::Inversion | Identity::FunctionalPlus | Identity::FunctionalMinus => 1e-8,
            Identity::Fourier1 | Identity::Fourier2 | Identity::Beta1 | Identity::Beta2 => 1e-5,
            Identity::Lemma23 | Identity::Cube => 1e-4,
            Identity::CubeSemiclassical => 0.2,
        }
    }

    fn algebraic(&self) -> bool {
        matches!(self, Identity::Inversion | Identity::FunctionalPlus | Identity::FunctionalMinus)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .iter()
            .find(|i| i.name() == s)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown identity '{s}'")))
    }
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, or `a,b`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot parse complex number '{s}'"));
    if let Some((a, b)) = t.split_once(',') {
        return Ok(C64::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
    }
    if let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let mut cut = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                cut = Some(k);
                break;
            }
        }
        let (re, im) = match cut {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            x => x,
        };
        return Ok(C64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?));
    }
    Ok(C64::new(t.parse().map_err(|_| bad())?, 0.0))
}

#[derive(Clone, Debug)]
pub struct IdentityParams {
    /// Fixed `ℏ`; `None` draws a random `ℏ` per sample for the algebraic
    /// identities and uses `e^{iπ/5}` for the integral ones.
    pub hbar: Option<C64>,
    pub points: usize,
    pub seed: u64,
    pub quadrature: Quadrature,
}

impl Default for IdentityParams {
    fn default() -> Self {
        Self { hbar: None, points: 0, seed: 1, quadrature: Quadrature::default() }
    }
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Sample {
    pub hbar: [f64; 2],
    pub point: Vec<[f64; 2]>,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IdentityReport {
    pub name: String,
    pub samples: Vec<Sample>,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
    pub note: String,
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn rand_c(rng: &mut StdRng, re: (f64, f64), im: (f64, f64)) -> C64 {
    C64::new(rng.gen_range(re.0..re.1), rng.gen_range(im.0..im.1))
}

const DEFAULT_THETA: f64 = PI / 5.0;

fn fixed_param(params: &IdentityParams) -> Result<HbarParam> {
    match params.hbar {
        Some(h) => HbarParam::new(h),
        None => HbarParam::polar(1.0, DEFAULT_THETA),
    }
}

/// Runs one identity check and reports per-sample residuals.
pub fn verify_identity(id: Identity, params: &IdentityParams) -> Result<IdentityReport> {
    let mut rng = StdRng::seed_from_u64(params.seed ^ (id as u64).wrapping_mul(0x2545_F491_4F6C_DD1D));
    let default_points = match id {
        Identity::Lemma23 | Identity::Cube => 5,
        Identity::CubeSemiclassical => 6,
        _ if id.algebraic() => 20,
        _ => 4,
    };
    let n = if params.points == 0 { default_points } else { params.points };
    let mut note = String::new();
    let samples: Vec<Sample> = match id {
        _ if id.algebraic() => {
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let p = match params.hbar {
                    Some(h) => HbarParam::new(h)?,
                    None => HbarParam::polar(rng.gen_range(0.6..1.6), rng.gen_range(0.15..1.35))?,
                };
                let z = rand_c(&mut rng, (-1.5, 1.5), (-0.8, 0.8));
                if let Some(s) = algebraic_sample(id, z, &p)? {
                    out.push(s);
                }
            }
            out
        }
        Identity::Fourier1 | Identity::Fourier2 | Identity::Beta1 | Identity::Beta2 => {
            let p = fixed_param(params)?;
            let mut pts = Vec::new();
            let mut tries = 0;
            while pts.len() < n {
                tries += 1;
                if tries > 50 * n {
                    return Err(Error::Numerical("no admissible sample points for this ℏ".into()));
                }
                let w = rand_c(&mut rng, (-0.6, 0.6), (-0.4, 0.1));
                let a = rand_c(&mut rng, (-0.6, 0.6), (-0.4, 0.1));
                let (shape, _) = integral_shape(id, a, w, &p);
                if shape.contour(&p).is_ok() && p.pole_distance(a + w + p.c) > 0.1 && p.pole_distance(a + w - p.c) > 0.1
                {
                    pts.push((a, w));
                }
            }
            pts.par_iter().map(|&(a, w)| integral_sample(id, a, w, &p, &params.quadrature)).collect::<Result<_>>()?
        }
        Identity::Lemma23 | Identity::Cube => {
            let p = fixed_param(params)?;
            let gamma = p.c.im;
            let pts: Vec<[C64; 3]> = (0..n)
                .map(|_| {
                    // region where the nested contours exist (see `lemma_lhs`)
                    let z2 = rand_c(&mut rng, (-0.5, 0.5), (-1.45 * gamma, -1.35 * gamma));
                    let z1 = rand_c(&mut rng, (-0.5, 0.5), (-1.45 * gamma, -1.35 * gamma));
                    let z3 = rand_c(&mut rng, (-0.5, 0.5), (-0.3, 0.3));
                    [z1, z2, z3]
                })
                .collect();
            let raw: Vec<(Vec<C64>, C64, C64)> = pts
                .iter()
                .map(|z| projective_sample(id, z, &p, &params.quadrature))
                .collect::<Result<_>>()?;
            let r0 = raw[0].1 / raw[0].2;
            note = format!("ratio lhs/rhs ≈ {:.10}{:+.10}i", r0.re, r0.im);
            raw.into_iter()
                .map(|(pt, l, r)| Sample {
                    hbar: pair(p.hbar),
                    point: pt.into_iter().map(pair).collect(),
                    lhs: pair(l),
                    rhs: pair(r),
                    residual: ((l / r) / r0 - 1.0).norm(),
                })
                .collect()
        }
        Identity::CubeSemiclassical => {
            let pts: Vec<[C64; 3]> = (0..n)
                .map(|_| {
                    [
                        rand_c(&mut rng, (-0.8, 0.8), (0.5, 1.2)),
                        rand_c(&mut rng, (-0.8, 0.8), (-0.4, -0.1)),
                        rand_c(&mut rng, (-0.8, 0.8), (-0.4, -0.1)),
                    ]
                })
                .collect();
            let radii = [0.25, 0.16, 0.1];
            let theta = params.hbar.map_or(PI / 4.0, |h| h.arg());
            let mut out = Vec::new();
            for r in radii {
                let p = HbarParam::polar(r, theta)?;
                let mut worst = 0.0f64;
                let mut last = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                for z in &pts {
                    let (f, w) = cube_semiclassical_pair(z, &p)?;
                    worst = worst.max((f - w).norm());
                    last = (f, w);
                }
                out.push(Sample {
                    hbar: pair(p.hbar),
                    point: pts.last().unwrap().iter().copied().map(pair).collect(),
                    lhs: pair(last.0),
                    rhs: pair(last.1),
                    residual: worst,
                });
            }
            let decreasing = out.windows(2).all(|w| w[1].residual < w[0].residual);
            note = format!(
                "max error over {n} points at |ℏ| = {radii:?}: {:?}; decreasing: {decreasing}",
                out.iter().map(|s| s.residual).collect::<Vec<_>>()
            );
            if !decreasing {
                let max_residual = out.iter().map(|s| s.residual).fold(0.0, f64::max);
                return Ok(IdentityReport {
                    name: id.name().into(),
                    samples: out,
                    max_residual,
                    threshold: id.threshold(),
                    passed: false,
                    note,
                });
            }
            // pass criterion: monotone decrease and the last error under threshold
            let last = out.last().unwrap().residual;
            return Ok(IdentityReport {
                name: id.name().into(),
                samples: out,
                max_residual: last,
                threshold: id.threshold(),
                passed: last < id.threshold(),
                note,
            });
        }
        _ => unreachable!(),
    };
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(IdentityReport {
        name: id.name().into(),
        samples,
        max_residual,
        threshold: id.threshold(),
        passed: max_residual < id.threshold(),
        note,
    })
}

fn algebraic_sample(id: Identity, z: C64, p: &HbarParam) -> Result<Option<Sample>> {
    let h = p.hbar;
    let (lhs, rhs) = match id {
        Identity::Inversion => {
            let (Ok(a), Ok(b)) = (phi_ncqd(z, p), phi_ncqd(-z, p)) else { return Ok(None) };
            (a * b, p.zeta_inv * cexp(PI * I * z * z))
        }
        Identity::FunctionalPlus | Identity::FunctionalMinus => {
            let e = if id == Identity::FunctionalPlus { h } else { h.inv() };
            let (Ok(a), Ok(b)) = (phi_ncqd(z - I * e / 2.0, p), phi_ncqd(z + I * e / 2.0, p)) else {
                return Ok(None);
            };
            (a, (1.0 + cexp(2.0 * PI * e * z)) * b)
        }
        _ => unreachable!(),
    };
    if !(lhs.is_finite() && rhs.is_finite()) || lhs.norm().max(rhs.norm()) > 1e12 {
        return Ok(None);
    }
    Ok(Some(Sample { hbar: pair(h), point: vec![pair(z)], lhs: pair(lhs), rhs: pair(rhs), residual: rel(lhs, rhs) }))
}

/// Integrand shape and closed-form value for the Fourier and beta integrals.
fn integral_shape(id: Identity, a: C64, w: C64, p: &HbarParam) -> (IntegrandShape, Box<dyn Fn() -> Result<C64> + '_>) {
    let c = p.c;
    let z = p.zeta;
    match id {
        // ζφ(w) = ∫ e^{2πix(w−c)} / φ(x−c) dx
        Identity::Fourier1 => (
            IntegrandShape { num: vec![], den: vec![c], kappa: w - c },
            Box::new(move || Ok(z * phi_ncqd(w, p)?)),
        ),
        // 1/(ζφ(w)) = ∫ φ(x+c) e^{−2πix(w+c)} dx
        Identity::Fourier2 => (
            IntegrandShape { num: vec![-c], den: vec![], kappa: -(w + c) },
            Box::new(move || Ok((z * phi_ncqd(w, p)?).inv())),
        ),
        // φ(a)φ(w)/φ(a+w−c) = ζ⁻¹ ∫ φ(x+a)/φ(x−c) e^{2πix(w−c)} dx
        Identity::Beta1 => (
            IntegrandShape { num: vec![-a], den: vec![c], kappa: w - c },
            Box::new(move || Ok(z * phi_ncqd(a, p)? * phi_ncqd(w, p)? / phi_ncqd(a + w - c, p)?)),
        ),
        // φ(a+w+c)/(φ(a)φ(w)) = ζ ∫ φ(x+c)/φ(x+a) e^{−2πix(w+c)} dx
        Identity::Beta2 => (
            IntegrandShape { num: vec![-c], den: vec![-a], kappa: -(w + c) },
            Box::new(move || Ok(phi_ncqd(a + w + c, p)? / (z * phi_ncqd(a, p)? * phi_ncqd(w, p)?))),
        ),
        _ => unreachable!(),
    }
}

fn integral_sample(id: Identity, a: C64, w: C64, p: &HbarParam, q: &Quadrature) -> Result<Sample> {
    let (shape, closed) = integral_shape(id, a, w, p);
    let lhs = integrate_shape(&shape, p, q)?;
    let rhs = closed()?;
    let point = match id {
        Identity::Fourier1 | Identity::Fourier2 => vec![pair(w)],
        _ => vec![pair(a), pair(w)],
    };
    Ok(Sample { hbar: pair(p.hbar), point, lhs: pair(lhs), rhs: pair(rhs), residual: rel(lhs, rhs) })
}

/// The action of `e^{−6πic(v₁+v₂)} e^{πi(v₂−v₁)²}` on `φ(z₁−c)φ(z₂−c)`, up to a
/// constant, as the iterated integral
/// `∫ e^{−2πit(z₁+2c)} φ(t+c) [∫ e^{−2πis(z₂+t+2c)} φ(s+c) ds] dt`.
/// Both integrals are evaluated by quadrature; the outer contour is horizontal
/// so that the inner one stays admissible along it.
pub fn lemma_lhs(z1: C64, z2: C64, p: &HbarParam, q: &Quadrature) -> Result<C64> {
    let c = p.c;
    // the inner integral behaves like 1/φ(t+z₂+c): use that to place the outer contour
    let outer = IntegrandShape { num: vec![-c], den: vec![-(z2 + c)], kappa: -(z1 + 2.0 * c) };
    let contour = outer.contour_at_angle(p, 0.0)?;
    // a projective check to 1e-4 does not need the full default accuracy
    let q = &Quadrature { tol: q.tol.max(1e-9), cutoff: q.cutoff.max(1e-13), ..*q };
    let inner_q = Quadrature { tol: q.tol * 0.1, ..*q };
    let inner_at = |t: C64| IntegrandShape { num: vec![-c], den: vec![], kappa: -(z2 + t + 2.0 * c) };
    // The inner integrands differ only in the exponential, so they share one
    // contour and one node set; calibrate it across the outer range.
    let base = inner_at(contour.point(0.0)).contour_at_angle(p, 0.0)?;
    let (mut h_in, mut t_in) = (f64::INFINITY, 0.0f64);
    for s in [-30.0, -15.0, -5.0, 0.0, 5.0, 15.0, 30.0] {
        let sh = inner_at(contour.point(s));
        if !sh.admits(&base, p) {
            return Err(Error::Numerical("inner contour not admissible along the outer contour".into()));
        }
        let (_, h, t) = integrate_detailed(|x| sh.eval(x, p), &base, &inner_q)?;
        h_in = h_in.min(h);
        t_in = t_in.max(t);
    }
    let h_in = h_in / 2.0;
    let n = (t_in / h_in).ceil() as i64;
    let nodes: Vec<(C64, C64)> = (-n..=n)
        .into_par_iter()
        .map(|k| {
            let x = base.point(k as f64 * h_in);
            Ok((x, log_phi(x + c, p)?))
        })
        .collect::<Result<_>>()?;
    let w = h_in * base.direction();
    let f = |t: C64| -> Result<C64> {
        let kappa = -(z2 + t + 2.0 * c);
        let inner: C64 = nodes.iter().map(|(x, l)| cexp(l + 2.0 * PI * I * kappa * x)).sum::<C64>() * w;
        Ok(cexp(-2.0 * PI * I * t * (z1 + 2.0 * c) + log_phi(t + c, p)?) * inner)
    };
    integrate(f, &contour, q)
}

/// Closed form `φ(z₁+z₂+3c) / (φ(z₂+c) φ(z₁+c))`.
pub fn lemma_rhs(z1: C64, z2: C64, p: &HbarParam) -> Result<C64> {
    let c = p.c;
    Ok(phi_ncqd(z1 + z2 + 3.0 * c, p)? / (phi_ncqd(z2 + c, p)? * phi_ncqd(z1 + c, p)?))
}

/// `ψ_cube(z) = φ(−z₁+3c)φ(−z₂−c)φ(−z₃−c) / (φ(−z₁−z₃+c)φ(−z₁−z₂+c))`.
pub fn psi_cube(z: &[C64; 3], p: &HbarParam) -> Result<C64> {
    Ok(cexp(log_psi_cube(z, p)?))
}

fn log_psi_cube(z: &[C64; 3], p: &HbarParam) -> Result<C64> {
    let c = p.c;
    let [z1, z2, z3] = *z;
    Ok(log_phi(-z1 + 3.0 * c, p)? + log_phi(-z2 - c, p)? + log_phi(-z3 - c, p)?
        - log_phi(-z1 - z3 + c, p)?
        - log_phi(-z1 - z2 + c, p)?)
}

/// Cube wavefunction obtained numerically from `ψ'_cube` by the framing step
/// (iterated integral), two mutations at the relabelled edge (multiplication by
/// `φ(−z₂−c)φ(z₂+c)`) and the substitution `(z₁,z₂,z₃) ↦ (−z₁−z₂, z₂, −z₃)`.
pub fn psi_cube_from_chain(z: &[C64; 3], p: &HbarParam, q: &Quadrature) -> Result<C64> {
    let c = p.c;
    let y = [-z[0] - z[1], z[1], -z[2]];
    // σ·ψ'_cube: the factors φ(z₃−c)/φ(z₁+z₂+z₃−5c) are carried to φ(z₃−c)/φ(z₁+z₂+z₃+c)
    let framed = lemma_lhs(y[0], y[1], p, q)? * phi_ncqd(y[2] - c, p)? / phi_ncqd(y[0] + y[1] + y[2] + c, p)?;
    Ok(framed * phi_ncqd(-y[1] - c, p)? * phi_ncqd(y[1] + c, p)?)
}

fn projective_sample(id: Identity, z: &[C64; 3], p: &HbarParam, q: &Quadrature) -> Result<(Vec<C64>, C64, C64)> {
    match id {
        Identity::Lemma23 => Ok((vec![z[0], z[1]], lemma_lhs(z[0], z[1], p, q)?, lemma_rhs(z[0], z[1], p)?)),
        Identity::Cube => {
            // sample in the variables of the framed seed, map back to cube coordinates
            let zc = [-z[0] - z[1], z[1], -z[2]];
            Ok((zc.to_vec(), psi_cube_from_chain(&zc, p, q)?, psi_cube(&zc, p)?))
        }
        _ => unreachable!(),
    }
}

/// `(2πiℏ² log ψ_cube(z/2πℏ), W(z) + 2πi z₁ + 4π²)` with
/// `W = Li₂(Z₁)+Li₂(Z₂)+Li₂(Z₃)−Li₂(Z₁Z₂)−Li₂(Z₁Z₃)`, `Z_i = e^{−z_i}`.
///
/// The affine term comes from the factor `φ(−z₁+3c)`, whose rescaled argument
/// lies one period outside the strip `|Im| < π`. Valid for `Im z₁ ∈ (0, π)`,
/// `Im z₂, Im z₃ ∈ (−π, 0)` and `Im(z₁+z₂), Im(z₁+z₃) ∈ (0, 2π)`. The logarithm is
/// defined modulo `2πi`, so the left side is reduced modulo `4π²ℏ²` towards the right.
pub fn cube_semiclassical_pair(z: &[C64; 3], p: &HbarParam) -> Result<(C64, C64)> {
    let s = 2.0 * PI * p.hbar;
    let scaled = [z[0] / s, z[1] / s, z[2] / s];
    let factor = 2.0 * PI * I * p.hbar * p.hbar;
    let f = factor * log_psi_cube(&scaled, p)?;
    let zz: Vec<C64> = z.iter().map(|x| cexp(-x)).collect();
    let w = li2(zz[0]) + li2(zz[1]) + li2(zz[2]) - li2(zz[0] * zz[1]) - li2(zz[0] * zz[2]);
    let target = w + 2.0 * PI * I * z[0] + 4.0 * PI * PI;
    let period = factor * 2.0 * PI * I;
    let k = ((f - target) / period).re.round();
    Ok((f - period * k, target))
}

/// `|2πiℏ² log φ(z/2πℏ) − Li₂(−e^z)|` for `|Im z| < π`, modulo `4π²ℏ²`.
pub fn semiclassical_error(z: C64, p: &HbarParam) -> Result<f64> {
    let factor = 2.0 * PI * I * p.hbar * p.hbar;
    let f = factor * log_phi(z / (2.0 * PI * p.hbar), p)?;
    let target = li2(-cexp(z));
    let period = factor * 2.0 * PI * I;
    let k = ((f - target) / period).re.round();
    Ok((f - period * k - target).norm())
}

/// `φ(z)` divided by its large-`|z|` asymptote: `ζ_inv e^{πiz²}` for
/// `|arg z| < π/2 − arg ℏ`, `1` for `|arg z| > π/2 + arg ℏ`.
pub fn asymptotic_ratio(z: C64, p: &HbarParam) -> Result<C64> {
    let th = p.hbar.arg();
    let a = z.arg().abs();
    let v = phi_ncqd(z, p)?;
    if a < PI / 2.0 - th {
        Ok(v / (p.zeta_inv * cexp(PI * I * z * z)))
    } else if a > PI / 2.0 + th {
        Ok(v)
    } else {
        Err(Error::Invalid(format!("arg z = {a} is in the transition sector")))
    }
}

/// Runs every identity with default settings.
pub fn verify_all(params: &IdentityParams) -> Result<Vec<IdentityReport>> {
    Identity::ALL.iter().map(|&id| verify_identity(id, params)).collect()
}
