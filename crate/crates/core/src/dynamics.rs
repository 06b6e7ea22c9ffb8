//! The auxiliary classical trajectory `eps(t)` and the drive shift `beta(t)`.
//!
//! `eps` solves `eps'' + omega^2(t) eps = 0` with `eps(0) = 1`,
//! `eps'(0) = i`. Its Wronskian with its conjugate,
//! `eps' eps* - eps'* eps`, is conserved and equal to `2i`; every
//! closed form downstream relies on that identity.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::quad;
use crate::{Error, Result};

/// Largest Hermite order accepted by [`hermite`].
pub const MAX_HERMITE_ORDER: usize = 200;

/// Default bound on `|W(t) - 2i|` accepted by [`solve_epsilon`].
pub const DEFAULT_TOL_WRONSKIAN: f64 = 1e-6;

const I: C64 = C64::new(0.0, 1.0);

type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    /// `omega^2(t) = omega^2`.
    Constant(f64),
    /// `omega = 0`.
    Free,
    /// `omega^2(t) = (1 + k cos 2t) / (1 + k)`.
    ParametricResonance(f64),
    Custom,
}

/// `omega^2(t)` and the force `f(t)` of
/// `H = p^2/2 + omega^2(t) q^2/2 - f(t) q`.
///
/// `omega^2` may be negative (repulsive oscillator).
#[derive(Clone)]
pub struct DriveProfile {
    kind: ProfileKind,
    omega_sq: TimeFn,
    force: TimeFn,
    force_is_zero: bool,
}

impl fmt::Debug for DriveProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DriveProfile")
            .field("kind", &self.kind)
            .field("force_is_zero", &self.force_is_zero)
            .finish()
    }
}

impl DriveProfile {
    pub fn constant(omega: f64) -> Self {
        let w2 = omega * omega;
        Self::with_kind(ProfileKind::Constant(omega), Arc::new(move |_| w2))
    }

    pub fn free() -> Self {
        Self::with_kind(ProfileKind::Free, Arc::new(|_| 0.0))
    }

    /// Requires `k` in `(-0.5, 0.5)`.
    pub fn parametric_resonance(k: f64) -> Result<Self> {
        check_resonance_k(k)?;
        Ok(Self::with_kind(
            ProfileKind::ParametricResonance(k),
            Arc::new(move |t| (1.0 + k * (2.0 * t).cos()) / (1.0 + k)),
        ))
    }

    pub fn custom<F>(omega_sq: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::with_kind(ProfileKind::Custom, Arc::new(omega_sq))
    }

    /// Piecewise-linear profile through `(times[i], omega_sq[i], force[i])`,
    /// held constant outside the table.
    pub fn tabulated(times: Vec<f64>, omega_sq: Vec<f64>, force: Vec<f64>) -> Result<Self> {
        if times.len() < 2 || omega_sq.len() != times.len() || force.len() != times.len() {
            return Err(Error::InvalidArgument {
                name: "table",
                reason: "need at least two rows with equal column lengths".into(),
            });
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument {
                name: "table",
                reason: "times must be strictly increasing".into(),
            });
        }
        let times = Arc::new(times);
        let t2 = Arc::clone(&times);
        let force_is_zero = force.iter().all(|&f| f == 0.0);
        let w = move |t: f64| lerp_table(&times, &omega_sq, t);
        let f = move |t: f64| lerp_table(&t2, &force, t);
        Ok(Self {
            kind: ProfileKind::Custom,
            omega_sq: Arc::new(w),
            force: Arc::new(f),
            force_is_zero,
        })
    }

    fn with_kind(kind: ProfileKind, omega_sq: TimeFn) -> Self {
        Self {
            kind,
            omega_sq,
            force: Arc::new(|_| 0.0),
            force_is_zero: true,
        }
    }

    pub fn with_force<F>(mut self, force: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.force = Arc::new(force);
        self.force_is_zero = false;
        self
    }

    pub fn with_constant_force(mut self, f0: f64) -> Self {
        self.force = Arc::new(move |_| f0);
        self.force_is_zero = f0 == 0.0;
        self
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn omega_sq(&self, t: f64) -> f64 {
        (self.omega_sq)(t)
    }

    pub fn force(&self, t: f64) -> f64 {
        (self.force)(t)
    }

    pub fn force_is_zero(&self) -> bool {
        self.force_is_zero
    }

    /// Closed-form `eps` for the built-in constant-frequency kinds.
    pub fn analytic_epsilon(&self) -> Option<AnalyticEpsilon> {
        match self.kind {
            ProfileKind::Constant(w) => Some(AnalyticEpsilon::Harmonic(w * w)),
            ProfileKind::Free => Some(AnalyticEpsilon::Harmonic(0.0)),
            _ => None,
        }
    }
}

fn lerp_table(ts: &[f64], ys: &[f64], t: f64) -> f64 {
    let last = ts.len() - 1;
    if t <= ts[0] {
        return ys[0];
    }
    if t >= ts[last] {
        return ys[last];
    }
    let j = ts.partition_point(|&x| x <= t) - 1;
    let s = (t - ts[j]) / (ts[j + 1] - ts[j]);
    ys[j] + s * (ys[j + 1] - ys[j])
}

fn check_resonance_k(k: f64) -> Result<()> {
    if k.is_finite() && k.abs() < 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidArgument {
            name: "k",
            reason: format!("resonance depth must lie in (-0.5, 0.5), got {k}"),
        })
    }
}

/// Anything that can report `(eps(t), eps'(t))`.
pub trait EpsilonSource: Send + Sync {
    fn eps_at(&self, t: f64) -> Result<(C64, C64)>;

    /// Node spacing used when integrating along this source.
    fn resolution(&self) -> f64 {
        1e-3
    }
}

/// Closed-form solutions of the auxiliary equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticEpsilon {
    /// Constant `omega^2` (positive, zero or negative).
    Harmonic(f64),
    /// The slow-growth approximation for the parametric-resonance drive.
    Resonance(f64),
}

impl EpsilonSource for AnalyticEpsilon {
    fn eps_at(&self, t: f64) -> Result<(C64, C64)> {
        match *self {
            AnalyticEpsilon::Harmonic(w2) => Ok(harmonic_epsilon(w2, t)),
            AnalyticEpsilon::Resonance(k) => parametric_resonance_epsilon(k, t),
        }
    }
}

fn harmonic_epsilon(w2: f64, t: f64) -> (C64, C64) {
    if w2 > 0.0 {
        let w = w2.sqrt();
        let (s, c) = (w * t).sin_cos();
        (C64::new(c, s / w), C64::new(-w * s, c))
    } else if w2 < 0.0 {
        let g = (-w2).sqrt();
        let (sh, ch) = ((g * t).sinh(), (g * t).cosh());
        (C64::new(ch, sh / g), C64::new(g * sh, ch))
    } else {
        (C64::new(1.0, t), I)
    }
}

/// `eps = cosh(kt/4) e^{it} - i sinh(kt/4) e^{-it}` and its exact derivative.
pub fn parametric_resonance_epsilon(k: f64, t: f64) -> Result<(C64, C64)> {
    check_resonance_k(k)?;
    let a = 0.25 * k;
    let (sh, ch) = ((a * t).sinh(), (a * t).cosh());
    let ep = C64::from_polar(1.0, t);
    let em = ep.conj();
    let eps = ch * ep - I * sh * em;
    let eps_dot = (a * sh + I * ch) * ep - (I * a * ch + sh) * em;
    Ok((eps, eps_dot))
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol_wronskian: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_wronskian: DEFAULT_TOL_WRONSKIAN,
        }
    }
}

/// `eps`, `eps'` sampled on the uniform grid `t_i = i * step`, `t_0 = 0`.
///
/// Between nodes `eps` is a cubic Hermite interpolant in `(eps, eps')`, and
/// `eps'` one in `(eps', eps'')` with `eps'' = -omega^2 eps` stored at the
/// nodes, so neither is re-differentiated.
#[derive(Debug, Clone)]
pub struct EpsilonTrajectory {
    step: f64,
    eps: Vec<C64>,
    eps_dot: Vec<C64>,
    eps_ddot: Vec<C64>,
}

impl EpsilonTrajectory {
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        self.step * (self.eps.len() - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        self.step * i as f64
    }

    pub fn eps(&self) -> &[C64] {
        &self.eps
    }

    pub fn eps_dot(&self) -> &[C64] {
        &self.eps_dot
    }

    /// `eps' eps* - eps'* eps` at node `i`.
    pub fn wronskian(&self, i: usize) -> C64 {
        wronskian(self.eps[i], self.eps_dot[i])
    }

    pub fn max_wronskian_drift(&self) -> f64 {
        (0..self.len())
            .map(|i| (self.wronskian(i) - 2.0 * I).norm())
            .fold(0.0, f64::max)
    }

    pub fn at(&self, t: f64) -> Result<(C64, C64)> {
        let t_end = self.t_end();
        let slack = 1e-12 * t_end.max(1.0);
        if !(t >= -slack && t <= t_end + slack) {
            return Err(Error::OutOfRange { t, t_end });
        }
        let t = t.clamp(0.0, t_end);
        let last = self.len() - 1;
        let pos = t / self.step;
        let j = (pos.floor() as usize).min(last.saturating_sub(1));
        let s = pos - j as f64;
        if s == 0.0 || last == 0 {
            return Ok((self.eps[j], self.eps_dot[j]));
        }
        let h = self.step;
        let e = hermite_cubic(self.eps[j], self.eps_dot[j], self.eps[j + 1], self.eps_dot[j + 1], h, s);
        let d = hermite_cubic(
            self.eps_dot[j],
            self.eps_ddot[j],
            self.eps_dot[j + 1],
            self.eps_ddot[j + 1],
            h,
            s,
        );
        Ok((e, d))
    }
}

impl EpsilonSource for EpsilonTrajectory {
    fn eps_at(&self, t: f64) -> Result<(C64, C64)> {
        self.at(t)
    }

    fn resolution(&self) -> f64 {
        self.step
    }
}

fn hermite_cubic(y0: C64, d0: C64, y1: C64, d1: C64, h: f64, s: f64) -> C64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    y0 * h00 + d0 * (h10 * h) + y1 * h01 + d1 * (h11 * h)
}

pub fn wronskian(eps: C64, eps_dot: C64) -> C64 {
    eps_dot * eps.conj() - eps_dot.conj() * eps
}

/// Integrate `eps'' + omega^2(t) eps = 0` to `t_end` with classical RK4.
///
/// The grid has `ceil(t_end / step)` uniform intervals, so the realised
/// spacing never exceeds `step` and the last node sits exactly at `t_end`.
pub fn solve_epsilon(profile: &DriveProfile, t_end: f64, step: f64) -> Result<EpsilonTrajectory> {
    solve_epsilon_with(profile, t_end, step, &SolverOptions::default())
}

pub fn solve_epsilon_with(
    profile: &DriveProfile,
    t_end: f64,
    step: f64,
    opts: &SolverOptions,
) -> Result<EpsilonTrajectory> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidArgument {
            name: "t_end",
            reason: format!("must be positive and finite, got {t_end}"),
        });
    }
    if !(step.is_finite() && step > 0.0 && step <= t_end) {
        return Err(Error::InvalidArgument {
            name: "step",
            reason: format!("must satisfy 0 < step <= t_end, got {step}"),
        });
    }
    let n = ((t_end / step) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h = t_end / n as f64;

    let w2 = |t: f64| -> Result<f64> {
        let v = profile.omega_sq(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteFrequency { t })
        }
    };

    let mut eps = Vec::with_capacity(n + 1);
    let mut eps_dot = Vec::with_capacity(n + 1);
    let mut eps_ddot = Vec::with_capacity(n + 1);
    let (mut x, mut v) = (C64::new(1.0, 0.0), I);
    let mut w_here = w2(0.0)?;
    eps.push(x);
    eps_dot.push(v);
    eps_ddot.push(-w_here * x);

    for i in 0..n {
        let t = i as f64 * h;
        let w_mid = w2(t + 0.5 * h)?;
        let w_next = w2(t + h)?;

        let k1x = v;
        let k1v = -w_here * x;
        let k2x = v + 0.5 * h * k1v;
        let k2v = -w_mid * (x + 0.5 * h * k1x);
        let k3x = v + 0.5 * h * k2v;
        let k3v = -w_mid * (x + 0.5 * h * k2x);
        let k4x = v + h * k3v;
        let k4v = -w_next * (x + h * k3x);

        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        w_here = w_next;

        eps.push(x);
        eps_dot.push(v);
        eps_ddot.push(-w_here * x);
    }

    let traj = EpsilonTrajectory {
        step: h,
        eps,
        eps_dot,
        eps_ddot,
    };
    let max_drift = traj.max_wronskian_drift();
    if !(max_drift <= opts.tol_wronskian) {
        return Err(Error::WronskianDrift {
            max_drift,
            tolerance: opts.tol_wronskian,
        });
    }
    Ok(traj)
}

/// `-(i / sqrt 2) * integral_{t0}^{t1} eps(s) f(s) ds` by composite Simpson.
pub fn drive_shift_between<S>(source: &S, profile: &DriveProfile, t0: f64, t1: f64) -> Result<C64>
where
    S: EpsilonSource + ?Sized,
{
    if profile.force_is_zero() || t0 == t1 {
        return Ok(C64::new(0.0, 0.0));
    }
    let n = quad::intervals_for_step(t0, t1, source.resolution());
    let h = (t1 - t0) / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..=n {
        let s = t0 + i as f64 * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let (e, _) = source.eps_at(s)?;
        acc += e * (w * profile.force(s));
    }
    Ok(-I * FRAC_1_SQRT_2 * acc * (h / 3.0))
}

/// `beta(t) = -(i / sqrt 2) * integral_0^t eps(s) f(s) ds` along a solved
/// trajectory.
pub fn beta_shift(profile: &DriveProfile, eps: &EpsilonTrajectory, t: f64) -> Result<C64> {
    let t_end = eps.t_end();
    if !(t >= 0.0 && t <= t_end * (1.0 + 1e-12)) {
        return Err(Error::OutOfRange { t, t_end });
    }
    drive_shift_between(eps, profile, 0.0, t.min(t_end))
}

/// Physicists' Hermite polynomial by the three-term recurrence.
pub fn hermite(n: usize, y: f64) -> Result<f64> {
    if n > MAX_HERMITE_ORDER {
        return Err(Error::UnsupportedOrder(n));
    }
    let (mut h0, mut h1) = (1.0, 2.0 * y);
    if n == 0 {
        return Ok(h0);
    }
    for k in 1..n {
        let h2 = 2.0 * y * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    Ok(h1)
}

/// Hermite functions `e^{-y^2/2} H_k(y) / sqrt(2^k k! sqrt(pi))`, scaled by
/// `pi^{1/4}` so that entry `k` is `e^{-y^2/2} H_k(y) / sqrt(2^k k!)`.
///
/// Uses the normalised recurrence, which stays finite where `H_k(y)^2` or
/// `2^k k!` would overflow.
pub(crate) fn scaled_hermite_functions(n_max: usize, y: f64) -> Result<Vec<f64>> {
    if n_max > MAX_HERMITE_ORDER {
        return Err(Error::UnsupportedOrder(n_max));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    out.push((-0.5 * y * y).exp());
    if n_max >= 1 {
        out.push(std::f64::consts::SQRT_2 * y * out[0]);
    }
    for k in 1..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    Ok(out)
}

/// `(eps, eps', beta)` at one instant: everything the closed forms need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub t: f64,
    pub eps: C64,
    pub eps_dot: C64,
    pub beta: C64,
}

impl Mode {
    /// `t = 0`: `eps = 1`, `eps' = i`, `beta = 0`.
    pub fn initial() -> Self {
        Self {
            t: 0.0,
            eps: C64::new(1.0, 0.0),
            eps_dot: I,
            beta: C64::new(0.0, 0.0),
        }
    }

    /// Undriven harmonic oscillator with unit frequency: `eps = e^{it}`.
    pub fn harmonic(t: f64) -> Self {
        let e = C64::from_polar(1.0, t);
        Self {
            t,
            eps: e,
            eps_dot: I * e,
            beta: C64::new(0.0, 0.0),
        }
    }

    pub fn wronskian(&self) -> C64 {
        wronskian(self.eps, self.eps_dot)
    }
}

/// Pairs a drive profile with an `eps` source and produces [`Mode`]s.
pub struct ModeSolver {
    profile: DriveProfile,
    source: Box<dyn EpsilonSource>,
}

impl fmt::Debug for ModeSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModeSolver").field("profile", &self.profile).finish()
    }
}

impl ModeSolver {
    pub fn new(profile: DriveProfile, source: Box<dyn EpsilonSource>) -> Self {
        Self { profile, source }
    }

    /// Closed-form `eps` where the profile has one, RK4 otherwise.
    pub fn for_profile(profile: DriveProfile, t_end: f64, step: f64) -> Result<Self> {
        let source: Box<dyn EpsilonSource> = match profile.analytic_epsilon() {
            Some(a) => Box::new(a),
            None => Box::new(solve_epsilon(&profile, t_end, step)?),
        };
        Ok(Self::new(profile, source))
    }

    /// Always integrates the ODE, even for constant profiles.
    pub fn numerical(profile: DriveProfile, t_end: f64, step: f64) -> Result<Self> {
        let traj = solve_epsilon(&profile, t_end, step)?;
        Ok(Self::new(profile, Box::new(traj)))
    }

    pub fn profile(&self) -> &DriveProfile {
        &self.profile
    }

    pub fn mode_at(&self, t: f64) -> Result<Mode> {
        let (eps, eps_dot) = self.source.eps_at(t)?;
        let beta = drive_shift_between(self.source.as_ref(), &self.profile, 0.0, t)?;
        Ok(Mode {
            t,
            eps,
            eps_dot,
            beta,
        })
    }
}
