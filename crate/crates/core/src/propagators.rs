//! Classical and quantum propagators.
//!
//! For quadratic Hamiltonians the classical propagator of the MDF evolution
//! equation is a product of delta functions,
//! `Pi = delta(X - X' + N Lambda^-1 Delta) delta(N' - N Lambda^-1)` with
//! `N = (nu, mu)`. Integrating against an initial MDF just evaluates it at
//! the point where the deltas fire, so the propagator is represented by
//! that affine map and nothing is ever smoothed or sampled.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;

use crate::dynamics::{DriveProfile, Mode, ProfileKind};
use crate::invariants::LinearInvariant;
use crate::quad;
use crate::{Error, Result};

/// `|sin t|` below this is treated as a focal point.
pub const CAUSTIC_TOL: f64 = 1e-9;

/// Agreement required between the two frame-map representations.
const FRAME_FORM_TOL: f64 = 1e-10;

const I: C64 = C64::new(0.0, 1.0);

/// A point `(X, mu, nu)` of the tomographic space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePoint {
    pub x: f64,
    pub mu: f64,
    pub nu: f64,
}

impl FramePoint {
    pub fn new(x: f64, mu: f64, nu: f64) -> Self {
        Self { x, mu, nu }
    }
}

/// A point `(X, mu, nu, t)` at which an MDF evolution residual is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub mu: f64,
    pub nu: f64,
    pub t: f64,
}

/// The delta-kernel propagator from time 0 to `mode.t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPropagator {
    inv: LinearInvariant,
    mode: Mode,
}

impl ClassicalPropagator {
    pub fn new(mode: Mode) -> Result<Self> {
        Ok(Self {
            inv: LinearInvariant::from_mode(&mode)?,
            mode,
        })
    }

    pub fn identity() -> Self {
        Self::new(Mode::initial()).expect("initial mode is valid")
    }

    pub fn t(&self) -> f64 {
        self.mode.t
    }

    pub fn invariant(&self) -> &LinearInvariant {
        &self.inv
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    /// `N' = N Lambda^-1`, `X' = X + N' . Delta`.
    pub fn map_via_invariant(&self, x: f64, mu: f64, nu: f64) -> Result<FramePoint> {
        let li = self.inv.lambda_inverse()?;
        let n = [nu, mu];
        let np = [
            n[0] * li[0][0] + n[1] * li[1][0],
            n[0] * li[0][1] + n[1] * li[1][1],
        ];
        let shift = np[0] * self.inv.delta[0] + np[1] * self.inv.delta[1];
        Ok(FramePoint::new(x + shift, np[1], np[0]))
    }

    /// The same map written out in `eps`, `eps'`, `beta`.
    pub fn map_via_eps(&self, x: f64, mu: f64, nu: f64) -> FramePoint {
        let Mode {
            eps: e,
            eps_dot: d,
            beta: b,
            ..
        } = self.mode;
        let (ec, dc, bc) = (e.conj(), d.conj(), b.conj());
        let shift = (nu * (dc * b + d * bc) + mu * (ec * b + e * bc)) * FRAC_1_SQRT_2;
        let nu_p = 0.5 * I * (nu * (dc - d) + mu * (ec - e));
        let mu_p = 0.5 * (nu * (dc + d) + mu * (ec + e));
        FramePoint::new(x + shift.re, mu_p.re, nu_p.re)
    }
}

/// The unique `(X', mu', nu')` at which `Pi(X, mu, nu, 0, X', mu', nu', t)`
/// is supported. Both representations are evaluated and must agree.
pub fn frame_map(prop: &ClassicalPropagator, x: f64, mu: f64, nu: f64) -> Result<FramePoint> {
    if mu == 0.0 && nu == 0.0 {
        return Err(Error::DegenerateFrame { mu, nu });
    }
    let a = prop.map_via_invariant(x, mu, nu)?;
    let b = prop.map_via_eps(x, mu, nu);
    let scale = 1.0 + x.abs().max(mu.abs()).max(nu.abs());
    let diff = (a.x - b.x).abs().max((a.mu - b.mu).abs()).max((a.nu - b.nu).abs());
    if !(diff <= FRAME_FORM_TOL * scale) {
        return Err(Error::Consistency(format!(
            "frame map forms disagree by {diff:.3e} at t = {}",
            prop.t()
        )));
    }
    Ok(a)
}

/// `w(X, mu, nu, t) = integral Pi w0 = w0(frame_map(X, mu, nu))`.
pub fn evolve_mdf<F>(prop: &ClassicalPropagator, w0: F, x: f64, mu: f64, nu: f64) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> Result<f64>,
{
    let p = frame_map(prop, x, mu, nu)?;
    w0(p.x, p.mu, p.nu)
}

/// Central-difference value of
/// `dw/dt - mu dw/dnu + omega^2(t) nu dw/dmu + f(t) nu dw/dX`.
pub fn fokker_planck_residual<F>(w: F, profile: &DriveProfile, at: PhasePoint, h: f64) -> f64
where
    F: Fn(f64, f64, f64, f64) -> f64,
{
    let PhasePoint { x, mu, nu, t } = at;
    let c = 0.5 / h;
    let dt = (w(x, mu, nu, t + h) - w(x, mu, nu, t - h)) * c;
    let dnu = (w(x, mu, nu + h, t) - w(x, mu, nu - h, t)) * c;
    let dmu = (w(x, mu + h, nu, t) - w(x, mu - h, nu, t)) * c;
    let dx = (w(x + h, mu, nu, t) - w(x - h, mu, nu, t)) * c;
    dt - mu * dnu + profile.omega_sq(t) * nu * dmu + profile.force(t) * nu * dx
}

fn check_sin(t: f64) -> Result<f64> {
    let s = t.sin();
    if s.abs() < CAUSTIC_TOL {
        return Err(Error::Caustic { t, sin_t: s.abs() });
    }
    Ok(s)
}

fn sho_exponent(x: f64, z: f64, t: f64, s: f64) -> f64 {
    ((x * x + z * z) * t.cos() - 2.0 * x * z) / (2.0 * s)
}

/// `(2 pi sin t)^{-1/2} exp{i [(X^2 + Z^2) cos t - 2XZ] / (2 sin t)}`,
/// final point `X`, initial point `Z`, phase `F = 0`.
pub fn green_sho(x: f64, z: f64, t: f64) -> Result<C64> {
    let s = check_sin(t)?;
    Ok(prefactor(s) * C64::from_polar(1.0, sho_exponent(x, z, t, s)))
}

/// `(2 pi t)^{-1/2} exp{i (X - Z)^2 / (2t)}`.
pub fn green_free(x: f64, z: f64, t: f64) -> Result<C64> {
    if t.abs() < CAUSTIC_TOL {
        return Err(Error::Caustic { t, sin_t: t.abs() });
    }
    let d = x - z;
    Ok(prefactor(t) * C64::from_polar(1.0, d * d / (2.0 * t)))
}

fn prefactor(s: f64) -> C64 {
    C64::new(2.0 * PI * s, 0.0).sqrt().inv()
}

/// The two force integrals entering the driven Green's function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceIntegrals {
    /// `integral_0^t f(s) sin(t - s) ds`, multiplies the initial point.
    pub initial: f64,
    /// `integral_0^t f(s) sin s ds`, multiplies the final point.
    pub terminal: f64,
}

pub fn force_integrals(profile: &DriveProfile, t: f64) -> ForceIntegrals {
    if profile.force_is_zero() || t == 0.0 {
        return ForceIntegrals {
            initial: 0.0,
            terminal: 0.0,
        };
    }
    let n = quad::intervals_for_step(0.0, t, 1e-3);
    ForceIntegrals {
        initial: quad::simpson(0.0, t, n, |s| profile.force(s) * (t - s).sin()),
        terminal: quad::simpson(0.0, t, n, |s| profile.force(s) * s.sin()),
    }
}

fn require_unit_frequency(profile: &DriveProfile) -> Result<()> {
    match profile.kind() {
        ProfileKind::Constant(w) if (w * w - 1.0).abs() <= 1e-12 => Ok(()),
        other => Err(Error::UnsupportedProfile(format!(
            "closed-form Green's function needs constant omega = 1, got {other:?}"
        ))),
    }
}

/// Driven Green's function with phase convention `F(t) = 0`.
pub fn green_driven(x: f64, z: f64, t: f64, profile: &DriveProfile) -> Result<C64> {
    green_driven_with_phase(x, z, t, profile, 0.0)
}

/// Driven Green's function carrying the global phase `e^{i F}`.
pub fn green_driven_with_phase(
    x: f64,
    z: f64,
    t: f64,
    profile: &DriveProfile,
    phase: f64,
) -> Result<C64> {
    require_unit_frequency(profile)?;
    let s = check_sin(t)?;
    let fi = force_integrals(profile, t);
    let force_term = (2.0 * z * fi.initial + 2.0 * x * fi.terminal) / (2.0 * s);
    Ok(prefactor(s) * C64::from_polar(1.0, phase + sho_exponent(x, z, t, s) + force_term))
}

/// `K(X, X', Z, Z', t) = G(X, Z, t) G*(X', Z', t)` for the driven oscillator.
pub fn quantum_propagator(x: f64, xp: f64, z: f64, zp: f64, t: f64, profile: &DriveProfile) -> Result<C64> {
    quantum_propagator_with_phase(x, xp, z, zp, t, profile, |_| 0.0)
}

/// As [`quantum_propagator`] with an arbitrary phase convention `F(t)`,
/// which cancels between `G` and `G*`.
pub fn quantum_propagator_with_phase<F>(
    x: f64,
    xp: f64,
    z: f64,
    zp: f64,
    t: f64,
    profile: &DriveProfile,
    phase: F,
) -> Result<C64>
where
    F: Fn(f64) -> f64,
{
    let f = phase(t);
    let g = green_driven_with_phase(x, z, t, profile, f)?;
    let gp = green_driven_with_phase(xp, zp, t, profile, f)?;
    Ok(g * gp.conj())
}

/// Undriven oscillator density-matrix propagator.
pub fn quantum_propagator_sho(x: f64, xp: f64, z: f64, zp: f64, t: f64) -> Result<C64> {
    let s = check_sin(t)?;
    let phase = sho_exponent(x, z, t, s) - sho_exponent(xp, zp, t, s);
    Ok(C64::from_polar(1.0 / (2.0 * PI * s.abs()), phase))
}

/// Density-matrix propagator for `omega = 1` obtained by integrating the
/// classical propagator, expressed through the drive shift `beta(t)`
/// instead of the force integrals.
pub fn quantum_propagator_from_shift(x: f64, xp: f64, z: f64, zp: f64, t: f64, beta: C64) -> Result<C64> {
    let s = check_sin(t)?;
    let c = t.cos();
    let (dx, dz) = (x - xp, z - zp);
    let u = (dz - dx * c) / s;
    let e = C64::from_polar(1.0, t);
    let a = -I * FRAC_1_SQRT_2 * (beta * e.conj() * (-I * dx + u));
    let b = -I * FRAC_1_SQRT_2 * (beta.conj() * e * (I * dx + u));
    let phase = -0.5 * (x + xp) * u + 0.5 * (z + zp) * (dz * c - dx) / s;
    let expo = a + b + I * phase;
    Ok(expo.exp() / (2.0 * PI * s.abs()))
}
