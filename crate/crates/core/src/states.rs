//! Closed-form marginal distribution functions.
//!
//! All formulas are written in terms of the frame kernel
//! `r = eps' nu + eps mu`, the displaced amplitude `gamma = alpha - beta`
//! and the scaled coordinate `Y = [beta* r + beta r* + sqrt 2 X] / (sqrt 2 |r|)`.
//! Evaluating at [`Mode::initial`] gives the `t = 0` distributions.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;

use crate::dynamics::{scaled_hermite_functions, Mode, MAX_HERMITE_ORDER};
use crate::{Error, Result};

const I: C64 = C64::new(0.0, 1.0);

/// `r`, `Y` and `gamma` for one `(X, mu, nu)` and one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameKernel {
    pub r: C64,
    pub y: f64,
    pub gamma: C64,
}

impl FrameKernel {
    pub fn new(alpha: C64, mode: &Mode, x: f64, mu: f64, nu: f64) -> Result<Self> {
        let r = frame_r(mode, mu, nu)?;
        let b = mode.beta;
        let y = ((b.conj() * r + b * r.conj()).re + SQRT_2 * x) / (SQRT_2 * r.norm());
        Ok(Self {
            r,
            y,
            gamma: alpha - b,
        })
    }
}

fn frame_r(mode: &Mode, mu: f64, nu: f64) -> Result<C64> {
    let r = mode.eps_dot * nu + mode.eps * mu;
    if !(r.norm_sqr() > 0.0) {
        return Err(Error::DegenerateFrame { mu, nu });
    }
    Ok(r)
}

/// `<X> = (gamma eps'* + gamma* eps') nu / sqrt 2 + (gamma eps* + gamma* eps) mu / sqrt 2`.
pub fn mean_x(alpha: C64, mode: &Mode, mu: f64, nu: f64) -> f64 {
    let g = alpha - mode.beta;
    let r = mode.eps_dot * nu + mode.eps * mu;
    SQRT_2 * (g * r.conj()).re
}

/// `sigma_X^2 = |eps' nu + eps mu|^2 / 2`.
pub fn variance_x(mode: &Mode, mu: f64, nu: f64) -> f64 {
    0.5 * (mode.eps_dot * nu + mode.eps * mu).norm_sqr()
}

/// Coherent-state MDF, a normal density in `X` with mean [`mean_x`] and
/// variance [`variance_x`].
pub fn coherent_mdf(alpha: C64, mode: &Mode, x: f64, mu: f64, nu: f64) -> Result<f64> {
    let r2 = frame_r(mode, mu, nu)?.norm_sqr();
    let d = x - mean_x(alpha, mode, mu, nu);
    Ok((-d * d / r2).exp() / (PI * r2).sqrt())
}

/// Coefficients of `w_k = exp(c y^2 + d z^2 + h y z + e y + g z)` with
/// `y = k mu`, `z = k nu`.
///
/// `g` is the coefficient of `z`; the time-dependent solution elsewhere
/// labels it `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierGaussian {
    pub c: f64,
    pub d: f64,
    pub h: f64,
    pub e: C64,
    pub g: C64,
}

impl FourierGaussian {
    pub fn eval(&self, y: f64, z: f64) -> C64 {
        let quad = self.c * y * y + self.d * z * z + self.h * y * z;
        (quad + self.e * y + self.g * z).exp()
    }
}

pub fn coherent_fourier_coefficients(alpha: C64, mode: &Mode) -> FourierGaussian {
    let g = alpha - mode.beta;
    let (e, d) = (mode.eps, mode.eps_dot);
    FourierGaussian {
        c: -0.25 * e.norm_sqr(),
        d: -0.25 * d.norm_sqr(),
        h: -0.5 * (d * e.conj()).re,
        e: -I * SQRT_2 * (g * e.conj()).re,
        g: -I * SQRT_2 * (g * d.conj()).re,
    }
}

/// `w_k = integral w(X) e^{-ikX} dX`, so `w_k(0) = 1` and
/// `w(X) = (2 pi)^-1 integral w_k e^{ikX} dk`.
pub fn coherent_mdf_fourier(k: f64, alpha: C64, mode: &Mode, mu: f64, nu: f64) -> C64 {
    coherent_fourier_coefficients(alpha, mode).eval(k * mu, k * nu)
}

/// Residual of the Fourier-space coherence condition
/// `[(i/2) eps y + eps' d/dy + (i/2) eps' z - eps d/dz] w_k = sqrt 2 gamma w_k`
/// with the derivatives taken by central differences of step `h`.
///
/// This is the image of `A(t) rho = alpha rho` under `rho -> w`; its
/// residual vanishes (up to `O(h^2)`) exactly for coherent MDFs.
pub fn annihilation_eigencheck(alpha: C64, mode: &Mode, mu: f64, nu: f64, k: f64, h: f64) -> Result<C64> {
    if k == 0.0 {
        return Err(Error::InvalidArgument {
            name: "k",
            reason: "must be non-zero".into(),
        });
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument {
            name: "h",
            reason: format!("must be positive, got {h}"),
        });
    }
    let wk = coherent_fourier_coefficients(alpha, mode);
    Ok(eigen_residual(|y, z| wk.eval(y, z), alpha - mode.beta, mode, k * mu, k * nu, h))
}

/// The same operator applied to an arbitrary `w_k(y, z)`.
pub fn eigen_residual<F>(wk: F, gamma: C64, mode: &Mode, y: f64, z: f64, h: f64) -> C64
where
    F: Fn(f64, f64) -> C64,
{
    let w = wk(y, z);
    let dy = (wk(y + h, z) - wk(y - h, z)) / (2.0 * h);
    let dz = (wk(y, z + h) - wk(y, z - h)) / (2.0 * h);
    let (e, d) = (mode.eps, mode.eps_dot);
    let op = 0.5 * I * e * y * w + d * dy + 0.5 * I * d * z * w - e * dz;
    op - SQRT_2 * gamma * w
}

/// MDF of the `n`-th excited state,
/// `w_n = e^{-Y^2} H_n(Y)^2 / (sqrt pi |r| n! 2^n)`.
pub fn fock_mdf(n: usize, mode: &Mode, x: f64, mu: f64, nu: f64) -> Result<f64> {
    Ok(cross_mdf(n, n, mode, x, mu, nu)?.re)
}

/// Off-diagonal `w_nm`; `w_nn` is [`fock_mdf`] and `w_mn = w_nm*`.
pub fn cross_mdf(n: usize, m: usize, mode: &Mode, x: f64, mu: f64, nu: f64) -> Result<C64> {
    let top = n.max(m);
    if top > MAX_HERMITE_ORDER {
        return Err(Error::UnsupportedOrder(top));
    }
    let fk = FrameKernel::new(C64::new(0.0, 0.0), mode, x, mu, nu)?;
    let hf = scaled_hermite_functions(top, fk.y)?;
    let rn = fk.r.norm();
    let u = fk.r.conj() / rn;
    let amp = hf[n] * hf[m] / (PI.sqrt() * rn);
    if n == m {
        return Ok(C64::new(amp, 0.0));
    }
    Ok(amp * u.powu(n as u32) * u.conj().powu(m as u32))
}

/// `e^{-|alpha|^2} sum_{n,m <= n_max} alpha^n alpha*^m / sqrt(n! m!) w_nm`.
pub fn coherent_series(alpha: C64, n_max: usize, mode: &Mode, x: f64, mu: f64, nu: f64) -> Result<f64> {
    if n_max > MAX_HERMITE_ORDER {
        return Err(Error::UnsupportedOrder(n_max));
    }
    let fk = FrameKernel::new(C64::new(0.0, 0.0), mode, x, mu, nu)?;
    let hf = scaled_hermite_functions(n_max, fk.y)?;
    let rn = fk.r.norm();
    let u = fk.r.conj() / rn;
    // a_n = alpha^n u^n h_n / sqrt(n!); the double sum factorises as |sum a_n|^2.
    let mut term = C64::new(1.0, 0.0);
    let mut acc = C64::new(0.0, 0.0);
    for (n, &h) in hf.iter().enumerate() {
        if n > 0 {
            term *= alpha * u / (n as f64).sqrt();
        }
        acc += term * h;
    }
    Ok((-alpha.norm_sqr()).exp() * acc.norm_sqr() / (PI.sqrt() * rn))
}

/// Coherent wavefunction with global phase 0:
/// `psi = (pi |eps|^2)^{-1/4} exp{-[gamma eps* + gamma* eps]^2 / (4|eps|^2)}
///        exp{i x^2 eps' / (2 eps) + sqrt 2 gamma x / eps}`.
pub fn coherent_wavefunction(alpha: C64, mode: &Mode, x: f64) -> Result<C64> {
    let e = mode.eps;
    let e2 = e.norm_sqr();
    if !(e2 > 0.0) {
        return Err(Error::InvalidArgument {
            name: "eps",
            reason: "eps = 0 gives no normalisable coherent state".into(),
        });
    }
    let g = alpha - mode.beta;
    let s = (g * e.conj() + g.conj() * e).re;
    let norm = (PI * e2).powf(-0.25) * (-s * s / (4.0 * e2)).exp();
    let expo = 0.5 * I * x * x * mode.eps_dot / e + SQRT_2 * g * x / e;
    Ok(norm * expo.exp())
}

/// Position probability `|psi(x)|^2`, used to cross-check the frame `(1, 0)`.
pub fn coherent_position_density(alpha: C64, mode: &Mode, x: f64) -> Result<f64> {
    Ok(coherent_wavefunction(alpha, mode, x)?.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::trapezoid;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn driven_mode(t: f64) -> Mode {
        let e = C64::from_polar(1.0, t);
        Mode {
            t,
            eps: e,
            eps_dot: I * e,
            beta: (1.0 - e) * FRAC_1_SQRT_2,
        }
    }

    #[test]
    fn vacuum_peak() {
        let m = Mode::harmonic(0.8);
        let v = coherent_mdf(C64::new(0.0, 0.0), &m, 0.0, 0.6, 0.8).unwrap();
        assert_abs_diff_eq!(v, 1.0 / PI.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn t0_matches_explicit_initial_form() {
        // w = exp{-(X + i(a - a*)nu/sqrt2 - (a + a*)mu/sqrt2)^2/(mu^2+nu^2)} / sqrt(pi(mu^2+nu^2))
        let a = C64::new(0.7, 0.3);
        let m = Mode::initial();
        for &(x, mu, nu) in &[(0.3, 1.0, 0.0), (-0.2, 0.5, 1.5), (1.4, -0.7, 0.2)] {
            let s = mu * mu + nu * nu;
            let shift = (I * (a - a.conj()) * nu * FRAC_1_SQRT_2 - (a + a.conj()) * mu * FRAC_1_SQRT_2).re;
            let expect = (-(x + shift).powi(2) / s).exp() / (PI * s).sqrt();
            assert_abs_diff_eq!(coherent_mdf(a, &m, x, mu, nu).unwrap(), expect, epsilon = 1e-15);
        }
    }

    #[test]
    fn degenerate_frame_is_error() {
        let m = Mode::initial();
        assert!(matches!(
            coherent_mdf(C64::new(0.0, 0.0), &m, 0.0, 0.0, 0.0),
            Err(Error::DegenerateFrame { .. })
        ));
        assert!(fock_mdf(2, &m, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn mean_vanishes_when_alpha_equals_beta() {
        let m = driven_mode(1.3);
        assert_eq!(mean_x(m.beta, &m, 0.4, 0.9), 0.0);
    }

    #[test]
    fn harmonic_variance() {
        let m = Mode::harmonic(2.1);
        assert_abs_diff_eq!(variance_x(&m, 0.3, -1.2), 0.5 * (0.09 + 1.44), epsilon = 1e-15);
    }

    #[test]
    fn fourier_at_zero_and_symmetry() {
        let a = C64::new(0.4, -0.9);
        let m = driven_mode(0.7);
        assert_eq!(coherent_mdf_fourier(0.0, a, &m, 0.3, 0.5), C64::new(1.0, 0.0));
        let p = coherent_mdf_fourier(1.3, a, &m, 0.3, 0.5);
        let q = coherent_mdf_fourier(-1.3, a, &m, 0.3, 0.5);
        assert!((p.conj() - q).norm() < 1e-15);
    }

    #[test]
    fn fourier_coefficients_at_t0() {
        let f = coherent_fourier_coefficients(C64::new(0.2, 0.1), &Mode::initial());
        assert_eq!(f.c, -0.25);
        assert_eq!(f.d, -0.25);
        assert_eq!(f.h, 0.0);
    }

    #[test]
    fn inverse_fourier_reproduces_mdf() {
        let a = C64::new(0.7, 0.3);
        let m = driven_mode(1.1);
        let (mu, nu) = (0.8, 0.6);
        for &x in &[-1.0, 0.2, 1.5] {
            let w: C64 = trapezoid(-20.0, 20.0, 2001, |k| {
                coherent_mdf_fourier(k, a, &m, mu, nu) * C64::from_polar(1.0, k * x)
            });
            let w = w / (2.0 * PI);
            assert_abs_diff_eq!(w.re, coherent_mdf(a, &m, x, mu, nu).unwrap(), epsilon = 1e-12);
            assert_abs_diff_eq!(w.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn eigencheck_converges() {
        let a = C64::new(0.7, 0.3);
        let m = driven_mode(0.9);
        let r1 = annihilation_eigencheck(a, &m, 0.6, 0.8, 1.2, 1e-2).unwrap().norm();
        let r2 = annihilation_eigencheck(a, &m, 0.6, 0.8, 1.2, 5e-3).unwrap().norm();
        assert!(r1 / r2 > 3.5 && r1 / r2 < 4.5, "ratio {}", r1 / r2);
        assert!(annihilation_eigencheck(a, &m, 0.6, 0.8, 1.2, 1e-4).unwrap().norm() < 1e-6);
        let v = annihilation_eigencheck(C64::new(0.0, 0.0), &Mode::initial(), 0.6, 0.8, 1.0, 1e-4)
            .unwrap()
            .norm();
        assert!(v < 1e-7);
    }

    #[test]
    fn eigencheck_rejects_other_eigenvalues() {
        let m = driven_mode(0.9);
        let wk = coherent_fourier_coefficients(C64::new(0.7, 0.3), &m);
        let r = eigen_residual(|y, z| wk.eval(y, z), C64::new(0.1, 0.0) - m.beta, &m, 0.7, 0.9, 1e-4);
        assert!(r.norm() > 1e-2);
    }

    #[test]
    fn eigencheck_is_linear_in_normalisation() {
        let a = C64::new(0.3, 0.1);
        let m = driven_mode(0.4);
        let wk = coherent_fourier_coefficients(a, &m);
        let g = a - m.beta;
        let r1 = eigen_residual(|y, z| wk.eval(y, z), g, &m, 0.5, 0.4, 1e-2);
        let r3 = eigen_residual(|y, z| 3.0 * wk.eval(y, z), g, &m, 0.5, 0.4, 1e-2);
        assert!((3.0 * r1 - r3).norm() < 1e-14);
    }

    #[test]
    fn eigencheck_bad_args() {
        let m = Mode::initial();
        assert!(annihilation_eigencheck(C64::new(0.0, 0.0), &m, 1.0, 0.0, 0.0, 1e-3).is_err());
        assert!(annihilation_eigencheck(C64::new(0.0, 0.0), &m, 1.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn fock_ground_is_vacuum() {
        let m = driven_mode(2.2);
        for &(x, mu, nu) in &[(0.0, 1.0, 0.0), (-0.5, 0.3, 0.9), (1.7, -1.0, 0.4)] {
            let a = fock_mdf(0, &m, x, mu, nu).unwrap();
            let b = coherent_mdf(C64::new(0.0, 0.0), &m, x, mu, nu).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn fock_matches_hermite_formula() {
        use crate::dynamics::hermite;
        let m = driven_mode(0.6);
        let (x, mu, nu) = (0.35, 0.8, -0.5);
        let fk = FrameKernel::new(C64::new(0.0, 0.0), &m, x, mu, nu).unwrap();
        let mut fact = 1.0;
        for n in 0..12usize {
            if n > 0 {
                fact *= n as f64;
            }
            let h = hermite(n, fk.y).unwrap();
            let expect = (-fk.y * fk.y).exp() * h * h / (PI.sqrt() * fk.r.norm() * fact * 2f64.powi(n as i32));
            assert_abs_diff_eq!(fock_mdf(n, &m, x, mu, nu).unwrap(), expect, epsilon = 1e-13);
        }
    }

    #[test]
    fn fock_zero_at_hermite_node() {
        let m = Mode::harmonic(0.5);
        assert_abs_diff_eq!(fock_mdf(1, &m, 0.0, 0.6, 0.8).unwrap(), 0.0);
    }

    #[test]
    fn fock_high_order_is_finite() {
        let m = Mode::harmonic(0.5);
        let v = fock_mdf(200, &m, 3.0, 1.0, 0.0).unwrap();
        assert!(v.is_finite() && v >= 0.0);
        assert!(matches!(fock_mdf(201, &m, 3.0, 1.0, 0.0), Err(Error::UnsupportedOrder(201))));
    }

    #[test]
    fn cross_terms_hermitian() {
        let m = driven_mode(1.9);
        let a = cross_mdf(2, 5, &m, 0.3, 0.4, 0.7).unwrap();
        let b = cross_mdf(5, 2, &m, 0.3, 0.4, 0.7).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);
        let d = cross_mdf(3, 3, &m, 0.3, 0.4, 0.7).unwrap();
        assert_eq!(d.im, 0.0);
        assert_eq!(d.re, fock_mdf(3, &m, 0.3, 0.4, 0.7).unwrap());
    }

    #[test]
    fn cross_modulus_ignores_phase_of_r() {
        // rotating eps and eps' by a common phase rotates r but keeps |r| and Y
        let base = Mode::harmonic(0.0);
        let mut rotated = base;
        let ph = C64::from_polar(1.0, 1.1);
        rotated.eps *= ph;
        rotated.eps_dot *= ph;
        let a = cross_mdf(1, 4, &base, 0.2, 0.5, 0.5).unwrap();
        let b = cross_mdf(1, 4, &rotated, 0.2, 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(a.norm(), b.norm(), epsilon = 1e-15);
        assert!((a - b).norm() > 1e-3);
    }

    #[test]
    fn wavefunction_ground_state() {
        for &x in &[-1.5, 0.0, 0.4] {
            let psi = coherent_wavefunction(C64::new(0.0, 0.0), &Mode::initial(), x).unwrap();
            assert_abs_diff_eq!(psi.re, PI.powf(-0.25) * (-0.5 * x * x).exp(), epsilon = 1e-15);
            assert_abs_diff_eq!(psi.im, 0.0);
        }
    }

    #[test]
    fn wavefunction_normalised() {
        let m = driven_mode(2.7);
        let a = C64::new(-0.4, 1.1);
        let n: f64 = trapezoid(-15.0, 15.0, 3001, |x| coherent_position_density(a, &m, x).unwrap());
        assert_abs_diff_eq!(n, 1.0, epsilon = 1e-8);
        // the position density is the (mu, nu) = (1, 0) marginal
        for &x in &[-0.3, 0.5, 1.9] {
            assert_abs_diff_eq!(
                coherent_position_density(a, &m, x).unwrap(),
                coherent_mdf(a, &m, x, 1.0, 0.0).unwrap(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn wavefunction_rejects_zero_eps() {
        let mut m = Mode::initial();
        m.eps = C64::new(0.0, 0.0);
        assert!(coherent_wavefunction(C64::new(0.0, 0.0), &m, 0.0).is_err());
    }

    #[test]
    fn series_reproduces_coherent() {
        let a = C64::from_polar(0.5, 0.9);
        let m = driven_mode(1.4);
        for &(x, mu, nu) in &[(0.0, 1.0, 0.0), (0.6, 0.6, 0.8), (-1.1, -0.3, 1.2)] {
            let s = coherent_series(a, 12, &m, x, mu, nu).unwrap();
            assert_abs_diff_eq!(s, coherent_mdf(a, &m, x, mu, nu).unwrap(), epsilon = 1e-6);
        }
    }

    proptest::proptest! {
        #[test]
        fn frame_homogeneity(lam in 0.1f64..5.0, x in -2.0f64..2.0, mu in -1.5f64..1.5, nu in -1.5f64..1.5,
                             n in 0usize..6, t in 0.0f64..3.0) {
            proptest::prop_assume!(mu.hypot(nu) > 0.05);
            let m = driven_mode(t);
            let a = C64::new(0.4, -0.2);
            let w = coherent_mdf(a, &m, x, mu, nu).unwrap();
            let ws = coherent_mdf(a, &m, lam * x, lam * mu, lam * nu).unwrap();
            proptest::prop_assert!((ws - w / lam).abs() <= 1e-12 * (1.0 + w / lam));
            let f = fock_mdf(n, &m, x, mu, nu).unwrap();
            let fs = fock_mdf(n, &m, lam * x, lam * mu, lam * nu).unwrap();
            proptest::prop_assert!((fs - f / lam).abs() <= 1e-12 * (1.0 + f / lam));
            proptest::prop_assert!(f >= 0.0 && w >= 0.0);
        }
    }
}
