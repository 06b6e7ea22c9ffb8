//! Linear integrals of motion.
//!
//! Phase-space vectors are ordered `Q = (p, q)` throughout, so
//! `I = (I_p, I_q) = Lambda Q + Delta` with `lambda[0]` the `I_p` row.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64 as C64;

use crate::dynamics::Mode;
use crate::{Error, Result};

/// Absolute bound on imaginary residues dropped when converting to real.
pub const REAL_RESIDUE_TOL: f64 = 1e-10;

pub type Matrix2 = [[f64; 2]; 2];

const I: C64 = C64::new(0.0, 1.0);

/// `I(t) = Lambda(t) Q + Delta(t)`, `Q = (p, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearInvariant {
    pub lambda: Matrix2,
    pub delta: [f64; 2],
    pub t: f64,
}

impl LinearInvariant {
    pub fn from_mode(mode: &Mode) -> Result<Self> {
        Ok(Self {
            lambda: lambda_matrix(mode.eps, mode.eps_dot)?,
            delta: delta_vector(mode.beta),
            t: mode.t,
        })
    }

    pub fn det(&self) -> f64 {
        let l = &self.lambda;
        l[0][0] * l[1][1] - l[0][1] * l[1][0]
    }

    pub fn lambda_inverse(&self) -> Result<Matrix2> {
        let det = self.det();
        if !(det.abs() > 1e-12) || !det.is_finite() {
            return Err(Error::Consistency(format!("singular Lambda, det = {det:e}")));
        }
        let l = &self.lambda;
        Ok([
            [l[1][1] / det, -l[0][1] / det],
            [-l[1][0] / det, l[0][0] / det],
        ])
    }

    /// `(I_p, I_q)` at the phase-space point `(p, q)`.
    pub fn apply(&self, p: f64, q: f64) -> [f64; 2] {
        let l = &self.lambda;
        [
            l[0][0] * p + l[0][1] * q + self.delta[0],
            l[1][0] * p + l[1][1] * q + self.delta[1],
        ]
    }
}

fn real_part(what: &'static str, z: C64) -> Result<f64> {
    if z.im.abs() > REAL_RESIDUE_TOL || !z.im.is_finite() {
        return Err(Error::ImaginaryResidue { what, residue: z.im.abs() });
    }
    Ok(z.re)
}

/// `Lambda = 1/2 [[eps + eps*, -(eps' + eps'*)], [i(eps - eps*), -i(eps' - eps'*)]]`.
pub fn lambda_matrix(eps: C64, eps_dot: C64) -> Result<Matrix2> {
    if !(eps.re.is_finite() && eps.im.is_finite() && eps_dot.re.is_finite() && eps_dot.im.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "eps",
            reason: "non-finite input".into(),
        });
    }
    let (e, ec) = (eps, eps.conj());
    let (d, dc) = (eps_dot, eps_dot.conj());
    Ok([
        [
            real_part("Lambda_11", 0.5 * (e + ec))?,
            real_part("Lambda_12", -0.5 * (d + dc))?,
        ],
        [
            real_part("Lambda_21", 0.5 * I * (e - ec))?,
            real_part("Lambda_22", -0.5 * I * (d - dc))?,
        ],
    ])
}

/// `Delta = ((beta - beta*) / (i sqrt 2), (beta + beta*) / sqrt 2)`.
///
/// The `I_p` component is taken from `I_p = (A - A^dagger) / (sqrt 2 i)`;
/// it equals `sqrt 2 Im beta`.
pub fn delta_vector(beta: C64) -> [f64; 2] {
    let bc = beta.conj();
    let dp = (beta - bc) / (I * SQRT_2);
    let dq = (beta + bc) * FRAC_1_SQRT_2;
    [dp.re, dq.re]
}

/// `c_p p + c_q q + c_0` with complex coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderInvariant {
    pub cp: C64,
    pub cq: C64,
    pub c0: C64,
}

impl LadderInvariant {
    pub fn eval(&self, p: f64, q: f64) -> C64 {
        self.cp * p + self.cq * q + self.c0
    }

    fn scale(self, s: C64) -> Self {
        Self {
            cp: self.cp * s,
            cq: self.cq * s,
            c0: self.c0 * s,
        }
    }

    fn add(self, o: Self) -> Self {
        Self {
            cp: self.cp + o.cp,
            cq: self.cq + o.cq,
            c0: self.c0 + o.c0,
        }
    }
}

/// `A = (i/sqrt 2)(eps p - eps' q) + beta` and
/// `A^dagger = -(i/sqrt 2)(eps* p - eps'* q) + beta*`.
pub fn ladder_pair(eps: C64, eps_dot: C64, beta: C64) -> (LadderInvariant, LadderInvariant) {
    let s = I * FRAC_1_SQRT_2;
    let a = LadderInvariant {
        cp: s * eps,
        cq: -s * eps_dot,
        c0: beta,
    };
    let a_dag = LadderInvariant {
        cp: -s * eps.conj(),
        cq: s * eps_dot.conj(),
        c0: beta.conj(),
    };
    (a, a_dag)
}

/// `[a, b]` for linear operators, using `[q, p] = i`.
pub fn commutator(a: &LadderInvariant, b: &LadderInvariant) -> C64 {
    // [cp p + cq q, dp p + dq q] = cp dq [p, q] + cq dp [q, p]
    -I * (a.cp * b.cq - a.cq * b.cp)
}

/// `(I_p, I_q) = ((A - A^dagger) / (sqrt 2 i), (A + A^dagger) / sqrt 2)`.
pub fn invariant_from_ladder(a: &LadderInvariant, a_dag: &LadderInvariant) -> [LadderInvariant; 2] {
    let ip = a.add(a_dag.scale(C64::new(-1.0, 0.0))).scale(1.0 / (SQRT_2 * I));
    let iq = a.add(*a_dag).scale(C64::new(FRAC_1_SQRT_2, 0.0));
    [ip, iq]
}
