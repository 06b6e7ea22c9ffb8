//! Integral transforms between the MDF, the density matrix and the Wigner
//! function.
//!
//! All quadratures are plain trapezoidal sums on truncated domains. Every
//! state used here is Gaussian-enveloped, where the trapezoidal rule
//! converges spectrally once the grid resolves the envelope.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::{Error, Result};

/// `n` equally spaced nodes covering `[-L, L]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub l: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidArgument {
                name: "L",
                reason: format!("must be positive and finite, got {l}"),
            });
        }
        if n < 2 {
            return Err(Error::InvalidArgument {
                name: "n",
                reason: format!("need at least two nodes, got {n}"),
            });
        }
        Ok(Self { l, n })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.l / (self.n - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.spacing()
    }

    fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.n - 1 {
            0.5
        } else {
            1.0
        }
    }
}

/// `rho(Z_i, Z'_j)` stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    grid: Grid,
    values: Vec<C64>,
}

impl DensityGrid {
    pub fn from_values(grid: Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.n * grid.n {
            return Err(Error::InvalidArgument {
                name: "values",
                reason: format!("expected {} entries, got {}", grid.n * grid.n, values.len()),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F>(grid: Grid, rho: F) -> Self
    where
        F: Fn(f64, f64) -> C64 + Sync,
    {
        let n = grid.n;
        let values = (0..n * n)
            .into_par_iter()
            .map(|k| rho(grid.coord(k / n), grid.coord(k % n)))
            .collect();
        Self { grid, values }
    }

    /// `rho(Z, Z') = psi(Z) psi*(Z')`.
    pub fn from_wavefunction<F>(grid: Grid, psi: F) -> Self
    where
        F: Fn(f64) -> C64,
    {
        let col: Vec<C64> = (0..grid.n).map(|i| psi(grid.coord(i))).collect();
        let mut values = Vec::with_capacity(grid.n * grid.n);
        for a in &col {
            for b in &col {
                values.push(a * b.conj());
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.grid.n + j]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `max |rho(Z, Z') - rho*(Z', Z)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.grid.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Trapezoidal `integral rho(Z, Z) dZ`.
    pub fn trace(&self) -> C64 {
        let g = self.grid;
        (0..g.n).map(|i| self.get(i, i) * g.weight(i)).sum::<C64>() * g.spacing()
    }

    /// Largest `|rho|` on the outer ring of the grid.
    pub fn boundary_max(&self) -> f64 {
        let n = self.grid.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for &j in &[0, n - 1] {
                worst = worst.max(self.get(i, j).norm()).max(self.get(j, i).norm());
            }
        }
        worst
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        write_grid(out, self.grid, self.values.iter().map(|z| format!("{:e} {:e}", z.re, z.im)))
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let (grid, nums) = read_grid(input)?;
        let need = 2 * grid.n * grid.n;
        if nums.len() != need {
            return Err(Error::Format(format!("expected {need} numbers, found {}", nums.len())));
        }
        let values = nums.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
        Ok(Self { grid, values })
    }
}

/// `W(q_i, p_j)` stored row-major, normalised so that
/// `(2 pi)^-1 integral W dq dp = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    grid: Grid,
    values: Vec<f64>,
}

impl WignerGrid {
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n * grid.n {
            return Err(Error::InvalidArgument {
                name: "values",
                reason: format!("expected {} entries, got {}", grid.n * grid.n, values.len()),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F>(grid: Grid, w: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let n = grid.n;
        let values = (0..n * n)
            .into_par_iter()
            .map(|k| w(grid.coord(k / n), grid.coord(k % n)))
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n + j]
    }

    /// `(2 pi)^-1` times the trapezoidal integral over the grid.
    pub fn normalization(&self) -> f64 {
        let g = self.grid;
        let mut acc = 0.0;
        for i in 0..g.n {
            for j in 0..g.n {
                acc += g.weight(i) * g.weight(j) * self.get(i, j);
            }
        }
        acc * g.spacing() * g.spacing() / (2.0 * PI)
    }

    /// Catmull–Rom bicubic interpolation; `None` outside the grid square.
    pub fn interpolate(&self, q: f64, p: f64) -> Option<f64> {
        let g = self.grid;
        let l = g.l * (1.0 + 1e-12);
        if !(q.abs() <= l && p.abs() <= l) {
            return None;
        }
        let h = g.spacing();
        let last = g.n as isize - 1;
        let split = |v: f64| {
            let f = ((v + g.l) / h).clamp(0.0, last as f64);
            let i = (f.floor() as isize).min(last - 1).max(0);
            (i, f - i as f64)
        };
        let (i, tq) = split(q);
        let (j, tp) = split(p);
        let wq = catmull_rom(tq);
        let wp = catmull_rom(tp);
        let mut acc = 0.0;
        for (a, wa) in wq.iter().enumerate() {
            let ii = (i + a as isize - 1).clamp(0, last) as usize;
            for (b, wb) in wp.iter().enumerate() {
                let jj = (j + b as isize - 1).clamp(0, last) as usize;
                acc += wa * wb * self.get(ii, jj);
            }
        }
        Some(acc)
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        write_grid(out, self.grid, self.values.iter().map(|v| format!("{v:e}")))
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let (grid, nums) = read_grid(input)?;
        if nums.len() != grid.n * grid.n {
            return Err(Error::Format(format!(
                "expected {} numbers, found {}",
                grid.n * grid.n,
                nums.len()
            )));
        }
        Ok(Self { grid, values: nums })
    }
}

fn catmull_rom(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

fn write_grid<W, I>(mut out: W, grid: Grid, cells: I) -> Result<()>
where
    W: Write,
    I: Iterator<Item = String>,
{
    writeln!(out, "# L={} n={}", grid.l, grid.n)?;
    let mut line = String::new();
    for (k, cell) in cells.enumerate() {
        if k % grid.n != 0 {
            line.push(' ');
        }
        let _ = write!(line, "{cell}");
        if k % grid.n == grid.n - 1 {
            writeln!(out, "{line}")?;
            line.clear();
        }
    }
    Ok(())
}

fn read_grid<R: BufRead>(input: R) -> Result<(Grid, Vec<f64>)> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty input".into()))??;
    let (mut l, mut n) = (None, None);
    for tok in header.trim_start_matches('#').split_whitespace() {
        if let Some(v) = tok.strip_prefix("L=") {
            l = v.parse::<f64>().ok();
        } else if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse::<usize>().ok();
        }
    }
    let (l, n) = match (l, n) {
        (Some(l), Some(n)) if header.starts_with('#') => (l, n),
        _ => return Err(Error::Format(format!("bad header line `{header}`"))),
    };
    let grid = Grid::new(l, n).map_err(|e| Error::Format(e.to_string()))?;
    let mut nums = Vec::new();
    for line in lines {
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        for tok in body.split_whitespace() {
            nums.push(
                tok.parse::<f64>()
                    .map_err(|_| Error::Format(format!("not a number: `{tok}`")))?,
            );
        }
    }
    Ok((grid, nums))
}

/// Imaginary residue accepted before [`mdf_from_density`] drops it.
pub const MDF_IMAG_TOL: f64 = 1e-6;

/// `w(X, mu, nu) = (2 pi |nu|)^-1 iint rho(Z, Z') exp[-i (Z - Z')(X - mu (Z + Z')/2) / nu] dZ dZ'`.
///
/// The kernel factorises into `a(Z) a*(Z')` with
/// `a(Z) = exp[-i (Z X - mu Z^2 / 2) / nu]`.
pub fn mdf_from_density(rho: &DensityGrid, x: f64, mu: f64, nu: f64) -> Result<f64> {
    if nu == 0.0 {
        return Err(Error::UnsupportedFrame);
    }
    let g = rho.grid;
    let a: Vec<C64> = (0..g.n)
        .map(|i| {
            let z = g.coord(i);
            C64::from_polar(g.weight(i), -(z * x - 0.5 * mu * z * z) / nu)
        })
        .collect();
    let mut acc = C64::new(0.0, 0.0);
    for (i, ai) in a.iter().enumerate() {
        let row = &rho.values[i * g.n..(i + 1) * g.n];
        let inner: C64 = row.iter().zip(&a).map(|(r, aj)| r * aj.conj()).sum();
        acc += ai * inner;
    }
    let h = g.spacing();
    let w = acc * (h * h / (2.0 * PI * nu.abs()));
    if w.im.abs() > MDF_IMAG_TOL {
        return Err(Error::ImaginaryResidue {
            what: "mdf_from_density",
            residue: w.im.abs(),
        });
    }
    Ok(w.re)
}

/// Node layout for [`density_from_mdf`].
///
/// The `Y` integral is taken in the unit frame: substituting `Y = s u`
/// with `s = |(mu, nu)|` and using `w(s u, mu, nu) = w(u, mu/s, nu/s) / s`,
/// the inner integral becomes `integral w(u, mu/s, nu/s) e^{i s u} du`,
/// which stays smooth as `s -> 0` (where it tends to 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub mu_max: f64,
    pub mu_nodes: usize,
    pub u_max: f64,
    pub u_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            mu_max: 12.0,
            mu_nodes: 241,
            u_max: 12.0,
            u_nodes: 241,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if !(self.mu_max > 0.0 && self.u_max > 0.0) || self.mu_nodes < 2 || self.u_nodes < 2 {
            return Err(Error::InvalidArgument {
                name: "quad",
                reason: format!("{self:?}"),
            });
        }
        Ok(())
    }

    fn refined(&self) -> Self {
        Self {
            mu_nodes: 2 * self.mu_nodes - 1,
            u_nodes: 2 * self.u_nodes - 1,
            ..*self
        }
    }

    fn widened(&self) -> Self {
        Self {
            mu_max: 2.0 * self.mu_max,
            mu_nodes: 2 * self.mu_nodes - 1,
            ..*self
        }
    }
}

/// `rho(X, X') = (2 pi)^-1 iint w(Y, mu, X - X') exp[i (Y - mu (X + X')/2)] dmu dY`.
pub fn density_from_mdf<F>(w: F, x: f64, xp: f64, quad: &QuadratureSpec) -> Result<C64>
where
    F: Fn(f64, f64, f64) -> Result<f64>,
{
    quad.validate()?;
    let nu = x - xp;
    let centre = 0.5 * (x + xp);
    let hm = 2.0 * quad.mu_max / (quad.mu_nodes - 1) as f64;
    let hu = 2.0 * quad.u_max / (quad.u_nodes - 1) as f64;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..quad.mu_nodes {
        let mu = -quad.mu_max + i as f64 * hm;
        let s = mu.hypot(nu);
        let chi = if s == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            let (mh, nh) = (mu / s, nu / s);
            let mut c = C64::new(0.0, 0.0);
            for j in 0..quad.u_nodes {
                let u = -quad.u_max + j as f64 * hu;
                let wt = if j == 0 || j == quad.u_nodes - 1 { 0.5 } else { 1.0 };
                c += C64::from_polar(wt * w(u, mh, nh)?, s * u);
            }
            c * hu
        };
        let wt = if i == 0 || i == quad.mu_nodes - 1 { 0.5 } else { 1.0 };
        acc += chi * C64::from_polar(wt, -mu * centre);
    }
    Ok(acc * (hm / (2.0 * PI)))
}

/// Tolerance of the refinement diagnostic in [`density_from_mdf_checked`].
pub const CONVERGENCE_TOL: f64 = 1e-3;

/// [`density_from_mdf`] plus a refinement check: the result is recomputed
/// with doubled node counts and with a doubled `mu` range, and
/// [`Error::NotConverged`] is returned if either moves it by more than
/// [`CONVERGENCE_TOL`].
pub fn density_from_mdf_checked<F>(w: F, x: f64, xp: f64, quad: &QuadratureSpec) -> Result<C64>
where
    F: Fn(f64, f64, f64) -> Result<f64>,
{
    let base = density_from_mdf(&w, x, xp, quad)?;
    let fine = density_from_mdf(&w, x, xp, &quad.refined())?;
    let wide = density_from_mdf(&w, x, xp, &quad.widened())?;
    let change = (fine - base).norm().max((wide - base).norm());
    if change > CONVERGENCE_TOL {
        return Err(Error::NotConverged { change });
    }
    Ok(base)
}

/// Reconstruct a density grid from an MDF, filling the lower triangle by
/// Hermiticity.
pub fn density_grid_from_mdf<F>(w: F, grid: Grid, quad: &QuadratureSpec) -> Result<DensityGrid>
where
    F: Fn(f64, f64, f64) -> Result<f64> + Sync,
{
    let n = grid.n;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let upper: Vec<C64> = pairs
        .par_iter()
        .map(|&(i, j)| density_from_mdf(&w, grid.coord(i), grid.coord(j), quad))
        .collect::<Result<_>>()?;
    let mut values = vec![C64::new(0.0, 0.0); n * n];
    for (&(i, j), v) in pairs.iter().zip(upper) {
        values[i * n + j] = v;
        values[j * n + i] = v.conj();
    }
    DensityGrid::from_values(grid, values)
}

/// Result of a line projection through a [`WignerGrid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub value: f64,
    /// `false` when the line `mu q + nu p = X` misses the grid square.
    pub in_support: bool,
}

/// `w(X, mu, nu) = (2 pi)^-1 iint delta(X - mu q - nu p) W(q, p) dq dp`,
/// evaluated as a trapezoidal line integral at half the grid spacing.
pub fn mdf_from_wigner(w: &WignerGrid, x: f64, mu: f64, nu: f64) -> Result<Projection> {
    let s = mu.hypot(nu);
    if !(s > 0.0) {
        return Err(Error::DegenerateFrame { mu, nu });
    }
    let (nq, np) = (mu / s, nu / s);
    let (q0, p0) = (x / s * nq, x / s * np);
    let (dq, dp) = (-np, nq);
    let l = w.grid.l;

    // clip the parametric line (q0, p0) + tau (dq, dp) to the square
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (c, d) in [(q0, dq), (p0, dp)] {
        if d.abs() < 1e-15 {
            if c.abs() > l {
                return Ok(Projection {
                    value: 0.0,
                    in_support: false,
                });
            }
        } else {
            let (a, b) = ((-l - c) / d, (l - c) / d);
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
    }
    if !(hi > lo) {
        return Ok(Projection {
            value: 0.0,
            in_support: false,
        });
    }
    let nodes = (((hi - lo) / (0.5 * w.grid.spacing())).ceil() as usize).max(2) + 1;
    let h = (hi - lo) / (nodes - 1) as f64;
    let mut acc = 0.0;
    for k in 0..nodes {
        let tau = lo + k as f64 * h;
        let wt = if k == 0 || k == nodes - 1 { 0.5 } else { 1.0 };
        acc += wt * w.interpolate(q0 + tau * dq, p0 + tau * dp).unwrap_or(0.0);
    }
    Ok(Projection {
        value: acc * h / (2.0 * PI * s),
        in_support: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn vacuum_psi(x: f64) -> C64 {
        C64::new(PI.powf(-0.25) * (-0.5 * x * x).exp(), 0.0)
    }

    fn vacuum_w(x: f64, mu: f64, nu: f64) -> Result<f64> {
        let s = mu * mu + nu * nu;
        Ok((-x * x / s).exp() / (PI * s).sqrt())
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 5).is_err());
        assert!(Grid::new(1.0, 1).is_err());
        let g = Grid::new(2.0, 5).unwrap();
        assert_eq!(g.spacing(), 1.0);
        assert_eq!(g.coord(4), 2.0);
    }

    #[test]
    fn vacuum_density_to_mdf() {
        let rho = DensityGrid::from_wavefunction(Grid::new(8.0, 81).unwrap(), vacuum_psi);
        assert!(rho.hermiticity_error() < 1e-15);
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-10);
        for &(x, mu, nu) in &[(0.0, 0.0, 1.0), (0.5, 0.6, 0.8), (-1.2, 1.0, 0.5)] {
            let w = mdf_from_density(&rho, x, mu, nu).unwrap();
            assert_abs_diff_eq!(w, vacuum_w(x, mu, nu).unwrap(), epsilon = 1e-8);
        }
    }

    #[test]
    fn nu_zero_rejected() {
        let rho = DensityGrid::from_wavefunction(Grid::new(4.0, 11).unwrap(), vacuum_psi);
        assert!(matches!(mdf_from_density(&rho, 0.0, 1.0, 0.0), Err(Error::UnsupportedFrame)));
    }

    #[test]
    fn vacuum_round_trip_at_origin() {
        let v = density_from_mdf(vacuum_w, 0.0, 0.0, &QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(v.re, 1.0 / PI.sqrt(), epsilon = 1e-3);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn checked_quadrature_flags_truncation() {
        let q = QuadratureSpec {
            mu_max: 1.0,
            mu_nodes: 11,
            u_max: 12.0,
            u_nodes: 121,
        };
        assert!(matches!(
            density_from_mdf_checked(vacuum_w, 0.3, -0.2, &q),
            Err(Error::NotConverged { .. })
        ));
        assert!(density_from_mdf_checked(vacuum_w, 0.3, -0.2, &QuadratureSpec::default()).is_ok());
    }

    #[test]
    fn vacuum_wigner_projection() {
        let wg = WignerGrid::from_fn(Grid::new(7.0, 281).unwrap(), |q, p| 2.0 * (-q * q - p * p).exp());
        assert_abs_diff_eq!(wg.normalization(), 1.0, epsilon = 1e-6);
        for &(x, th) in &[(0.0, 0.0), (0.7, 0.4), (-1.3, 2.2)] {
            let (s, c) = f64::sin_cos(th);
            let pr = mdf_from_wigner(&wg, x, c, s).unwrap();
            assert!(pr.in_support);
            assert_abs_diff_eq!(pr.value, (-x * x).exp() / PI.sqrt(), epsilon = 1e-4);
        }
    }

    #[test]
    fn projection_outside_support() {
        let wg = WignerGrid::from_fn(Grid::new(3.0, 31).unwrap(), |_, _| 1.0);
        let pr = mdf_from_wigner(&wg, 10.0, 1.0, 0.0).unwrap();
        assert!(!pr.in_support);
        assert_eq!(pr.value, 0.0);
        let pr = mdf_from_wigner(&wg, 10.0, 0.6, 0.8).unwrap();
        assert!(!pr.in_support);
        assert!(mdf_from_wigner(&wg, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn bicubic_is_exact_on_nodes() {
        let wg = WignerGrid::from_fn(Grid::new(2.0, 9).unwrap(), |q, p| q * q - 3.0 * p + q * p);
        assert_abs_diff_eq!(wg.interpolate(0.5, -1.0).unwrap(), 0.25 + 3.0 - 0.5, epsilon = 1e-14);
        // Catmull-Rom reproduces quadratics away from the edges
        assert_abs_diff_eq!(wg.interpolate(0.3, 0.1).unwrap(), 0.09 - 0.3 + 0.03, epsilon = 1e-12);
        assert!(wg.interpolate(2.5, 0.0).is_none());
    }

    #[test]
    fn grid_text_round_trip() {
        let g = Grid::new(1.5, 4).unwrap();
        let rho = DensityGrid::from_fn(g, |a, b| C64::new(a + b, a - b * 0.1));
        let mut buf = Vec::new();
        rho.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# L=1.5 n=4\n"));
        assert_eq!(text.lines().count(), 5);
        let back = DensityGrid::read_from(buf.as_slice()).unwrap();
        assert_eq!(back, rho);

        let wg = WignerGrid::from_fn(g, |q, p| q * p + 0.125);
        let mut buf = Vec::new();
        wg.write_to(&mut buf).unwrap();
        assert_eq!(WignerGrid::read_from(buf.as_slice()).unwrap(), wg);
    }

    #[test]
    fn grid_parse_errors() {
        assert!(matches!(WignerGrid::read_from("".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(WignerGrid::read_from("L=1 n=2\n1 2\n3 4\n".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(WignerGrid::read_from("# L=1 n=2\n1 2\n3\n".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(WignerGrid::read_from("# L=1 n=2\n1 x\n3 4\n".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(DensityGrid::read_from("# L=1 n=2\n1 2 3 4\n".as_bytes()), Err(Error::Format(_))));
    }
}
