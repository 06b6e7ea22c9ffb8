//! Surface data for the six standard plots of the parametric-resonance
//! oscillator, written as CSV plus a gnuplot script.
//!
//! | id | state | frame                  | columns       |
//! |----|-------|------------------------|---------------|
//! | 1  | `w0`  | `mu = 1, nu = 0`       | `x,t,value`   |
//! | 2  | `w0`  | `mu = nu = 1/sqrt 2`   | `x,t,value`   |
//! | 3  | `w0`  | `mu = 0, nu = 1`       | `x,t,value`   |
//! | 4  | `w2`  | `mu = nu = 1/sqrt 2`   | `x,t,value`   |
//! | 5  | `w0`  | optical sweep at `t_slice` | `x,mu,value` |
//! | 6  | `w0`  | optical sweep at `x_slice` | `t,mu,value` |
//!
//! `eps` comes from [`parametric_resonance_epsilon`] and the drive is zero.
//! Every CSV is read back and checked before it is reported as written.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::dynamics::{parametric_resonance_epsilon, Mode};
use crate::states::fock_mdf;
use crate::{Error, Result};

/// Largest residual of a parabola fit to `log w0` on a figure-1 slice.
pub const GAUSSIAN_FIT_TOL: f64 = 1e-8;
/// A local minimum counts as a zero when it is below this fraction of the
/// slice maximum.
pub const ZERO_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct FigureConfig {
    pub k: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub x_count: usize,
    pub mu_count: usize,
    pub t_slice: f64,
    pub x_slice: f64,
}

impl Default for FigureConfig {
    fn default() -> Self {
        Self {
            k: 0.01,
            t_min: 0.0,
            t_max: 10.0,
            t_count: 101,
            x_min: -4.0,
            x_max: 4.0,
            x_count: 161,
            mu_count: 49,
            t_slice: 4.0,
            x_slice: 0.0,
        }
    }
}

fn usage(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}

impl FigureConfig {
    /// Apply one `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn real(name: &'static str, v: &str) -> Result<f64> {
            v.trim()
                .parse()
                .map_err(|_| usage(name, format!("expected a real number, got `{v}`")))
        }
        fn count(name: &'static str, v: &str) -> Result<usize> {
            v.trim()
                .parse()
                .map_err(|_| usage(name, format!("expected a count, got `{v}`")))
        }
        match key {
            "k" => self.k = real("k", value)?,
            "t_min" => self.t_min = real("t_min", value)?,
            "t_max" => self.t_max = real("t_max", value)?,
            "t_count" => self.t_count = count("t_count", value)?,
            "x_min" => self.x_min = real("x_min", value)?,
            "x_max" => self.x_max = real("x_max", value)?,
            "x_count" => self.x_count = count("x_count", value)?,
            "mu_count" => self.mu_count = count("mu_count", value)?,
            "t_slice" => self.t_slice = real("t_slice", value)?,
            "x_slice" => self.x_slice = real("x_slice", value)?,
            _ => return Err(usage("key", format!("unknown figure setting `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k.abs() < 0.5) {
            return Err(usage("k", format!("must lie in (-0.5, 0.5), got {}", self.k)));
        }
        let finite = [
            ("t_min", self.t_min),
            ("t_max", self.t_max),
            ("x_min", self.x_min),
            ("x_max", self.x_max),
            ("t_slice", self.t_slice),
            ("x_slice", self.x_slice),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(usage(name, format!("must be finite, got {v}")));
            }
        }
        if !(self.t_max > self.t_min) {
            return Err(usage("t_max", "must exceed t_min"));
        }
        if !(self.x_max > self.x_min) {
            return Err(usage("x_max", "must exceed x_min"));
        }
        for (name, n) in [
            ("t_count", self.t_count),
            ("x_count", self.x_count),
            ("mu_count", self.mu_count),
        ] {
            if n < 2 {
                return Err(usage(name, format!("need at least 2 points, got {n}")));
            }
        }
        Ok(())
    }

    fn ts(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.t_count)
    }

    fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.x_count)
    }

    /// Optical sweep: `mu_j = (j + 1)/(n + 1)`, `nu_j = sqrt(1 - mu_j^2)`.
    fn sweep(&self) -> Vec<(f64, f64)> {
        let n = self.mu_count;
        (0..n)
            .map(|j| {
                let mu = (j + 1) as f64 / (n + 1) as f64;
                (mu, (1.0 - mu * mu).sqrt())
            })
            .collect()
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * h })
        .collect()
}

/// Undriven resonance mode at `t`.
fn mode(k: f64, t: f64) -> Result<Mode> {
    let (eps, eps_dot) = parametric_resonance_epsilon(k, t)?;
    Ok(Mode {
        t,
        eps,
        eps_dot,
        beta: C64::new(0.0, 0.0),
    })
}

/// The tabulated surface of one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub id: u8,
    pub title: String,
    pub columns: [&'static str; 3],
    /// `#`-comment lines recording the settings.
    pub notes: Vec<String>,
    /// Rows grouped by the second column; the first column varies fastest.
    pub rows: Vec<[f64; 3]>,
    /// Length of one contiguous block of rows.
    pub block: usize,
}

pub fn figure_data(id: u8, cfg: &FigureConfig) -> Result<FigureData> {
    cfg.validate()?;
    let (title, n, frame): (&str, usize, Option<(f64, f64)>) = match id {
        1 => ("w0(x,t), mu=1, nu=0", 0, Some((1.0, 0.0))),
        2 => ("w0(x,t), mu=nu=1/sqrt(2)", 0, Some((FRAC_1_SQRT_2, FRAC_1_SQRT_2))),
        3 => ("w0(x,t), mu=0, nu=1", 0, Some((0.0, 1.0))),
        4 => ("w2(x,t), mu=nu=1/sqrt(2)", 2, Some((FRAC_1_SQRT_2, FRAC_1_SQRT_2))),
        5 => ("w0(x,t_slice), optical sweep", 0, None),
        6 => ("w0(x_slice,t), optical sweep", 0, None),
        _ => return Err(usage("id", format!("figure id must be 1..6, got {id}"))),
    };
    let mut notes = vec![
        format!("k={}", cfg.k),
        "force=0".to_string(),
        format!("state=fock:{n}"),
    ];
    let k = cfg.k;
    // (col1, col2, x, t, mu, nu)
    let mut points: Vec<(f64, f64, f64, f64, f64, f64)> = Vec::new();
    let (columns, block) = match frame {
        Some((mu, nu)) => {
            notes.push(format!("mu={mu} nu={nu}"));
            notes.push(format!("t=[{},{}] count={}", cfg.t_min, cfg.t_max, cfg.t_count));
            notes.push(format!("x=[{},{}] count={}", cfg.x_min, cfg.x_max, cfg.x_count));
            for t in cfg.ts() {
                for x in cfg.xs() {
                    points.push((x, t, x, t, mu, nu));
                }
            }
            (["x", "t", "value"], cfg.x_count)
        }
        None if id == 5 => {
            let t = cfg.t_slice;
            notes.push(format!("t={t} nu=sqrt(1-mu^2) mu=(j+1)/({}+1)", cfg.mu_count));
            notes.push(format!("x=[{},{}] count={}", cfg.x_min, cfg.x_max, cfg.x_count));
            for (mu, nu) in cfg.sweep() {
                for x in cfg.xs() {
                    points.push((x, mu, x, t, mu, nu));
                }
            }
            (["x", "mu", "value"], cfg.x_count)
        }
        None => {
            let x = cfg.x_slice;
            notes.push(format!("x={x} nu=sqrt(1-mu^2) mu=(j+1)/({}+1)", cfg.mu_count));
            notes.push(format!("t=[{},{}] count={}", cfg.t_min, cfg.t_max, cfg.t_count));
            for (mu, nu) in cfg.sweep() {
                for t in cfg.ts() {
                    points.push((t, mu, x, t, mu, nu));
                }
            }
            (["t", "mu", "value"], cfg.t_count)
        }
    };
    let rows = points
        .into_par_iter()
        .map(|(a, b, x, t, mu, nu)| -> Result<[f64; 3]> {
            let v = fock_mdf(n, &mode(k, t)?, x, mu, nu)?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Consistency(format!(
                    "figure {id}: w = {v} at x = {x}, t = {t}, mu = {mu}, nu = {nu}"
                )));
            }
            Ok([a, b, v])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureData {
        id,
        title: title.to_string(),
        columns,
        notes,
        rows,
        block,
    })
}

impl FigureData {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# figure {}: {}", self.id, self.title);
        for n in &self.notes {
            let _ = writeln!(s, "# {n}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{:.11e}", r[0], r[1], r[2]);
        }
        s
    }

    pub fn to_gnuplot(&self) -> String {
        let [a, b, _] = self.columns;
        let mut s = String::new();
        let _ = writeln!(s, "# gnuplot script for fig{}.csv", self.id);
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set title '{}'", self.title);
        let _ = writeln!(s, "set xlabel '{a}'");
        let _ = writeln!(s, "set ylabel '{b}'");
        let _ = writeln!(s, "set zlabel 'w'");
        let _ = writeln!(s, "set ticslevel 0");
        let _ = writeln!(s, "set hidden3d");
        let _ = writeln!(
            s,
            "set dgrid3d {},{}",
            self.rows.len() / self.block.max(1),
            self.block
        );
        let _ = writeln!(s, "splot 'fig{}.csv' using 1:2:3 skip 1 with lines notitle", self.id);
        s
    }
}

/// Parsed numeric body of a figure CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<[f64; 3]>,
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("figure CSV has no header row".into()))?;
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    if columns.len() != 3 {
        return Err(Error::Format(format!("expected 3 columns, got `{header}`")));
    }
    let mut rows = Vec::new();
    for line in lines {
        let mut row = [0.0; 3];
        let mut it = line.split(',');
        for cell in row.iter_mut() {
            let tok = it
                .next()
                .ok_or_else(|| Error::Format(format!("short row `{line}`")))?;
            *cell = tok
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("not a number: `{tok}`")))?;
        }
        if it.next().is_some() {
            return Err(Error::Format(format!("long row `{line}`")));
        }
        rows.push(row);
    }
    Ok(CsvTable { columns, rows })
}

/// Split rows into contiguous runs sharing the second column.
fn slices(rows: &[[f64; 3]]) -> Vec<&[[f64; 3]]> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=rows.len() {
        if i == rows.len() || rows[i][1] != rows[start][1] {
            out.push(&rows[start..i]);
            start = i;
        }
    }
    out
}

/// Largest deviation of `log w` from its least-squares parabola in `x`.
pub fn parabola_fit_residual(slice: &[[f64; 3]]) -> f64 {
    let n = slice.len() as f64;
    let xc = slice.iter().map(|r| r[0]).sum::<f64>() / n;
    let scale = slice
        .iter()
        .map(|r| (r[0] - xc).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    // normal equations in the scaled variable u = (x - xc)/scale
    let mut m = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for r in slice {
        let u = (r[0] - xc) / scale;
        let basis = [1.0, u, u * u];
        let y = r[2].ln();
        for i in 0..3 {
            rhs[i] += basis[i] * y;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let Some(c) = solve3(m, rhs) else {
        return f64::INFINITY;
    };
    slice
        .iter()
        .map(|r| {
            let u = (r[0] - xc) / scale;
            (r[2].ln() - (c[0] + c[1] * u + c[2] * u * u)).abs()
        })
        .fold(0.0, f64::max)
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (dst, src) in m[row].iter_mut().zip(pivot_row).skip(col) {
                *dst -= f * src;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| m[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / m[i][i];
    }
    Some(x)
}

/// Interior local minima of the value column lying below
/// [`ZERO_FRACTION`] of the slice maximum.
pub fn count_interior_zeros(slice: &[[f64; 3]]) -> usize {
    let max = slice.iter().map(|r| r[2]).fold(0.0, f64::max);
    (1..slice.len().saturating_sub(1))
        .filter(|&i| {
            let v = slice[i][2];
            v < slice[i - 1][2] && v <= slice[i + 1][2] && v <= ZERO_FRACTION * max
        })
        .count()
}

/// Structural checks on a figure CSV: all values finite and non-negative,
/// figure 1 slices Gaussian, figure 4 slices with exactly two zeros.
pub fn check_csv(id: u8, text: &str) -> Result<()> {
    let table = parse_csv(text)?;
    if table.rows.is_empty() {
        return Err(Error::Consistency(format!("figure {id}: no data rows")));
    }
    if let Some(r) = table.rows.iter().find(|r| !(r[2].is_finite() && r[2] >= 0.0)) {
        return Err(Error::Consistency(format!("figure {id}: bad value in row {r:?}")));
    }
    match id {
        1 => {
            for s in slices(&table.rows) {
                let res = parabola_fit_residual(s);
                if !(res <= GAUSSIAN_FIT_TOL) {
                    return Err(Error::Consistency(format!(
                        "figure 1: slice t = {} is not Gaussian, log-fit residual {res:.3e}",
                        s[0][1]
                    )));
                }
            }
        }
        4 => {
            for s in slices(&table.rows) {
                let z = count_interior_zeros(s);
                if z != 2 {
                    return Err(Error::Consistency(format!(
                        "figure 4: slice t = {} has {z} interior zeros, expected 2",
                        s[0][1]
                    )));
                }
            }
        }
        _ => {}
    }
    Ok(())
}

/// Largest spread over `t` of figure 1 at fixed `x`.
pub fn time_spread(text: &str) -> Result<f64> {
    let table = parse_csv(text)?;
    let groups = slices(&table.rows);
    let first = groups
        .first()
        .ok_or_else(|| Error::Consistency("empty figure".into()))?;
    let mut worst: f64 = 0.0;
    for g in &groups {
        if g.len() != first.len() {
            return Err(Error::Consistency("ragged figure slices".into()));
        }
        for (a, b) in g.iter().zip(first.iter()) {
            worst = worst.max((a[2] - b[2]).abs());
        }
    }
    Ok(worst)
}

/// Build, validate and write `figN.csv` and `figN.gp` into `dir`.
pub fn write_figure(id: u8, cfg: &FigureConfig, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let data = figure_data(id, cfg)?;
    fs::create_dir_all(dir)?;
    let csv = dir.join(format!("fig{id}.csv"));
    let gp = dir.join(format!("fig{id}.gp"));
    fs::write(&csv, data.to_csv())?;
    fs::write(&gp, data.to_gnuplot())?;
    check_csv(id, &fs::read_to_string(&csv)?)?;
    Ok((csv, gp))
}
