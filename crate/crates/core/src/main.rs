use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tomoprop::figures::{write_figure, FigureConfig};
use tomoprop::propagators::{
    fokker_planck_residual, frame_map, green_driven, green_free, green_sho, quantum_propagator,
    quantum_propagator_sho, ClassicalPropagator, PhasePoint,
};
use tomoprop::states::{
    annihilation_eigencheck, coherent_mdf, cross_mdf, fock_mdf, mean_x, variance_x,
};
use tomoprop::transforms::{
    density_from_mdf_checked, mdf_from_density, mdf_from_wigner, DensityGrid, QuadratureSpec,
    WignerGrid,
};
use tomoprop::{acceptance, hermite, invariants, solve_epsilon, DriveProfile, Error, Mode, ModeSolver, C64};

/// Tomographic probability representation of the forced parametric oscillator.
#[derive(Debug, Parser)]
#[command(name = "tomoprop", version)]
struct Cli {
    /// Plain `key=value` file read before command-line settings.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Write figN.csv and figN.gp (all six when --id is omitted).
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        id: Option<u8>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override a figure setting, e.g. `--set k=0.02`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Evaluate one operation, e.g. `eval coherent_mdf alpha=0 X=0 mu=1 nu=0`.
    Eval {
        op: String,
        #[arg(value_name = "KEY=VALUE")]
        args: Vec<String>,
    },
    /// Run the acceptance checks.
    Selftest {
        #[arg(long)]
        only: Vec<u8>,
    },
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::WronskianDrift { .. }
            | Error::NonFiniteFrequency { .. }
            | Error::ImaginaryResidue { .. }
            | Error::Consistency(_)
            | Error::NotConverged { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Outcome<()> {
    let mut settings = match &cli.config {
        Some(path) => read_config(path)?,
        None => BTreeMap::new(),
    };
    match cli.cmd {
        Cmd::Figure { id, out, set } => {
            settings.extend(parse_pairs(&set)?);
            let mut cfg = FigureConfig::default();
            for (k, v) in &settings {
                cfg.set(k, v)?;
            }
            let ids: Vec<u8> = id.map_or_else(|| (1..=6).collect(), |i| vec![i]);
            for id in ids {
                let (csv, gp) = write_figure(id, &cfg, &out)?;
                println!("{}", csv.display());
                println!("{}", gp.display());
            }
            Ok(())
        }
        Cmd::Eval { op, args } => {
            settings.extend(parse_pairs(&args)?);
            for line in eval(&op, &Args(settings))? {
                println!("{line}");
            }
            Ok(())
        }
        Cmd::Selftest { only } => {
            let ids: Vec<u8> = if only.is_empty() { acceptance::ids().collect() } else { only };
            let mut failed = 0;
            for id in ids {
                let r = acceptance::run(id).ok_or_else(|| usage(format!("no criterion {id}")))?;
                println!("{r}");
                failed += usize::from(!r.passed);
            }
            if failed > 0 {
                return Err(Failure::Numerical(format!("{failed} criteria failed")));
            }
            Ok(())
        }
    }
}

fn read_config(path: &Path) -> Outcome<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let lines: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect();
    parse_pairs(&lines)
}

fn parse_pairs(items: &[String]) -> Outcome<BTreeMap<String, String>> {
    items
        .iter()
        .map(|s| match s.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
            _ => Err(usage(format!("expected key=value, got `{s}`"))),
        })
        .collect()
}

struct Args(BTreeMap<String, String>);

impl Args {
    fn raw(&self, key: &str) -> Outcome<&str> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| usage(format!("missing argument `{key}`")))
    }

    fn real(&self, key: &str) -> Outcome<f64> {
        let v = self.raw(key)?;
        v.parse()
            .map_err(|_| usage(format!("`{key}`: expected a real number, got `{v}`")))
    }

    fn real_or(&self, key: &str, default: f64) -> Outcome<f64> {
        if self.0.contains_key(key) {
            self.real(key)
        } else {
            Ok(default)
        }
    }

    fn count(&self, key: &str) -> Outcome<usize> {
        let v = self.raw(key)?;
        v.parse()
            .map_err(|_| usage(format!("`{key}`: expected a non-negative integer, got `{v}`")))
    }

    fn complex(&self, key: &str) -> Outcome<C64> {
        let v = self.raw(key)?;
        parse_complex(v).ok_or_else(|| usage(format!("`{key}`: expected a complex number like 0.7+0.3i, got `{v}`")))
    }

    fn profile(&self) -> Outcome<DriveProfile> {
        let spec = self.0.get("profile").map_or("constant:1", String::as_str);
        let mut p = parse_profile(spec)?;
        if self.0.contains_key("force") {
            p = p.with_constant_force(self.real("force")?);
        }
        Ok(p)
    }

    fn solver(&self, t: f64) -> Outcome<ModeSolver> {
        let step = self.real_or("step", 1e-3)?;
        let t_end = t.abs().max(step);
        Ok(ModeSolver::for_profile(self.profile()?, t_end, step)?)
    }

    fn mode(&self) -> Outcome<Mode> {
        let t = self.real_or("t", 0.0)?;
        if t < 0.0 {
            return Err(usage("`t` must be non-negative"));
        }
        Ok(self.solver(t)?.mode_at(t)?)
    }
}

fn parse_complex(s: &str) -> Option<C64> {
    let s = s.trim().replace(' ', "");
    if let Some((re, im)) = s.split_once(',') {
        return Some(C64::new(re.parse().ok()?, im.parse().ok()?));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Some(C64::new(s.parse().ok()?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match cut {
        Some(k) => (body[..k].parse().ok()?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().ok()?,
    };
    Some(C64::new(re, im))
}

fn parse_profile(spec: &str) -> Outcome<DriveProfile> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |what: &str| -> Outcome<f64> {
        arg.parse()
            .map_err(|_| usage(format!("profile `{spec}`: {what} must be a real number")))
    };
    match kind {
        "constant" => Ok(DriveProfile::constant(num("omega")?)),
        "free" => Ok(DriveProfile::free()),
        "resonance" => Ok(DriveProfile::parametric_resonance(num("k")?)?),
        "custom" => read_table(Path::new(arg)),
        _ => Err(usage(format!(
            "profile `{spec}`: expected constant:<omega>, free, resonance:<k> or custom:<file>"
        ))),
    }
}

/// Whitespace-separated `t omega^2 f` rows; `#` starts a comment.
fn read_table(path: &Path) -> Outcome<DriveProfile> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read profile table {}: {e}", path.display())))?;
    let (mut ts, mut ws, mut fs_) = (Vec::new(), Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| usage(format!("{}:{}: not a number", path.display(), i + 1)))?;
        match cols[..] {
            [t, w2] => (ts.push(t), ws.push(w2), fs_.push(0.0)),
            [t, w2, f] => (ts.push(t), ws.push(w2), fs_.push(f)),
            _ => return Err(usage(format!("{}:{}: expected `t omega^2 [f]`", path.display(), i + 1))),
        };
    }
    Ok(DriveProfile::tabulated(ts, ws, fs_)?)
}

/// 12 significant digits; plain decimals for moderate magnitudes.
fn num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let e = v.abs().log10().floor() as i32;
    if (-5..15).contains(&e) {
        let s = format!("{:.*}", (11 - e).max(0) as usize, v);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.11e}")
    }
}

fn cnum(z: C64) -> String {
    format!("{},{}", num(z.re), num(z.im))
}

fn eval(op: &str, a: &Args) -> Outcome<Vec<String>> {
    let one = |v: f64| Ok(vec![num(v)]);
    match op {
        "coherent_mdf" => one(coherent_mdf(a.complex("alpha")?, &a.mode()?, a.real("X")?, a.real("mu")?, a.real("nu")?)?),
        "fock_mdf" => one(fock_mdf(a.count("n")?, &a.mode()?, a.real("X")?, a.real("mu")?, a.real("nu")?)?),
        "cross_mdf" => Ok(vec![cnum(cross_mdf(
            a.count("n")?,
            a.count("m")?,
            &a.mode()?,
            a.real("X")?,
            a.real("mu")?,
            a.real("nu")?,
        )?)]),
        "mean_x" => one(mean_x(a.complex("alpha")?, &a.mode()?, a.real("mu")?, a.real("nu")?)),
        "variance_x" => one(variance_x(&a.mode()?, a.real("mu")?, a.real("nu")?)),
        "wronskian" => {
            let t = a.real("t")?;
            let step = a.real_or("step", 1e-3)?;
            one(solve_epsilon(&a.profile()?, t, step)?.max_wronskian_drift())
        }
        "epsilon" => {
            let m = a.mode()?;
            Ok(vec![format!("{},{}", cnum(m.eps), cnum(m.eps_dot))])
        }
        "beta" => Ok(vec![cnum(a.mode()?.beta)]),
        "lambda" => {
            let inv = invariants::LinearInvariant::from_mode(&a.mode()?)?;
            let l = inv.lambda;
            Ok(vec![format!("{},{}", num(l[0][0]), num(l[0][1])), format!("{},{}", num(l[1][0]), num(l[1][1]))])
        }
        "delta" => {
            let d = invariants::delta_vector(a.mode()?.beta);
            Ok(vec![format!("{},{}", num(d[0]), num(d[1]))])
        }
        "frame_map" => {
            let prop = ClassicalPropagator::new(a.mode()?)?;
            let p = frame_map(&prop, a.real("X")?, a.real("mu")?, a.real("nu")?)?;
            Ok(vec![format!("{},{},{}", num(p.x), num(p.mu), num(p.nu))])
        }
        "hermite" => one(hermite(a.count("n")?, a.real("y")?)?),
        "green_sho" => Ok(vec![cnum(green_sho(a.real("X")?, a.real("Z")?, a.real("t")?)?)]),
        "green_free" => Ok(vec![cnum(green_free(a.real("X")?, a.real("Z")?, a.real("t")?)?)]),
        "green_driven" => Ok(vec![cnum(green_driven(a.real("X")?, a.real("Z")?, a.real("t")?, &a.profile()?)?)]),
        "quantum_propagator" => Ok(vec![cnum(quantum_propagator(
            a.real("X")?,
            a.real("Xp")?,
            a.real("Z")?,
            a.real("Zp")?,
            a.real("t")?,
            &a.profile()?,
        )?)]),
        "quantum_propagator_sho" => Ok(vec![cnum(quantum_propagator_sho(
            a.real("X")?,
            a.real("Xp")?,
            a.real("Z")?,
            a.real("Zp")?,
            a.real("t")?,
        )?)]),
        "fokker_planck_residual" => {
            let alpha = a.complex("alpha")?;
            let t = a.real("t")?;
            let h = a.real_or("h", 1e-3)?;
            let solver = a.solver(t + h)?;
            let w = |x: f64, mu: f64, nu: f64, t: f64| {
                solver
                    .mode_at(t)
                    .and_then(|m| coherent_mdf(alpha, &m, x, mu, nu))
                    .unwrap_or(f64::NAN)
            };
            let at = PhasePoint {
                x: a.real("X")?,
                mu: a.real("mu")?,
                nu: a.real("nu")?,
                t,
            };
            one(fokker_planck_residual(w, solver.profile(), at, h))
        }
        "eigencheck" => Ok(vec![cnum(annihilation_eigencheck(
            a.complex("alpha")?,
            &a.mode()?,
            a.real("mu")?,
            a.real("nu")?,
            a.real("k")?,
            a.real_or("h", 1e-4)?,
        )?)]),
        "density_from_mdf" => {
            let alpha = a.complex("alpha")?;
            let mode = a.mode()?;
            let quad = QuadratureSpec {
                mu_max: a.real_or("M", 12.0)?,
                ..QuadratureSpec::default()
            };
            let w = |x, mu, nu| coherent_mdf(alpha, &mode, x, mu, nu);
            Ok(vec![cnum(density_from_mdf_checked(w, a.real("X")?, a.real("Xp")?, &quad)?)])
        }
        "mdf_from_density" => {
            let rho = DensityGrid::read_from(open(a.raw("rho")?)?)?;
            one(mdf_from_density(&rho, a.real("X")?, a.real("mu")?, a.real("nu")?)?)
        }
        "mdf_from_wigner" => {
            let w = WignerGrid::read_from(open(a.raw("wigner")?)?)?;
            let p = mdf_from_wigner(&w, a.real("X")?, a.real("mu")?, a.real("nu")?)?;
            if !p.in_support {
                eprintln!("warning: line misses the grid support");
            }
            one(p.value)
        }
        _ => Err(usage(format!("unknown operation `{op}`"))),
    }
}

fn open(path: &str) -> Outcome<std::io::BufReader<fs::File>> {
    fs::File::open(path)
        .map(std::io::BufReader::new)
        .map_err(|e| usage(format!("cannot open {path}: {e}")))
}
