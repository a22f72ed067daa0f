//! Run orchestration behind the `tcg` binary: argument parsing helpers,
//! scenario loading, propagation and CSV output.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use tcg::scenario::{self, Scenario};
use tcg::{
    assemble_exact, assemble_tcg, compare, config, describe, propagate, validity_sweep,
    ComparisonReport, DensityMatrix, DrivenLevelSystem, Generator, ObservableSpec, Part,
    SweepOptions, TimeGrid, Trajectory,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] tcg::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for bad input, 3 for a model outside the coarse-graining
    /// assumptions, 4 for a diverging integration, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use tcg::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(e) => match e {
                E::ProportionalityViolation { .. } => 3,
                E::IntegrationBlowup { .. } => 4,
                E::Singular(_) | E::TimeDependent | E::GridMismatch => 1,
                _ => 2,
            },
            CliError::Io { .. } | CliError::Csv(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSource {
    Preset(String),
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Tcg,
    Both,
}

impl Method {
    fn runs_exact(self) -> bool {
        matches!(self, Method::Exact | Method::Both)
    }

    fn runs_tcg(self) -> bool {
        matches!(self, Method::Tcg | Method::Both)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameOverride {
    /// Keep the frame of the preset or model file.
    Keep,
    Phases(Vec<f64>),
}

/// `|i⟩⟨j|` by level labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRequest {
    pub i: u32,
    pub j: u32,
    pub part: Part,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub omega: Vec<f64>,
    pub gamma: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: ModelSource,
    pub method: Method,
    pub include_jump: bool,
    pub frame: FrameOverride,
    /// Sparse `(label, amplitude)` list; normalized on use.
    pub initial: Option<Vec<(u32, Complex64)>>,
    /// Run length in units of `τ`.
    pub tmax: Option<f64>,
    pub dt: Option<f64>,
    pub observables: Option<Vec<ObservableRequest>>,
    pub out: PathBuf,
    pub describe: bool,
    pub sweep: Option<SweepSpec>,
}

impl RunConfig {
    pub fn new(source: ModelSource) -> Self {
        RunConfig {
            source,
            method: Method::Both,
            include_jump: true,
            frame: FrameOverride::Keep,
            initial: None,
            tmax: None,
            dt: None,
            observables: None,
            out: PathBuf::from("."),
            describe: false,
            sweep: None,
        }
    }
}

/// Parses `re`, `re+imi`, `re-imi`, `imi` and `i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Usage(format!("bad complex number {text:?}"));
    let number = |x: &str| x.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(number(&s)?, 0.0));
    };
    let unit = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => number(x),
        }
    };
    // the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(number(&body[..k])?, unit(&body[k..])?)),
        None => Ok(Complex64::new(0.0, unit(body)?)),
    }
}

/// `label:amplitude,...`, e.g. `1:1,2:1,3:2` or `1:0.5+0.5i,3:1`.
pub fn parse_initial(text: &str) -> Result<Vec<(u32, Complex64)>> {
    text.split(',')
        .map(|item| {
            let (label, amp) = item
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("initial entry {item:?} is not label:amplitude")))?;
            let label = label
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad level label {label:?}")))?;
            Ok((label, parse_complex(amp)?))
        })
        .collect()
}

/// `preset` or comma-separated per-level phases.
pub fn parse_frame(text: &str) -> Result<FrameOverride> {
    if text.trim() == "preset" {
        return Ok(FrameOverride::Keep);
    }
    text.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad frame phase {x:?}")))
        })
        .collect::<Result<Vec<f64>>>()
        .map(FrameOverride::Phases)
}

/// `i-j:part,...` with labels and part one of `re`, `im`, `abs`.
pub fn parse_observables(text: &str) -> Result<Vec<ObservableRequest>> {
    text.split(',')
        .map(|item| {
            let bad = || CliError::Usage(format!("observable {item:?} is not i-j:re|im|abs"));
            let (levels, part) = item.trim().split_once(':').ok_or_else(bad)?;
            let (i, j) = levels.split_once('-').ok_or_else(bad)?;
            let part = match part {
                "re" => Part::Re,
                "im" => Part::Im,
                "abs" => Part::Abs,
                _ => return Err(bad()),
            };
            Ok(ObservableRequest {
                i: i.parse().map_err(|_| bad())?,
                j: j.parse().map_err(|_| bad())?,
                part,
            })
        })
        .collect()
}

/// `omega=<values>,gamma=<values>` where values are `a:b:n` (n evenly
/// spaced points including both ends) or plain numbers, e.g.
/// `omega=0.05:0.5:10,gamma=0.1` or `omega=0.1,0.3,0.8,gamma=0.1`.
pub fn parse_sweep(text: &str) -> Result<SweepSpec> {
    let bad = |why: &str| CliError::Usage(format!("bad sweep spec {text:?}: {why}"));
    // omega, gamma
    let mut lists: [Option<Vec<f64>>; 2] = [None, None];
    let mut current: Option<usize> = None;
    for token in text.split(',') {
        let token = token.trim();
        let value = match token.split_once('=') {
            Some((key, value)) => {
                let k = match key {
                    "omega" => 0,
                    "gamma" => 1,
                    _ => return Err(bad("keys are omega and gamma")),
                };
                if lists[k].is_some() {
                    return Err(bad("repeated key"));
                }
                lists[k] = Some(Vec::new());
                current = Some(k);
                value
            }
            None => token,
        };
        let k = current.ok_or_else(|| bad("values before a key"))?;
        let list = lists[k].as_mut().expect("opened above");
        let parts: Vec<&str> = value.split(':').collect();
        let num = |x: &str| x.parse::<f64>().map_err(|_| bad("not a number"));
        match parts.as_slice() {
            [x] => list.push(num(x)?),
            [a, b, n] => {
                let (a, b) = (num(a)?, num(b)?);
                let n: usize = n.parse().map_err(|_| bad("point count"))?;
                if n == 0 {
                    return Err(bad("zero points"));
                }
                if n == 1 {
                    list.push(a);
                } else {
                    list.extend((0..n - 1).map(|k| a + (b - a) * k as f64 / (n - 1) as f64));
                    list.push(b);
                }
            }
            _ => return Err(bad("ranges are a:b:n")),
        }
    }
    let [omega, gamma] = lists;
    let omega = omega.ok_or_else(|| bad("missing omega"))?;
    let gamma = gamma.ok_or_else(|| bad("missing gamma"))?;
    if omega.iter().chain(&gamma).any(|x| !x.is_finite() || *x < 0.0) {
        return Err(bad("ratios must be finite and non-negative"));
    }
    Ok(SweepSpec { omega, gamma })
}

/// C-style `%.12e`: twelve mantissa digits and a signed exponent of at
/// least two digits.
pub fn format_e12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let s = format!("{:.12e}", x);
    let (mantissa, exponent) = s.split_once('e').expect("exponent");
    let exponent: i32 = exponent.parse().expect("exponent digits");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.abs())
}

fn observable_name(i: u32, j: u32) -> String {
    if i < 10 && j < 10 {
        format!("s{i}{j}")
    } else {
        format!("s{i}_{j}")
    }
}

fn default_observables(sys: &DrivenLevelSystem) -> Vec<ObservableSpec> {
    let labels = sys.labels();
    let n = sys.dim();
    let mut out: Vec<ObservableSpec> = (0..n)
        .map(|i| ObservableSpec::new(observable_name(labels[i], labels[i]), i, i, Part::Re))
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            for part in [Part::Re, Part::Im] {
                out.push(ObservableSpec::new(observable_name(labels[i], labels[j]), i, j, part));
            }
        }
    }
    out
}

fn index_of(sys: &DrivenLevelSystem, label: u32) -> Result<usize> {
    sys.level_index(label)
        .map_err(|_| CliError::Usage(format!("no level labelled {label}")))
}

/// The preset or model file with every override from `cfg` applied.
pub fn load_scenario(cfg: &RunConfig) -> Result<Scenario> {
    let mut s = match &cfg.source {
        ModelSource::Preset(name) => scenario::preset(name)?,
        ModelSource::File(path) => {
            let system = config::read_model(path)?;
            let mut initial = vec![Complex64::new(0.0, 0.0); system.dim()];
            initial[0] = Complex64::new(1.0, 0.0);
            Scenario {
                name: path.display().to_string(),
                observables: default_observables(&system),
                system,
                initial,
                periods: 10.0,
            }
        }
    };
    if let FrameOverride::Phases(phases) = &cfg.frame {
        s.system = s.system.clone().with_frame(phases.clone())?;
    }
    if let Some(entries) = &cfg.initial {
        let mut amps = vec![Complex64::new(0.0, 0.0); s.system.dim()];
        for (label, amp) in entries {
            amps[index_of(&s.system, *label)?] += amp;
        }
        s.initial = amps;
    }
    if let Some(requests) = &cfg.observables {
        s.observables = requests
            .iter()
            .map(|r| {
                Ok(ObservableSpec::new(
                    observable_name(r.i, r.j),
                    index_of(&s.system, r.i)?,
                    index_of(&s.system, r.j)?,
                    r.part,
                ))
            })
            .collect::<Result<_>>()?;
    }
    if let Some(tmax) = cfg.tmax {
        if !(tmax > 0.0 && tmax.is_finite()) {
            return Err(CliError::Usage(format!("tmax must be positive, got {tmax}")));
        }
        s.periods = tmax;
    }
    if let Some(dt) = cfg.dt {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(CliError::Usage(format!("dt must be positive, got {dt}")));
        }
    }
    Ok(s)
}

/// What a run produced.
#[derive(Debug, Default)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub report: Option<ComparisonReport>,
    pub late_report: Option<ComparisonReport>,
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::Writer::from_writer(file))
}

pub fn write_trajectory_csv(
    path: &Path,
    traj: &Trajectory,
    specs: &[ObservableSpec],
    tau: f64,
) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["t".to_string(), "t_over_tau".to_string()];
    header.extend(specs.iter().map(|s| s.column()));
    header.extend(["trace_defect", "herm_defect", "min_eig"].map(String::from));
    w.write_record(&header)?;
    for (k, (rho, diag)) in traj.states.iter().zip(&traj.diagnostics).enumerate() {
        let t = traj.grid.time(k);
        let mut row = vec![format_e12(t), format_e12(t / tau)];
        row.extend(specs.iter().map(|s| format_e12(s.evaluate(rho))));
        row.extend(
            [diag.trace_defect, diag.hermiticity_defect, diag.min_eigenvalue].map(format_e12),
        );
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_comparison_csv(
    path: &Path,
    exact: &Trajectory,
    tcg: &Trajectory,
    specs: &[ObservableSpec],
) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["t".to_string()];
    for s in specs {
        let col = s.column();
        header.extend([format!("{col}_exact"), format!("{col}_tcg"), format!("{col}_absdiff")]);
    }
    w.write_record(&header)?;
    for (k, (a, b)) in exact.states.iter().zip(&tcg.states).enumerate() {
        let mut row = vec![format_e12(exact.grid.time(k))];
        for s in specs {
            let (x, y) = (s.evaluate(a), s.evaluate(b));
            row.extend([format_e12(x), format_e12(y), format_e12((x - y).abs())]);
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_sweep_csv(path: &Path, rows: &[tcg::SweepRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["omega_ratio", "gamma_ratio", "max_pop_dev", "max_coh_dev", "error"])?;
    for r in rows {
        w.write_record([
            format_e12(r.omega_ratio),
            format_e12(r.gamma_ratio),
            format_e12(r.max_pop_dev),
            format_e12(r.max_coh_dev),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn generators(s: &Scenario, cfg: &RunConfig) -> Result<(Option<Generator>, Option<Generator>)> {
    // assemble the coarse-grained generator first so assumption violations
    // surface before any output is written
    let tcg = if cfg.method.runs_tcg() {
        Some(assemble_tcg(&s.system, cfg.include_jump)?)
    } else {
        None
    };
    let exact = cfg.method.runs_exact().then(|| assemble_exact(&s.system));
    Ok((exact, tcg))
}

fn io(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

/// Executes `cfg`, writing CSV files under `cfg.out` and a human-readable
/// summary to `out`.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<RunOutcome> {
    let s = load_scenario(cfg)?;
    let rho0 = s.initial_state()?;

    if cfg.describe {
        let (exact, tcg) = generators(&s, cfg)?;
        let text: Vec<String> = [exact, tcg].iter().flatten().map(describe).collect();
        io(out, &text.join("\n"))?;
        return Ok(RunOutcome::default());
    }

    if let Some(spec) = &cfg.sweep {
        return run_sweep(&s, &rho0, spec, cfg, out);
    }

    let (exact_gen, tcg_gen) = generators(&s, cfg)?;
    let (tau, tau_known) = match s.tau() {
        Ok(t) => (t, true),
        Err(_) => (1.0, false),
    };
    let grid = TimeGrid::with_max_step(0.0, s.periods * tau, cfg.dt.unwrap_or_else(|| s.dt()))?;
    let (ratio_omega, ratio_gamma) = s.system.perturbation_ratios();

    let mut summary = String::new();
    writeln!(summary, "model {} dim={}", s.name, s.system.dim()).unwrap();
    writeln!(summary, "omega/delta={} gamma/delta={}", format_e12(ratio_omega), format_e12(ratio_gamma)).unwrap();
    if tau_known {
        writeln!(summary, "tau={}", format_e12(tau)).unwrap();
    } else {
        writeln!(summary, "tau unavailable; times in raw units").unwrap();
    }
    writeln!(summary, "dt={} steps={}", format_e12(grid.dt()), grid.steps()).unwrap();

    create_dir(&cfg.out)?;
    let mut outcome = RunOutcome::default();
    let mut trajectories = Vec::new();
    for (name, gen) in [("exact", exact_gen), ("tcg", tcg_gen)] {
        let Some(gen) = gen else { continue };
        let traj = propagate(&gen, &rho0, &grid)?;
        let path = cfg.out.join(format!("{name}.csv"));
        write_trajectory_csv(&path, &traj, &s.observables, tau)?;
        writeln!(
            summary,
            "{name} ({}): max trace defect {} max herm defect {} min eig {}",
            gen.variant(),
            format_e12(traj.max_trace_defect()),
            format_e12(traj.max_hermiticity_defect()),
            format_e12(traj.min_eigenvalue())
        )
        .unwrap();
        if let Some(w) = &traj.positivity_warning {
            writeln!(
                summary,
                "warning: {name} state not positive from t={} ({} steps, worst eigenvalue {})",
                format_e12(w.first_time),
                w.count,
                format_e12(w.worst_eigenvalue)
            )
            .unwrap();
        }
        outcome.files.push(path);
        trajectories.push(traj);
    }

    if let [exact, tcg] = trajectories.as_slice() {
        let path = cfg.out.join("compare.csv");
        write_comparison_csv(&path, exact, tcg, &s.observables)?;
        outcome.files.push(path);
        let report = compare(exact, tcg, &s.observables, None)?;
        let late = if tau_known && tau < grid.t1() {
            Some(compare(exact, tcg, &s.observables, Some((tau, grid.t1())))?)
        } else {
            None
        };
        for (k, d) in report.deviations.iter().enumerate() {
            write!(
                summary,
                "deviation {}: max {} rms {} final {}",
                d.name,
                format_e12(d.max_abs),
                format_e12(d.rms),
                format_e12(d.final_abs)
            )
            .unwrap();
            if let Some(late) = &late {
                write!(summary, " max after tau {}", format_e12(late.deviations[k].max_abs)).unwrap();
            }
            summary.push('\n');
        }
        outcome.report = Some(report);
        outcome.late_report = late;
    }
    for f in &outcome.files {
        writeln!(summary, "wrote {}", f.display()).unwrap();
    }
    io(out, &summary)?;
    Ok(outcome)
}

fn run_sweep(
    s: &Scenario,
    rho0: &DensityMatrix,
    spec: &SweepSpec,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<RunOutcome> {
    let options = SweepOptions {
        periods: s.periods,
        dt: cfg.dt,
    };
    let rows = validity_sweep(&s.system, &spec.omega, &spec.gamma, rho0, options);
    create_dir(&cfg.out)?;
    let path = cfg.out.join("sweep.csv");
    write_sweep_csv(&path, &rows)?;
    let mut summary = String::new();
    for r in &rows {
        write!(
            summary,
            "omega/delta={} gamma/delta={} max_pop_dev={} max_coh_dev={}",
            format_e12(r.omega_ratio),
            format_e12(r.gamma_ratio),
            format_e12(r.max_pop_dev),
            format_e12(r.max_coh_dev)
        )
        .unwrap();
        if let Some(e) = &r.error {
            write!(summary, " error: {e}").unwrap();
        }
        summary.push('\n');
    }
    writeln!(summary, "wrote {}", path.display()).unwrap();
    io(out, &summary)?;
    Ok(RunOutcome {
        files: vec![path],
        ..RunOutcome::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_numbers() {
        assert_eq!(parse_complex("2").unwrap(), z(2.0, 0.0));
        assert_eq!(parse_complex("0.5+0.25i").unwrap(), z(0.5, 0.25));
        assert_eq!(parse_complex("1-i").unwrap(), z(1.0, -1.0));
        assert_eq!(parse_complex("-i").unwrap(), z(0.0, -1.0));
        assert_eq!(parse_complex("3i").unwrap(), z(0.0, 3.0));
        assert_eq!(parse_complex("1e-3+2e-1i").unwrap(), z(1e-3, 0.2));
        assert_eq!(parse_complex("-1e+2").unwrap(), z(-100.0, 0.0));
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("1+2j").is_err());
    }

    #[test]
    fn initial_state_lists() {
        let v = parse_initial("1:1,2:1,3:2").unwrap();
        assert_eq!(v, vec![(1, z(1.0, 0.0)), (2, z(1.0, 0.0)), (3, z(2.0, 0.0))]);
        assert!(parse_initial("1=1").is_err());
        assert!(parse_initial("a:1").is_err());
    }

    #[test]
    fn sweep_specs() {
        let s = parse_sweep("omega=0.05:0.5:10,gamma=0.05:0.5:10").unwrap();
        assert_eq!(s.omega.len(), 10);
        assert_eq!(s.omega[0], 0.05);
        assert_eq!(s.omega[9], 0.5);
        let s = parse_sweep("omega=0.1,0.3,0.8,gamma=0.1").unwrap();
        assert_eq!(s.omega, vec![0.1, 0.3, 0.8]);
        assert_eq!(s.gamma, vec![0.1]);
        for bad in ["omega=0.1", "omega=a,gamma=0.1", "delta=1,gamma=1", "0.1,omega=1,gamma=1", "omega=1:2,gamma=1", "omega=1,omega=2,gamma=1", "omega=-1,gamma=1"] {
            assert!(matches!(parse_sweep(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn frames_and_observables() {
        assert_eq!(parse_frame("preset").unwrap(), FrameOverride::Keep);
        assert_eq!(parse_frame("0,1.5").unwrap(), FrameOverride::Phases(vec![0.0, 1.5]));
        assert!(parse_frame("0,x").is_err());
        let o = parse_observables("1-1:re,1-3:abs").unwrap();
        assert_eq!(o[1], ObservableRequest { i: 1, j: 3, part: Part::Abs });
        assert!(parse_observables("1-1").is_err());
        assert!(parse_observables("1:re").is_err());
    }

    #[test]
    fn c_style_exponent_format() {
        assert_eq!(format_e12(1.0), "1.000000000000e+00");
        assert_eq!(format_e12(-0.00123), "-1.230000000000e-03");
        assert_eq!(format_e12(0.0), "0.000000000000e+00");
        assert_eq!(format_e12(1e123), "1.000000000000e+123");
        assert_eq!(format_e12(f64::NAN), "nan");
    }

    #[test]
    fn overrides_apply_to_presets() {
        let mut cfg = RunConfig::new(ModelSource::Preset("raman3".into()));
        cfg.initial = Some(parse_initial("1:1,2:1,3:2").unwrap());
        cfg.frame = FrameOverride::Phases(vec![0.0, 0.0, 0.0]);
        cfg.observables = Some(parse_observables("3-3:re").unwrap());
        let s = load_scenario(&cfg).unwrap();
        let rho = s.initial_state().unwrap();
        assert!((rho.matrix()[(2, 2)].re - 4.0 / 6.0).abs() < 1e-15);
        assert_eq!(s.system.frame(), &[0.0, 0.0, 0.0]);
        assert_eq!(s.observables.len(), 1);
        cfg.initial = Some(parse_initial("7:1").unwrap());
        assert!(matches!(load_scenario(&cfg), Err(CliError::Usage(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Model(tcg::Error::Config("x".into())).exit_code(), 2);
        let v = tcg::Error::ProportionalityViolation {
            operator: "L".into(),
            residual: 1.0,
            imaginary: 0.0,
        };
        assert_eq!(CliError::Model(v).exit_code(), 3);
        let b = tcg::Error::IntegrationBlowup { step: 1, time: 0.1 };
        assert_eq!(CliError::Model(b).exit_code(), 4);
    }
}
