//! Command-line front end. [`run`] is the whole program; `main` only wires
//! it to the process streams.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use faddeeva::weideman::{accuracy_class, DEFAULT_DEGREE};
use faddeeva::{
    eval_batch, eval_batch_par, eval_eq1, eval_w, fourier_coefficients, voigt_profile, weideman_batch, Complex64,
    Params64, Preset, VoigtLine64, Weideman64,
};
use faddeeva_bench::{exp_time_fraction, generate_inputs, time_implementation, write_csv, ImplId, InputSpec};
use faddeeva_oracle::{GridSpec, OracleConfig, ReferenceGrid};
use serde::Serialize;

/// Relative paths given to `--out` are resolved against this directory
/// when it is set.
pub const OUT_DIR_ENV: &str = "FADDEEVA_OUT_DIR";
pub const GRID_SCHEMA: &str = "faddeeva-grid/1";
pub const BENCH_SCHEMA: &str = "faddeeva-bench/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Accuracy gate of `validate` for the expansion presets.
pub fn preset_gate(preset: Preset) -> f64 {
    match preset {
        Preset::High => 1e-10,
        Preset::Fast => 1e-5,
    }
}

#[derive(Parser, Debug)]
#[command(name = "faddeeva", version, about = "Faddeeva function w(z) = exp(-z^2) erfc(-iz) and Voigt profiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate w at one point
    Eval(EvalArgs),
    /// Evaluate w on a rectangular grid
    Grid(GridArgs),
    /// Compare an implementation with the extended-precision oracle
    Validate(ValidateArgs),
    /// Time implementations on seeded random inputs
    Bench(BenchArgs),
    /// Print the expansion coefficients a_n
    Coeffs(CoeffsArgs),
    /// Sample the Voigt profile of one line
    Voigt(VoigtArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PresetArg {
    High,
    Fast,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::High => Preset::High,
            PresetArg::Fast => Preset::Fast,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Raw,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, allow_hyphen_values = true)]
    y: f64,
    #[arg(long, value_enum, default_value = "high")]
    preset: PresetArg,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, allow_hyphen_values = true)]
    x_step: f64,
    /// Comma-separated imaginary parts
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    y_list: Vec<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, value_enum, default_value = "high")]
    preset: PresetArg,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ImplArg {
    Eq1,
    Eq3,
    Weideman,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long = "impl", value_enum, default_value = "eq3")]
    implementation: ImplArg,
    #[arg(long, value_enum, default_value = "high")]
    preset: PresetArg,
    /// Degree of the Weideman approximation
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    degree: usize,
    /// Decimal digits of the oracle
    #[arg(long, default_value_t = 30)]
    digits: u32,
    /// `default`, `benchmark`, or a JSON file {"x_values": [...], "y_values": [...]}
    #[arg(long, default_value = "default")]
    grid: String,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated list of eq1, eq3, eq3-par, weideman<degree>
    #[arg(long, value_delimiter = ',', default_value = "eq1,eq3,weideman16")]
    impls: Vec<String>,
    #[arg(long, default_value_t = faddeeva_bench::DEFAULT_SIZE)]
    size: usize,
    #[arg(long, default_value_t = faddeeva_bench::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, value_enum, default_value = "high")]
    preset: PresetArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[arg(long, default_value_t = Preset::High.tau_m(), allow_hyphen_values = true)]
    tau_m: f64,
    #[arg(long, default_value_t = Preset::High.n_terms())]
    n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct VoigtArgs {
    #[arg(long, allow_hyphen_values = true)]
    center: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    strength: f64,
    #[arg(long, allow_hyphen_values = true)]
    doppler_hwhm: f64,
    #[arg(long, allow_hyphen_values = true)]
    lorentz_hwhm: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu_max: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu_step: f64,
    #[arg(long, value_enum, default_value = "high")]
    preset: PresetArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    /// Domain error or failed gate.
    Failed(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Failed(format!("I/O error: {e}"))
    }
}

impl From<faddeeva::FaddeevaError> for Failure {
    fn from(e: faddeeva::FaddeevaError) -> Self {
        Failure::Failed(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Formats with 17 significant digits, enough to recover the binary64 value.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// `min, min + step, ...` up to `max` (inclusive within half a step),
/// computed without accumulating the step.
pub fn axis(min: f64, max: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= 0.0 || max < min {
        return Err(format!("need finite min <= max and step > 0, got {min}, {max}, {step}"));
    }
    let n = ((max - min) / step + 0.5).floor() as usize + 1;
    if n > 1 << 28 {
        return Err(format!("{n} samples requested"));
    }
    Ok((0..n).map(|k| min + k as f64 * step).collect())
}

/// Runs the program with `argv` (including the program name), writing
/// data to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let outcome = match cli.command {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Grid(a) => cmd_grid(a, out),
        Command::Validate(a) => cmd_validate(a, out, err),
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Coeffs(a) => cmd_coeffs(a, out),
        Command::Voigt(a) => cmd_voigt(a, out),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nUsage: faddeeva <COMMAND> [OPTIONS]; see faddeeva --help");
            EXIT_USAGE
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    };
    let _ = out.flush();
    code
}

fn resolve_out(path: &PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

/// Sends data either to `out` or to the file named by `--out`.
fn with_sink(path: &Option<PathBuf>, out: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Outcome) -> Outcome {
    match path {
        None => f(out),
        Some(p) => {
            let p = resolve_out(p);
            let file = File::create(&p).map_err(|e| Failure::Failed(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            let code = f(&mut w)?;
            w.flush()?;
            Ok(code)
        }
    }
}

fn cmd_eval(a: EvalArgs, out: &mut dyn Write) -> Outcome {
    let p = Preset::from(a.preset).params::<f64>();
    let w = eval_w(Complex64::new(a.x, a.y), &p)?;
    writeln!(out, "re_w {}", fmt17(w.re))?;
    writeln!(out, "im_w {}", fmt17(w.im))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct GridPoint {
    x: f64,
    y: f64,
    re_w: f64,
    im_w: f64,
}

#[derive(Serialize)]
struct GridDoc<'a> {
    schema: &'a str,
    preset: String,
    points: Vec<GridPoint>,
}

fn cmd_grid(a: GridArgs, out: &mut dyn Write) -> Outcome {
    let xs = axis(a.x_min, a.x_max, a.x_step).map_err(Failure::Usage)?;
    if let Some(y) = a.y_list.iter().find(|y| !y.is_finite()) {
        return Err(Failure::Usage(format!("y value {y} is not finite")));
    }
    let preset = Preset::from(a.preset);
    let grid = GridSpec { x_values: xs, y_values: a.y_list };
    let zs = grid.points();
    let ws = eval_batch_par(&zs, &preset.params::<f64>())?;

    with_sink(&a.out, out, |w| {
        match a.format {
            Format::Csv => {
                writeln!(w, "# schema={GRID_SCHEMA} preset={preset}")?;
                let mut cw = csv::Writer::from_writer(w);
                cw.write_record(["x", "y", "re_w", "im_w"]).map_err(csv_failure)?;
                for (z, v) in zs.iter().zip(&ws) {
                    cw.write_record([fmt17(z.re), fmt17(z.im), fmt17(v.re), fmt17(v.im)])
                        .map_err(csv_failure)?;
                }
                cw.flush()?;
            }
            Format::Json => {
                let doc = GridDoc {
                    schema: GRID_SCHEMA,
                    preset: preset.to_string(),
                    points: zs
                        .iter()
                        .zip(&ws)
                        .map(|(z, v)| GridPoint { x: z.re, y: z.im, re_w: v.re, im_w: v.im })
                        .collect(),
                };
                serde_json::to_writer_pretty(&mut *w, &doc).map_err(|e| Failure::Failed(e.to_string()))?;
                writeln!(w)?;
            }
            Format::Raw => {
                for (z, v) in zs.iter().zip(&ws) {
                    for f in [z.re, z.im, v.re, v.im] {
                        w.write_all(&f.to_le_bytes())?;
                    }
                }
            }
        }
        Ok(EXIT_OK)
    })
}

fn csv_failure(e: csv::Error) -> Failure {
    Failure::Failed(format!("CSV output: {e}"))
}

#[derive(Serialize)]
struct ValidateDoc {
    implementation: String,
    gate: f64,
    passed: bool,
    oracle_digits: u32,
    report: faddeeva_oracle::ErrorReport,
}

fn load_grid(spec: &str) -> Result<GridSpec, Failure> {
    match spec {
        "default" => Ok(GridSpec::default_validation()),
        "benchmark" => Ok(GridSpec::benchmark()),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read grid {path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("grid file {path}: {e}")))
        }
    }
}

fn cmd_validate(a: ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let config = OracleConfig::new(a.digits).map_err(|e| Failure::Usage(e.to_string()))?;
    let grid = load_grid(&a.grid)?;
    if grid.is_empty() {
        return Err(Failure::Usage("grid has no points".into()));
    }
    let preset = Preset::from(a.preset);
    let p = preset.params::<f64>();
    let (name, gate) = match a.implementation {
        ImplArg::Eq1 => (format!("eq1-{preset}"), preset_gate(preset)),
        ImplArg::Eq3 => (format!("eq3-{preset}"), preset_gate(preset)),
        ImplArg::Weideman => (format!("weideman{}", a.degree), accuracy_class(a.degree)),
    };
    let coeffs = match a.implementation {
        ImplArg::Weideman => Some(Weideman64::new(a.degree).map_err(|e| Failure::Usage(e.to_string()))?),
        _ => None,
    };

    let reference = ReferenceGrid::compute(&grid, &config).map_err(|e| Failure::Failed(e.to_string()))?;
    let report = match a.implementation {
        ImplArg::Eq1 => reference.scan_pointwise(|z| eval_eq1(z, &p)),
        ImplArg::Eq3 => reference.scan_against(|zs| eval_batch(zs, &p)),
        ImplArg::Weideman => reference.scan_against(|zs| weideman_batch(zs, coeffs.as_ref().expect("coefficients"))),
    }
    .map_err(|e| Failure::Failed(e.to_string()))?;

    let passed = report.passes(gate);
    let doc = ValidateDoc { implementation: name, gate, passed, oracle_digits: a.digits, report };
    serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| Failure::Failed(e.to_string()))?;
    writeln!(out)?;
    if passed {
        Ok(EXIT_OK)
    } else {
        writeln!(err, "max_rel_err {:e} exceeds gate {:e}", doc.report.max_rel_err, gate)?;
        Ok(EXIT_FAILURE)
    }
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let ids = a
        .impls
        .iter()
        .map(|s| s.parse::<ImplId>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let spec = InputSpec { size: a.size, seed: a.seed, ..Default::default() };
    let zs = generate_inputs(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
    let p = Preset::from(a.preset).params::<f64>();
    let mut records = Vec::with_capacity(ids.len());
    for id in ids {
        let mut r = time_implementation(id, &zs, a.repeats, &p).map_err(|e| bench_failure(e))?;
        if id == ImplId::Eq3 {
            r.exp_fraction = Some(exp_time_fraction(&zs, &p, a.repeats).map_err(|e| bench_failure(e))?);
        }
        writeln!(err, "{id}: {:.3e} s median, {:.3e} points/s", r.median_seconds, r.throughput)?;
        records.push(r);
    }
    with_sink(&a.out, out, |w| {
        writeln!(w, "# schema={BENCH_SCHEMA}")?;
        write_csv(&records, w).map_err(|e| Failure::Failed(e.to_string()))?;
        Ok(EXIT_OK)
    })
}

fn bench_failure(e: faddeeva_bench::BenchError) -> Failure {
    use faddeeva_bench::BenchError::*;
    match e {
        InvalidConfig(_) | UnknownImpl(_) | TimerResolution { .. } => Failure::Usage(e.to_string()),
        other => Failure::Failed(other.to_string()),
    }
}

#[derive(Serialize)]
struct CoeffDoc {
    tau_m: f64,
    n_terms: usize,
    coefficients: Vec<f64>,
}

fn cmd_coeffs(a: CoeffsArgs, out: &mut dyn Write) -> Outcome {
    let p: Params64 = fourier_coefficients(a.tau_m, a.n)?;
    match a.format {
        Format::Csv => {
            writeln!(out, "n,a_n")?;
            for (n, c) in p.coefficients().iter().enumerate() {
                writeln!(out, "{n},{}", fmt17(*c))?;
            }
        }
        Format::Json => {
            let doc = CoeffDoc { tau_m: a.tau_m, n_terms: a.n, coefficients: p.coefficients().to_vec() };
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| Failure::Failed(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Raw => {
            for c in p.coefficients() {
                out.write_all(&c.to_le_bytes())?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_voigt(a: VoigtArgs, out: &mut dyn Write) -> Outcome {
    let grid = axis(a.nu_min, a.nu_max, a.nu_step).map_err(Failure::Usage)?;
    let line = VoigtLine64::new(a.center, a.strength, a.doppler_hwhm, a.lorentz_hwhm)?;
    let p = Preset::from(a.preset).params::<f64>();
    let values = voigt_profile(&grid, &line, &p)?;
    with_sink(&a.out, out, |w| {
        writeln!(w, "nu,value")?;
        for (nu, v) in grid.iter().zip(&values) {
            writeln!(w, "{},{}", fmt17(*nu), fmt17(*v))?;
        }
        Ok(EXIT_OK)
    })
}
