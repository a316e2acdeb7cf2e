//! Seeded benchmark inputs and wall-clock timing of the Faddeeva
//! evaluators.
//!
//! Timings are medians over repeated runs after one warm-up run; every
//! timed implementation is first spot-checked for correctness so a fast
//! wrong kernel cannot report a throughput.

use std::fmt;
use std::hint::black_box;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use faddeeva::batch::{combine_pass, exp_pass, scale_pass, square_pass};
use faddeeva::weideman::accuracy_class;
use faddeeva::{eval_batch, eval_batch_par, eval_eq1, weideman_batch, Complex64, FaddeevaError, Params64, Preset, Weideman64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const DEFAULT_SIZE: usize = 1 << 22;
pub const DEFAULT_SEED: u64 = 20_240_917;
pub const MIN_REPEATS: usize = 3;
/// A median shorter than this many timer ticks is rejected.
pub const MIN_TICKS: f64 = 100.0;
/// Points spot-checked before timing.
pub const CHECK_POINTS: usize = 256;
pub const CSV_HEADER: [&str; 6] = ["impl", "size", "repeats", "median_seconds", "throughput", "exp_fraction"];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Eval(#[from] FaddeevaError),
    #[error("median {median:e} s is below {MIN_TICKS} timer ticks of {resolution:e} s; use more points")]
    TimerResolution { median: f64, resolution: f64 },
    #[error("{implementation} disagrees with the reference by {err:e} (limit {tol:e}) at {point}")]
    Correctness { implementation: ImplId, err: f64, tol: f64, point: Complex64 },
    #[error("unknown implementation {0:?}")]
    UnknownImpl(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed benchmark CSV: {0}")]
    Malformed(String),
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSpec {
    pub size: usize,
    pub seed: u64,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl Default for InputSpec {
    fn default() -> Self {
        Self { size: DEFAULT_SIZE, seed: DEFAULT_SEED, x_range: (-10.0, 10.0), y_range: (0.1, 10.0) }
    }
}

impl InputSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ok(self.x_range) || !ok(self.y_range) {
            return Err(BenchError::InvalidConfig(format!(
                "ranges must be finite and increasing: x {:?}, y {:?}",
                self.x_range, self.y_range
            )));
        }
        if self.y_range.0 <= 0.0 {
            return Err(BenchError::InvalidConfig(format!("y range must start above 0, got {}", self.y_range.0)));
        }
        Ok(())
    }
}

/// Uniform points in the rectangle, drawn x then y per point from a
/// ChaCha8 stream, so the sequence is reproducible across platforms.
pub fn generate_inputs(spec: &InputSpec) -> Result<Vec<Complex64>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (x0, x1) = spec.x_range;
    let (y0, y1) = spec.y_range;
    Ok((0..spec.size)
        .map(|_| {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            Complex64::new(x0 + (x1 - x0) * u, y0 + (y1 - y0) * v)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImplId {
    Eq1,
    Eq3,
    Eq3Parallel,
    Weideman(usize),
}

impl fmt::Display for ImplId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImplId::Eq1 => f.write_str("eq1"),
            ImplId::Eq3 => f.write_str("eq3"),
            ImplId::Eq3Parallel => f.write_str("eq3-par"),
            ImplId::Weideman(n) => write!(f, "weideman{n}"),
        }
    }
}

impl FromStr for ImplId {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "eq1" => Ok(ImplId::Eq1),
            "eq3" => Ok(ImplId::Eq3),
            "eq3-par" => Ok(ImplId::Eq3Parallel),
            other => other
                .strip_prefix("weideman")
                .and_then(|d| d.parse().ok())
                .map(ImplId::Weideman)
                .ok_or_else(|| BenchError::UnknownImpl(s.to_string())),
        }
    }
}

/// A prepared evaluator: coefficient set-up happens outside the timing.
enum Runner {
    Eq1(Params64),
    Eq3(Params64),
    Eq3Par(Params64),
    Weideman(Weideman64),
}

impl Runner {
    fn new(id: ImplId, params: &Params64) -> Result<Self> {
        Ok(match id {
            ImplId::Eq1 => Runner::Eq1(params.clone()),
            ImplId::Eq3 => Runner::Eq3(params.clone()),
            ImplId::Eq3Parallel => Runner::Eq3Par(params.clone()),
            ImplId::Weideman(n) => Runner::Weideman(Weideman64::new(n)?),
        })
    }

    fn run(&self, zs: &[Complex64]) -> Result<Vec<Complex64>> {
        Ok(match self {
            Runner::Eq1(p) => zs.iter().map(|&z| eval_eq1(z, p)).collect::<Result<_, _>>()?,
            Runner::Eq3(p) => eval_batch(zs, p)?,
            Runner::Eq3Par(p) => eval_batch_par(zs, p)?,
            Runner::Weideman(c) => weideman_batch(zs, c)?,
        })
    }

    /// Tolerance against the HIGH-preset single-exponential form.
    fn tolerance(&self, id: ImplId) -> f64 {
        match id {
            ImplId::Eq1 | ImplId::Eq3 | ImplId::Eq3Parallel => 1e-12,
            ImplId::Weideman(n) => accuracy_class(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub implementation: ImplId,
    pub size: usize,
    pub repeats: usize,
    pub median_seconds: f64,
    /// Points per second at the median.
    pub throughput: f64,
    pub exp_fraction: Option<f64>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Smallest nonzero step of the monotonic clock observed in a short probe.
pub fn timer_resolution() -> f64 {
    let mut best = Duration::MAX;
    for _ in 0..64 {
        let t0 = Instant::now();
        let mut t1 = Instant::now();
        while t1 == t0 {
            t1 = Instant::now();
        }
        best = best.min(t1 - t0);
    }
    best.as_secs_f64()
}

fn check_repeats(zs: &[Complex64], repeats: usize) -> Result<()> {
    if zs.is_empty() {
        return Err(BenchError::InvalidConfig("no input points".into()));
    }
    if repeats < MIN_REPEATS {
        return Err(BenchError::InvalidConfig(format!("repeats must be at least {MIN_REPEATS}, got {repeats}")));
    }
    Ok(())
}

fn check_resolution(median: f64) -> Result<()> {
    let resolution = timer_resolution();
    if median < MIN_TICKS * resolution {
        return Err(BenchError::TimerResolution { median, resolution });
    }
    Ok(())
}

fn spot_check(id: ImplId, runner: &Runner, zs: &[Complex64]) -> Result<()> {
    let stride = (zs.len() / CHECK_POINTS).max(1);
    let sample: Vec<Complex64> = zs.iter().step_by(stride).take(CHECK_POINTS).copied().collect();
    let got = runner.run(&sample)?;
    let want = eval_batch(&sample, &Params64::from_preset(Preset::High))?;
    let tol = runner.tolerance(id);
    for ((&z, g), w) in sample.iter().zip(&got).zip(&want) {
        let err = (g - w).norm() / w.norm();
        if !(err <= tol) {
            return Err(BenchError::Correctness { implementation: id, err, tol, point: z });
        }
    }
    Ok(())
}

/// Median wall time of `repeats` evaluations of `zs` by `id` after one
/// warm-up run. `params` selects the expansion for the Eq forms.
pub fn time_implementation(id: ImplId, zs: &[Complex64], repeats: usize, params: &Params64) -> Result<BenchRecord> {
    check_repeats(zs, repeats)?;
    let runner = Runner::new(id, params)?;
    spot_check(id, &runner, zs)?;

    let mut checksum = 0.0;
    black_box(runner.run(zs)?);
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let t0 = Instant::now();
        let out = runner.run(black_box(zs))?;
        times.push(t0.elapsed().as_secs_f64());
        checksum += out[out.len() / 2].re;
    }
    black_box(checksum);

    let median_seconds = median(times);
    check_resolution(median_seconds)?;
    Ok(BenchRecord {
        implementation: id,
        size: zs.len(),
        repeats,
        median_seconds,
        throughput: zs.len() as f64 / median_seconds,
        exp_fraction: None,
    })
}

/// Per-pass medians of the array evaluator, and of the complete
/// [`eval_batch`] call on the same data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassTimes {
    pub scale: f64,
    pub exp: f64,
    pub square: f64,
    pub combine: f64,
    pub batch_total: f64,
}

impl PassTimes {
    /// Share of the evaluation spent computing `B = exp(i A)`.
    pub fn exp_fraction(&self) -> f64 {
        self.exp / self.batch_total
    }
}

/// Times each pass of the three-array evaluation separately, on arrays
/// that are already resident, and the whole [`eval_batch`] call. Medians
/// over `repeats` after a warm-up.
pub fn time_passes(zs: &[Complex64], repeats: usize, params: &Params64) -> Result<PassTimes> {
    check_repeats(zs, repeats)?;
    let fill = Complex64::new(1.0, 0.0);
    let mut samples: [Vec<f64>; 5] = Default::default();
    for rep in 0..=repeats {
        let t0 = Instant::now();
        black_box(eval_batch(black_box(zs), params)?);
        let total = t0.elapsed();

        let mut a = zs.to_vec();
        let mut b = vec![fill; a.len()];
        let mut c = vec![fill; a.len()];
        let t0 = Instant::now();
        black_box(scale_pass(&mut a, params)?);
        let t1 = Instant::now();
        exp_pass(&a, &mut b);
        let t2 = Instant::now();
        square_pass(&a, &mut c);
        let t3 = Instant::now();
        combine_pass(&a, &b, &mut c, params);
        let t4 = Instant::now();
        black_box(&c);

        if rep > 0 {
            for (s, d) in samples.iter_mut().zip([t1 - t0, t2 - t1, t3 - t2, t4 - t3, total]) {
                s.push(d.as_secs_f64());
            }
        }
    }
    let [scale, exp, square, combine, batch_total] = samples.map(median);
    check_resolution(exp)?;
    Ok(PassTimes { scale, exp, square, combine, batch_total })
}

/// Fraction of the batch evaluation time spent computing `exp(i A)`.
pub fn exp_time_fraction(zs: &[Complex64], params: &Params64, repeats: usize) -> Result<f64> {
    Ok(time_passes(zs, repeats, params)?.exp_fraction())
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.implementation.to_string(),
            r.size.to_string(),
            r.repeats.to_string(),
            fmt_f64(r.median_seconds),
            fmt_f64(r.throughput),
            r.exp_fraction.map(fmt_f64).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    if rd.headers()?.iter().ne(CSV_HEADER) {
        return Err(BenchError::Malformed("unexpected header".into()));
    }
    let bad = |what: &str, v: &str| BenchError::Malformed(format!("bad {what} {v:?}"));
    rd.records()
        .map(|row| {
            let row = row?;
            let num = |i: usize| row[i].parse::<f64>().map_err(|_| bad(CSV_HEADER[i], &row[i]));
            let int = |i: usize| row[i].parse::<usize>().map_err(|_| bad(CSV_HEADER[i], &row[i]));
            Ok(BenchRecord {
                implementation: row[0].parse()?,
                size: int(1)?,
                repeats: int(2)?,
                median_seconds: num(3)?,
                throughput: num(4)?,
                exp_fraction: if row[5].is_empty() { None } else { Some(num(5)?) },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_seeded_and_in_range() {
        let spec = InputSpec { size: 1000, ..Default::default() };
        let a = generate_inputs(&spec).unwrap();
        assert_eq!(a, generate_inputs(&spec).unwrap());
        assert_ne!(a, generate_inputs(&InputSpec { seed: 1, ..spec }).unwrap());
        assert!(a.iter().all(|z| (-10.0..10.0).contains(&z.re) && (0.1..10.0).contains(&z.im)));
        let longer = generate_inputs(&InputSpec { size: 2000, ..spec }).unwrap();
        assert_eq!(&longer[..1000], &a[..]);
        assert!(generate_inputs(&InputSpec { size: 0, ..spec }).unwrap().is_empty());
    }

    #[test]
    fn invalid_ranges_are_rejected() {
        let base = InputSpec { size: 8, seed: 42, ..Default::default() };
        for bad in [
            InputSpec { y_range: (0.0, 1.0), ..base },
            InputSpec { y_range: (-1.0, 1.0), ..base },
            InputSpec { x_range: (1.0, 1.0), ..base },
            InputSpec { x_range: (f64::NAN, 1.0), ..base },
        ] {
            assert!(matches!(generate_inputs(&bad), Err(BenchError::InvalidConfig(_))));
        }
    }

    #[test]
    fn impl_ids_round_trip() {
        for id in [ImplId::Eq1, ImplId::Eq3, ImplId::Eq3Parallel, ImplId::Weideman(16)] {
            assert_eq!(id.to_string().parse::<ImplId>().unwrap(), id);
        }
        assert!("weideman".parse::<ImplId>().is_err());
        assert!("eq2".parse::<ImplId>().is_err());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn rejects_bad_configuration() {
        let p = Params64::default();
        let zs = generate_inputs(&InputSpec { size: 10, ..Default::default() }).unwrap();
        assert!(matches!(time_implementation(ImplId::Eq3, &zs, 2, &p), Err(BenchError::InvalidConfig(_))));
        assert!(matches!(time_implementation(ImplId::Eq3, &[], 5, &p), Err(BenchError::InvalidConfig(_))));
        assert!(matches!(time_implementation(ImplId::Weideman(7), &zs, 3, &p), Err(BenchError::Eval(_))));
    }

    #[test]
    fn tiny_inputs_hit_the_resolution_check() {
        let p = Params64::default();
        let zs = generate_inputs(&InputSpec { size: 1, ..Default::default() }).unwrap();
        assert!(matches!(
            time_implementation(ImplId::Eq3, &zs, 3, &p),
            Err(BenchError::TimerResolution { .. })
        ));
    }

    #[test]
    fn wrong_parameters_fail_the_spot_check() {
        let crude = faddeeva::fourier_coefficients(6.0, 4).unwrap();
        let zs = generate_inputs(&InputSpec { size: 4096, ..Default::default() }).unwrap();
        assert!(matches!(
            time_implementation(ImplId::Eq3, &zs, 3, &crude),
            Err(BenchError::Correctness { .. })
        ));
    }

    #[test]
    fn csv_round_trip() {
        let records = vec![
            BenchRecord {
                implementation: ImplId::Eq3,
                size: 4,
                repeats: 5,
                median_seconds: 0.1 + 0.2,
                throughput: 1.0 / 3.0,
                exp_fraction: Some(0.123_456_789_012_345_67),
            },
            BenchRecord {
                implementation: ImplId::Weideman(32),
                size: 8,
                repeats: 3,
                median_seconds: 1e-300,
                throughput: 7e300,
                exp_fraction: None,
            },
        ];
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("impl,size,repeats,median_seconds,throughput,exp_fraction\n"));
        assert!(text.contains("3.0000000000000004e-1"));
        assert_eq!(read_csv(&buf[..]).unwrap(), records);
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
