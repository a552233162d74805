//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 consistency-check
//! failure, 4 enumeration budget refusal.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{bound_curve, BoundKind, SnrPoint};
use crate::construction::{
    bec_bhattacharyya, ga_reliability, parse_sequence, select_info_set, shipped_5g_sequence,
    spectral_reliability, Metric, ReliabilityVector,
};
use crate::decoders::CheckNode;
use crate::error::{Error, Result};
use crate::polar::{log2_exact, CodeSpec};
use crate::simulator::{run_point, DecoderKind, RunLabel, SimConfig, SimResult, NOISE_GENERATOR};
use crate::spectra::cache::{cache_path, SpectrumFile};
use crate::spectra::{
    brute_force_subcode, polar_iowef_nonsystematic_with, polar_iowef_systematic_with, Budget,
    Iowef, Mode, NonsystematicLevel, OverlapRule, SystematicLevel,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_ENV: &str = "SPECTRUM_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "polarbound",
    version,
    about = "Weight spectra, error bounds, construction and simulation for polar codes"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Leave the timestamp out of output headers.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Spectrum cache directory (else $SPECTRUM_CACHE_DIR, else ./cache).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute and cache per-channel enumerators.
    Spectrum(SpectrumArgs),
    /// Rank bit-channels and write an information-set sequence.
    Construct(ConstructArgs),
    /// Evaluate an error-probability bound over an SNR range.
    Bound(BoundArgs),
    /// Monte Carlo BER/BLER over the BI-AWGN channel.
    Simulate(SimulateArgs),
    /// Enumerate one bit-channel exhaustively.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sys,
    Nsys,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sys => Mode::Systematic,
            ModeArg::Nsys => Mode::NonSystematic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Cancelling,
    Literal,
}

impl From<RuleArg> for OverlapRule {
    fn from(r: RuleArg) -> OverlapRule {
        match r {
            RuleArg::Cancelling => OverlapRule::Cancelling,
            RuleArg::Literal => OverlapRule::Literal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    #[value(name = "ubwb-sys")]
    UbwbSys,
    #[value(name = "ubwb-nsys")]
    UbwbNsys,
    #[value(name = "subwb-sys")]
    SubwbSys,
    #[value(name = "subwb-nsys")]
    SubwbNsys,
    Ga,
    Bec,
    #[value(name = "5g")]
    FiveG,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::UbwbSys => Metric::UbwbSys,
            MetricArg::UbwbNsys => Metric::UbwbNsys,
            MetricArg::SubwbSys => Metric::SubwbSys,
            MetricArg::SubwbNsys => Metric::SubwbNsys,
            MetricArg::Ga => Metric::Ga,
            MetricArg::Bec => Metric::Bec,
            MetricArg::FiveG => Metric::FiveG,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Bler,
    #[value(name = "ber-sys")]
    BerSys,
    #[value(name = "ber-nsys-exact")]
    BerNsysExact,
    #[value(name = "ber-nsys-approx")]
    BerNsysApprox,
}

impl From<KindArg> for BoundKind {
    fn from(k: KindArg) -> BoundKind {
        match k {
            KindArg::Bler => BoundKind::Bler,
            KindArg::BerSys => BoundKind::BerSys,
            KindArg::BerNsysExact => BoundKind::BerNsysExact,
            KindArg::BerNsysApprox => BoundKind::BerNsysApprox,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecoderArg {
    Sc,
    Scl,
}

fn parse_base(s: &str) -> std::result::Result<usize, String> {
    match s {
        "8" => Ok(8),
        "16" => Ok(16),
        _ => Err(format!("base must be 8 or 16, got {s}")),
    }
}

/// Where the spectra come from.
#[derive(Args, Debug, Clone)]
pub struct SpectrumSource {
    /// Codelength at which the recursion starts from brute force.
    #[arg(long, default_value_t = 8, value_parser = parse_base)]
    pub base: usize,
    /// Weight assignment in the non-systematic doubling.
    #[arg(long, value_enum, default_value_t = RuleArg::Cancelling)]
    pub rule: RuleArg,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub source: SpectrumSource,
    /// Also write the spectrum here, with a metadata header.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    #[arg(long, allow_hyphen_values = true)]
    pub design_snr_db: Option<f64>,
    #[command(flatten)]
    pub source: SpectrumSource,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: usize,
    /// Sequence file; every listed index (or the first --k) is an information bit.
    #[arg(long)]
    pub infoset: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Inclusive range a:b:step in dB, or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub snr: String,
    #[command(flatten)]
    pub source: SpectrumSource,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    /// Sequence file; without it the set comes from --metric.
    #[arg(long)]
    pub infoset: Option<PathBuf>,
    /// Construction used when no --infoset is given.
    #[arg(long, value_enum, default_value_t = MetricArg::FiveG)]
    pub metric: MetricArg,
    /// Design SNR for --metric; a GA set without it is rebuilt at every simulated SNR.
    #[arg(long, allow_hyphen_values = true)]
    pub design_snr_db: Option<f64>,
    #[arg(long, value_enum, default_value_t = DecoderArg::Sc)]
    pub decoder: DecoderArg,
    #[arg(long, default_value_t = 32)]
    pub list: usize,
    #[arg(long)]
    pub systematic: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub snr: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = SimConfig::DEFAULT_MAX_FRAMES)]
    pub max_frames: u64,
    #[arg(long, default_value_t = SimConfig::DEFAULT_MIN_BIT_ERRORS)]
    pub min_bit_errors: u64,
    #[arg(long, default_value_t = SimConfig::DEFAULT_MIN_FRAME_ERRORS)]
    pub min_frame_errors: u64,
    /// Min-sum check nodes instead of the exact rule.
    #[arg(long)]
    pub min_sum: bool,
    /// Transmit without noise.
    #[arg(long)]
    pub noiseless: bool,
    #[command(flatten)]
    pub source: SpectrumSource,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub i: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Sys)]
    pub mode: ModeArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Context {
    command_line: String,
    timestamp: bool,
    cache_dir: PathBuf,
}

impl Context {
    fn header(&self, extra: &[(&str, String)]) -> String {
        let mut s = String::new();
        writeln!(s, "# polarbound {VERSION}").unwrap();
        writeln!(s, "# command: {}", self.command_line).unwrap();
        if self.timestamp {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            writeln!(s, "# timestamp_unix: {secs}").unwrap();
        }
        for (k, v) in extra {
            writeln!(s, "# {k}: {v}").unwrap();
        }
        s
    }
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::Parse { .. } => 2,
        Error::Consistency(_) | Error::MissingSpectrum { .. } => 3,
        Error::Budget(_) => 4,
        Error::Io { .. } => 1,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli, recorded_command_line(&args)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// The command line without the program path and without `--threads`.
fn recorded_command_line(args: &[OsString]) -> String {
    let mut out = vec!["polarbound".to_string()];
    let mut skip = false;
    for a in args.iter().skip(1) {
        let a = a.to_string_lossy();
        if skip {
            skip = false;
            continue;
        }
        if a == "--threads" {
            skip = true;
            continue;
        }
        if a.starts_with("--threads=") {
            continue;
        }
        out.push(a.into_owned());
    }
    out.join(" ")
}

pub fn execute(cli: Cli, command_line: String) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::invalid("--threads must be at least 1"));
        }
        // a pool built earlier in the same process stays in effect
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let cache_dir = cli
        .cache_dir
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("cache"));
    let ctx = Context {
        command_line,
        timestamp: !cli.no_timestamp,
        cache_dir,
    };
    match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&ctx, a),
        Command::Construct(a) => cmd_construct(&ctx, a),
        Command::Bound(a) => cmd_bound(&ctx, a),
        Command::Simulate(a) => cmd_simulate(&ctx, a),
        Command::Oracle(a) => cmd_oracle(&ctx, a),
    }
}

/// Parses `a:b:step` (inclusive, dB) or a single value.
pub fn parse_snr_range(text: &str) -> Result<Vec<SnrPoint>> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::invalid(format!("bad SNR value '{s}'")))
    };
    let values = match parts.as_slice() {
        [a] => vec![num(a)?],
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if step <= 0.0 {
                return Err(Error::invalid("SNR step must be positive"));
            }
            if b < a {
                return Err(Error::invalid(format!("empty SNR range {text}")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            if count > 100_000 {
                return Err(Error::invalid("SNR range has too many points"));
            }
            (0..count)
                .map(|j| ((a + j as f64 * step) * 1e9).round() / 1e9)
                .collect()
        }
        _ => {
            return Err(Error::invalid(format!(
                "SNR range '{text}' is not a:b:step"
            )))
        }
    };
    values.into_iter().map(SnrPoint::from_db).collect()
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn check_len(n: usize) -> Result<()> {
    log2_exact(n)?;
    if n < 2 {
        return Err(Error::invalid("codelength must be at least 2"));
    }
    Ok(())
}

/// Loads spectra from the cache or computes them, caching every level on the way.
fn load_or_compute(
    ctx: &Context,
    n: usize,
    mode: Mode,
    source: &SpectrumSource,
) -> Result<SpectrumFile> {
    check_len(n)?;
    let base = source.base.min(n);
    let rule: OverlapRule = source.rule.into();
    let path = cache_path(&ctx.cache_dir, n, mode, base, rule);
    if path.exists() {
        match SpectrumFile::read(&path) {
            Ok(f) if f.len == n && f.mode == mode => {
                eprintln!("cache hit: {}", path.display());
                return Ok(f);
            }
            Ok(_) => eprintln!(
                "warning: {} describes another code; recomputing",
                path.display()
            ),
            Err(e @ Error::Parse { .. }) => eprintln!("warning: {e}; recomputing"),
            Err(e) => return Err(e),
        }
    }
    let store = |f: SpectrumFile| -> Result<()> {
        let p = cache_path(&ctx.cache_dir, f.len, f.mode, base, rule);
        f.write(&p)?;
        eprintln!("cached N = {} in {}", f.len, p.display());
        Ok(())
    };
    Ok(match mode {
        Mode::Systematic => {
            let level = if n <= base {
                let l = SystematicLevel::base(n)?;
                l.check_invariants()?;
                store(SpectrumFile::from_systematic(&l))?;
                l
            } else {
                polar_iowef_systematic_with(n, base, |level| {
                    level.check_invariants()?;
                    store(SpectrumFile::from_systematic(level))
                })?
            };
            SpectrumFile::from_systematic(&level)
        }
        Mode::NonSystematic => {
            let level = if n <= base {
                let l = NonsystematicLevel::base(n)?;
                store(SpectrumFile::from_nonsystematic(&l))?;
                l
            } else {
                polar_iowef_nonsystematic_with(n, base, rule, |level| {
                    level.check_max_input_row()?;
                    store(SpectrumFile::from_nonsystematic(level))
                })?
            };
            SpectrumFile::from_nonsystematic(&level)
        }
    })
}

/// Compares recursion output against exhaustive enumeration where both are exact.
fn verify_against_oracle(file: &SpectrumFile) -> Result<usize> {
    let budget = Budget::default();
    let mut checked = 0;
    for a in &file.iowefs {
        if !a.is_exact() {
            continue;
        }
        let t = brute_force_subcode(file.len, a.index(), &budget)?;
        if t.polar(file.mode) != a {
            return Err(Error::consistency(format!(
                "bit-channel {} at N = {} disagrees with enumeration",
                a.index(),
                file.len
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

fn cmd_spectrum(ctx: &Context, a: SpectrumArgs) -> Result<()> {
    let mode: Mode = a.mode.into();
    let file = load_or_compute(ctx, a.n, mode, &a.source)?;
    if a.n <= 16 {
        let checked = verify_against_oracle(&file)?;
        println!("verified {checked} exact channels against enumeration");
    }
    let exact = file.iowefs.iter().filter(|x| x.is_exact()).count();
    println!(
        "N = {} mode = {} base = {}: {} channels ({} exact)",
        file.len,
        mode,
        file.base_len,
        file.iowefs.len(),
        exact
    );
    if let Some(out) = &a.out {
        let mut text = ctx.header(&[]);
        text.push_str(&file.render());
        write_file(out, &text)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn reliability(
    ctx: &Context,
    n: usize,
    metric: Metric,
    design: Option<SnrPoint>,
    source: &SpectrumSource,
) -> Result<ReliabilityVector> {
    if metric == Metric::FiveG {
        if design.is_some() {
            eprintln!("warning: --metric 5g ignores --design-snr-db");
        }
        return shipped_5g_sequence(n);
    }
    let snr = design.ok_or_else(|| {
        Error::invalid(format!("--metric {} needs --design-snr-db", metric.tag()))
    })?;
    match metric {
        Metric::Ga => ga_reliability(n, snr),
        Metric::Bec => {
            let mut v = bec_bhattacharyya(n, (-snr.es_n0).exp())?;
            v.design_snr = Some(snr);
            Ok(v)
        }
        _ => {
            let mode = metric.spectrum_mode().expect("spectral metric");
            let file = load_or_compute(ctx, n, mode, source)?;
            spectral_reliability(metric, &file.iowefs, snr)
        }
    }
}

fn design_point(db: Option<f64>) -> Result<Option<SnrPoint>> {
    db.map(SnrPoint::from_db).transpose()
}

fn cmd_construct(ctx: &Context, a: ConstructArgs) -> Result<()> {
    check_len(a.n)?;
    if a.k == 0 || a.k > a.n {
        return Err(Error::invalid(format!("--k {} outside 1..={}", a.k, a.n)));
    }
    let metric: Metric = a.metric.into();
    let scores = reliability(ctx, a.n, metric, design_point(a.design_snr_db)?, &a.source)?;
    let mut text = ctx.header(&[]);
    text.push_str(&scores.render_sequence(Some(a.k))?);
    let out = a.out.unwrap_or_else(|| {
        PathBuf::from(format!("sequence_{}_N{}_K{}.txt", metric.tag(), a.n, a.k))
    });
    write_file(&out, &text)?;
    let spec = select_info_set(&scores, a.k, false)?;
    println!(
        "{} N = {} K = {}: information set {:?}",
        metric.tag(),
        a.n,
        a.k,
        spec.info_set()
    );
    println!("wrote {}", out.display());
    Ok(())
}

/// Reads an information set from a sequence file, keeping the first `k` entries if given.
fn read_infoset(path: &Path, n: usize, k: Option<usize>, systematic: bool) -> Result<CodeSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut seq = parse_sequence(&text, path)?;
    if let Some(k) = k {
        if k == 0 || k > seq.len() {
            return Err(Error::invalid(format!(
                "--k {k} but {} lists {} indices",
                path.display(),
                seq.len()
            )));
        }
        seq.truncate(k);
    }
    if seq.is_empty() {
        return Err(Error::parse(path, "no indices"));
    }
    CodeSpec::from_unsorted(n, seq, systematic)
}

fn cmd_bound(ctx: &Context, a: BoundArgs) -> Result<()> {
    check_len(a.n)?;
    let grid = parse_snr_range(&a.snr)?;
    let kind: BoundKind = a.kind.into();
    let spec = read_infoset(&a.infoset, a.n, a.k, kind == BoundKind::BerSys)?;
    let file = load_or_compute(ctx, a.n, kind.mode(), &a.source)?;
    let curve = bound_curve(kind, &file.iowefs, &spec, &grid)?;
    let mut text = ctx.header(&[
        ("infoset", a.infoset.display().to_string()),
        ("spectrum_base_N", file.base_len.to_string()),
    ]);
    text.push_str(&curve.to_csv());
    let out = a.out.unwrap_or_else(|| {
        PathBuf::from(format!(
            "bound_{}_N{}_K{}.csv",
            kind.tag(),
            a.n,
            spec.dimension()
        ))
    });
    write_file(&out, &text)?;
    for (snr, v) in &curve.points {
        println!("{:>8.3} dB  {:.4e}", snr.es_n0_db, v);
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_simulate(ctx: &Context, a: SimulateArgs) -> Result<()> {
    check_len(a.n)?;
    let grid = parse_snr_range(&a.snr)?;
    let decoder = match a.decoder {
        DecoderArg::Sc => DecoderKind::Sc,
        DecoderArg::Scl => {
            if a.list == 0 {
                return Err(Error::invalid("--list must be at least 1"));
            }
            DecoderKind::Scl(a.list)
        }
    };
    let metric: Metric = a.metric.into();
    let design = design_point(a.design_snr_db)?;
    // GA without a design SNR is rebuilt at each simulated SNR
    let per_point = a.infoset.is_none() && metric == Metric::Ga && design.is_none();
    let (spec, label) = match &a.infoset {
        Some(path) => (
            read_infoset(path, a.n, a.k, a.systematic)?,
            RunLabel {
                metric_name: format!("file:{}", path.display()),
                design_snr_db: None,
            },
        ),
        None => {
            let k =
                a.k.ok_or_else(|| Error::invalid("--k is required without --infoset"))?;
            let scores = if per_point {
                ga_reliability(a.n, grid[0])?
            } else {
                reliability(ctx, a.n, metric, design, &a.source)?
            };
            let name = if per_point {
                "ga-matched".to_string()
            } else {
                metric.tag().to_string()
            };
            (
                select_info_set(&scores, k, a.systematic)?,
                RunLabel {
                    metric_name: name,
                    design_snr_db: if per_point {
                        None
                    } else {
                        a.design_snr_db.filter(|_| metric.uses_design_snr())
                    },
                },
            )
        }
    };
    let config = SimConfig {
        spec,
        decoder,
        check: if a.min_sum {
            CheckNode::MinSum
        } else {
            CheckNode::Exact
        },
        snr_grid: grid,
        max_frames: a.max_frames,
        min_bit_errors: a.min_bit_errors,
        min_frame_errors: a.min_frame_errors,
        master_seed: a.seed,
        noiseless: a.noiseless,
        label,
    };
    config.validate()?;
    let mut points = Vec::with_capacity(config.snr_grid.len());
    for idx in 0..config.snr_grid.len() {
        let point = if per_point {
            let k = config.spec.dimension();
            let scores = ga_reliability(a.n, config.snr_grid[idx])?;
            let mut c = config.clone();
            c.spec = select_info_set(&scores, k, a.systematic)?;
            run_point(&c, idx)?
        } else {
            run_point(&config, idx)?
        };
        println!(
            "{:>8.3} dB  frames {:>9}  bit errors {:>7}  frame errors {:>6}  BER {:.4e}  BLER {:.4e}",
            point.snr.es_n0_db,
            point.frames,
            point.bit_errors,
            point.frame_errors,
            point.ber(),
            point.bler()
        );
        points.push(point);
    }
    let result = SimResult { points };
    let mut text = ctx.header(&[
        ("noise", NOISE_GENERATOR.to_string()),
        ("check_node", config.check.tag().to_string()),
        ("info_set", format!("{:?}", config.spec.info_set())),
    ]);
    text.push_str(&result.to_csv(&config));
    let out = a.out.unwrap_or_else(|| {
        PathBuf::from(format!(
            "sim_{}_N{}_K{}.csv",
            decoder.tag(),
            a.n,
            config.spec.dimension()
        ))
    });
    write_file(&out, &text)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn render_iowef(a: &Iowef) -> String {
    let mut s = String::from("w,d,count\n");
    for (w, d, c) in a.exact_entries().expect("enumeration is exact") {
        writeln!(s, "{w},{d},{c}").unwrap();
    }
    s
}

fn cmd_oracle(ctx: &Context, a: OracleArgs) -> Result<()> {
    check_len(a.n)?;
    let mode: Mode = a.mode.into();
    let t = brute_force_subcode(a.n, a.i, &Budget::default())?;
    let polar = t.polar(mode);
    let mut text = ctx.header(&[]);
    text.push_str(&render_iowef(polar));
    let out = a
        .out
        .unwrap_or_else(|| PathBuf::from(format!("oracle_{}_N{}_i{}.csv", mode, a.n, a.i)));
    write_file(&out, &text)?;
    println!(
        "bit-channel {} at N = {} ({mode}): {} nonzero (w, d) entries",
        a.i,
        a.n,
        polar.exact_entries()?.len()
    );
    println!("wrote {}", out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_ranges() {
        let g = parse_snr_range("1:2:0.25").unwrap();
        let db: Vec<f64> = g.iter().map(|p| p.es_n0_db).collect();
        assert_eq!(db, vec![1.0, 1.25, 1.5, 1.75, 2.0]);
        assert_eq!(parse_snr_range("0:1:0.1").unwrap().len(), 11);
        assert_eq!(parse_snr_range("-2").unwrap()[0].es_n0_db, -2.0);
        assert!(parse_snr_range("3:1:0.5").is_err());
        assert!(parse_snr_range("1:3:0").is_err());
        assert!(parse_snr_range("1:3").is_err());
        assert!(parse_snr_range("x").is_err());
    }

    #[test]
    fn threads_left_out_of_recorded_command() {
        let args: Vec<OsString> = [
            "/usr/bin/polarbound",
            "--threads",
            "4",
            "simulate",
            "--threads=2",
            "--n",
            "8",
        ]
        .iter()
        .map(OsString::from)
        .collect();
        assert_eq!(recorded_command_line(&args), "polarbound simulate --n 8");
    }

    #[test]
    fn error_categories() {
        assert_eq!(exit_code(&Error::invalid("x")), 2);
        assert_eq!(exit_code(&Error::consistency("x")), 3);
        assert_eq!(exit_code(&Error::Budget("x".into())), 4);
    }
}
