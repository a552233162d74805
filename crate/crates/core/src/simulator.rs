//! Monte Carlo BER/BLER estimation over the BI-AWGN channel.
//!
//! Every frame draws from its own ChaCha8 stream keyed by
//! `(master_seed, snr_index, frame_index)`: information bits first, then
//! one standard normal per code bit (ziggurat sampler from `rand_distr`).
//! Frames run in fixed-size batches and the stopping rule is checked only
//! at batch boundaries, so tallies do not depend on the worker count.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bounds::SnrPoint;
use crate::decoders::{CheckNode, DecodeResult, LlrVector, ScDecoder, SclDecoder, LLR_CLAMP};
use crate::error::{Error, Result};
use crate::polar::{BitVector, CodeSpec};

/// Frames per work unit handed to one worker.
const CHUNK: u64 = 64;
/// Work units per batch; the stopping rule is evaluated between batches.
const CHUNKS_PER_BATCH: u64 = 16;

/// Name of the noise generator, recorded in output metadata.
pub const NOISE_GENERATOR: &str = "chacha8-stream-per-frame+rand_distr-0.5-ziggurat";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Sc,
    Scl(usize),
}

impl DecoderKind {
    pub fn tag(self) -> &'static str {
        match self {
            DecoderKind::Sc => "sc",
            DecoderKind::Scl(_) => "scl",
        }
    }

    pub fn list_size(self) -> usize {
        match self {
            DecoderKind::Sc => 1,
            DecoderKind::Scl(l) => l,
        }
    }
}

enum Decoder {
    Sc(ScDecoder),
    Scl(SclDecoder),
}

impl Decoder {
    fn new(spec: &CodeSpec, kind: DecoderKind, check: CheckNode) -> Result<Self> {
        Ok(match kind {
            DecoderKind::Sc => Decoder::Sc(ScDecoder::new(spec, check)),
            DecoderKind::Scl(l) => Decoder::Scl(SclDecoder::new(spec, l, check)?),
        })
    }

    fn decode(&mut self, llr: &LlrVector) -> Result<DecodeResult> {
        match self {
            Decoder::Sc(d) => d.decode(llr),
            Decoder::Scl(d) => d.decode(llr),
        }
    }
}

/// Labels copied into result files; they do not affect the run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunLabel {
    pub metric_name: String,
    pub design_snr_db: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub spec: CodeSpec,
    pub decoder: DecoderKind,
    pub check: CheckNode,
    pub snr_grid: Vec<SnrPoint>,
    pub max_frames: u64,
    pub min_bit_errors: u64,
    pub min_frame_errors: u64,
    pub master_seed: u64,
    /// Transmit without noise (LLRs at the clamp value).
    pub noiseless: bool,
    pub label: RunLabel,
}

impl SimConfig {
    pub const DEFAULT_MIN_BIT_ERRORS: u64 = 500;
    pub const DEFAULT_MIN_FRAME_ERRORS: u64 = 100;
    pub const DEFAULT_MAX_FRAMES: u64 = 10_000_000;

    pub fn new(
        spec: CodeSpec,
        decoder: DecoderKind,
        snr_grid: Vec<SnrPoint>,
        master_seed: u64,
    ) -> Self {
        SimConfig {
            spec,
            decoder,
            check: CheckNode::Exact,
            snr_grid,
            max_frames: Self::DEFAULT_MAX_FRAMES,
            min_bit_errors: Self::DEFAULT_MIN_BIT_ERRORS,
            min_frame_errors: Self::DEFAULT_MIN_FRAME_ERRORS,
            master_seed,
            noiseless: false,
            label: RunLabel::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.snr_grid.is_empty() {
            return Err(Error::invalid("empty SNR grid"));
        }
        if self.max_frames == 0 {
            return Err(Error::invalid("max_frames must be at least 1"));
        }
        if self.spec.dimension() == 0 {
            return Err(Error::invalid("code has no information bits"));
        }
        if let DecoderKind::Scl(0) = self.decoder {
            return Err(Error::invalid("list size must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            frames: self.frames + o.frames,
            bit_errors: self.bit_errors + o.bit_errors,
            frame_errors: self.frame_errors + o.frame_errors,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimPoint {
    pub snr: SnrPoint,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub info_bits: usize,
    pub wall_time: Duration,
    pub seed_used: u64,
}

impl SimPoint {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / (self.frames as f64 * self.info_bits as f64)
    }

    pub fn bler(&self) -> f64 {
        self.frame_errors as f64 / self.frames as f64
    }

    pub fn tally(&self) -> Tally {
        Tally {
            frames: self.frames,
            bit_errors: self.bit_errors,
            frame_errors: self.frame_errors,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimResult {
    pub points: Vec<SimPoint>,
}

impl SimResult {
    pub const CSV_HEADER: &'static str =
        "snr_db,frames,bit_errors,frame_errors,ber,bler,decoder,list_size,systematic,metric_name,design_snr_db,seed";

    pub fn to_csv(&self, config: &SimConfig) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        let design = config
            .label
            .design_snr_db
            .map(|d| d.to_string())
            .unwrap_or_default();
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                p.snr.es_n0_db,
                p.frames,
                p.bit_errors,
                p.frame_errors,
                p.ber(),
                p.bler(),
                config.decoder.tag(),
                config.decoder.list_size(),
                config.spec.is_systematic(),
                config.label.metric_name,
                design,
                p.seed_used
            );
        }
        out
    }
}

/// Per-frame random stream.
pub fn frame_rng(master_seed: u64, snr_index: u64, frame_index: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&snr_index.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(seed);
    rng.set_stream(frame_index);
    rng
}

/// Noise variance per real dimension for unit-energy antipodal symbols.
pub fn noise_variance(snr: SnrPoint) -> f64 {
    1.0 / (2.0 * snr.es_n0)
}

/// Transmit `x` as `1 - 2x` plus Gaussian noise and return channel LLRs.
pub fn awgn_llr<R: Rng + ?Sized>(x: &BitVector, snr: SnrPoint, rng: &mut R) -> LlrVector {
    let var = noise_variance(snr);
    let sigma = var.sqrt();
    let values = x
        .as_slice()
        .iter()
        .map(|&bit| {
            let z: f64 = rng.sample(StandardNormal);
            let r = 1.0 - 2.0 * bit as f64 + sigma * z;
            2.0 * r / var
        })
        .collect();
    LlrVector::new(values)
}

fn noiseless_llr(x: &BitVector) -> LlrVector {
    LlrVector::new(
        x.as_slice()
            .iter()
            .map(|&bit| LLR_CLAMP * (1.0 - 2.0 * bit as f64))
            .collect(),
    )
}

fn random_bits<R: RngCore + ?Sized>(k: usize, rng: &mut R) -> BitVector {
    let mut bits = Vec::with_capacity(k);
    while bits.len() < k {
        let word = rng.next_u64();
        let take = (k - bits.len()).min(64);
        bits.extend((0..take).map(|j| ((word >> j) & 1) as u8));
    }
    BitVector::from_bits(&bits).expect("binary")
}

/// Simulate frames `first..first + count` at one SNR point.
pub fn simulate_frames(
    config: &SimConfig,
    snr_index: usize,
    first: u64,
    count: u64,
) -> Result<Tally> {
    let snr = config.snr_grid[snr_index];
    let chunks = count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut decoder = Decoder::new(&config.spec, config.decoder, config.check)?;
            let start = first + c * CHUNK;
            let end = (start + CHUNK).min(first + count);
            let mut tally = Tally::default();
            for frame in start..end {
                let mut rng = frame_rng(config.master_seed, snr_index as u64, frame);
                let b = random_bits(config.spec.dimension(), &mut rng);
                let x = config.spec.encode(&b)?;
                let llr = if config.noiseless {
                    noiseless_llr(&x)
                } else {
                    awgn_llr(&x, snr, &mut rng)
                };
                let decoded = decoder.decode(&llr)?;
                let errors = b.hamming_distance(&decoded.b_hat) as u64;
                tally.frames += 1;
                tally.bit_errors += errors;
                tally.frame_errors += u64::from(errors > 0);
            }
            Ok(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

pub fn run_monte_carlo(config: &SimConfig) -> Result<SimResult> {
    run_monte_carlo_with(config, |_| {})
}

/// As [`run_monte_carlo`], reporting each finished SNR point.
pub fn run_monte_carlo_with(
    config: &SimConfig,
    mut progress: impl FnMut(&SimPoint),
) -> Result<SimResult> {
    config.validate()?;
    let mut points = Vec::with_capacity(config.snr_grid.len());
    for idx in 0..config.snr_grid.len() {
        let point = run_point(config, idx)?;
        progress(&point);
        points.push(point);
    }
    Ok(SimResult { points })
}

/// Runs grid point `snr_index` of `config` until the stopping rule fires.
pub fn run_point(config: &SimConfig, snr_index: usize) -> Result<SimPoint> {
    config.validate()?;
    let snr = *config
        .snr_grid
        .get(snr_index)
        .ok_or_else(|| Error::invalid(format!("SNR index {snr_index} outside the grid")))?;
    let batch = CHUNK * CHUNKS_PER_BATCH;
    let started = Instant::now();
    let mut tally = Tally::default();
    while tally.frames < config.max_frames {
        let count = batch.min(config.max_frames - tally.frames);
        tally = tally.merge(simulate_frames(config, snr_index, tally.frames, count)?);
        if tally.bit_errors >= config.min_bit_errors
            && tally.frame_errors >= config.min_frame_errors
        {
            break;
        }
    }
    Ok(SimPoint {
        snr,
        frames: tally.frames,
        bit_errors: tally.bit_errors,
        frame_errors: tally.frame_errors,
        info_bits: config.spec.dimension(),
        wall_time: started.elapsed(),
        seed_used: config.master_seed,
    })
}

/// Wilson score interval for a binomial proportion at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::q_function;

    fn snr(x: f64) -> SnrPoint {
        SnrPoint::from_linear(x).unwrap()
    }

    #[test]
    fn noiseless_llr_signs() {
        let x = BitVector::from_bits(&[0, 1, 1, 0, 1]).unwrap();
        let l = noiseless_llr(&x);
        for (j, v) in l.as_slice().iter().enumerate() {
            assert_eq!(*v > 0.0, x.get(j) == 0);
        }
    }

    #[test]
    fn llr_mean_is_four_snr() {
        let x = BitVector::zeros(200_000);
        let mut rng = frame_rng(5, 0, 0);
        let l = awgn_llr(&x, snr(0.5), &mut rng);
        let mean = l.as_slice().iter().sum::<f64>() / x.len() as f64;
        // variance of each LLR is 8·Es/N0
        let sd = (8.0 * 0.5 / x.len() as f64).sqrt();
        assert!((mean - 2.0).abs() < 4.0 * sd, "{mean}");
    }

    #[test]
    fn pairwise_error_matches_q() {
        // ML between 0^N and a weight-4 word: error iff the summed LLRs over its support go negative
        let trials = 1_000_000u64;
        let x = BitVector::zeros(4);
        let mut errors = 0u64;
        for t in 0..trials {
            let mut rng = frame_rng(11, 0, t);
            let l = awgn_llr(&x, snr(1.0), &mut rng);
            if l.as_slice().iter().sum::<f64>() < 0.0 {
                errors += 1;
            }
        }
        let p = q_function(8f64.sqrt());
        let sd = (p * (1.0 - p) / trials as f64).sqrt();
        let est = errors as f64 / trials as f64;
        assert!((est - p).abs() < 3.0 * sd, "{est} vs {p}");
    }

    #[test]
    fn zero_noise_has_no_errors() {
        let spec = CodeSpec::new(16, vec![8, 12, 14, 15, 16], true).unwrap();
        let mut config = SimConfig::new(spec, DecoderKind::Scl(4), vec![snr(0.1)], 3);
        config.noiseless = true;
        config.max_frames = 500;
        let r = run_monte_carlo(&config).unwrap();
        assert_eq!(r.points[0].frames, 500);
        assert_eq!(r.points[0].ber(), 0.0);
        assert_eq!(r.points[0].bler(), 0.0);
    }

    #[test]
    fn uncoded_matches_bpsk() {
        let spec = CodeSpec::new(8, (1..=8).collect(), true).unwrap();
        let s = snr(2.0);
        let mut config = SimConfig::new(spec, DecoderKind::Sc, vec![s], 9);
        config.max_frames = 40_000;
        config.min_bit_errors = u64::MAX;
        let r = run_monte_carlo(&config).unwrap();
        let p = q_function((2.0 * s.es_n0).sqrt());
        let n = 8.0 * r.points[0].frames as f64;
        let sd = (p * (1.0 - p) / n).sqrt();
        assert!((r.points[0].ber() - p).abs() < 3.0 * sd);
    }

    #[test]
    fn tallies_ignore_thread_count() {
        let spec = CodeSpec::new(32, (17..=32).collect(), true).unwrap();
        let mut config = SimConfig::new(spec, DecoderKind::Scl(2), vec![snr(0.6), snr(1.0)], 77);
        config.max_frames = 3000;
        config.min_bit_errors = 50;
        config.min_frame_errors = 10;
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_monte_carlo(&config).unwrap())
        };
        let (a, b) = (run(1), run(3));
        assert_eq!(a.to_csv(&config), b.to_csv(&config));
        for p in &a.points {
            assert_eq!(p.frames % (CHUNK * CHUNKS_PER_BATCH), 0);
        }
    }

    #[test]
    fn stops_at_max_frames() {
        let spec = CodeSpec::new(8, vec![4, 6, 7, 8], false).unwrap();
        let mut config = SimConfig::new(spec, DecoderKind::Sc, vec![snr(100.0)], 1);
        config.max_frames = 1500;
        let r = run_monte_carlo(&config).unwrap();
        assert_eq!(r.points[0].frames, 1500);
    }

    #[test]
    fn invalid_configs() {
        let spec = CodeSpec::new(8, vec![8], false).unwrap();
        let mut config = SimConfig::new(spec.clone(), DecoderKind::Sc, vec![], 1);
        assert!(run_monte_carlo(&config).is_err());
        config.snr_grid = vec![snr(1.0)];
        config.max_frames = 0;
        assert!(run_monte_carlo(&config).is_err());
        let config = SimConfig::new(spec, DecoderKind::Scl(0), vec![snr(1.0)], 1);
        assert!(run_monte_carlo(&config).is_err());
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 1000, 2.576);
        assert!(lo < 0.03 && 0.03 < hi);
        assert_eq!(wilson_interval(0, 10, 1.96).0, 0.0);
    }

    #[test]
    fn csv_layout() {
        let spec = CodeSpec::new(8, vec![6, 7, 8], true).unwrap();
        let mut config = SimConfig::new(spec, DecoderKind::Scl(8), vec![snr(1.0)], 4);
        config.max_frames = 10;
        config.label = RunLabel {
            metric_name: "ga".into(),
            design_snr_db: Some(3.5),
        };
        let csv = run_monte_carlo(&config).unwrap().to_csv(&config);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], SimResult::CSV_HEADER);
        assert!(lines[1].ends_with(",scl,8,true,ga,3.5,4"), "{}", lines[1]);
    }
}
