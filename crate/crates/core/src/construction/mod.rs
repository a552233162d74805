//! Reliability metrics and information-set selection.

mod ga;
mod sequence5g;

use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;

pub use ga::{ga_error_proxy, ga_reliability, phi, phi_inverse};
pub use sequence5g::{load_5g_sequence, parse_sequence, shipped_5g_sequence, SEQUENCE_5G_LEN};

use crate::bounds::SnrPoint;
use crate::error::{Error, Result};
use crate::polar::CodeSpec;
use crate::spectra::numeric::ln_biguint;
use crate::spectra::{extract_polar_spectrum, Iowef, Mode, PolarSpectrum};

/// Direction in which a score indicates reliability.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    LowerIsBetter,
    HigherIsBetter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    UbwbSys,
    UbwbNsys,
    SubwbSys,
    SubwbNsys,
    Ga,
    Bec,
    FiveG,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::UbwbSys,
        Metric::UbwbNsys,
        Metric::SubwbSys,
        Metric::SubwbNsys,
        Metric::Ga,
        Metric::Bec,
        Metric::FiveG,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Metric::UbwbSys => "ubwb-sys",
            Metric::UbwbNsys => "ubwb-nsys",
            Metric::SubwbSys => "subwb-sys",
            Metric::SubwbNsys => "subwb-nsys",
            Metric::Ga => "ga",
            Metric::Bec => "bec",
            Metric::FiveG => "5g",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.tag() == tag)
    }

    /// Enumerator convention a spectrum-based metric consumes.
    pub fn spectrum_mode(self) -> Option<Mode> {
        match self {
            Metric::UbwbSys | Metric::SubwbSys => Some(Mode::Systematic),
            Metric::UbwbNsys | Metric::SubwbNsys => Some(Mode::NonSystematic),
            _ => None,
        }
    }

    pub fn uses_design_snr(self) -> bool {
        !matches!(self, Metric::FiveG)
    }
}

/// Per-channel scores, index `i` at `i−1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityVector {
    pub len: usize,
    pub metric_name: String,
    pub design_snr: Option<SnrPoint>,
    pub values: Vec<f64>,
    pub order: Order,
}

impl ReliabilityVector {
    /// Bit-channel indices, most reliable first; equal scores favor the larger index.
    pub fn ranking(&self) -> Result<Vec<usize>> {
        if self.values.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid(format!(
                "{} scores contain NaN",
                self.metric_name
            )));
        }
        let mut idx: Vec<usize> = (1..=self.len).collect();
        idx.sort_by(|&a, &b| {
            let (x, y) = (self.values[a - 1], self.values[b - 1]);
            let by_score = match self.order {
                Order::LowerIsBetter => x.partial_cmp(&y).unwrap(),
                Order::HigherIsBetter => y.partial_cmp(&x).unwrap(),
            };
            by_score.then(b.cmp(&a))
        });
        Ok(idx)
    }

    /// Text export: a header comment, then one index per line, most reliable first.
    pub fn render_sequence(&self, k: Option<usize>) -> Result<String> {
        let ranking = self.ranking()?;
        let take = k.unwrap_or(self.len);
        if take == 0 || take > self.len {
            return Err(Error::invalid(format!(
                "K = {take} outside 1..={}",
                self.len
            )));
        }
        let mut s = String::new();
        writeln!(s, "# metric {}", self.metric_name).unwrap();
        writeln!(s, "# N {}", self.len).unwrap();
        match self.design_snr {
            Some(snr) => writeln!(s, "# design_snr_db {}", snr.es_n0_db).unwrap(),
            None => writeln!(s, "# design_snr_db none").unwrap(),
        }
        for i in &ranking[..take] {
            writeln!(s, "{i}").unwrap();
        }
        Ok(s)
    }
}

/// The `k` most reliable channels as a code.
pub fn select_info_set(scores: &ReliabilityVector, k: usize, systematic: bool) -> Result<CodeSpec> {
    if k == 0 || k > scores.len {
        return Err(Error::invalid(format!(
            "K = {k} outside 1..={}",
            scores.len
        )));
    }
    let mut chosen = scores.ranking()?[..k].to_vec();
    chosen.sort_unstable();
    CodeSpec::new(scores.len, chosen, systematic)
}

fn max_or_err(best: f64, what: &str) -> Result<f64> {
    if best == f64::NEG_INFINITY {
        Err(Error::invalid(format!("{what}: empty spectrum")))
    } else {
        Ok(best)
    }
}

/// `max_d { ln(d/N) + ln A(d) − d·E_s/N_0 }`.
pub fn ubwb_sys(spectrum: &PolarSpectrum, snr: SnrPoint) -> Result<f64> {
    let len = spectrum.len as f64;
    let best = spectrum
        .nonzero()
        .map(|(d, c)| (d as f64 / len).ln() + ln_biguint(c) - d as f64 * snr.es_n0)
        .fold(f64::NEG_INFINITY, f64::max);
    max_or_err(best, "UBWB")
}

/// `max_{w,d} { ln(w/(N−i+1)) + ln A(w,d) − d·E_s/N_0 }`.
pub fn ubwb_nsys(iowef: &Iowef, snr: SnrPoint) -> Result<f64> {
    let span = iowef.w_max() as f64;
    let best = iowef
        .ln_entries()
        .into_iter()
        .filter(|&(w, _, _)| w > 0)
        .map(|(w, d, a)| (w as f64 / span).ln() + a - d as f64 * snr.es_n0)
        .fold(f64::NEG_INFINITY, f64::max);
    max_or_err(best, "UBWB")
}

/// Systematic UBWB evaluated on an input-output enumerator instead of the spectrum.
pub fn ubwb_sys_from_iowef(iowef: &Iowef, snr: SnrPoint) -> Result<f64> {
    ubwb_nsys(iowef, snr)
}

/// `ln(d_min/N) + ln A(d_min) − d_min·E_s/N_0`.
pub fn subwb_sys(spectrum: &PolarSpectrum, snr: SnrPoint) -> Result<f64> {
    let d = spectrum
        .d_min()
        .ok_or_else(|| Error::invalid("SUBWB: empty spectrum"))?;
    Ok(
        (d as f64 / spectrum.len as f64).ln() + ln_biguint(&spectrum.counts[d])
            - d as f64 * snr.es_n0,
    )
}

/// `max_w { ln(w/(N−i+1)) + ln A(w, d_min) − d_min·E_s/N_0 }`.
pub fn subwb_nsys(iowef: &Iowef, snr: SnrPoint) -> Result<f64> {
    let entries = iowef.ln_entries();
    let d_min = entries
        .iter()
        .map(|&(_, d, _)| d)
        .min()
        .ok_or_else(|| Error::invalid("SUBWB: empty spectrum"))?;
    let span = iowef.w_max() as f64;
    let best = entries
        .into_iter()
        .filter(|&(w, d, _)| d == d_min && w > 0)
        .map(|(w, d, a)| (w as f64 / span).ln() + a - d as f64 * snr.es_n0)
        .fold(f64::NEG_INFINITY, f64::max);
    max_or_err(best, "SUBWB")
}

/// UBWB/SUBWB scores for every channel. `iowefs` follow the metric's convention.
pub fn spectral_reliability(
    metric: Metric,
    iowefs: &[Iowef],
    snr: SnrPoint,
) -> Result<ReliabilityVector> {
    let mode = metric
        .spectrum_mode()
        .ok_or_else(|| Error::invalid(format!("{} is not a spectral metric", metric.tag())))?;
    let len = iowefs.first().map(Iowef::len).unwrap_or(0);
    if iowefs.len() != len || iowefs.iter().enumerate().any(|(k, a)| a.index() != k + 1) {
        return Err(Error::invalid(
            "enumerators for every channel 1..=N are required",
        ));
    }
    if iowefs.iter().any(|a| a.mode() != mode) {
        return Err(Error::invalid(format!(
            "{} needs {mode} enumerators",
            metric.tag()
        )));
    }
    let values = iowefs
        .par_iter()
        .map(|a| match metric {
            Metric::UbwbSys => ubwb_sys(&extract_polar_spectrum(a)?, snr),
            Metric::SubwbSys => subwb_sys(&extract_polar_spectrum(a)?, snr),
            Metric::UbwbNsys => ubwb_nsys(a, snr),
            Metric::SubwbNsys => subwb_nsys(a, snr),
            _ => unreachable!(),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ReliabilityVector {
        len,
        metric_name: metric.tag().to_string(),
        design_snr: Some(snr),
        values,
        order: Order::LowerIsBetter,
    })
}

/// Bhattacharyya parameters of a binary erasure channel after polarization.
pub fn bec_bhattacharyya(len: usize, erasure_prob: f64) -> Result<ReliabilityVector> {
    crate::polar::log2_exact(len)?;
    if !(0.0..=1.0).contains(&erasure_prob) {
        return Err(Error::invalid(format!(
            "erasure probability {erasure_prob} outside [0, 1]"
        )));
    }
    let mut z = vec![erasure_prob];
    while z.len() < len {
        let mut next = Vec::with_capacity(2 * z.len());
        for &x in &z {
            next.push(2.0 * x - x * x);
            next.push(x * x);
        }
        z = next;
    }
    Ok(ReliabilityVector {
        len,
        metric_name: Metric::Bec.tag().to_string(),
        design_snr: None,
        values: z,
        order: Order::LowerIsBetter,
    })
}

/// Orders two reliability vectors' rankings agree on: `Less` if `a` ranks above `b`.
pub fn compare_channels(v: &ReliabilityVector, a: usize, b: usize) -> Ordering {
    let (x, y) = (v.values[a - 1], v.values[b - 1]);
    let c = match v.order {
        Order::LowerIsBetter => x.partial_cmp(&y),
        Order::HigherIsBetter => y.partial_cmp(&x),
    };
    c.unwrap_or(Ordering::Equal).then(b.cmp(&a))
}
