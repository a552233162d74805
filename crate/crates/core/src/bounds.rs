//! Union bounds on block and bit error probability over the BI-AWGN channel.

use std::f64::consts::PI;
use std::fmt::Write as _;

use libm::erfc;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polar::CodeSpec;
use crate::spectra::numeric::{ln_biguint, NeumaierSum};
use crate::spectra::{extract_polar_spectrum, Iowef, Mode, PolarSpectrum};

/// Terms below this are dropped from every sum.
pub const TERM_FLOOR: f64 = 1e-300;

/// Symbol SNR `E_s/N_0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnrPoint {
    pub es_n0_db: f64,
    pub es_n0: f64,
}

impl SnrPoint {
    pub fn from_db(db: f64) -> Result<Self> {
        if !db.is_finite() {
            return Err(Error::invalid(format!("SNR {db} dB is not finite")));
        }
        Ok(SnrPoint {
            es_n0_db: db,
            es_n0: 10f64.powf(db / 10.0),
        })
    }

    pub fn from_linear(es_n0: f64) -> Result<Self> {
        if !(es_n0 > 0.0 && es_n0.is_finite()) {
            return Err(Error::invalid(format!(
                "linear SNR {es_n0} must be positive"
            )));
        }
        Ok(SnrPoint {
            es_n0_db: 10.0 * es_n0.log10(),
            es_n0,
        })
    }
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// `ln Q(x)`, switching to the asymptotic series deep in the tail.
pub fn ln_q(x: f64) -> f64 {
    if x < 35.0 {
        return q_function(x).ln();
    }
    let x2 = x * x;
    let series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2)
        + 105.0 / (x2 * x2 * x2 * x2)
        - 945.0 / (x2 * x2 * x2 * x2 * x2);
    -0.5 * x2 - x.ln() - 0.5 * (2.0 * PI).ln() + series.ln()
}

/// `Q(√(2d·E_s/N_0))`, the probability of mistaking a word for one at distance `d`.
pub fn pairwise_error_prob(d: usize, snr: SnrPoint) -> Result<f64> {
    if d == 0 {
        return Err(Error::invalid("pairwise error probability needs d ≥ 1"));
    }
    Ok(q_function((2.0 * d as f64 * snr.es_n0).sqrt()))
}

fn ln_pairwise(len: usize, snr: SnrPoint) -> Vec<f64> {
    (0..=len)
        .map(|d| {
            if d == 0 {
                f64::NEG_INFINITY
            } else {
                ln_q((2.0 * d as f64 * snr.es_n0).sqrt())
            }
        })
        .collect()
}

fn term(ln: f64) -> f64 {
    let v = ln.exp();
    if v < TERM_FLOOR {
        0.0
    } else {
        v
    }
}

/// `Σ_d A(d)·P(d)` for one channel.
pub fn channel_bler_term(spectrum: &PolarSpectrum, snr: SnrPoint) -> f64 {
    let lp = ln_pairwise(spectrum.len, snr);
    let mut s = NeumaierSum::default();
    for (d, c) in spectrum.nonzero() {
        s.add(term(ln_biguint(c) + lp[d]));
    }
    s.value()
}

/// `Σ_d (d/N)·A(d)·P(d)` for one channel.
pub fn channel_ber_sys_term(spectrum: &PolarSpectrum, snr: SnrPoint) -> f64 {
    let len = spectrum.len as f64;
    let lp = ln_pairwise(spectrum.len, snr);
    let mut s = NeumaierSum::default();
    for (d, c) in spectrum.nonzero() {
        s.add(term((d as f64 / len).ln() + ln_biguint(c) + lp[d]));
    }
    s.value()
}

/// `Σ_d Σ_w (w/(N−i+1))·A(w,d)·P(d)` from a systematic enumerator.
pub fn channel_ber_sys_term_from_iowef(iowef: &Iowef, snr: SnrPoint) -> f64 {
    channel_weighted_term(iowef, snr, iowef.w_max() as f64)
}

/// `Σ_d Σ_w (w/denominator)·A(w,d)·P(d)`, ascending in `d` then `w`.
fn channel_weighted_term(iowef: &Iowef, snr: SnrPoint, denominator: f64) -> f64 {
    let lp = ln_pairwise(iowef.len(), snr);
    let ln_den = denominator.ln();
    let mut s = NeumaierSum::default();
    for d in 1..=iowef.len() {
        for w in 1..=iowef.w_max() {
            let a = iowef.ln_count(w, d);
            if a > f64::NEG_INFINITY {
                s.add(term((w as f64).ln() - ln_den + a + lp[d]));
            }
        }
    }
    s.value()
}

/// Which non-systematic input-weight normalization to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NsysVariant {
    /// Coefficient `w/K`.
    Exact,
    /// Coefficient `w/(N−i+1)`.
    Approx,
}

pub fn channel_ber_nsys_term(iowef: &Iowef, snr: SnrPoint, k: usize, variant: NsysVariant) -> f64 {
    let den = match variant {
        NsysVariant::Exact => k as f64,
        NsysVariant::Approx => iowef.w_max() as f64,
    };
    channel_weighted_term(iowef, snr, den)
}

fn lookup<'a>(iowefs: &'a [Iowef], len: usize, i: usize) -> Result<&'a Iowef> {
    iowefs
        .iter()
        .find(|a| a.index() == i && a.len() == len)
        .ok_or(Error::MissingSpectrum { len, index: i })
}

fn lookup_spectrum<'a>(
    spectra: &'a [PolarSpectrum],
    len: usize,
    i: usize,
) -> Result<&'a PolarSpectrum> {
    spectra
        .iter()
        .find(|s| s.index == i && s.len == len)
        .ok_or(Error::MissingSpectrum { len, index: i })
}

fn sum_over_info_set(code: &CodeSpec, mut f: impl FnMut(usize) -> Result<f64>) -> Result<f64> {
    let mut s = NeumaierSum::default();
    for &i in code.info_set() {
        s.add(f(i)?);
    }
    Ok(s.value())
}

/// Block error union bound.
pub fn bler_union_bound(spectra: &[PolarSpectrum], code: &CodeSpec, snr: SnrPoint) -> Result<f64> {
    sum_over_info_set(code, |i| {
        Ok(channel_bler_term(
            lookup_spectrum(spectra, code.len(), i)?,
            snr,
        ))
    })
}

/// Bit error bound for systematic codes under SC decoding.
pub fn ber_bound_systematic(
    spectra: &[PolarSpectrum],
    code: &CodeSpec,
    snr: SnrPoint,
) -> Result<f64> {
    sum_over_info_set(code, |i| {
        Ok(channel_ber_sys_term(
            lookup_spectrum(spectra, code.len(), i)?,
            snr,
        ))
    })
}

/// Same bound computed from systematic enumerators instead of spectra.
pub fn ber_bound_systematic_from_iowefs(
    iowefs: &[Iowef],
    code: &CodeSpec,
    snr: SnrPoint,
) -> Result<f64> {
    sum_over_info_set(code, |i| {
        let a = lookup(iowefs, code.len(), i)?;
        if a.mode() != Mode::Systematic {
            return Err(Error::invalid("systematic enumerators required"));
        }
        Ok(channel_ber_sys_term_from_iowef(a, snr))
    })
}

/// Bit error bound for non-systematic codes under SC decoding.
pub fn ber_bound_nonsystematic(
    iowefs: &[Iowef],
    code: &CodeSpec,
    snr: SnrPoint,
    variant: NsysVariant,
) -> Result<f64> {
    let k = code.dimension();
    sum_over_info_set(code, |i| {
        let a = lookup(iowefs, code.len(), i)?;
        if a.mode() != Mode::NonSystematic {
            return Err(Error::invalid("non-systematic enumerators required"));
        }
        Ok(channel_ber_nsys_term(a, snr, k, variant))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Bler,
    BerSys,
    BerNsysExact,
    BerNsysApprox,
}

impl BoundKind {
    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::Bler => "bler",
            BoundKind::BerSys => "ber-sys",
            BoundKind::BerNsysExact => "ber-nsys-exact",
            BoundKind::BerNsysApprox => "ber-nsys-approx",
        }
    }

    /// Enumerator convention the bound consumes.
    pub fn mode(self) -> Mode {
        match self {
            BoundKind::Bler | BoundKind::BerSys => Mode::Systematic,
            _ => Mode::NonSystematic,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCurve {
    pub kind: BoundKind,
    pub len: usize,
    pub dimension: usize,
    pub points: Vec<(SnrPoint, f64)>,
}

impl BoundCurve {
    /// Header row plus one row per SNR point.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("snr_db,bound_value,kind,N,K\n");
        for (snr, v) in &self.points {
            writeln!(
                s,
                "{},{:e},{},{},{}",
                snr.es_n0_db,
                v,
                self.kind.tag(),
                self.len,
                self.dimension
            )
            .unwrap();
        }
        s
    }
}

/// Evaluates a bound over an SNR grid. `iowefs` must follow the convention of `kind`.
pub fn bound_curve(
    kind: BoundKind,
    iowefs: &[Iowef],
    code: &CodeSpec,
    grid: &[SnrPoint],
) -> Result<BoundCurve> {
    if grid.is_empty() {
        return Err(Error::invalid("empty SNR grid"));
    }
    let spectra: Vec<PolarSpectrum> = match kind {
        BoundKind::Bler | BoundKind::BerSys => code
            .info_set()
            .iter()
            .map(|&i| extract_polar_spectrum(lookup(iowefs, code.len(), i)?))
            .collect::<Result<_>>()?,
        _ => Vec::new(),
    };
    let points = grid
        .par_iter()
        .map(|&snr| {
            let v = match kind {
                BoundKind::Bler => bler_union_bound(&spectra, code, snr),
                BoundKind::BerSys => ber_bound_systematic(&spectra, code, snr),
                BoundKind::BerNsysExact => {
                    ber_bound_nonsystematic(iowefs, code, snr, NsysVariant::Exact)
                }
                BoundKind::BerNsysApprox => {
                    ber_bound_nonsystematic(iowefs, code, snr, NsysVariant::Approx)
                }
            }?;
            Ok((snr, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundCurve {
        kind,
        len: code.len(),
        dimension: code.dimension(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::oracle::{brute_force_subcode, Budget};

    fn snr(x: f64) -> SnrPoint {
        SnrPoint::from_linear(x).unwrap()
    }

    #[test]
    fn q_values() {
        assert_eq!(q_function(0.0), 0.5);
        // Q(√2) from the complementary error function at 1: erfc(1)/2
        let expect = 0.5 * 0.157_299_207_050_285_13;
        let got = pairwise_error_prob(1, snr(1.0)).unwrap();
        assert!(
            (got - expect).abs() < 1e-12 * expect,
            "{got:e} vs {expect:e}"
        );
        assert!((pairwise_error_prob(1, snr(1.0)).unwrap() - 0.078650).abs() < 5e-7);
        assert!(pairwise_error_prob(0, snr(1.0)).is_err());
        for d in 1..50 {
            assert!(
                pairwise_error_prob(d + 1, snr(0.7)).unwrap()
                    < pairwise_error_prob(d, snr(0.7)).unwrap()
            );
        }
    }

    #[test]
    fn ln_q_is_continuous_at_the_switch() {
        let below = q_function(34.999_999).ln();
        let above = ln_q(35.000_001);
        assert!((below - above).abs() < 1e-4);
        // relative agreement where both forms are valid
        for x in [35.0f64, 36.0, 37.0] {
            let direct = q_function(x).ln();
            assert!(((direct - ln_q(x)) / direct).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn single_all_ones_channel() {
        let len = 16;
        let t = brute_force_subcode(len, len, &Budget::default()).unwrap();
        let sys = vec![extract_polar_spectrum(t.polar(Mode::Systematic)).unwrap()];
        let code = CodeSpec::new(len, vec![len], true).unwrap();
        let s = snr(0.5);
        let q = q_function((2.0 * len as f64 * 0.5f64).sqrt());
        assert!(
            (bler_union_bound(&sys, &code, s).unwrap() - q).abs() < 1e-15 * q.max(1e-300) + 1e-300
        );
        assert!((ber_bound_systematic(&sys, &code, s).unwrap() - q).abs() <= 1e-15 * q);
        let ns = vec![t.polar(Mode::NonSystematic).clone()];
        let exact = ber_bound_nonsystematic(&ns, &code, s, NsysVariant::Exact).unwrap();
        let approx = ber_bound_nonsystematic(&ns, &code, s, NsysVariant::Approx).unwrap();
        assert!((exact - q).abs() <= 1e-15 * q);
        assert!((approx - q).abs() <= 1e-15 * q);
    }

    #[test]
    fn missing_spectrum_is_reported() {
        let code = CodeSpec::new(8, vec![7, 8], false).unwrap();
        let err = bler_union_bound(&[], &code, snr(1.0)).unwrap_err();
        assert!(matches!(err, Error::MissingSpectrum { len: 8, index: 7 }));
    }

    #[test]
    fn csv_layout() {
        let code = CodeSpec::new(8, vec![8], true).unwrap();
        let t = brute_force_subcode(8, 8, &Budget::default()).unwrap();
        let grid = [
            SnrPoint::from_db(0.0).unwrap(),
            SnrPoint::from_db(1.0).unwrap(),
        ];
        let c = bound_curve(BoundKind::Bler, &[t.sys_polar], &code, &grid).unwrap();
        let csv = c.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "snr_db,bound_value,kind,N,K");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,") && lines[1].ends_with(",bler,8,1"));
        assert!(bound_curve(BoundKind::Bler, &[], &code, &[]).is_err());
    }
}
