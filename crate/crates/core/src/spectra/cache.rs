//! Versioned text files holding per-channel enumerators.
//!
//! ```text
//! # polarbound spectrum cache
//! format_version 1
//! N 16
//! mode nsys
//! base_N 8
//! rule cancelling
//! channel 1 approx
//! 1 1 2.0794415416798357
//! ...
//! channel 16 exact
//! 1 16 1
//! end
//! ```
//!
//! Only nonzero entries are listed. Exact counts are decimal integers and
//! approximate ones are natural logs printed in shortest round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use super::nonsystematic::{NonsystematicLevel, OverlapRule};
use super::systematic::SystematicLevel;
use super::{Counts, Iowef, Mode};
use crate::error::{Error, Result};
use crate::polar::log2_exact;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumFile {
    pub len: usize,
    pub mode: Mode,
    pub base_len: usize,
    /// Present for non-systematic files.
    pub rule: Option<OverlapRule>,
    pub iowefs: Vec<Iowef>,
}

impl SpectrumFile {
    pub fn from_systematic(level: &SystematicLevel) -> Self {
        SpectrumFile {
            len: level.len,
            mode: Mode::Systematic,
            base_len: level.base_len,
            rule: None,
            iowefs: level.iowefs.clone(),
        }
    }

    pub fn from_nonsystematic(level: &NonsystematicLevel) -> Self {
        SpectrumFile {
            len: level.len,
            mode: Mode::NonSystematic,
            base_len: level.base_len,
            rule: Some(level.rule),
            iowefs: level.iowefs.clone(),
        }
    }

    pub fn iowef(&self, i: usize) -> &Iowef {
        &self.iowefs[i - 1]
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str("# polarbound spectrum cache\n");
        writeln!(s, "format_version {FORMAT_VERSION}").unwrap();
        writeln!(s, "N {}", self.len).unwrap();
        writeln!(s, "mode {}", self.mode).unwrap();
        writeln!(s, "base_N {}", self.base_len).unwrap();
        if let Some(rule) = self.rule {
            writeln!(s, "rule {}", rule.tag()).unwrap();
        }
        for a in &self.iowefs {
            if a.is_exact() {
                writeln!(s, "channel {} exact", a.index()).unwrap();
                for (w, d, c) in a.exact_entries().unwrap() {
                    writeln!(s, "{w} {d} {c}").unwrap();
                }
            } else {
                writeln!(s, "channel {} approx", a.index()).unwrap();
                for (w, d, x) in a.ln_entries() {
                    writeln!(s, "{w} {d} {x}").unwrap();
                }
            }
        }
        s.push_str("end\n");
        s
    }

    pub fn parse(text: &str, path: &Path) -> Result<SpectrumFile> {
        let bad = |reason: String| Error::parse(path, reason);
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let mut header = |key: &str| -> Result<String> {
            let (n, line) = lines
                .next()
                .ok_or_else(|| bad(format!("missing header field {key}")))?;
            match line.split_once(' ') {
                Some((k, v)) if k == key => Ok(v.trim().to_string()),
                _ => Err(bad(format!("line {n}: expected {key}"))),
            }
        };
        let version: u32 = header("format_version")?
            .parse()
            .map_err(|_| bad("unreadable format_version".into()))?;
        if version != FORMAT_VERSION {
            return Err(bad(format!(
                "format_version {version} is not the supported version {FORMAT_VERSION}"
            )));
        }
        let len: usize = header("N")?
            .parse()
            .map_err(|_| bad("unreadable N".into()))?;
        log2_exact(len).map_err(|e| bad(e.to_string()))?;
        let mode_tag = header("mode")?;
        let mode =
            Mode::from_tag(&mode_tag).ok_or_else(|| bad(format!("unknown mode {mode_tag}")))?;
        let base_len: usize = header("base_N")?
            .parse()
            .map_err(|_| bad("unreadable base_N".into()))?;
        let rule = if mode == Mode::NonSystematic {
            let tag = header("rule")?;
            Some(OverlapRule::from_tag(&tag).ok_or_else(|| bad(format!("unknown rule {tag}")))?)
        } else {
            None
        };

        let mut iowefs: Vec<Iowef> = Vec::with_capacity(len);
        let mut current: Option<(usize, Counts)> = None;
        let mut ended = false;
        let flush = |cur: Option<(usize, Counts)>, out: &mut Vec<Iowef>| -> Result<()> {
            if let Some((i, counts)) = cur {
                out.push(Iowef::from_counts(len, i, mode, counts)?);
            }
            Ok(())
        };
        for (n, line) in lines {
            if ended {
                return Err(bad(format!("line {n}: content after end")));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["end"] => {
                    flush(current.take(), &mut iowefs)?;
                    ended = true;
                }
                ["channel", i, kind] => {
                    flush(current.take(), &mut iowefs)?;
                    let i: usize = i
                        .parse()
                        .map_err(|_| bad(format!("line {n}: bad channel")))?;
                    if i != iowefs.len() + 1 || i > len {
                        return Err(bad(format!("line {n}: channel {i} out of order")));
                    }
                    let size = Iowef::w_len(len, i) * (len + 1);
                    let counts = match *kind {
                        "exact" => Counts::Exact(vec![BigUint::default(); size]),
                        "approx" => Counts::Approx(vec![f64::NEG_INFINITY; size]),
                        other => return Err(bad(format!("line {n}: unknown kind {other}"))),
                    };
                    current = Some((i, counts));
                }
                [w, d, value] => {
                    let (i, counts) = current
                        .as_mut()
                        .ok_or_else(|| bad(format!("line {n}: entry outside a channel")))?;
                    let w: usize = w.parse().map_err(|_| bad(format!("line {n}: bad w")))?;
                    let d: usize = d.parse().map_err(|_| bad(format!("line {n}: bad d")))?;
                    if w > len - *i + 1 || d > len {
                        return Err(bad(format!("line {n}: (w, d) out of range")));
                    }
                    let cell = w * (len + 1) + d;
                    match counts {
                        Counts::Exact(v) => {
                            v[cell] = value
                                .parse()
                                .map_err(|_| bad(format!("line {n}: bad count")))?;
                        }
                        Counts::Approx(v) => {
                            v[cell] = value
                                .parse()
                                .map_err(|_| bad(format!("line {n}: bad log count")))?;
                        }
                        Counts::Rational(_) => unreachable!(),
                    }
                }
                _ => return Err(bad(format!("line {n}: unrecognized content"))),
            }
        }
        if !ended {
            return Err(bad("missing end marker".into()));
        }
        if iowefs.len() != len {
            return Err(bad(format!(
                "{} channels listed, expected {len}",
                iowefs.len()
            )));
        }
        Ok(SpectrumFile {
            len,
            mode,
            base_len,
            rule,
            iowefs,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
        }
        fs::write(path, self.render()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<SpectrumFile> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

/// Conventional file name inside a cache directory.
pub fn cache_path(
    dir: &Path,
    len: usize,
    mode: Mode,
    base_len: usize,
    rule: OverlapRule,
) -> PathBuf {
    let name = match mode {
        Mode::Systematic => format!("sys_N{len}_base{base_len}.spec"),
        Mode::NonSystematic => format!("nsys_N{len}_base{base_len}_{}.spec", rule.tag()),
    };
    dir.join(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::nonsystematic::nonsystematic_doubling;

    #[test]
    fn exact_round_trip() {
        let level = SystematicLevel::base(16).unwrap();
        let f = SpectrumFile::from_systematic(&level);
        let text = f.render();
        let back = SpectrumFile::parse(&text, Path::new("mem")).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.render(), text);
    }

    #[test]
    fn approximate_round_trip_is_bit_exact() {
        let l = nonsystematic_doubling(
            &NonsystematicLevel::base(8).unwrap(),
            OverlapRule::Cancelling,
        )
        .unwrap();
        let f = SpectrumFile::from_nonsystematic(&l);
        let back = SpectrumFile::parse(&f.render(), Path::new("mem")).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_other_versions_and_truncation() {
        let f = SpectrumFile::from_systematic(&SystematicLevel::base(8).unwrap());
        let text = f.render();
        let old = text.replace("format_version 1", "format_version 0");
        assert!(SpectrumFile::parse(&old, Path::new("mem")).is_err());
        let cut = text.replace("end\n", "");
        assert!(SpectrumFile::parse(&cut, Path::new("mem")).is_err());
    }
}
