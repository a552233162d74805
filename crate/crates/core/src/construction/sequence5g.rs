use std::path::Path;

use super::{Metric, Order, ReliabilityVector};
use crate::error::{Error, Result};
use crate::polar::log2_exact;

pub const SEQUENCE_5G_LEN: usize = 1024;

const SHIPPED: &str = include_str!("../../data/polar_sequence_5g.txt");

/// Parses a sequence file: `#` comments, then 1-based indices, most reliable first.
pub fn parse_sequence(text: &str, path: &Path) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: usize = line
            .parse()
            .map_err(|_| Error::parse(path, format!("line {}: not an index: {line}", n + 1)))?;
        out.push(v);
    }
    Ok(out)
}

fn validate_table(seq: &[usize], path: &Path) -> Result<()> {
    if seq.len() != SEQUENCE_5G_LEN {
        return Err(Error::parse(
            path,
            format!("{} entries, expected {SEQUENCE_5G_LEN}", seq.len()),
        ));
    }
    let mut seen = vec![false; SEQUENCE_5G_LEN + 1];
    for &i in seq {
        if i == 0 || i > SEQUENCE_5G_LEN || seen[i] {
            return Err(Error::parse(
                path,
                format!("index {i} repeated or out of range"),
            ));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Rank-based reliability from a 1024-entry table, restricted to indices `≤ len`.
pub fn load_5g_sequence(text: &str, source: &Path, len: usize) -> Result<ReliabilityVector> {
    log2_exact(len)?;
    if len > SEQUENCE_5G_LEN {
        return Err(Error::invalid(format!(
            "the 5G sequence covers N ≤ {SEQUENCE_5G_LEN}, got {len}"
        )));
    }
    let seq = parse_sequence(text, source)?;
    validate_table(&seq, source)?;
    let mut values = vec![0.0; len];
    let restricted: Vec<usize> = seq.into_iter().filter(|&i| i <= len).collect();
    for (rank, &i) in restricted.iter().enumerate() {
        values[i - 1] = (len - rank) as f64;
    }
    Ok(ReliabilityVector {
        len,
        metric_name: Metric::FiveG.tag().to_string(),
        design_snr: None,
        values,
        order: Order::HigherIsBetter,
    })
}

/// The table bundled with the crate.
pub fn shipped_5g_sequence(len: usize) -> Result<ReliabilityVector> {
    load_5g_sequence(SHIPPED, Path::new("polar_sequence_5g.txt"), len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_table_round_trips() {
        let v = shipped_5g_sequence(1024).unwrap();
        let r = v.ranking().unwrap();
        assert_eq!(r, parse_sequence(SHIPPED, Path::new("x")).unwrap());
    }

    #[test]
    fn restriction_keeps_distinct_indices() {
        let r = shipped_5g_sequence(512).unwrap().ranking().unwrap();
        let mut s = r.clone();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 512);
        assert_eq!(r[0], 512);
    }

    #[test]
    fn most_reliable_is_last_index() {
        for n in 1..=10 {
            let len = 1 << n;
            assert_eq!(shipped_5g_sequence(len).unwrap().ranking().unwrap()[0], len);
        }
        assert!(shipped_5g_sequence(2048).is_err());
    }

    #[test]
    fn malformed_tables_rejected() {
        assert!(load_5g_sequence("1\n2\n", Path::new("x"), 2).is_err());
        assert!(load_5g_sequence("a\n", Path::new("x"), 2).is_err());
    }

    #[test]
    fn nested_selection() {
        let v = shipped_5g_sequence(64).unwrap();
        let r = v.ranking().unwrap();
        for k in 1..64 {
            let a: Vec<_> = r[..k].to_vec();
            assert!(a.iter().all(|i| r[..k + 1].contains(i)));
        }
    }
}
