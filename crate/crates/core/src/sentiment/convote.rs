//! Speaker-agreement graphs built from calibrated per-speech scores.

use super::calibration::{platt_scale, CalibrationMap};
use super::edge_agreement;
use crate::error::{Error, Result};
use crate::graph::{SignState, SignedEdge, SignedGraph};
use crate::scalar::Scalar;
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};

#[derive(Clone, Debug, PartialEq)]
pub struct SpeechScore<T> {
    pub speaker: String,
    pub bill: String,
    pub raw_score: T,
    /// True for a yea vote.
    pub vote: bool,
}

fn parse_vote(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "+1" | "1" | "y" | "yea" | "yes" => Some(true),
        "-1" | "0" | "n" | "nay" | "no" => Some(false),
        _ => None,
    }
}

/// Parse `speaker<TAB>bill<TAB>raw_score<TAB>vote` rows. Blank lines, `#`
/// comments and a leading header row are skipped.
pub fn parse_speech_scores<T: Scalar, R: Read>(input: R) -> Result<Vec<SpeechScore<T>>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = trimmed.split('\t').collect();
        if cols.len() != 4 {
            return Err(Error::parse(lineno, format!("expected 4 columns, found {}", cols.len())));
        }
        if out.is_empty() && cols[2].trim() == "raw_score" {
            continue;
        }
        let raw: f64 = cols[2]
            .trim()
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad score {:?}", cols[2])))?;
        if !raw.is_finite() {
            return Err(Error::parse(lineno, "score must be finite"));
        }
        let vote = parse_vote(cols[3]).ok_or_else(|| Error::parse(lineno, format!("bad vote {:?}", cols[3])))?;
        out.push(SpeechScore {
            speaker: cols[0].to_string(),
            bill: cols[1].to_string(),
            raw_score: T::lit(raw),
            vote,
        });
    }
    Ok(out)
}

/// Platt map fitted on all speeches, raw score against vote.
pub fn calibrate_speeches<T: Scalar>(speeches: &[SpeechScore<T>]) -> Result<CalibrationMap<T>> {
    let scores: Vec<T> = speeches.iter().map(|s| s.raw_score).collect();
    let votes: Vec<bool> = speeches.iter().map(|s| s.vote).collect();
    platt_scale(&scores, &votes)
}

/// Undirected speaker graph. Two speakers are linked when they voted on at
/// least one common bill. The edge is positive when they voted the same way
/// on at least half of those bills, and `p` is the mean agreement
/// probability of their calibrated per-bill support estimates.
pub fn build_convote_graph<T: Scalar>(
    speeches: &[SpeechScore<T>],
    calibration: &CalibrationMap<T>,
) -> Result<SignedGraph<T>> {
    let mut speakers: Vec<String> = Vec::new();
    let mut speaker_ix: HashMap<&str, usize> = HashMap::new();
    let mut bill_ix: HashMap<&str, usize> = HashMap::new();
    // (speaker, bill) -> (sum of q, count, vote)
    let mut cells: HashMap<(usize, usize), (T, usize, bool)> = HashMap::new();
    for s in speeches {
        let u = *speaker_ix.entry(&s.speaker).or_insert_with(|| {
            speakers.push(s.speaker.clone());
            speakers.len() - 1
        });
        let nb = bill_ix.len();
        let b = *bill_ix.entry(&s.bill).or_insert(nb);
        let q = calibration.apply(s.raw_score);
        let cell = cells.entry((u, b)).or_insert((T::zero(), 0, s.vote));
        if cell.2 != s.vote {
            return Err(Error::invalid(format!(
                "speaker {} has conflicting votes on bill {}",
                s.speaker, s.bill
            )));
        }
        cell.0 += q;
        cell.1 += 1;
    }
    let mut by_speaker: Vec<Vec<(usize, T, bool)>> = vec![Vec::new(); speakers.len()];
    for (&(u, b), &(sum, n, vote)) in &cells {
        by_speaker[u].push((b, sum / T::from_count(n), vote));
    }
    for list in &mut by_speaker {
        list.sort_by_key(|x| x.0);
    }
    let mut edges = Vec::new();
    for u in 0..speakers.len() {
        for v in (u + 1)..speakers.len() {
            let (a, b) = (&by_speaker[u], &by_speaker[v]);
            let (mut i, mut j) = (0, 0);
            let (mut qu, mut qv) = (Vec::new(), Vec::new());
            let mut same = 0usize;
            while i < a.len() && j < b.len() {
                match a[i].0.cmp(&b[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        qu.push(a[i].1);
                        qv.push(b[j].1);
                        same += (a[i].2 == b[j].2) as usize;
                        i += 1;
                        j += 1;
                    }
                }
            }
            if qu.is_empty() {
                continue;
            }
            let p = edge_agreement(&qu, &qv)?;
            let positive = 2 * same >= qu.len();
            edges.push(SignedEdge::new(u, v, SignState::from_bool(positive)).with_p(p));
        }
    }
    SignedGraph::new(speakers.len(), false, edges)?.with_labels(speakers)
}
