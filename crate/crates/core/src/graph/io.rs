//! Edge-list TSV.
//!
//! ```text
//! # directed=true
//! alice	bob	+1	0.93	great work, strong support
//! bob	carol	?	-
//! ```
//!
//! Columns are `src, dst, sign, p[, text]`; sign is `+1`, `-1` or `?`, `p` is
//! a probability or `-`. Tabs, newlines and backslashes inside the text are
//! backslash-escaped. Node names are remapped densely in order of first
//! appearance. A repeated node pair keeps its last row; the same pair in both
//! directions is an error.

use super::{SignState, SignedEdge, SignedGraph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

pub fn parse_edge_list<T: Scalar, R: Read>(input: R) -> Result<SignedGraph<T>> {
    let reader = BufReader::new(input);
    let mut directed: Option<bool> = None;
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<SignedEdge<T>> = Vec::new();
    // (src, dst) -> position in `edges`
    let mut by_pair: HashMap<(usize, usize), usize> = HashMap::new();

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        if directed.is_none() {
            directed = Some(parse_header(line).ok_or_else(|| {
                Error::parse(line_no, "expected header `# directed=<true|false>`")
            })?);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 && cols.len() != 5 {
            return Err(Error::parse(
                line_no,
                format!("expected 4 or 5 tab-separated columns, found {}", cols.len()),
            ));
        }
        let sign = match cols[2] {
            "+1" => SignState::ObservedPositive,
            "-1" => SignState::ObservedNegative,
            "?" => SignState::Unknown,
            other => return Err(Error::parse(line_no, format!("invalid sign `{other}`"))),
        };
        let p = match cols[3] {
            "-" => None,
            raw => {
                let v: f64 = raw
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("invalid probability `{raw}`")))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::parse(line_no, format!("probability {v} outside [0,1]")));
                }
                Some(T::lit(v))
            }
        };
        let text = cols.get(4).map(|t| unescape(t));
        let mut node = |name: &str| {
            *names.entry(name.to_string()).or_insert_with(|| {
                labels.push(name.to_string());
                labels.len() - 1
            })
        };
        let (src, dst) = (node(cols[0]), node(cols[1]));
        if src == dst {
            return Err(Error::parse(line_no, "self-loop"));
        }
        if by_pair.contains_key(&(dst, src)) {
            if directed == Some(true) {
                return Err(Error::parse(
                    line_no,
                    "edges in both directions between the same pair are not supported",
                ));
            }
            // undirected: the reversed row is the same edge
            let pos = by_pair.remove(&(dst, src)).expect("present");
            by_pair.insert((src, dst), pos);
        }
        let edge = SignedEdge {
            source: super::NodeId(src),
            target: super::NodeId(dst),
            sign,
            p,
            text,
        };
        match by_pair.get(&(src, dst)) {
            Some(&pos) => edges[pos] = edge,
            None => {
                by_pair.insert((src, dst), edges.len());
                edges.push(edge);
            }
        }
    }

    let directed = directed.ok_or_else(|| Error::parse(1, "missing header"))?;
    SignedGraph::new(labels.len(), directed, edges)?.with_labels(labels)
}

pub fn read_edge_list<T: Scalar>(path: impl AsRef<Path>) -> Result<SignedGraph<T>> {
    parse_edge_list(std::fs::File::open(path)?)
}

fn parse_header(line: &str) -> Option<bool> {
    let rest = line.strip_prefix('#')?.trim();
    match rest.strip_prefix("directed=")?.trim() {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

pub fn write_edge_list<T: Scalar, W: Write>(graph: &SignedGraph<T>, mut out: W) -> Result<()> {
    writeln!(out, "# directed={}", graph.is_directed())?;
    for e in graph.edges() {
        let sign = match e.sign {
            SignState::ObservedPositive => "+1",
            SignState::ObservedNegative => "-1",
            SignState::Unknown => "?",
        };
        let p = e.p.map_or_else(|| "-".to_string(), |p| format!("{p}"));
        write!(
            out,
            "{}\t{}\t{}\t{}",
            graph.label(e.source),
            graph.label(e.target),
            sign,
            p
        )?;
        if let Some(text) = &e.text {
            write!(out, "\t{}", escape(text))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_edge_list_file<T: Scalar>(graph: &SignedGraph<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_edge_list(graph, &mut w)?;
    w.flush()?;
    Ok(())
}

fn escape(text: &str) -> String {
    let mut s = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => s.push_str("\\\\"),
            '\t' => s.push_str("\\t"),
            '\n' => s.push_str("\\n"),
            '\r' => s.push_str("\\r"),
            c => s.push(c),
        }
    }
    s
}

fn unescape(text: &str) -> String {
    let mut s = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            s.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => s.push('\t'),
            Some('n') => s.push('\n'),
            Some('r') => s.push('\r'),
            Some('\\') => s.push('\\'),
            Some(other) => {
                s.push('\\');
                s.push(other);
            }
            None => s.push('\\'),
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> Result<SignedGraph<f64>> {
        parse_edge_list(s.as_bytes())
    }

    #[test]
    fn three_rows() {
        let g = parse("# directed=true\na\tb\t+1\t0.9\tnice\nb\tc\t+1\t-\nc\ta\t-1\t0.2\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.node_count(), 3);
        assert!(g.is_directed());
        let pos = g.edges().iter().filter(|e| e.sign == SignState::ObservedPositive).count();
        assert_eq!(pos, 2);
        assert_eq!(g.edge(0).text.as_deref(), Some("nice"));
        assert_eq!(g.edge(1).p, None);
        assert_eq!(g.label(g.edge(2).source), "c");
    }

    #[test]
    fn header_only() {
        let g = parse("# directed=false\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (0, 0));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            "# directed=false\na\tb\t+1\n",
            "# directed=false\na\tb\t+1\t0.5\na\tc\t0\t0.5\n",
            "# directed=false\na\tb\t+1\t1.2\n",
            "# directed=false\na\tb\t?\tx\n",
        ];
        let lines = [2, 3, 2, 2];
        for (input, want) in cases.iter().zip(lines) {
            match parse(input) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{input:?}"),
                other => panic!("expected parse error for {input:?}, got {other:?}"),
            }
        }
        assert!(matches!(parse("a\tb\t+1\t-\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn duplicates_keep_last() {
        let g = parse("# directed=false\na\tb\t+1\t0.9\nb\ta\t-1\t0.1\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge(0).sign, SignState::ObservedNegative);
        assert_eq!(g.label(g.edge(0).source), "b");

        let g = parse("# directed=true\na\tb\t+1\t0.9\na\tb\t-1\t0.1\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge(0).p, Some(0.1));
        assert!(parse("# directed=true\na\tb\t+1\t0.9\nb\ta\t-1\t0.1\n").is_err());
    }

    proptest! {
        #[test]
        fn write_then_read_is_identity(
            rows in proptest::collection::vec(
                (0usize..12, 0usize..12, 0u8..3, proptest::option::of(0.0f64..=1.0),
                 proptest::option::of("[a-z \\t\\\\\\n]{0,12}")),
                0..30),
            directed in any::<bool>(),
        ) {
            let mut edges = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for (a, b, s, p, text) in rows {
                if a == b || !seen.insert((a.min(b), a.max(b))) { continue; }
                let sign = [SignState::ObservedPositive, SignState::ObservedNegative, SignState::Unknown][s as usize];
                edges.push(SignedEdge { source: super::super::NodeId(a), target: super::super::NodeId(b), sign, p, text });
            }
            let labels: Vec<String> = (0..12).map(|i| format!("n{i}")).collect();
            let g = SignedGraph::new(12, directed, edges).unwrap().with_labels(labels).unwrap();
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf).unwrap();
            let back: SignedGraph<f64> = parse_edge_list(&buf[..]).unwrap();
            prop_assert_eq!(back.edge_count(), g.edge_count());
            for (x, y) in g.edges().iter().zip(back.edges()) {
                prop_assert_eq!(g.label(x.source), back.label(y.source));
                prop_assert_eq!(g.label(x.target), back.label(y.target));
                prop_assert_eq!(x.sign, y.sign);
                prop_assert_eq!(x.p, y.p);
                prop_assert_eq!(&x.text, &y.text);
            }
        }
    }
}
