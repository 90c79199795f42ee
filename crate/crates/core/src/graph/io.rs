//! SNAP-style edge lists: one `u v` pair per line, `#` comments.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

/// Loads an edge list from `path`. See [`read_edge_list`].
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let file = File::open(path)?;
    read_edge_list(BufReader::new(file), &path.display().to_string())
}

/// Parses an edge list. Ids are remapped to `0..n` in order of first
/// appearance; the original ids become the graph's labels. The input is
/// always treated as undirected.
pub fn read_edge_list<R: BufRead>(reader: R, source_name: &str) -> Result<Graph> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |label: u64| {
        *index.entry(label).or_insert_with(|| {
            labels.push(label);
            labels.len() - 1
        })
    };
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            source_name: source_name.to_string(),
            line: i + 1,
            message,
        };
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(parse_err(format!("expected two vertex ids, got {trimmed:?}")));
        };
        let u: u64 = a
            .parse()
            .map_err(|_| parse_err(format!("invalid vertex id {a:?}")))?;
        let v: u64 = b
            .parse()
            .map_err(|_| parse_err(format!("invalid vertex id {b:?}")))?;
        let (u, v) = (intern(u), intern(v));
        edges.push((u, v));
    }
    if labels.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Graph::from_edges(labels.len(), edges)?.with_labels(labels)
}

/// Writes each undirected edge once as `label_u<TAB>label_v` with
/// `label_u < label_v`, lines sorted. An isolated vertex is written as a
/// self-loop, which the reader drops while keeping the vertex.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    let mut pairs: Vec<(u64, u64)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (g.label(u), g.label(v));
            (a.min(b), a.max(b))
        })
        .chain(
            (0..g.n())
                .filter(|&v| g.degree(v) == 0)
                .map(|v| (g.label(v), g.label(v))),
        )
        .collect();
    pairs.sort_unstable();
    for (a, b) in pairs {
        writeln!(out, "{a}\t{b}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Graph> {
        read_edge_list(text.as_bytes(), "test")
    }

    #[test]
    fn two_edge_path() {
        let g = parse("0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.directed_edge_count(), 4);
    }

    #[test]
    fn self_loops_dropped_and_duplicates_merged() {
        let g = parse("0 0\n0 1\n1 0").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.directed_edge_count(), 2);
    }

    #[test]
    fn comments_skipped_and_ids_remapped() {
        let g = parse("# c\n5 9").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.labels(), &[5, 9]);
    }

    #[test]
    fn first_appearance_order() {
        let g = parse("7 3\n3 1\n").unwrap();
        assert_eq!(g.labels(), &[7, 3, 1]);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match parse("0 1\n# ok\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("0 1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("4"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse(""), Err(Error::EmptyGraph)));
        assert!(matches!(parse("# nothing\n\n"), Err(Error::EmptyGraph)));
    }

    #[test]
    fn writer_emits_sorted_ascending_pairs() {
        let g = parse("9 5\n5 2\n").unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "2\t5\n5\t9\n");
    }

    #[test]
    fn isolated_vertices_survive_a_round_trip() {
        let g = Graph::from_edges(4, [(0, 2)])
            .unwrap()
            .with_labels(vec![10, 11, 12, 13])
            .unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "10\t12\n11\t11\n13\t13\n"
        );
        let back = parse(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.n(), 4);
        assert_eq!(back.edge_count(), 1);
        assert_eq!(back.labels(), &[10, 12, 11, 13]);
    }
}
