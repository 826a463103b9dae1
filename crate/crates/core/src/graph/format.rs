//! Plain-text graph files: a header line `N <int>` followed by one
//! `i j` line per edge, 0-based, in sorted order.

use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("N {}\n", g.n_nodes());
    for &(i, j) in g.edges() {
        writeln!(out, "{i} {j}").expect("writing to a String");
    }
    out
}

/// Parses the format produced by [`write_graph`]. Blank lines and `#`
/// comments are ignored.
pub fn read_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing `N <int>` header".into(),
    })?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["N", n] => n.parse::<usize>().map_err(|e| Error::Parse {
            line,
            reason: format!("bad node count: {e}"),
        })?,
        _ => {
            return Err(Error::Parse {
                line,
                reason: format!("expected `N <int>`, found `{header}`"),
            })
        }
    };
    let mut edges = Vec::new();
    for (line, l) in lines {
        let parts: Vec<_> = l.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line,
                reason: format!("bad node index `{s}`: {e}"),
            })
        };
        match parts[..] {
            [a, b] => edges.push((parse(a)?, parse(b)?)),
            _ => {
                return Err(Error::Parse {
                    line,
                    reason: format!("expected `i j`, found `{l}`"),
                })
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_scale_free;

    #[test]
    fn golden_triangle() {
        let g = Graph::from_edges(3, [(2, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(write_graph(&g), "N 3\n0 1\n0 2\n1 2\n");
    }

    #[test]
    fn round_trip() {
        let g = generate_scale_free(30, 2, 4).unwrap();
        assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line() {
        assert!(matches!(
            read_graph("N 3\n0 1\n1 x\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(read_graph("3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_graph("N 2\n0 0\n"), Err(Error::Structural(_))));
    }
}
