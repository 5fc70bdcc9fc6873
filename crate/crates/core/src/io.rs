//! Plain-text graph format.
//!
//! ```text
//! n m                      (general graph)
//! tripartite n1 n2 n3 m    (parts are consecutive id intervals)
//! u v                      (one edge per line, 0-based ids)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Writers emit edges
//! in lexicographic order so that equal graphs serialize identically.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, TripartiteGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphFile {
    General(Graph),
    Tripartite(TripartiteGraph),
}

impl GraphFile {
    pub fn graph(&self) -> &Graph {
        match self {
            GraphFile::General(g) => g,
            GraphFile::Tripartite(t) => t.graph(),
        }
    }

    pub fn into_graph(self) -> Graph {
        match self {
            GraphFile::General(g) => g,
            GraphFile::Tripartite(t) => t.into_graph(),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{tok}`")))
}

/// Content lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let (sizes, n, m) = match toks.as_slice() {
        ["tripartite", a, b, c, m] => {
            let sizes = [parse_usize(a, hline)?, parse_usize(b, hline)?, parse_usize(c, hline)?];
            (Some(sizes), sizes.iter().sum(), parse_usize(m, hline)?)
        }
        [n, m] => (None, parse_usize(n, hline)?, parse_usize(m, hline)?),
        _ => return Err(parse_err(hline, "header must be `n m` or `tripartite n1 n2 n3 m`")),
    };
    let mut edges: Vec<Edge> = Vec::with_capacity(m);
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = toks.as_slice() else {
            return Err(parse_err(ln, "edge line must be `u v`"));
        };
        let (u, v) = (parse_usize(u, ln)?, parse_usize(v, ln)?);
        if u >= n || v >= n {
            return Err(parse_err(ln, format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(parse_err(ln, format!("self-loop at {u}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            hline,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    Ok(match sizes {
        Some(sizes) => GraphFile::Tripartite(TripartiteGraph::from_edges(sizes, edges)?),
        None => GraphFile::General(Graph::from_edges(n, edges)?),
    })
}

fn write_edges(out: &mut String, g: &Graph) {
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    write_edges(&mut out, g);
    out
}

pub fn format_tripartite(t: &TripartiteGraph) -> String {
    let [a, b, c] = t.sizes();
    let mut out = format!("tripartite {a} {b} {c} {}\n", t.graph().m());
    write_edges(&mut out, t.graph());
    out
}

pub fn format_graph_file(f: &GraphFile) -> String {
    match f {
        GraphFile::General(g) => format_graph(g),
        GraphFile::Tripartite(t) => format_tripartite(t),
    }
}

pub fn read_graph(path: &Path) -> Result<GraphFile> {
    parse_graph(&fs::read_to_string(path)?)
}

/// Writes `contents` next to `path` and renames it into place, so readers
/// never observe a half-written file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        e.into()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_general_and_tripartite() {
        let g = Graph::from_edges(4, [(2, 3), (0, 1), (1, 3)]).unwrap();
        let text = format_graph(&g);
        assert_eq!(text, "4 3\n0 1\n1 3\n2 3\n");
        assert_eq!(parse_graph(&text).unwrap(), GraphFile::General(g));

        let t = TripartiteGraph::from_edges([1, 1, 1], [(0, 1), (1, 2), (0, 2)]).unwrap();
        let text = format_tripartite(&t);
        assert_eq!(parse_graph(&text).unwrap(), GraphFile::Tripartite(t));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_graph("3 2\n0 1\n# note\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        assert!(matches!(parse_graph("3 2\n0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_graph("tripartite 1 1 1 1\n1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("tripartite 2 1 1 1\n0 1\n"),
            Err(Error::IntraPartEdge(0, 1))
        ));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.txt");
        write_atomic(&p, b"old").unwrap();
        write_atomic(&p, b"new").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "new");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
