//! Small text inputs for `match`, `reg` and `lp`.
//!
//! Scenario files drive `match`; every line is a keyword followed by ids:
//!
//! ```text
//! mu 0.05
//! special 4 : 0 1, 2 3      # v_i and its edges E_i
//! quota 0 1 2 3             # one quota set A_k per line
//! set 10 11 12              # X_1, X_2, X_3 (or S_1, S_2) in order
//! edges 0 1, 2 3            # one line per edge set
//! counts 2 3                # n_2', n_3' (or n_1', n_2')
//! target 0 1 : 5 6 7        # an edge and its apexes X_e
//! ```

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigUint;
use trifactor::matching::{EdgeTarget, SpecialVertex};
use trifactor::{Edge, Vertex};

#[derive(Debug, Default, PartialEq)]
pub struct Scenario {
    pub mu: Option<f64>,
    pub specials: Vec<SpecialVertex>,
    pub quotas: Vec<Vec<Vertex>>,
    pub sets: Vec<Vec<Vertex>>,
    pub edge_sets: Vec<Vec<Edge>>,
    pub counts: Option<[usize; 2]>,
    pub targets: Vec<EdgeTarget>,
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn ids(s: &str, line: usize) -> Result<Vec<Vertex>> {
    s.split_whitespace()
        .map(|t| t.parse().with_context(|| format!("line {line}: bad vertex id `{t}`")))
        .collect()
}

fn edges(s: &str, line: usize) -> Result<Vec<Edge>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match ids(t, line)?[..] {
            [a, b] => Ok((a, b)),
            _ => bail!("line {line}: an edge needs two ids, found `{}`", t.trim()),
        })
        .collect()
}

fn split_colon(rest: &str, line: usize) -> Result<(&str, &str)> {
    rest.split_once(':')
        .ok_or_else(|| anyhow!("line {line}: expected `... : ...`"))
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut s = Scenario::default();
    for (line, l) in lines(text) {
        let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match key {
            "mu" => s.mu = Some(rest.trim().parse().with_context(|| format!("line {line}: bad mu"))?),
            "special" => {
                let (v, es) = split_colon(rest, line)?;
                let v = match ids(v, line)?[..] {
                    [v] => v,
                    _ => bail!("line {line}: `special` names exactly one vertex"),
                };
                s.specials.push(SpecialVertex {
                    vertex: v,
                    edges: edges(es, line)?,
                });
            }
            "quota" => s.quotas.push(ids(rest, line)?),
            "set" => s.sets.push(ids(rest, line)?),
            "edges" => s.edge_sets.push(edges(rest, line)?),
            "counts" => match ids(rest, line)?[..] {
                [a, b] => s.counts = Some([a, b]),
                _ => bail!("line {line}: `counts` takes two numbers"),
            },
            "target" => {
                let (e, xs) = split_colon(rest, line)?;
                let edge = match edges(e, line)?[..] {
                    [e] => e,
                    _ => bail!("line {line}: `target` names exactly one edge"),
                };
                s.targets.push(EdgeTarget {
                    edge,
                    apexes: ids(xs, line)?,
                });
            }
            _ => bail!("line {line}: unknown keyword `{key}`"),
        }
    }
    Ok(s)
}

/// One part per line, ids separated by whitespace.
pub fn parse_parts(text: &str) -> Result<Vec<Vec<Vertex>>> {
    lines(text).map(|(line, l)| ids(l, line)).collect()
}

/// `vertex value` pairs; unlisted vertices get `default`.
pub fn parse_demand(text: &str, n: usize, default: f64) -> Result<Vec<f64>> {
    let mut out = vec![default; n];
    for (line, l) in lines(text) {
        let (v, x) = pair(l, line, n)?;
        out[v] = x.parse().with_context(|| format!("line {line}: bad demand `{x}`"))?;
    }
    Ok(out)
}

pub fn parse_integer_demand(text: &str, n: usize, default: &BigUint) -> Result<Vec<BigUint>> {
    let mut out = vec![default.clone(); n];
    for (line, l) in lines(text) {
        let (v, x) = pair(l, line, n)?;
        out[v] = x
            .parse()
            .with_context(|| format!("line {line}: integer demand expected, found `{x}`"))?;
    }
    Ok(out)
}

fn pair(l: &str, line: usize, n: usize) -> Result<(Vertex, &str)> {
    let mut it = l.split_whitespace();
    let (Some(v), Some(x), None) = (it.next(), it.next(), it.next()) else {
        bail!("line {line}: expected `vertex value`");
    };
    let v: Vertex = v.parse().with_context(|| format!("line {line}: bad vertex id `{v}`"))?;
    if v >= n {
        bail!("line {line}: vertex {v} out of range for {n} vertices");
    }
    Ok((v, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_scenario() {
        let s = parse_scenario(
            "mu 0.1\nspecial 4 : 0 1, 2 3\nquota 0 1\nset 1 2\nset 3\nedges 0 1\ncounts 1 2\ntarget 0 1 : 5 6 # c\n",
        )
        .unwrap();
        assert_eq!(s.mu, Some(0.1));
        assert_eq!(s.specials[0].edges, vec![(0, 1), (2, 3)]);
        assert_eq!(s.sets.len(), 2);
        assert_eq!(s.counts, Some([1, 2]));
        assert_eq!(s.targets[0].apexes, vec![5, 6]);
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_scenario("mu 0.1\nspecial 1 2 : 0 1\n").unwrap_err();
        assert!(e.to_string().contains("line 2"));
        let e = parse_scenario("\n\nfoo 1\n").unwrap_err();
        assert!(e.to_string().contains("line 3"));
        assert!(parse_demand("7 1.0\n", 3, 1.0).is_err());
    }
}
