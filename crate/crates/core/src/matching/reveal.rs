use std::collections::HashMap;

use crate::graph::{pair_rank, Graph, Vertex};
use crate::sparsify::EdgeUniforms;

/// Lazily revealed copy of `G_p`.
///
/// An edge is *alive* until its random status is revealed. The statuses
/// agree with `sparsify(g, p, seed)` edge for edge.
#[derive(Clone, Debug)]
pub struct RevealState<'g> {
    g: &'g Graph,
    p: f64,
    uniforms: EdgeUniforms,
    revealed: HashMap<u64, bool>,
    /// Reveal requests for edges whose status was already known. Must stay 0.
    pub repeat_reveals: usize,
}

impl<'g> RevealState<'g> {
    pub fn new(g: &'g Graph, p: f64, seed: u64) -> Self {
        RevealState {
            g,
            p,
            uniforms: EdgeUniforms::new(g.n(), seed),
            revealed: HashMap::new(),
            repeat_reveals: 0,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Whether `uv` is an edge of `G` whose status is still unknown.
    pub fn is_alive(&self, u: Vertex, v: Vertex) -> bool {
        self.g.has_edge(u, v) && !self.revealed.contains_key(&pair_rank(self.g.n(), u, v))
    }

    /// Status if already revealed.
    pub fn known(&self, u: Vertex, v: Vertex) -> Option<bool> {
        self.revealed.get(&pair_rank(self.g.n(), u, v)).copied()
    }

    /// Reveals `uv`; non-edges of `G` are absent without being recorded.
    pub fn reveal(&mut self, u: Vertex, v: Vertex) -> bool {
        if !self.g.has_edge(u, v) {
            return false;
        }
        let rank = pair_rank(self.g.n(), u, v);
        if let Some(&s) = self.revealed.get(&rank) {
            self.repeat_reveals += 1;
            return s;
        }
        let present = self.uniforms.retained(u, v, self.p);
        self.revealed.insert(rank, present);
        present
    }

    /// Known status, revealing the edge first if it is alive.
    pub fn status(&mut self, u: Vertex, v: Vertex) -> bool {
        match self.known(u, v) {
            Some(s) => s,
            None => self.reveal(u, v),
        }
    }

    pub fn revealed_count(&self) -> usize {
        self.revealed.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsify::sparsify;

    #[test]
    fn statuses_match_sparsify() {
        let g = Graph::complete(40);
        let gp = sparsify(&g, 0.3, 8).unwrap();
        let mut st = RevealState::new(&g, 0.3, 8);
        for (u, v) in g.edges().into_iter().rev() {
            assert_eq!(st.reveal(u, v), gp.has_edge(u, v));
        }
        assert_eq!(st.repeat_reveals, 0);
        st.reveal(0, 1);
        assert_eq!(st.repeat_reveals, 1);
        assert!(!st.is_alive(2, 3));
    }
}
