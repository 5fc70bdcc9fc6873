//! Desk-scale check of the Hajnal–Szemerédi `K_k`-matching guarantee: a
//! graph with `δ(G) ≥ ((k−1)/k − x)n` has a `K_k`-matching of size at least
//! `⌈(1 − (k−1)k·x)·⌊n/k⌋⌉`.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::max_clique_matching;
use crate::graph::{Graph, Vertex};

/// Guaranteed matching size for deficiency `x`, clipped below at zero.
pub fn hsz_bound(n: usize, k: usize, x: Ratio<i64>) -> usize {
    let (ni, ki) = (n as i64, k as i64);
    let factor = Ratio::from_integer(1) - Ratio::from_integer((ki - 1) * ki) * x;
    let v = (factor * Ratio::from_integer(ni / ki)).ceil();
    if v.is_negative() {
        0
    } else {
        v.to_integer().to_usize().unwrap()
    }
}

/// `x = max(0, (k−1)/k − δ/n)`, the smallest deficiency `g` satisfies.
pub fn deficiency(g: &Graph, k: usize) -> Ratio<i64> {
    if g.n() == 0 {
        return Ratio::zero();
    }
    let x = Ratio::new(k as i64 - 1, k as i64) - Ratio::new(g.min_degree() as i64, g.n() as i64);
    x.max(Ratio::zero())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HszReport {
    pub n: usize,
    pub k: usize,
    pub min_degree: usize,
    /// `x` as `(numerator, denominator)`.
    pub x: (i64, i64),
    pub bound: usize,
    pub matching_size: usize,
    pub witness: Vec<Vec<Vertex>>,
    pub pass: bool,
}

pub fn verify_hsz(g: &Graph, k: usize) -> HszReport {
    let x = deficiency(g, k);
    let bound = hsz_bound(g.n(), k, x);
    let (size, witness) = max_clique_matching(g, k);
    HszReport {
        n: g.n(),
        k,
        min_degree: g.min_degree(),
        x: (*x.numer(), *x.denom()),
        bound,
        matching_size: size,
        witness,
        pass: size >= bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::hsz_extremal;

    #[test]
    fn bound_examples() {
        assert_eq!(hsz_bound(9, 3, Ratio::zero()), 3);
        assert_eq!(hsz_bound(9, 3, Ratio::new(1, 6)), 0);
        assert_eq!(hsz_bound(10, 2, Ratio::zero()), 5);
        assert_eq!(hsz_bound(9, 3, Ratio::new(1, 3)), 0);
    }

    #[test]
    fn verify_examples() {
        let r = verify_hsz(&Graph::complete(9), 3);
        assert!(r.pass && r.matching_size == 3 && r.bound == 3);
        let r = verify_hsz(&hsz_extremal(9, 3).unwrap(), 3);
        assert_eq!((r.min_degree, r.x, r.bound, r.matching_size), (5, (1, 9), 1, 2));
        assert!(r.pass);
    }
}
