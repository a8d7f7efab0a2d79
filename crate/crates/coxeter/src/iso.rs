//! Brute-force multigraph isomorphism for small graphs (golden-structure
//! checks and network-shape validation).

use crate::interchange::InterchangeGraph;

/// Dense multigraph with an edge-multiplicity matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    pub n: usize,
    pub mult: Vec<Vec<u8>>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph {
            n,
            mult: vec![vec![0; n]; n],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, mult: u8) {
        self.mult[u][v] += mult;
        self.mult[v][u] += mult;
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.mult[v].iter().map(|&m| m as u32).sum()
    }

    /// Sorted multiset of incident multiplicities, a cheap invariant.
    fn mult_profile(&self, v: usize) -> Vec<u8> {
        let mut p: Vec<u8> = self.mult[v].iter().copied().filter(|&m| m > 0).collect();
        p.sort_unstable();
        p
    }

    pub fn from_interchange(ig: &InterchangeGraph) -> Self {
        let mut g = Multigraph::new(ig.vertex_count());
        for e in &ig.edges {
            g.add_edge(e.u as usize, e.v as usize, e.mult);
        }
        g
    }

    /// Cartesian product; factor edges are copied into each fiber.
    pub fn cartesian_product(&self, other: &Multigraph) -> Multigraph {
        let n = self.n * other.n;
        let id = |a: usize, b: usize| a * other.n + b;
        let mut g = Multigraph::new(n);
        for a1 in 0..self.n {
            for a2 in a1..self.n {
                if self.mult[a1][a2] > 0 {
                    for b in 0..other.n {
                        g.add_edge(id(a1, b), id(a2, b), self.mult[a1][a2]);
                    }
                }
            }
        }
        for b1 in 0..other.n {
            for b2 in b1..other.n {
                if other.mult[b1][b2] > 0 {
                    for a in 0..self.n {
                        g.add_edge(id(a, b1), id(a, b2), other.mult[b1][b2]);
                    }
                }
            }
        }
        g
    }

    /// A single edge of the given multiplicity.
    pub fn edge(mult: u8) -> Multigraph {
        let mut g = Multigraph::new(2);
        g.add_edge(0, 1, mult);
        g
    }

    /// Hypercube of the given dimension with every edge at multiplicity
    /// `mult`.
    pub fn cube(dim: usize, mult: u8) -> Multigraph {
        let n = 1usize << dim;
        let mut g = Multigraph::new(n);
        for v in 0..n {
            for b in 0..dim {
                let w = v ^ (1 << b);
                if w > v {
                    g.add_edge(v, w, mult);
                }
            }
        }
        g
    }
}

/// Backtracking isomorphism test with degree/profile pruning.
pub fn isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    if a.n != b.n {
        return false;
    }
    let prof_a: Vec<Vec<u8>> = (0..a.n).map(|v| a.mult_profile(v)).collect();
    let prof_b: Vec<Vec<u8>> = (0..b.n).map(|v| b.mult_profile(v)).collect();
    {
        let mut sa = prof_a.clone();
        let mut sb = prof_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return false;
        }
    }
    // order vertices of `a` by rarity of profile for faster pruning
    let mut order: Vec<usize> = (0..a.n).collect();
    order.sort_unstable_by_key(|&v| {
        let p = &prof_a[v];
        prof_b.iter().filter(|q| *q == p).count()
    });
    let mut assignment: Vec<Option<usize>> = vec![None; a.n];
    let mut used = vec![false; b.n];
    fn go(
        a: &Multigraph,
        b: &Multigraph,
        order: &[usize],
        depth: usize,
        assignment: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        prof_a: &[Vec<u8>],
        prof_b: &[Vec<u8>],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for w in 0..b.n {
            if used[w] || prof_a[v] != prof_b[w] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&u| {
                let x = assignment[u].unwrap();
                a.mult[v][u] == b.mult[w][x]
            });
            if !consistent {
                continue;
            }
            assignment[v] = Some(w);
            used[w] = true;
            if go(a, b, order, depth + 1, assignment, used, prof_a, prof_b) {
                return true;
            }
            assignment[v] = None;
            used[w] = false;
        }
        false
    }
    go(
        a,
        b,
        &order,
        0,
        &mut assignment,
        &mut used,
        &prof_a,
        &prof_b,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_times_edge() {
        let cube = Multigraph::cube(3, 2);
        let edge = Multigraph::edge(1);
        let prod = cube.cartesian_product(&edge);
        assert_eq!(prod.n, 16);
        assert_eq!(prod.degree(0), 7);
        assert!(isomorphic(&prod, &edge.cartesian_product(&cube)));
    }

    #[test]
    fn distinguishes_multiplicity() {
        let single = Multigraph::edge(1);
        let double = Multigraph::edge(2);
        assert!(!isomorphic(&single, &double));
        assert!(isomorphic(&single, &Multigraph::edge(1)));
    }

    #[test]
    fn distinguishes_cycle_from_triangle_with_pendant() {
        let mut cycle = Multigraph::new(4);
        for i in 0..4 {
            cycle.add_edge(i, (i + 1) % 4, 1);
        }
        let mut relabeled = Multigraph::new(4);
        for (u, v) in [(2, 0), (0, 3), (3, 1), (1, 2)] {
            relabeled.add_edge(u, v, 1);
        }
        assert!(isomorphic(&cycle, &relabeled));
        // same edge count, different shape
        let mut other = Multigraph::new(4);
        for (u, v) in [(0, 1), (1, 2), (2, 0), (0, 3)] {
            other.add_edge(u, v, 1);
        }
        assert!(!isomorphic(&cycle, &other));
    }
}
