use std::collections::BTreeSet;

/// Simple undirected graph on vertices 0..n, loops disallowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(n: usize) -> Self {
        UndirectedGraph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v);
        self.edges.insert((u.min(v), u.max(v)));
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    /// Decides 2K2-freeness by scanning all 4-subsets for an induced pair of
    /// disjoint edges.
    pub fn is_2k2_free(&self) -> bool {
        self.find_2k2().is_none()
    }

    /// Returns four vertices (a, b, c, d) inducing exactly the two edges
    /// {a,b} and {c,d}, if any exist.
    pub fn find_2k2(&self) -> Option<(usize, usize, usize, usize)> {
        for &(a, b) in &self.edges {
            for &(c, d) in &self.edges {
                if a == c && b == d {
                    continue;
                }
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                if !self.has_edge(a, c)
                    && !self.has_edge(a, d)
                    && !self.has_edge(b, c)
                    && !self.has_edge(b, d)
                {
                    return Some((a, b, c, d));
                }
            }
        }
        None
    }

    /// Identifies vertices u and v into a single vertex adjacent to the union
    /// of their neighborhoods. The result is relabeled onto 0..n-1.
    pub fn identify(&self, u: usize, v: usize) -> UndirectedGraph {
        assert!(u != v && u < self.n && v < self.n);
        let map = |x: usize| -> usize {
            let y = if x == v { u } else { x };
            if y > v {
                y - 1
            } else {
                y
            }
        };
        let mut out = UndirectedGraph::new(self.n - 1);
        for &(a, b) in &self.edges {
            let (a, b) = (map(a), map(b));
            if a != b {
                out.add_edge(a, b);
            }
        }
        out
    }
}

/// Simple directed graph on vertices 0..n (used for arrow graphs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(n: usize) -> Self {
        DirectedGraph {
            n,
            arcs: BTreeSet::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n);
        self.arcs.insert((u, v));
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.arcs.iter().copied().collect()
    }

    pub fn is_edgeless(&self) -> bool {
        self.arcs.is_empty()
    }

    /// The underlying simple undirected graph.
    pub fn underlying(&self) -> UndirectedGraph {
        let mut g = UndirectedGraph::new(self.n);
        for &(u, v) in &self.arcs {
            if u != v {
                g.add_edge(u, v);
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> UndirectedGraph {
        let mut g = UndirectedGraph::new(4);
        for i in 0..4 {
            for j in (i + 1)..4 {
                g.add_edge(i, j);
            }
        }
        g
    }

    #[test]
    fn two_k2_detection() {
        assert!(k4().is_2k2_free());
        let mut g = UndirectedGraph::new(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        assert!(!g.is_2k2_free());
        // adding a chord kills the only 2K2
        g.add_edge(1, 2);
        assert!(g.is_2k2_free());
    }

    #[test]
    fn identification_shrinks() {
        let g = k4().identify(0, 3);
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.edges().len(), 3);
    }
}
