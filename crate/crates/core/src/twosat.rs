//! SCC-based 2-SAT used wherever a bijunctive formula needs a satisfying
//! assignment (deletion-set search, the pair-cut reduction preprocessing).

/// A literal: variable index plus polarity (`true` = positive).
pub type Lit = (usize, bool);

#[derive(Debug, Default, Clone)]
pub struct TwoSat {
    n: usize,
    /// Implication arcs over literal nodes 2v (positive) / 2v+1 (negative).
    arcs: Vec<(usize, usize)>,
}

fn node(l: Lit) -> usize {
    2 * l.0 + usize::from(!l.1)
}

fn negation(x: usize) -> usize {
    x ^ 1
}

impl TwoSat {
    pub fn new(n: usize) -> Self {
        TwoSat { n, arcs: vec![] }
    }

    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        // (a or b) as two implications
        self.arcs.push((negation(node(a)), node(b)));
        self.arcs.push((negation(node(b)), node(a)));
    }

    pub fn add_unit(&mut self, a: Lit) {
        self.add_clause(a, a);
    }

    /// Returns a satisfying assignment, or None if unsatisfiable.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let m = 2 * self.n;
        let mut adj = vec![Vec::new(); m];
        let mut radj = vec![Vec::new(); m];
        for &(u, v) in &self.arcs {
            adj[u].push(v);
            radj[v].push(u);
        }
        // Kosaraju: iterative first pass for finish order.
        let mut order = Vec::with_capacity(m);
        let mut seen = vec![false; m];
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            seen[start] = true;
            while let Some(&mut (u, ref mut i)) = stack.last_mut() {
                if *i < adj[u].len() {
                    let v = adj[u][*i];
                    *i += 1;
                    if !seen[v] {
                        seen[v] = true;
                        stack.push((v, 0));
                    }
                } else {
                    order.push(u);
                    stack.pop();
                }
            }
        }
        let mut comp = vec![usize::MAX; m];
        let mut c = 0;
        for &start in order.iter().rev() {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = c;
            while let Some(u) = stack.pop() {
                for &v in &radj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = c;
                        stack.push(v);
                    }
                }
            }
            c += 1;
        }
        let mut values = vec![false; self.n];
        for v in 0..self.n {
            if comp[2 * v] == comp[2 * v + 1] {
                return None;
            }
            // Components are numbered in topological order (sources first),
            // so a variable is safe to set true iff its positive literal's
            // component comes after the negative one's.
            values[v] = comp[2 * v] > comp[2 * v + 1];
        }
        Some(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_sat_and_unsat() {
        let mut s = TwoSat::new(2);
        s.add_clause((0, true), (1, true));
        s.add_clause((0, false), (1, true));
        let a = s.solve().unwrap();
        assert!(a[1] || a[0]);

        let mut u = TwoSat::new(1);
        u.add_unit((0, true));
        u.add_unit((0, false));
        assert!(u.solve().is_none());
    }

    #[test]
    fn exhaustive_cross_check() {
        // all 2-CNFs on 3 variables with up to 3 random-ish clauses
        let lits: Vec<Lit> = (0..3).flat_map(|v| [(v, false), (v, true)]).collect();
        for a in 0..lits.len() {
            for b in 0..lits.len() {
                for c in 0..lits.len() {
                    for d in 0..lits.len() {
                        let mut s = TwoSat::new(3);
                        s.add_clause(lits[a], lits[b]);
                        s.add_clause(lits[c], lits[d]);
                        let brute = (0..8).any(|m| {
                            let val = |l: Lit| ((m >> l.0) & 1 == 1) == l.1;
                            (val(lits[a]) || val(lits[b])) && (val(lits[c]) || val(lits[d]))
                        });
                        match s.solve() {
                            Some(v) => {
                                assert!(brute);
                                let val = |l: Lit| v[l.0] == l.1;
                                assert!(val(lits[a]) || val(lits[b]));
                                assert!(val(lits[c]) || val(lits[d]));
                            }
                            None => assert!(!brute),
                        }
                    }
                }
            }
        }
    }
}
