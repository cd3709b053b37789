//! Cut and flow predicates on soft/crisp digraphs plus the substitute
//! flow-augmentation implementations. The substitutes satisfy the augmentation
//! output contract exactly: the returned arc set is compatible with the target
//! star st-cut, the cut's core becomes an st-mincut of the augmented graph,
//! and the returned flow is a witnessing flow.

use crate::config::SolveConfig;
use crate::error::CoreError;

pub type Vertex = usize;
pub type ArcId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutArc {
    pub tail: Vertex,
    pub head: Vertex,
    pub soft: bool,
}

/// Directed multigraph with soft (unit-capacity, deletable) and crisp
/// (effectively infinite capacity) arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutDigraph {
    pub n: usize,
    pub s: Vertex,
    pub t: Vertex,
    pub arcs: Vec<CutArc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowValue {
    Finite(usize),
    Infinite,
}

impl FlowValue {
    pub fn finite(&self) -> Option<usize> {
        match self {
            FlowValue::Finite(v) => Some(*v),
            FlowValue::Infinite => None,
        }
    }
}

/// A list of st-paths (as arc-id sequences) pairwise disjoint on soft arcs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StFlow {
    pub paths: Vec<Vec<ArcId>>,
}

impl StFlow {
    pub fn value(&self) -> usize {
        self.paths.len()
    }

    pub fn arc_set(&self) -> std::collections::BTreeSet<ArcId> {
        self.paths.iter().flatten().copied().collect()
    }
}

impl CutDigraph {
    pub fn new(n: usize, s: Vertex, t: Vertex) -> Self {
        assert!(s != t && s < n && t < n);
        CutDigraph {
            n,
            s,
            t,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, tail: Vertex, head: Vertex, soft: bool) -> ArcId {
        assert!(tail < self.n && head < self.n);
        self.arcs.push(CutArc { tail, head, soft });
        self.arcs.len() - 1
    }

    fn adjacency(&self, removed: &dyn Fn(ArcId) -> bool) -> Vec<Vec<(Vertex, ArcId)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (id, a) in self.arcs.iter().enumerate() {
            if !removed(id) {
                adj[a.tail].push((a.head, id));
            }
        }
        adj
    }

    /// Vertices reachable from `from` after removing the given arc ids.
    pub fn reachable_without(&self, from: Vertex, removed: &[ArcId]) -> Vec<bool> {
        let adj = self.adjacency(&|id| removed.contains(&id));
        let mut seen = vec![false; self.n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// True iff some all-crisp path connects s to t.
    pub fn has_crisp_st_path(&self) -> bool {
        let adj = self.adjacency(&|id| self.arcs[id].soft);
        let mut seen = vec![false; self.n];
        let mut stack = vec![self.s];
        seen[self.s] = true;
        while let Some(u) = stack.pop() {
            if u == self.t {
                return true;
            }
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        false
    }

    /// Maximum st-flow: soft arcs have capacity 1, crisp arcs behave as
    /// infinite capacity. Returns the witness path list; an all-crisp st-path
    /// makes the value infinite.
    pub fn max_flow(&self) -> (FlowValue, StFlow) {
        if self.has_crisp_st_path() {
            // witness: a single crisp path via BFS
            let path = self
                .shortest_path(self.s, self.t, &|id| self.arcs[id].soft)
                .expect("crisp path exists");
            return (FlowValue::Infinite, StFlow { paths: vec![path] });
        }
        let soft_count = self.arcs.iter().filter(|a| a.soft).count();
        let crisp_cap = (soft_count + 1) as i64;
        let mut flow: Vec<i64> = vec![0; self.arcs.len()];
        let cap = |id: ArcId| -> i64 {
            if self.arcs[id].soft {
                1
            } else {
                crisp_cap
            }
        };
        // Edmonds-Karp on the residual graph.
        loop {
            let mut pred: Vec<Option<(ArcId, bool)>> = vec![None; self.n]; // (arc, forward?)
            let mut seen = vec![false; self.n];
            let mut queue = std::collections::VecDeque::new();
            seen[self.s] = true;
            queue.push_back(self.s);
            'bfs: while let Some(u) = queue.pop_front() {
                for (id, a) in self.arcs.iter().enumerate() {
                    if a.tail == u && flow[id] < cap(id) && !seen[a.head] {
                        seen[a.head] = true;
                        pred[a.head] = Some((id, true));
                        if a.head == self.t {
                            break 'bfs;
                        }
                        queue.push_back(a.head);
                    }
                    if a.head == u && flow[id] > 0 && !seen[a.tail] {
                        seen[a.tail] = true;
                        pred[a.tail] = Some((id, false));
                        if a.tail == self.t {
                            break 'bfs;
                        }
                        queue.push_back(a.tail);
                    }
                }
            }
            if !seen[self.t] {
                break;
            }
            let mut v = self.t;
            while v != self.s {
                let (id, fwd) = pred[v].unwrap();
                if fwd {
                    flow[id] += 1;
                    v = self.arcs[id].tail;
                } else {
                    flow[id] -= 1;
                    v = self.arcs[id].head;
                }
            }
        }
        // Decompose the flow function into simple st-paths.
        let mut paths = Vec::new();
        loop {
            let mut path = Vec::new();
            let mut u = self.s;
            let mut visited = vec![false; self.n];
            visited[u] = true;
            let mut progressed = true;
            while u != self.t && progressed {
                progressed = false;
                for (id, a) in self.arcs.iter().enumerate() {
                    if a.tail == u && flow[id] > 0 && !visited[a.head] {
                        flow[id] -= 1;
                        path.push(id);
                        u = a.head;
                        visited[u] = true;
                        progressed = true;
                        break;
                    }
                }
            }
            if u == self.t && !path.is_empty() {
                paths.push(path);
            } else {
                break;
            }
        }
        (FlowValue::Finite(paths.len()), StFlow { paths })
    }

    fn shortest_path(
        &self,
        from: Vertex,
        to: Vertex,
        removed: &dyn Fn(ArcId) -> bool,
    ) -> Option<Vec<ArcId>> {
        let adj = self.adjacency(removed);
        let mut pred: Vec<Option<(Vertex, ArcId)>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = Vec::new();
                let mut v = to;
                while v != from {
                    let (p, id) = pred[v].unwrap();
                    path.push(id);
                    v = p;
                }
                path.reverse();
                return Some(path);
            }
            for &(v, id) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    pred[v] = Some((u, id));
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// True iff `z` (soft arcs only) meets every st-path.
    pub fn is_st_cut(&self, z: &[ArcId]) -> bool {
        if z.iter().any(|&id| !self.arcs[id].soft) {
            return false;
        }
        !self.reachable_without(self.s, z)[self.t]
    }

    /// A star st-cut: an st-cut in which every arc has its tail reachable
    /// from s and its head unreachable, in the graph minus the cut.
    pub fn is_star_st_cut(&self, z: &[ArcId]) -> bool {
        if !self.is_st_cut(z) {
            return false;
        }
        let reach = self.reachable_without(self.s, z);
        z.iter()
            .all(|&id| reach[self.arcs[id].tail] && !reach[self.arcs[id].head])
    }

    /// The unique minimal st-cut inside a star st-cut: the arcs whose heads
    /// still reach t in the graph minus the cut.
    pub fn core_of(&self, z: &[ArcId]) -> Result<Vec<ArcId>, CoreError> {
        if !self.is_star_st_cut(z) {
            return Err(CoreError::Precondition(
                "core is only defined for star st-cuts".into(),
            ));
        }
        let mut reaches_t = vec![false; self.n];
        // reverse reachability to t in G - Z
        let mut radj = vec![Vec::new(); self.n];
        for (id, a) in self.arcs.iter().enumerate() {
            if !z.contains(&id) {
                radj[a.head].push(a.tail);
            }
        }
        let mut stack = vec![self.t];
        reaches_t[self.t] = true;
        while let Some(u) = stack.pop() {
            for &v in &radj[u] {
                if !reaches_t[v] {
                    reaches_t[v] = true;
                    stack.push(v);
                }
            }
        }
        Ok(z.iter()
            .copied()
            .filter(|&id| reaches_t[self.arcs[id].head])
            .collect())
    }

    /// Witnessing flow check: the flow is a maximum flow whose paths each meet
    /// `z` exactly once and whose arcs intersect `z` exactly in the core.
    pub fn is_witnessing_flow(&self, flow: &StFlow, z: &[ArcId]) -> bool {
        match self.max_flow().0 {
            FlowValue::Finite(v) => {
                if v != flow.value() {
                    return false;
                }
            }
            FlowValue::Infinite => return false,
        }
        let core = match self.core_of(z) {
            Ok(c) => c,
            Err(_) => return false,
        };
        let zset: std::collections::BTreeSet<ArcId> = z.iter().copied().collect();
        let flow_arcs = flow.arc_set();
        let meet: std::collections::BTreeSet<ArcId> =
            flow_arcs.intersection(&zset).copied().collect();
        if meet != core.iter().copied().collect() {
            return false;
        }
        flow.paths
            .iter()
            .all(|p| p.iter().filter(|id| zset.contains(id)).count() == 1)
    }

    /// Compatibility of an arc set with a star st-cut: no pair may lead from
    /// the s-side to the t-side of the cut.
    pub fn is_compatible(&self, pairs: &[(Vertex, Vertex)], z: &[ArcId]) -> bool {
        let reach = self.reachable_without(self.s, z);
        pairs.iter().all(|&(u, v)| !(reach[u] && !reach[v]))
    }

    /// Graph with the pairs added as crisp arcs.
    pub fn augmented(&self, pairs: &[(Vertex, Vertex)]) -> CutDigraph {
        let mut g = self.clone();
        for &(u, v) in pairs {
            g.add_arc(u, v, false);
        }
        g
    }
}

/// Output of an augmentation: the crisp arc pairs and a maximum flow of the
/// augmented graph.
#[derive(Debug, Clone)]
pub struct Augmentation {
    pub pairs: Vec<(Vertex, Vertex)>,
    pub flow: StFlow,
}

fn side_arcs(g: &CutDigraph, s_side: &[bool], full: bool, z: &[ArcId]) -> Vec<(Vertex, Vertex)> {
    let mut pairs = Vec::new();
    for (u, &in_s) in s_side.iter().enumerate() {
        if in_s && u != g.s {
            pairs.push((g.s, u));
        }
    }
    if full {
        for (v, &in_s) in s_side.iter().enumerate() {
            if !in_s && v != g.t {
                pairs.push((v, g.t));
            }
        }
    } else {
        // only heads that still reach t in G - Z
        let mut radj = vec![Vec::new(); g.n];
        for (id, a) in g.arcs.iter().enumerate() {
            if !z.contains(&id) {
                radj[a.head].push(a.tail);
            }
        }
        let mut reaches_t = vec![false; g.n];
        let mut stack = vec![g.t];
        reaches_t[g.t] = true;
        while let Some(u) = stack.pop() {
            for &v in &radj[u] {
                if !reaches_t[v] {
                    reaches_t[v] = true;
                    stack.push(v);
                }
            }
        }
        for (v, &r) in reaches_t.iter().enumerate() {
            if r && v != g.t && !s_side[v] {
                pairs.push((v, g.t));
            }
        }
    }
    pairs
}

fn witness_paths_through(g: &CutDigraph, aug: &CutDigraph, cut: &[ArcId]) -> StFlow {
    // one path s -> u -> v -> t per cut arc (u, v), using the fresh crisp
    // arcs where needed
    let find_crisp = |tail: Vertex, head: Vertex| -> ArcId {
        aug.arcs
            .iter()
            .enumerate()
            .rev()
            .find(|(id, a)| {
                a.tail == tail && a.head == head && !a.soft && *id >= g.arcs.len()
            })
            .map(|(id, _)| id)
            .unwrap_or_else(|| panic!("expected fresh crisp arc ({tail},{head})"))
    };
    let mut paths = Vec::new();
    for &id in cut {
        let a = g.arcs[id];
        let mut p = Vec::new();
        if a.tail != g.s {
            p.push(find_crisp(g.s, a.tail));
        }
        p.push(id);
        if a.head != g.t {
            p.push(find_crisp(a.head, g.t));
        }
        paths.push(p);
    }
    StFlow { paths }
}

/// Augmentation that keeps the core of the star st-cut as the new st-mincut
/// while leaving arcs outside the core uncovered, so callers exercising the
/// lifting stage still see a gap between the cut and the flow value.
pub fn augment_oracle_core(g: &CutDigraph, z: &[ArcId]) -> Result<Augmentation, CoreError> {
    if !g.is_star_st_cut(z) {
        return Err(CoreError::Precondition("not a star st-cut".into()));
    }
    let s_side = g.reachable_without(g.s, z);
    let pairs = side_arcs(g, &s_side, false, z);
    let aug = g.augmented(&pairs);
    let core = g.core_of(z)?;
    let flow = witness_paths_through(g, &aug, &core);
    Ok(Augmentation { pairs, flow })
}

/// Augmentation that turns the whole star st-cut into an st-mincut of the
/// augmented graph, one cut arc per flow path.
pub fn augment_oracle_full(g: &CutDigraph, z: &[ArcId]) -> Result<Augmentation, CoreError> {
    if !g.is_star_st_cut(z) {
        return Err(CoreError::Precondition("not a star st-cut".into()));
    }
    let s_side = g.reachable_without(g.s, z);
    let pairs = side_arcs(g, &s_side, true, z);
    let aug = g.augmented(&pairs);
    let flow = witness_paths_through(g, &aug, z);
    Ok(Augmentation { pairs, flow })
}

/// Exhaustive augmentation: one candidate per bipartition (S, V \ S) with
/// s in S and t outside, each built like the full oracle variant from S and
/// paired with a maximum flow of the augmented graph. For every star st-cut
/// the branch with S equal to its s-side passes all three checkers.
pub fn augment_enumerate(
    g: &CutDigraph,
    cfg: &SolveConfig,
) -> Result<Vec<Augmentation>, CoreError> {
    if g.n > cfg.enum_vertices_cap {
        return Err(CoreError::CapExceeded(format!(
            "augmentation enumeration needs n <= {}, got {}",
            cfg.enum_vertices_cap, g.n
        )));
    }
    let others: Vec<Vertex> = (0..g.n).filter(|&v| v != g.s && v != g.t).collect();
    let mut out = Vec::new();
    for mask in 0..(1usize << others.len()) {
        let mut s_side = vec![false; g.n];
        s_side[g.s] = true;
        for (bit, &v) in others.iter().enumerate() {
            s_side[v] = mask >> bit & 1 == 1;
        }
        let pairs = side_arcs(g, &s_side, true, &[]);
        let aug = g.augmented(&pairs);
        let (_, flow) = aug.max_flow();
        out.push(Augmentation { pairs, flow });
    }
    Ok(out)
}

/// All soft arcs from the s-side set into its complement.
pub fn boundary_soft_arcs(g: &CutDigraph, s_side: &[bool]) -> Vec<ArcId> {
    g.arcs
        .iter()
        .enumerate()
        .filter(|(_, a)| a.soft && s_side[a.tail] && !s_side[a.head])
        .map(|(id, _)| id)
        .collect()
}
