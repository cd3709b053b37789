//! Mutable per-branch solver state for the pair-cut pipeline: a soft/crisp
//! multigraph under vertex identification, clause pairs, bundles and the
//! maintained flow paths. All operations here are sound on every branch
//! (they never turn a no-instance into a yes-instance); completeness is the
//! branching layers' concern.

use crate::flow::{CutDigraph, FlowValue};
use crate::gdpc::GdpcInstance;
use num_bigint::BigUint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ArcOrigin {
    /// Arc of the input instance with its original id.
    Original(usize),
    /// Crisp copies, augmentation arcs, bootstrap arcs, absorbed-path arcs,
    /// clause arcs of the reversal step. Never part of a pulled-back cut.
    Synthetic,
}

#[derive(Debug, Clone)]
pub(crate) struct WArc {
    pub tail: usize,
    pub head: usize,
    pub bundle: Option<usize>,
    pub alive: bool,
    pub origin: ArcOrigin,
}

#[derive(Debug, Clone)]
pub(crate) struct WClause {
    pub u: usize,
    pub v: usize,
    pub bundle: Option<usize>,
    pub alive: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct WBundle {
    pub arcs: Vec<usize>,
    pub clauses: Vec<usize>,
    pub weight: BigUint,
    pub alive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Ok,
    Reject,
    /// The empty cut solves the current residual instance.
    SolvedEmpty,
}

#[derive(Debug, Clone)]
pub struct WorkInstance {
    pub(crate) uf: Vec<usize>,
    pub(crate) s: usize,
    pub(crate) t: usize,
    pub(crate) arcs: Vec<WArc>,
    pub(crate) clauses: Vec<WClause>,
    pub(crate) bundles: Vec<WBundle>,
    pub(crate) k: i64,
    pub(crate) w: BigUint,
    pub(crate) w_exhausted: bool,
    /// Maintained flow paths as arc-index sequences.
    pub(crate) flow: Vec<Vec<usize>>,
    /// Original arc ids committed to the cut by bundle deletions.
    pub(crate) forced: Vec<usize>,
}

impl WorkInstance {
    pub(crate) fn from_instance(inst: &GdpcInstance) -> WorkInstance {
        let mut arcs = Vec::with_capacity(inst.graph.arcs.len());
        for (id, a) in inst.graph.arcs.iter().enumerate() {
            arcs.push(WArc {
                tail: a.tail,
                head: a.head,
                bundle: None,
                alive: true,
                origin: ArcOrigin::Original(id),
            });
        }
        let mut clauses = Vec::with_capacity(inst.clauses.len());
        for c in &inst.clauses {
            clauses.push(WClause {
                u: c.u,
                v: c.v,
                bundle: None,
                alive: true,
            });
        }
        let mut bundles = Vec::with_capacity(inst.bundles.len());
        for (bi, b) in inst.bundles.iter().enumerate() {
            for &a in &b.arcs {
                arcs[a].bundle = Some(bi);
            }
            for &c in &b.clauses {
                clauses[c].bundle = Some(bi);
            }
            bundles.push(WBundle {
                arcs: b.arcs.clone(),
                clauses: b.clauses.clone(),
                weight: b.weight.clone(),
                alive: true,
            });
        }
        WorkInstance {
            uf: (0..inst.graph.n).collect(),
            s: inst.graph.s,
            t: inst.graph.t,
            arcs,
            clauses,
            bundles,
            k: inst.k as i64,
            w: inst.w.clone(),
            w_exhausted: false,
            flow: Vec::new(),
            forced: Vec::new(),
        }
    }

    pub(crate) fn find(&self, mut v: usize) -> usize {
        while self.uf[v] != v {
            v = self.uf[v];
        }
        v
    }

    pub(crate) fn tail(&self, a: usize) -> usize {
        self.find(self.arcs[a].tail)
    }

    pub(crate) fn head(&self, a: usize) -> usize {
        self.find(self.arcs[a].head)
    }

    pub(crate) fn s(&self) -> usize {
        self.find(self.s)
    }

    pub(crate) fn t(&self) -> usize {
        self.find(self.t)
    }

    pub(crate) fn is_soft(&self, a: usize) -> bool {
        self.arcs[a].bundle.is_some()
    }

    pub(crate) fn alive_arcs(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.arcs.len()).filter(|&a| self.arcs[a].alive)
    }

    pub(crate) fn alive_clauses(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.clauses.len()).filter(|&c| self.clauses[c].alive)
    }

    /// A soft arc with no alive parallel crisp copy.
    pub(crate) fn deletable(&self, a: usize) -> bool {
        if !self.arcs[a].alive || !self.is_soft(a) {
            return false;
        }
        let (tl, hd) = (self.tail(a), self.head(a));
        !self.alive_arcs().any(|o| {
            !self.is_soft(o) && self.tail(o) == tl && self.head(o) == hd
        })
    }

    pub(crate) fn add_crisp(&mut self, tail: usize, head: usize) -> usize {
        self.arcs.push(WArc {
            tail,
            head,
            bundle: None,
            alive: true,
            origin: ArcOrigin::Synthetic,
        });
        self.arcs.len() - 1
    }

    pub(crate) fn add_crisp_copy(&mut self, a: usize) -> usize {
        let (tl, hd) = (self.tail(a), self.head(a));
        self.add_crisp(tl, hd)
    }

    /// Fresh soft arc in a fresh singleton bundle of the given weight.
    pub(crate) fn add_soft_singleton(&mut self, tail: usize, head: usize, weight: BigUint) -> usize {
        let aid = self.arcs.len();
        let bid = self.bundles.len();
        self.arcs.push(WArc {
            tail,
            head,
            bundle: Some(bid),
            alive: true,
            origin: ArcOrigin::Synthetic,
        });
        self.bundles.push(WBundle {
            arcs: vec![aid],
            clauses: vec![],
            weight,
            alive: true,
        });
        aid
    }

    /// Breaking a bundle: members stay in the instance but become crisp.
    pub(crate) fn break_bundle(&mut self, b: usize) {
        if !self.bundles[b].alive {
            return;
        }
        self.bundles[b].alive = false;
        for a in self.bundles[b].arcs.clone() {
            self.arcs[a].bundle = None;
        }
        for c in self.bundles[b].clauses.clone() {
            self.clauses[c].bundle = None;
        }
    }

    /// Deleting a bundle: remove its members, pay one unit of k and the
    /// bundle weight, commit its deletable arcs to the cut, and contract the
    /// flow paths that carried its deletable arcs.
    pub(crate) fn delete_bundle(&mut self, b: usize) {
        if !self.bundles[b].alive {
            return;
        }
        self.k -= 1;
        if self.bundles[b].weight > self.w {
            self.w_exhausted = true;
        } else {
            let bw = self.bundles[b].weight.clone();
            self.w -= bw;
        }
        let arcs = self.bundles[b].arcs.clone();
        let mut path_ops: Vec<(usize, usize, usize)> = Vec::new(); // (path, tail, head)
        for &a in &arcs {
            if self.deletable(a) {
                if let ArcOrigin::Original(id) = self.arcs[a].origin {
                    self.forced.push(id);
                }
                for (pi, path) in self.flow.iter().enumerate() {
                    if path.contains(&a) {
                        path_ops.push((pi, self.tail(a), self.head(a)));
                    }
                }
            }
        }
        self.bundles[b].alive = false;
        for a in arcs {
            self.arcs[a].bundle = None;
            self.arcs[a].alive = false;
        }
        for c in self.bundles[b].clauses.clone() {
            self.clauses[c].bundle = None;
            self.clauses[c].alive = false;
        }
        // contract affected flow paths onto s and t and drop them
        path_ops.sort_by_key(|&(pi, _, _)| std::cmp::Reverse(pi));
        path_ops.dedup_by_key(|&mut (pi, _, _)| pi);
        for (pi, tl, hd) in path_ops {
            self.contract_path_prefix(pi, tl);
            self.contract_path_suffix(pi, hd);
            self.flow.remove(pi);
        }
    }

    /// Vertex sequence of a flow path under the current identifications.
    pub(crate) fn path_vertices(&self, pi: usize) -> Vec<usize> {
        let mut seq = vec![self.s()];
        for &a in &self.flow[pi] {
            seq.push(self.head(a));
        }
        seq
    }

    fn union_into(&mut self, v: usize, target: usize) {
        let (rv, rt) = (self.find(v), self.find(target));
        if rv != rt {
            self.uf[rv] = rt;
        }
    }

    /// Re-trims every flow path so it starts at the last visit of s and ends
    /// at the first visit of t; bundles of trimmed-off deletable arcs break.
    fn normalize_paths(&mut self) {
        let s = self.s();
        let t = self.t();
        for pi in 0..self.flow.len() {
            loop {
                let seq = self.path_vertices(pi);
                // last occurrence of s
                let start = seq.iter().rposition(|&v| v == s).unwrap_or(0);
                // first occurrence of t at or after start
                let end = seq[start..]
                    .iter()
                    .position(|&v| v == t)
                    .map(|p| p + start)
                    .unwrap_or(seq.len() - 1);
                if start == 0 && end == seq.len() - 1 {
                    break;
                }
                let dropped: Vec<usize> = self.flow[pi][..start]
                    .iter()
                    .chain(self.flow[pi][end..].iter())
                    .copied()
                    .collect();
                let kept: Vec<usize> = self.flow[pi][start..end].to_vec();
                self.flow[pi] = kept;
                for a in dropped {
                    if self.deletable(a) {
                        if let Some(b) = self.arcs[a].bundle {
                            self.break_bundle(b);
                        }
                    }
                }
            }
        }
        self.flow.retain(|p| !p.is_empty());
        // self-loop arcs can never sit on an st-path or need cutting
        for a in 0..self.arcs.len() {
            if self.arcs[a].alive && self.tail(a) == self.head(a) {
                self.kill_arc(a);
            }
        }
    }

    fn kill_arc(&mut self, a: usize) {
        self.arcs[a].alive = false;
    }

    fn kill_clause(&mut self, c: usize) {
        self.clauses[c].alive = false;
    }

    pub(crate) fn contract_into_s(&mut self, v: usize) {
        self.union_into(v, self.s);
        self.normalize_paths();
    }

    pub(crate) fn contract_into_t(&mut self, v: usize) {
        self.union_into(v, self.t);
        self.normalize_paths();
    }

    /// Contracts path `pi` up to vertex `v` onto s: bundles of deletable arcs
    /// on the prefix break, then every prefix vertex merges into s.
    pub(crate) fn contract_path_prefix(&mut self, pi: usize, v: usize) {
        let seq = self.path_vertices(pi);
        let Some(pos) = seq.iter().position(|&x| x == self.find(v)) else {
            return;
        };
        for &a in &self.flow[pi][..pos].to_vec() {
            if self.deletable(a) {
                if let Some(b) = self.arcs[a].bundle {
                    self.break_bundle(b);
                }
            }
        }
        for &x in &seq[..=pos] {
            self.union_into(x, self.s);
        }
        self.normalize_paths();
    }

    /// Contracts path `pi` from vertex `v` onto t, symmetrically.
    pub(crate) fn contract_path_suffix(&mut self, pi: usize, v: usize) {
        let seq = self.path_vertices(pi);
        let Some(pos) = seq.iter().position(|&x| x == self.find(v)) else {
            return;
        };
        for &a in &self.flow[pi][pos..].to_vec() {
            if self.deletable(a) {
                if let Some(b) = self.arcs[a].bundle {
                    self.break_bundle(b);
                }
            }
        }
        for &x in &seq[pos..].to_vec() {
            self.union_into(x, self.t);
        }
        self.normalize_paths();
    }

    /// Reachability from `from` over alive arcs, minus the arcs in `removed`
    /// and, when `skip_t` is set, minus the vertex t.
    pub(crate) fn reachable(&self, from: usize, removed: &[usize], skip_t: bool) -> Vec<bool> {
        let t = self.t();
        let mut seen = vec![false; self.uf.len()];
        let from = self.find(from);
        if skip_t && from == t {
            return seen;
        }
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            for a in self.alive_arcs() {
                if removed.contains(&a) {
                    continue;
                }
                if self.tail(a) == u {
                    let h = self.head(a);
                    if skip_t && h == t {
                        continue;
                    }
                    if !seen[h] {
                        seen[h] = true;
                        stack.push(h);
                    }
                }
            }
        }
        seen
    }

    /// Exhaustive cleanup. Returns `Reject`, `SolvedEmpty` (the empty cut
    /// answers the residual instance) or `Ok`.
    pub(crate) fn cleanup(&mut self) -> Status {
        loop {
            let s = self.s();
            let t = self.t();
            if self.k < 0 || self.w_exhausted {
                return Status::Reject;
            }
            // crisp clause {s,s} or crisp arc (s,t)
            for c in self.alive_clauses().collect::<Vec<_>>() {
                let (u, v) = (self.find(self.clauses[c].u), self.find(self.clauses[c].v));
                if u == s && v == s && self.clauses[c].bundle.is_none() {
                    return Status::Reject;
                }
            }
            if self
                .alive_arcs()
                .any(|a| !self.is_soft(a) && self.tail(a) == s && self.head(a) == t)
            {
                return Status::Reject;
            }
            // contract crisp (s,v) and (v,t)
            let crisp_from_s = self
                .alive_arcs()
                .find(|&a| {
                    !self.is_soft(a) && self.tail(a) == s && self.head(a) != t && self.head(a) != s
                })
                .map(|a| self.head(a));
            if let Some(v) = crisp_from_s {
                self.contract_into_s(v);
                continue;
            }
            let crisp_to_t = self
                .alive_arcs()
                .find(|&a| {
                    !self.is_soft(a) && self.head(a) == t && self.tail(a) != s && self.tail(a) != t
                })
                .map(|a| self.tail(a));
            if let Some(v) = crisp_to_t {
                self.contract_into_t(v);
                continue;
            }
            // delete vertices unreachable from s in G - {t}
            let reach = self.reachable(self.s, &[], true);
            let mut changed = false;
            for a in self.alive_arcs().collect::<Vec<_>>() {
                let (tl, hd) = (self.tail(a), self.head(a));
                let dead_vertex = (tl != t && !reach[tl]) || (hd != t && !reach[hd]);
                // arcs with a tail in t or a head in s go as well
                if dead_vertex || tl == t || hd == s {
                    self.kill_arc(a);
                    changed = true;
                }
            }
            for c in self.alive_clauses().collect::<Vec<_>>() {
                let (u, v) = (self.find(self.clauses[c].u), self.find(self.clauses[c].v));
                let dead = u == t || v == t || (u != t && !reach[u]) || (v != t && !reach[v]);
                if dead {
                    self.kill_clause(c);
                    changed = true;
                }
            }
            if changed {
                self.normalize_paths();
                continue;
            }
            // soft clause {s,s} or soft arc (s,t): the bundle is violated
            let ss_bundle = self.alive_clauses().find_map(|c| {
                let (u, v) = (self.find(self.clauses[c].u), self.find(self.clauses[c].v));
                if u == s && v == s {
                    self.clauses[c].bundle
                } else {
                    None
                }
            });
            if let Some(b) = ss_bundle {
                self.delete_bundle(b);
                continue;
            }
            let st_bundle = self.alive_arcs().find_map(|a| {
                if self.is_soft(a) && self.tail(a) == s && self.head(a) == t {
                    self.arcs[a].bundle
                } else {
                    None
                }
            });
            if let Some(b) = st_bundle {
                self.delete_bundle(b);
                continue;
            }
            // base case: no flow left
            if self.flow.is_empty() {
                return match self.empty_cut_feasible() {
                    true => Status::SolvedEmpty,
                    false => Status::Reject,
                };
            }
            return Status::Ok;
        }
    }

    /// Whether the empty cut solves the residual instance.
    fn empty_cut_feasible(&self) -> bool {
        let reach = self.reachable(self.s, &[], false);
        if reach[self.t()] {
            return false;
        }
        let mut violated: Vec<usize> = Vec::new();
        for c in self.alive_clauses() {
            let (u, v) = (self.find(self.clauses[c].u), self.find(self.clauses[c].v));
            if reach[u] && reach[v] {
                match self.clauses[c].bundle {
                    None => return false,
                    Some(b) => {
                        if !violated.contains(&b) {
                            violated.push(b);
                        }
                    }
                }
            }
        }
        if violated.len() as i64 > self.k {
            return false;
        }
        let weight: BigUint = violated.iter().map(|&b| self.bundles[b].weight.clone()).sum();
        weight <= self.w
    }

    /// View of the alive arcs as a cut digraph plus the index map back.
    pub(crate) fn view(&self) -> (CutDigraph, Vec<usize>) {
        let mut g = CutDigraph::new(self.uf.len().max(self.t + 1), self.s(), self.t());
        let mut map = Vec::new();
        for a in self.alive_arcs() {
            g.add_arc(self.tail(a), self.head(a), self.is_soft(a));
            map.push(a);
        }
        (g, map)
    }

    /// Flow value of the current graph.
    pub(crate) fn lambda(&self) -> FlowValue {
        self.view().0.max_flow().0
    }

    /// The st-mincut closest to s over soft arcs, as work arc ids; None when
    /// the flow value is infinite (a crisp path survives). This is the forced
    /// candidate on exhaustively augmented branches, where the mincut is
    /// unique.
    pub fn closest_mincut_candidate(&self) -> Option<Vec<usize>> {
        let (g, map) = self.view();
        let (value, flow) = g.max_flow();
        value.finite()?;
        // residual reachability from s: forward along arcs with spare
        // capacity (crisp arcs are never saturated), backward along any
        // flow-carrying arc
        let carrying: std::collections::BTreeSet<usize> =
            flow.paths.iter().flatten().copied().collect();
        let mut seen = vec![false; g.n];
        seen[g.s] = true;
        let mut stack = vec![g.s];
        while let Some(u) = stack.pop() {
            for (id, a) in g.arcs.iter().enumerate() {
                let spare = !a.soft || !carrying.contains(&id);
                if a.tail == u && spare && !seen[a.head] {
                    seen[a.head] = true;
                    stack.push(a.head);
                }
                if a.head == u && carrying.contains(&id) && !seen[a.tail] {
                    seen[a.tail] = true;
                    stack.push(a.tail);
                }
            }
        }
        let cut: Vec<usize> = g
            .arcs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.soft && seen[a.tail] && !seen[a.head])
            .map(|(id, _)| map[id])
            .collect();
        Some(cut)
    }

    /// Maps a cut in work-arc ids back to original instance arc ids,
    /// including the arcs committed by bundle deletions.
    pub fn pull_back(&self, cut: &[usize]) -> Vec<usize> {
        let mut out = self.forced.clone();
        for &a in cut {
            if let ArcOrigin::Original(id) = self.arcs[a].origin {
                out.push(id);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of alive clauses.
    pub(crate) fn clause_count(&self) -> usize {
        self.alive_clauses().count()
    }

    /// Clause-free snapshot as a bundled-cut instance plus arc map.
    pub fn to_bundled_cut(
        &self,
    ) -> Option<(crate::bundledcut::BundledCutInstance, Vec<usize>)> {
        if self.clause_count() > 0 {
            return None;
        }
        let (graph, map) = self.view();
        let mut bundles = Vec::new();
        for b in &self.bundles {
            if !b.alive {
                continue;
            }
            let arcs: Vec<usize> = b
                .arcs
                .iter()
                .filter(|&&a| self.arcs[a].alive)
                .map(|&a| map.iter().position(|&m| m == a).unwrap())
                .collect();
            bundles.push(crate::bundledcut::BundledBundle {
                arcs,
                weight: b.weight.clone(),
            });
        }
        if self.k < 0 || self.w_exhausted {
            return None;
        }
        Some((
            crate::bundledcut::BundledCutInstance {
                graph,
                bundles,
                k: self.k as u64,
                w: self.w.clone(),
            },
            map,
        ))
    }

    /// Checks that the maintained flow is still a maximum flow (paths valid,
    /// soft-disjoint, value matches), rejecting the branch otherwise.
    pub(crate) fn flow_still_max(&self) -> bool {
        let s = self.s();
        let t = self.t();
        let mut used_soft = std::collections::BTreeSet::new();
        for pi in 0..self.flow.len() {
            let mut cur = s;
            for &a in &self.flow[pi] {
                if !self.arcs[a].alive || self.tail(a) != cur {
                    return false;
                }
                cur = self.head(a);
                if self.is_soft(a) && !used_soft.insert(a) {
                    return false;
                }
            }
            if cur != t {
                return false;
            }
        }
        matches!(self.lambda(), FlowValue::Finite(v) if v == self.flow.len())
    }

    /// Largest alive-arc count over alive bundles, at least 1.
    pub(crate) fn max_bundle_arcs(&self) -> usize {
        self.bundles
            .iter()
            .filter(|b| b.alive)
            .map(|b| b.arcs.iter().filter(|&&a| self.arcs[a].alive).count())
            .max()
            .unwrap_or(0)
            .max(1)
    }
}

/// Narrow debug surface for the instrumented tests.
impl WorkInstance {
    /// Branch state over an instance with an explicitly provided flow
    /// (arc-id paths); used to drive the clause-elimination stage directly
    /// on fixtures whose flow is already witnessing.
    pub fn from_instance_with_flow(inst: &GdpcInstance, paths: Vec<Vec<usize>>) -> WorkInstance {
        let mut w = WorkInstance::from_instance(inst);
        w.flow = paths;
        assert!(w.flow_still_max(), "provided flow must be a maximum flow");
        w
    }

    pub fn debug_arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn debug_is_soft(&self, a: usize) -> bool {
        self.arcs[a].alive && self.is_soft(a)
    }

    pub fn debug_view(&self) -> (CutDigraph, Vec<usize>) {
        self.view()
    }

    pub fn debug_add_crisp(&mut self, u: usize, v: usize) {
        self.add_crisp(u, v);
    }

    pub fn debug_flow(&self) -> &[Vec<usize>] {
        &self.flow
    }

    pub fn debug_budgets(&self) -> (i64, BigUint) {
        (self.k, self.w.clone())
    }
}
