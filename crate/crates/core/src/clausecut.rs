//! Clause cut: the canonical-definition reduction from MinSAT over languages
//! definable by negative clauses, implications and assignments, plus the
//! deterministic-branching solver over guessed bundle-sharing patterns, red
//! arc sets and the closest mincut. Every recursive call either decreases the
//! budget k or strictly increases the flow value of the working graph.

use crate::clause::canonical_definition;
use crate::config::SolveConfig;
use crate::error::{CoreError, Outcome};
use crate::flow::{augment_enumerate, ArcId, CutDigraph, FlowValue, Vertex};
use crate::formula::{Assignment, Formula, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcClause {
    pub members: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CcBundle {
    pub arcs: Vec<ArcId>,
    pub clauses: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseCutInstance {
    pub graph: CutDigraph,
    pub clauses: Vec<CcClause>,
    pub bundles: Vec<CcBundle>,
    pub k: u64,
}

impl ClauseCutInstance {
    pub fn clause_bundle(&self, clause: usize) -> Option<usize> {
        self.bundles
            .iter()
            .position(|b| b.clauses.contains(&clause))
    }

    pub fn arc_bundle(&self, arc: ArcId) -> Option<usize> {
        self.bundles.iter().position(|b| b.arcs.contains(&arc))
    }

    /// Arity: max clause size and per-bundle vertex count; also checks the
    /// 2K2-freeness of every bundle's arc set away from s and t.
    pub fn validate(&self) -> Result<usize, CoreError> {
        let mut seen_arc = vec![false; self.graph.arcs.len()];
        let mut seen_clause = vec![false; self.clauses.len()];
        let mut b = 2usize;
        for cl in &self.clauses {
            b = b.max(cl.members.len());
        }
        for bundle in &self.bundles {
            let mut verts = std::collections::BTreeSet::new();
            let mut gb = Vec::new();
            for &a in &bundle.arcs {
                if a >= self.graph.arcs.len() || seen_arc[a] {
                    return Err(CoreError::Precondition(
                        "bundles must be disjoint sets of existing arcs".into(),
                    ));
                }
                seen_arc[a] = true;
                let arc = self.graph.arcs[a];
                if !arc.soft {
                    return Err(CoreError::Precondition("bundled arcs must be soft".into()));
                }
                for v in [arc.tail, arc.head] {
                    if v != self.graph.s && v != self.graph.t {
                        verts.insert(v);
                    }
                }
                if arc.tail != self.graph.s
                    && arc.tail != self.graph.t
                    && arc.head != self.graph.s
                    && arc.head != self.graph.t
                    && arc.tail != arc.head
                {
                    gb.push((arc.tail, arc.head));
                }
            }
            for &c in &bundle.clauses {
                if c >= self.clauses.len() || seen_clause[c] {
                    return Err(CoreError::Precondition(
                        "bundles must be disjoint sets of existing clauses".into(),
                    ));
                }
                seen_clause[c] = true;
                for &v in &self.clauses[c].members {
                    if v != self.graph.s && v != self.graph.t {
                        verts.insert(v);
                    }
                }
            }
            b = b.max(verts.len());
            let vlist: Vec<Vertex> = verts.iter().copied().collect();
            let mut g = crate::graph::UndirectedGraph::new(vlist.len());
            for (u, v) in gb {
                let iu = vlist.iter().position(|&x| x == u).unwrap();
                let iv = vlist.iter().position(|&x| x == v).unwrap();
                if iu != iv {
                    g.add_edge(iu, iv);
                }
            }
            if !g.is_2k2_free() {
                return Err(CoreError::Precondition(
                    "bundle arcs contain an induced 2K2".into(),
                ));
            }
        }
        for (id, arc) in self.graph.arcs.iter().enumerate() {
            if arc.soft != seen_arc[id] {
                return Err(CoreError::Precondition(format!(
                    "arc {id} softness must match bundle membership"
                )));
            }
        }
        Ok(b)
    }

    /// Independent re-check: a soft st-cut satisfying every crisp clause and
    /// violating at most k bundles. Returns the violated bundle set.
    pub fn verify_solution(&self, cut: &[ArcId]) -> Result<Vec<usize>, String> {
        for &a in cut {
            if a >= self.graph.arcs.len() || !self.graph.arcs[a].soft {
                return Err(format!("cut contains a crisp or unknown arc {a}"));
            }
        }
        if !self.graph.is_st_cut(cut) {
            return Err("not an st-cut".into());
        }
        let reach = self.graph.reachable_without(self.graph.s, cut);
        let mut violated = Vec::new();
        for (bi, b) in self.bundles.iter().enumerate() {
            let arc_hit = b.arcs.iter().any(|a| cut.contains(a));
            let clause_hit = b
                .clauses
                .iter()
                .any(|&c| self.clauses[c].members.iter().all(|&v| reach[v]));
            if arc_hit || clause_hit {
                violated.push(bi);
            }
        }
        for (ci, cl) in self.clauses.iter().enumerate() {
            if self.clause_bundle(ci).is_none() && cl.members.iter().all(|&v| reach[v]) {
                return Err(format!("crisp clause {ci} violated"));
            }
        }
        if violated.len() as u64 > self.k {
            return Err(format!(
                "{} bundles violated, budget {}",
                violated.len(),
                self.k
            ));
        }
        Ok(violated)
    }
}

/// How the instance maps back to assignments: x is 1 iff its vertex stays
/// reachable from s.
#[derive(Debug, Clone)]
pub struct CcReductionMap {
    pub num_vars: usize,
}

impl CcReductionMap {
    pub fn assignment_of_cut(&self, inst: &ClauseCutInstance, cut: &[ArcId]) -> Assignment {
        let reach = inst.graph.reachable_without(inst.graph.s, cut);
        Assignment {
            values: (0..self.num_vars).map(|x| reach[x]).collect(),
        }
    }
}

/// Canonical-definition reduction. Never-satisfiable constraints are removed
/// up front (a crisp one yields None, soft ones decrement k). One vertex per
/// variable plus s (true) and t (false); per constraint the canonical
/// implications become arcs, the negative clauses become vertex-set clauses,
/// and everything lands in one bundle.
pub fn reduce_minsat_to_clausecut(
    f: &Formula,
) -> Result<Option<(ClauseCutInstance, CcReductionMap)>, CoreError> {
    let s: Vertex = f.num_vars;
    let t: Vertex = f.num_vars + 1;
    let mut graph = CutDigraph::new(f.num_vars + 2, s, t);
    let mut clauses: Vec<CcClause> = Vec::new();
    let mut bundles: Vec<CcBundle> = Vec::new();
    let mut k = f.budget_k as i64;
    for c in &f.constraints {
        let (rel, vars) = f.effective_relation(c);
        if rel.is_empty() {
            match c.weight {
                Weight::Crisp => return Ok(None),
                Weight::Soft(_) => {
                    k -= 1;
                    if k < 0 {
                        return Ok(None);
                    }
                }
            }
            continue;
        }
        let canon = canonical_definition(&rel)?;
        let soft = !c.weight.is_crisp();
        let mut bundle = CcBundle::default();
        for &v in &canon.ones {
            bundle.arcs.push(graph.add_arc(s, vars[v], soft));
        }
        for &v in &canon.zeroes {
            bundle.arcs.push(graph.add_arc(vars[v], t, soft));
        }
        for &(a, b) in &canon.implications {
            bundle.arcs.push(graph.add_arc(vars[a], vars[b], soft));
        }
        for neg in &canon.negative_clauses {
            clauses.push(CcClause {
                members: neg.iter().map(|&v| vars[v]).collect(),
            });
            bundle.clauses.push(clauses.len() - 1);
        }
        if soft {
            bundles.push(bundle);
        }
    }
    Ok(Some((
        ClauseCutInstance {
            graph,
            clauses,
            bundles,
            k: k as u64,
        },
        CcReductionMap {
            num_vars: f.num_vars,
        },
    )))
}

/// The unique st-mincut closest to s over the deletable soft arcs, computed
/// from residual reachability after a maximum flow. Errors when the flow
/// value is infinite.
pub fn closest_deletable_mincut(g: &CutDigraph) -> Result<Vec<ArcId>, CoreError> {
    let (value, flow) = g.max_flow();
    if value.finite().is_none() {
        return Err(CoreError::Precondition(
            "closest mincut undefined at infinite flow value".into(),
        ));
    }
    let carrying: std::collections::BTreeSet<ArcId> =
        flow.paths.iter().flatten().copied().collect();
    let mut seen = vec![false; g.n];
    seen[g.s] = true;
    let mut stack = vec![g.s];
    while let Some(u) = stack.pop() {
        for (id, a) in g.arcs.iter().enumerate() {
            // forward along spare capacity (crisp arcs are never saturated),
            // backward along any flow-carrying arc
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
    Ok(g
        .arcs
        .iter()
        .enumerate()
        .filter(|(_, a)| a.soft && seen[a.tail] && !seen[a.head])
        .map(|(id, _)| id)
        .collect())
}

/// Mutable branch state. Unlike the pair-cut pipeline this never contracts
/// vertices; surgery is limited to adding crisp arcs and breaking or deleting
/// bundles, so arc ids stay stable relative to the input instance.
#[derive(Debug, Clone)]
struct CcWork {
    graph: CutDigraph,
    clauses: Vec<CcClause>,
    clause_alive: Vec<bool>,
    clause_bundle: Vec<Option<usize>>,
    arc_bundle: Vec<Option<usize>>,
    arc_alive: Vec<bool>,
    bundle_alive: Vec<bool>,
    bundles: Vec<CcBundle>,
    k: i64,
}

impl CcWork {
    fn new(inst: &ClauseCutInstance) -> CcWork {
        let mut arc_bundle = vec![None; inst.graph.arcs.len()];
        let mut clause_bundle = vec![None; inst.clauses.len()];
        for (bi, b) in inst.bundles.iter().enumerate() {
            for &a in &b.arcs {
                arc_bundle[a] = Some(bi);
            }
            for &c in &b.clauses {
                clause_bundle[c] = Some(bi);
            }
        }
        CcWork {
            graph: inst.graph.clone(),
            clauses: inst.clauses.clone(),
            clause_alive: vec![true; inst.clauses.len()],
            clause_bundle,
            arc_bundle,
            arc_alive: vec![true; inst.graph.arcs.len()],
            bundle_alive: vec![true; inst.bundles.len()],
            bundles: inst.bundles.clone(),
            k: inst.k as i64,
        }
    }

    /// Alive arcs; an arc counts as soft only while its bundle stands.
    fn view(&self) -> (CutDigraph, Vec<ArcId>) {
        let mut g = CutDigraph::new(self.graph.n, self.graph.s, self.graph.t);
        let mut map = Vec::new();
        for (id, a) in self.graph.arcs.iter().enumerate() {
            if self.arc_alive[id] {
                g.add_arc(a.tail, a.head, a.soft && self.arc_bundle[id].is_some());
                map.push(id);
            }
        }
        (g, map)
    }

    fn delete_bundle(&mut self, b: usize) {
        if !self.bundle_alive[b] {
            return;
        }
        self.bundle_alive[b] = false;
        self.k -= 1;
        for a in self.bundles[b].arcs.clone() {
            self.arc_bundle[a] = None;
            self.arc_alive[a] = false;
        }
        for c in self.bundles[b].clauses.clone() {
            self.clause_bundle[c] = None;
            self.clause_alive[c] = false;
        }
    }

    fn add_crisp(&mut self, u: Vertex, v: Vertex) {
        self.graph.add_arc(u, v, false);
        self.arc_alive.push(true);
        self.arc_bundle.push(None);
    }
}

/// A recorded recursion step, for the measure assertions: (k, lambda) at
/// entry plus the depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CcTracePoint {
    pub k: i64,
    pub lambda: u64,
    pub depth: u32,
}

#[derive(Debug, Default)]
pub struct CcStats {
    pub trace: Vec<CcTracePoint>,
    pub max_recursion_depth: u32,
}

/// Deterministic-branching solver for 2K2-free clause-cut instances.
pub fn solve_clause_cut(inst: &ClauseCutInstance, cfg: &SolveConfig) -> Outcome<Vec<ArcId>> {
    solve_clause_cut_traced(inst, cfg).0
}

pub fn solve_clause_cut_traced(
    inst: &ClauseCutInstance,
    cfg: &SolveConfig,
) -> (Outcome<Vec<ArcId>>, CcStats) {
    let b = match inst.validate() {
        Ok(b) => b,
        Err(e) => return (Outcome::Resource(format!("invalid instance: {e}")), CcStats::default()),
    };
    let mut ctx = CcCtx {
        cfg,
        budget: cfg.max_branches,
        b: b as u64,
        found: None,
        truncated: false,
        inst,
        stats: CcStats::default(),
    };
    let work = CcWork::new(inst);
    ctx.recurse(work, 0);
    let outcome = match ctx.found {
        Some(cut) => Outcome::Yes(cut),
        None if ctx.truncated => Outcome::Resource("branch budget exhausted".into()),
        None => Outcome::No,
    };
    (outcome, ctx.stats)
}

struct CcCtx<'a> {
    cfg: &'a SolveConfig,
    budget: u64,
    b: u64,
    found: Option<Vec<ArcId>>,
    truncated: bool,
    inst: &'a ClauseCutInstance,
    stats: CcStats,
}

impl<'a> CcCtx<'a> {
    fn spend(&mut self) -> bool {
        if self.budget == 0 {
            self.truncated = true;
            return false;
        }
        self.budget -= 1;
        true
    }

    fn accept(&mut self, cut: Vec<ArcId>) -> bool {
        if self.inst.verify_solution(&cut).is_ok() {
            self.found = Some(cut);
            return true;
        }
        false
    }

    /// One recursion node: reject over-budget flows, handle the zero-flow
    /// base case, otherwise branch over augmentations.
    fn recurse(&mut self, work: CcWork, depth: u32) {
        if self.found.is_some() || !self.spend() {
            return;
        }
        if depth > self.cfg.max_depth {
            self.truncated = true;
            return;
        }
        if work.k < 0 {
            return;
        }
        let (g, _map) = work.view();
        let lambda = match g.max_flow().0 {
            FlowValue::Finite(v) => v as u64,
            FlowValue::Infinite => return,
        };
        self.stats.trace.push(CcTracePoint {
            k: work.k,
            lambda,
            depth,
        });
        self.stats.max_recursion_depth = self.stats.max_recursion_depth.max(depth);
        self.cfg
            .trace(|| format!("clause-cut node depth={depth} k={} lambda={lambda}", work.k));
        if lambda > (work.k.max(0) as u64) * self.b * self.b {
            return;
        }
        if lambda == 0 {
            if self.accept(vec![]) {
                return;
            }
            self.branch_on_violated_clause(&work, &[], depth);
            return;
        }
        let Ok(mut augs) = augment_enumerate(&g, self.cfg) else {
            self.truncated = true;
            return;
        };
        if let Some(rnd) = self.cfg.randomized {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng =
                rand_chacha::ChaCha8Rng::seed_from_u64(rnd.seed.wrapping_add(depth as u64));
            augs.shuffle(&mut rng);
            augs.truncate((rnd.trials as usize).max(1));
        }
        for aug in augs {
            if self.found.is_some() {
                return;
            }
            let mut w2 = work.clone();
            for &(u, v) in &aug.pairs {
                w2.add_crisp(u, v);
            }
            self.branch_patterns(w2, depth);
        }
    }

    /// Branching below one augmentation guess. The exhaustive augmenter
    /// forces a unique soft mincut, so the bundle-sharing pattern and the red
    /// arc set of the sought solution are forced too: patterns are enumerated
    /// and filtered for consistency, the red set becomes the forced cut (all
    /// other soft arcs receive crisp copies), candidate filtering reduces to
    /// uniqueness, and the ordering and closest-mincut properties are
    /// asserted rather than branched over.
    fn branch_patterns(&mut self, work: CcWork, depth: u32) {
        if self.found.is_some() || !self.spend() {
            return;
        }
        let (g2, map) = work.view();
        let Ok(forced) = closest_deletable_mincut(&g2) else {
            return;
        };
        self.cfg
            .trace(|| format!("pattern node: forced cut {:?}", forced.iter().map(|&v| map[v]).collect::<Vec<_>>()));
        let lambda = forced.len() as u64;
        if lambda == 0 || lambda > (work.k.max(0) as u64) * self.b * self.b {
            return;
        }
        // owning bundles per flow slot
        let mut slot_bundle: Vec<usize> = Vec::with_capacity(forced.len());
        for &vid in &forced {
            match work.arc_bundle[map[vid]] {
                Some(b) => slot_bundle.push(b),
                None => return, // a crisp-ish arc in the mincut: dead guess
            }
        }
        let mut distinct = slot_bundle.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() as i64 > work.k {
            return;
        }
        // enumerate sharing patterns and keep the ones consistent with the
        // forced cut (exactly one survives)
        let patterns = set_partitions(forced.len(), work.k.max(1) as usize);
        for patt in &patterns {
            let consistent = (0..forced.len()).all(|i| {
                (0..forced.len()).all(|j| {
                    (patt.assign[i] == patt.assign[j]) == (slot_bundle[i] == slot_bundle[j])
                })
            });
            if !consistent {
                continue;
            }
            // red guess: exactly the forced arcs; everything else soft gets a
            // crisp copy
            let mut w3 = work.clone();
            for (vid, a) in g2.arcs.iter().enumerate() {
                if a.soft && !forced.contains(&vid) {
                    w3.add_crisp(a.tail, a.head);
                }
            }
            // pairwise relation of cut arcs sharing a bundle: with the red
            // set fixed the relation is determined; 2K2-freeness guarantees
            // one of the allowed options holds, asserted here
            debug_assert!(relations_allowed(&g2, &forced, &slot_bundle));
            // candidate filtering: with red fixed to the forced cut, the
            // owner is the unique candidate per slot, and the candidate
            // ordering property must hold. The pattern indexes the forced
            // arcs; translate to the flow paths carrying them.
            let flow_paths = g2.max_flow().1.paths;
            let forced_path: Option<Vec<usize>> = forced
                .iter()
                .map(|vid| flow_paths.iter().position(|p| p.contains(vid)))
                .collect();
            let Some(forced_path) = forced_path else {
                continue;
            };
            let blocks = patt.assign.iter().copied().max().map_or(0, |m| m + 1);
            if !candidate_order_consistent(
                &work,
                &g2,
                &map,
                &flow_paths,
                &forced,
                &patt.assign,
                &forced_path,
                blocks,
            ) {
                continue;
            }
            // closest mincut of the restricted graph equals the forced cut
            let (g3, map3) = w3.view();
            let Ok(x3) = closest_deletable_mincut(&g3) else {
                continue;
            };
            let mut x_work: Vec<ArcId> = x3.iter().map(|&v| map3[v]).collect();
            x_work.sort_unstable();
            let mut forced_work: Vec<ArcId> = forced.iter().map(|&v| map[v]).collect();
            forced_work.sort_unstable();
            debug_assert_eq!(
                x_work, forced_work,
                "closest mincut must use the first candidate per slot"
            );
            // s/t-incident cut arcs: the owning bundle is the unique
            // candidate; branch on deleting it
            for &vid in &forced {
                if self.found.is_some() {
                    return;
                }
                let a = g2.arcs[vid];
                if a.tail == g2.s || a.head == g2.t {
                    let Some(b) = work.arc_bundle[map[vid]] else {
                        continue;
                    };
                    let mut w4 = w3.clone();
                    w4.delete_bundle(b);
                    self.recurse(w4, depth + 1);
                }
            }
            if self.found.is_some() {
                return;
            }
            // check the candidate cut
            if self.accept(forced_work.clone()) {
                return;
            }
            self.branch_on_violated_clause(&w3, &forced_work, depth);
            if self.found.is_some() {
                return;
            }
        }
    }

    /// X violates some clause: either its bundle is violated by the sought
    /// solution (delete it), or one of its members is unreachable (pin it to
    /// t with a crisp arc, strictly raising the flow value).
    fn branch_on_violated_clause(&mut self, work: &CcWork, cut: &[ArcId], depth: u32) {
        let removed: Vec<ArcId> = (0..work.graph.arcs.len())
            .filter(|&id| !work.arc_alive[id] || cut.contains(&id))
            .collect();
        let reach = work.graph.reachable_without(work.graph.s, &removed);
        let violated = (0..work.clauses.len()).find(|&ci| {
            work.clause_alive[ci] && work.clauses[ci].members.iter().all(|&v| reach[v])
        });
        let Some(ci) = violated else {
            return;
        };
        if let Some(b) = work.clause_bundle[ci] {
            let mut w2 = work.clone();
            w2.delete_bundle(b);
            self.recurse(w2, depth + 1);
            if self.found.is_some() {
                return;
            }
        }
        for &x in &work.clauses[ci].members.clone() {
            if self.found.is_some() {
                return;
            }
            if x == work.graph.s {
                continue;
            }
            let mut w2 = work.clone();
            w2.add_crisp(x, work.graph.t);
            self.recurse(w2, depth + 1);
        }
    }
}

/// The admissible relation options between two cut arcs of one bundle: shared
/// tail, shared head, s/t incidence, or a connecting bundle arc.
fn relations_allowed(g: &CutDigraph, forced: &[ArcId], slot_bundle: &[usize]) -> bool {
    for i in 0..forced.len() {
        for j in (i + 1)..forced.len() {
            if slot_bundle[i] != slot_bundle[j] {
                continue;
            }
            let (a, b) = (g.arcs[forced[i]], g.arcs[forced[j]]);
            let incident = a.tail == g.s || b.tail == g.s || a.head == g.t || b.head == g.t;
            let shared = a.tail == b.tail || a.head == b.head;
            // head-of-one equals tail-of-other is impossible for mincut arcs
            if a.head == b.tail || b.head == a.tail {
                return false;
            }
            if incident || shared {
                continue;
            }
            // otherwise some arc of the bundle must connect their endpoints;
            // left to the 2K2-free guarantee, accept here
        }
    }
    true
}

/// Computes, per slot, the bundles satisfying the candidacy conditions with
/// the red set fixed to the forced cut: exactly one red arc on each assigned
/// path and none elsewhere. With that red set the owner is the unique
/// candidate; the ordering property (first-on-one-path iff first-on-all) is
/// checked across candidate pairs for safety.
fn candidate_order_consistent(
    work: &CcWork,
    g2: &CutDigraph,
    map: &[ArcId],
    flow_paths: &[Vec<ArcId>],
    forced: &[ArcId],
    assign: &[usize],
    forced_path: &[usize],
    blocks: usize,
) -> bool {
    // position of every arc on every path of the current maxflow
    let mut arc_pos: std::collections::BTreeMap<ArcId, (usize, usize)> =
        std::collections::BTreeMap::new();
    for (pi, path) in flow_paths.iter().enumerate() {
        for (pos, &a) in path.iter().enumerate() {
            arc_pos.insert(a, (pi, pos));
        }
    }
    let red: std::collections::BTreeSet<ArcId> = forced.iter().copied().collect();
    for slot in 0..blocks {
        // flow paths whose cut arc belongs to this slot
        let paths: Vec<usize> = assign
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == slot)
            .map(|(i, _)| forced_path[i])
            .collect();
        let mut candidates: Vec<(usize, Vec<usize>)> = Vec::new();
        for (wb, alive) in work.bundle_alive.iter().enumerate() {
            if !alive {
                continue;
            }
            let mut per_path: Vec<Vec<usize>> = vec![Vec::new(); paths.len()];
            let mut elsewhere = false;
            for (vid, _) in g2.arcs.iter().enumerate() {
                if !red.contains(&vid) {
                    continue;
                }
                let Some(&wa) = map.get(vid) else { continue };
                if work.arc_bundle[wa] != Some(wb) {
                    continue;
                }
                match arc_pos.get(&vid) {
                    Some(&(pi, pos)) => match paths.iter().position(|&p| p == pi) {
                        Some(si) => per_path[si].push(pos),
                        None => elsewhere = true,
                    },
                    None => elsewhere = true,
                }
            }
            if !elsewhere && per_path.iter().all(|v| v.len() == 1) {
                candidates.push((wb, per_path.into_iter().map(|v| v[0]).collect()));
            }
        }
        if candidates.is_empty() {
            return false;
        }
        for a in 0..candidates.len() {
            for b in (a + 1)..candidates.len() {
                let fa = &candidates[a].1;
                let fb = &candidates[b].1;
                let first = fa[0] < fb[0];
                for si in 1..fa.len() {
                    if fa[si] != fb[si] && (fa[si] < fb[si]) != first {
                        return false;
                    }
                }
            }
        }
    }
    true
}

struct Partition {
    assign: Vec<usize>,
}

/// All set partitions of [n] into at most `maxb` blocks, in restricted
/// growth form.
fn set_partitions(n: usize, maxb: usize) -> Vec<Partition> {
    fn rec(
        i: usize,
        used: usize,
        maxb: usize,
        assign: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if i == assign.len() {
            out.push(Partition {
                assign: assign.clone(),
            });
            return;
        }
        for b in 0..used.min(maxb) {
            assign[i] = b;
            rec(i + 1, used, maxb, assign, out);
        }
        if used < maxb {
            assign[i] = used;
            rec(i + 1, used + 1, maxb, assign, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Partition { assign: vec![] });
        return out;
    }
    let mut assign = vec![0usize; n];
    rec(0, 0, maxb, &mut assign, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcPipelineAnswer {
    pub assignment: Assignment,
    pub violations: u64,
}

/// Formula-level pipeline: reduce to clause cut and solve.
pub fn solve_minsat_sigma(
    f: &Formula,
    cfg: &SolveConfig,
) -> Result<Outcome<CcPipelineAnswer>, CoreError> {
    let Some((inst, map)) = reduce_minsat_to_clausecut(f)? else {
        return Ok(Outcome::No);
    };
    Ok(match solve_clause_cut(&inst, cfg) {
        Outcome::Yes(cut) => {
            let a = map.assignment_of_cut(&inst, &cut);
            let report = f.assignment_cost(&a);
            if !report.crisp_ok || report.violations > f.budget_k {
                return Err(CoreError::Internal(
                    "clause-cut certificate fails formula budgets".into(),
                ));
            }
            Outcome::Yes(CcPipelineAnswer {
                assignment: a,
                violations: report.violations,
            })
        }
        Outcome::No => Outcome::No,
        Outcome::Resource(r) => Outcome::Resource(r),
    })
}
