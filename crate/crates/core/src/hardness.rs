//! Hardness-side instance generators: the paired minimum s,t-cut problem,
//! its construction from multicolored clique instances, and the gadget
//! reductions that turn paired-cut instances into (weighted) MinSAT
//! formulas over languages with the respective structural obstructions.

use crate::error::CoreError;
use crate::flow::{ArcId, CutDigraph, Vertex};
use crate::formula::{Formula, Weight};
use crate::language::Language;
use crate::relation::BooleanRelation;

/// A k-partite graph with parts of (possibly unequal) sizes; vertex (p, i) is
/// the i-th vertex of part p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPartiteGraph {
    pub sizes: Vec<usize>,
    pub edges: Vec<((usize, usize), (usize, usize))>,
}

impl KPartiteGraph {
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn has_edge(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        self.edges.contains(&(a, b)) || self.edges.contains(&(b, a))
    }

    /// Exhaustive multicolored clique test (one vertex per part, pairwise
    /// adjacent).
    pub fn has_multicolored_clique(&self) -> bool {
        let k = self.k();
        let mut choice = vec![0usize; k];
        loop {
            let ok = (0..k).all(|i| {
                ((i + 1)..k).all(|j| self.has_edge((i, choice[i]), (j, choice[j])))
            });
            if ok {
                return true;
            }
            // next choice vector
            let mut p = 0;
            loop {
                if p == k {
                    return false;
                }
                choice[p] += 1;
                if choice[p] < self.sizes[p] {
                    break;
                }
                choice[p] = 0;
                p += 1;
            }
        }
    }
}

/// Paired minimum s,t-cut instance: an acyclic soft digraph, a perfect
/// matching on its arcs and a partition of the arcs into 2*ell st-paths.
#[derive(Debug, Clone)]
pub struct PairedCutInstance {
    pub dag: CutDigraph,
    pub ell: usize,
    pub pairing: Vec<(ArcId, ArcId)>,
    pub paths: Vec<Vec<ArcId>>,
}

impl PairedCutInstance {
    pub fn validate(&self) -> Result<(), CoreError> {
        // pairing is a perfect matching on the arcs
        let mut seen = vec![false; self.dag.arcs.len()];
        for &(a, b) in &self.pairing {
            if a == b || seen[a] || seen[b] {
                return Err(CoreError::Precondition("pairing is not a matching".into()));
            }
            seen[a] = true;
            seen[b] = true;
        }
        if !seen.iter().all(|&x| x) {
            return Err(CoreError::Precondition("pairing is not perfect".into()));
        }
        // paths partition the arcs
        let mut on_path = vec![false; self.dag.arcs.len()];
        for p in &self.paths {
            let mut cur = self.dag.s;
            for &a in p {
                if on_path[a] || self.dag.arcs[a].tail != cur {
                    return Err(CoreError::Precondition("paths must partition the arcs".into()));
                }
                on_path[a] = true;
                cur = self.dag.arcs[a].head;
            }
            if cur != self.dag.t {
                return Err(CoreError::Precondition("path does not end in t".into()));
            }
        }
        if !on_path.iter().all(|&x| x) {
            return Err(CoreError::Precondition("paths must cover every arc".into()));
        }
        // acyclicity
        let n = self.dag.n;
        let mut indeg = vec![0usize; n];
        for a in &self.dag.arcs {
            indeg[a.head] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen_v = 0;
        while let Some(u) = queue.pop() {
            seen_v += 1;
            for a in &self.dag.arcs {
                if a.tail == u {
                    indeg[a.head] -= 1;
                    if indeg[a.head] == 0 {
                        queue.push(a.head);
                    }
                }
            }
        }
        if seen_v != n {
            return Err(CoreError::Precondition("instance graph has a cycle".into()));
        }
        Ok(())
    }
}

/// Multicolored-clique construction: one arc per edge end, pairs matching the
/// two ends, 2*binom(k,2) paths ordered by first subscript, block boundaries
/// identified across paths of one part. Gaps with no edges are spanned by
/// filler arcs paired within their own path, which no budget-respecting cut
/// can afford to use.
pub fn gen_paired_cut(g: &KPartiteGraph) -> Result<PairedCutInstance, CoreError> {
    let k = g.k();
    if k < 2 {
        return Err(CoreError::Precondition("need at least two parts".into()));
    }
    if g.sizes.iter().any(|&s| s == 0) {
        return Err(CoreError::Precondition("parts must be non-empty".into()));
    }
    for &((p, i), (q, j)) in &g.edges {
        if p == q {
            return Err(CoreError::Precondition("parts must be independent".into()));
        }
        if i >= g.sizes[p] || j >= g.sizes[q] {
            return Err(CoreError::Precondition("edge endpoint out of range".into()));
        }
    }
    let n = *g.sizes.iter().max().unwrap();
    let ell = k * (k - 1) / 2;

    // vertex layout: 0 = s, 1 = t, then u_{i,r} for r in 2..=n, then fresh
    // internals as needed
    let mut verts = 2usize;
    let mut u = vec![vec![0usize; n + 2]; k];
    for (i, row) in u.iter_mut().enumerate() {
        let _ = i;
        row[1] = 0; // s
        row[n + 1] = 1; // t
        for r in 2..=n {
            row[r] = verts;
            verts += 1;
        }
    }
    struct PendingArc {
        tail: usize,
        head: usize,
        label: Option<((usize, usize), (usize, usize))>,
    }
    let mut arcs: Vec<PendingArc> = Vec::new();
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut filler_pairs: Vec<(usize, usize)> = Vec::new();
    let fresh = |verts: &mut usize| {
        let v = *verts;
        *verts += 1;
        v
    };
    // edge ends ordered deterministically
    let mut path_order: Vec<(usize, usize)> = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                path_order.push((i, j));
            }
        }
    }
    for &(i, j) in &path_order {
        let mut path: Vec<usize> = Vec::new();
        let mut filler_slots: Vec<usize> = Vec::new(); // indices into `path`
        for r in 1..=n {
            let from = u[i][r];
            let to = u[i][r + 1];
            let mut block: Vec<usize> = (0..g.sizes[j])
                .filter(|&q| r <= g.sizes[i] && g.has_edge((i, r - 1), (j, q)))
                .collect();
            block.sort_unstable();
            if block.is_empty() {
                // filler arc spanning the gap; may later become a two-arc chain
                arcs.push(PendingArc {
                    tail: from,
                    head: to,
                    label: None,
                });
                filler_slots.push(path.len());
                path.push(arcs.len() - 1);
            } else {
                let mut cur = from;
                for (bi, &q) in block.iter().enumerate() {
                    let next = if bi + 1 == block.len() {
                        to
                    } else {
                        fresh(&mut verts)
                    };
                    arcs.push(PendingArc {
                        tail: cur,
                        head: next,
                        label: Some(((i, r - 1), (j, q))),
                    });
                    path.push(arcs.len() - 1);
                    cur = next;
                }
            }
        }
        // pair fillers within the path; an odd leftover splits in two
        let mut it = filler_slots.chunks_exact(2);
        let mut pairs_here: Vec<(usize, usize)> = Vec::new();
        for pairslot in &mut it {
            pairs_here.push((path[pairslot[0]], path[pairslot[1]]));
        }
        if let [odd] = it.remainder() {
            let aid = path[*odd];
            let mid = fresh(&mut verts);
            let old_head = arcs[aid].head;
            arcs[aid].head = mid;
            arcs.push(PendingArc {
                tail: mid,
                head: old_head,
                label: None,
            });
            let new_id = arcs.len() - 1;
            path.insert(*odd + 1, new_id);
            pairs_here.push((aid, new_id));
        }
        paths.push(path);
        filler_pairs.extend(pairs_here);
    }
    // real pairs: the two directed copies of each edge
    let mut pairing: Vec<(usize, usize)> = filler_pairs;
    for &(a, b) in &g.edges {
        let fwd = arcs
            .iter()
            .position(|x| x.label == Some((a, b)))
            .ok_or_else(|| CoreError::Internal("missing forward arc".into()))?;
        let bwd = arcs
            .iter()
            .position(|x| x.label == Some((b, a)))
            .ok_or_else(|| CoreError::Internal("missing backward arc".into()))?;
        pairing.push((fwd, bwd));
    }
    let mut dag = CutDigraph::new(verts, 0, 1);
    for a in &arcs {
        dag.add_arc(a.tail, a.head, true);
    }
    let inst = PairedCutInstance {
        dag,
        ell,
        pairing,
        paths,
    };
    inst.validate()?;
    Ok(inst)
}

/// Exact paired-cut oracle: enumerate subsets of at most ell pairs and test
/// the union for st-cut-ness.
pub fn solve_paired_cut_oracle(inst: &PairedCutInstance) -> Result<Option<Vec<usize>>, CoreError> {
    let m = inst.pairing.len();
    if m > 26 {
        return Err(CoreError::CapExceeded(format!(
            "paired-cut oracle handles at most 26 pairs, got {m}"
        )));
    }
    for size in 0..=inst.ell.min(m) {
        let mut chosen: Vec<usize> = (0..size).collect();
        loop {
            let cut: Vec<ArcId> = chosen
                .iter()
                .flat_map(|&p| [inst.pairing[p].0, inst.pairing[p].1])
                .collect();
            if inst.dag.is_st_cut(&cut) {
                return Ok(Some(chosen));
            }
            // next combination of `size` out of m
            let mut i = size;
            let mut done = size == 0;
            while i > 0 {
                i -= 1;
                if chosen[i] + (size - i) < m {
                    chosen[i] += 1;
                    for j in (i + 1)..size {
                        chosen[j] = chosen[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    done = true;
                }
            }
            if done {
                break;
            }
        }
    }
    Ok(None)
}

/// Whether a pair subset cuts every path exactly once (the shape every
/// minimum solution must have).
pub fn cuts_each_path_once(inst: &PairedCutInstance, pairs: &[usize]) -> bool {
    let cut: std::collections::BTreeSet<ArcId> = pairs
        .iter()
        .flat_map(|&p| [inst.pairing[p].0, inst.pairing[p].1])
        .collect();
    inst.paths
        .iter()
        .all(|p| p.iter().filter(|a| cut.contains(a)).count() == 1)
}

/// Normalization recipe turning a relation with an induced Gaifman 2K2 into
/// the 4-ary pair-implication relation: the four special coordinates, which
/// of them feed through a crisp disequality, and the guaranteed semantics.
#[derive(Debug, Clone)]
pub struct RStarTemplate {
    pub coords: [usize; 4],
    /// negate[m]: outer argument m enters coordinate coords[m] negated via a
    /// crisp disequality on an auxiliary variable.
    pub negate: [bool; 4],
    /// The effective 4-ary relation (for verification and the oracle).
    pub effective: BooleanRelation,
}

/// Finds an induced 2K2 {c1,c2},{c3,c4} in the Gaifman graph and the
/// per-coordinate negations that shift the excluded value pairs to (1,0),
/// then verifies the double-equality / double-implication sandwich by brute
/// force.
pub fn implement_rstar_gaifman(rel: &BooleanRelation) -> Result<RStarTemplate, CoreError> {
    let g = rel.gaifman_graph()?;
    let Some((a, b, c, d)) = g.find_2k2() else {
        return Err(CoreError::Precondition(
            "Gaifman graph has no induced 2K2".into(),
        ));
    };
    let prefer = |pairs: &[(bool, bool)]| -> (bool, bool) {
        // (1,0) needs no wrapping; fall back to the first excluded pair
        pairs
            .iter()
            .copied()
            .find(|&p| p == (true, false))
            .unwrap_or(pairs[0])
    };
    let (alpha1, alpha2) = prefer(&rel.excluded_pairs(a, b));
    let (alpha3, alpha4) = prefer(&rel.excluded_pairs(c, d));
    let coords = [a, b, c, d];
    let negate = [!alpha1, alpha2, !alpha3, alpha4];
    let mut normalized = rel.clone();
    for (m, &co) in coords.iter().enumerate() {
        if negate[m] {
            normalized = normalized.negate_coordinate(co)?;
        }
    }
    let effective = normalized.project(&coords.to_vec())?;
    verify_rstar(&effective, true)?;
    Ok(RStarTemplate {
        coords,
        negate,
        effective,
    })
}

/// The arrow-graph variant: an induced 2K2 in the underlying arrow graph
/// with arcs oriented (c1 -> c2), (c3 -> c4); projection alone suffices.
pub fn implement_rstar_arrow(rel: &BooleanRelation) -> Result<RStarTemplate, CoreError> {
    let h = rel.arrow_graph()?;
    let Some((a0, b0, c0, d0)) = h.underlying().find_2k2() else {
        return Err(CoreError::Precondition(
            "arrow graph has no induced 2K2".into(),
        ));
    };
    let (a, b) = if h.has_arc(a0, b0) { (a0, b0) } else { (b0, a0) };
    let (c, d) = if h.has_arc(c0, d0) { (c0, d0) } else { (d0, c0) };
    let coords = [a, b, c, d];
    let effective = rel.project(&coords.to_vec())?;
    verify_rstar(&effective, false)?;
    Ok(RStarTemplate {
        coords,
        negate: [false; 4],
        effective,
    })
}

/// Checks the sandwich: excludes (1,0,*,*) and (*,*,1,0); contains
/// (0,0,1,1) and (1,1,0,0), plus (0,0,0,0) and (1,1,1,1) when
/// `full_equality` is requested (the Gaifman case).
fn verify_rstar(eff: &BooleanRelation, full_equality: bool) -> Result<(), CoreError> {
    for idx in eff.indices() {
        let t: Vec<bool> = (0..4).map(|c| eff.bit_of(idx, c)).collect();
        if (t[0] && !t[1]) || (t[2] && !t[3]) {
            return Err(CoreError::Internal(
                "normalized relation fails the implication side".into(),
            ));
        }
    }
    let mut need = vec![[false, false, true, true], [true, true, false, false]];
    if full_equality {
        need.push([false, false, false, false]);
        need.push([true, true, true, true]);
    }
    for t in need {
        if !eff.contains(&t) {
            return Err(CoreError::Internal(
                "normalized relation misses a double-equality tuple".into(),
            ));
        }
    }
    Ok(())
}

/// Helper building formulas over a base relation plus the crisp helpers the
/// reductions assume.
struct GadgetBuilder {
    lang: Language,
    rel_idx: usize,
    neq_idx: usize,
    one_idx: usize,
    zero_idx: usize,
    neg3_idx: usize,
    eq_idx: usize,
    num_vars: usize,
    constraints: Vec<(usize, Vec<usize>, Weight)>,
}

impl GadgetBuilder {
    fn new(rel: &BooleanRelation) -> Self {
        use crate::relation::known;
        let mut lang = Language::new();
        let rel_idx = lang.add("R", rel.clone()).unwrap();
        let neq_idx = lang.add("NEQ", known::neq2()).unwrap();
        let one_idx = lang.add("ONE", known::assign1()).unwrap();
        let zero_idx = lang.add("ZERO", known::assign0()).unwrap();
        let neg3_idx = lang
            .add("NEG3", known::negative_clause(3))
            .unwrap();
        let eq_idx = lang.add("EQ", known::eq2()).unwrap();
        GadgetBuilder {
            lang,
            rel_idx,
            neq_idx,
            one_idx,
            zero_idx,
            neg3_idx,
            eq_idx,
            num_vars: 0,
            constraints: Vec::new(),
        }
    }

    fn var(&mut self) -> usize {
        self.num_vars += 1;
        self.num_vars - 1
    }

    fn vars(&mut self, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.var()).collect()
    }

    fn push(&mut self, rel: usize, scope: Vec<usize>, weight: Weight) {
        self.constraints.push((rel, scope, weight));
    }

    /// One soft application of the template's relation on the four outer
    /// variables, with fresh locals and crisp disequalities as dictated.
    fn push_rstar(&mut self, tpl: &RStarTemplate, outer: [usize; 4], weight: Weight, arity: usize) {
        let mut scope = vec![usize::MAX; arity];
        for (m, &co) in tpl.coords.iter().enumerate() {
            if tpl.negate[m] {
                let aux = self.var();
                self.push(self.neq_idx, vec![outer[m], aux], Weight::Crisp);
                scope[co] = aux;
            } else {
                scope[co] = outer[m];
            }
        }
        for slot in scope.iter_mut() {
            if *slot == usize::MAX {
                *slot = self.var();
            }
        }
        self.push(self.rel_idx, scope, weight);
    }

    fn build(self, k: u64, w: Option<u64>) -> Formula {
        let mut f = Formula::new(self.lang, self.num_vars, k, w);
        for (r, scope, weight) in self.constraints {
            f.push(r, scope, weight);
        }
        f
    }
}

/// A chain gadget with its variable roles, so the property tests can match
/// optimal assignments against the intended cut positions.
#[derive(Debug, Clone)]
pub struct ChainGadget {
    pub formula: Formula,
    pub s: usize,
    pub t: usize,
    pub xs: Vec<usize>,
    pub xps: Vec<usize>,
}

impl ChainGadget {
    /// The cut-position assignment alpha_i restricted to the named chain
    /// variables, as (variable, value) pairs.
    pub fn alpha(&self, i: usize) -> Vec<(usize, bool)> {
        let mut out = vec![(self.s, true), (self.t, false)];
        for (j, (&x, &xp)) in self.xs.iter().zip(self.xps.iter()).enumerate() {
            let v = j < i;
            out.push((x, v));
            out.push((xp, !v));
        }
        out
    }
}

/// The chain gadget over a relation with an arrow-graph 2K2: an
/// unsatisfiable formula on s, x_1..x_n, their complements and t whose
/// min-violation assignments are exactly the n+1 cut positions.
pub fn gadget_negpath(rel: &BooleanRelation, n: usize) -> Result<ChainGadget, CoreError> {
    let tpl = implement_rstar_arrow(rel)?;
    let mut b = GadgetBuilder::new(rel);
    let s = b.var();
    let t = b.var();
    let xs = b.vars(n);
    let xps = b.vars(n);
    b.push(b.one_idx, vec![s], Weight::Crisp);
    b.push(b.zero_idx, vec![t], Weight::Crisp);
    push_negpath_chain(&mut b, &tpl, rel.arity(), s, t, &xs, &xps);
    Ok(ChainGadget {
        formula: b.build(1, None),
        s,
        t,
        xs,
        xps,
    })
}

fn push_negpath_chain(
    b: &mut GadgetBuilder,
    tpl: &RStarTemplate,
    arity: usize,
    s: usize,
    t: usize,
    xs: &[usize],
    xps: &[usize],
) {
    let n = xs.len();
    if n == 0 {
        b.push_rstar(tpl, [s, t, s, t], Weight::Soft(1), arity);
        return;
    }
    b.push_rstar(tpl, [s, xs[0], xps[0], t], Weight::Soft(1), arity);
    for i in 0..(n - 1) {
        b.push_rstar(
            tpl,
            [xs[i], xs[i + 1], xps[i + 1], xps[i]],
            Weight::Soft(1),
            arity,
        );
    }
    b.push_rstar(tpl, [xs[n - 1], t, s, xps[n - 1]], Weight::Soft(1), arity);
}

/// Paired-cut to MinSAT over a relation with a Gaifman 2K2, using crisp
/// disequalities: one variable per vertex, one soft pair constraint per
/// matched arc pair, budget ell.
pub fn gen_gaifman_hard(
    inst: &PairedCutInstance,
    rel: &BooleanRelation,
) -> Result<Formula, CoreError> {
    let tpl = implement_rstar_gaifman(rel)?;
    let mut b = GadgetBuilder::new(rel);
    let verts = b.vars(inst.dag.n);
    b.push(b.one_idx, vec![verts[inst.dag.s]], Weight::Crisp);
    b.push(b.zero_idx, vec![verts[inst.dag.t]], Weight::Crisp);
    for &(a1, a2) in &inst.pairing {
        let (u, v) = (inst.dag.arcs[a1].tail, inst.dag.arcs[a1].head);
        let (p, q) = (inst.dag.arcs[a2].tail, inst.dag.arcs[a2].head);
        b.push_rstar(
            &tpl,
            [verts[u], verts[v], verts[p], verts[q]],
            Weight::Soft(1),
            rel.arity(),
        );
    }
    Ok(b.build(inst.ell as u64, None))
}

/// Paired-cut to MinSAT over a relation with an arrow 2K2, using crisp
/// ternary negative clauses: per-path chain gadgets on shared complemented
/// variables plus four pairing clauses per matched arc pair; budget 2*ell.
pub fn gen_arrow_hard(
    inst: &PairedCutInstance,
    rel: &BooleanRelation,
) -> Result<Formula, CoreError> {
    let tpl = implement_rstar_arrow(rel)?;
    let mut b = GadgetBuilder::new(rel);
    let xs = b.vars(inst.dag.n);
    let xps = b.vars(inst.dag.n);
    let s = xs[inst.dag.s];
    let t = xs[inst.dag.t];
    let sp = xps[inst.dag.s];
    let tp = xps[inst.dag.t];
    b.push(b.one_idx, vec![s], Weight::Crisp);
    b.push(b.zero_idx, vec![t], Weight::Crisp);
    b.push(b.zero_idx, vec![sp], Weight::Crisp);
    b.push(b.one_idx, vec![tp], Weight::Crisp);
    for path in &inst.paths {
        // vertex sequence of the path
        let mut seq = vec![inst.dag.s];
        for &a in path {
            seq.push(inst.dag.arcs[a].head);
        }
        let inner: Vec<usize> = seq[1..seq.len() - 1].iter().map(|&v| xs[v]).collect();
        let innerp: Vec<usize> = seq[1..seq.len() - 1].iter().map(|&v| xps[v]).collect();
        push_negpath_chain(&mut b, &tpl, rel.arity(), s, t, &inner, &innerp);
    }
    for &(a1, a2) in &inst.pairing {
        let (u, v) = (inst.dag.arcs[a1].tail, inst.dag.arcs[a1].head);
        let (p, q) = (inst.dag.arcs[a2].tail, inst.dag.arcs[a2].head);
        for clause in [
            [xs[u], xps[v], xs[q]],
            [xs[u], xps[v], xps[p]],
            [xs[p], xps[q], xs[v]],
            [xs[p], xps[q], xps[u]],
        ] {
            b.push(b.neg3_idx, clause.to_vec(), Weight::Crisp);
        }
    }
    Ok(b.build(2 * inst.ell as u64, None))
}

/// The weighted chain gadget: two equality chains with complementary weight
/// gradients; minimum (violations, weight) is exactly (2, w_target), attained
/// exactly by the cut-position assignments. When `use_implications` is set,
/// every equality is written as its two implications (each violation then
/// breaks exactly one of them, leaving the budgets unchanged).
pub fn gadget_weighted_path(
    n: usize,
    w_target: u64,
    use_implications: bool,
) -> Result<ChainGadget, CoreError> {
    if w_target <= n as u64 {
        return Err(CoreError::Precondition(
            "target weight must exceed the chain length".into(),
        ));
    }
    let base = crate::relation::known::eq2();
    let mut b = GadgetBuilder::new(&base);
    let impl_idx = b.lang.add("IMPL", crate::relation::known::implication()).unwrap();
    let s = b.var();
    let t = b.var();
    let xs = b.vars(n);
    let xps = b.vars(n);
    let z = b.var();
    b.push(b.one_idx, vec![s], Weight::Crisp);
    b.push(b.zero_idx, vec![t], Weight::Crisp);
    b.push(b.one_idx, vec![z], Weight::Crisp);
    push_wtpath(&mut b, impl_idx, use_implications, w_target, s, t, z, &xs, &xps);
    Ok(ChainGadget {
        formula: b.build(2, Some(w_target)),
        s,
        t,
        xs,
        xps,
    })
}

#[allow(clippy::too_many_arguments)]
fn push_wtpath(
    b: &mut GadgetBuilder,
    impl_idx: usize,
    use_implications: bool,
    w_target: u64,
    s: usize,
    t: usize,
    z: usize,
    xs: &[usize],
    xps: &[usize],
) {
    let n = xs.len();
    let soft_eq = |b: &mut GadgetBuilder, x: usize, y: usize, w: u64| {
        if use_implications {
            b.push(impl_idx, vec![x, y], Weight::Soft(w));
            b.push(impl_idx, vec![y, x], Weight::Soft(w));
        } else {
            b.push(b.eq_idx, vec![x, y], Weight::Soft(w));
        }
    };
    // forward chain s, x_1, ..., x_n, t with weights W - i
    let chain: Vec<usize> = std::iter::once(s)
        .chain(xs.iter().copied())
        .chain(std::iter::once(t))
        .collect();
    for i in 0..=n {
        soft_eq(b, chain[i], chain[i + 1], w_target - i as u64);
    }
    // complement chain t = x'_0, x'_1, ..., x'_n, x'_{n+1} = s, weights i
    let chainp: Vec<usize> = std::iter::once(t)
        .chain(xps.iter().copied())
        .chain(std::iter::once(s))
        .collect();
    for i in 0..=n {
        soft_eq(b, chainp[i], chainp[i + 1], i as u64);
    }
    // crisp (not x_i or not x'_i), via the pinned z and ternary clauses
    for i in 0..n {
        b.push(b.neg3_idx, vec![xs[i], xps[i], z], Weight::Crisp);
    }
}

/// Weighted paired-cut reduction: per-path weighted chains at target |V|
/// plus the crisp pairing clauses; budgets k = 4*ell, W = 2*ell*|V|.
pub fn gen_weighted_hard(
    inst: &PairedCutInstance,
    use_implications: bool,
) -> Result<Formula, CoreError> {
    let nv = inst.dag.n as u64;
    let base = crate::relation::known::eq2();
    let mut b = GadgetBuilder::new(&base);
    let impl_idx = b.lang.add("IMPL", crate::relation::known::implication()).unwrap();
    let xs = b.vars(inst.dag.n);
    let xps = b.vars(inst.dag.n);
    let z = b.var();
    let s = xs[inst.dag.s];
    let t = xs[inst.dag.t];
    b.push(b.one_idx, vec![s], Weight::Crisp);
    b.push(b.zero_idx, vec![t], Weight::Crisp);
    b.push(b.zero_idx, vec![xps[inst.dag.s]], Weight::Crisp);
    b.push(b.one_idx, vec![xps[inst.dag.t]], Weight::Crisp);
    b.push(b.one_idx, vec![z], Weight::Crisp);
    for path in &inst.paths {
        let mut seq = vec![inst.dag.s];
        for &a in path {
            seq.push(inst.dag.arcs[a].head);
        }
        let inner: Vec<usize> = seq[1..seq.len() - 1].iter().map(|&v| xs[v]).collect();
        let innerp: Vec<usize> = seq[1..seq.len() - 1].iter().map(|&v| xps[v]).collect();
        push_wtpath(&mut b, impl_idx, use_implications, nv, s, t, z, &inner, &innerp);
    }
    for &(a1, a2) in &inst.pairing {
        let (u, v) = (inst.dag.arcs[a1].tail, inst.dag.arcs[a1].head);
        let (p, q) = (inst.dag.arcs[a2].tail, inst.dag.arcs[a2].head);
        for clause in [
            [xs[u], xps[v], xs[q]],
            [xs[u], xps[v], xps[p]],
            [xs[p], xps[q], xs[v]],
            [xs[p], xps[q], xps[u]],
        ] {
            b.push(b.neg3_idx, clause.to_vec(), Weight::Crisp);
        }
    }
    Ok(b.build(4 * inst.ell as u64, Some(2 * inst.ell as u64 * nv)))
}

/// Convenience accessors used by the command-line front end.
pub fn dag_vertex_count(inst: &PairedCutInstance) -> usize {
    inst.dag.n
}

pub fn path_internal_vertices(inst: &PairedCutInstance, path: &[ArcId]) -> Vec<Vertex> {
    let mut seq = Vec::new();
    for &a in path {
        seq.push(inst.dag.arcs[a].head);
    }
    seq.pop();
    seq
}
