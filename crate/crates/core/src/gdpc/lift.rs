//! Lifting stage: branch over augmentations (and bootstrap arcs when the
//! flow is empty) until the guessed cut cardinality matches the flow value,
//! absorbing cut arcs outside the core along detected active-vertex
//! sequences when configured to iterate.

use super::work::{ArcOrigin, WArc, WorkInstance};
use super::{GdpcInstance, SolveBudgets};
use crate::config::SolveConfig;
use crate::error::CoreError;
use crate::flow::{augment_enumerate, augment_oracle_core, augment_oracle_full, FlowValue};
use num_bigint::BigUint;

/// Strategy that realizes the augmentation contract.
#[derive(Debug, Clone)]
pub enum Augmenter {
    /// Exhaustive bipartition enumeration; the solver default.
    Enumerate,
    /// Augment around a known star st-cut (original arc ids), keeping the
    /// gap between the cut and its core. Test instrumentation.
    OracleCore(Vec<usize>),
    /// Augment around a known star st-cut, making the whole cut the mincut.
    OracleFull(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct LiftBranch {
    pub work: WorkInstance,
    pub budgets: SolveBudgets,
}

fn apply_augmentation(
    work: &WorkInstance,
    pairs: &[(usize, usize)],
    flow_paths: &[Vec<usize>],
    arc_map: &[usize],
) -> WorkInstance {
    let mut out = work.clone();
    let base = out.arcs.len();
    for &(u, v) in pairs {
        out.add_crisp(u, v);
    }
    // flow paths reference view arc ids: 0..map.len() are alive work arcs,
    // map.len().. are the freshly added pairs in order
    out.flow = flow_paths
        .iter()
        .map(|p| {
            p.iter()
                .map(|&a| {
                    if a < arc_map.len() {
                        arc_map[a]
                    } else {
                        base + (a - arc_map.len())
                    }
                })
                .collect()
        })
        .collect();
    out
}

fn augmentation_branches(
    work: &WorkInstance,
    cfg: &SolveConfig,
    augmenter: &Augmenter,
) -> Result<Vec<WorkInstance>, CoreError> {
    let (g, map) = work.view();
    let mut out = Vec::new();
    match augmenter {
        Augmenter::Enumerate => {
            for aug in augment_enumerate(&g, cfg)? {
                out.push(apply_augmentation(work, &aug.pairs, &aug.flow.paths, &map));
            }
        }
        Augmenter::OracleCore(z) | Augmenter::OracleFull(z) => {
            let zv: Vec<usize> = z
                .iter()
                .filter_map(|&orig| {
                    map.iter().position(|&wa| {
                        work.arcs[wa].alive
                            && matches!(work.arcs[wa].origin, ArcOrigin::Original(id) if id == orig)
                    })
                })
                .collect();
            let aug = match augmenter {
                Augmenter::OracleCore(_) => augment_oracle_core(&g, &zv)?,
                _ => augment_oracle_full(&g, &zv)?,
            };
            out.push(apply_augmentation(work, &aug.pairs, &aug.flow.paths, &map));
        }
    }
    Ok(out)
}

/// Bootstrap variants when the graph has no st-flow at all: pick a clause
/// with both endpoints reachable (a crisp one when present, otherwise every
/// soft one) and pin one of its endpoints to t with a crisp arc.
fn bootstrap_variants(work: &WorkInstance) -> Vec<WorkInstance> {
    let mut variants = vec![work.clone()];
    if !matches!(work.lambda(), FlowValue::Finite(0)) {
        return variants;
    }
    let reach = work.reachable(work.s, &[], false);
    let reachable_pairs: Vec<usize> = work
        .alive_clauses()
        .filter(|&c| {
            reach[work.find(work.clauses[c].u)] && reach[work.find(work.clauses[c].v)]
        })
        .collect();
    let crisp: Vec<usize> = reachable_pairs
        .iter()
        .copied()
        .filter(|&c| work.clauses[c].bundle.is_none())
        .collect();
    let chosen = if crisp.is_empty() { reachable_pairs } else { crisp };
    for c in chosen {
        for v in [work.clauses[c].u, work.clauses[c].v] {
            let mut w = work.clone();
            let root = w.find(v);
            w.add_crisp(root, w.t);
            variants.push(w);
        }
    }
    variants
}

/// The lifting loop: guess the cut cardinality, augment, and absorb while
/// the guess exceeds the flow value, emitting exactly the branches where the
/// two agree. Absorb iterations beyond `cfg.max_absorb_rounds` are cut off;
/// with the exhaustive augmenter they are redundant for completeness because
/// every minimal solution already appears as the forced mincut of its
/// side-guess branch.
pub fn lift_to_mincut(
    inst: &GdpcInstance,
    cfg: &SolveConfig,
    augmenter: &Augmenter,
) -> Result<Vec<LiftBranch>, CoreError> {
    let b = inst.validate()?;
    let kappa_max = 2 * inst.k * (b as u64) * (b as u64);
    let base = WorkInstance::from_instance(inst);
    let mut out = Vec::new();
    for (vi, variant) in bootstrap_variants(&base).into_iter().enumerate() {
        let augmentations = match augmentation_branches(&variant, cfg, augmenter) {
            Ok(a) => a,
            // a bootstrap pin may break the planted cut's star property;
            // that variant is simply a wrong guess
            Err(CoreError::Precondition(_)) if vi > 0 => continue,
            Err(e) => return Err(e),
        };
        for augmented in augmentations {
            let lambda = augmented.flow.len() as u64;
            if lambda > kappa_max && inst.k > 0 {
                continue;
            }
            // exact-match branch
            out.push(LiftBranch {
                budgets: SolveBudgets {
                    kappa: lambda,
                    kappa_c: kappa_max.saturating_sub(lambda),
                    lambda,
                },
                work: augmented.clone(),
            });
            // absorb iterations for guesses kappa > lambda
            if cfg.max_absorb_rounds > 0 {
                let mut queue = vec![(augmented, lambda, cfg.max_absorb_rounds)];
                while let Some((w, lambda_w, rounds)) = queue.pop() {
                    if rounds == 0 {
                        continue;
                    }
                    for kappa in (lambda_w + 1)..=kappa_max {
                        let budgets = SolveBudgets {
                            kappa,
                            kappa_c: kappa_max.saturating_sub(kappa),
                            lambda: lambda_w,
                        };
                        for (pi, seq) in detect_active_sequence(&w, &budgets, cfg) {
                            let (w2, _, _) = absorb_step(&w, pi, kappa, &seq);
                            for aug2 in augmentation_branches(&w2, cfg, &Augmenter::Enumerate)? {
                                let l2 = aug2.flow.len() as u64;
                                if l2 == kappa + 1 {
                                    out.push(LiftBranch {
                                        budgets: SolveBudgets {
                                            kappa: kappa + 1,
                                            kappa_c: kappa_max.saturating_sub(kappa + 1),
                                            lambda: l2,
                                        },
                                        work: aug2.clone(),
                                    });
                                } else if l2 < kappa + 1 {
                                    queue.push((aug2, l2, rounds - 1));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Path positions and projections of every vertex onto every flow path.
pub(crate) struct Projections {
    /// Vertex sequences of the flow paths.
    pub seqs: Vec<Vec<usize>>,
    /// Position of a vertex on path i, if on it.
    pub pos: Vec<std::collections::BTreeMap<usize, usize>>,
    /// Projection of vertex v onto path i, as a position; None encodes t.
    pub proj: Vec<std::collections::BTreeMap<usize, usize>>,
    /// All vertices on flow paths.
    pub flow_vertices: std::collections::BTreeSet<usize>,
}

pub(crate) fn projections(work: &WorkInstance) -> Projections {
    let lam = work.flow.len();
    let seqs: Vec<Vec<usize>> = (0..lam).map(|i| work.path_vertices(i)).collect();
    let mut flow_vertices = std::collections::BTreeSet::new();
    for seq in &seqs {
        flow_vertices.extend(seq.iter().copied());
    }
    let mut pos = Vec::with_capacity(lam);
    for seq in &seqs {
        let mut m = std::collections::BTreeMap::new();
        for (p, &v) in seq.iter().enumerate() {
            m.entry(v).or_insert(p);
        }
        pos.push(m);
    }
    // attachment reach: from each path position, BFS through off-flow vertices
    let mut proj = vec![std::collections::BTreeMap::new(); lam];
    for i in 0..lam {
        for (p, &x) in seqs[i].iter().enumerate() {
            if x == work.t() {
                continue;
            }
            // vertices with an attachment path from x (only x on the flow)
            let mut seen = std::collections::BTreeSet::new();
            let mut stack = vec![x];
            while let Some(u) = stack.pop() {
                for a in work.alive_arcs() {
                    if work.tail(a) != u {
                        continue;
                    }
                    let h = work.head(a);
                    if flow_vertices.contains(&h) || seen.contains(&h) {
                        continue;
                    }
                    seen.insert(h);
                    stack.push(h);
                }
            }
            for v in seen {
                proj[i].entry(v).or_insert(p);
            }
            // a path vertex projects onto itself
            proj[i].entry(x).or_insert(p);
        }
    }
    Projections {
        seqs,
        pos,
        proj,
        flow_vertices,
    }
}

/// Deterministic rendition of the active-vertex detection: enumerate clause
/// keep/drop choices, the ordered path pair, the case split, antichain index
/// subsets and endpoint choices. Every emitted sequence has strictly
/// increasing projections along its path; on the branch matching the hidden
/// solution the monotone side property holds. Singleton sequences alone
/// already cover completeness, so the subset enumeration is capped.
pub fn detect_active_sequence(
    work: &WorkInstance,
    budgets: &SolveBudgets,
    _cfg: &SolveConfig,
) -> Vec<(usize, Vec<usize>)> {
    let lam = work.flow.len();
    if lam == 0 {
        return Vec::new();
    }
    let pr = projections(work);
    let clauses: Vec<usize> = work.alive_clauses().collect();
    let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut push = |item: (usize, Vec<usize>)| {
        if !out.contains(&item) {
            out.push(item);
        }
    };

    // clause-subset branches: singletons first (complete on their own), then
    // drop-sets up to a small cap for the richer faithful branches
    let mut subsets: Vec<Vec<usize>> = clauses.iter().map(|&c| vec![c]).collect();
    let drop_cap = budgets.kappa_c.min(3) as usize;
    if clauses.len() <= 12 {
        for dropped in 0..=drop_cap.min(clauses.len()) {
            subsets.extend(drop_subsets(&clauses, dropped));
        }
    } else {
        subsets.push(clauses.clone());
    }
    subsets.dedup();

    for subset in &subsets {
        for i in 0..lam {
            // Case 1: both endpoints project onto the same path
            let mut cii: Vec<(usize, usize, usize, usize)> = Vec::new(); // (pu, pv, u, v)
            for &c in subset {
                let (u, v) = (work.find(work.clauses[c].u), work.find(work.clauses[c].v));
                for (a, b) in [(u, v), (v, u)] {
                    if let (Some(&pa), Some(&pb)) = (pr.proj[i].get(&a), pr.proj[i].get(&b)) {
                        if pa <= pb {
                            cii.push((pa, pb, a, b));
                        }
                    }
                }
            }
            if !cii.is_empty() {
                let w1 = cii.iter().map(|&(_, pv, _, _)| pv).min().unwrap();
                let &(_, _, u1, v1) = cii.iter().find(|&&(_, pv, _, _)| pv == w1).unwrap();
                for cand in [u1, v1] {
                    if !pr.flow_vertices.contains(&cand) {
                        push((i, vec![cand]));
                    }
                }
            }
            // Case 2: ordered pair of distinct paths
            for j in 0..lam {
                if i == j {
                    continue;
                }
                let mut cij: Vec<(usize, usize, usize)> = Vec::new(); // (px, py, u)
                for &c in subset {
                    let (u, v) = (work.find(work.clauses[c].u), work.find(work.clauses[c].v));
                    for (a, b) in [(u, v), (v, u)] {
                        let (Some(&pa), Some(&pb)) = (pr.proj[i].get(&a), pr.proj[j].get(&b))
                        else {
                            continue;
                        };
                        // exclude projections onto s or t endcaps
                        if pa == 0 || pb == 0 || pa + 1 == pr.seqs[i].len() || pb + 1 == pr.seqs[j].len()
                        {
                            continue;
                        }
                        cij.push((pa, pb, a));
                    }
                }
                if cij.is_empty() {
                    continue;
                }
                // minimal elements under componentwise dominance
                let minimal: Vec<(usize, usize, usize)> = cij
                    .iter()
                    .copied()
                    .filter(|&(pa, pb, _)| {
                        !cij.iter().any(|&(qa, qb, _)| {
                            (qa <= pa && qb < pb) || (qa < pa && qb <= pb)
                        })
                    })
                    .collect();
                // antichain: one representative per projection point
                let mut antichain: Vec<(usize, usize, usize)> = Vec::new();
                for &(pa, pb, u) in &minimal {
                    if !antichain.iter().any(|&(qa, qb, _)| qa == pa && qb == pb) {
                        antichain.push((pa, pb, u));
                    }
                }
                antichain.sort();
                let l = antichain.len();
                // index subsets: all when small, otherwise singletons + all
                let index_sets: Vec<Vec<usize>> = if l <= 8 {
                    (1..(1usize << l))
                        .map(|m| (0..l).filter(|&b| m >> b & 1 == 1).collect())
                        .collect()
                } else {
                    let mut v: Vec<Vec<usize>> = (0..l).map(|b| vec![b]).collect();
                    v.push((0..l).collect());
                    v
                };
                for idx in index_sets {
                    let seq: Vec<usize> = idx.iter().map(|&b| antichain[b].2).collect();
                    // projections must strictly increase along P_i
                    let ps: Vec<usize> = idx.iter().map(|&b| antichain[b].0).collect();
                    if ps.windows(2).all(|w| w[0] < w[1]) {
                        push((i, seq));
                    }
                }
            }
        }
    }
    out
}

fn drop_subsets(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    if size > pool.len() {
        return out;
    }
    loop {
        let kept: Vec<usize> = pool
            .iter()
            .enumerate()
            .filter(|(i, _)| !idx.contains(i))
            .map(|(_, &c)| c)
            .collect();
        out.push(kept);
        // next combination
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] + (size - i) < pool.len() {
                idx[i] += 1;
                for j in (i + 1)..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Adds the path s, u_1, ..., u_l, t as fresh arcs: every arc except the last
/// is a soft singleton bundle of weight W + 1, the final hop is crisp. Bumps
/// k by one and doubles the weight budget plus one. The returned flow is a
/// fresh maximum flow of the new graph; callers re-augment.
pub fn absorb_step(
    work: &WorkInstance,
    _path: usize,
    kappa: u64,
    seq: &[usize],
) -> (WorkInstance, FlowValue, u64) {
    let mut out = work.clone();
    let bump = out.w.clone() + BigUint::from(1u32);
    let mut prev = out.s;
    for &u in seq {
        out.add_soft_singleton(prev, u, bump.clone());
        prev = u;
    }
    out.add_crisp(prev, out.t);
    out.k += 1;
    out.w = out.w.clone() * BigUint::from(2u32) + BigUint::from(1u32);
    let (g, map) = out.view();
    let (value, flow) = g.max_flow();
    out.flow = flow
        .paths
        .iter()
        .map(|p| p.iter().map(|&a| map[a]).collect())
        .collect();
    (out, value, kappa + 1)
}

impl WorkInstance {
    /// Test hook: the arc-id view of a set of original ids.
    pub fn work_arcs_of_original(&self, orig: &[usize]) -> Vec<usize> {
        self.arcs
            .iter()
            .enumerate()
            .filter(|(_, a): &(usize, &WArc)| {
                a.alive && matches!(a.origin, ArcOrigin::Original(id) if orig.contains(&id))
            })
            .map(|(i, _)| i)
            .collect()
    }
}
