//! Clause-free weighted bundled cut endgame: exact bundle-subset enumeration
//! behind the interface a future fixed-parameter implementation could fill.

use crate::config::SolveConfig;
use crate::error::{CoreError, Outcome};
use crate::flow::{ArcId, CutDigraph};
use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundledBundle {
    pub arcs: Vec<ArcId>,
    pub weight: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundledCutInstance {
    pub graph: CutDigraph,
    pub bundles: Vec<BundledBundle>,
    pub k: u64,
    pub w: BigUint,
}

impl BundledCutInstance {
    fn deletable(&self, id: ArcId) -> bool {
        let a = self.graph.arcs[id];
        a.soft
            && !self
                .graph
                .arcs
                .iter()
                .any(|o| !o.soft && o.tail == a.tail && o.head == a.head)
    }

    /// Every bundle must have pairwise linked deletable arcs: for any two
    /// deletable arcs not incident with s or t there is a path between their
    /// endpoint sets using only this bundle's arcs and crisp arcs, in the
    /// underlying undirected sense. 2K2-free clause-free bundles satisfy it.
    pub fn has_pairwise_linked_deletable_arcs(&self) -> bool {
        let s = self.graph.s;
        let t = self.graph.t;
        for bundle in &self.bundles {
            let deletable: Vec<ArcId> = bundle
                .arcs
                .iter()
                .copied()
                .filter(|&a| {
                    let arc = self.graph.arcs[a];
                    self.deletable(a)
                        && arc.tail != s
                        && arc.tail != t
                        && arc.head != s
                        && arc.head != t
                })
                .collect();
            if deletable.len() < 2 {
                continue;
            }
            // undirected adjacency over this bundle's arcs plus crisp arcs
            let mut adj = vec![Vec::new(); self.graph.n];
            for (id, arc) in self.graph.arcs.iter().enumerate() {
                if !arc.soft || bundle.arcs.contains(&id) {
                    adj[arc.tail].push(arc.head);
                    adj[arc.head].push(arc.tail);
                }
            }
            for (i, &e1) in deletable.iter().enumerate() {
                for &e2 in deletable.iter().skip(i + 1) {
                    let a1 = self.graph.arcs[e1];
                    let a2 = self.graph.arcs[e2];
                    let targets = [a2.tail, a2.head];
                    let mut seen = vec![false; self.graph.n];
                    let mut stack = vec![a1.tail, a1.head];
                    seen[a1.tail] = true;
                    seen[a1.head] = true;
                    let mut hit = false;
                    while let Some(u) = stack.pop() {
                        if targets.contains(&u) {
                            hit = true;
                            break;
                        }
                        for &v in &adj[u] {
                            if !seen[v] {
                                seen[v] = true;
                                stack.push(v);
                            }
                        }
                    }
                    if !hit {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Exact solver: enumerates bundle subsets S with |S| <= k and weight <= W in
/// weight order; S is feasible iff deleting every arc of S cuts t off from s.
/// Returns the induced cut (all soft arcs of the chosen bundles).
pub fn solve_bundled_cut(
    inst: &BundledCutInstance,
    cfg: &SolveConfig,
) -> Result<Outcome<Vec<ArcId>>, CoreError> {
    if inst.graph.has_crisp_st_path() {
        return Ok(Outcome::No);
    }
    if !inst.has_pairwise_linked_deletable_arcs() {
        return Err(CoreError::Precondition(
            "bundles must have pairwise linked deletable arcs".into(),
        ));
    }
    let nb = inst.bundles.len();
    let k = inst.k.min(nb as u64) as usize;
    let mut count: u64 = 0;
    let mut best: Option<(BigUint, Vec<usize>)> = None;
    let mut chosen: Vec<usize> = Vec::new();
    enumerate(inst, 0, k, &mut chosen, &mut count, cfg, &mut best)?;
    Ok(match best {
        Some((_, subset)) => {
            let cut: Vec<ArcId> = subset
                .iter()
                .flat_map(|&b| inst.bundles[b].arcs.iter().copied())
                .collect();
            Outcome::Yes(cut)
        }
        None => Outcome::No,
    })
}

fn enumerate(
    inst: &BundledCutInstance,
    start: usize,
    remaining: usize,
    chosen: &mut Vec<usize>,
    count: &mut u64,
    cfg: &SolveConfig,
    best: &mut Option<(BigUint, Vec<usize>)>,
) -> Result<(), CoreError> {
    *count += 1;
    if *count > cfg.bundle_subset_cap {
        return Err(CoreError::CapExceeded(
            "bundled-cut subset enumeration cap exceeded".into(),
        ));
    }
    let weight: BigUint = chosen.iter().map(|&b| inst.bundles[b].weight.clone()).sum();
    if weight <= inst.w {
        let removed: Vec<ArcId> = chosen
            .iter()
            .flat_map(|&b| inst.bundles[b].arcs.iter().copied())
            .collect();
        let reach = inst.graph.reachable_without(inst.graph.s, &removed);
        if !reach[inst.graph.t] {
            let better = best.as_ref().map_or(true, |(bw, _)| weight < *bw);
            if better {
                *best = Some((weight.clone(), chosen.clone()));
            }
        }
    }
    if remaining == 0 {
        return Ok(());
    }
    for b in start..inst.bundles.len() {
        chosen.push(b);
        enumerate(inst, b + 1, remaining - 1, chosen, count, cfg, best)?;
        chosen.pop();
    }
    Ok(())
}

/// Convenience front door used by the pair-cut pipeline: builds the instance
/// from a clause-free working state and maps the answer back to work arc ids.
pub fn solve_clause_free(
    work: &crate::gdpc::WorkInstance,
    cfg: &SolveConfig,
) -> Option<Vec<usize>> {
    let (inst, arc_map) = work.to_bundled_cut()?;
    match solve_bundled_cut(&inst, cfg) {
        Ok(Outcome::Yes(cut)) => Some(cut.into_iter().map(|a| arc_map[a]).collect()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn one() -> BigUint {
        BigUint::one()
    }

    #[test]
    fn single_arc_bundle() {
        let mut g = CutDigraph::new(2, 0, 1);
        let a = g.add_arc(0, 1, true);
        let inst = BundledCutInstance {
            graph: g,
            bundles: vec![BundledBundle {
                arcs: vec![a],
                weight: one(),
            }],
            k: 1,
            w: one(),
        };
        match solve_bundled_cut(&inst, &SolveConfig::default()).unwrap() {
            Outcome::Yes(cut) => assert_eq!(cut, vec![a]),
            _ => panic!("single-bundle cut expected"),
        }
    }

    #[test]
    fn zero_budget_no() {
        let mut g = CutDigraph::new(3, 0, 2);
        let a = g.add_arc(0, 1, true);
        g.add_arc(1, 2, true);
        let inst = BundledCutInstance {
            graph: g,
            bundles: vec![
                BundledBundle {
                    arcs: vec![a],
                    weight: one(),
                },
                BundledBundle {
                    arcs: vec![1],
                    weight: one(),
                },
            ],
            k: 0,
            w: one(),
        };
        assert!(solve_bundled_cut(&inst, &SolveConfig::default())
            .unwrap()
            .is_no());
    }
}
