//! Clause elimination for mincut pair-cut instances: per-bundle deletable
//! edge guessing, cleanup, projections onto flow paths, the mixed labeled
//! graph over path indices, branching on non-zero cycles, loop handling, and
//! the final bipartite split that turns clauses into arcs of a reversed copy.

use super::lift::projections;
use super::work::{Status, WorkInstance};
use crate::config::SolveConfig;
use crate::flow::FlowValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideLabel {
    Zero,
    One,
}

/// Projected clause pair on (P_i, P_j): positions plus preimage clause ids.
#[derive(Debug, Clone)]
struct ProjPair {
    x: usize,
    y: usize,
    preimage: Vec<usize>,
    crisp: bool,
}

struct Structure {
    lam: usize,
    /// c[i][j]: projected clause pairs; for i == j the loop pairs.
    c: Vec<Vec<Vec<ProjPair>>>,
    /// e[i][j]: crisp-connection pairs (positions on P_i x P_j), i != j.
    e: Vec<Vec<Vec<(usize, usize)>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum HEdge {
    /// label-0 arc i -> j (E_{i,j} non-empty)
    Arc(usize, usize),
    /// label-1 undirected edge {i, j}, i != j
    Clause(usize, usize),
}

impl HEdge {
    fn ends(&self) -> (usize, usize) {
        match *self {
            HEdge::Arc(i, j) => (i, j),
            HEdge::Clause(i, j) => (i, j),
        }
    }

    fn label(&self) -> u8 {
        match self {
            HEdge::Arc(..) => 0,
            HEdge::Clause(..) => 1,
        }
    }
}

fn compute_structure(work: &WorkInstance) -> (Structure, super::lift::Projections) {
    let pr = projections(work);
    let lam = work.flow.len();
    let t_root = work.t();
    let s_root = work.s();
    let mut c = vec![vec![Vec::<ProjPair>::new(); lam]; lam];
    let mut e = vec![vec![Vec::<(usize, usize)>::new(); lam]; lam];
    for ci in work.alive_clauses().collect::<Vec<_>>() {
        let (u, v) = (work.find(work.clauses[ci].u), work.find(work.clauses[ci].v));
        let crisp = work.clauses[ci].bundle.is_none();
        for i in 0..lam {
            // diagonal: keep pairs containing s, drop pairs containing t
            for (a, b) in [(u, v), (v, u)] {
                if let (Some(&pa), Some(&pb)) = (pr.proj[i].get(&a), pr.proj[i].get(&b)) {
                    let va = pr.seqs[i][pa];
                    let vb = pr.seqs[i][pb];
                    if va == t_root || vb == t_root {
                        continue;
                    }
                    if pa <= pb {
                        push_pair(&mut c[i][i], pa, pb, ci, crisp);
                    }
                }
            }
            for j in 0..lam {
                if i == j {
                    continue;
                }
                for (a, b) in [(u, v), (v, u)] {
                    if let (Some(&pa), Some(&pb)) = (pr.proj[i].get(&a), pr.proj[j].get(&b)) {
                        let va = pr.seqs[i][pa];
                        let vb = pr.seqs[j][pb];
                        if va == s_root || vb == s_root || va == t_root || vb == t_root {
                            continue;
                        }
                        push_pair(&mut c[i][j], pa, pb, ci, crisp);
                    }
                }
            }
        }
    }
    // E_{i,j}: internal path connections avoiding flow vertices inside
    for i in 0..lam {
        for p in 1..pr.seqs[i].len().saturating_sub(1) {
            let x = pr.seqs[i][p];
            // off-flow reach from x, plus one-arc hops onto other paths
            let mut seen = std::collections::BTreeSet::new();
            let mut hits: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
            let mut stack = vec![x];
            while let Some(uv) = stack.pop() {
                for a in work.alive_arcs() {
                    if work.tail(a) != uv {
                        continue;
                    }
                    let h = work.head(a);
                    if pr.flow_vertices.contains(&h) {
                        hits.insert(h);
                    } else if seen.insert(h) {
                        stack.push(h);
                    }
                }
            }
            for j in 0..lam {
                if i == j {
                    continue;
                }
                // zero-length connection: x internal on both paths
                if let Some(&q) = pr.pos[j].get(&x) {
                    if q > 0 && q + 1 < pr.seqs[j].len() {
                        e[i][j].push((p, q));
                    }
                }
                for &h in &hits {
                    if pr.pos[i].contains_key(&h) {
                        continue; // endpoint must avoid P_i
                    }
                    if let Some(&q) = pr.pos[j].get(&h) {
                        if q > 0 && q + 1 < pr.seqs[j].len() && !pr.pos[j].contains_key(&x) {
                            e[i][j].push((p, q));
                        }
                    }
                }
            }
        }
    }
    for i in 0..lam {
        for j in 0..lam {
            e[i][j].sort_unstable();
            e[i][j].dedup();
        }
    }
    (Structure { lam, c, e }, pr)
}

fn push_pair(list: &mut Vec<ProjPair>, x: usize, y: usize, clause: usize, crisp: bool) {
    if let Some(p) = list.iter_mut().find(|p| p.x == x && p.y == y) {
        if !p.preimage.contains(&clause) {
            p.preimage.push(clause);
        }
        p.crisp |= crisp;
    } else {
        list.push(ProjPair {
            x,
            y,
            preimage: vec![clause],
            crisp,
        });
    }
}

fn minimal_clause_pairs(list: &[ProjPair]) -> Vec<&ProjPair> {
    list.iter()
        .filter(|p| {
            !list
                .iter()
                .any(|q| (q.x <= p.x && q.y < p.y) || (q.x < p.x && q.y <= p.y))
        })
        .collect()
}

fn minimal_arc_pairs(list: &[(usize, usize)]) -> Vec<(usize, usize)> {
    list.iter()
        .copied()
        .filter(|&(x, y)| {
            !list
                .iter()
                .any(|&(a, b)| (a <= x && b > y) || (a < x && b >= y))
        })
        .collect()
}

fn h_edges(st: &Structure) -> Vec<HEdge> {
    let mut out = Vec::new();
    for i in 0..st.lam {
        for j in 0..st.lam {
            if i != j && !st.e[i][j].is_empty() {
                out.push(HEdge::Arc(i, j));
            }
            if i < j && !st.c[i][j].is_empty() {
                out.push(HEdge::Clause(i, j));
            }
        }
    }
    out
}

/// A cycle with odd label sum among the non-loop edges of H, if any, rotated
/// so the final edge has label 1. Returned as vertices j_1..j_d plus the
/// edges e_1..e_d where e_m joins j_m and j_{m+1} (cyclically).
fn find_nonzero_cycle(st: &Structure) -> Option<(Vec<usize>, Vec<HEdge>)> {
    let edges = h_edges(st);
    let mut pot: Vec<Option<u8>> = vec![None; st.lam];
    let mut parent: Vec<Option<(usize, HEdge)>> = vec![None; st.lam];
    for start in 0..st.lam {
        if pot[start].is_some() {
            continue;
        }
        pot[start] = Some(0);
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &eg in &edges {
                let (a, b) = eg.ends();
                for (from, to) in [(a, b), (b, a)] {
                    if from != u {
                        continue;
                    }
                    let want = pot[u].unwrap() ^ eg.label();
                    match pot[to] {
                        None => {
                            pot[to] = Some(want);
                            parent[to] = Some((u, eg));
                            queue.push_back(to);
                        }
                        Some(p) if p != want => {
                            // conflict: tree path u..to plus eg is a non-zero cycle
                            return Some(build_cycle(&parent, u, to, eg));
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    None
}

fn build_cycle(
    parent: &[Option<(usize, HEdge)>],
    u: usize,
    v: usize,
    closing: HEdge,
) -> (Vec<usize>, Vec<HEdge>) {
    let chain = |mut x: usize| {
        let mut path = vec![x];
        let mut edges = Vec::new();
        while let Some((p, e)) = parent[x] {
            edges.push(e);
            path.push(p);
            x = p;
        }
        (path, edges)
    };
    let (pu, eu) = chain(u);
    let (pv, ev) = chain(v);
    // find the lowest common ancestor
    for (iu, x) in pu.iter().enumerate() {
        if let Some(iv) = pv.iter().position(|y| y == x) {
            // cycle: u..lca along pu, lca..v along pv reversed, close with eg
            let mut verts: Vec<usize> = pu[..=iu].to_vec();
            let mut edges: Vec<HEdge> = eu[..iu].to_vec();
            let mut back_v: Vec<usize> = pv[..iv].to_vec();
            let mut back_e: Vec<HEdge> = ev[..iv].to_vec();
            back_v.reverse();
            back_e.reverse();
            verts.extend(back_v);
            edges.extend(back_e);
            edges.push(closing);
            // rotate so the last edge has label 1
            let d = verts.len();
            debug_assert_eq!(edges.len(), d);
            if let Some(off) = (0..d).find(|&o| edges[(d - 1 + o) % d].label() == 1) {
                let verts2: Vec<usize> = (0..d).map(|m| verts[(m + off) % d]).collect();
                let edges2: Vec<HEdge> = (0..d).map(|m| edges[(m + off) % d]).collect();
                return (verts2, edges2);
            }
            return (verts, edges);
        }
    }
    unreachable!("both endpoints lie in one BFS tree");
}

/// One pair of a connection: positions (x on P_{j_m}, y on P_{j_m+1}).
#[derive(Debug, Clone, Copy)]
struct ConnPair {
    x: usize,
    y: usize,
}

/// Minimal pairs of the type of edge `eg` between consecutive cycle vertices
/// (ji, jn), oriented so the first coordinate lives on P_ji.
fn typed_minimal_pairs(st: &Structure, ji: usize, jn: usize, eg: HEdge) -> Vec<ConnPair> {
    match eg {
        HEdge::Clause(a, b) => {
            debug_assert!((a, b) == (ji.min(jn), ji.max(jn)));
            minimal_clause_pairs(&st.c[ji][jn])
                .into_iter()
                .map(|p| ConnPair { x: p.x, y: p.y })
                .collect()
        }
        HEdge::Arc(a, b) => {
            if (a, b) == (ji, jn) {
                minimal_arc_pairs(&st.e[ji][jn])
                    .into_iter()
                    .map(|(x, y)| ConnPair { x, y })
                    .collect()
            } else {
                debug_assert!((a, b) == (jn, ji));
                minimal_arc_pairs(&st.e[jn][ji])
                    .into_iter()
                    .map(|(x, y)| ConnPair { x: y, y: x })
                    .collect()
            }
        }
    }
}

/// Builds the connection of type J starting from `first`: each later pair is
/// the minimal pair of its edge type whose x is the first position at or
/// after the previous pair's landing, falling back to the last one before it.
fn build_connection(
    st: &Structure,
    verts: &[usize],
    edges: &[HEdge],
    first: ConnPair,
) -> Option<Vec<ConnPair>> {
    let d = verts.len();
    let mut conn = vec![first];
    for m in 1..(d - 1) {
        let pool = typed_minimal_pairs(st, verts[m], verts[m + 1], edges[m]);
        if pool.is_empty() {
            return None;
        }
        let y_prev = conn[m - 1].y;
        let after = pool
            .iter()
            .filter(|p| p.x >= y_prev)
            .min_by_key(|p| p.x)
            .copied();
        let before = pool
            .iter()
            .filter(|p| p.x < y_prev)
            .max_by_key(|p| p.x)
            .copied();
        conn.push(after.or(before)?);
    }
    Some(conn)
}

pub(crate) struct SearchCtx<'a> {
    pub cfg: &'a SolveConfig,
    pub budget: &'a mut u64,
    pub truncated: bool,
    pub stats: &'a mut Stage2Stats,
}

/// Depth accounting for the clause-elimination recursion.
#[derive(Debug, Default, Clone)]
pub struct Stage2Stats {
    pub max_depth: u32,
    /// 3 * k * lambda^2 at stage entry, the depth bound asserted by the
    /// acceptance suite.
    pub entry_bound: u64,
    pub truncated: bool,
}

/// Entry point for the clause-elimination stage on a lifted branch; leaves
/// are clause-free instances (flag false) or residual instances solved by the
/// empty cut (flag true). The callback returns true to stop the search.
pub(crate) fn search(
    work: WorkInstance,
    cfg: &SolveConfig,
    budget: &mut u64,
    on_leaf: &mut impl FnMut(&WorkInstance, bool) -> bool,
) -> bool {
    let mut stats = Stage2Stats::default();
    search_with_stats(work, cfg, budget, &mut stats, on_leaf)
}

pub fn search_with_stats(
    mut work: WorkInstance,
    cfg: &SolveConfig,
    budget: &mut u64,
    stats: &mut Stage2Stats,
    on_leaf: &mut impl FnMut(&WorkInstance, bool) -> bool,
) -> bool {
    // mincut solutions live on at most k * (arcs per bundle) flow paths
    let lam = work.flow.len() as u64;
    if work.k < 0 {
        return false;
    }
    if lam > (work.k as u64) * work.max_bundle_arcs() as u64 && lam > 0 {
        return false;
    }
    stats.entry_bound = 3 * (work.k.max(0) as u64) * lam * lam;
    // make every deletable arc off the flow undeletable
    let on_flow: std::collections::BTreeSet<usize> =
        work.flow.iter().flatten().copied().collect();
    for a in 0..work.arcs.len() {
        if work.deletable(a) && !on_flow.contains(&a) {
            work.add_crisp_copy(a);
        }
    }
    let mut ctx = SearchCtx {
        cfg,
        budget,
        truncated: false,
        stats,
    };
    let found = guess_bundle_edges(&work, &mut ctx, on_leaf);
    ctx.stats.truncated |= ctx.truncated;
    found
}

/// Per-bundle-per-path guessing: for every (bundle, path) pair with deletable
/// edges, either all of them get crisp copies or exactly one stays deletable.
/// The pair list is fixed up front; the per-pair edge sets are disjoint since
/// flow paths never share a soft arc.
fn guess_bundle_edges(
    work: &WorkInstance,
    ctx: &mut SearchCtx,
    on_leaf: &mut impl FnMut(&WorkInstance, bool) -> bool,
) -> bool {
    let mut pairs: Vec<Vec<usize>> = Vec::new();
    for b in 0..work.bundles.len() {
        if !work.bundles[b].alive {
            continue;
        }
        for path in work.flow.iter() {
            let dels: Vec<usize> = path
                .iter()
                .copied()
                .filter(|&a| work.arcs[a].bundle == Some(b) && work.deletable(a))
                .collect();
            if !dels.is_empty() {
                pairs.push(dels);
            }
        }
    }
    guess_pairs(work, &pairs, 0, ctx, on_leaf)
}

fn guess_pairs(
    work: &WorkInstance,
    pairs: &[Vec<usize>],
    at: usize,
    ctx: &mut SearchCtx,
    on_leaf: &mut impl FnMut(&WorkInstance, bool) -> bool,
) -> bool {
    let Some(dels) = pairs.get(at) else {
        return recurse_main(work.clone(), 0, ctx, on_leaf);
    };
    // choice: one edge stays, or none does (bottom)
    for keep in dels.iter().map(Some).chain([None]) {
        if !spend(ctx) {
            return false;
        }
        let mut w2 = work.clone();
        for &a in dels {
            if Some(&a) != keep {
                w2.add_crisp_copy(a);
            }
        }
        // a bottom guess for the only deletable of a path forces an all-crisp
        // st-path; prune such dead branches right away
        if matches!(w2.lambda(), FlowValue::Infinite) {
            continue;
        }
        if guess_pairs(&w2, pairs, at + 1, ctx, on_leaf) {
            return true;
        }
    }
    false
}

fn spend(ctx: &mut SearchCtx) -> bool {
    if *ctx.budget == 0 {
        ctx.truncated = true;
        return false;
    }
    *ctx.budget -= 1;
    true
}

fn recurse_main(
    mut work: WorkInstance,
    depth: u32,
    ctx: &mut SearchCtx,
    on_leaf: &mut impl FnMut(&WorkInstance, bool) -> bool,
) -> bool {
    if depth > ctx.cfg.max_depth {
        ctx.truncated = true;
        return false;
    }
    ctx.stats.max_depth = ctx.stats.max_depth.max(depth);
    if !spend(ctx) {
        return false;
    }
    match work.cleanup() {
        Status::Reject => {
            ctx.cfg.trace(|| format!("depth {depth}: cleanup rejected"));
            return false;
        }
        Status::SolvedEmpty => return on_leaf(&work, true),
        Status::Ok => {}
    }
    if !work.flow_still_max() {
        ctx.cfg.trace(|| format!("depth {depth}: flow no longer maximum"));
        return false;
    }
    let (st, pr) = compute_structure(&work);
    if let Some((verts, edges)) = find_nonzero_cycle(&st) {
        return branch_on_cycle(&work, &st, &pr, &verts, &edges, depth, ctx, on_leaf);
    }
    // label-1 loops
    let loops: Vec<usize> = (0..st.lam).filter(|&i| !st.c[i][i].is_empty()).collect();
    if !loops.is_empty() {
        return branch_on_loops(&work, &st, &pr, &loops, depth, ctx, on_leaf);
    }
    reversal(&work, &st, &pr, ctx, on_leaf)
}

fn pick_loop_pair(st: &Structure, i: usize) -> (usize, usize) {
    // pair whose later vertex is as early as possible
    st.c[i][i]
        .iter()
        .map(|p| (p.x.max(p.y), p.x.min(p.y)))
        .min()
        .map(|(later, earlier)| (earlier, later))
        .unwrap()
}

fn branch_on_loops(
    work: &WorkInstance,
    st: &Structure,
    pr: &super::lift::Projections,
    loops: &[usize],
    depth: u32,
    ctx: &mut SearchCtx,
    on_leaf: &mut impl FnMut(&WorkInstance, bool) -> bool,
) -> bool {
    // (a) some loop has both chosen endpoints on the s-side
    for &i in loops {
        if !spend(ctx) {
            return false;
        }
        let (_, later) = pick_loop_pair(st, i);
        let v = pr.seqs[i][later];
        let mut w2 = work.clone();
        w2.contract_path_prefix(i, v);
        ctx.cfg.trace(|| format!("loop branch: path {i} up to pos {later} onto s"));
        if recurse_main(w2, depth + 1, ctx, on_leaf) {
            return true;
        }
    }
    // (b) no such loop: every chosen later endpoint is on the t-side
    if !spend(ctx) {
        return false;
    }
    let mut w2 = work.clone();
    for &i in loops {
        let (_, later) = pick_loop_pair(st, i);
        let seqs = w2.path_vertices(i);
        let v = pr.seqs[i][later];
        if seqs.contains(&w2.find(v)) {
            w2.contract_path_suffix(i, v);
        }
    }
    ctx.cfg.trace(|| "loop branch: all loops onto t".to_string());
    recurse_main(w2, depth + 1, ctx, on_leaf)
}

#[allow(clippy::too_many_arguments)]
fn branch_on_cycle(
    work: &WorkInstance,
    st: &Structure,
    pr: &super::lift::Projections,
    verts: &[usize],
    edges: &[HEdge],
    depth: u32,
    ctx: &mut SearchCtx,
    on_leaf: &mut impl FnMut(&WorkInstance, bool) -> bool,
) -> bool {
    let d = verts.len();
    debug_assert_eq!(edges.last().map(HEdge::label), Some(1));
    // connection pool F ordered by starting position
    let mut connections: Vec<Vec<ConnPair>> = Vec::new();
    for first in typed_minimal_pairs(st, verts[0], verts[1.min(d - 1)], edges[0]) {
        if let Some(conn) = build_connection(st, verts, edges, first) {
            connections.push(conn);
        }
    }
    connections.sort_by_key(|c| c[0].x);
    // f': first connection dominated-ward of some minimal pair of C'_{j1,jd}
    let (j1, jd) = (verts[0], verts[d - 1]);
    let cjd = minimal_clause_pairs(&st.c[j1][jd]);
    let fprime_idx = connections.iter().position(|f| {
        let v1 = f[0].x;
        let vd = f[d - 2].y;
        cjd.iter().any(|p| p.x <= v1 && p.y <= vd)
    });
    let f_idx = match fprime_idx {
        Some(0) => None,
        Some(i) => Some(i - 1),
        None => connections.len().checked_sub(1),
    };

    // branch on f (cases 1-6 + canonical), then f', then the A/B/C step
    let fs: Vec<Option<&Vec<ConnPair>>> = vec![f_idx.map(|i| &connections[i])];
    let fps: Vec<Option<&Vec<ConnPair>>> = vec![fprime_idx.map(|i| &connections[i])];
    for &f in &fs {
        for &fp in &fps {
            // surgical cases on f
            if let Some(conn) = f {
                if branch_connection_cases(work, st, pr, verts, edges, conn, depth, ctx, on_leaf) {
                    return true;
                }
            }
            if let Some(conn) = fp {
                if branch_connection_cases(work, st, pr, verts, edges, conn, depth, ctx, on_leaf) {
                    return true;
                }
            }
            // both canonical: the guessing step
            if guess_step(work, st, pr, verts, edges, f, fp, depth, ctx, on_leaf) {
                return true;
            }
        }
    }
    false
}

/// Cases 1-6: surgical branches on the pairs of one connection.
#[allow(clippy::too_many_arguments)]
fn branch_connection_cases(
    work: &WorkInstance,
    st: &Structure,
    pr: &super::lift::Projections,
    verts: &[usize],
    edges: &[HEdge],
    conn: &[ConnPair],
    depth: u32,
    ctx: &mut SearchCtx,
    on_leaf: &mut impl FnMut(&WorkInstance, bool) -> bool,
) -> bool {
    let d = verts.len();
    let vert_at = |path: usize, posn: usize| pr.seqs[path][posn];
    for m in 0..(d - 1) {
        let (ji, jn) = (verts[m], verts[m + 1]);
        let p = conn[m];
        let xv = vert_at(ji, p.x);
        let yv = vert_at(jn, p.y);
        match edges[m].label() {
            1 => {
                // case 1: both endpoints on the s-side
                if !spend(ctx) {
                    return false;
                }
                let mut w = work.clone();
                w.contract_path_prefix(ji, xv);
                contract_if_present(&mut w, jn, yv, true);
                if recurse_main(w, depth + 1, ctx, on_leaf) {
                    return true;
                }
                // case 2: both on the t-side
                if !spend(ctx) {
                    return false;
                }
                let mut w = work.clone();
                w.contract_path_suffix(ji, xv);
                contract_if_present(&mut w, jn, yv, false);
                if recurse_main(w, depth + 1, ctx, on_leaf) {
                    return true;
                }
            }
            _ => {
                // cases 3/4: the pair's tail side in t, head side in s
                if !spend(ctx) {
                    return false;
                }
                let mut w = work.clone();
                match edges[m] {
                    HEdge::Arc(a, _) if a == ji => {
                        // arc from P_ji: x is the tail
                        w.contract_path_suffix(ji, xv);
                        contract_if_present(&mut w, jn, yv, true);
                    }
                    _ => {
                        // arc from P_jn: y is the tail
                        contract_if_present(&mut w, jn, yv, false);
                        w.contract_path_prefix(ji, xv);
                    }
                }
                if recurse_main(w, depth + 1, ctx, on_leaf) {
                    return true;
                }
            }
        }
    }
    // case 6: first interior path where x_m and y_m split sides
    for m in 1..(d - 1) {
        let jm = verts[m];
        let x_m = conn[m].x; // position on P_jm (pair m starts there)
        let y_m = conn[m - 1].y; // landing of the previous pair on P_jm
        if x_m == y_m {
            continue;
        }
        let label = edges[m].label();
        let xv = vert_at(jm, x_m);
        let yv = vert_at(jm, y_m);
        let jn = verts[m + 1];
        let ynv = vert_at(jn, conn[m].y);
        if label == 1 {
            if x_m < y_m {
                if !spend(ctx) {
                    return false;
                }
                let mut w = work.clone();
                w.contract_path_prefix(jm, xv);
                contract_if_present(&mut w, jm, yv, false);
                contract_if_present(&mut w, jn, ynv, false);
                if recurse_main(w, depth + 1, ctx, on_leaf) {
                    return true;
                }
            } else {
                // base contraction
                let base = {
                    let mut w = work.clone();
                    contract_if_present(&mut w, jm, yv, true);
                    contract_if_present(&mut w, jn, ynv, true);
                    w.contract_path_suffix(jm, xv);
                    w
                };
                // inner branch on the closest minimal pair before x_m
                let pool = minimal_clause_pairs(&st.c[jm][jn]);
                let pchoice = pool
                    .iter()
                    .filter(|p| p.x < x_m)
                    .max_by_key(|p| p.x)
                    .map(|p| (p.x, p.y, p.preimage.clone(), p.crisp));
                if let Some((_, py, preimage, crisp)) = pchoice {
                    // (a) the pair is violated: delete its preimage bundles
                    if !crisp {
                        if !spend(ctx) {
                            return false;
                        }
                        let mut w = base.clone();
                        if delete_preimage(&mut w, &preimage) && recurse_main(w, depth + 1, ctx, on_leaf)
                        {
                            return true;
                        }
                    }
                    // (b) its far endpoint is on the t-side
                    if !spend(ctx) {
                        return false;
                    }
                    let mut w = base.clone();
                    contract_if_present(&mut w, jn, vert_at(jn, py), false);
                    if recurse_main(w, depth + 1, ctx, on_leaf) {
                        return true;
                    }
                } else {
                    if !spend(ctx) {
                        return false;
                    }
                    if recurse_main(base, depth + 1, ctx, on_leaf) {
                        return true;
                    }
                }
            }
        } else {
            if !spend(ctx) {
                return false;
            }
            let mut w = work.clone();
            if x_m < y_m {
                w.contract_path_prefix(jm, xv);
                contract_if_present(&mut w, jm, yv, false);
                contract_if_present(&mut w, jn, ynv, true);
            } else {
                contract_if_present(&mut w, jm, yv, true);
                w.contract_path_suffix(jm, xv);
                contract_if_present(&mut w, jn, ynv, false);
            }
            if recurse_main(w, depth + 1, ctx, on_leaf) {
                return true;
            }
        }
    }
    false
}

/// Contracts vertex v on path `pi` onto s (prefix) or t (suffix) when it is
/// still present there; merged-away vertices need no further surgery.
fn contract_if_present(w: &mut WorkInstance, pi: usize, v: usize, onto_s: bool) {
    if pi >= w.flow.len() {
        return;
    }
    let root = w.find(v);
    if !w.path_vertices(pi).contains(&root) {
        return;
    }
    if onto_s {
        w.contract_path_prefix(pi, root);
    } else {
        w.contract_path_suffix(pi, root);
    }
}

fn delete_preimage(w: &mut WorkInstance, preimage: &[usize]) -> bool {
    let mut bundles: Vec<usize> = Vec::new();
    for &c in preimage {
        match w.clauses[c].bundle {
            None => return false, // crisp clause cannot be violated
            Some(b) => {
                if !bundles.contains(&b) {
                    bundles.push(b);
                }
            }
        }
    }
    for b in bundles {
        w.delete_bundle(b);
    }
    true
}

/// The guessing step once both boundary connections carry canonical
/// assignments: either the witness pair of f' is violated (its bundles go),
/// or contraction per Case A, or one of the checkable cases B / C-1 / C-2 /
/// C-3 applies.
#[allow(clippy::too_many_arguments)]
fn guess_step(
    work: &WorkInstance,
    st: &Structure,
    pr: &super::lift::Projections,
    verts: &[usize],
    edges: &[HEdge],
    f: Option<&Vec<ConnPair>>,
    fp: Option<&Vec<ConnPair>>,
    depth: u32,
    ctx: &mut SearchCtx,
    on_leaf: &mut impl FnMut(&WorkInstance, bool) -> bool,
) -> bool {
    let d = verts.len();
    let (j1, j2, jd) = (verts[0], verts[1.min(d - 1)], verts[d - 1]);
    let vert_at = |path: usize, posn: usize| pr.seqs[path][posn];
    let v1 = |c: &Vec<ConnPair>| c[0].x;
    let vd = |c: &Vec<ConnPair>| c[d - 2].y;

    // branch: f' has the canonical assignment placing its witness pair on
    // the s-side; the pair's bundles are then violated
    if let Some(fpc) = fp {
        let witness = minimal_clause_pairs(&st.c[j1][jd])
            .into_iter()
            .filter(|p| p.x <= v1(fpc) && p.y <= vd(fpc))
            .min_by_key(|p| (p.x, p.y))
            .map(|p| (p.preimage.clone(), p.crisp));
        if let Some((preimage, crisp)) = witness {
            if !crisp {
                if !spend(ctx) {
                    return false;
                }
                let mut w = work.clone();
                if delete_preimage(&mut w, &preimage) && recurse_main(w, depth + 1, ctx, on_leaf) {
                    return true;
                }
            }
        }
    }

    // Case A: f canonical with the s-side assignment
    {
        if !spend(ctx) {
            return false;
        }
        let mut w = work.clone();
        if let Some(fc) = f {
            let x1 = vert_at(j1, fc[0].x);
            w.contract_path_prefix(j1, x1);
            let y2 = vert_at(j2, fc[0].y);
            // side of the landing: same side as x1 for label 0, opposite for 1
            contract_if_present(&mut w, j2, y2, edges[0].label() == 0);
        }
        if let Some(fpc) = fp {
            let x1p = vert_at(j1, fpc[0].x);
            contract_if_present(&mut w, j1, x1p, false);
            let y2p = vert_at(j2, fpc[0].y);
            contract_if_present(&mut w, j2, y2p, edges[0].label() == 1);
        }
        if recurse_main(w, depth + 1, ctx, on_leaf) {
            return true;
        }
    }

    // Cases B / C: f canonical with the t-side assignment (needs a real f)
    let Some(fc) = f else {
        return false;
    };
    if !spend(ctx) {
        return false;
    }
    let minimal = minimal_clause_pairs(&st.c[j1][jd]);
    let (fv1, fvd) = (v1(fc), vd(fc));
    // Case B: a minimal pair dominated-ward of f on both paths
    if let Some(p) = minimal
        .iter()
        .filter(|p| p.x >= fv1 && p.y >= fvd)
        .min_by_key(|p| (p.x, p.y))
    {
        let mut w = work.clone();
        w.contract_path_suffix(j1, vert_at(j1, p.x));
        contract_if_present(&mut w, jd, vert_at(jd, p.y), false);
        return recurse_main(w, depth + 1, ctx, on_leaf);
    }
    let ltr: Vec<_> = minimal.iter().filter(|p| p.x < fv1 && p.y > fvd).collect();
    let rtl: Vec<_> = minimal.iter().filter(|p| p.x > fv1 && p.y < fvd).collect();
    if !ltr.is_empty() && !rtl.is_empty() {
        // C-1: crossers in both directions
        let p1 = ltr.iter().max_by_key(|p| p.x).unwrap();
        let p2 = rtl.iter().min_by_key(|p| p.x).unwrap();
        let mut w = work.clone();
        w.contract_path_suffix(j1, vert_at(j1, p2.x));
        contract_if_present(&mut w, jd, vert_at(jd, p1.y), false);
        return recurse_main(w, depth + 1, ctx, on_leaf);
    }
    if !ltr.is_empty() {
        // C-2: every minimal pair crosses left-to-right; their far endpoints
        // sit past the t-side landing of f, so the far path contracts
        let py = ltr.iter().map(|p| p.y).min().unwrap();
        let mut w = work.clone();
        w.contract_path_suffix(jd, vert_at(jd, py));
        return recurse_main(w, depth + 1, ctx, on_leaf);
    }
    if !rtl.is_empty() {
        // C-3: symmetric
        let px = rtl.iter().map(|p| p.x).min().unwrap();
        let mut w = work.clone();
        w.contract_path_suffix(j1, vert_at(j1, px));
        return recurse_main(w, depth + 1, ctx, on_leaf);
    }
    false
}

/// Partition of the path indices consistent with the labels: endpoints of a
/// label-0 arc agree, endpoints of a label-1 edge differ.
fn path_sides(st: &Structure) -> Option<Vec<SideLabel>> {
    let mut side: Vec<Option<SideLabel>> = vec![None; st.lam];
    let edges = h_edges(st);
    for start in 0..st.lam {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(SideLabel::Zero);
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &eg in &edges {
                let (a, b) = eg.ends();
                for (from, to) in [(a, b), (b, a)] {
                    if from != u {
                        continue;
                    }
                    let want = match (side[u].unwrap(), eg.label()) {
                        (s, 0) => s,
                        (SideLabel::Zero, _) => SideLabel::One,
                        (SideLabel::One, _) => SideLabel::Zero,
                    };
                    match side[to] {
                        None => {
                            side[to] = Some(want);
                            queue.push_back(to);
                        }
                        Some(s) if s != want => return None,
                        _ => {}
                    }
                }
            }
        }
    }
    Some(side.into_iter().map(|s| s.unwrap()).collect())
}

/// Final step: classify every vertex by the flow-path side it attaches to,
/// reverse the one-side subgraph, replace clauses by arcs across the split,
/// and hand the clause-free instance to the consumer.
fn reversal(
    work: &WorkInstance,
    st: &Structure,
    _pr: &super::lift::Projections,
    ctx: &mut SearchCtx,
    on_leaf: &mut impl FnMut(&WorkInstance, bool) -> bool,
) -> bool {
    let Some(sides) = path_sides(st) else {
        return false; // a non-zero cycle survived; this branch is corrupt
    };
    let mut w = work.clone();
    // reversal-specific cleaning: drop vertices with no route to t or to a
    // clause endpoint in G - {s}
    let t = w.t();
    let s = w.s();
    let mut targets: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
    targets.insert(t);
    for c in w.alive_clauses() {
        targets.insert(w.find(w.clauses[c].u));
        targets.insert(w.find(w.clauses[c].v));
    }
    let mut keep = vec![false; w.uf.len()];
    for &x in &targets {
        keep[x] = true;
    }
    let mut stack: Vec<usize> = targets.into_iter().collect();
    while let Some(u) = stack.pop() {
        for a in w.alive_arcs().collect::<Vec<_>>() {
            let (tl, hd) = (w.tail(a), w.head(a));
            if hd == u && tl != s && !keep[tl] {
                keep[tl] = true;
                stack.push(tl);
            }
        }
    }
    keep[s] = true;
    let mut changed = false;
    for a in 0..w.arcs.len() {
        if w.arcs[a].alive {
            let (tl, hd) = (w.tail(a), w.head(a));
            if !keep[tl] || !keep[hd] {
                w.arcs[a].alive = false;
                changed = true;
            }
        }
    }
    if changed {
        match w.cleanup() {
            Status::Reject => return false,
            Status::SolvedEmpty => return on_leaf(&w, true),
            Status::Ok => {}
        }
        if !w.flow_still_max() {
            return false;
        }
    }
    match bipartite_split_and_reverse_inner(&w, &sides) {
        Ok(out) => on_leaf(&out, false),
        Err(msg) => {
            ctx.cfg.trace(|| format!("reversal rejected: {msg}"));
            false
        }
    }
}

/// Public wrapper: splits a prepared instance (no non-zero cycles, cleaned)
/// along the given path-side partition, reversing the one-side part and
/// turning every clause into an arc across the split.
pub fn bipartite_split_and_reverse(
    work: &WorkInstance,
    sides: &[SideLabel],
) -> Result<WorkInstance, String> {
    bipartite_split_and_reverse_inner(work, sides)
}

fn bipartite_split_and_reverse_inner(
    work: &WorkInstance,
    sides: &[SideLabel],
) -> Result<WorkInstance, String> {
    let pr = projections(work);
    let s = work.s();
    let t = work.t();
    // vertex classification: the flow paths a vertex attaches to
    let mut side_of: std::collections::BTreeMap<usize, SideLabel> =
        std::collections::BTreeMap::new();
    let classify = |v: usize,
                        side_of: &mut std::collections::BTreeMap<usize, SideLabel>|
     -> Result<Option<SideLabel>, String> {
        if v == s || v == t {
            return Ok(None);
        }
        if let Some(&sd) = side_of.get(&v) {
            return Ok(Some(sd));
        }
        let mut hit0 = false;
        let mut hit1 = false;
        for (i, &sd) in sides.iter().enumerate() {
            let on_path = pr.pos[i]
                .get(&v)
                .map(|&p| p > 0 && p + 1 < pr.seqs[i].len())
                .unwrap_or(false);
            let hit = on_path
                || pr.proj[i]
                    .get(&v)
                    .map(|&p| {
                        // attachment from an internal starting vertex only
                        p > 0 && !pr.flow_vertices.contains(&v)
                    })
                    .unwrap_or(false);
            if hit {
                match sd {
                    SideLabel::Zero => hit0 = true,
                    SideLabel::One => hit1 = true,
                }
            }
        }
        let sd = match (hit0, hit1) {
            (true, false) => SideLabel::Zero,
            (false, true) => SideLabel::One,
            (true, true) => return Err(format!("vertex {v} classifies into both sides")),
            (false, false) => return Err(format!("vertex {v} classifies into neither side")),
        };
        side_of.insert(v, sd);
        Ok(Some(sd))
    };

    let mut out = work.clone();
    out.flow.clear();
    for a in 0..out.arcs.len() {
        if !out.arcs[a].alive {
            continue;
        }
        let (tl, hd) = (work.tail(a), work.head(a));
        let stl = classify(tl, &mut side_of)?;
        let shd = classify(hd, &mut side_of)?;
        let side = match (stl, shd) {
            (Some(x), Some(y)) => {
                if x != y {
                    return Err("arc endpoints classify into distinct sides".into());
                }
                x
            }
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => {
                // s-t arcs: crisp ones were cleaned or rejected; soft ones had
                // their bundles deleted by cleanup
                return Err("unexpected terminal-terminal arc at reversal".into());
            }
        };
        if side == SideLabel::One {
            // reverse the arc and swap its terminals
            let WorkArcView { tail, head } = reversed_view(&out, a, s, t);
            out.arcs[a].tail = tail;
            out.arcs[a].head = head;
        }
    }
    // clauses become arcs from the zero-side endpoint to the one-side endpoint
    for ci in 0..out.clauses.len() {
        if !out.clauses[ci].alive {
            continue;
        }
        let (u, v) = (work.find(work.clauses[ci].u), work.find(work.clauses[ci].v));
        let su = classify(u, &mut side_of)?.ok_or("clause touching a terminal at reversal")?;
        let sv = classify(v, &mut side_of)?.ok_or("clause touching a terminal at reversal")?;
        let (from, to) = match (su, sv) {
            (SideLabel::Zero, SideLabel::One) => (u, v),
            (SideLabel::One, SideLabel::Zero) => (v, u),
            _ => return Err("clause endpoints classify into one side".into()),
        };
        let bundle = out.clauses[ci].bundle;
        out.clauses[ci].alive = false;
        let aid = out.arcs.len();
        out.arcs.push(super::work::WArc {
            tail: from,
            head: to,
            bundle,
            alive: true,
            origin: super::work::ArcOrigin::Synthetic,
        });
        if let Some(b) = bundle {
            out.bundles[b].arcs.push(aid);
        }
    }
    Ok(out)
}

struct WorkArcView {
    tail: usize,
    head: usize,
}

fn reversed_view(w: &WorkInstance, a: usize, s: usize, t: usize) -> WorkArcView {
    let (tl, hd) = (w.tail(a), w.head(a));
    let swap = |v: usize| {
        if v == s {
            t
        } else if v == t {
            s
        } else {
            v
        }
    };
    WorkArcView {
        tail: swap(hd),
        head: swap(tl),
    }
}

/// Convenience wrapper: collects the clause-free leaves reachable from a
/// lifted branch.
pub fn eliminate_clauses(
    work: &WorkInstance,
    cfg: &SolveConfig,
) -> Vec<(WorkInstance, bool)> {
    let mut leaves = Vec::new();
    let mut budget = cfg.max_branches;
    search(work.clone(), cfg, &mut budget, &mut |leaf, empty_ok| {
        leaves.push((leaf.clone(), empty_ok));
        false
    });
    leaves
}
