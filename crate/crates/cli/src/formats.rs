//! Text formats: language files, formula files, the three cut-instance
//! formats and certificates. Variables, vertices, arcs, bundles and pairs
//! are 1-indexed in the files.

use anyhow::{anyhow, bail, Context, Result};
use minsat_core::clausecut::{CcBundle, CcClause, ClauseCutInstance};
use minsat_core::flow::CutDigraph;
use minsat_core::formula::{Formula, Weight};
use minsat_core::gdpc::{GdpcBundle, GdpcClause, GdpcInstance};
use minsat_core::hardness::PairedCutInstance;
use minsat_core::language::Language;
use minsat_core::relation::BooleanRelation;
use num_bigint::BigUint;
use std::path::Path;

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_language(text: &str) -> Result<Language> {
    let mut lang = Language::new();
    for (ln, line) in numbered_lines(text) {
        let mut it = line.split_whitespace();
        let kw = it.next().unwrap();
        if kw != "relation" {
            bail!("line {ln}: expected 'relation', found '{kw}'");
        }
        let name = it.next().ok_or_else(|| anyhow!("line {ln}: missing name"))?;
        let arity: usize = it
            .next()
            .ok_or_else(|| anyhow!("line {ln}: missing arity"))?
            .parse()
            .with_context(|| format!("line {ln}: bad arity"))?;
        let tuples: Vec<&str> = match it.next() {
            Some(t) => t.split(',').filter(|s| !s.is_empty()).collect(),
            None => Vec::new(),
        };
        let rel = BooleanRelation::from_tuples(arity, &tuples)
            .map_err(|e| anyhow!("line {ln}: {e}"))?;
        lang.add(name, rel).map_err(|e| anyhow!("line {ln}: {e}"))?;
    }
    Ok(lang)
}

pub fn print_language(lang: &Language) -> String {
    let mut out = String::new();
    for (name, rel) in lang.iter() {
        let tuples: Vec<String> = rel
            .tuples()
            .into_iter()
            .map(|t| t.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect();
        out.push_str(&format!(
            "relation {name} {} {}\n",
            rel.arity(),
            tuples.join(",")
        ));
    }
    out
}

/// Parses a formula file; the `lang <path>` line is resolved relative to the
/// formula's own location.
pub fn parse_formula(text: &str, base: &Path) -> Result<(Formula, Language)> {
    let mut lang: Option<Language> = None;
    let mut vars: Option<usize> = None;
    let mut k: Option<u64> = None;
    let mut w: Option<u64> = None;
    let mut constraints: Vec<(String, Weight, Vec<usize>, usize)> = Vec::new();
    for (ln, line) in numbered_lines(text) {
        let mut it = line.split_whitespace();
        match it.next().unwrap() {
            "lang" => {
                let p = it.next().ok_or_else(|| anyhow!("line {ln}: missing path"))?;
                let path = base.join(p);
                let body = std::fs::read_to_string(&path)
                    .with_context(|| format!("line {ln}: reading {}", path.display()))?;
                lang = Some(parse_language(&body)?);
            }
            "vars" => vars = Some(it.next().ok_or_else(|| anyhow!("line {ln}: missing count"))?.parse()?),
            "k" => k = Some(it.next().ok_or_else(|| anyhow!("line {ln}: missing k"))?.parse()?),
            "W" => w = Some(it.next().ok_or_else(|| anyhow!("line {ln}: missing W"))?.parse()?),
            "c" => {
                let wtok = it.next().ok_or_else(|| anyhow!("line {ln}: missing weight"))?;
                let weight = if wtok == "*" {
                    Weight::Crisp
                } else {
                    Weight::Soft(wtok.parse().with_context(|| format!("line {ln}: bad weight"))?)
                };
                let rel = it.next().ok_or_else(|| anyhow!("line {ln}: missing relation"))?;
                let scope: Vec<usize> = it
                    .map(|v| -> Result<usize> {
                        let x: usize = v.parse().with_context(|| format!("line {ln}: bad var"))?;
                        if x == 0 {
                            bail!("line {ln}: variables are 1-indexed");
                        }
                        Ok(x - 1)
                    })
                    .collect::<Result<_>>()?;
                constraints.push((rel.to_string(), weight, scope, ln));
            }
            other => bail!("line {ln}: unknown keyword '{other}'"),
        }
    }
    let lang = lang.ok_or_else(|| anyhow!("missing 'lang' line"))?;
    let vars = vars.ok_or_else(|| anyhow!("missing 'vars' line"))?;
    let k = k.ok_or_else(|| anyhow!("missing 'k' line"))?;
    let mut f = Formula::new(lang.clone(), vars, k, w);
    for (name, weight, scope, ln) in constraints {
        let idx = f
            .language
            .index_of(&name)
            .ok_or_else(|| anyhow!("line {ln}: unknown relation '{name}'"))?;
        let arity = f.language.relation(idx).arity();
        if scope.len() != arity {
            bail!("line {ln}: relation '{name}' has arity {arity}, got {} variables", scope.len());
        }
        if let Some(&v) = scope.iter().find(|&&v| v >= vars) {
            bail!("line {ln}: variable {} out of range", v + 1);
        }
        f.push(idx, scope, weight);
    }
    Ok((f, lang))
}

pub fn print_formula(f: &Formula, lang_path: &str) -> String {
    let mut out = format!("lang {lang_path}\nvars {}\nk {}\n", f.num_vars, f.budget_k);
    if let Some(w) = f.budget_w {
        out.push_str(&format!("W {w}\n"));
    }
    for c in &f.constraints {
        let w = match c.weight {
            Weight::Crisp => "*".to_string(),
            Weight::Soft(w) => w.to_string(),
        };
        let scope: Vec<String> = c.scope.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&format!(
            "c {w} {} {}\n",
            f.language.name(c.relation),
            scope.join(" ")
        ));
    }
    out
}

struct CutSections {
    n: usize,
    s: usize,
    t: usize,
    arcs: Vec<(usize, usize, Option<usize>)>,
    clauses: Vec<(Vec<usize>, Option<usize>)>,
    weights: Vec<(usize, BigUint)>,
    k: u64,
    w: Option<BigUint>,
    pairs: Vec<(usize, usize)>,
    paths: Vec<Vec<usize>>,
}

fn parse_cut_sections(text: &str) -> Result<CutSections> {
    let mut sec = CutSections {
        n: 0,
        s: 0,
        t: 0,
        arcs: vec![],
        clauses: vec![],
        weights: vec![],
        k: 0,
        w: None,
        pairs: vec![],
        paths: vec![],
    };
    let idx = |tok: &str, ln: usize| -> Result<usize> {
        let v: usize = tok.parse().with_context(|| format!("line {ln}: bad id '{tok}'"))?;
        if v == 0 {
            bail!("line {ln}: ids are 1-indexed");
        }
        Ok(v - 1)
    };
    for (ln, line) in numbered_lines(text) {
        let mut it = line.split_whitespace();
        match it.next().unwrap() {
            "v" => sec.n = it.next().ok_or_else(|| anyhow!("line {ln}: missing count"))?.parse()?,
            "s" => sec.s = idx(it.next().ok_or_else(|| anyhow!("line {ln}"))?, ln)?,
            "t" => sec.t = idx(it.next().ok_or_else(|| anyhow!("line {ln}"))?, ln)?,
            "arc" => {
                let u = idx(it.next().ok_or_else(|| anyhow!("line {ln}: missing tail"))?, ln)?;
                let v = idx(it.next().ok_or_else(|| anyhow!("line {ln}: missing head"))?, ln)?;
                let bundle = match (it.next(), it.next()) {
                    (Some("bundle"), Some(b)) => Some(idx(b, ln)?),
                    (None, _) => None,
                    _ => bail!("line {ln}: expected 'bundle <id>'"),
                };
                sec.arcs.push((u, v, bundle));
            }
            "clause" => {
                let rest: Vec<&str> = it.collect();
                let (bundle, members) = if rest.first() == Some(&"bundle") {
                    if rest.len() < 2 {
                        bail!("line {ln}: expected 'bundle <id>'");
                    }
                    (Some(idx(rest[1], ln)?), &rest[2..])
                } else {
                    (None, &rest[..])
                };
                if members.is_empty() {
                    bail!("line {ln}: empty clause");
                }
                let members: Vec<usize> =
                    members.iter().map(|m| idx(m, ln)).collect::<Result<_>>()?;
                sec.clauses.push((members, bundle));
            }
            "bundle" => {
                let b = idx(it.next().ok_or_else(|| anyhow!("line {ln}: missing id"))?, ln)?;
                match (it.next(), it.next()) {
                    (Some("weight"), Some(w)) => sec
                        .weights
                        .push((b, w.parse::<BigUint>().map_err(|_| anyhow!("line {ln}: bad weight"))?)),
                    _ => bail!("line {ln}: expected 'weight <w>'"),
                }
            }
            "k" => sec.k = it.next().ok_or_else(|| anyhow!("line {ln}"))?.parse()?,
            "W" => {
                sec.w = Some(
                    it.next()
                        .ok_or_else(|| anyhow!("line {ln}"))?
                        .parse::<BigUint>()
                        .map_err(|_| anyhow!("line {ln}: bad W"))?,
                )
            }
            "pair" => {
                let a = idx(it.next().ok_or_else(|| anyhow!("line {ln}"))?, ln)?;
                let b = idx(it.next().ok_or_else(|| anyhow!("line {ln}"))?, ln)?;
                sec.pairs.push((a, b));
            }
            "path" => {
                let p: Vec<usize> = it.map(|x| idx(x, ln)).collect::<Result<_>>()?;
                sec.paths.push(p);
            }
            other => bail!("line {ln}: unknown keyword '{other}'"),
        }
    }
    if sec.n == 0 {
        bail!("missing 'v' section");
    }
    Ok(sec)
}

fn build_graph(sec: &CutSections, soft_from_bundles: bool) -> Result<CutDigraph> {
    let mut g = CutDigraph::new(sec.n, sec.s, sec.t);
    for &(u, v, bundle) in &sec.arcs {
        if u >= sec.n || v >= sec.n {
            bail!("arc endpoint out of range");
        }
        g.add_arc(u, v, if soft_from_bundles { bundle.is_some() } else { true });
    }
    Ok(g)
}

pub fn parse_gdpc(text: &str) -> Result<GdpcInstance> {
    let sec = parse_cut_sections(text)?;
    let graph = build_graph(&sec, true)?;
    let nb = sec
        .arcs
        .iter()
        .filter_map(|a| a.2)
        .chain(sec.clauses.iter().filter_map(|c| c.1))
        .max()
        .map_or(0, |m| m + 1);
    let mut bundles = vec![
        GdpcBundle {
            arcs: vec![],
            clauses: vec![],
            weight: BigUint::from(1u32),
        };
        nb
    ];
    for (b, w) in &sec.weights {
        if *b >= nb {
            bail!("bundle {} has a weight but no members", b + 1);
        }
        bundles[*b].weight = w.clone();
    }
    for (id, &(_, _, bundle)) in sec.arcs.iter().enumerate() {
        if let Some(b) = bundle {
            bundles[b].arcs.push(id);
        }
    }
    let mut clauses = Vec::new();
    for (ci, (members, bundle)) in sec.clauses.iter().enumerate() {
        if members.len() != 2 {
            bail!("pair-cut clauses carry exactly two vertices");
        }
        clauses.push(GdpcClause {
            u: members[0],
            v: members[1],
        });
        if let Some(b) = bundle {
            bundles[*b].clauses.push(ci);
        }
    }
    let inst = GdpcInstance {
        graph,
        clauses,
        bundles,
        k: sec.k,
        w: sec.w.unwrap_or_default(),
    };
    inst.validate().map_err(|e| anyhow!("invalid instance: {e}"))?;
    Ok(inst)
}

pub fn print_gdpc(inst: &GdpcInstance) -> String {
    let mut out = format!(
        "v {}\ns {}\nt {}\n",
        inst.graph.n,
        inst.graph.s + 1,
        inst.graph.t + 1
    );
    for (id, a) in inst.graph.arcs.iter().enumerate() {
        match inst.arc_bundle(id) {
            Some(b) => out.push_str(&format!(
                "arc {} {} bundle {}\n",
                a.tail + 1,
                a.head + 1,
                b + 1
            )),
            None => out.push_str(&format!("arc {} {}\n", a.tail + 1, a.head + 1)),
        }
    }
    for (ci, c) in inst.clauses.iter().enumerate() {
        match inst.clause_bundle(ci) {
            Some(b) => out.push_str(&format!("clause bundle {} {} {}\n", b + 1, c.u + 1, c.v + 1)),
            None => out.push_str(&format!("clause {} {}\n", c.u + 1, c.v + 1)),
        }
    }
    for (b, bundle) in inst.bundles.iter().enumerate() {
        out.push_str(&format!("bundle {} weight {}\n", b + 1, bundle.weight));
    }
    out.push_str(&format!("k {}\nW {}\n", inst.k, inst.w));
    out
}

pub fn parse_ccut(text: &str) -> Result<ClauseCutInstance> {
    let sec = parse_cut_sections(text)?;
    let graph = build_graph(&sec, true)?;
    let nb = sec
        .arcs
        .iter()
        .filter_map(|a| a.2)
        .chain(sec.clauses.iter().filter_map(|c| c.1))
        .max()
        .map_or(0, |m| m + 1);
    let mut bundles = vec![CcBundle::default(); nb];
    for (id, &(_, _, bundle)) in sec.arcs.iter().enumerate() {
        if let Some(b) = bundle {
            bundles[b].arcs.push(id);
        }
    }
    let mut clauses = Vec::new();
    for (ci, (members, bundle)) in sec.clauses.iter().enumerate() {
        clauses.push(CcClause {
            members: members.clone(),
        });
        if let Some(b) = bundle {
            bundles[*b].clauses.push(ci);
        }
    }
    let inst = ClauseCutInstance {
        graph,
        clauses,
        bundles,
        k: sec.k,
    };
    inst.validate().map_err(|e| anyhow!("invalid instance: {e}"))?;
    Ok(inst)
}

pub fn print_ccut(inst: &ClauseCutInstance) -> String {
    let mut out = format!(
        "v {}\ns {}\nt {}\n",
        inst.graph.n,
        inst.graph.s + 1,
        inst.graph.t + 1
    );
    for (id, a) in inst.graph.arcs.iter().enumerate() {
        match inst.arc_bundle(id) {
            Some(b) => out.push_str(&format!(
                "arc {} {} bundle {}\n",
                a.tail + 1,
                a.head + 1,
                b + 1
            )),
            None => out.push_str(&format!("arc {} {}\n", a.tail + 1, a.head + 1)),
        }
    }
    for (ci, c) in inst.clauses.iter().enumerate() {
        let members: Vec<String> = c.members.iter().map(|v| (v + 1).to_string()).collect();
        match inst.clause_bundle(ci) {
            Some(b) => out.push_str(&format!("clause bundle {} {}\n", b + 1, members.join(" "))),
            None => out.push_str(&format!("clause {}\n", members.join(" "))),
        }
    }
    out.push_str(&format!("k {}\n", inst.k));
    out
}

pub fn parse_pcut(text: &str) -> Result<PairedCutInstance> {
    let sec = parse_cut_sections(text)?;
    let graph = build_graph(&sec, false)?;
    let ell = if sec.k > 0 { sec.k as usize } else { sec.paths.len() / 2 };
    if 2 * ell != sec.paths.len() {
        bail!(
            "a paired-cut instance partitions its arcs into 2k paths; k = {ell} but {} paths given",
            sec.paths.len()
        );
    }
    let inst = PairedCutInstance {
        dag: graph,
        ell,
        pairing: sec.pairs,
        paths: sec.paths,
    };
    inst.validate().map_err(|e| anyhow!("invalid instance: {e}"))?;
    Ok(inst)
}

pub fn print_pcut(inst: &PairedCutInstance) -> String {
    let mut out = format!(
        "v {}\ns {}\nt {}\n",
        inst.dag.n,
        inst.dag.s + 1,
        inst.dag.t + 1
    );
    for a in &inst.dag.arcs {
        out.push_str(&format!("arc {} {}\n", a.tail + 1, a.head + 1));
    }
    for &(a, b) in &inst.pairing {
        out.push_str(&format!("pair {} {}\n", a + 1, b + 1));
    }
    for p in &inst.paths {
        let ids: Vec<String> = p.iter().map(|a| (a + 1).to_string()).collect();
        out.push_str(&format!("path {}\n", ids.join(" ")));
    }
    out.push_str(&format!("k {}\n", inst.ell));
    out
}

/// Certificates: `assignment <bits>`, `cut <arc ids>`, or `pairs <pair ids>`.
#[derive(Debug, Clone)]
pub enum Certificate {
    Assignment(Vec<bool>),
    Cut(Vec<usize>),
    Pairs(Vec<usize>),
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    for (ln, line) in numbered_lines(text) {
        let mut it = line.split_whitespace();
        return match it.next().unwrap() {
            "assignment" => {
                let bits = it.next().ok_or_else(|| anyhow!("line {ln}: missing bits"))?;
                if !bits.bytes().all(|b| b == b'0' || b == b'1') {
                    bail!("line {ln}: assignment must be a bit string");
                }
                Ok(Certificate::Assignment(bits.bytes().map(|b| b == b'1').collect()))
            }
            "cut" => Ok(Certificate::Cut(
                it.map(|x| -> Result<usize> {
                    let v: usize = x.parse()?;
                    if v == 0 {
                        bail!("line {ln}: arc ids are 1-indexed");
                    }
                    Ok(v - 1)
                })
                .collect::<Result<_>>()?,
            )),
            "pairs" => Ok(Certificate::Pairs(
                it.map(|x| -> Result<usize> {
                    let v: usize = x.parse()?;
                    if v == 0 {
                        bail!("line {ln}: pair ids are 1-indexed");
                    }
                    Ok(v - 1)
                })
                .collect::<Result<_>>()?,
            )),
            other => bail!("line {ln}: unknown certificate kind '{other}'"),
        };
    }
    bail!("empty certificate");
}
