mod formats;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use minsat_core::classifier::{classify_language, CaseTag, Tractability, Verdict};
use minsat_core::clausecut::solve_minsat_sigma;
use minsat_core::config::SolveConfig;
use minsat_core::error::Outcome;
use minsat_core::formula::{Assignment, Formula};
use minsat_core::gdpc::solve_wminsat_delta;
use minsat_core::hardness::{
    gen_arrow_hard, gen_gaifman_hard, gen_paired_cut, gen_weighted_hard, KPartiteGraph,
};
use minsat_core::language::Language;
use minsat_core::oracle::{oracle_minsat, oracle_wminsat};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

/// Boolean MinSAT workbench: language classification, cut-based solvers,
/// exhaustive oracles, hardness-instance generators and certificate checks.
#[derive(Parser)]
#[command(name = "minsat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Branch-count cap for the solvers.
    #[arg(long, global = true)]
    max_branches: Option<u64>,
    /// Variable cap for the exhaustive oracles.
    #[arg(long, global = true)]
    max_vars: Option<usize>,
    /// Worker threads for top-level branch exploration.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Emit one trace line per branch event to stderr.
    #[arg(long, global = true)]
    trace: bool,
    /// Seed for the randomized exploration mode (deterministic when absent).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a language file into the tractability cases.
    Classify { lang: PathBuf },
    /// Solve a formula with the pipeline matching its classification.
    Solve {
        msat: PathBuf,
        /// Fall back to the exhaustive oracle on W[1]-hard inputs.
        #[arg(long)]
        force_oracle: bool,
    },
    /// Solve a formula with the exhaustive oracle.
    Oracle { msat: PathBuf },
    /// Reduce a formula to a cut instance and print it.
    Reduce {
        #[command(subcommand)]
        target: ReduceTarget,
    },
    /// Generate hardness-side instances.
    Generate {
        #[command(subcommand)]
        what: GenerateWhat,
    },
    /// Re-check a certificate against an instance file.
    Verify { instance: PathBuf, certificate: PathBuf },
}

#[derive(Subcommand)]
enum ReduceTarget {
    /// Generalized digraph pair cut image of a bijunctive formula.
    Gdpc {
        msat: PathBuf,
        /// Branch assignment over the deletion-set variables (bit string in
        /// ascending variable order; defaults to all zeroes).
        #[arg(long)]
        beta: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Clause-cut image of a formula over negative clauses, implications
    /// and assignments.
    Clausecut {
        msat: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HardRelation {
    /// (a=b) and (c=d)
    R4,
    /// (a->b) and (c->d) and (not a or not c)
    Rprime,
}

#[derive(Subcommand)]
enum GenerateWhat {
    /// Random k-partite graph turned into a paired minimum s,t-cut instance.
    PairedCut {
        /// Comma-separated part sizes, e.g. 2,2,2.
        #[arg(long, default_value = "2,2,2")]
        parts: String,
        #[arg(long, default_value_t = 0.5)]
        edge_prob: f64,
        /// Force a multicolored clique into the graph.
        #[arg(long)]
        plant_clique: bool,
        #[arg(long, default_value_t = 1)]
        gen_seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Formula over a relation with a Gaifman obstruction, plus crisp
    /// disequalities; solvable at cost ell iff the paired cut exists.
    GaifmanHard {
        pcut: PathBuf,
        #[arg(long, value_enum, default_value_t = HardRelation::R4)]
        relation: HardRelation,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Formula over a relation with an arrow obstruction, plus crisp ternary
    /// negative clauses; budget 2*ell.
    ArrowHard {
        pcut: PathBuf,
        #[arg(long, value_enum, default_value_t = HardRelation::R4)]
        relation: HardRelation,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Weighted formula built from equality chains with complementary weight
    /// gradients; budgets k = 4*ell, W = 2*ell*|V|.
    WeightedHard {
        pcut: PathBuf,
        /// Encode equalities as implication pairs instead.
        #[arg(long)]
        implications: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn solve_config(cli: &Cli) -> SolveConfig {
    let mut cfg = SolveConfig::default();
    if let Some(mb) = cli.max_branches {
        cfg.max_branches = mb;
    }
    cfg.jobs = cli.jobs.max(1);
    if cli.trace {
        cfg.trace = Some(Arc::new(|line: &str| eprintln!("trace: {line}")));
    }
    if let Some(seed) = cli.seed {
        cfg.randomized = Some(minsat_core::config::RandomizedMode { seed, trials: 512 });
    }
    cfg
}

fn tract(t: Tractability) -> &'static str {
    match t {
        Tractability::Fpt => "FPT",
        Tractability::W1Hard => "W1HARD",
    }
}

fn write_out(path: &Option<PathBuf>, body: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{body}"),
    }
    Ok(())
}

struct SolveAnswer {
    assignment: Assignment,
    violations: u64,
    weight: u64,
}

enum RunResult {
    Yes(SolveAnswer),
    No,
    Error(String),
}

fn print_result(f: &Formula, r: RunResult) -> ExitCode {
    match r {
        RunResult::Yes(ans) => {
            // never print YES without an independently verified certificate
            let rep = f.assignment_cost(&ans.assignment);
            if !f.within_budgets(&rep)
                || rep.violations != ans.violations
                || rep.weight != ans.weight
            {
                eprintln!("error: certificate failed re-verification");
                return ExitCode::from(2);
            }
            println!(
                "YES cost={} weight={} assignment={}",
                ans.violations,
                ans.weight,
                ans.assignment.bitstring()
            );
            ExitCode::SUCCESS
        }
        RunResult::No => {
            println!("NO");
            ExitCode::from(1)
        }
        RunResult::Error(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dual_formula(f: &Formula) -> Formula {
    let mut out = f.clone();
    out.language = f.language.dual();
    out
}

fn run_oracle(f: &Formula, max_vars: Option<usize>) -> RunResult {
    if let Some(cap) = max_vars {
        if f.num_vars > cap {
            return RunResult::Error(format!("formula exceeds --max-vars {cap}"));
        }
    }
    let res = match f.budget_w {
        Some(w) => oracle_wminsat(f, f.budget_k, w),
        None => oracle_minsat(f, f.budget_k),
    };
    match res {
        Ok(Outcome::Yes(best)) => RunResult::Yes(SolveAnswer {
            assignment: best.assignment,
            violations: best.violations,
            weight: best.weight,
        }),
        Ok(Outcome::No) => RunResult::No,
        Ok(Outcome::Resource(r)) => RunResult::Error(r),
        Err(e) => RunResult::Error(e.to_string()),
    }
}

/// Trivial languages: a uniform assignment violates exactly the
/// never-satisfiable constraints, which is optimal.
fn run_trivial(f: &Formula) -> RunResult {
    let all0 = Assignment {
        values: vec![false; f.num_vars],
    };
    let all1 = Assignment {
        values: vec![true; f.num_vars],
    };
    for a in [all0, all1] {
        let rep = f.assignment_cost(&a);
        if f.within_budgets(&rep) {
            return RunResult::Yes(SolveAnswer {
                assignment: a,
                violations: rep.violations,
                weight: rep.weight,
            });
        }
    }
    RunResult::No
}

fn run_delta(f: &Formula, cfg: &SolveConfig) -> RunResult {
    match solve_wminsat_delta(f, cfg) {
        Ok(Outcome::Yes(ans)) => RunResult::Yes(SolveAnswer {
            assignment: ans.assignment,
            violations: ans.violations,
            weight: ans.weight,
        }),
        Ok(Outcome::No) => RunResult::No,
        Ok(Outcome::Resource(r)) => RunResult::Error(r),
        Err(e) => RunResult::Error(e.to_string()),
    }
}

fn run_sigma(f: &Formula, cfg: &SolveConfig, dualized: bool) -> RunResult {
    let g = if dualized { dual_formula(f) } else { f.clone() };
    match solve_minsat_sigma(&g, cfg) {
        Ok(Outcome::Yes(ans)) => {
            let assignment = if dualized {
                Assignment {
                    values: ans.assignment.values.iter().map(|b| !b).collect(),
                }
            } else {
                ans.assignment
            };
            let rep = f.assignment_cost(&assignment);
            RunResult::Yes(SolveAnswer {
                assignment,
                violations: rep.violations,
                weight: rep.weight,
            })
        }
        Ok(Outcome::No) => RunResult::No,
        Ok(Outcome::Resource(r)) => RunResult::Error(r),
        Err(e) => RunResult::Error(e.to_string()),
    }
}

fn run_solve(
    f: &Formula,
    verdict: Verdict,
    cfg: &SolveConfig,
    force_oracle: bool,
    max_vars: Option<usize>,
) -> RunResult {
    let weighted = f.budget_w.is_some();
    match verdict.case_tag {
        CaseTag::T1a => run_trivial(f),
        CaseTag::T1b => run_delta(f, cfg),
        CaseTag::T1c | CaseTag::T1d if !weighted => {
            run_sigma(f, cfg, verdict.case_tag == CaseTag::T1d)
        }
        // the weighted problem over these languages is tractable in theory;
        // this build answers it with the exhaustive oracle
        CaseTag::T1c | CaseTag::T1d => run_oracle(f, max_vars),
        CaseTag::T2a | CaseTag::T2b if !weighted => {
            run_sigma(f, cfg, verdict.case_tag == CaseTag::T2b)
        }
        CaseTag::T2a | CaseTag::T2b => {
            if force_oracle {
                run_oracle(f, max_vars)
            } else {
                RunResult::Error(format!(
                    "the weighted problem over this language is W[1]-hard (case {}); \
                     pass --force-oracle for an exhaustive run",
                    verdict.case_tag.as_str()
                ))
            }
        }
        CaseTag::Hard => {
            if force_oracle {
                run_oracle(f, max_vars)
            } else {
                RunResult::Error(
                    "this language is W[1]-hard; pass --force-oracle for an exhaustive run"
                        .to_string(),
                )
            }
        }
    }
}

fn parse_parts(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| p.parse::<usize>().map_err(|e| anyhow!("bad part size: {e}")))
        .collect()
}

fn random_kpartite(sizes: Vec<usize>, edge_prob: f64, plant: bool, seed: u64) -> KPartiteGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let k = sizes.len();
    let mut edges = Vec::new();
    for p in 0..k {
        for q in (p + 1)..k {
            for i in 0..sizes[p] {
                for j in 0..sizes[q] {
                    if rng.gen_bool(edge_prob) {
                        edges.push(((p, i), (q, j)));
                    }
                }
            }
        }
    }
    let mut g = KPartiteGraph { sizes, edges };
    if plant {
        let choice: Vec<(usize, usize)> = (0..k)
            .map(|p| (p, rng.gen_range(0..g.sizes[p])))
            .collect();
        for a in 0..k {
            for b in (a + 1)..k {
                if !g.has_edge(choice[a], choice[b]) {
                    g.edges.push((choice[a], choice[b]));
                }
            }
        }
    }
    g
}

fn emit_formula(f: &Formula, output: &Option<PathBuf>) -> Result<()> {
    match output {
        Some(path) => {
            let lang_path = path.with_extension("lang");
            std::fs::write(&lang_path, formats::print_language(&f.language))?;
            let rel = lang_path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            std::fs::write(path, formats::print_formula(f, &rel))?;
            Ok(())
        }
        None => bail!("hard-instance generators require --output (two files are written)"),
    }
}

fn run_verify(instance: &Path, certificate: &Path) -> Result<ExitCode> {
    let itext = std::fs::read_to_string(instance)
        .with_context(|| format!("reading {}", instance.display()))?;
    let ctext = std::fs::read_to_string(certificate)
        .with_context(|| format!("reading {}", certificate.display()))?;
    let cert = formats::parse_certificate(&ctext)?;
    let ext = instance
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or_default();
    let verdict: std::result::Result<String, String> = match (ext, cert) {
        ("msat", formats::Certificate::Assignment(values)) => {
            let (f, _) =
                formats::parse_formula(&itext, instance.parent().unwrap_or(Path::new(".")))?;
            if values.len() != f.num_vars {
                Err("assignment length mismatch".to_string())
            } else {
                let a = Assignment { values };
                let rep = f.assignment_cost(&a);
                if f.within_budgets(&rep) {
                    Ok(format!("cost={} weight={}", rep.violations, rep.weight))
                } else {
                    Err("assignment violates the budgets or a crisp constraint".to_string())
                }
            }
        }
        ("gdpc", formats::Certificate::Cut(cut)) => {
            let inst = formats::parse_gdpc(&itext)?;
            inst.verify_solution(&cut)
                .map(|(violated, weight)| format!("violated={} weight={weight}", violated.len()))
        }
        ("ccut", formats::Certificate::Cut(cut)) => {
            let inst = formats::parse_ccut(&itext)?;
            inst.verify_solution(&cut)
                .map(|violated| format!("violated={}", violated.len()))
        }
        ("pcut", formats::Certificate::Pairs(pairs)) => {
            let inst = formats::parse_pcut(&itext)?;
            if pairs.len() > inst.ell {
                Err(format!(
                    "{} pairs exceed the budget {}",
                    pairs.len(),
                    inst.ell
                ))
            } else if pairs.iter().any(|&p| p >= inst.pairing.len()) {
                Err("pair id out of range".to_string())
            } else {
                let cut: Vec<usize> = pairs
                    .iter()
                    .flat_map(|&p| [inst.pairing[p].0, inst.pairing[p].1])
                    .collect();
                if inst.dag.is_st_cut(&cut) {
                    Ok(format!("pairs={}", pairs.len()))
                } else {
                    Err("selected pairs do not cut".to_string())
                }
            }
        }
        (ext, cert) => bail!("certificate kind does not match instance type .{ext}: {cert:?}"),
    };
    match verdict {
        Ok(info) => {
            println!("VALID {info}");
            Ok(ExitCode::SUCCESS)
        }
        Err(reason) => {
            println!("INVALID {reason}");
            Ok(ExitCode::from(1))
        }
    }
}

fn hard_relation(r: HardRelation) -> minsat_core::relation::BooleanRelation {
    match r {
        HardRelation::R4 => minsat_core::relation::known::r4(),
        HardRelation::Rprime => minsat_core::relation::known::rcmc_directed(),
    }
}

fn real_main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let cfg = solve_config(&cli);
    match &cli.command {
        Command::Classify { lang } => {
            let text = std::fs::read_to_string(lang)
                .with_context(|| format!("reading {}", lang.display()))?;
            let language: Language = formats::parse_language(&text)?;
            let v = classify_language(&language);
            println!(
                "case={} weighted={} unweighted={}",
                v.case_tag.as_str(),
                tract(v.weighted),
                tract(v.unweighted)
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { msat, force_oracle } => {
            let text = std::fs::read_to_string(msat)
                .with_context(|| format!("reading {}", msat.display()))?;
            let (f, lang) =
                formats::parse_formula(&text, msat.parent().unwrap_or(Path::new(".")))?;
            let verdict = classify_language(&lang);
            Ok(print_result(
                &f,
                run_solve(&f, verdict, &cfg, *force_oracle, cli.max_vars),
            ))
        }
        Command::Oracle { msat } => {
            let text = std::fs::read_to_string(msat)
                .with_context(|| format!("reading {}", msat.display()))?;
            let (f, _) = formats::parse_formula(&text, msat.parent().unwrap_or(Path::new(".")))?;
            Ok(print_result(&f, run_oracle(&f, cli.max_vars)))
        }
        Command::Reduce { target } => match target {
            ReduceTarget::Gdpc { msat, beta, output } => {
                let text = std::fs::read_to_string(msat)?;
                let (f, _) =
                    formats::parse_formula(&text, msat.parent().unwrap_or(Path::new(".")))?;
                let mut f = f
                    .drop_empty_constraints()
                    .map_err(|e| anyhow!("{e}"))?
                    .ok_or_else(|| anyhow!("the formula is a trivial no-instance"))?;
                if f.budget_w.is_none() {
                    // unweighted inputs reduce with unit weights and W = k
                    for c in &mut f.constraints {
                        if let minsat_core::formula::Weight::Soft(w) = &mut c.weight {
                            *w = 1;
                        }
                    }
                    f.budget_w = Some(f.budget_k);
                }
                let y = match minsat_core::gdpc::find_deletion_set(&f)
                    .map_err(|e| anyhow!("{e}"))?
                {
                    Outcome::Yes(y) => y,
                    Outcome::No => bail!("no deletion set within budget: a no-instance"),
                    Outcome::Resource(r) => bail!("{r}"),
                };
                let mut xvars: Vec<usize> = y
                    .iter()
                    .flat_map(|&ci| f.constraints[ci].scope.iter().copied())
                    .collect();
                xvars.sort_unstable();
                xvars.dedup();
                let bits: Vec<bool> = match beta {
                    None => vec![false; xvars.len()],
                    Some(b) => {
                        if b.len() != xvars.len() {
                            bail!(
                                "--beta needs {} bits for variables {:?}",
                                xvars.len(),
                                xvars.iter().map(|v| v + 1).collect::<Vec<_>>()
                            );
                        }
                        b.bytes().map(|c| c == b'1').collect()
                    }
                };
                let beta_pairs: Vec<(usize, bool)> = xvars.iter().copied().zip(bits).collect();
                let inst = minsat_core::gdpc::reduce_minsat_to_gdpc(&f, &y, &beta_pairs)
                    .map_err(|e| anyhow!("{e}"))?
                    .ok_or_else(|| anyhow!("this branch assignment is infeasible"))?
                    .0;
                write_out(output, &formats::print_gdpc(&inst))?;
                Ok(ExitCode::SUCCESS)
            }
            ReduceTarget::Clausecut { msat, output } => {
                let text = std::fs::read_to_string(msat)?;
                let (f, _) =
                    formats::parse_formula(&text, msat.parent().unwrap_or(Path::new(".")))?;
                let inst = minsat_core::clausecut::reduce_minsat_to_clausecut(&f)
                    .map_err(|e| anyhow!("{e}"))?
                    .ok_or_else(|| anyhow!("the formula is a trivial no-instance"))?
                    .0;
                write_out(output, &formats::print_ccut(&inst))?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Generate { what } => match what {
            GenerateWhat::PairedCut {
                parts,
                edge_prob,
                plant_clique,
                gen_seed,
                output,
            } => {
                let sizes = parse_parts(parts)?;
                let g = random_kpartite(sizes, *edge_prob, *plant_clique, *gen_seed);
                let inst = gen_paired_cut(&g).map_err(|e| anyhow!("{e}"))?;
                write_out(output, &formats::print_pcut(&inst))?;
                Ok(ExitCode::SUCCESS)
            }
            GenerateWhat::GaifmanHard {
                pcut,
                relation,
                output,
            } => {
                let inst = formats::parse_pcut(&std::fs::read_to_string(pcut)?)?;
                let f = gen_gaifman_hard(&inst, &hard_relation(*relation))
                    .map_err(|e| anyhow!("{e}"))?;
                emit_formula(&f, output)?;
                Ok(ExitCode::SUCCESS)
            }
            GenerateWhat::ArrowHard {
                pcut,
                relation,
                output,
            } => {
                let inst = formats::parse_pcut(&std::fs::read_to_string(pcut)?)?;
                let f = gen_arrow_hard(&inst, &hard_relation(*relation))
                    .map_err(|e| anyhow!("{e}"))?;
                emit_formula(&f, output)?;
                Ok(ExitCode::SUCCESS)
            }
            GenerateWhat::WeightedHard {
                pcut,
                implications,
                output,
            } => {
                let inst = formats::parse_pcut(&std::fs::read_to_string(pcut)?)?;
                let f = gen_weighted_hard(&inst, *implications).map_err(|e| anyhow!("{e}"))?;
                emit_formula(&f, output)?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Verify {
            instance,
            certificate,
        } => run_verify(instance, certificate),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
