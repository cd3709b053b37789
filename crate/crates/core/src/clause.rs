use crate::error::CoreError;
use crate::relation::BooleanRelation;

/// Clause shapes used by the definability tests and the canonical encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClauseKind {
    Assign0,
    Assign1,
    Implication,
    NegativeClause,
    PositiveClause,
    TwoClause,
}

/// A clause over relation coordinates. Literals are (coordinate, polarity)
/// pairs where polarity `true` means the positive literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub kind: ClauseKind,
    pub literals: Vec<(usize, bool)>,
}

impl Clause {
    pub fn assign0(v: usize) -> Clause {
        Clause {
            kind: ClauseKind::Assign0,
            literals: vec![(v, false)],
        }
    }

    pub fn assign1(v: usize) -> Clause {
        Clause {
            kind: ClauseKind::Assign1,
            literals: vec![(v, true)],
        }
    }

    pub fn implication(from: usize, to: usize) -> Clause {
        Clause {
            kind: ClauseKind::Implication,
            literals: vec![(from, false), (to, true)],
        }
    }

    pub fn negative(vars: Vec<usize>) -> Clause {
        Clause {
            kind: ClauseKind::NegativeClause,
            literals: vars.into_iter().map(|v| (v, false)).collect(),
        }
    }

    pub fn positive(vars: Vec<usize>) -> Clause {
        Clause {
            kind: ClauseKind::PositiveClause,
            literals: vars.into_iter().map(|v| (v, true)).collect(),
        }
    }

    pub fn two_clause(l1: (usize, bool), l2: (usize, bool)) -> Clause {
        Clause {
            kind: ClauseKind::TwoClause,
            literals: vec![l1, l2],
        }
    }

    /// Evaluates the clause as a disjunction, except that `Assign0` variants
    /// assert the variable is 0 (their single literal is negative) and
    /// `Assign1` that it is 1, and `Implication` is the usual disjunction of
    /// its negated-antecedent form.
    pub fn satisfied_by(&self, value_of: impl Fn(usize) -> bool) -> bool {
        self.literals.iter().any(|&(v, pol)| value_of(v) == pol)
    }

    fn satisfied_by_tuple(&self, rel: &BooleanRelation, idx: usize) -> bool {
        self.satisfied_by(|v| rel.bit_of(idx, v))
    }

    /// Holds for every member tuple of `rel`.
    pub fn implied_by(&self, rel: &BooleanRelation) -> bool {
        rel.indices().all(|idx| self.satisfied_by_tuple(rel, idx))
    }
}

/// Enumerates every candidate clause of the given kinds on `arity`
/// coordinates (distinct variables, multi-literal kinds bounded by the
/// arity), without tautologies.
fn candidate_clauses(arity: usize, kinds: &[ClauseKind]) -> Vec<Clause> {
    let mut out = Vec::new();
    for kind in kinds {
        match kind {
            ClauseKind::Assign0 => out.extend((0..arity).map(Clause::assign0)),
            ClauseKind::Assign1 => out.extend((0..arity).map(Clause::assign1)),
            ClauseKind::Implication => {
                for i in 0..arity {
                    for j in 0..arity {
                        if i != j {
                            out.push(Clause::implication(i, j));
                        }
                    }
                }
            }
            ClauseKind::TwoClause => {
                for i in 0..arity {
                    for j in (i + 1)..arity {
                        for pi in [false, true] {
                            for pj in [false, true] {
                                out.push(Clause::two_clause((i, pi), (j, pj)));
                            }
                        }
                    }
                }
            }
            ClauseKind::NegativeClause | ClauseKind::PositiveClause => {
                for mask in 1usize..(1usize << arity) {
                    let vars: Vec<usize> = (0..arity).filter(|&v| mask >> v & 1 == 1).collect();
                    out.push(if *kind == ClauseKind::NegativeClause {
                        Clause::negative(vars)
                    } else {
                        Clause::positive(vars)
                    });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All clauses of the permitted kinds, over the relation's coordinates, that
/// hold for every member tuple. Subsumed clauses are retained.
pub fn implied_clauses(rel: &BooleanRelation, kinds: &[ClauseKind]) -> Vec<Clause> {
    candidate_clauses(rel.arity(), kinds)
        .into_iter()
        .filter(|c| c.implied_by(rel))
        .collect()
}

/// Satisfying set of a clause conjunction over `arity` coordinates.
pub fn satisfying_set(arity: usize, clauses: &[Clause]) -> BooleanRelation {
    BooleanRelation::from_fn(arity, |t| {
        clauses.iter().all(|c| c.satisfied_by(|v| t[v]))
    })
    .unwrap()
}

/// Decides quantifier-free definability over the given clause kinds by the
/// direct closure test: the conjunction of all implied clauses must cut the
/// satisfying set down to exactly the relation.
pub fn qfpp_definable(rel: &BooleanRelation, kinds: &[ClauseKind]) -> bool {
    let implied = implied_clauses(rel, kinds);
    satisfying_set(rel.arity(), &implied) == *rel
}

/// Clause kinds admitted in the two solver-facing language classes and the
/// classifier cases.
pub mod families {
    use super::ClauseKind;

    /// Assignments plus arbitrary 2-clauses (bijunctive).
    pub const BIJUNCTIVE: &[ClauseKind] = &[
        ClauseKind::Assign0,
        ClauseKind::Assign1,
        ClauseKind::TwoClause,
        ClauseKind::Implication,
    ];

    /// Negative clauses and assignments, no implications.
    pub const NEGATIVE_ASSIGN: &[ClauseKind] = &[
        ClauseKind::Assign0,
        ClauseKind::Assign1,
        ClauseKind::NegativeClause,
    ];

    /// Positive clauses and assignments, no implications.
    pub const POSITIVE_ASSIGN: &[ClauseKind] = &[
        ClauseKind::Assign0,
        ClauseKind::Assign1,
        ClauseKind::PositiveClause,
    ];

    /// Negative clauses, implications and assignments.
    pub const SIGMA: &[ClauseKind] = &[
        ClauseKind::Assign0,
        ClauseKind::Assign1,
        ClauseKind::Implication,
        ClauseKind::NegativeClause,
    ];
}

/// Canonical definition of a non-empty relation definable over negative
/// clauses, implications and assignments: the forced-one and forced-zero
/// coordinates, implications along the arrow graph within the free
/// coordinates, and all implied negative clauses on the free coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalDefinition {
    pub ones: Vec<usize>,
    pub zeroes: Vec<usize>,
    pub rest: Vec<usize>,
    /// Arrow-graph implications (from, to), both endpoints in `rest`.
    pub implications: Vec<(usize, usize)>,
    /// Implied negative clauses with all variables in `rest`.
    pub negative_clauses: Vec<Vec<usize>>,
}

impl CanonicalDefinition {
    pub fn to_clauses(&self) -> Vec<Clause> {
        let mut out = Vec::new();
        out.extend(self.ones.iter().map(|&v| Clause::assign1(v)));
        out.extend(self.zeroes.iter().map(|&v| Clause::assign0(v)));
        out.extend(
            self.implications
                .iter()
                .map(|&(a, b)| Clause::implication(a, b)),
        );
        out.extend(
            self.negative_clauses
                .iter()
                .map(|vs| Clause::negative(vs.clone())),
        );
        out
    }
}

pub fn canonical_definition(rel: &BooleanRelation) -> Result<CanonicalDefinition, CoreError> {
    if rel.is_empty() {
        return Err(CoreError::EmptyRelation);
    }
    if !qfpp_definable(rel, families::SIGMA) {
        return Err(CoreError::NotDefinable);
    }
    let arity = rel.arity();
    let mut ones = Vec::new();
    let mut zeroes = Vec::new();
    let mut rest = Vec::new();
    for v in 0..arity {
        let always_one = rel.indices().all(|idx| rel.bit_of(idx, v));
        let always_zero = rel.indices().all(|idx| !rel.bit_of(idx, v));
        if always_one {
            ones.push(v);
        } else if always_zero {
            zeroes.push(v);
        } else {
            rest.push(v);
        }
    }
    let arrow = rel.arrow_graph()?;
    let implications = arrow
        .arcs()
        .into_iter()
        .filter(|&(a, b)| rest.contains(&a) && rest.contains(&b))
        .collect();
    let negative_clauses = implied_clauses(rel, &[ClauseKind::NegativeClause])
        .into_iter()
        .filter(|c| c.literals.iter().all(|&(v, _)| rest.contains(&v)))
        .map(|c| c.literals.into_iter().map(|(v, _)| v).collect())
        .collect();
    Ok(CanonicalDefinition {
        ones,
        zeroes,
        rest,
        implications,
        negative_clauses,
    })
}
