use crate::error::CoreError;
use crate::language::Language;
use crate::relation::BooleanRelation;

/// Constraint weight. Crisp constraints must never be violated and are
/// excluded from cost and weight accounting. Zero-weight soft constraints are
/// allowed: they count toward the violation budget but not the weight budget
/// (the weighted hardness gadgets need them).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Soft(u64),
    Crisp,
}

impl Weight {
    pub fn is_crisp(&self) -> bool {
        matches!(self, Weight::Crisp)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Index into the owning formula's language.
    pub relation: usize,
    /// Variable indices, length equal to the relation arity; repeats allowed.
    pub scope: Vec<usize>,
    pub weight: Weight,
}

/// A multiset of constraints over integer-indexed variables together with the
/// violation budget `k` and, for the weighted problem, the weight budget `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub language: Language,
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub budget_k: u64,
    pub budget_w: Option<u64>,
}

/// An assignment as a bit sequence of length `num_vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn from_index(num_vars: usize, idx: usize) -> Assignment {
        Assignment {
            values: (0..num_vars).map(|v| idx >> v & 1 == 1).collect(),
        }
    }

    pub fn bitstring(&self) -> String {
        self.values
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostReport {
    /// Number of violated soft constraints.
    pub violations: u64,
    /// Total weight of violated soft constraints.
    pub weight: u64,
    /// False iff some crisp constraint is violated.
    pub crisp_ok: bool,
}

impl Formula {
    pub fn new(language: Language, num_vars: usize, budget_k: u64, budget_w: Option<u64>) -> Self {
        Formula {
            language,
            num_vars,
            constraints: Vec::new(),
            budget_k,
            budget_w,
        }
    }

    pub fn is_weighted(&self) -> bool {
        self.budget_w.is_some()
    }

    pub fn push(&mut self, relation: usize, scope: Vec<usize>, weight: Weight) {
        debug_assert_eq!(self.language.relation(relation).arity(), scope.len());
        debug_assert!(scope.iter().all(|&v| v < self.num_vars));
        self.constraints.push(Constraint {
            relation,
            scope,
            weight,
        });
    }

    pub fn constraint_satisfied(&self, c: &Constraint, a: &Assignment) -> bool {
        let rel = self.language.relation(c.relation);
        let tuple: Vec<bool> = c.scope.iter().map(|&v| a.values[v]).collect();
        rel.contains(&tuple)
    }

    /// Violation count, violated weight and crispness status of `a`.
    pub fn assignment_cost(&self, a: &Assignment) -> CostReport {
        debug_assert_eq!(a.values.len(), self.num_vars);
        let mut report = CostReport {
            violations: 0,
            weight: 0,
            crisp_ok: true,
        };
        for c in &self.constraints {
            if self.constraint_satisfied(c, a) {
                continue;
            }
            match c.weight {
                Weight::Crisp => report.crisp_ok = false,
                Weight::Soft(w) => {
                    report.violations += 1;
                    report.weight += w;
                }
            }
        }
        report
    }

    /// True iff the assignment respects every crisp constraint and fits both
    /// budgets.
    pub fn within_budgets(&self, report: &CostReport) -> bool {
        report.crisp_ok
            && report.violations <= self.budget_k
            && self.budget_w.map_or(true, |w| report.weight <= w)
    }

    /// The effective relation of a constraint with its scope repeats
    /// collapsed, together with the distinct variables in slot order.
    pub fn effective_relation(&self, c: &Constraint) -> (BooleanRelation, Vec<usize>) {
        let rel = self.language.relation(c.relation);
        let mut distinct: Vec<usize> = Vec::new();
        let mut slots = Vec::with_capacity(c.scope.len());
        for &v in &c.scope {
            let slot = distinct.iter().position(|&d| d == v).unwrap_or_else(|| {
                distinct.push(v);
                distinct.len() - 1
            });
            slots.push(slot);
        }
        (rel.collapse_scope(&slots, distinct.len()), distinct)
    }

    /// Removes constraints with no satisfying assignment (empty effective
    /// relation, scope repeats collapsed): soft ones are deleted and the
    /// budgets reduced; a crisp one makes the formula infeasible.
    pub fn drop_empty_constraints(&self) -> Result<Option<Formula>, CoreError> {
        let mut out = self.clone();
        out.constraints.clear();
        for c in &self.constraints {
            if self.effective_relation(c).0.is_empty() {
                match c.weight {
                    Weight::Crisp => return Ok(None),
                    Weight::Soft(w) => {
                        if out.budget_k == 0 {
                            return Ok(None);
                        }
                        out.budget_k -= 1;
                        if let Some(bw) = out.budget_w {
                            if bw < w {
                                return Ok(None);
                            }
                            out.budget_w = Some(bw - w);
                        }
                    }
                }
            } else {
                out.constraints.push(c.clone());
            }
        }
        Ok(Some(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::known;

    fn eq_lang() -> Language {
        Language::from_pairs(vec![("EQ2", known::eq2())])
    }

    #[test]
    fn cost_examples() {
        let mut f = Formula::new(eq_lang(), 2, 1, None);
        f.push(0, vec![0, 1], Weight::Soft(3));
        let a = Assignment {
            values: vec![false, true],
        };
        assert_eq!(
            f.assignment_cost(&a),
            CostReport {
                violations: 1,
                weight: 3,
                crisp_ok: true
            }
        );

        let mut g = Formula::new(eq_lang(), 2, 1, None);
        g.push(0, vec![0, 1], Weight::Crisp);
        assert!(!g.assignment_cost(&a).crisp_ok);

        let empty = Formula::new(eq_lang(), 2, 0, None);
        let r = empty.assignment_cost(&a);
        assert_eq!((r.violations, r.weight, r.crisp_ok), (0, 0, true));
    }

    #[test]
    fn effective_relation_collapses_repeats() {
        let mut f = Formula::new(
            Language::from_pairs(vec![("R4", known::r4())]),
            2,
            0,
            None,
        );
        f.push(0, vec![0, 1, 1, 0], Weight::Soft(1));
        let (rel, vars) = f.effective_relation(&f.constraints[0]);
        assert_eq!(vars, vec![0, 1]);
        // (a=b) & (b=a) collapses to equality on two variables
        assert_eq!(rel, known::eq2());
    }
}
