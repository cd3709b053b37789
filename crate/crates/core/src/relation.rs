use crate::error::CoreError;
use crate::graph::{DirectedGraph, UndirectedGraph};

/// Hard cap on relation arity; membership tables stay at most 2^16 bits.
pub const MAX_ARITY: usize = 16;

/// A Boolean relation of arity `r`, stored as a membership table over all
/// 2^r argument tuples. Tuple `(t_1, ..., t_r)` is mapped to the bit index
/// `sum t_i * 2^(r-i)`, so the first argument is the most significant bit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanRelation {
    arity: usize,
    membership: Vec<u64>,
}

fn words_for(arity: usize) -> usize {
    ((1usize << arity) + 63) / 64
}

impl BooleanRelation {
    pub fn empty(arity: usize) -> Result<Self, CoreError> {
        if arity > MAX_ARITY {
            return Err(CoreError::ArityTooLarge(arity, MAX_ARITY));
        }
        Ok(BooleanRelation {
            arity,
            membership: vec![0; words_for(arity)],
        })
    }

    pub fn full(arity: usize) -> Result<Self, CoreError> {
        let mut r = Self::empty(arity)?;
        for idx in 0..(1usize << arity) {
            r.insert_index(idx);
        }
        Ok(r)
    }

    /// Builds a relation from explicit tuples given as bit strings, first
    /// argument leftmost. Duplicates collapse.
    pub fn from_tuples(arity: usize, tuples: &[&str]) -> Result<Self, CoreError> {
        let mut rel = Self::empty(arity)?;
        for t in tuples {
            if t.len() != arity || !t.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(CoreError::MalformedTuple(t.to_string(), arity));
            }
            let mut idx = 0usize;
            for b in t.bytes() {
                idx = (idx << 1) | usize::from(b == b'1');
            }
            rel.insert_index(idx);
        }
        Ok(rel)
    }

    pub fn from_indices(arity: usize, indices: &[usize]) -> Result<Self, CoreError> {
        let mut rel = Self::empty(arity)?;
        for &i in indices {
            rel.insert_index(i);
        }
        Ok(rel)
    }

    /// Builds a relation from a predicate over tuples; `tuple[i]` is the
    /// value of argument `i` (0-based).
    pub fn from_fn(arity: usize, pred: impl Fn(&[bool]) -> bool) -> Result<Self, CoreError> {
        let mut rel = Self::empty(arity)?;
        let mut buf = vec![false; arity];
        for idx in 0..(1usize << arity) {
            for (i, slot) in buf.iter_mut().enumerate() {
                *slot = (idx >> (arity - 1 - i)) & 1 == 1;
            }
            if pred(&buf) {
                rel.insert_index(idx);
            }
        }
        Ok(rel)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn insert_index(&mut self, idx: usize) {
        debug_assert!(idx < 1usize << self.arity);
        self.membership[idx / 64] |= 1u64 << (idx % 64);
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.membership[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// Value of argument `coord` (0-based) in the tuple with table index `idx`.
    pub fn bit_of(&self, idx: usize, coord: usize) -> bool {
        (idx >> (self.arity - 1 - coord)) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.membership.iter().all(|w| *w == 0)
    }

    pub fn is_full(&self) -> bool {
        (0..(1usize << self.arity)).all(|i| self.contains_index(i))
    }

    pub fn len(&self) -> usize {
        (0..(1usize << self.arity))
            .filter(|&i| self.contains_index(i))
            .count()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..(1usize << self.arity)).filter(move |&i| self.contains_index(i))
    }

    pub fn tuples(&self) -> Vec<Vec<bool>> {
        self.indices()
            .map(|idx| (0..self.arity).map(|c| self.bit_of(idx, c)).collect())
            .collect()
    }

    /// Membership test for an explicit tuple of argument values.
    pub fn contains(&self, tuple: &[bool]) -> bool {
        debug_assert_eq!(tuple.len(), self.arity);
        let mut idx = 0usize;
        for &b in tuple {
            idx = (idx << 1) | usize::from(b);
        }
        self.contains_index(idx)
    }

    /// Existential projection onto an ordered list of distinct coordinates.
    /// The result's j-th argument is the `coords[j]`-th argument of `self`.
    pub fn project(&self, coords: &[usize]) -> Result<BooleanRelation, CoreError> {
        for &c in coords {
            if c >= self.arity {
                return Err(CoreError::IndexOutOfRange(c, self.arity));
            }
        }
        let mut out = BooleanRelation::empty(coords.len())?;
        for idx in self.indices() {
            let mut oidx = 0usize;
            for &c in coords {
                oidx = (oidx << 1) | usize::from(self.bit_of(idx, c));
            }
            out.insert_index(oidx);
        }
        Ok(out)
    }

    /// Coordinatewise negation of every tuple; an involution.
    pub fn dual(&self) -> BooleanRelation {
        let mask = (1usize << self.arity) - 1;
        let mut out = BooleanRelation::empty(self.arity).unwrap();
        for idx in self.indices() {
            out.insert_index(!idx & mask);
        }
        out
    }

    /// The relation with the `coord`-th variable negated; an involution.
    pub fn negate_coordinate(&self, coord: usize) -> Result<BooleanRelation, CoreError> {
        if coord >= self.arity {
            return Err(CoreError::IndexOutOfRange(coord, self.arity));
        }
        let bit = 1usize << (self.arity - 1 - coord);
        let mut out = BooleanRelation::empty(self.arity).unwrap();
        for idx in self.indices() {
            out.insert_index(idx ^ bit);
        }
        Ok(out)
    }

    /// Effective relation of a constraint whose scope may repeat variables:
    /// `slots[i]` names the distinct variable filling coordinate `i`. The
    /// result has arity `num_distinct` and keeps tuples consistent across
    /// repeats (a diagonal restriction followed by reordering).
    pub fn collapse_scope(&self, slots: &[usize], num_distinct: usize) -> BooleanRelation {
        debug_assert_eq!(slots.len(), self.arity);
        let mut out = BooleanRelation::empty(num_distinct).unwrap();
        'outer: for oidx in 0..(1usize << num_distinct) {
            let val = |v: usize| (oidx >> (num_distinct - 1 - v)) & 1 == 1;
            let mut idx = 0usize;
            for &slot in slots {
                if slot >= num_distinct {
                    continue 'outer;
                }
                idx = (idx << 1) | usize::from(val(slot));
            }
            if self.contains_index(idx) {
                out.insert_index(oidx);
            }
        }
        out
    }

    /// True if every pair of values at coordinates (i, j) listed in `pairs`
    /// extends to a member tuple; used to discover excluded value pairs.
    fn pair_attainable(&self, i: usize, j: usize, a: bool, b: bool) -> bool {
        self.indices()
            .any(|idx| self.bit_of(idx, i) == a && self.bit_of(idx, j) == b)
    }

    /// Value pairs at coordinates (i, j) that no member tuple extends.
    pub fn excluded_pairs(&self, i: usize, j: usize) -> Vec<(bool, bool)> {
        [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .filter(|&(a, b)| !self.pair_attainable(i, j, a, b))
            .collect()
    }

    /// Gaifman graph: edge {i, j} iff some value pair at (i, j) is excluded.
    /// Undefined on the empty relation.
    pub fn gaifman_graph(&self) -> Result<UndirectedGraph, CoreError> {
        if self.is_empty() {
            return Err(CoreError::EmptyRelation);
        }
        let mut g = UndirectedGraph::new(self.arity);
        for i in 0..self.arity {
            for j in (i + 1)..self.arity {
                if !self.excluded_pairs(i, j).is_empty() {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Arrow graph: arc (i, j) iff (1,0) is excluded at (i, j) while (0,0)
    /// and (1,1) are both attainable. Undefined on the empty relation.
    pub fn arrow_graph(&self) -> Result<DirectedGraph, CoreError> {
        if self.is_empty() {
            return Err(CoreError::EmptyRelation);
        }
        let mut g = DirectedGraph::new(self.arity);
        for i in 0..self.arity {
            for j in 0..self.arity {
                if i == j {
                    continue;
                }
                if !self.pair_attainable(i, j, true, false)
                    && self.pair_attainable(i, j, false, false)
                    && self.pair_attainable(i, j, true, true)
                {
                    g.add_arc(i, j);
                }
            }
        }
        Ok(g)
    }

    /// True iff the all-zero tuple belongs to the relation.
    pub fn is_zero_valid(&self) -> bool {
        self.contains_index(0)
    }

    /// True iff the all-one tuple belongs to the relation.
    pub fn is_one_valid(&self) -> bool {
        self.contains_index((1usize << self.arity) - 1)
    }
}

impl std::fmt::Debug for BooleanRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BooleanRelation(arity={}, {{", self.arity)?;
        let mut first = true;
        for idx in self.indices() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            for c in 0..self.arity {
                write!(f, "{}", u8::from(self.bit_of(idx, c)))?;
            }
        }
        write!(f, "}})")
    }
}

/// Relations used through the test-suite and the generators.
pub mod known {
    use super::BooleanRelation;

    /// (x = y)
    pub fn eq2() -> BooleanRelation {
        BooleanRelation::from_tuples(2, &["00", "11"]).unwrap()
    }

    /// (x != y)
    pub fn neq2() -> BooleanRelation {
        BooleanRelation::from_tuples(2, &["01", "10"]).unwrap()
    }

    /// (x -> y)
    pub fn implication() -> BooleanRelation {
        BooleanRelation::from_tuples(2, &["00", "01", "11"]).unwrap()
    }

    /// (x = 0)
    pub fn assign0() -> BooleanRelation {
        BooleanRelation::from_tuples(1, &["0"]).unwrap()
    }

    /// (x = 1)
    pub fn assign1() -> BooleanRelation {
        BooleanRelation::from_tuples(1, &["1"]).unwrap()
    }

    /// (a = b) and (c = d)
    pub fn r4() -> BooleanRelation {
        BooleanRelation::from_fn(4, |t| t[0] == t[1] && t[2] == t[3]).unwrap()
    }

    /// (x = 1) and (y = z)
    pub fn rex() -> BooleanRelation {
        BooleanRelation::from_fn(3, |t| t[0] && t[1] == t[2]).unwrap()
    }

    /// (not a or not b) and (c -> d)
    pub fn rmix() -> BooleanRelation {
        BooleanRelation::from_fn(4, |t| !(t[0] && t[1]) && (!t[2] || t[3])).unwrap()
    }

    /// (a = b) and (c = d) and (not a or not c); the coupled min-cut relation.
    pub fn rcmc() -> BooleanRelation {
        BooleanRelation::from_fn(4, |t| t[0] == t[1] && t[2] == t[3] && !(t[0] && t[2])).unwrap()
    }

    /// (a -> b) and (c -> d) and (not a or not c); directed coupled min-cut.
    pub fn rcmc_directed() -> BooleanRelation {
        BooleanRelation::from_fn(4, |t| {
            (!t[0] || t[1]) && (!t[2] || t[3]) && !(t[0] && t[2])
        })
        .unwrap()
    }

    /// The chain x_1 -> x_2 -> ... -> x_len.
    pub fn chain(len: usize) -> BooleanRelation {
        BooleanRelation::from_fn(len, |t| t.windows(2).all(|w| !w[0] || w[1])).unwrap()
    }

    /// Negative clause (not x_1 or ... or not x_len).
    pub fn negative_clause(len: usize) -> BooleanRelation {
        BooleanRelation::from_fn(len, |t| !t.iter().all(|&b| b)).unwrap()
    }
}
