use std::sync::Arc;

/// Shared knobs for the branching solvers. Exceeding a cap yields an explicit
/// resource outcome, never a silent NO.
#[derive(Clone)]
pub struct SolveConfig {
    /// Cap on explored branch nodes per solver invocation.
    pub max_branches: u64,
    /// Vertex cap for the exhaustive augmentation enumeration (2^(n-2) sets).
    pub enum_vertices_cap: usize,
    /// Bundle-subset enumeration cap for the clause-free endgame.
    pub bundle_subset_cap: u64,
    /// Absorb iterations explored per lifted branch. The exhaustive augmenter
    /// already lands every solution on a branch where the cut is an st-mincut,
    /// so rounds beyond 0 add no completeness; they exist for the faithful
    /// loop and for instrumented runs.
    pub max_absorb_rounds: u32,
    /// Recursion depth cap for the clause-elimination and clause-cut stages.
    pub max_depth: u32,
    /// Randomized mode: follow one sampled child per branch point instead of
    /// all of them, repeated `trials` times. Excluded from acceptance runs.
    pub randomized: Option<RandomizedMode>,
    /// Worker threads for top-level branch exploration.
    pub jobs: usize,
    /// Optional sink receiving one line per branch event.
    pub trace: Option<Arc<dyn Fn(&str) + Send + Sync>>,
}

#[derive(Clone, Copy, Debug)]
pub struct RandomizedMode {
    pub seed: u64,
    pub trials: u32,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_branches: 5_000_000,
            enum_vertices_cap: 14,
            bundle_subset_cap: 2_000_000,
            max_absorb_rounds: 0,
            max_depth: 512,
            randomized: None,
            jobs: 1,
            trace: None,
        }
    }
}

impl SolveConfig {
    pub fn trace(&self, msg: impl FnOnce() -> String) {
        if let Some(sink) = &self.trace {
            sink(&msg());
        }
    }
}

impl std::fmt::Debug for SolveConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolveConfig")
            .field("max_branches", &self.max_branches)
            .field("enum_vertices_cap", &self.enum_vertices_cap)
            .field("bundle_subset_cap", &self.bundle_subset_cap)
            .field("max_absorb_rounds", &self.max_absorb_rounds)
            .field("max_depth", &self.max_depth)
            .field("randomized", &self.randomized)
            .field("jobs", &self.jobs)
            .field("trace", &self.trace.is_some())
            .finish()
    }
}
