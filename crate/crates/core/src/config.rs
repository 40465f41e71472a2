use serde::{Deserialize, Serialize};

/// Resource limits shared by the contraction engine and the dense simulator.
///
/// The defaults fit a desktop-class machine; callers lower them to fail fast
/// in constrained environments rather than swapping.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Refuse any contraction whose intermediate tensor rank exceeds this.
    pub width_cap: u32,
    /// Refuse any single tensor allocation beyond this many bytes.
    pub mem_budget: u64,
    /// Largest qubit count the dense simulator will attempt.
    pub statevector_cap: u32,
    /// Largest subgraph (vertices) the canonicaliser will accept.
    pub canon_cap: usize,
    /// Worker threads for ensemble-level parallelism; 0 means "all cores".
    pub workers: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            width_cap: 28,
            mem_budget: 4 << 30,
            statevector_cap: 24,
            canon_cap: crate::graph::DEFAULT_CANON_CAP,
            workers: 0,
        }
    }
}

impl EngineConfig {
    pub fn with_width_cap(mut self, cap: u32) -> Self {
        self.width_cap = cap;
        self
    }

    pub fn with_mem_budget(mut self, bytes: u64) -> Self {
        self.mem_budget = bytes;
        self
    }

    pub fn with_canon_cap(mut self, cap: usize) -> Self {
        self.canon_cap = cap;
        self
    }
}
