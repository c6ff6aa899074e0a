/// Resource bounds shared by every enumeration and search.
///
/// All searches fail with [`GroupError::LimitExceeded`](crate::GroupError)
/// rather than running unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group that may be fully enumerated.
    pub max_order: usize,
    /// Largest group handed to isomorphism, complement, normal-subgroup and
    /// specialness searches.
    pub search_limit: usize,
    /// Node budget for a single complement or isomorphism backtracking run.
    pub search_nodes: u64,
    /// Cap on the number of normal subgroups enumerated for one group.
    pub max_normal_subgroups: usize,
    /// Wreath covers up to this order are verified by full enumeration.
    pub exhaustive_cover_order: u128,
    /// Number of sampled pairs above the exhaustive threshold.
    pub sample_pairs: usize,
    /// Seed for sampled verification.
    pub sample_seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 20_000,
            search_limit: 512,
            search_nodes: 5_000_000,
            max_normal_subgroups: 20_000,
            exhaustive_cover_order: 50_000,
            sample_pairs: 100_000,
            sample_seed: 0x5eed_7043,
        }
    }
}

impl Limits {
    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn with_search_limit(mut self, search_limit: usize) -> Self {
        self.search_limit = search_limit;
        self
    }
}
