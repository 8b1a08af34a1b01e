/// Caps on exhaustive work. Every enumeration-backed operation checks its
/// input size against one of these before doing anything expensive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of brackets an operation may enumerate.
    pub brackets: u64,
    /// Maximum number of bracket subsets scanned by the resolving-number oracle.
    pub subsets: u64,
    /// Maximum number of k-combinations (or pair-table cells) a search may visit.
    pub search: u64,
}

impl Limits {
    pub const DEFAULT_BRACKETS: u64 = 1 << 20;
    pub const DEFAULT_SUBSETS: u64 = 1 << 20;
    pub const DEFAULT_SEARCH: u64 = 1 << 34;

    /// Same as `default()`, but a numeric `BRACKETDIM_CAP` environment
    /// variable replaces the bracket and subset caps.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(cap) = std::env::var("BRACKETDIM_CAP")
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
        {
            limits.brackets = cap;
            limits.subsets = cap;
        }
        limits
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            brackets: Self::DEFAULT_BRACKETS,
            subsets: Self::DEFAULT_SUBSETS,
            search: Self::DEFAULT_SEARCH,
        }
    }
}
