/// Size caps for the exhaustive routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order accepted by subgroup enumeration (hard ceiling 64).
    pub subgroup_order: usize,
    /// Largest group order accepted by the generating-set search.
    pub rank_order: usize,
    /// Largest configuration space `q^n` that may be enumerated.
    pub max_configs: u64,
    /// Largest number `q^(q^n)` of cellular automata that may be enumerated.
    pub max_ca: u64,
    /// Largest monoid a closure may build.
    pub closure_cap: usize,
    /// Largest orbit for the permutation-scan centraliser.
    pub centralizer_orbit: usize,
    /// Largest `alpha` whose factorial is expanded for the ICA order.
    pub max_alpha: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            subgroup_order: 64,
            rank_order: 24,
            max_configs: 1 << 24,
            max_ca: 1 << 20,
            closure_cap: 1 << 21,
            centralizer_orbit: 10,
            max_alpha: 1 << 16,
        }
    }
}

/// Environment variable overriding both enumeration caps.
pub const MAX_ENUM_ENV: &str = "CA_ALGEBRA_MAX_ENUM";

impl Limits {
    /// Defaults, with `CA_ALGEBRA_MAX_ENUM` applied when it parses as an integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(MAX_ENUM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
        {
            limits = limits.with_max_enum(cap);
        }
        limits
    }

    pub fn with_max_enum(mut self, cap: u64) -> Self {
        self.max_configs = cap;
        self.max_ca = cap;
        self
    }
}
