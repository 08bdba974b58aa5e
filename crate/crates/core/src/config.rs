//! Runtime limits shared by the enumerating algorithms.

/// Environment variable that overrides [`Limits::enum_cap`].
pub const ENUM_CAP_ENV: &str = "ANYON_ENUM_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of objects (fusion trees, types) an enumeration may produce.
    pub enum_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enum_cap: 1_000_000,
        }
    }
}

impl Limits {
    /// Defaults, with `ANYON_ENUM_CAP` applied when it parses as an integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(ENUM_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            limits.enum_cap = cap;
        }
        limits
    }
}
