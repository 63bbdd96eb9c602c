//! Central configuration for the numeric tier and randomized choices.

/// All numeric thresholds and the working precision in one place.
///
/// The exact tier (rational resultants, gcd, fiber emptiness over rational
/// targets) never consults these; they govern root location, clustering and
/// the numeric verification fallback only.
#[derive(Clone, Debug)]
pub struct NumericConfig {
    /// Working precision for root finding, in bits.
    pub precision_bits: u32,
    /// Hard cap for precision escalation on non-convergence.
    pub max_precision_bits: u32,
    /// Relative backward-error target for accepted roots.
    pub root_residual: f64,
    /// Roots closer than this are merged into one cluster.
    pub cluster_eps: f64,
    /// Modulus below which a coordinate counts as lying on an axis.
    pub zero_threshold: f64,
    /// Minimum back-substitution residual for a numeric "missing" verdict.
    pub verify_residual: f64,
    /// Residual allowed when checking a point against a component.
    pub component_residual: f64,
    /// Seed driving every randomized choice (translations, shears, targets).
    pub seed: u64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            precision_bits: 128,
            max_precision_bits: 512,
            root_residual: 1e-28,
            cluster_eps: 1e-20,
            zero_threshold: 1e-10,
            verify_residual: 1e-8,
            component_residual: 1e-9,
            seed: 0,
        }
    }
}

impl NumericConfig {
    pub fn with_seed(seed: u64) -> Self {
        NumericConfig {
            seed,
            ..Default::default()
        }
    }
}
