//! Shared fixtures for the criterion benches.

use conrad_core::ClassSpec;

/// One representative spec per class, at the parameters used in the acceptance runs.
pub fn representative_specs() -> Vec<ClassSpec> {
    vec![
        ClassSpec::pprime(2.0).unwrap(),
        ClassSpec::pprime_fixed(2.0, 0.5).unwrap(),
        ClassSpec::lif(2.0, 2.0).unwrap(),
        ClassSpec::starlike_half(2.0).unwrap(),
        ClassSpec::u0(2.0, 0.7).unwrap(),
        ClassSpec::vp(1.0, 0.5).unwrap(),
        ClassSpec::vp_convex(1.0, 0.5).unwrap(),
    ]
}

/// Specs that `sample_verify` accepts.
pub fn sampled_specs() -> Vec<ClassSpec> {
    representative_specs()
        .into_iter()
        .filter(|s| s.kind() != conrad_core::ClassKind::Lif)
        .collect()
}
