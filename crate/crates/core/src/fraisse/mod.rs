//! Inverse sequences of finite median algebras: split extensions,
//! saturation, approximation sequences, extension checks and
//! back-and-forth interleaving.

mod baf;
mod catalog;
mod checks;
mod saturation;
mod sequence;
mod split;

pub use baf::{back_and_forth, Interleaving};
pub use catalog::{Catalog, CATALOG_BOUND};
pub use checks::{
    check_extension_property, check_m1, check_m2, check_m3, lift_cover, HalfspaceWitness, Search,
};
pub use saturation::{
    build_fraisse, build_fraisse_with, default_cap, saturation_step, saturation_step_with,
    sweep_saturation, verify_certificate, BuildConfig, Certificate, CertificateEntry,
    EnumerationOrder, Saturation, SaturationConfig, SweepReport, CAP_ENV, DEFAULT_CAP,
    MAX_SIZE_BOUND,
};
pub use sequence::{composite_projection, InverseSequence, Provenance};
pub use split::{convex_subsets, enumerate_convex_covers, split_extension, SplitData, COVER_BOUND};
