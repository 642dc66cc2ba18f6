//! Regular subgroups, conjugacy, Sylow alignment and block towers.

pub mod align;
pub mod conjugacy;
pub mod regular;
pub mod socle;
pub mod tower;
pub mod transcript;
pub mod witness;

pub use align::{align_sylow_orbits, AlignResult};
pub use conjugacy::{are_conjugate_subgroups, are_conjugate_subgroups_logged};
pub use regular::{all_regular_subgroups, babai_check, regular_subgroups, CiStatus, CiVerdict};
pub use socle::{semiregular_classes, support_decomposition, SemiregularClasses};
pub use tower::{
    block_tower_search, classify_tower, match_ratio_pattern, ExceptionalCase, RatioPattern, TowerFailure,
    TowerOutcome, TowerResult,
};
pub use transcript::Transcript;
pub use witness::{holomorph_witness, HolomorphReport};
