//! Concrete groups: symbolic specs, regular representations, the family
//! `𝓡`, holomorph witnesses and number-theoretic helpers.

pub mod family;
pub mod numtheory;
pub mod regular;
pub mod spec;
pub mod table;

pub use family::{in_family_r, in_family_r_group, in_family_r_table, FamilyCase, FamilyMembership, SylowTwo};
pub use numtheory::{ci_order_condition, zsigmondy_ppd};
pub use regular::{
    cor2_groups, frobenius_natural, inner_holomorph, isomorphic_to_spec, regular_representation, LabeledPermGroup,
    Side,
};
pub use spec::GroupSpec;
pub use table::CayleyTable;
