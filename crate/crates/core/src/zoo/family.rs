//! Membership in the family `𝓡` of groups `ℤₙ × R₂` and `ℤₙ ⋊ ⟨y⟩`.

use serde::{Deserialize, Serialize};

use super::numtheory::is_square_free;
use super::spec::GroupSpec;
use super::table::CayleyTable;
use crate::error::Result;
use crate::group::PermGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyCase {
    /// `ℤₙ × R₂`.
    A,
    /// `ℤₙ ⋊ ⟨y⟩` with `y ∉ Z`, `y² ∈ Z`.
    B,
    None,
}

/// Sylow 2-subgroups occurring in `𝓡`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SylowTwo {
    Trivial,
    Z2,
    Z2Squared,
    Z2Cubed,
    Z2Fourth,
    Z4,
    Z8,
    Q8,
}

impl SylowTwo {
    /// `|Aut(R₂)|`.
    pub fn automorphism_group_order(self) -> u64 {
        match self {
            SylowTwo::Trivial => 1,
            SylowTwo::Z2 => 1,
            SylowTwo::Z2Squared => 6,
            SylowTwo::Z2Cubed => 168,
            SylowTwo::Z2Fourth => 20160,
            SylowTwo::Z4 => 2,
            SylowTwo::Z8 => 4,
            SylowTwo::Q8 => 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMembership {
    pub member: bool,
    pub case: FamilyCase,
    /// Odd part `n`.
    pub n: usize,
    pub sylow_two: Option<SylowTwo>,
    /// Case (b): label of `y` and its order.
    pub y: Option<(usize, usize)>,
}

impl FamilyMembership {
    fn none(n: usize) -> Self {
        FamilyMembership {
            member: false,
            case: FamilyCase::None,
            n,
            sylow_two: None,
            y: None,
        }
    }
}

/// Identifies a 2-group of order at most 16 against the `R₂` list.
fn classify_two_group(t: &CayleyTable, set: &[usize]) -> Option<SylowTwo> {
    let orders: Vec<usize> = set.iter().map(|&x| t.element_order(x)).collect();
    let max = orders.iter().copied().max().unwrap_or(1);
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    let abelian = set.iter().all(|&a| set.iter().all(|&b| t.mul(a, b) == t.mul(b, a)));
    match (set.len(), max) {
        (1, _) => Some(SylowTwo::Trivial),
        (2, _) => Some(SylowTwo::Z2),
        (4, 2) => Some(SylowTwo::Z2Squared),
        (8, 2) => Some(SylowTwo::Z2Cubed),
        (16, 2) => Some(SylowTwo::Z2Fourth),
        (4, 4) => Some(SylowTwo::Z4),
        (8, 8) => Some(SylowTwo::Z8),
        (8, 4) if !abelian && involutions == 1 => Some(SylowTwo::Q8),
        _ => None,
    }
}

/// Decides membership of an abstract group in `𝓡`.
///
/// `ℤₙ × ℤ₈` is accepted in case (a) so that the family is closed under
/// subgroups and quotients (`ℤ₃ ⋊ ℤ₈` has `ℤ₈` as both).
pub fn in_family_r_table(t: &CayleyTable) -> FamilyMembership {
    let order = t.order();
    let two_part = 1usize << order.trailing_zeros();
    let n = order / two_part;
    if !is_square_free(n as u64) {
        return FamilyMembership::none(n);
    }
    let orders = t.element_orders();
    let odd: Vec<usize> = (0..order).filter(|&x| orders[x] % 2 == 1).collect();
    // the odd-order elements must be exactly a cyclic subgroup of order n
    if odd.len() != n || !odd.iter().any(|&x| orders[x] == n) {
        return FamilyMembership::none(n);
    }
    if odd.iter().all(|&x| t.is_central(x)) {
        let twos: Vec<usize> = (0..order).filter(|&x| orders[x].is_power_of_two()).collect();
        if twos.len() == two_part && t.is_subgroup(&twos) {
            if let Some(s) = classify_two_group(t, &twos) {
                return FamilyMembership {
                    member: true,
                    case: FamilyCase::A,
                    n,
                    sylow_two: Some(s),
                    y: None,
                };
            }
        }
        return FamilyMembership::none(n);
    }
    if [2, 4, 8].contains(&two_part) {
        let y = (0..order).find(|&y| {
            orders[y] == two_part && !t.is_central(y) && t.is_central(t.mul(y, y))
        });
        if let Some(y) = y {
            let sylow = if two_part == 2 {
                SylowTwo::Z2
            } else if two_part == 4 {
                SylowTwo::Z4
            } else {
                SylowTwo::Z8
            };
            return FamilyMembership {
                member: true,
                case: FamilyCase::B,
                n,
                sylow_two: Some(sylow),
                y: Some((y, two_part)),
            };
        }
    }
    FamilyMembership::none(n)
}

pub fn in_family_r(spec: &GroupSpec) -> Result<FamilyMembership> {
    Ok(in_family_r_table(&spec.table()?))
}

/// Membership of the abstract group of a permutation group.
pub fn in_family_r_group(g: &PermGroup, cap: u128) -> Result<FamilyMembership> {
    Ok(in_family_r_table(&CayleyTable::from_perm_group(g, cap)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(s: &str) -> FamilyMembership {
        in_family_r(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn listed_examples() {
        let d = check("dicyclic(5)");
        assert!(d.member);
        assert_eq!(d.case, FamilyCase::B);
        assert_eq!(d.y.unwrap().1, 4);
        assert!(!check("cyclic(9)").member);
        let a = check("direct_product(cyclic(15),elementary_abelian_2(3))");
        assert_eq!((a.case, a.sylow_two), (FamilyCase::A, Some(SylowTwo::Z2Cubed)));
    }

    #[test]
    fn more_members() {
        assert_eq!(check("q8").sylow_two, Some(SylowTwo::Q8));
        assert_eq!(check("direct_product(cyclic(3),q8)").case, FamilyCase::A);
        assert_eq!(check("dihedral(3)").case, FamilyCase::B);
        assert_eq!(check("zn_semidirect_y(3,8,-1)").case, FamilyCase::B);
        assert_eq!(check("zn_semidirect_y(15,4,4)").case, FamilyCase::B);
        assert_eq!(check("z8").sylow_two, Some(SylowTwo::Z8));
        assert!(check("cyclic(1)").member);
        assert!(check("elementary_abelian_2(4)").member);
    }

    #[test]
    fn non_members() {
        assert!(!check("dihedral(4)").member);
        assert!(!check("elementary_abelian_2(5)").member);
        assert!(!check("cyclic(16)").member);
        assert!(!check("frobenius(7,3)").member);
        assert!(!check("frobenius(5,4)").member);
        assert!(!check("direct_product(z4,cyclic(2))").member);
        assert!(!check("dicyclic(4)").member);
    }

    #[test]
    fn automorphism_orders() {
        let all = [
            SylowTwo::Trivial,
            SylowTwo::Z2,
            SylowTwo::Z2Squared,
            SylowTwo::Z2Cubed,
            SylowTwo::Z2Fourth,
            SylowTwo::Z4,
            SylowTwo::Z8,
            SylowTwo::Q8,
        ];
        let orders: Vec<u64> = all.iter().map(|s| s.automorphism_group_order()).collect();
        assert_eq!(orders, vec![1, 1, 6, 168, 20160, 2, 4, 24]);
    }
}
