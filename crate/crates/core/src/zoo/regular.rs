//! Regular representations and groups built from them.

use serde::{Deserialize, Serialize};

use super::numtheory::{gcd, is_prime};
use super::spec::GroupSpec;
use super::table::CayleyTable;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `L_g(x) = g·x`.
    Left,
    /// `R_g(x) = x·g⁻¹`.
    Right,
}

/// A regular permutation group whose points are the labels of a [`GroupSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPermGroup {
    pub spec: GroupSpec,
    pub side: Side,
    pub group: PermGroup,
    /// `labels[point]` is the abstract element at that point.
    pub labels: Vec<usize>,
}

impl LabeledPermGroup {
    /// The permutation of the translation by `g`.
    pub fn translation(&self, g: usize) -> Result<Permutation> {
        translation(&self.spec.table()?, self.side, g)
    }
}

pub(crate) fn translation(t: &CayleyTable, side: Side, g: usize) -> Result<Permutation> {
    let images = match side {
        Side::Left => (0..t.order()).map(|x| t.mul(g, x)).collect(),
        Side::Right => {
            let gi = t.inverse(g);
            (0..t.order()).map(|x| t.mul(x, gi)).collect()
        }
    };
    Permutation::from_images(images)
}

pub(crate) fn regular_from_table(t: &CayleyTable, side: Side) -> Result<PermGroup> {
    let gens = t
        .generators()
        .into_iter()
        .map(|g| translation(t, side, g))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(t.order(), gens)
}

pub fn regular_representation(spec: &GroupSpec, side: Side) -> Result<LabeledPermGroup> {
    let t = spec.table()?;
    Ok(LabeledPermGroup {
        spec: spec.clone(),
        side,
        group: regular_from_table(&t, side)?,
        labels: (0..t.order()).collect(),
    })
}

/// `⟨G_L, G_R⟩` on the labels of `spec`.
pub fn inner_holomorph(spec: &GroupSpec) -> Result<PermGroup> {
    let t = spec.table()?;
    regular_from_table(&t, Side::Left)?.join(&regular_from_table(&t, Side::Right)?)
}

/// `frobenius(p, n)` acting on `ℤ_p` by `z ↦ x + ωⁱ z`.
pub fn frobenius_natural(p: usize, n: usize) -> Result<PermGroup> {
    let spec = GroupSpec::Frobenius { p, n };
    spec.validate()?;
    let w = spec.frobenius_root().expect("validated");
    let shift = Permutation::from_images((0..p).map(|z| (z + 1) % p).collect())?;
    let scale = Permutation::from_images((0..p).map(|z| z * w % p).collect())?;
    PermGroup::new(p, vec![shift, scale])
}

/// Is `h` abstractly isomorphic to `spec`? Compares fingerprints, then
/// searches for an isomorphism.
pub fn isomorphic_to_spec(h: &PermGroup, spec: &GroupSpec, cap: u128) -> Result<bool> {
    let order = spec.order()?;
    if h.order() != order as u128 {
        return Ok(false);
    }
    let a = CayleyTable::from_perm_group(h, cap)?;
    Ok(a.is_isomorphic(&spec.table()?))
}

/// The two regular subgroups `G₁, G₂` of the inner holomorph of
/// `frobenius(p, n)` attached to the endomorphism `ωⁱ ↦ ωᵃⁱ` and a unit `b`.
///
/// A pair `[g, h]` acts on the labels by `z ↦ g⁻¹ z h`.
pub fn cor2_groups(p: usize, n: usize, a: usize, b: usize) -> Result<(PermGroup, PermGroup)> {
    let fail = |m: String| Err(Error::Precondition(m));
    if !is_prime(p as u64) {
        return fail(format!("{p} is not prime"));
    }
    if n == 0 || !(p - 1).is_multiple_of(n) {
        return fail(format!("{n} does not divide {}", p - 1));
    }
    if !(2 < n && n + 1 < p) {
        return fail(format!("need 2 < n < p - 1, got n = {n}, p = {p}"));
    }
    let (a, b) = (a % n, b % n);
    if gcd(a as u128, n as u128) == 1 {
        return fail(format!("a = {a} is a unit mod {n}, so the endomorphism is injective"));
    }
    if n.is_multiple_of(2) && a % 2 == 1 {
        return fail(format!("a = {a} must be even when n = {n} is even"));
    }
    if gcd(b as u128, n as u128) != 1 {
        return fail(format!("b = {b} is not a unit mod {n}"));
    }
    if gcd(((a + n - b) % n) as u128, n as u128) != 1 {
        return fail(format!("a - b = {} is not a unit mod {n}", (a + n - b) % n));
    }
    let t = GroupSpec::Frobenius { p, n }.table()?;
    // label of (x, ωⁱ)
    let el = |x: usize, i: usize| x * n + i;
    let act = |g: usize, h: usize| -> Result<Permutation> {
        let gi = t.inverse(g);
        Permutation::from_images((0..t.order()).map(|z| t.mul(t.mul(gi, z), h)).collect())
    };
    let e = el(0, 0);
    let g1 = PermGroup::new(t.order(), vec![act(el(1, 0), e)?, act(el(0, a), el(0, b))?])?;
    let g2 = PermGroup::new(t.order(), vec![act(e, el(1, 0))?, act(el(0, b), el(0, a))?])?;
    Ok((g1, g2))
}
