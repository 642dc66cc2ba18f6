//! Named reproduction pipelines. Each claim runs a fixed computation and
//! compares it with known values or with the brute-force oracles.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blocks::{action_on_blocks, all_block_systems, block_restriction, verify_tower, BlockSystem};
use crate::ci::{
    are_conjugate_subgroups, babai_check, block_tower_search, holomorph_witness, regular_subgroups,
    semiregular_classes, all_regular_subgroups, ExceptionalCase, TowerOutcome,
};
use crate::closures::{k_closure_with_budget, ClosureBudget};
use crate::error::{Error, Result};
use crate::group::{PermGroup, DEFAULT_CAP};
use crate::oracle;
use crate::perm::Permutation;
use crate::zoo::{
    cor2_groups, frobenius_natural, in_family_r, in_family_r_group, inner_holomorph, isomorphic_to_spec,
    regular_representation, zsigmondy_ppd, GroupSpec, Side,
};

/// Generators of `M₁₂` on 12 points (external data, see the file's
/// `source` field).
pub const M12_FIXTURE: &str = include_str!("../fixtures/m12.json");

pub const CLAIMS: &[&str] = &[
    "example-degree-20",
    "cor1-p7-n3",
    "prop3closed-premise-p7-n3",
    "cor2-p13-n4",
    "closure-chain",
    "zsigmondy-table",
    "blocks-oracle",
    "tower-dic3",
    "regular-subgroups-oracle",
    "family-r-closure",
    "m12-semiregular",
];

/// Seed of the default tower sample.
pub const DEFAULT_SEED: u64 = 2;
pub const DEFAULT_SAMPLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub claim: String,
    pub inputs: Value,
    pub outputs: Value,
    pub pass: bool,
    /// Milliseconds; only filled in when timing is requested, so that
    /// reports stay byte-stable by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct ReproOptions {
    pub cap: u128,
    pub budget: ClosureBudget,
    pub seed: u64,
    pub samples: usize,
    /// Replaces the bundled `M₁₂` generators.
    pub m12: Option<PermGroup>,
}

impl Default for ReproOptions {
    fn default() -> Self {
        ReproOptions {
            cap: DEFAULT_CAP,
            budget: ClosureBudget::default(),
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            m12: None,
        }
    }
}

pub fn reproduce(claim: &str, opts: &ReproOptions) -> Result<ReproReport> {
    let (inputs, outputs, pass) = match claim {
        "example-degree-20" => example_degree_20(opts)?,
        "cor1-p7-n3" => holomorph_21(opts)?,
        "prop3closed-premise-p7-n3" => prop3closed_premise(opts)?,
        "cor2-p13-n4" => frobenius_52_pair(opts)?,
        "closure-chain" => closure_chain(opts)?,
        "zsigmondy-table" => zsigmondy_table()?,
        "blocks-oracle" => blocks_oracle()?,
        "tower-dic3" => tower_dic3(opts)?,
        "regular-subgroups-oracle" => regular_subgroups_oracle(opts)?,
        "family-r-closure" => family_r_closure(opts)?,
        "m12-semiregular" => m12_semiregular(opts)?,
        other => return Err(Error::InvalidSpec(format!("unknown claim id {other:?}"))),
    };
    Ok(ReproReport {
        claim: claim.to_string(),
        inputs,
        outputs,
        pass,
        wall_time_ms: None,
    })
}

type Outcome = (Value, Value, bool);

fn spec(s: &str) -> GroupSpec {
    s.parse().expect("built-in spec")
}

fn example_degree_20(opts: &ReproOptions) -> Result<Outcome> {
    let f = spec("frobenius(5,4)");
    let dic = spec("dicyclic(5)");
    let hol = inner_holomorph(&f)?;
    let closure = k_closure_with_budget(&hol, 3, &opts.budget)?;
    let verdict = babai_check(&hol, &dic, opts.cap)?;
    let pass = hol.order() == 400 && closure.order() == 400 && verdict.classes == 2;
    Ok((
        json!({ "group": f.to_string(), "regular_type": dic.to_string() }),
        json!({
            "holomorph_order": hol.order() as u64,
            "closure_order": closure.order() as u64,
            "is_3_closed": closure.order() == hol.order(),
            "classes": verdict.classes,
            "status": verdict.status,
        }),
        pass,
    ))
}

fn holomorph_21(opts: &ReproOptions) -> Result<Outcome> {
    let f = spec("frobenius(7,3)");
    let r = holomorph_witness(&f, &opts.budget, opts.cap)?;
    let pass = r.holomorph_order == 441 && r.is_3_closed && !r.left_right_conjugate;
    Ok((
        json!({ "group": f.to_string() }),
        json!({
            "holomorph_order": r.holomorph_order as u64,
            "closure_order": r.closure_order as u64,
            "is_3_closed": r.is_3_closed,
            "left_right_conjugate": r.left_right_conjugate,
        }),
        pass,
    ))
}

fn prop3closed_premise(opts: &ReproOptions) -> Result<Outcome> {
    let f = frobenius_natural(7, 3)?;
    let closure = k_closure_with_budget(&f, 2, &opts.budget)?;
    let brute = oracle::k_closure_elements(&f, 2)?;
    let agree = brute.len() as u128 == closure.order() && brute.iter().all(|x| closure.contains(x));
    let pass = closure.order() == 21 && agree;
    Ok((
        json!({ "group": "frobenius(7,3) on 7 points", "k": 2 }),
        json!({
            "closure_order": closure.order() as u64,
            "oracle_order": brute.len(),
            "symmetric_group_scanned": oracle::all_permutations(7)?.len(),
            "oracle_agrees": agree,
        }),
        pass,
    ))
}

fn frobenius_52_pair(opts: &ReproOptions) -> Result<Outcome> {
    let (p, n, a, b) = (13, 4, 2, 1);
    let (g1, g2) = cor2_groups(p, n, a, b)?;
    let hol = inner_holomorph(&GroupSpec::Frobenius { p, n })?;
    let s1 = g1.sylow_subgroup(p as u64, opts.cap)?;
    let s2 = g2.sylow_subgroup(p as u64, opts.cap)?;
    let normal = s1.is_normal_in(&g1)? && s2.is_normal_in(&g2)?;
    let conj = are_conjugate_subgroups(&hol, &g1, &g2, opts.cap)?;
    let (r1, r2) = (g1.transitivity_profile().regular, g2.transitivity_profile().regular);
    let pass = g1.order() == 52
        && g2.order() == 52
        && r1
        && r2
        && normal
        && s1 != s2
        && hol.order() == 2704
        && conj.is_none();
    Ok((
        json!({ "p": p, "n": n, "a": a, "b": b }),
        json!({
            "orders": [g1.order() as u64, g2.order() as u64],
            "regular": [r1, r2],
            "sylow_normal": normal,
            "sylow_distinct": s1 != s2,
            "holomorph_order": hol.order() as u64,
            "conjugate": conj.is_some(),
            "g1": g1,
            "g2": g2,
        }),
        pass,
    ))
}

/// Small groups used by the closure-chain claim, with their names.
pub fn closure_corpus() -> Result<Vec<(String, PermGroup)>> {
    let mut out = Vec::new();
    for s in [
        "cyclic(5)",
        "cyclic(6)",
        "cyclic(7)",
        "cyclic(8)",
        "dihedral(3)",
        "dihedral(4)",
        "dihedral(5)",
        "dicyclic(2)",
        "q8",
        "direct_product(cyclic(2),cyclic(4))",
    ] {
        out.push((format!("{s} regular"), regular_representation(&spec(s), Side::Left)?.group));
    }
    for (p, n) in [(5, 2), (5, 4), (7, 3), (7, 6)] {
        out.push((format!("frobenius({p},{n}) natural"), frobenius_natural(p, n)?));
    }
    Ok(out)
}

fn closure_chain(opts: &ReproOptions) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (name, g) in closure_corpus()? {
        let c3 = k_closure_with_budget(&g, 3, &opts.budget)?;
        let c2 = k_closure_with_budget(&g, 2, &opts.budget)?;
        let chain = g.generators().iter().all(|x| c3.contains(x)) && c3.generators().iter().all(|x| c2.contains(x));
        let mut row = json!({
            "group": name,
            "degree": g.degree(),
            "order": g.order() as u64,
            "closure3_order": c3.order() as u64,
            "closure2_order": c2.order() as u64,
            "chain": chain,
        });
        pass &= chain;
        if g.degree() <= 7 {
            let o3 = oracle::k_closure_order(&g, 3)?;
            let o2 = oracle::k_closure_order(&g, 2)?;
            let agree = o3 == c3.order() && o2 == c2.order();
            row["oracle_agrees"] = json!(agree);
            pass &= agree;
        }
        rows.push(row);
    }
    Ok((json!({ "corpus_size": rows.len() }), json!({ "groups": rows }), pass))
}

fn zsigmondy_table() -> Result<Outcome> {
    let mut mismatches = Vec::new();
    let mut none_cases = Vec::new();
    let mut table = BTreeMap::new();
    for a in 2u64..=12 {
        for k in 2u32..=12 {
            let fast = zsigmondy_ppd(a, k)?;
            let slow = oracle::primitive_prime_divisor(a, k);
            if fast != slow || fast.is_some_and(|p| p % k as u128 != 1) {
                mismatches.push(json!([a, k]));
            }
            if fast.is_none() {
                none_cases.push((a, k));
            }
            table.insert(format!("{a},{k}"), fast.map(|p| p as u64));
        }
    }
    let expected: Vec<(u64, u32)> = (2u64..=12)
        .flat_map(|a| (2u32..=12).map(move |k| (a, k)))
        .filter(|&(a, k)| (a, k) == (2, 6) || (k == 2 && (a + 1).is_power_of_two()))
        .collect();
    let pass = mismatches.is_empty() && none_cases == expected;
    Ok((
        json!({ "a": [2, 12], "k": [2, 12] }),
        json!({ "mismatches": mismatches, "none": none_cases, "table": table }),
        pass,
    ))
}

/// Regular representations of every group of order at most 8 together
/// with `S₄`, `D₈` and `A₄` on 4 points.
pub fn blocks_corpus() -> Result<Vec<(String, PermGroup)>> {
    let mut out = Vec::new();
    for s in [
        "cyclic(1)",
        "cyclic(2)",
        "cyclic(3)",
        "cyclic(4)",
        "elementary_abelian_2(2)",
        "cyclic(5)",
        "cyclic(6)",
        "dihedral(3)",
        "cyclic(7)",
        "cyclic(8)",
        "direct_product(cyclic(2),cyclic(4))",
        "elementary_abelian_2(3)",
        "dihedral(4)",
        "q8",
    ] {
        out.push((format!("{s} regular"), regular_representation(&spec(s), Side::Left)?.group));
    }
    let cyc = |c: &[&[usize]]| Permutation::from_cycles(4, c);
    out.push(("S4 natural".into(), PermGroup::symmetric(4)));
    out.push((
        "D8 natural".into(),
        PermGroup::new(4, vec![cyc(&[&[0, 1, 2, 3]])?, cyc(&[&[1, 3]])?])?,
    ));
    out.push(("A4 natural".into(), PermGroup::alternating(4)));
    Ok(out)
}

fn blocks_oracle() -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (name, g) in blocks_corpus()? {
        let mut fast = all_block_systems(&g)?;
        fast.sort_by(|a, b| (a.block_size(), a.blocks()).cmp(&(b.block_size(), b.blocks())));
        let slow = oracle::block_systems(&g)?;
        let agree = fast == slow;
        pass &= agree;
        rows.push(json!({ "group": name, "systems": fast.len(), "oracle_systems": slow.len(), "agree": agree }));
    }
    Ok((json!({ "corpus_size": rows.len() }), json!({ "groups": rows }), pass))
}

/// A uniformly random permutation preserving the partition `sys`.
pub fn sample_preserving(sys: &BlockSystem, rng: &mut impl Rng) -> Permutation {
    let blocks = sys.blocks();
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.shuffle(rng);
    let mut images = vec![0; sys.degree()];
    for (i, b) in blocks.iter().enumerate() {
        let mut target = blocks[order[i]].clone();
        target.shuffle(rng);
        for (&x, y) in b.iter().zip(target) {
            images[x] = y;
        }
    }
    Permutation::from_images(images).expect("bijection")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerSample {
    pub conjugator: Permutation,
    /// Block size of the system `c` was drawn to preserve.
    pub preserved_block_size: usize,
    pub ambient_order: u128,
    pub outcome: TowerOutcome,
    /// Found, verified normal and full, and in the allowed pattern set.
    pub accepted: bool,
}

/// Tower searches for `R` the left-regular `Dic₃` and `T = Rᶜ`, with `c`
/// drawn from the stabilizers of `R`'s block systems with blocks of size
/// 2, 3 or 4. Draws giving `|⟨R, T⟩|` above the cap are skipped.
pub fn tower_samples(seed: u64, count: usize, cap: u128) -> Result<(Vec<TowerSample>, usize)> {
    let r = regular_representation(&GroupSpec::Dicyclic { m: 3 }, Side::Left)?.group;
    let systems: Vec<BlockSystem> = all_block_systems(&r)?
        .into_iter()
        .filter(|s| (2..=4).contains(&s.block_size()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut skipped = 0;
    while out.len() < count {
        if skipped > 50 * count {
            return Err(Error::Precondition("too many draws above the cap".into()));
        }
        let sys = &systems[rng.gen_range(0..systems.len())];
        let c = sample_preserving(sys, &mut rng);
        let t = r.conjugate(&c)?;
        let ambient = r.join(&t)?;
        if ambient.order() > cap {
            skipped += 1;
            continue;
        }
        let outcome = block_tower_search(&r, &t, cap)?;
        let accepted = match outcome.found() {
            Some(res) => {
                let h = r.join(&t.conjugate(&res.conjugator)?)?;
                let rep = verify_tower(&h, &res.tower)?;
                rep.normal
                    && rep.full
                    && ambient.contains(&res.conjugator)
                    && matches!(res.exceptional_case, None | Some(ExceptionalCase::DicyclicFourThree))
                    && (res.exceptional_case.is_some() || res.m as u32 == res.omega)
            }
            None => false,
        };
        out.push(TowerSample {
            conjugator: c,
            preserved_block_size: sys.block_size(),
            ambient_order: ambient.order(),
            outcome,
            accepted,
        });
    }
    Ok((out, skipped))
}

fn tower_dic3(opts: &ReproOptions) -> Result<Outcome> {
    let (samples, skipped) = tower_samples(opts.seed, opts.samples, opts.cap)?;
    let rows: Vec<Value> = samples
        .iter()
        .map(|s| {
            let found = s.outcome.found();
            json!({
                "preserved_block_size": s.preserved_block_size,
                "ambient_order": s.ambient_order as u64,
                "ratios": found.map(|f| f.ratios.clone()),
                "exceptional_case": found.and_then(|f| f.exceptional_case),
                "method": found.map(|f| f.method.clone()),
                "accepted": s.accepted,
            })
        })
        .collect();
    let exceptions = samples
        .iter()
        .filter(|s| s.outcome.found().is_some_and(|f| f.exceptional_case.is_some()))
        .count();
    let pass = samples.iter().all(|s| s.accepted);
    Ok((
        json!({ "seed": opts.seed, "samples": opts.samples, "cap": opts.cap as u64 }),
        json!({ "skipped_above_cap": skipped, "exceptional": exceptions, "runs": rows }),
        pass,
    ))
}

/// Ambient groups of degree at most 8 and the regular types looked for.
pub fn regular_corpus() -> Result<Vec<(String, PermGroup, Vec<GroupSpec>)>> {
    let four = vec![spec("cyclic(4)"), spec("elementary_abelian_2(2)")];
    let six = vec![spec("cyclic(6)"), spec("dihedral(3)")];
    let eight = vec![
        spec("cyclic(8)"),
        spec("direct_product(cyclic(2),cyclic(4))"),
        spec("elementary_abelian_2(3)"),
        spec("dihedral(4)"),
        spec("q8"),
    ];
    let cyc4 = |c: &[&[usize]]| Permutation::from_cycles(4, c);
    // affine maps of F₂³ with points labelled by their bit patterns
    let affine = |f: &dyn Fn(usize) -> usize| Permutation::from_images((0..8).map(f).collect());
    let agl32 = PermGroup::new(
        8,
        vec![
            affine(&|x| x ^ 1)?,
            affine(&|x| ((x << 1) | (x >> 2)) & 7)?,
            affine(&|x| x ^ ((x & 1) << 1))?,
        ],
    )?;
    let agl18 = PermGroup::new(8, vec![affine(&|x| x ^ 1)?, affine(&|x| {
        // multiplication by a generator of F₈ˣ, modulo x³ + x + 1
        let y = x << 1;
        if y & 8 != 0 { (y ^ 0b1011) & 7 } else { y }
    })?])?;
    Ok(vec![
        ("S4 natural".into(), PermGroup::symmetric(4), four.clone()),
        ("A4 natural".into(), PermGroup::alternating(4), four.clone()),
        (
            "D8 natural".into(),
            PermGroup::new(4, vec![cyc4(&[&[0, 1, 2, 3]])?, cyc4(&[&[1, 3]])?])?,
            four,
        ),
        ("S5 natural".into(), PermGroup::symmetric(5), vec![spec("cyclic(5)")]),
        ("AGL(1,5)".into(), frobenius_natural(5, 4)?, vec![spec("cyclic(5)")]),
        ("inner holomorph of dihedral(3)".into(), inner_holomorph(&spec("dihedral(3)"))?, six.clone()),
        ("S6 natural".into(), PermGroup::symmetric(6), six),
        ("inner holomorph of q8".into(), inner_holomorph(&spec("q8"))?, eight.clone()),
        ("inner holomorph of dihedral(4)".into(), inner_holomorph(&spec("dihedral(4)"))?, eight.clone()),
        ("AGL(1,8)".into(), agl18, eight.clone()),
        ("AGL(3,2)".into(), agl32, eight),
    ])
}

fn regular_subgroups_oracle(opts: &ReproOptions) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (name, a, specs) in regular_corpus()? {
        let brute = oracle::regular_subgroups(&a, opts.cap)?;
        for s in specs {
            let mut expected = Vec::new();
            for h in &brute {
                if isomorphic_to_spec(h, &s, opts.cap)? {
                    expected.push(h.clone());
                }
            }
            let classes = oracle::conjugacy_classes_of(&a, &expected, opts.cap)?;
            let found = all_regular_subgroups(&a, &s, opts.cap)?;
            let reps = regular_subgroups(&a, &s, opts.cap)?;
            let same_set = found.len() == expected.len() && found.iter().all(|h| expected.contains(h));
            // one representative from each oracle class
            let mut hit = vec![0usize; classes.len()];
            for r in &reps {
                if let Some(c) = classes.iter().position(|c| c.iter().any(|&i| expected[i] == *r)) {
                    hit[c] += 1;
                }
            }
            let agree = same_set && hit.iter().all(|&h| h == 1) && reps.len() == classes.len();
            pass &= agree;
            rows.push(json!({
                "ambient": name,
                "ambient_order": a.order() as u64,
                "spec": s.to_string(),
                "subgroups": found.len(),
                "oracle_subgroups": expected.len(),
                "classes": reps.len(),
                "oracle_classes": classes.len(),
                "agree": agree,
            }));
        }
    }
    Ok((json!({ "max_degree": 8 }), json!({ "cases": rows }), pass))
}

/// Groups checked for closure of `𝓡` under block restrictions and
/// quotients; non-members are listed too and reported as such.
pub fn family_corpus() -> Vec<GroupSpec> {
    [
        "cyclic(1)",
        "cyclic(2)",
        "cyclic(3)",
        "cyclic(6)",
        "cyclic(15)",
        "cyclic(30)",
        "elementary_abelian_2(3)",
        "elementary_abelian_2(4)",
        "z4",
        "z8",
        "q8",
        "dihedral(3)",
        "dihedral(5)",
        "dihedral(15)",
        "dicyclic(3)",
        "dicyclic(5)",
        "zn_semidirect_y(3,8,-1)",
        "zn_semidirect_y(15,4,4)",
        "zn_semidirect_y(15,2,11)",
        "direct_product(cyclic(3),q8)",
        "direct_product(cyclic(5),elementary_abelian_2(2))",
        "direct_product(cyclic(3),z8)",
        "direct_product(cyclic(15),elementary_abelian_2(3))",
        "frobenius(5,4)",
        "frobenius(7,3)",
        "dihedral(4)",
        "cyclic(9)",
    ]
    .into_iter()
    .map(spec)
    .collect()
}

fn family_r_closure(opts: &ReproOptions) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for s in family_corpus() {
        let m = in_family_r(&s)?;
        if !m.member {
            rows.push(json!({ "spec": s.to_string(), "member": false }));
            continue;
        }
        let r = regular_representation(&s, Side::Left)?.group;
        let mut checked = 0;
        let mut escapes = Vec::new();
        for sys in all_block_systems(&r)? {
            let block = &sys.blocks()[0];
            let restriction = block_restriction(&r, block)?;
            let quotient = action_on_blocks(&r, &sys)?.image().clone();
            for (what, g) in [("restriction", restriction), ("quotient", quotient)] {
                checked += 1;
                if !in_family_r_group(&g, opts.cap)?.member {
                    escapes.push(json!({ "block_size": sys.block_size(), "kind": what }));
                }
            }
        }
        pass &= escapes.is_empty();
        rows.push(json!({
            "spec": s.to_string(),
            "member": true,
            "case": m.case,
            "checked": checked,
            "escapes": escapes,
        }));
    }
    Ok((json!({ "corpus_size": rows.len() }), json!({ "groups": rows }), pass))
}

/// The bundled `M₁₂` generators.
pub fn m12() -> Result<PermGroup> {
    serde_json::from_str(M12_FIXTURE).map_err(|e| Error::InvalidSpec(e.to_string()))
}

fn m12_semiregular(opts: &ReproOptions) -> Result<Outcome> {
    let g = match &opts.m12 {
        Some(g) => g.clone(),
        None => m12()?,
    };
    let r = semiregular_classes(&g, 3, opts.cap)?;
    let pass = g.order() == 95040 && r.classes == 1 && r.cycle_types == vec![vec![3, 3, 3, 3]];
    Ok((
        json!({ "group": "M12 fixture", "p": 3 }),
        json!({ "order": g.order() as u64, "classes": r }),
        pass,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_claim() {
        assert!(reproduce("nope", &ReproOptions::default()).is_err());
    }

    #[test]
    fn fixture_parses() {
        assert_eq!(m12().unwrap().order(), 95040);
    }

    #[test]
    fn sampler_preserves() {
        let sys = BlockSystem::new(vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(sys.is_invariant_under(&sample_preserving(&sys, &mut rng)));
        }
    }

    #[test]
    fn quick_claims_pass() {
        for c in ["zsigmondy-table", "blocks-oracle", "m12-semiregular"] {
            assert!(reproduce(c, &ReproOptions::default()).unwrap().pass, "{c}");
        }
    }
}
