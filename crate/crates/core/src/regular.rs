//! Regular families and the canonical chain.
//!
//! A family `P` of subsets is regular when
//! 1. it is linearly ordered by inclusion,
//! 2. every nonempty subfamily has an inclusion-least member (equal to its
//!    intersection),
//! 3. it contains `∅`,
//! 4. every nonempty member `p` equals `p₁ ∪ {α(p₁)}` where `p₁` is the union
//!    of the members strictly below `p`.
//!
//! The canonical chain `∅, ∅+1, ∅+1+1, …, A` with `p+1 = p ∪ {α(p)}` is
//! regular, and so is each of its prefixes.

use serde::Serialize;

use crate::choice::ChoiceFunction;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::sets::{canonical_key, family_intersection, strict_lower_union_mask, GroundSet, Subset, SubsetFamily};

/// Families up to this size get every nonempty subfamily checked for a least
/// member; larger ones are sampled.
pub const EXHAUSTIVE_SUBFAMILY_LIMIT: usize = 16;
/// Random subfamilies drawn when a family is too large for the exhaustive sweep.
pub const SAMPLED_SUBFAMILIES: usize = 1000;
/// Seed of the random subfamily sample.
pub const SUBFAMILY_SAMPLE_SEED: u64 = 0;

/// One of the four regularity conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Linear,
    WellOrdered,
    ContainsEmpty,
    Successor,
}

impl Condition {
    pub fn number(self) -> u8 {
        match self {
            Condition::Linear => 1,
            Condition::WellOrdered => 2,
            Condition::ContainsEmpty => 3,
            Condition::Successor => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearityCheck {
    pub pass: bool,
    /// An incomparable pair of members.
    pub witness: Option<(Subset, Subset)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellOrderingCheck {
    pub pass: bool,
    pub mode: SweepMode,
    pub subfamilies_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_seed: Option<u64>,
    /// A nonempty subfamily without a least member.
    pub witness: Option<SubsetFamily>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmptyMemberCheck {
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuccessorWitness {
    pub p: Subset,
    pub p1: Subset,
    /// `p₁ ∪ {α(p₁)}`; absent when `p₁ = p`, where no atom can be added.
    pub expected: Option<Subset>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuccessorCheck {
    pub pass: bool,
    pub witness: Option<SuccessorWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub cond1: LinearityCheck,
    pub cond2: WellOrderingCheck,
    pub cond3: EmptyMemberCheck,
    pub cond4: SuccessorCheck,
    pub overall: bool,
}

impl RegularityReport {
    pub fn failed_conditions(&self) -> Vec<Condition> {
        let mut out = Vec::new();
        if !self.cond1.pass {
            out.push(Condition::Linear);
        }
        if !self.cond2.pass {
            out.push(Condition::WellOrdered);
        }
        if !self.cond3.pass {
            out.push(Condition::ContainsEmpty);
        }
        if !self.cond4.pass {
            out.push(Condition::Successor);
        }
        out
    }
}

/// The canonical chain `p₀ = ∅ ⊂ p₁ ⊂ … ⊂ pₙ = A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    ground: GroundSet,
    stages: Vec<u64>,
}

impl Chain {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// Number of stages, `|A| + 1`.
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn stage(&self, k: usize) -> Subset {
        self.ground.subset(self.stages[k]).expect("stage within ground")
    }

    pub fn stages(&self) -> impl Iterator<Item = Subset> + '_ {
        (0..self.stages.len()).map(|k| self.stage(k))
    }

    pub fn stage_masks(&self) -> &[u64] {
        &self.stages
    }

    pub fn to_family(&self) -> SubsetFamily {
        SubsetFamily::from_masks_unchecked(&self.ground, self.stages.clone())
    }

    /// The first `k` stages as a family, `1 ≤ k ≤ len`.
    pub fn prefix(&self, k: usize) -> SubsetFamily {
        SubsetFamily::from_masks_unchecked(&self.ground, self.stages[..k].to_vec())
    }

    /// All nonempty prefixes, shortest first.
    pub fn prefixes(&self) -> impl Iterator<Item = SubsetFamily> + '_ {
        (1..=self.stages.len()).map(|k| self.prefix(k))
    }
}

/// `p + 1 = p ∪ {α(p)}`.
pub fn successor(phi: &ChoiceFunction, p: &Subset) -> Result<Subset> {
    let atom = phi.alpha(p)?;
    let next = p.with_atom(atom)?;
    if next.len() != p.len() + 1 {
        return Err(Error::Invariant(format!("alpha({p}) returned a member of {p}")));
    }
    Ok(next)
}

/// Iterates the successor from `∅` until the ground set is exhausted.
pub fn build_chain(ground: &GroundSet, phi: &ChoiceFunction) -> Result<Chain> {
    ground.ensure_same(phi.ground())?;
    let full = ground.full_mask();
    let mut stages = Vec::with_capacity(ground.len() + 1);
    let mut current = 0u64;
    stages.push(current);
    while current != full {
        if stages.len() > ground.len() {
            return Err(Error::Invariant(format!(
                "chain did not reach the ground set in {} steps",
                ground.len()
            )));
        }
        let atom = phi.alpha_mask(current)?;
        let next = current | (1 << atom);
        if next == current {
            return Err(Error::Invariant(format!(
                "alpha({}) returned a member",
                ground.format_mask(current)
            )));
        }
        current = next;
        stages.push(current);
    }
    Ok(Chain { ground: ground.clone(), stages })
}

/// Checks all four regularity conditions and reports a witness for each
/// failure.
pub fn verify_regular(family: &SubsetFamily, phi: &ChoiceFunction) -> Result<RegularityReport> {
    family.ground().ensure_same(phi.ground())?;
    let ground = family.ground();
    let masks = family.masks();
    let subset = |m: u64| ground.subset(m).expect("member within ground");

    let cond1 = match incomparable_pair(masks) {
        None => LinearityCheck { pass: true, witness: None },
        Some((x, y)) => LinearityCheck { pass: false, witness: Some((subset(x), subset(y))) },
    };

    let sweep = least_member_sweep(masks);
    let cond2 = WellOrderingCheck {
        pass: sweep.witness.is_none(),
        mode: sweep.mode,
        subfamilies_checked: sweep.checked,
        sample_seed: (sweep.mode == SweepMode::Sampled).then_some(SUBFAMILY_SAMPLE_SEED),
        witness: sweep
            .witness
            .map(|w| SubsetFamily::from_masks_unchecked(ground, w)),
    };

    let cond3 = EmptyMemberCheck { pass: contains_empty(masks) };

    let cond4 = match successor_failure(masks, phi)? {
        None => SuccessorCheck { pass: true, witness: None },
        Some(f) => SuccessorCheck {
            pass: false,
            witness: Some(SuccessorWitness {
                p: subset(f.p),
                p1: subset(f.p1),
                expected: f.expected.map(subset),
            }),
        },
    };

    let overall = cond1.pass && cond2.pass && cond3.pass && cond4.pass;
    Ok(RegularityReport { cond1, cond2, cond3, cond4, overall })
}

/// The inclusion-least member of a nonempty chain, computed as `∩γ` and
/// checked to be a member below every other member.
pub fn least_of_chain(gamma: &SubsetFamily) -> Result<Subset> {
    let least = family_intersection(gamma)?;
    if let Some((x, y)) = incomparable_pair(gamma.masks()) {
        let g = gamma.ground();
        return Err(Error::NotAChain { left: g.format_mask(x), right: g.format_mask(y) });
    }
    if !gamma.contains(&least) || gamma.masks().iter().any(|&m| least.mask() & !m != 0) {
        return Err(Error::Invariant(format!("intersection {least} is not the least member of {gamma}")));
    }
    Ok(least)
}

/// First failing condition in the order 3, 1, 4, 2 (cheapest first), or
/// `None` for a regular family. Used by the exhaustive enumeration.
pub(crate) fn first_failed_condition(masks: &[u64], phi: &ChoiceFunction) -> Result<Option<Condition>> {
    if !contains_empty(masks) {
        return Ok(Some(Condition::ContainsEmpty));
    }
    if incomparable_pair(masks).is_some() {
        return Ok(Some(Condition::Linear));
    }
    if successor_failure(masks, phi)?.is_some() {
        return Ok(Some(Condition::Successor));
    }
    if least_member_sweep(masks).witness.is_some() {
        return Ok(Some(Condition::WellOrdered));
    }
    Ok(None)
}

pub(crate) fn contains_empty(masks: &[u64]) -> bool {
    masks.first() == Some(&0)
}

pub(crate) fn incomparable_pair(masks: &[u64]) -> Option<(u64, u64)> {
    for (i, &x) in masks.iter().enumerate() {
        for &y in &masks[i + 1..] {
            if x & !y != 0 && y & !x != 0 {
                return Some((x, y));
            }
        }
    }
    None
}

pub(crate) struct SuccessorFailure {
    pub p: u64,
    pub p1: u64,
    pub expected: Option<u64>,
}

pub(crate) fn successor_failure(masks: &[u64], phi: &ChoiceFunction) -> Result<Option<SuccessorFailure>> {
    for &p in masks.iter().filter(|&&p| p != 0) {
        let p1 = strict_lower_union_mask(masks, p);
        if p1 == p {
            return Ok(Some(SuccessorFailure { p, p1, expected: None }));
        }
        // p₁ ⊊ p ⊆ A, so α(p₁) is defined.
        let expected = p1 | (1 << phi.alpha_mask(p1)?);
        if expected != p {
            return Ok(Some(SuccessorFailure { p, p1, expected: Some(expected) }));
        }
    }
    Ok(None)
}

struct SweepOutcome {
    mode: SweepMode,
    checked: u64,
    witness: Option<Vec<u64>>,
}

/// Looks for a nonempty subfamily without a least member. The least member,
/// when present, must also equal the subfamily's intersection.
fn least_member_sweep(masks: &[u64]) -> SweepOutcome {
    let n = masks.len();
    if n <= EXHAUSTIVE_SUBFAMILY_LIMIT {
        let mut checked = 0;
        for selection in 1u32..(1u32 << n) {
            checked += 1;
            let chosen = (0..n).filter(|&i| selection >> i & 1 == 1).map(|i| masks[i]);
            if !has_least_member(chosen.clone()) {
                return SweepOutcome {
                    mode: SweepMode::Exhaustive,
                    checked,
                    witness: Some(chosen.collect()),
                };
            }
        }
        return SweepOutcome { mode: SweepMode::Exhaustive, checked, witness: None };
    }

    let mut checked = 0;
    let fail = |sub: Vec<u64>, checked: u64| SweepOutcome {
        mode: SweepMode::Sampled,
        checked,
        witness: Some(sub),
    };
    for &m in masks {
        checked += 1;
        if !has_least_member(std::iter::once(m)) {
            return fail(vec![m], checked);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            checked += 1;
            if !has_least_member([masks[i], masks[j]].into_iter()) {
                return fail(vec![masks[i], masks[j]], checked);
            }
        }
    }
    let mut rng = SplitMix64::new(SUBFAMILY_SAMPLE_SEED);
    let mut drawn = 0;
    while drawn < SAMPLED_SUBFAMILIES {
        let mut sub = Vec::new();
        let mut bits = 0u64;
        for (i, &m) in masks.iter().enumerate() {
            if i % 64 == 0 {
                bits = rng.next_u64();
            }
            if bits >> (i % 64) & 1 == 1 {
                sub.push(m);
            }
        }
        if sub.is_empty() {
            continue;
        }
        drawn += 1;
        checked += 1;
        if !has_least_member(sub.iter().copied()) {
            return fail(sub, checked);
        }
    }
    SweepOutcome { mode: SweepMode::Sampled, checked, witness: None }
}

fn has_least_member<I: Iterator<Item = u64> + Clone>(members: I) -> bool {
    let Some(candidate) = members.clone().min_by_key(|&m| canonical_key(m)) else {
        return false;
    };
    let below_all = members.clone().all(|m| candidate & !m == 0);
    let intersection = members.fold(u64::MAX, |acc, m| acc & m);
    below_all && candidate == intersection
}
