//! Test-only helpers: a set-of-sets reference implementation of the
//! regularity conditions, independent of the bitmask code paths.

#![allow(dead_code)]

use std::collections::BTreeSet;

use wellorder_core::rng::SplitMix64;
use wellorder_core::{ChoiceFunction, GroundSet};

pub type Set = BTreeSet<usize>;

pub fn to_set(mask: u64) -> Set {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn to_mask(set: &Set) -> u64 {
    set.iter().fold(0, |acc, &i| acc | (1 << i))
}

/// A total, membership-respecting table choosing a random member of each subset.
pub fn random_table(ground: &GroundSet, seed: u64) -> ChoiceFunction {
    let mut rng = SplitMix64::new(seed);
    let entries = (1..=ground.full_mask()).map(|mask| {
        let members: Vec<usize> = to_set(mask).into_iter().collect();
        let pick = members[rng.next_below(members.len() as u64) as usize];
        (ground.subset(mask).unwrap(), pick)
    });
    ChoiceFunction::table(ground, entries).unwrap()
}

/// The choice kinds swept by the exhaustive tests.
pub fn choice_kinds(ground: &GroundSet) -> Vec<ChoiceFunction> {
    let mut out = vec![ChoiceFunction::min(ground)];
    out.extend((1..=5).map(|s| ChoiceFunction::seeded(ground, s)));
    out.extend((100..105).map(|s| random_table(ground, s)));
    out
}

/// Straight transcription of the four conditions over sets of sets.
pub fn naive_is_regular(n: usize, family: &[Set], phi: &ChoiceFunction) -> bool {
    let ground = phi.ground();
    let all: Set = (0..n).collect();
    if !family.iter().any(|p| p.is_empty()) {
        return false;
    }
    for p in family {
        for q in family {
            if !p.is_subset(q) && !q.is_subset(p) {
                return false;
            }
        }
    }
    for p in family.iter().filter(|p| !p.is_empty()) {
        let p1: Set = family
            .iter()
            .filter(|q| q.is_subset(p) && *q != p)
            .flat_map(|q| q.iter().copied())
            .collect();
        let rest: Set = all.difference(&p1).copied().collect();
        if rest.is_empty() {
            return false;
        }
        let a = phi.choose(&ground.subset(to_mask(&rest)).unwrap()).unwrap();
        let mut next = p1.clone();
        next.insert(a);
        if &next != p {
            return false;
        }
    }
    let k = family.len();
    for sel in 1u64..(1u64 << k) {
        let gamma: Vec<&Set> = (0..k).filter(|i| sel >> i & 1 == 1).map(|i| &family[i]).collect();
        if !gamma.iter().any(|m| gamma.iter().all(|x| m.is_subset(x))) {
            return false;
        }
    }
    true
}

/// Every regular family over `n` atoms, found by the reference check.
pub fn naive_regular_families(n: usize, phi: &ChoiceFunction) -> BTreeSet<BTreeSet<Set>> {
    let powerset: Vec<Set> = (0..1u64 << n).map(to_set).collect();
    let mut out = BTreeSet::new();
    for candidate in 0u64..(1u64 << powerset.len()) {
        let family: Vec<Set> = (0..powerset.len())
            .filter(|i| candidate >> i & 1 == 1)
            .map(|i| powerset[i].clone())
            .collect();
        if naive_is_regular(n, &family, phi) {
            out.insert(family.into_iter().collect());
        }
    }
    out
}
