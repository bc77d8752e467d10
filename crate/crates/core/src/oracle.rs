//! Brute-force ground truth for small ground sets.
//!
//! Every family of subsets of `A` is a candidate: with the `2^|A|` subsets
//! listed in canonical order, candidate `c` contains subset `i` iff bit `i` of
//! `c` is set. Candidates are filtered by the regularity conditions, and `Q`
//! is taken literally as the member-wise union of every regular family. None
//! of this uses [`build_chain`](crate::regular::build_chain); agreement with
//! the chain is checked by the callers.

use rayon::prelude::*;
use serde::Serialize;

use crate::choice::ChoiceFunction;
use crate::error::{Error, Result, Side};
use crate::regular::{first_failed_condition, verify_regular, Chain, Condition, RegularityReport};
use crate::sets::{canonical_key, family_union, GroundSet, Subset, SubsetFamily};

/// Largest ground set the oracle enumerates (`2^16` candidate families).
pub const MAX_ORACLE_ATOMS: usize = 4;

/// Rejected candidates, keyed by the first condition they fail
/// (checked in the order 3, 1, 4, 2).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RejectionTally {
    pub cond1: u64,
    pub cond2: u64,
    pub cond3: u64,
    pub cond4: u64,
}

impl RejectionTally {
    pub fn total(&self) -> u64 {
        self.cond1 + self.cond2 + self.cond3 + self.cond4
    }

    fn record(&mut self, cond: Condition) {
        match cond {
            Condition::Linear => self.cond1 += 1,
            Condition::WellOrdered => self.cond2 += 1,
            Condition::ContainsEmpty => self.cond3 += 1,
            Condition::Successor => self.cond4 += 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRun {
    #[serde(skip)]
    pub ground: GroundSet,
    #[serde(skip)]
    pub phi: ChoiceFunction,
    pub candidate_count: u64,
    pub regular_family_count: usize,
    pub rejections: RejectionTally,
    pub regular_families: Vec<SubsetFamily>,
    pub q_union: SubsetFamily,
}

impl OracleRun {
    /// Enumerates and filters all `2^(2^|A|)` candidate families.
    pub fn execute(ground: &GroundSet, phi: &ChoiceFunction) -> Result<OracleRun> {
        ground.ensure_same(phi.ground())?;
        if ground.len() > MAX_ORACLE_ATOMS {
            return Err(Error::GroundTooLarge { size: ground.len(), limit: MAX_ORACLE_ATOMS });
        }
        let positions = powerset_in_canonical_order(ground);
        let candidate_count = 1u64 << positions.len();

        let outcomes = (0..candidate_count)
            .into_par_iter()
            .map(|candidate| {
                let masks = candidate_members(&positions, candidate);
                first_failed_condition(&masks, phi).map(|failed| (masks, failed))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut rejections = RejectionTally::default();
        let mut regular_families = Vec::new();
        for (masks, failed) in outcomes {
            match failed {
                Some(cond) => rejections.record(cond),
                None => {
                    let family = SubsetFamily::from_masks(ground, masks)?;
                    let report = verify_regular(&family, phi)?;
                    if !report.overall {
                        return Err(Error::Invariant(format!(
                            "staged filter accepted non-regular family {family}"
                        )));
                    }
                    regular_families.push(family);
                }
            }
        }
        regular_families.sort_by(family_order);

        let mut run = OracleRun {
            ground: ground.clone(),
            phi: phi.clone(),
            candidate_count,
            regular_family_count: regular_families.len(),
            rejections,
            regular_families,
            q_union: SubsetFamily::empty(ground),
        };
        run.q_union = union_of_all_regular(&run);
        Ok(run)
    }

    /// The regular families are exactly the nonempty prefixes of `chain`.
    pub fn matches_chain_prefixes(&self, chain: &Chain) -> bool {
        let prefixes: Vec<SubsetFamily> = chain.prefixes().collect();
        self.regular_families == prefixes
    }
}

/// The regular families over `ground` under `phi`, in canonical order.
pub fn enumerate_regular_families(ground: &GroundSet, phi: &ChoiceFunction) -> Result<Vec<SubsetFamily>> {
    Ok(OracleRun::execute(ground, phi)?.regular_families)
}

/// `Q`: every subset that is a member of some regular family.
pub fn union_of_all_regular(run: &OracleRun) -> SubsetFamily {
    let masks = run
        .regular_families
        .iter()
        .flat_map(|f| f.masks().iter().copied())
        .collect();
    SubsetFamily::from_masks_unchecked(&run.ground, masks)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MaximalityReport {
    /// `∪Q = A`: `α(∪Q)` is undefined, so `Q` cannot be extended.
    Maximal { top: Subset },
    /// `∪Q ≠ A`: `Q ∪ {Z ∪ {α(Z)}}` is a strictly larger family.
    NotMaximal {
        top: Subset,
        extended: SubsetFamily,
        extended_report: Box<RegularityReport>,
    },
}

impl MaximalityReport {
    pub fn is_maximal(&self) -> bool {
        matches!(self, MaximalityReport::Maximal { .. })
    }
}

/// Tries to extend a regular family by the successor of its union.
pub fn maximality_check(q: &SubsetFamily, phi: &ChoiceFunction) -> Result<MaximalityReport> {
    let report = verify_regular(q, phi)?;
    if !report.overall {
        return Err(Error::NotRegular { side: Side::Left, report: Box::new(report) });
    }
    let top = family_union(q);
    if top.is_full() {
        return Ok(MaximalityReport::Maximal { top });
    }
    let next = top.with_atom(phi.alpha(&top)?)?;
    let extended = q.with_member(&next)?;
    let extended_report = verify_regular(&extended, phi)?;
    Ok(MaximalityReport::NotMaximal { top, extended, extended_report: Box::new(extended_report) })
}

fn powerset_in_canonical_order(ground: &GroundSet) -> Vec<u64> {
    let mut all: Vec<u64> = (0..=ground.full_mask()).collect();
    all.sort_unstable_by_key(|&m| canonical_key(m));
    all
}

fn candidate_members(positions: &[u64], candidate: u64) -> Vec<u64> {
    positions
        .iter()
        .enumerate()
        .filter(|&(i, _)| candidate >> i & 1 == 1)
        .map(|(_, &m)| m)
        .collect()
}

/// Shorter families first, then member-wise canonical order.
fn family_order(a: &SubsetFamily, b: &SubsetFamily) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        let ka = a.masks().iter().map(|&m| canonical_key(m));
        let kb = b.masks().iter().map(|&m| canonical_key(m));
        ka.cmp(kb)
    })
}
