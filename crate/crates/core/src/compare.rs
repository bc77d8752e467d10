//! Comparing two regular families: one is always an initial segment of the
//! other.

use serde::Serialize;

use crate::choice::ChoiceFunction;
use crate::error::{Error, Result, Side};
use crate::regular::verify_regular;
use crate::sets::{Subset, SubsetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    Equal,
    LeftIsInitialSegmentOfRight,
    RightIsInitialSegmentOfLeft,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparabilityVerdict {
    pub relation: Relation,
    pub core: SubsetFamily,
}

/// Diagnostic for two regular families whose agreement core equals neither.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremViolation {
    pub left: SubsetFamily,
    pub right: SubsetFamily,
    pub core: SubsetFamily,
    /// Least member of `left ∖ core`.
    pub r1: Option<Subset>,
    /// Least member of `right ∖ core`.
    pub r2: Option<Subset>,
}

impl std::fmt::Display for TheoremViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |s: &Option<Subset>| s.as_ref().map_or("-".to_string(), |s| s.to_string());
        write!(
            f,
            "left {} right {} core {} r1 {} r2 {}",
            self.left,
            self.right,
            self.core,
            show(&self.r1),
            show(&self.r2)
        )
    }
}

/// Members of `p1 ∩ p2` whose strict lower sets in `p1` and `p2` coincide.
pub fn agreement_core(p1: &SubsetFamily, p2: &SubsetFamily) -> Result<SubsetFamily> {
    p1.ground().ensure_same(p2.ground())?;
    let lower = |fam: &SubsetFamily, p: u64| -> Vec<u64> {
        fam.masks()
            .iter()
            .copied()
            .filter(|&q| q & !p == 0 && q != p)
            .collect()
    };
    let core: Vec<u64> = p1
        .masks()
        .iter()
        .copied()
        .filter(|&p| p2.contains_mask(p) && lower(p1, p) == lower(p2, p))
        .collect();
    SubsetFamily::from_masks(p1.ground(), core)
}

/// `left ⊆ right` and no member of `right ∖ left` lies below a member of `left`.
pub fn is_initial_segment(left: &SubsetFamily, right: &SubsetFamily) -> Result<bool> {
    if !left.is_subfamily_of(right)? {
        return Ok(false);
    }
    let rest = right.difference(left)?;
    Ok(rest
        .masks()
        .iter()
        .all(|&r| left.masks().iter().all(|&l| !(r & !l == 0 && r != l))))
}

/// Classifies two regular families by their agreement core.
pub fn compare_regular(
    p1: &SubsetFamily,
    p2: &SubsetFamily,
    phi: &ChoiceFunction,
) -> Result<ComparabilityVerdict> {
    for (side, fam) in [(Side::Left, p1), (Side::Right, p2)] {
        let report = verify_regular(fam, phi)?;
        if !report.overall {
            return Err(Error::NotRegular { side, report: Box::new(report) });
        }
    }
    let core = agreement_core(p1, p2)?;
    let relation = match (core == *p1, core == *p2) {
        (true, true) => Relation::Equal,
        (true, false) => Relation::LeftIsInitialSegmentOfRight,
        (false, true) => Relation::RightIsInitialSegmentOfLeft,
        (false, false) => {
            let least = |fam: &SubsetFamily| -> Result<Option<Subset>> {
                Ok(fam.difference(&core)?.get(0))
            };
            return Err(Error::TheoremViolation(Box::new(TheoremViolation {
                r1: least(p1)?,
                r2: least(p2)?,
                left: p1.clone(),
                right: p2.clone(),
                core,
            })));
        }
    };
    Ok(ComparabilityVerdict { relation, core })
}
