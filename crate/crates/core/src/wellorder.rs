//! The well-order induced by `alpha` on the canonical chain.
//!
//! Atom `sequence[k]` is `α(p_k)` for chain stage `p_k`. Restricted to the
//! stages other than `A` itself (where `α` is undefined), `α` is a bijection
//! onto the ground set; [`check_injective`] and [`check_surjective`] verify
//! both halves on a concrete chain.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Serialize, Serializer};

use crate::choice::ChoiceFunction;
use crate::error::{Error, Result};
use crate::regular::{build_chain, least_of_chain};
use crate::rng::SplitMix64;
use crate::sets::{atoms_of, strict_lower_union, GroundSet, Subset, SubsetFamily};

/// Largest ground set whose subsets are all checked by [`verify_wellorder`].
pub const MAX_EXHAUSTIVE_ATOMS: usize = 16;

/// An enumeration of the ground set together with its rank map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellOrder {
    ground: GroundSet,
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl WellOrder {
    /// Builds an order from an enumeration, which must list every atom once.
    pub fn from_sequence(ground: &GroundSet, sequence: Vec<usize>) -> Result<Self> {
        let n = ground.len();
        let mut position = vec![usize::MAX; n];
        for (rank, &atom) in sequence.iter().enumerate() {
            ground.check_atom(atom)?;
            if position[atom] != usize::MAX {
                return Err(Error::Invariant(format!(
                    "atom `{}` enumerated twice",
                    ground.label(atom)
                )));
            }
            position[atom] = rank;
        }
        if let Some(missing) = position.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Invariant(format!(
                "atom `{}` never enumerated",
                ground.label(missing)
            )));
        }
        Ok(WellOrder { ground: ground.clone(), sequence, position })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn position(&self, atom: usize) -> usize {
        self.position[atom]
    }

    pub fn labels(&self) -> Vec<&str> {
        self.sequence.iter().map(|&a| self.ground.label(a)).collect()
    }

    /// The stage `α` is applied to when producing `sequence[k]`: the first `k`
    /// enumerated atoms.
    pub fn stage_before(&self, k: usize) -> Subset {
        let mask = self.sequence[..k].iter().fold(0u64, |acc, &a| acc | (1 << a));
        self.ground.subset(mask).expect("atoms within ground")
    }
}

impl Serialize for WellOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            sequence: Vec<&'a str>,
            stages: Vec<Vec<&'a str>>,
        }
        let stages = (0..self.sequence.len())
            .map(|k| {
                let mut labels: Vec<usize> = self.sequence[..k].to_vec();
                labels.sort_unstable();
                labels.into_iter().map(|a| self.ground.label(a)).collect()
            })
            .collect();
        Repr { sequence: self.labels(), stages }.serialize(serializer)
    }
}

/// Where atom `a` enters the chain: `r` is the least member containing `a`
/// and `r₁` the union of the members strictly below `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    #[serde(skip)]
    pub atom: usize,
    #[serde(rename = "atom")]
    pub label: String,
    pub r: Subset,
    pub r1: Subset,
    /// `r₁` is itself a member of the family (always true on a finite chain).
    pub r1_is_member: bool,
}

impl StageRecord {
    pub fn rank(&self) -> usize {
        self.r1.len()
    }
}

/// Locates the stage at which `atom` is added and checks `α(r₁) = atom`.
pub fn stage_of(q: &SubsetFamily, phi: &ChoiceFunction, atom: usize) -> Result<StageRecord> {
    let ground = q.ground();
    ground.ensure_same(phi.ground())?;
    ground.check_atom(atom)?;
    let label = ground.label(atom).to_string();

    let containing: Vec<u64> = q.masks().iter().copied().filter(|&m| m >> atom & 1 == 1).collect();
    if containing.is_empty() {
        return Err(Error::AtomNotCovered { atom: label });
    }
    let m_a = SubsetFamily::from_masks(ground, containing)?;
    let r = least_of_chain(&m_a)?;
    let r1 = strict_lower_union(q, &r)?;
    if r1 == r {
        return Err(Error::Invariant(format!("{r} is the union of the members below it")));
    }
    let got = phi.alpha(&r1)?;
    if got != atom || r1.contains(atom) || r.len() != r1.len() + 1 {
        return Err(Error::WitnessMismatch {
            atom: label,
            r1: r1.to_string(),
            got: ground.label(got).to_string(),
        });
    }
    let r1_is_member = q.contains(&r1);
    Ok(StageRecord { atom, label, r, r1, r1_is_member })
}

/// The enumeration of the ground set read off the canonical chain, cross-checked
/// against the ranks found by [`stage_of`].
pub fn induced_order(ground: &GroundSet, phi: &ChoiceFunction) -> Result<WellOrder> {
    let chain = build_chain(ground, phi)?;
    let sequence = chain
        .stage_masks()
        .iter()
        .take(ground.len())
        .map(|&p| phi.alpha_mask(p))
        .collect::<Result<Vec<_>>>()?;
    let order = WellOrder::from_sequence(ground, sequence)?;

    let q = chain.to_family();
    for atom in 0..ground.len() {
        let record = stage_of(&q, phi, atom)?;
        if record.rank() != order.position(atom) {
            return Err(Error::Invariant(format!(
                "atom `{}` has chain position {} but stage rank {}",
                ground.label(atom),
                order.position(atom),
                record.rank()
            )));
        }
    }
    Ok(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectivityStep {
    /// The two members are not nested.
    Incomparable,
    /// `α(q₁) ∉ q₂`.
    EarlierImageOutside,
    /// `α(q₂) ∈ q₂`.
    LaterImageInside,
    /// `α(q₁) = α(q₂)`.
    ImagesEqual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityFailure {
    pub q1: Subset,
    pub q2: Subset,
    pub step: InjectivityStep,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub pairs_checked: usize,
    pub images_distinct: bool,
    pub failures: Vec<InjectivityFailure>,
    pub pass: bool,
}

/// For members `q₁ ⊂ q₂` other than `A`: `α(q₁) ∈ q₂` and `α(q₂) ∉ q₂`, so
/// the images differ.
pub fn check_injective(q: &SubsetFamily, phi: &ChoiceFunction) -> Result<InjectivityReport> {
    q.ground().ensure_same(phi.ground())?;
    let members: Vec<Subset> = q.members().filter(|m| !m.is_full()).collect();
    let images = members.iter().map(|m| phi.alpha(m)).collect::<Result<Vec<_>>>()?;

    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            pairs_checked += 1;
            let (q1, q2) = (&members[i], &members[j]);
            let step = if !q1.is_strict_subset(q2)? {
                Some(InjectivityStep::Incomparable)
            } else if !q2.contains(images[i]) {
                Some(InjectivityStep::EarlierImageOutside)
            } else if q2.contains(images[j]) {
                Some(InjectivityStep::LaterImageInside)
            } else if images[i] == images[j] {
                Some(InjectivityStep::ImagesEqual)
            } else {
                None
            };
            if let Some(step) = step {
                failures.push(InjectivityFailure { q1: q1.clone(), q2: q2.clone(), step });
            }
        }
    }
    let images_distinct = images.iter().collect::<HashSet<_>>().len() == images.len();
    let pass = failures.is_empty() && images_distinct;
    Ok(InjectivityReport { pairs_checked, images_distinct, failures, pass })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomFailure {
    pub atom: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub atoms_total: usize,
    pub atoms_witnessed: usize,
    pub records: Vec<StageRecord>,
    pub failures: Vec<AtomFailure>,
    pub pass: bool,
}

/// Runs [`stage_of`] for every atom. Choice-function errors abort; every
/// other per-atom failure is collected.
pub fn check_surjective(q: &SubsetFamily, phi: &ChoiceFunction) -> Result<SurjectivityReport> {
    let ground = q.ground();
    ground.ensure_same(phi.ground())?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for atom in 0..ground.len() {
        match stage_of(q, phi, atom) {
            Ok(record) if !record.r1_is_member => failures.push(AtomFailure {
                atom: ground.label(atom).to_string(),
                error: format!("r1 = {} is not a member of the family", record.r1),
            }),
            Ok(record) => records.push(record),
            Err(e) if e.is_choice_error() => return Err(e),
            Err(e) => failures.push(AtomFailure {
                atom: ground.label(atom).to_string(),
                error: e.to_string(),
            }),
        }
    }
    Ok(SurjectivityReport {
        atoms_total: ground.len(),
        atoms_witnessed: records.len(),
        pass: failures.is_empty(),
        records,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetFailure {
    pub subset: Subset,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellOrderReport {
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_seed: Option<u64>,
    pub subsets_checked: u64,
    pub subsets_passed: u64,
    pub failures: Vec<SubsetFailure>,
    pub pass: bool,
}

/// Checks that nonempty subsets have a unique position-least member, equal
/// to the first member met when walking the enumeration.
pub fn verify_wellorder(order: &WellOrder, mode: VerifyMode) -> Result<WellOrderReport> {
    let ground = &order.ground;
    let full = ground.full_mask();
    let subsets: Box<dyn Iterator<Item = u64>> = match mode {
        VerifyMode::Exhaustive => {
            if ground.len() > MAX_EXHAUSTIVE_ATOMS {
                return Err(Error::GroundTooLarge { size: ground.len(), limit: MAX_EXHAUSTIVE_ATOMS });
            }
            Box::new(1..=full)
        }
        VerifyMode::Sampled { count, seed } => {
            let mut rng = SplitMix64::new(seed);
            let draws = if full == 0 { 0 } else { count };
            Box::new(
                std::iter::repeat_with(move || loop {
                    let m = rng.next_u64() & full;
                    if m != 0 {
                        break m;
                    }
                })
                .take(draws),
            )
        }
    };

    let mut checked = 0;
    let mut failures = Vec::new();
    for mask in subsets {
        checked += 1;
        if let Some(reason) = least_member_problem(order, mask) {
            failures.push(SubsetFailure { subset: ground.subset(mask)?, reason });
        }
    }
    let (mode_name, sample_seed) = match mode {
        VerifyMode::Exhaustive => ("exhaustive", None),
        VerifyMode::Sampled { seed, .. } => ("sampled", Some(seed)),
    };
    Ok(WellOrderReport {
        mode: mode_name,
        sample_seed,
        subsets_checked: checked,
        subsets_passed: checked - failures.len() as u64,
        pass: failures.is_empty(),
        failures,
    })
}

fn least_member_problem(order: &WellOrder, mask: u64) -> Option<String> {
    let Some(least_rank) = atoms_of(mask).map(|a| order.position[a]).min() else {
        return Some("no least member".into());
    };
    let at_least_rank: Vec<usize> = atoms_of(mask).filter(|&a| order.position[a] == least_rank).collect();
    if at_least_rank.len() != 1 {
        return Some(format!("{} members share the least position", at_least_rank.len()));
    }
    let least = at_least_rank[0];
    let earliest = order.sequence.iter().copied().find(|&a| mask >> a & 1 == 1);
    if earliest != Some(least) {
        return Some(format!(
            "position-least member `{}` is not the earliest enumerated",
            order.ground.label(least)
        ));
    }
    None
}

/// Compares two atoms by rank.
pub fn compare_atoms(order: &WellOrder, a: usize, b: usize) -> Result<Ordering> {
    order.ground.check_atom(a)?;
    order.ground.check_atom(b)?;
    Ok(order.position[a].cmp(&order.position[b]))
}

/// Compares two atoms by the stages that first contain them: `a ≤ b` iff
/// `stage(a) ⊆ stage(b)`. Agrees with [`compare_atoms`] on the canonical chain.
pub fn compare_atoms_by_stage(q: &SubsetFamily, phi: &ChoiceFunction, a: usize, b: usize) -> Result<Ordering> {
    let ra = stage_of(q, phi, a)?.r;
    let rb = stage_of(q, phi, b)?.r;
    if ra == rb {
        Ok(Ordering::Equal)
    } else if ra.is_strict_subset(&rb)? {
        Ok(Ordering::Less)
    } else if rb.is_strict_subset(&ra)? {
        Ok(Ordering::Greater)
    } else {
        Err(Error::NotAChain { left: ra.to_string(), right: rb.to_string() })
    }
}
