//! Ground sets, subsets as bitmasks, and canonically ordered families of
//! subsets.
//!
//! A [`Subset`] is a 64-bit mask over the atoms of its [`GroundSet`]; bit `i`
//! set means atom `i` is present. A [`SubsetFamily`] stores distinct masks in
//! canonical order: ascending cardinality, ties broken by ascending mask.
//! On a chain this is exactly the inclusion order.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum number of atoms a ground set can hold.
pub const CAPACITY: usize = 64;

#[derive(Debug)]
struct GroundInner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

/// The finite universe being well ordered. Cheap to clone.
///
/// Two ground sets are the same set when they declare the same labels in the
/// same order.
#[derive(Clone)]
pub struct GroundSet(Arc<GroundInner>);

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > CAPACITY {
            return Err(Error::CapacityExceeded { size: labels.len() });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel(i));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(GroundSet(Arc::new(GroundInner { labels, index })))
    }

    /// Ground set `{a0, a1, ..}` of `n` generated labels.
    pub fn numbered(n: usize) -> Result<Self> {
        GroundSet::new((0..n).map(|i| format!("a{i}")))
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, atom: usize) -> &str {
        &self.0.labels[atom]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.index.get(label).copied()
    }

    /// Mask with one bit per atom.
    pub fn full_mask(&self) -> u64 {
        mask_width(self.len())
    }

    pub fn empty_subset(&self) -> Subset {
        Subset { ground: self.clone(), mask: 0 }
    }

    pub fn full_subset(&self) -> Subset {
        Subset { ground: self.clone(), mask: self.full_mask() }
    }

    pub fn subset(&self, mask: u64) -> Result<Subset> {
        if mask & !self.full_mask() != 0 {
            return Err(Error::MaskOutOfRange { mask, size: self.len() });
        }
        Ok(Subset { ground: self.clone(), mask })
    }

    pub fn singleton(&self, atom: usize) -> Result<Subset> {
        self.check_atom(atom)?;
        Ok(Subset { ground: self.clone(), mask: 1 << atom })
    }

    /// Subset named by atom labels, in any order.
    pub fn subset_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        let mut mask = 0u64;
        for label in labels {
            let label = label.as_ref();
            let i = self
                .index_of(label)
                .ok_or_else(|| Error::UnknownAtom(label.to_string()))?;
            mask |= 1 << i;
        }
        Ok(Subset { ground: self.clone(), mask })
    }

    pub fn check_atom(&self, atom: usize) -> Result<()> {
        if atom >= self.len() {
            return Err(Error::AtomOutOfRange { index: atom, size: self.len() });
        }
        Ok(())
    }

    pub(crate) fn same_as(&self, other: &GroundSet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }

    pub(crate) fn ensure_same(&self, other: &GroundSet) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GroundMismatch)
        }
    }

    /// Textual form of a raw mask, e.g. `{a,b}`.
    pub fn format_mask(&self, mask: u64) -> String {
        let mut out = String::from("{");
        for (k, atom) in atoms_of(mask).enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(self.label(atom));
        }
        out.push('}');
        out
    }
}

impl PartialEq for GroundSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for GroundSet {}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("GroundSet").field(&self.0.labels).finish()
    }
}

impl Serialize for GroundSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.labels.serialize(serializer)
    }
}

/// Mask with the low `n` bits set.
pub fn mask_width(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Atom indices present in `mask`, ascending.
pub fn atoms_of(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

/// Sort key of the canonical family order.
pub fn canonical_key(mask: u64) -> (u32, u64) {
    (mask.count_ones(), mask)
}

/// One element of the powerset of a ground set.
#[derive(Clone)]
pub struct Subset {
    ground: GroundSet,
    mask: u64,
}

impl Subset {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == self.ground.full_mask()
    }

    pub fn contains(&self, atom: usize) -> bool {
        atom < 64 && self.mask & (1 << atom) != 0
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> {
        atoms_of(self.mask)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.atoms().map(|i| self.ground.label(i)).collect()
    }

    /// The atoms of the ground set not in `self`.
    pub fn complement(&self) -> Subset {
        Subset {
            ground: self.ground.clone(),
            mask: !self.mask & self.ground.full_mask(),
        }
    }

    pub fn with_atom(&self, atom: usize) -> Result<Subset> {
        self.ground.check_atom(atom)?;
        Ok(Subset { ground: self.ground.clone(), mask: self.mask | (1 << atom) })
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.ground.ensure_same(&other.ground)?;
        Ok(Subset { ground: self.ground.clone(), mask: self.mask | other.mask })
    }

    pub fn intersection(&self, other: &Subset) -> Result<Subset> {
        self.ground.ensure_same(&other.ground)?;
        Ok(Subset { ground: self.ground.clone(), mask: self.mask & other.mask })
    }

    pub fn is_subset_of(&self, other: &Subset) -> Result<bool> {
        self.ground.ensure_same(&other.ground)?;
        Ok(self.mask & !other.mask == 0)
    }

    /// `self ⊂ other`: contained and not equal.
    pub fn is_strict_subset(&self, other: &Subset) -> Result<bool> {
        Ok(self.is_subset_of(other)? && self.mask != other.mask)
    }
}

impl PartialEq for Subset {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask && self.ground.same_as(&other.ground)
    }
}

impl Eq for Subset {}

impl std::hash::Hash for Subset {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mask.hash(state);
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ground.format_mask(self.mask))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset({self})")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A finite set of distinct subsets of one ground set, in canonical order.
#[derive(Clone)]
pub struct SubsetFamily {
    ground: GroundSet,
    members: Vec<u64>,
}

impl SubsetFamily {
    pub fn empty(ground: &GroundSet) -> Self {
        SubsetFamily { ground: ground.clone(), members: Vec::new() }
    }

    pub fn new<I>(ground: &GroundSet, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = Subset>,
    {
        let mut masks = Vec::new();
        for s in members {
            ground.ensure_same(&s.ground)?;
            masks.push(s.mask);
        }
        Ok(Self::from_masks_unchecked(ground, masks))
    }

    pub fn from_masks<I>(ground: &GroundSet, masks: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        let full = ground.full_mask();
        let masks: Vec<u64> = masks.into_iter().collect();
        if let Some(&bad) = masks.iter().find(|&&m| m & !full != 0) {
            return Err(Error::MaskOutOfRange { mask: bad, size: ground.len() });
        }
        Ok(Self::from_masks_unchecked(ground, masks))
    }

    /// Family from label lists, e.g. `&[&[], &["a"], &["a", "b"]]`.
    pub fn from_labels<S: AsRef<str>>(ground: &GroundSet, members: &[&[S]]) -> Result<Self> {
        let subsets = members
            .iter()
            .map(|labels| ground.subset_of_labels(labels))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ground, subsets)
    }

    pub(crate) fn from_masks_unchecked(ground: &GroundSet, mut masks: Vec<u64>) -> Self {
        masks.sort_unstable_by_key(|&m| canonical_key(m));
        masks.dedup();
        SubsetFamily { ground: ground.clone(), members: masks }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member masks in canonical order.
    pub fn masks(&self) -> &[u64] {
        &self.members
    }

    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        self.members
            .iter()
            .map(|&mask| Subset { ground: self.ground.clone(), mask })
    }

    pub fn get(&self, i: usize) -> Option<Subset> {
        self.members
            .get(i)
            .map(|&mask| Subset { ground: self.ground.clone(), mask })
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.ground.same_as(&s.ground) && self.contains_mask(s.mask)
    }

    pub(crate) fn contains_mask(&self, mask: u64) -> bool {
        self.members
            .binary_search_by_key(&canonical_key(mask), |&m| canonical_key(m))
            .is_ok()
    }

    pub fn with_member(&self, s: &Subset) -> Result<Self> {
        self.ground.ensure_same(&s.ground)?;
        let mut masks = self.members.clone();
        masks.push(s.mask);
        Ok(Self::from_masks_unchecked(&self.ground, masks))
    }

    /// Member-wise union of two families.
    pub fn merge(&self, other: &SubsetFamily) -> Result<Self> {
        self.ground.ensure_same(&other.ground)?;
        let mut masks = self.members.clone();
        masks.extend_from_slice(&other.members);
        Ok(Self::from_masks_unchecked(&self.ground, masks))
    }

    /// Members of `self` that are not members of `other`.
    pub fn difference(&self, other: &SubsetFamily) -> Result<Self> {
        self.ground.ensure_same(&other.ground)?;
        let masks = self
            .members
            .iter()
            .copied()
            .filter(|&m| !other.contains_mask(m))
            .collect();
        Ok(SubsetFamily { ground: self.ground.clone(), members: masks })
    }

    /// Every member of `self` is a member of `other`.
    pub fn is_subfamily_of(&self, other: &SubsetFamily) -> Result<bool> {
        self.ground.ensure_same(&other.ground)?;
        Ok(self.members.iter().all(|&m| other.contains_mask(m)))
    }
}

impl PartialEq for SubsetFamily {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.ground.same_as(&other.ground)
    }
}

impl Eq for SubsetFamily {}

impl fmt::Display for SubsetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, &m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(&self.ground.format_mask(m))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for SubsetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetFamily({self})")
    }
}

impl Serialize for SubsetFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.members.iter().map(|&m| self.ground.format_mask(m)))
    }
}

/// `∪F`; the empty family has union `∅`.
pub fn family_union(family: &SubsetFamily) -> Subset {
    let mask = family.members.iter().fold(0, |acc, &m| acc | m);
    Subset { ground: family.ground.clone(), mask }
}

/// `∩F` for a nonempty family.
pub fn family_intersection(family: &SubsetFamily) -> Result<Subset> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mask = family.members.iter().fold(u64::MAX, |acc, &m| acc & m);
    Ok(Subset { ground: family.ground.clone(), mask })
}

/// `∪{q ∈ F : q ⊂ p}`, where `p` need not be a member of `F`.
pub fn strict_lower_union(family: &SubsetFamily, p: &Subset) -> Result<Subset> {
    family.ground.ensure_same(&p.ground)?;
    Ok(Subset {
        ground: family.ground.clone(),
        mask: strict_lower_union_mask(&family.members, p.mask),
    })
}

pub(crate) fn strict_lower_union_mask(members: &[u64], p: u64) -> u64 {
    members
        .iter()
        .filter(|&&q| q & !p == 0 && q != p)
        .fold(0, |acc, &q| acc | q)
}
