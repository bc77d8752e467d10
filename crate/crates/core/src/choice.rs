//! Explicit choice functions and the fresh-element operator `alpha`.
//!
//! A [`ChoiceFunction`] maps every nonempty subset `X` of its ground set to an
//! atom of `X`. `alpha(X)` applies it to the complement, so it always names
//! an atom outside `X`, and is undefined when `X` is the whole ground set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::splitmix64_finalizer;
use crate::sets::{atoms_of, GroundSet, Subset};

/// Largest ground set for which a table can be checked for totality.
pub const MAX_VALIDATED_TABLE_ATOMS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChoiceKind {
    /// Lowest ground-set index present.
    Min,
    /// `splitmix64_finalizer(seed ^ mask) mod |X|`-th member, ascending.
    Seeded { seed: u64 },
    /// Explicit map from subset mask to the chosen atom index.
    Table { entries: BTreeMap<u64, usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceFunction {
    ground: GroundSet,
    kind: ChoiceKind,
}

/// Problems found by [`ChoiceFunction::validate_table`]. Empty means the table
/// is total and respects membership.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TableValidation {
    pub missing: Vec<Subset>,
    pub violations: Vec<MembershipViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipViolation {
    pub subset: Subset,
    pub pick: String,
}

impl TableValidation {
    pub fn is_valid(&self) -> bool {
        self.missing.is_empty() && self.violations.is_empty()
    }
}

impl ChoiceFunction {
    pub fn min(ground: &GroundSet) -> Self {
        ChoiceFunction { ground: ground.clone(), kind: ChoiceKind::Min }
    }

    pub fn seeded(ground: &GroundSet, seed: u64) -> Self {
        ChoiceFunction { ground: ground.clone(), kind: ChoiceKind::Seeded { seed } }
    }

    /// A table-backed choice function. Entries are not checked for totality or
    /// membership here; lookups report problems lazily, and
    /// [`validate_table`](Self::validate_table) checks eagerly.
    pub fn table<I>(ground: &GroundSet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, usize)>,
    {
        let mut map = BTreeMap::new();
        for (subset, pick) in entries {
            ground.ensure_same(subset.ground())?;
            ground.check_atom(pick)?;
            if map.insert(subset.mask(), pick).is_some() {
                return Err(Error::DuplicateTableEntry { subset: subset.to_string() });
            }
        }
        Ok(ChoiceFunction { ground: ground.clone(), kind: ChoiceKind::Table { entries: map } })
    }

    /// Table that agrees with `self` on every nonempty subset.
    pub fn tabulate(&self) -> Result<Self> {
        self.check_enumerable()?;
        let entries = (1..=self.ground.full_mask())
            .map(|mask| Ok((self.ground.subset(mask)?, self.choose_mask(mask)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::table(&self.ground, entries)
    }

    /// The conjugate choice function `X ↦ perm(φ(perm⁻¹(X)))`, as a table.
    /// `perm[i]` is the image of atom `i`.
    pub fn conjugate(&self, perm: &[usize]) -> Result<Self> {
        self.check_enumerable()?;
        let n = self.ground.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &j) in perm.iter().enumerate() {
            if j >= n || inverse[j] != usize::MAX {
                return Err(Error::Invariant(format!("{perm:?} is not a permutation of 0..{n}")));
            }
            inverse[j] = i;
        }
        if perm.len() != n {
            return Err(Error::Invariant(format!("{perm:?} is not a permutation of 0..{n}")));
        }
        let mut entries = Vec::with_capacity(self.ground.full_mask() as usize);
        for mask in 1..=self.ground.full_mask() {
            let pulled = atoms_of(mask).fold(0u64, |acc, a| acc | (1 << inverse[a]));
            let pick = perm[self.choose_mask(pulled)?];
            entries.push((self.ground.subset(mask)?, pick));
        }
        Self::table(&self.ground, entries)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn kind(&self) -> &ChoiceKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ChoiceKind::Min => "min",
            ChoiceKind::Seeded { .. } => "seeded",
            ChoiceKind::Table { .. } => "table",
        }
    }

    /// `φ(X)`: an atom of the nonempty subset `X`.
    pub fn choose(&self, x: &Subset) -> Result<usize> {
        self.ground.ensure_same(x.ground())?;
        self.choose_mask(x.mask())
    }

    /// `α(X) = φ(A \ X)`: an atom outside `X`. Undefined at `X = A`.
    pub fn alpha(&self, x: &Subset) -> Result<usize> {
        self.ground.ensure_same(x.ground())?;
        self.alpha_mask(x.mask())
    }

    pub(crate) fn alpha_mask(&self, mask: u64) -> Result<usize> {
        let rest = !mask & self.ground.full_mask();
        if rest == 0 {
            return Err(Error::FullSet);
        }
        self.choose_mask(rest)
    }

    pub(crate) fn choose_mask(&self, mask: u64) -> Result<usize> {
        if mask == 0 {
            return Err(Error::EmptySubset);
        }
        match &self.kind {
            ChoiceKind::Min => Ok(mask.trailing_zeros() as usize),
            ChoiceKind::Seeded { seed } => {
                let h = splitmix64_finalizer(seed ^ mask);
                let k = (h % u64::from(mask.count_ones())) as usize;
                Ok(atoms_of(mask).nth(k).expect("k < popcount"))
            }
            ChoiceKind::Table { entries } => {
                let &pick = entries.get(&mask).ok_or_else(|| Error::MissingTableEntry {
                    subset: self.ground.format_mask(mask),
                })?;
                if mask & (1 << pick) == 0 {
                    return Err(Error::MembershipViolation {
                        subset: self.ground.format_mask(mask),
                        pick: self.ground.label(pick).to_string(),
                    });
                }
                Ok(pick)
            }
        }
    }

    /// Checks a table for totality over all nonempty subsets and membership
    /// of every entry. Min and seeded functions always validate.
    pub fn validate_table(&self) -> Result<TableValidation> {
        self.check_enumerable()?;
        let ChoiceKind::Table { entries } = &self.kind else {
            return Ok(TableValidation::default());
        };
        let mut report = TableValidation::default();
        for mask in 1..=self.ground.full_mask() {
            match entries.get(&mask) {
                None => report.missing.push(self.ground.subset(mask)?),
                Some(&pick) if mask & (1 << pick) == 0 => {
                    report.violations.push(MembershipViolation {
                        subset: self.ground.subset(mask)?,
                        pick: self.ground.label(pick).to_string(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(report)
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.ground.len() > MAX_VALIDATED_TABLE_ATOMS {
            return Err(Error::GroundTooLarge {
                size: self.ground.len(),
                limit: MAX_VALIDATED_TABLE_ATOMS,
            });
        }
        Ok(())
    }

    /// JSON-facing description of this choice function.
    pub fn to_spec(&self) -> ChoiceSpec {
        match &self.kind {
            ChoiceKind::Min => ChoiceSpec::Min {},
            ChoiceKind::Seeded { seed } => ChoiceSpec::Seeded { seed: *seed },
            ChoiceKind::Table { entries } => ChoiceSpec::Table {
                entries: entries
                    .iter()
                    .map(|(&mask, &pick)| TableEntry {
                        subset: atoms_of(mask).map(|a| self.ground.label(a).to_string()).collect(),
                        pick: self.ground.label(pick).to_string(),
                    })
                    .collect(),
            },
        }
    }
}

/// The JSON choice specification:
/// `{"kind":"min"}`, `{"kind":"seeded","seed":N}` or
/// `{"kind":"table","entries":[{"subset":["a","b"],"pick":"a"}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChoiceSpec {
    Min {},
    Seeded { seed: u64 },
    Table { entries: Vec<TableEntry> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub subset: Vec<String>,
    pub pick: String,
}

impl ChoiceSpec {
    /// Resolves labels against `ground`. Unknown labels and repeated subsets
    /// are errors; totality and membership are not checked here.
    pub fn resolve(&self, ground: &GroundSet) -> Result<ChoiceFunction> {
        match self {
            ChoiceSpec::Min {} => Ok(ChoiceFunction::min(ground)),
            ChoiceSpec::Seeded { seed } => Ok(ChoiceFunction::seeded(ground, *seed)),
            ChoiceSpec::Table { entries } => {
                let resolved = entries
                    .iter()
                    .map(|e| {
                        let subset = ground.subset_of_labels(&e.subset)?;
                        let pick = ground
                            .index_of(&e.pick)
                            .ok_or_else(|| Error::UnknownAtom(e.pick.clone()))?;
                        Ok((subset, pick))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ChoiceFunction::table(ground, resolved)
            }
        }
    }
}
