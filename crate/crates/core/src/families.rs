//! Families of proper subgroups and the cosets they induce.
//!
//! For a finite group every subgroup has finite index, so the finite-index
//! families coincide with the plain ones and are not modelled separately.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    AllProper,
    NormalProper,
    MaximalOf,
    Custom,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::AllProper => "all-proper",
            FamilyKind::NormalProper => "normal-proper",
            FamilyKind::MaximalOf => "maximal-of",
            FamilyKind::Custom => "custom",
        }
    }
}

/// A family of proper subgroups of one parent group.
#[derive(Debug, Clone)]
pub struct SubgroupFamily {
    parent: FiniteGroup,
    members: Vec<Subgroup>,
    kind: FamilyKind,
    intersection_closed: bool,
}

impl SubgroupFamily {
    /// Wraps `members`; fails if one of them is the whole group.
    ///
    /// `intersection_closed` is computed, not trusted.
    pub fn new(parent: &FiniteGroup, members: Vec<Subgroup>, kind: FamilyKind) -> Result<Self> {
        if members.iter().any(|h| h.order() == parent.order()) {
            return Err(Error::Invalid(
                "family members must be proper subgroups".into(),
            ));
        }
        let intersection_closed = members.iter().enumerate().all(|(i, a)| {
            members[i + 1..]
                .iter()
                .all(|b| members.contains(&a.intersection(b)))
        });
        Ok(SubgroupFamily {
            parent: parent.clone(),
            members,
            kind,
            intersection_closed,
        })
    }

    pub fn custom(parent: &FiniteGroup, members: Vec<Subgroup>) -> Result<Self> {
        Self::new(parent, members, FamilyKind::Custom)
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn intersection_closed(&self) -> bool {
        self.intersection_closed
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether `h` lies in some member.
    pub fn dominates(&self, h: &Subgroup) -> bool {
        self.members.iter().any(|m| h.is_subset_of(m))
    }
}

/// A left coset `rep * H` of the family member at `subgroup`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coset {
    /// Position of the subgroup in its family.
    pub subgroup: usize,
    /// Least member.
    pub rep: usize,
    pub members: Vec<usize>,
}

impl Coset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Stable text label, `H<subgroup>:<rep>`.
    pub fn label(&self) -> String {
        format!("H{}:{}", self.subgroup, self.rep)
    }
}

pub fn family_all_proper(g: &FiniteGroup) -> Result<SubgroupFamily> {
    let members = g
        .all_subgroups()?
        .iter()
        .filter(|h| h.order() < g.order())
        .cloned()
        .collect();
    SubgroupFamily::new(g, members, FamilyKind::AllProper)
}

pub fn family_normal_proper(g: &FiniteGroup) -> Result<SubgroupFamily> {
    let members = g
        .normal_subgroups()?
        .into_iter()
        .filter(|h| h.order() < g.order())
        .collect();
    SubgroupFamily::new(g, members, FamilyKind::NormalProper)
}

/// Members maximal under inclusion within `family`, in family order.
pub fn maximal_subfamily(family: &SubgroupFamily) -> SubgroupFamily {
    let members: Vec<Subgroup> = family
        .members
        .iter()
        .filter(|h| {
            !family
                .members
                .iter()
                .any(|k| k.order() > h.order() && h.is_subset_of(k))
        })
        .cloned()
        .collect();
    SubgroupFamily::new(&family.parent, members, FamilyKind::MaximalOf)
        .expect("subfamily of a proper family is proper")
}

/// Intersection of all maximal proper subgroups.
pub fn frattini(g: &FiniteGroup) -> Result<Subgroup> {
    if g.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    let maximal = maximal_subfamily(&family_all_proper(g)?);
    let phi = maximal
        .members
        .iter()
        .skip(1)
        .fold(maximal.members[0].clone(), |acc, m| acc.intersection(m));
    debug_assert!(g.is_normal(&phi));
    Ok(phi)
}

/// All left cosets of all members, ordered by (member position, least element).
pub fn cosets_of_family(family: &SubgroupFamily) -> Vec<Coset> {
    let g = &family.parent;
    let mut out = Vec::new();
    for (pos, h) in family.members.iter().enumerate() {
        let mut covered = vec![false; g.order()];
        for x in 0..g.order() {
            if covered[x] {
                continue;
            }
            let mut members: Vec<usize> = h.members().iter().map(|&m| g.mul(x, m)).collect();
            members.sort_unstable();
            for &m in &members {
                covered[m] = true;
            }
            out.push(Coset {
                subgroup: pos,
                rep: members[0],
                members,
            });
        }
    }
    out
}

/// Whether each family is dominated by the other.
pub fn is_cofinal_pair(a: &SubgroupFamily, b: &SubgroupFamily) -> bool {
    a.members.iter().all(|h| b.dominates(h)) && b.members.iter().all(|h| a.dominates(h))
}

/// First pool member complementing the intersection of `targets`.
pub fn common_complement(
    g: &FiniteGroup,
    targets: &[Subgroup],
    pool: &SubgroupFamily,
) -> Option<Subgroup> {
    let (first, rest) = targets.split_first()?;
    let meet = rest
        .iter()
        .fold(first.clone(), |acc, t| acc.intersection(t));
    pool.members
        .iter()
        .find(|w| g.product_is_group_complement(&meet, w))
        .cloned()
}

/// Preimages of the members of a family on the target of an epimorphism.
pub fn preimage_family(p: &GroupHom, family: &SubgroupFamily) -> Result<SubgroupFamily> {
    if !p.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let members = family.members.iter().map(|h| p.preimage(h)).collect();
    SubgroupFamily::new(&p.source, members, family.kind)
}
