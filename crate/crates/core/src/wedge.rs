//! Homotopy type of the normal coset poset as a wedge of spheres.
//!
//! The recursion runs on a minimal normal subgroup `M`:
//!
//! * simple groups give `|G| - 1` zero-spheres;
//! * if no proper normal subgroup maps onto `G/M`, the answer is that of
//!   `G/M`;
//! * otherwise `G = M x K` for a proper normal `K`, and the answer is
//!   `t - 1` copies of the suspension of the answer for `K`, where `t`
//!   counts the cosets of normal subgroups complementing `M`.
//!
//! Predictions are checked against the homology of the order complex.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::complex::order_complex;
use crate::error::{Error, Result};
use crate::families::{cosets_of_family, family_normal_proper, Coset};
use crate::group::{FiniteGroup, Subgroup};
use crate::homology::{homology, HomologyProfile};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WedgeDescriptor {
    Empty,
    Point,
    /// Dimension to number of spheres; counts are positive.
    Wedge(BTreeMap<usize, u64>),
}

impl WedgeDescriptor {
    pub fn spheres(dim: usize, count: u64) -> Self {
        if count == 0 {
            WedgeDescriptor::Point
        } else {
            WedgeDescriptor::Wedge(BTreeMap::from([(dim, count)]))
        }
    }

    /// Suspension; the suspension of the empty space is two points.
    pub fn suspend(&self) -> Self {
        match self {
            WedgeDescriptor::Empty => WedgeDescriptor::spheres(0, 1),
            WedgeDescriptor::Point => WedgeDescriptor::Point,
            WedgeDescriptor::Wedge(m) => {
                WedgeDescriptor::Wedge(m.iter().map(|(d, c)| (d + 1, *c)).collect())
            }
        }
    }

    /// Wedge of `k` copies.
    pub fn repeat(&self, k: u64) -> Self {
        match self {
            _ if k == 0 => WedgeDescriptor::Point,
            WedgeDescriptor::Empty if k == 1 => WedgeDescriptor::Empty,
            WedgeDescriptor::Empty | WedgeDescriptor::Point => WedgeDescriptor::Point,
            WedgeDescriptor::Wedge(m) => {
                WedgeDescriptor::Wedge(m.iter().map(|(d, c)| (*d, c * k)).collect())
            }
        }
    }

    /// Reduced homology of the described space.
    pub fn homology(&self) -> HomologyProfile<crate::Integer> {
        match self {
            WedgeDescriptor::Empty => HomologyProfile::free(&[(-1, 1)]),
            WedgeDescriptor::Point => HomologyProfile::free(&[]),
            WedgeDescriptor::Wedge(m) => {
                let ranks: Vec<(isize, usize)> =
                    m.iter().map(|(d, c)| (*d as isize, *c as usize)).collect();
                HomologyProfile::free(&ranks)
            }
        }
    }

    /// Parses `empty`, `point`, or `d:c` pairs joined by `+` (`1:3+2:1`).
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "empty" => return Ok(WedgeDescriptor::Empty),
            "point" => return Ok(WedgeDescriptor::Point),
            _ => {}
        }
        let mut map = BTreeMap::new();
        for (i, part) in t.split('+').enumerate() {
            let (d, c) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::parse(i, format!("expected dim:count, got `{part}`")))?;
            let d: usize = d
                .trim()
                .parse()
                .map_err(|_| Error::parse(i, "bad dimension"))?;
            let c: u64 = c.trim().parse().map_err(|_| Error::parse(i, "bad count"))?;
            if c == 0 {
                return Err(Error::parse(i, "sphere counts must be positive"));
            }
            *map.entry(d).or_insert(0) += c;
        }
        Ok(WedgeDescriptor::Wedge(map))
    }

    /// Inverse of [`WedgeDescriptor::parse`].
    pub fn code(&self) -> String {
        match self {
            WedgeDescriptor::Empty => "empty".into(),
            WedgeDescriptor::Point => "point".into(),
            WedgeDescriptor::Wedge(m) => m
                .iter()
                .map(|(d, c)| format!("{d}:{c}"))
                .collect::<Vec<_>>()
                .join("+"),
        }
    }
}

impl fmt::Display for WedgeDescriptor {
    /// `⋁ 3·S^1`, `⋁ 2·S^0 ∨ 1·S^1`, `∅`, `pt`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WedgeDescriptor::Empty => write!(f, "∅"),
            WedgeDescriptor::Point => write!(f, "pt"),
            WedgeDescriptor::Wedge(m) => {
                let parts: Vec<String> = m.iter().map(|(d, c)| format!("{c}·S^{d}")).collect();
                write!(f, "⋁ {}", parts.join(" ∨ "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step")]
pub enum DecompositionStep {
    SimpleBase {
        group: String,
        order: usize,
    },
    QuotientStep {
        minimal_normal: String,
    },
    ProductStep {
        minimal_normal: String,
        complement: String,
        large_cosets: u64,
    },
}

/// Steps from the input group down to the base case, outermost first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DecompositionTrace {
    pub steps: Vec<DecompositionStep>,
}

impl DecompositionTrace {
    /// Recomputes the descriptor from the steps alone.
    pub fn replay(&self) -> WedgeDescriptor {
        let mut desc = WedgeDescriptor::Empty;
        for step in self.steps.iter().rev() {
            desc = match step {
                DecompositionStep::SimpleBase { order, .. } => {
                    WedgeDescriptor::spheres(0, *order as u64 - 1)
                }
                DecompositionStep::QuotientStep { .. } => desc,
                DecompositionStep::ProductStep { large_cosets, .. } => {
                    desc.suspend().repeat(large_cosets - 1)
                }
            };
        }
        desc
    }
}

impl fmt::Display for DecompositionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return writeln!(f, "trivial group");
        }
        for (depth, step) in self.steps.iter().enumerate() {
            let indent = "  ".repeat(depth);
            match step {
                DecompositionStep::SimpleBase { group, order } => {
                    writeln!(f, "{indent}simple base {group} (order {order})")?
                }
                DecompositionStep::QuotientStep { minimal_normal } => {
                    writeln!(f, "{indent}quotient by minimal normal {minimal_normal}")?
                }
                DecompositionStep::ProductStep { minimal_normal, complement, large_cosets } => writeln!(
                    f,
                    "{indent}product M={minimal_normal} x K={complement}, {large_cosets} large cosets"
                )?,
            }
        }
        Ok(())
    }
}

/// Large and small cosets of the proper normal subgroups for `G = M x K`.
#[derive(Debug, Clone)]
pub struct CosetPartition {
    pub large: Vec<Coset>,
    pub small: Vec<Coset>,
    /// Proper normal subgroups `L` with `LM = G`.
    pub large_subgroups: Vec<Subgroup>,
}

fn product_size(g: &FiniteGroup, a: &Subgroup, b: &Subgroup) -> usize {
    let _ = g;
    a.order() * b.order() / a.intersection(b).order()
}

/// Splits the normal-proper cosets by whether their subgroup maps onto `K`.
pub fn classify_cosets_large_small(
    g: &FiniteGroup,
    m: &Subgroup,
    k: &Subgroup,
) -> Result<CosetPartition> {
    let minimal = g.minimal_normal_subgroups()?;
    if !minimal.contains(m) {
        return Err(Error::BadProductHypothesis(
            "M is not minimal normal".into(),
        ));
    }
    if k.order() == g.order() || !g.is_normal(k) {
        return Err(Error::BadProductHypothesis(
            "K is not a proper normal subgroup".into(),
        ));
    }
    if !m.intersection(k).is_trivial() || m.order() * k.order() != g.order() {
        return Err(Error::BadProductHypothesis(
            "G is not the internal product M x K".into(),
        ));
    }
    let family = family_normal_proper(g)?;
    let is_large: Vec<bool> = family
        .members()
        .iter()
        .map(|n| product_size(g, n, m) == g.order())
        .collect();
    let (mut large, mut small) = (Vec::new(), Vec::new());
    for c in cosets_of_family(&family) {
        if is_large[c.subgroup] {
            large.push(c);
        } else {
            small.push(c);
        }
    }
    let large_subgroups = family
        .members()
        .iter()
        .zip(&is_large)
        .filter(|(_, l)| **l)
        .map(|(n, _)| n.clone())
        .collect();
    Ok(CosetPartition {
        large,
        small,
        large_subgroups,
    })
}

type Prediction = (WedgeDescriptor, DecompositionTrace);

fn cache() -> &'static Mutex<HashMap<Vec<u32>, Prediction>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u32>, Prediction>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Canonical prediction, choosing the first `M` and `K` in lattice order.
pub fn predict_normal_wedge(g: &FiniteGroup) -> Result<(WedgeDescriptor, DecompositionTrace)> {
    let key = g.table();
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        let mut hit = hit.clone();
        relabel_base(&mut hit.1, g);
        return Ok(hit);
    }
    let result = predict_uncached(g)?;
    cache().lock().unwrap().insert(key, result.clone());
    Ok(result)
}

// memo hits come from an identical table; only the outermost label may differ
fn relabel_base(trace: &mut DecompositionTrace, g: &FiniteGroup) {
    if let [DecompositionStep::SimpleBase { group, .. }] = trace.steps.as_mut_slice() {
        *group = g.label().to_string();
    }
}

// same order as the subgroup lattice: size first, then member sequence
fn lex_least(subs: impl IntoIterator<Item = Subgroup>) -> Option<Subgroup> {
    subs.into_iter()
        .min_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())))
}

/// Proper normal subgroups `N` with `NM = G`.
fn surjecting_normals(g: &FiniteGroup, m: &Subgroup) -> Result<Vec<Subgroup>> {
    Ok(family_normal_proper(g)?
        .members()
        .iter()
        .filter(|n| product_size(g, n, m) == g.order())
        .cloned()
        .collect())
}

fn large_coset_count(g: &FiniteGroup, m: &Subgroup) -> Result<u64> {
    Ok(surjecting_normals(g, m)?
        .iter()
        .map(|l| (g.order() / l.order()) as u64)
        .sum())
}

fn predict_uncached(g: &FiniteGroup) -> Result<(WedgeDescriptor, DecompositionTrace)> {
    if g.is_trivial() {
        return Ok((WedgeDescriptor::Empty, DecompositionTrace::default()));
    }
    if g.is_simple()? {
        let trace = DecompositionTrace {
            steps: vec![DecompositionStep::SimpleBase {
                group: g.label().to_string(),
                order: g.order(),
            }],
        };
        return Ok((WedgeDescriptor::spheres(0, g.order() as u64 - 1), trace));
    }
    let m = lex_least(g.minimal_normal_subgroups()?)
        .expect("nontrivial group has a minimal normal subgroup");
    let candidates = surjecting_normals(g, &m)?;
    match lex_least(candidates) {
        None => {
            let (q, _) = g.quotient(&m)?;
            let (desc, mut trace) = predict_normal_wedge(&q)?;
            trace.steps.insert(
                0,
                DecompositionStep::QuotientStep {
                    minimal_normal: m.to_string(),
                },
            );
            Ok((desc, trace))
        }
        Some(k) => {
            let t = large_coset_count(g, &m)?;
            let (kg, _) = g.subgroup_as_group(&k)?;
            let (desc, mut trace) = predict_normal_wedge(&kg)?;
            trace.steps.insert(
                0,
                DecompositionStep::ProductStep {
                    minimal_normal: m.to_string(),
                    complement: k.to_string(),
                    large_cosets: t,
                },
            );
            Ok((desc.suspend().repeat(t - 1), trace))
        }
    }
}

/// Every descriptor reachable by some admissible choice of `M` and `K` at
/// every level of the recursion.
pub fn all_choice_descriptors(g: &FiniteGroup) -> Result<BTreeSet<WedgeDescriptor>> {
    let mut out = BTreeSet::new();
    if g.is_trivial() {
        out.insert(WedgeDescriptor::Empty);
        return Ok(out);
    }
    if g.is_simple()? {
        out.insert(WedgeDescriptor::spheres(0, g.order() as u64 - 1));
        return Ok(out);
    }
    for m in g.minimal_normal_subgroups()? {
        let candidates = surjecting_normals(g, &m)?;
        if candidates.is_empty() {
            let (q, _) = g.quotient(&m)?;
            out.extend(all_choice_descriptors(&q)?);
        } else {
            let t = large_coset_count(g, &m)?;
            for k in candidates {
                let (kg, _) = g.subgroup_as_group(&k)?;
                for d in all_choice_descriptors(&kg)? {
                    out.insert(d.suspend().repeat(t - 1));
                }
            }
        }
    }
    Ok(out)
}

/// Whether the order complex of the normal-proper family has exactly the
/// homology of the predicted wedge.
pub fn verify_normal_wedge(g: &FiniteGroup, simplex_cap: usize) -> Result<bool> {
    let (desc, _) = predict_normal_wedge(g)?;
    Ok(normal_poset_homology(g, simplex_cap)? == desc.homology())
}

pub fn normal_poset_homology(
    g: &FiniteGroup,
    simplex_cap: usize,
) -> Result<HomologyProfile<crate::Integer>> {
    let cosets = cosets_of_family(&family_normal_proper(g)?);
    homology(&order_complex(&cosets, simplex_cap)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::group;

    const CAP: usize = 2_000_000;

    fn predict(text: &str) -> (WedgeDescriptor, DecompositionTrace) {
        predict_normal_wedge(&group(text).unwrap()).unwrap()
    }

    #[test]
    fn descriptor_algebra() {
        assert_eq!(
            WedgeDescriptor::Empty.suspend(),
            WedgeDescriptor::spheres(0, 1)
        );
        assert_eq!(
            WedgeDescriptor::spheres(1, 2).suspend(),
            WedgeDescriptor::spheres(2, 2)
        );
        assert_eq!(
            WedgeDescriptor::spheres(1, 2).repeat(3),
            WedgeDescriptor::spheres(1, 6)
        );
        assert_eq!(
            WedgeDescriptor::parse("1:3").unwrap(),
            WedgeDescriptor::spheres(1, 3)
        );
        assert_eq!(
            WedgeDescriptor::parse("empty").unwrap(),
            WedgeDescriptor::Empty
        );
        assert!(WedgeDescriptor::parse("1:0").is_err());
        let w = WedgeDescriptor::parse("0:2+1:1").unwrap();
        assert_eq!(WedgeDescriptor::parse(&w.code()).unwrap(), w);
        assert_eq!(WedgeDescriptor::spheres(1, 3).to_string(), "⋁ 3·S^1");
    }

    #[test]
    fn predictions() {
        let (d, t) = predict("cyclic:5");
        assert_eq!(d, WedgeDescriptor::spheres(0, 4));
        assert!(matches!(
            t.steps[..],
            [DecompositionStep::SimpleBase { order: 5, .. }]
        ));

        let (d, t) = predict("cyclic:4");
        assert_eq!(d, WedgeDescriptor::spheres(0, 1));
        assert!(matches!(t.steps[0], DecompositionStep::QuotientStep { .. }));

        let (d, t) = predict("product:cyclic:2,cyclic:2");
        assert_eq!(d, WedgeDescriptor::spheres(1, 3));
        assert!(matches!(
            t.steps[0],
            DecompositionStep::ProductStep {
                large_cosets: 4,
                ..
            }
        ));

        let (d, t) = predict("cyclic:6");
        assert_eq!(d, WedgeDescriptor::spheres(1, 2));
        match &t.steps[0] {
            DecompositionStep::ProductStep {
                complement,
                large_cosets,
                ..
            } => {
                assert_eq!(*large_cosets, 2);
                assert_eq!(complement, "{0,2,4}");
            }
            other => panic!("unexpected {other:?}"),
        }

        let (d, t) = predict("symmetric:3");
        assert_eq!(d, WedgeDescriptor::spheres(0, 1));
        assert!(matches!(t.steps[0], DecompositionStep::QuotientStep { .. }));

        assert_eq!(predict("cyclic:1").0, WedgeDescriptor::Empty);
    }

    #[test]
    fn traces_replay() {
        for text in [
            "cyclic:12",
            "dihedral:4",
            "product:cyclic:2,cyclic:2,cyclic:2",
            "alternating:4",
        ] {
            let (d, t) = predict(text);
            assert_eq!(t.replay(), d, "{text}");
        }
    }

    #[test]
    fn verification_against_homology() {
        for text in [
            "cyclic:1",
            "cyclic:4",
            "cyclic:6",
            "product:cyclic:2,cyclic:2",
            "symmetric:3",
            "q8",
        ] {
            assert!(
                verify_normal_wedge(&group(text).unwrap(), CAP).unwrap(),
                "{text}"
            );
        }
    }

    #[test]
    fn classification_examples() {
        let klein = group("product:cyclic:2,cyclic:2").unwrap();
        let m = klein.subgroup_generated(&[2]);
        let k = klein.subgroup_generated(&[1]);
        let p = classify_cosets_large_small(&klein, &m, &k).unwrap();
        assert_eq!(p.large.len(), 4);
        assert_eq!(p.small.len(), 6);
        for l in &p.large_subgroups {
            assert!(l.intersection(&m).is_trivial());
            assert_eq!(l.order() * m.order(), klein.order());
        }

        let z6 = group("cyclic:6").unwrap();
        let m = z6.subgroup_generated(&[3]);
        let k = z6.subgroup_generated(&[2]);
        let p = classify_cosets_large_small(&z6, &m, &k).unwrap();
        assert_eq!(p.large.len(), 2);
        assert_eq!(p.small.len(), 9);

        let bad = z6.subgroup_generated(&[1]);
        assert!(matches!(
            classify_cosets_large_small(&z6, &m, &bad),
            Err(Error::BadProductHypothesis(_))
        ));
        let z4 = group("cyclic:4").unwrap();
        let m4 = z4.subgroup_generated(&[2]);
        assert!(matches!(
            classify_cosets_large_small(&z4, &m4, &m4),
            Err(Error::BadProductHypothesis(_))
        ));
    }
}
