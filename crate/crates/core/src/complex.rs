//! Finite abstract simplicial complexes and the three coset complexes.
//!
//! * [`order_complex`]: chains of cosets under strict inclusion.
//! * [`nerve_complex`]: sets of cosets with a common element.
//! * [`coset_simplicial`]: sets of group elements lying in a common coset.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::families::Coset;
use crate::group::FiniteGroup;

/// A simplex: strictly increasing vertex indices.
pub type Simplex = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    /// `by_dim[d]` holds the d-simplices in lexicographic order.
    by_dim: Vec<Vec<Simplex>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex {
            labels: Vec::new(),
            by_dim: Vec::new(),
        }
    }

    /// Builds a complex from a simplex list, checking every invariant.
    pub fn from_simplices(
        labels: Vec<String>,
        simplices: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self> {
        let mut set: HashSet<Simplex> = HashSet::new();
        for s in simplices {
            if s.is_empty()
                || s.windows(2).any(|w| w[0] >= w[1])
                || s.iter().any(|&v| v as usize >= labels.len())
            {
                return Err(Error::Invalid(format!("malformed simplex {s:?}")));
            }
            set.insert(s);
        }
        for s in &set {
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    if !set.contains(&face) {
                        return Err(Error::Invalid(format!("face {face:?} of {s:?} missing")));
                    }
                }
            }
        }
        Ok(Self::from_set(labels, set))
    }

    fn from_set(labels: Vec<String>, set: HashSet<Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in set {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        for layer in &mut by_dim {
            layer.sort_unstable();
        }
        SimplicialComplex { labels, by_dim }
    }

    /// All nonempty faces of the given simplices.
    pub fn from_maximal_faces(labels: Vec<String>, faces: &[Simplex], cap: usize) -> Result<Self> {
        let mut set: HashSet<Simplex> = HashSet::new();
        for f in faces {
            if f.len() >= 63 {
                return Err(Error::OverCap {
                    what: "simplex count",
                    limit: cap,
                });
            }
            for mask in 1u64..(1u64 << f.len()) {
                let s: Simplex = (0..f.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                if set.insert(s) && set.len() > cap {
                    return Err(Error::OverCap {
                        what: "simplex count",
                        limit: cap,
                    });
                }
            }
        }
        Ok(Self::from_set(labels, set))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    /// Top dimension; -1 for the empty complex.
    pub fn dim(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.by_dim.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn total(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// f-vector: simplex counts by dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    /// Alternating simplex count minus one.
    pub fn reduced_euler(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, l)| {
                if d % 2 == 0 {
                    l.len() as i64
                } else {
                    -(l.len() as i64)
                }
            })
            .sum::<i64>()
            - 1
    }

    /// Line format: header lines with vertex labels, then one simplex per
    /// line as space-separated vertex indices, by dimension then lexically.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# coset-complex v1\n");
        let _ = writeln!(out, "# vertices {}", self.labels.len());
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "# v {i} {l}");
        }
        for layer in &self.by_dim {
            for s in layer {
                let parts: Vec<String> = s.iter().map(u32::to_string).collect();
                out.push_str(&parts.join(" "));
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let bad = |line: usize, msg: &str| Error::parse(line, msg.to_string());
        match lines.next() {
            Some((_, "# coset-complex v1")) => {}
            _ => return Err(bad(0, "missing header")),
        }
        let n: usize = match lines.next() {
            Some((i, l)) => l
                .strip_prefix("# vertices ")
                .and_then(|x| x.trim().parse().ok())
                .ok_or_else(|| bad(i, "missing vertex count"))?,
            None => return Err(bad(1, "missing vertex count")),
        };
        let mut labels = Vec::with_capacity(n);
        let mut simplices = Vec::new();
        for (i, line) in lines {
            if let Some(rest) = line.strip_prefix("# v ") {
                let (idx, label) = rest
                    .split_once(' ')
                    .ok_or_else(|| bad(i, "malformed label line"))?;
                if idx.parse::<usize>().ok() != Some(labels.len()) {
                    return Err(bad(i, "labels out of order"));
                }
                labels.push(label.to_string());
            } else {
                let s = line
                    .split_whitespace()
                    .map(|t| t.parse::<u32>().map_err(|_| bad(i, "bad vertex index")))
                    .collect::<Result<Vec<u32>>>()?;
                simplices.push(s);
            }
        }
        if labels.len() != n {
            return Err(bad(0, "vertex count does not match labels"));
        }
        Self::from_simplices(labels, simplices)
    }
}

fn coset_bits(cosets: &[Coset]) -> (usize, Vec<Vec<u64>>) {
    let n = cosets
        .iter()
        .flat_map(|c| c.members.iter())
        .max()
        .map_or(0, |m| m + 1);
    let words = n.div_ceil(64);
    let bits = cosets
        .iter()
        .map(|c| {
            let mut b = vec![0u64; words];
            for &m in &c.members {
                b[m / 64] |= 1 << (m % 64);
            }
            b
        })
        .collect();
    (words, bits)
}

/// Order complex of the cosets ordered by strict inclusion.
pub fn order_complex(cosets: &[Coset], cap: usize) -> Result<SimplicialComplex> {
    let (_, bits) = coset_bits(cosets);
    let below = |a: usize, b: usize| {
        cosets[a].len() < cosets[b].len() && bits[a].iter().zip(&bits[b]).all(|(x, y)| x & !y == 0)
    };
    let up: Vec<Vec<u32>> = (0..cosets.len())
        .map(|a| {
            (0..cosets.len())
                .filter(|&b| below(a, b))
                .map(|b| b as u32)
                .collect()
        })
        .collect();
    let labels = cosets.iter().map(Coset::label).collect();
    let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
    let mut total = 0usize;
    let mut chain: Vec<u32> = Vec::new();
    for start in 0..cosets.len() as u32 {
        chain.push(start);
        extend_chains(&up, &mut chain, &mut by_dim, &mut total, cap)?;
        chain.pop();
    }
    for layer in &mut by_dim {
        layer.sort_unstable();
    }
    Ok(SimplicialComplex { labels, by_dim })
}

fn extend_chains(
    up: &[Vec<u32>],
    chain: &mut Vec<u32>,
    by_dim: &mut Vec<Vec<Simplex>>,
    total: &mut usize,
    cap: usize,
) -> Result<()> {
    *total += 1;
    if *total > cap {
        return Err(Error::OverCap {
            what: "simplex count",
            limit: cap,
        });
    }
    let d = chain.len() - 1;
    if by_dim.len() <= d {
        by_dim.push(Vec::new());
    }
    let mut s = chain.clone();
    s.sort_unstable();
    by_dim[d].push(s);
    let last = *chain.last().unwrap() as usize;
    for &next in &up[last] {
        chain.push(next);
        extend_chains(up, chain, by_dim, total, cap)?;
        chain.pop();
    }
    Ok(())
}

/// Nerve of the cosets: a vertex set spans a simplex iff the cosets meet.
pub fn nerve_complex(cosets: &[Coset], cap: usize) -> Result<SimplicialComplex> {
    let labels: Vec<String> = cosets.iter().map(Coset::label).collect();
    // cosets through each element; every simplex is a subset of one of these
    let mut through: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for (i, c) in cosets.iter().enumerate() {
        for &m in &c.members {
            through.entry(m).or_default().push(i as u32);
        }
    }
    let faces = maximal_sets(through.into_values().collect());
    SimplicialComplex::from_maximal_faces(labels, &faces, cap)
}

/// Coset simplicial complex on the covered group elements.
pub fn coset_simplicial(
    cosets: &[Coset],
    g: &FiniteGroup,
    cap: usize,
) -> Result<SimplicialComplex> {
    let distinct: HashSet<&Vec<usize>> = cosets.iter().map(|c| &c.members).collect();
    let bound = distinct.iter().try_fold(0usize, |acc, c| {
        if c.len() >= 63 {
            None
        } else {
            acc.checked_add(1usize << c.len())
        }
    });
    if bound.is_none_or(|b| b > cap) {
        return Err(Error::OverCap {
            what: "coset power-set size",
            limit: cap,
        });
    }
    let mut covered = vec![false; g.order()];
    for c in &distinct {
        for &m in c.iter() {
            covered[m] = true;
        }
    }
    let vertices: Vec<usize> = (0..g.order()).filter(|&x| covered[x]).collect();
    let pos: HashMap<usize, u32> = vertices
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i as u32))
        .collect();
    let labels = vertices.iter().map(|x| format!("g{x}")).collect();
    let faces: Vec<Simplex> = distinct
        .into_iter()
        .map(|c| c.iter().map(|m| pos[m]).collect())
        .collect();
    SimplicialComplex::from_maximal_faces(labels, &maximal_sets(faces), cap)
}

/// Drops sets contained in another; output sorted.
fn maximal_sets(mut sets: Vec<Simplex>) -> Vec<Simplex> {
    for s in &mut sets {
        s.sort_unstable();
    }
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<Simplex> = Vec::new();
    for s in sets {
        let inside = kept.iter().any(|k| {
            let ks: Vec<usize> = k.iter().map(|&x| x as usize).collect();
            let ss: Vec<usize> = s.iter().map(|&x| x as usize).collect();
            crate::group::is_sorted_subset(&ss, &ks)
        });
        if !inside {
            kept.push(s);
        }
    }
    kept.sort_unstable();
    kept
}

/// Equality after matching vertices by label.
pub fn complexes_equal(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<bool> {
    let index: HashMap<&str, u32> = a
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as u32))
        .collect();
    let b_labels: HashSet<&str> = b.labels.iter().map(String::as_str).collect();
    if index.len() != a.labels.len()
        || b_labels.len() != b.labels.len()
        || b_labels != index.keys().copied().collect::<HashSet<_>>()
    {
        return Err(Error::LabelMismatch);
    }
    if a.by_dim.len() != b.by_dim.len() {
        return Ok(false);
    }
    for (la, lb) in a.by_dim.iter().zip(&b.by_dim) {
        let mut mapped: Vec<Simplex> = lb
            .iter()
            .map(|s| {
                let mut t: Simplex = s
                    .iter()
                    .map(|&v| index[b.labels[v as usize].as_str()])
                    .collect();
                t.sort_unstable();
                t
            })
            .collect();
        mapped.sort_unstable();
        if &mapped != la {
            return Ok(false);
        }
    }
    Ok(true)
}
