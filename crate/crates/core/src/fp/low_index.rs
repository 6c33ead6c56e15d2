use std::collections::{BTreeMap, HashSet};

use super::enumerate::CosetTable;
use super::{inverse_letter, inverse_word, Presentation, Word};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowIndexSubgroup {
    pub table: CosetTable,
    pub index: usize,
    pub is_normal: bool,
    /// No proper overgroup of index at least 2 appears in the full list.
    pub is_maximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowIndexResult {
    pub bound: usize,
    pub subgroups: Vec<LowIndexSubgroup>,
}

impl LowIndexResult {
    /// One line per subgroup: index, normal, maximal, table hash,
    /// generator words.
    pub fn to_tsv(&self, p: &Presentation) -> String {
        let mut out = String::from("index\tnormal\tmaximal\ttable-hash\tgenerator-words\n");
        for s in &self.subgroups {
            let words: Vec<String> = s
                .table
                .subgroup_gens()
                .iter()
                .map(|w| p.format_word(w))
                .collect();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                s.index,
                s.is_normal,
                s.is_maximal,
                s.table.table_hash(),
                words.join(",")
            ));
        }
        out
    }
}

struct Search<'a> {
    relators: &'a [Word],
    letters: usize,
    bound: usize,
    found: Vec<Vec<Vec<u32>>>,
}

impl Search<'_> {
    // relator scans from every row until nothing new is forced
    fn deduce(&self, t: &mut [Vec<u32>]) -> bool {
        loop {
            let mut changed = false;
            for c in 0..t.len() {
                for w in self.relators {
                    let (mut f, mut i) = (c as u32, 0usize);
                    while i < w.len() && t[f as usize][w[i]] != NONE {
                        f = t[f as usize][w[i]];
                        i += 1;
                    }
                    if i == w.len() {
                        if f != c as u32 {
                            return false;
                        }
                        continue;
                    }
                    let (mut b, mut j) = (c as u32, w.len());
                    while j > i && t[b as usize][inverse_letter(w[j - 1])] != NONE {
                        b = t[b as usize][inverse_letter(w[j - 1])];
                        j -= 1;
                    }
                    if j == i {
                        return false;
                    }
                    if j == i + 1 {
                        let l = w[i];
                        if t[b as usize][inverse_letter(l)] != NONE {
                            return false;
                        }
                        t[f as usize][l] = b;
                        t[b as usize][inverse_letter(l)] = f;
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&mut self, t: Vec<Vec<u32>>) {
        let hole = t
            .iter()
            .enumerate()
            .find_map(|(r, row)| row.iter().position(|&v| v == NONE).map(|l| (r, l)));
        let Some((r, l)) = hole else {
            self.found.push(t);
            return;
        };
        let il = inverse_letter(l);
        let n = t.len();
        for v in 0..=n {
            let mut next = t.clone();
            if v == n {
                if n == self.bound {
                    break;
                }
                next.push(vec![NONE; self.letters]);
            } else if next[v][il] != NONE {
                continue;
            }
            next[r][l] = v as u32;
            next[v][il] = r as u32;
            if self.deduce(&mut next) {
                self.run(next);
            }
        }
    }
}

fn conjugacy_key(t: &CosetTable) -> Vec<Vec<u32>> {
    (0..t.index())
        .map(|r| t.standardized_from(r))
        .min()
        .unwrap_or_default()
}

/// All subgroups of index at most `max_index`, as standardized coset
/// tables in search order. With `dedupe_conjugates` only the first member
/// of each conjugacy class is reported; flags are always computed from
/// the full list.
pub fn low_index_subgroups(
    p: &Presentation,
    max_index: usize,
    dedupe_conjugates: bool,
) -> Result<LowIndexResult> {
    low_index_subgroups_capped(p, max_index, dedupe_conjugates, Caps::default().max_index)
}

pub fn low_index_subgroups_capped(
    p: &Presentation,
    max_index: usize,
    dedupe_conjugates: bool,
    index_cap: usize,
) -> Result<LowIndexResult> {
    if max_index > index_cap {
        return Err(Error::OverCap {
            what: "index bound",
            limit: index_cap,
        });
    }
    let letters = p.num_letters();
    let mut search = Search {
        relators: p.relators(),
        letters,
        bound: max_index,
        found: Vec::new(),
    };
    if max_index >= 1 {
        let mut start = vec![vec![NONE; letters]];
        if search.deduce(&mut start) {
            search.run(start);
        }
    }
    let mut tables: Vec<CosetTable> = search
        .found
        .into_iter()
        .map(|rows| {
            let t = CosetTable::from_raw(letters, rows, Vec::new());
            let gens = t.schreier_generators();
            CosetTable::from_raw(letters, t.raw_rows().to_vec(), gens)
        })
        .collect();
    tables.sort_by_key(CosetTable::index);
    let maximal: Vec<bool> = tables
        .iter()
        .map(|h| {
            h.index() > 1
                && !tables
                    .iter()
                    .any(|k| k.index() > 1 && k.index() < h.index() && h.is_contained_in(k))
        })
        .collect();
    let mut seen = HashSet::new();
    let subgroups = tables
        .into_iter()
        .zip(maximal)
        .filter(|(t, _)| !dedupe_conjugates || seen.insert(conjugacy_key(t)))
        .map(|(table, is_maximal)| LowIndexSubgroup {
            index: table.index(),
            is_normal: table.is_normal(),
            is_maximal,
            table,
        })
        .collect();
    Ok(LowIndexResult {
        bound: max_index,
        subgroups,
    })
}

/// Number of subgroups maximal within the bound, per index; indices with
/// no maximal subgroup are omitted.
pub fn count_maximal_by_index(
    p: &Presentation,
    max_index: usize,
) -> Result<BTreeMap<usize, usize>> {
    Ok(low_index_subgroups(p, max_index, false)?.maximal_counts())
}

/// First candidate whose generator words move row 0 of `h` onto every row,
/// that is, with `G = HK`.
pub fn complement_exists(
    p: &Presentation,
    h: &CosetTable,
    candidates: &[CosetTable],
) -> Option<CosetTable> {
    if !h.is_complete() || h.num_letters() != p.num_letters() {
        return None;
    }
    candidates
        .iter()
        .find(|k| {
            let words: Vec<Word> = k
                .subgroup_gens()
                .iter()
                .flat_map(|w| [w.clone(), inverse_word(w)])
                .collect();
            let mut seen = vec![false; h.index()];
            seen[0] = true;
            let mut stack = vec![0usize];
            while let Some(r) = stack.pop() {
                for w in &words {
                    let t = h.act(r, w).expect("complete table");
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            seen.iter().all(|&s| s)
        })
        .cloned()
}

/// The quotient by a normal subgroup, read off its regular coset action.
pub fn quotient_group(table: &CosetTable, label: impl Into<String>) -> Result<FiniteGroup> {
    if !table.is_normal() {
        return Err(Error::NotNormal);
    }
    let n = table.index();
    let reps = table.coset_reps();
    let mut mul = Vec::with_capacity(n * n);
    for i in 0..n {
        for rep in &reps {
            mul.push(table.act(i, rep).expect("complete table") as u32);
        }
    }
    FiniteGroup::from_table(label, n, mul)
}

/// Kernels of epimorphisms onto simple groups of order at most
/// `max_index`, counted per isomorphism type.
///
/// Abelian types are labelled `Z{p}`; nonabelian ones `simple-{order}`,
/// with a `#k` suffix when several non-isomorphic types share an order.
pub fn count_simple_quotients(
    p: &Presentation,
    max_index: usize,
) -> Result<BTreeMap<String, usize>> {
    low_index_subgroups(p, max_index, false)?.simple_quotients()
}

impl LowIndexResult {
    /// Maximal subgroups per index; use on a list without conjugacy dedupe.
    pub fn maximal_counts(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for s in self.subgroups.iter().filter(|s| s.is_maximal) {
            *counts.entry(s.index).or_insert(0) += 1;
        }
        counts
    }

    /// See [`count_simple_quotients`]; use on a list without conjugacy dedupe.
    pub fn simple_quotients(&self) -> Result<BTreeMap<String, usize>> {
        simple_quotients_of(self)
    }
}

fn simple_quotients_of(result: &LowIndexResult) -> Result<BTreeMap<String, usize>> {
    let mut counts = BTreeMap::new();
    let mut types: Vec<(String, FiniteGroup)> = Vec::new();
    for s in result
        .subgroups
        .iter()
        .filter(|s| s.is_normal && s.index > 1)
    {
        let q = quotient_group(&s.table, format!("Q{}", s.index))?;
        if !q.is_simple()? {
            continue;
        }
        let label = if q.is_abelian() {
            format!("Z{}", q.order())
        } else {
            let same_order: Vec<&(String, FiniteGroup)> = types
                .iter()
                .filter(|(_, g)| g.order() == q.order())
                .collect();
            let hit = same_order
                .iter()
                .find(|(_, g)| q.order() > 200 || g.is_isomorphic(&q));
            match hit {
                Some((l, _)) => l.clone(),
                None => {
                    let l = match same_order.len() {
                        0 => format!("simple-{}", q.order()),
                        k => format!("simple-{}#{}", q.order(), k + 1),
                    };
                    types.push((l.clone(), q));
                    l
                }
            }
        };
        *counts.entry(label).or_insert(0) += 1;
    }
    Ok(counts)
}
