use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use cosets_core::fp::{
    catalogue_presentation, complement_exists, low_index_subgroups_capped, todd_coxeter,
    CosetTable, LowIndexResult, Presentation,
};
use cosets_core::Caps;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// A presentation given inline, as a path to a file, or by catalogue name.
pub fn resolve_presentation(arg: &str) -> CliResult<Presentation> {
    let path = Path::new(arg);
    if !arg.contains(':') && path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return Ok(Presentation::parse(&text)?);
    }
    if let Some(p) = catalogue_presentation(arg) {
        return Ok(p);
    }
    Ok(Presentation::parse(arg)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerateReport {
    pub presentation: String,
    pub subgroup: Vec<String>,
    pub index: usize,
    pub table: Vec<Vec<usize>>,
}

pub fn cmd_enumerate(p: &Presentation, subgroup: &str, caps: &Caps) -> CliResult<EnumerateReport> {
    let words = p.parse_words(subgroup)?;
    let t = todd_coxeter(p, &words, caps.max_cosets)?;
    Ok(EnumerateReport {
        presentation: p.to_string(),
        subgroup: words.iter().map(|w| p.format_word(w)).collect(),
        index: t.index(),
        table: (0..t.index())
            .map(|r| {
                (0..t.num_letters())
                    .map(|l| t.entry(r, l).expect("complete"))
                    .collect()
            })
            .collect(),
    })
}

impl EnumerateReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("presentation {}\n", self.presentation);
        if self.subgroup.is_empty() {
            let _ = writeln!(out, "subgroup trivial\norder {}", self.index);
        } else {
            let _ = writeln!(
                out,
                "subgroup <{}>\nindex {}",
                self.subgroup.join(", "),
                self.index
            );
        }
        out
    }

    /// Coset table with one column per letter (generator, then inverse).
    pub fn to_tsv(&self, p: &Presentation) -> String {
        let mut header = vec!["coset".to_string()];
        for g in p.generators() {
            header.push(g.clone());
            header.push(format!("{g}^-1"));
        }
        let mut out = header.join("\t") + "\n";
        for (r, row) in self.table.iter().enumerate() {
            let cells: Vec<String> = std::iter::once(r.to_string())
                .chain(row.iter().map(ToString::to_string))
                .collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

pub fn cmd_low_index(
    p: &Presentation,
    max_index: usize,
    dedupe: bool,
    caps: &Caps,
) -> CliResult<LowIndexResult> {
    Ok(low_index_subgroups_capped(
        p,
        max_index,
        dedupe,
        caps.max_index,
    )?)
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupRow {
    pub index: usize,
    pub normal: bool,
    pub maximal: bool,
    pub table_hash: String,
    pub generators: Vec<String>,
}

pub fn low_index_rows(p: &Presentation, r: &LowIndexResult) -> Vec<SubgroupRow> {
    r.subgroups
        .iter()
        .map(|s| SubgroupRow {
            index: s.index,
            normal: s.is_normal,
            maximal: s.is_maximal,
            table_hash: s.table.table_hash(),
            generators: s
                .table
                .subgroup_gens()
                .iter()
                .map(|w| p.format_word(w))
                .collect(),
        })
        .collect()
}

pub fn cmd_maximal_counts(
    p: &Presentation,
    max_index: usize,
    caps: &Caps,
) -> CliResult<BTreeMap<usize, usize>> {
    Ok(low_index_subgroups_capped(p, max_index, false, caps.max_index)?.maximal_counts())
}

pub fn counts_tsv<K: std::fmt::Display>(header: &str, counts: &BTreeMap<K, usize>) -> String {
    let mut out = format!("{header}\tcount\n");
    for (k, v) in counts {
        let _ = writeln!(out, "{k}\t{v}");
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplementRow {
    pub index: usize,
    pub table_hash: String,
    pub generators: Vec<String>,
    pub complement_index: Option<usize>,
    pub complement_generators: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplementReport {
    pub max_index: usize,
    pub candidate_index: usize,
    pub rows: Vec<ComplementRow>,
    pub covered: usize,
    pub total: usize,
}

impl ComplementReport {
    pub fn coverage_percent(&self) -> f64 {
        if self.total == 0 {
            100.0
        } else {
            100.0 * self.covered as f64 / self.total as f64
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "index\ttable-hash\tgenerator-words\tcomplement-index\tcomplement-words\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.index,
                r.table_hash,
                r.generators.join(","),
                r.complement_index.map_or("-".into(), |i| i.to_string()),
                r.complement_generators
                    .as_ref()
                    .map_or("-".into(), |g| g.join(","))
            );
        }
        let _ = writeln!(
            out,
            "# coverage {}/{} ({:.1}%)",
            self.covered,
            self.total,
            self.coverage_percent()
        );
        out
    }
}

/// For every proper subgroup of index at most `max_index`, looks for a
/// finite-index complement among proper subgroups of index at most
/// `candidate_index`.
pub fn cmd_complements(
    p: &Presentation,
    max_index: usize,
    candidate_index: usize,
    caps: &Caps,
) -> CliResult<ComplementReport> {
    let bound = max_index.max(candidate_index);
    let all = low_index_subgroups_capped(p, bound, false, caps.max_index)?;
    let candidates: Vec<CosetTable> = all
        .subgroups
        .iter()
        .filter(|s| s.index > 1 && s.index <= candidate_index)
        .map(|s| s.table.clone())
        .collect();
    let mut rows = Vec::new();
    for s in all
        .subgroups
        .iter()
        .filter(|s| s.index > 1 && s.index <= max_index)
    {
        let found = complement_exists(p, &s.table, &candidates);
        rows.push(ComplementRow {
            index: s.index,
            table_hash: s.table.table_hash(),
            generators: s
                .table
                .subgroup_gens()
                .iter()
                .map(|w| p.format_word(w))
                .collect(),
            complement_index: found.as_ref().map(CosetTable::index),
            complement_generators: found
                .as_ref()
                .map(|k| k.subgroup_gens().iter().map(|w| p.format_word(w)).collect()),
        });
    }
    let covered = rows.iter().filter(|r| r.complement_index.is_some()).count();
    let total = rows.len();
    Ok(ComplementReport {
        max_index,
        candidate_index,
        rows,
        covered,
        total,
    })
}

pub fn cmd_simple_quotients(
    p: &Presentation,
    max_index: usize,
    caps: &Caps,
) -> CliResult<BTreeMap<String, usize>> {
    Ok(low_index_subgroups_capped(p, max_index, false, caps.max_index)?.simple_quotients()?)
}
