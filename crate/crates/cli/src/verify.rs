//! Corpus-driven invariant checks.
//!
//! A corpus file has one group per line, `spec | key=value | ...`, with
//! `#` comments. Recognised keys: `order`, `p-1` (value of `P(G,-1)`),
//! `all-betti` and `normal-betti` (nonzero reduced Betti numbers of the two
//! coset posets, as `d:r+d:r` or `none`), and `wedge` (descriptor code such
//! as `1:3`, `point` or `empty`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use cosets_core::complex::{complexes_equal, coset_simplicial, nerve_complex, order_complex};
use cosets_core::families::{
    cosets_of_family, family_all_proper, family_normal_proper, frattini, is_cofinal_pair,
    maximal_subfamily,
};
use cosets_core::homology::homology;
use cosets_core::wedge::{
    all_choice_descriptors, normal_poset_homology, predict_normal_wedge, WedgeDescriptor,
};
use cosets_core::zeta::{eval_p, generation_probability, moebius_table};
use cosets_core::{build_group, Caps, FiniteGroup, GroupSpec, Integer, Result as CoreResult};
use serde::Serialize;

use crate::betti_code;
use crate::error::{CliError, CliResult};

const KEYS: &[&str] = &["order", "p-1", "all-betti", "normal-betti", "wedge"];
const AXIOM_SEED: u64 = 0x5eed;
/// Largest order for the Δ/nerve/order comparison.
pub const ABELS_HOLZ_MAX_ORDER: usize = 12;
/// Largest order for the exhaustive generating-tuple count.
pub const GENERATION_MAX_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub line: usize,
    pub spec: String,
    pub expect: BTreeMap<String, String>,
}

pub fn parse_corpus(text: &str) -> CliResult<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('|').map(str::trim);
        let spec = parts.next().unwrap_or_default().to_string();
        let mut expect = BTreeMap::new();
        for part in parts {
            let (k, v) = part.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "corpus line {}: expected key=value, got `{part}`",
                    i + 1
                ))
            })?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(CliError::Usage(format!(
                    "corpus line {}: unknown key `{k}`",
                    i + 1
                )));
            }
            expect.insert(k.to_string(), v.trim().to_string());
        }
        out.push(CorpusEntry {
            line: i + 1,
            spec,
            expect,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifySummary {
    /// Seed for the sampled associativity check.
    pub axiom_seed: u64,
    pub results: Vec<CheckResult>,
    pub warnings: Vec<String>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.name.clone())
            .collect()
    }

    pub fn table(&self) -> String {
        let width = self
            .results
            .iter()
            .map(|r| r.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let mut out = format!("{:width$}  result\n", "check");
        for r in &self.results {
            let status = if r.passed {
                "ok".to_string()
            } else {
                format!("FAIL  {}", r.detail)
            };
            let _ = writeln!(out, "{:width$}  {}", r.name, status);
        }
        let failed = self.failures().len();
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            self.results.len(),
            self.results.len() - failed,
            failed
        );
        let _ = writeln!(out, "axiom sampling seed {:#x}", self.axiom_seed);
        out
    }
}

struct Checker<'a> {
    spec: &'a str,
    results: Vec<CheckResult>,
}

impl Checker<'_> {
    fn record(&mut self, check: &str, outcome: CoreResult<Result<(), String>>) {
        let (passed, detail) = match outcome {
            Ok(Ok(())) => (true, String::new()),
            Ok(Err(msg)) => (false, msg),
            Err(e) => (false, format!("error: {e}")),
        };
        self.results.push(CheckResult {
            name: format!("{check}:{}", self.spec),
            passed,
            detail,
        });
    }
}

fn expect_eq(key: &str, expected: Option<&String>, actual: &str) -> Result<(), String> {
    match expected {
        Some(e) if e != actual => Err(format!("expected {key} {e}, got {actual}")),
        _ => Ok(()),
    }
}

fn check_entry(entry: &CorpusEntry, caps: &Caps) -> Vec<CheckResult> {
    let mut c = Checker {
        spec: &entry.spec,
        results: Vec::new(),
    };
    let g = match GroupSpec::from_str(&entry.spec).and_then(|s| build_group(&s, caps)) {
        Ok(g) => g,
        Err(e) => {
            c.record("group", Err(e));
            return c.results;
        }
    };
    let cap = caps.simplices;
    let ex = |k: &str| entry.expect.get(k);

    c.record(
        "group",
        Ok(g.check_axioms(AXIOM_SEED)
            .and_then(|_| expect_eq("order", ex("order"), &g.order().to_string()))),
    );
    c.record("moebius", moebius_check(&g));
    c.record(
        "bouc",
        (|| {
            let p = eval_p::<Integer>(&g, -1)?;
            let poset = order_complex(&cosets_of_family(&family_all_proper(&g)?), cap)?;
            let minus_chi = Integer::from(-poset.reduced_euler());
            Ok(if p != minus_chi.clone().into() {
                Err(format!(
                    "P(G,-1) = {p} but minus reduced Euler characteristic is {minus_chi}"
                ))
            } else {
                expect_eq("p-1", ex("p-1"), &p.to_string())
            })
        })(),
    );
    if g.order() <= GENERATION_MAX_ORDER {
        c.record(
            "generation",
            (|| {
                for k in 1..=3u32 {
                    let p = eval_p::<Integer>(&g, k as i64)?;
                    let direct = generation_probability(&g, k)?;
                    if p != direct {
                        return Ok(Err(format!("k={k}: P = {p}, direct count {direct}")));
                    }
                }
                Ok(Ok(()))
            })(),
        );
    }
    c.record(
        "homology-all",
        (|| {
            let h = homology(&order_complex(
                &cosets_of_family(&family_all_proper(&g)?),
                cap,
            )?)?;
            if !g.is_trivial() && h.is_zero() {
                return Ok(Err("coset poset has zero reduced homology".into()));
            }
            Ok(expect_eq("all-betti", ex("all-betti"), &betti_code(&h)))
        })(),
    );
    c.record(
        "wedge-verify",
        (|| {
            let (desc, _) = predict_normal_wedge(&g)?;
            let h = normal_poset_homology(&g, cap)?;
            if h != desc.homology() {
                return Ok(Err(format!("predicted {desc}, homology {h}")));
            }
            if !g.is_trivial() && (h.is_zero() || desc == WedgeDescriptor::Point) {
                return Ok(Err("normal coset poset looks contractible".into()));
            }
            Ok(
                expect_eq("normal-betti", ex("normal-betti"), &betti_code(&h))
                    .and_then(|_| expect_eq("wedge", ex("wedge"), &desc.code())),
            )
        })(),
    );
    c.record(
        "wedge-choice",
        (|| {
            let all = all_choice_descriptors(&g)?;
            let (canonical, _) = predict_normal_wedge(&g)?;
            Ok(if all.len() == 1 && all.contains(&canonical) {
                Ok(())
            } else {
                let seen: Vec<String> = all.iter().map(ToString::to_string).collect();
                Err(format!("choices give {}", seen.join(" / ")))
            })
        })(),
    );
    if g.order() <= ABELS_HOLZ_MAX_ORDER {
        c.record("abels-holz", abels_holz_check(&g, cap));
    }
    if !g.is_trivial() {
        c.record("frattini", frattini_check(&g, cap));
    }
    c.results
}

fn moebius_check(g: &FiniteGroup) -> CoreResult<Result<(), String>> {
    let table = moebius_table::<Integer>(g)?;
    for (h, _) in table.entries() {
        if h.order() == g.order() {
            continue;
        }
        let sum: Integer = table
            .entries()
            .iter()
            .filter(|(k, _)| h.is_subset_of(k))
            .map(|(_, m)| m)
            .sum();
        if sum != Integer::from(0) {
            return Ok(Err(format!("sum above {h} is {sum}")));
        }
    }
    Ok(Ok(()))
}

/// Δ, nerve and order complex agree in homology for the intersection-closed
/// families, and Δ is unchanged when passing to maximal members.
pub fn abels_holz_check(g: &FiniteGroup, cap: usize) -> CoreResult<Result<(), String>> {
    for family in [family_all_proper(g)?, family_normal_proper(g)?] {
        let cosets = cosets_of_family(&family);
        let d = homology(&coset_simplicial(&cosets, g, cap)?)?;
        let n = homology(&nerve_complex(&cosets, cap)?)?;
        if d != n {
            return Ok(Err(format!(
                "{}: delta {d} vs nerve {n}",
                family.kind().name()
            )));
        }
        if family.intersection_closed() {
            let o = homology(&order_complex(&cosets, cap)?)?;
            if o != n {
                return Ok(Err(format!(
                    "{}: order {o} vs nerve {n}",
                    family.kind().name()
                )));
            }
        }
        let top = maximal_subfamily(&family);
        if !is_cofinal_pair(&family, &top) {
            return Ok(Err(format!(
                "{}: maximal subfamily not cofinal",
                family.kind().name()
            )));
        }
        let top_cosets = cosets_of_family(&top);
        if !complexes_equal(
            &coset_simplicial(&cosets, g, cap)?,
            &coset_simplicial(&top_cosets, g, cap)?,
        )? {
            return Ok(Err(format!(
                "{}: delta changes under maximal subfamily",
                family.kind().name()
            )));
        }
        let tn = homology(&nerve_complex(&top_cosets, cap)?)?;
        if tn != n {
            return Ok(Err(format!(
                "{}: maximal nerve {tn} vs nerve {n}",
                family.kind().name()
            )));
        }
    }
    Ok(Ok(()))
}

/// The nerve of the maximal-subgroup cosets has the homology of the coset
/// poset of `G/Φ(G)`.
pub fn frattini_check(g: &FiniteGroup, cap: usize) -> CoreResult<Result<(), String>> {
    let maximal = maximal_subfamily(&family_all_proper(g)?);
    let nerve = homology(&nerve_complex(&cosets_of_family(&maximal), cap)?)?;
    let phi = frattini(g)?;
    let (q, _) = g.quotient(&phi)?;
    let poset = homology(&order_complex(
        &cosets_of_family(&family_all_proper(&q)?),
        cap,
    )?)?;
    Ok(if nerve == poset {
        Ok(())
    } else {
        Err(format!("maximal nerve {nerve}, poset of G/Phi {poset}"))
    })
}

pub fn run_corpus(entries: &[CorpusEntry], caps: &Caps) -> VerifySummary {
    let mut summary = VerifySummary {
        axiom_seed: AXIOM_SEED,
        ..VerifySummary::default()
    };
    if entries.is_empty() {
        summary
            .warnings
            .push("corpus is empty; nothing to verify".into());
    }
    for e in entries {
        summary.results.extend(check_entry(e, caps));
    }
    summary
}

pub fn cmd_verify_suite(path: &Path, caps: &Caps) -> CliResult<VerifySummary> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(run_corpus(&parse_corpus(&text)?, caps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parsing() {
        let entries =
            parse_corpus("# header\ncyclic:6 | order=6 | p-1=2\n\nq8   # trailing\n").unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].line, 2);
        assert_eq!(entries[0].expect.get("p-1").map(String::as_str), Some("2"));
        assert_eq!(entries[1].spec, "q8");
        assert!(parse_corpus("cyclic:6 | colour=red").is_err());
        assert!(parse_corpus("cyclic:6 | order").is_err());
    }

    #[test]
    fn failing_expectation_is_named() {
        let entries = parse_corpus("cyclic:6 | normal-betti=1:3").unwrap();
        let s = run_corpus(&entries, &Caps::default());
        assert_eq!(s.failures(), vec!["wedge-verify:cyclic:6".to_string()]);
    }

    #[test]
    fn bad_spec_is_a_failed_check() {
        let s = run_corpus(&parse_corpus("cyclic:zero").unwrap(), &Caps::default());
        assert_eq!(s.failures(), vec!["group:cyclic:zero".to_string()]);
    }

    #[test]
    fn empty_corpus_warns() {
        let s = run_corpus(&[], &Caps::default());
        assert!(s.passed());
        assert_eq!(s.warnings.len(), 1);
    }
}
