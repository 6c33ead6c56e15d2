use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use cosets_core::complex::{coset_simplicial, nerve_complex, order_complex, SimplicialComplex};
use cosets_core::families::{
    cosets_of_family, family_all_proper, family_normal_proper, frattini, maximal_subfamily,
    SubgroupFamily,
};
use cosets_core::homology::{homology, HomologyProfile};
use cosets_core::wedge::{predict_normal_wedge, DecompositionStep};
use cosets_core::zeta::{eval_p, hall_series, moebius_table};
use cosets_core::{build_group, Caps, FiniteGroup, GroupSpec, Integer};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyChoice {
    All,
    Normal,
    Maximal,
}

impl FromStr for FamilyChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(FamilyChoice::All),
            "normal" => Ok(FamilyChoice::Normal),
            "maximal" => Ok(FamilyChoice::Maximal),
            _ => Err(format!(
                "unknown family `{s}` (expected all, normal or maximal)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComplexChoice {
    Order,
    Nerve,
    Delta,
}

impl ComplexChoice {
    pub fn name(self) -> &'static str {
        match self {
            ComplexChoice::Order => "order",
            ComplexChoice::Nerve => "nerve",
            ComplexChoice::Delta => "delta",
        }
    }
}

impl FromStr for ComplexChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "order" => Ok(ComplexChoice::Order),
            "nerve" => Ok(ComplexChoice::Nerve),
            "delta" => Ok(ComplexChoice::Delta),
            _ => Err(format!(
                "unknown complex `{s}` (expected order, nerve or delta)"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub families: Vec<FamilyChoice>,
    pub complexes: Vec<ComplexChoice>,
    pub caps: Caps,
    pub timings: bool,
    /// Directory receiving one text file per computed complex.
    pub export_dir: Option<PathBuf>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            families: vec![
                FamilyChoice::All,
                FamilyChoice::Normal,
                FamilyChoice::Maximal,
            ],
            complexes: vec![ComplexChoice::Order],
            caps: Caps::default(),
            timings: false,
            export_dir: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub group: GroupSummary,
    pub families: Vec<FamilyReport>,
    pub zeta: ZetaReport,
    pub wedge: WedgeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub spec: String,
    pub order: usize,
    pub exponent: usize,
    pub abelian: bool,
    pub subgroups: usize,
    pub normal_subgroups: usize,
    pub abelian_invariants: Vec<u64>,
    /// Absent for the trivial group.
    pub frattini_order: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub name: String,
    pub subgroups: usize,
    pub cosets: usize,
    pub intersection_closed: bool,
    pub complexes: Vec<ComplexReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexReport {
    pub kind: String,
    pub vertices: usize,
    pub f_vector: Vec<usize>,
    pub reduced_euler: i64,
    pub homology: Vec<HomologyEntry>,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyEntry {
    pub dim: isize,
    pub betti: usize,
    pub torsion: Vec<String>,
}

pub fn homology_entries(h: &HomologyProfile<Integer>) -> Vec<HomologyEntry> {
    h.groups()
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_zero())
        .map(|(i, g)| HomologyEntry {
            dim: i as isize - 1,
            betti: g.betti,
            torsion: g.torsion.iter().map(ToString::to_string).collect(),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ZetaReport {
    pub series: String,
    pub terms: Vec<SeriesTerm>,
    pub p_at_minus_one: String,
    pub bouc_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesTerm {
    pub n: u64,
    pub coefficient: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WedgeReport {
    pub descriptor: String,
    pub code: String,
    pub trace: Vec<DecompositionStep>,
    pub normal_homology: Vec<HomologyEntry>,
    pub verified: bool,
}

pub fn family_for(g: &FiniteGroup, choice: FamilyChoice) -> CliResult<SubgroupFamily> {
    Ok(match choice {
        FamilyChoice::All => family_all_proper(g)?,
        FamilyChoice::Normal => family_normal_proper(g)?,
        FamilyChoice::Maximal => maximal_subfamily(&family_all_proper(g)?),
    })
}

pub fn build_complex(
    g: &FiniteGroup,
    family: &SubgroupFamily,
    kind: ComplexChoice,
    caps: &Caps,
) -> CliResult<SimplicialComplex> {
    let cosets = cosets_of_family(family);
    Ok(match kind {
        ComplexChoice::Order => order_complex(&cosets, caps.simplices)?,
        ComplexChoice::Nerve => nerve_complex(&cosets, caps.simplices)?,
        ComplexChoice::Delta => coset_simplicial(&cosets, g, caps.simplices)?,
    })
}

struct Clock {
    on: bool,
    last: Instant,
    marks: BTreeMap<String, f64>,
}

impl Clock {
    fn mark(&mut self, stage: &str) {
        if self.on {
            let now = Instant::now();
            self.marks
                .insert(stage.to_string(), (now - self.last).as_secs_f64() * 1e3);
            self.last = now;
        }
    }
}

pub fn cmd_analyze(spec_text: &str, opts: &AnalyzeOptions) -> CliResult<AnalysisReport> {
    let mut clock = Clock {
        on: opts.timings,
        last: Instant::now(),
        marks: BTreeMap::new(),
    };
    let spec = GroupSpec::from_str(spec_text)?;
    let g = build_group(&spec, &opts.caps)?;
    let subgroups = g.all_subgroups()?.len();
    let group = GroupSummary {
        spec: spec.to_string(),
        order: g.order(),
        exponent: g.exponent(),
        abelian: g.is_abelian(),
        subgroups,
        normal_subgroups: g.normal_subgroups()?.len(),
        abelian_invariants: g.abelian_invariants()?,
        frattini_order: if g.is_trivial() {
            None
        } else {
            Some(frattini(&g)?.order())
        },
    };
    clock.mark("group");

    let mut families = Vec::new();
    let mut choices = opts.families.clone();
    choices.sort();
    choices.dedup();
    let mut kinds = opts.complexes.clone();
    kinds.sort();
    kinds.dedup();
    for choice in choices {
        let family = family_for(&g, choice)?;
        let mut complexes = Vec::new();
        for &kind in &kinds {
            let k = build_complex(&g, &family, kind, &opts.caps)?;
            let h = homology(&k)?;
            if let Some(dir) = &opts.export_dir {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
                let path = dir.join(format!("{}-{}.txt", family.kind().name(), kind.name()));
                std::fs::write(&path, k.to_text()).map_err(|e| CliError::io(&path, e))?;
            }
            complexes.push(ComplexReport {
                kind: kind.name().into(),
                vertices: k.num_vertices(),
                f_vector: k.f_vector(),
                reduced_euler: k.reduced_euler(),
                homology: homology_entries(&h),
                summary: h.to_string(),
            });
        }
        families.push(FamilyReport {
            name: family.kind().name().into(),
            subgroups: family.len(),
            cosets: cosets_of_family(&family).len(),
            intersection_closed: family.intersection_closed(),
            complexes,
        });
    }
    clock.mark("complexes");

    let table = moebius_table::<Integer>(&g)?;
    let series = hall_series(&g, &table)?;
    let p = eval_p::<Integer>(&g, -1)?;
    let all_poset = order_complex(
        &cosets_of_family(&family_all_proper(&g)?),
        opts.caps.simplices,
    )?;
    let zeta = ZetaReport {
        series: series.to_string(),
        terms: series
            .terms()
            .iter()
            .map(|(n, c)| SeriesTerm {
                n: *n,
                coefficient: c.to_string(),
            })
            .collect(),
        p_at_minus_one: p.to_string(),
        bouc_holds: p == Integer::from(-all_poset.reduced_euler()).into(),
    };
    clock.mark("zeta");

    let (desc, trace) = predict_normal_wedge(&g)?;
    let normal_poset = order_complex(
        &cosets_of_family(&family_normal_proper(&g)?),
        opts.caps.simplices,
    )?;
    let nh = homology(&normal_poset)?;
    let wedge = WedgeReport {
        descriptor: desc.to_string(),
        code: desc.code(),
        trace: trace.steps.clone(),
        normal_homology: homology_entries(&nh),
        verified: nh == desc.homology(),
    };
    clock.mark("wedge");

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        group,
        families,
        zeta,
        wedge,
        timings_ms: opts.timings.then_some(clock.marks),
    })
}

fn invariants_text(inv: &[u64]) -> String {
    if inv.is_empty() {
        "trivial".into()
    } else {
        inv.iter()
            .map(|d| format!("Z{d}"))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

fn step_text(step: &DecompositionStep) -> String {
    match step {
        DecompositionStep::SimpleBase { group, order } => {
            format!("simple base {group} (order {order})")
        }
        DecompositionStep::QuotientStep { minimal_normal } => {
            format!("quotient by minimal normal {minimal_normal}")
        }
        DecompositionStep::ProductStep {
            minimal_normal,
            complement,
            large_cosets,
        } => {
            format!("product M={minimal_normal} x K={complement}, {large_cosets} large cosets")
        }
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let g = &self.group;
        let _ = writeln!(out, "group {}", g.spec);
        let _ = writeln!(
            out,
            "  order {}, exponent {}, {}, {} subgroups ({} normal), abelianization {}",
            g.order,
            g.exponent,
            if g.abelian { "abelian" } else { "nonabelian" },
            g.subgroups,
            g.normal_subgroups,
            invariants_text(&g.abelian_invariants)
        );
        if let Some(f) = g.frattini_order {
            let _ = writeln!(out, "  Frattini subgroup of order {f}");
        }
        for fam in &self.families {
            let _ = writeln!(
                out,
                "family {}: {} subgroups, {} cosets{}",
                fam.name,
                fam.subgroups,
                fam.cosets,
                if fam.intersection_closed {
                    ", intersection-closed"
                } else {
                    ""
                }
            );
            for c in &fam.complexes {
                let _ = writeln!(
                    out,
                    "  {} complex: f-vector {:?}, reduced Euler characteristic {}, homology {}",
                    c.kind, c.f_vector, c.reduced_euler, c.summary
                );
            }
        }
        let _ = writeln!(out, "zeta P(G,s) = {}", self.zeta.series);
        let _ = writeln!(
            out,
            "  P(G,-1) = {}, minus reduced Euler characteristic of the coset poset: {}",
            self.zeta.p_at_minus_one,
            if self.zeta.bouc_holds {
                "equal"
            } else {
                "DIFFERENT"
            }
        );
        let _ = writeln!(
            out,
            "wedge {} ({})",
            self.wedge.descriptor,
            if self.wedge.verified {
                "matches homology"
            } else {
                "DOES NOT match homology"
            }
        );
        for (depth, step) in self.wedge.trace.iter().enumerate() {
            let _ = writeln!(out, "  {}{}", "  ".repeat(depth), step_text(step));
        }
        if let Some(t) = &self.timings_ms {
            for (stage, ms) in t {
                let _ = writeln!(out, "time {stage}: {ms:.1} ms");
            }
        }
        out
    }
}
