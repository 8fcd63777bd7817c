//! Per-graph bounds on the number of embeddings, the bound table over the
//! census, and the H2 multiplier experiment.

use std::collections::BTreeMap;

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::cayley_menger::build_cm;
use crate::census::{canonical_form, extensions, generate_laman};
use crate::embed::{enumerate_h1, sample_lengths};
use crate::graph::Graph;
use crate::henneberg::{h1_construction, GraphClass, StepKind};
use crate::laman::is_laman_pebble;
use crate::mixed_volume::{bezout_bound, mv_inclusion_exclusion, mv_mixed_cells};
use crate::rng::derive;
use crate::system::{find_systems, summarize, MinorSystem, SearchOptions, SizeClass, SystemSummary, DEFAULT_BUDGET};
use crate::verify::real_root_report;
use crate::{Error, Result};

pub const TABLE_MAX_N: usize = 7;
/// Published upper bound for 8 vertices, used as the base of the
/// extrapolated rows.
pub const LITERATURE_BOUND_N8: u64 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundRule {
    H1Power,
    MVTimes2,
    MVConjectureNoDouble,
}

#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub seed: u64,
    pub verify: bool,
    pub allow_n2_conjecture: bool,
    /// Run the minor-system pipeline on H1 graphs too.
    pub cross_check_h1: bool,
    pub budget: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            verify: false,
            allow_n2_conjecture: false,
            cross_check_h1: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub lengths_seed: u64,
    /// Real roots of the chosen system that complete to planar embeddings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real_embedding_roots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus_roots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver_unreliable: Option<bool>,
    /// Embeddings found by circle intersection, up to rigid motion and
    /// reflection (H1 graphs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1_embeddings: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1_real_embeddings: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub graph: String,
    pub n: usize,
    pub laman: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<GraphClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen_system: Option<SystemSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mv: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bezout: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_mod_rigid: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule_applied: Option<BoundRule>,
    pub conjectural: bool,
    pub possibly_loose: bool,
    pub systems_found: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

struct Scored {
    system: MinorSystem,
    mv: u64,
    bezout: u64,
}

// MV of every system by both algorithms; any disagreement is fatal.
fn score(systems: Vec<MinorSystem>, seed: u64) -> Result<Vec<Scored>> {
    let mut scored: Vec<Scored> = systems
        .into_par_iter()
        .map(|system| {
            let polys = system.newton_polytopes()?;
            let ie = mv_inclusion_exclusion(&polys)?.value;
            let mc = mv_mixed_cells(&polys, seed)?.value;
            if ie != mc {
                return Err(Error::MixedVolumeDisagreement {
                    inclusion_exclusion: ie,
                    mixed_cells: mc,
                });
            }
            let bezout = bezout_bound(&system);
            Ok(Scored { system, mv: ie, bezout })
        })
        .collect::<Result<_>>()?;
    scored.sort_by_key(|a| (a.mv, a.bezout, a.system.index_sets()));
    Ok(scored)
}

pub fn analyze(g: &Graph, options: &AnalyzeOptions) -> Result<BoundReport> {
    let n = g.n();
    let mut report = BoundReport {
        graph: g.id(),
        n,
        laman: is_laman_pebble(g)?,
        class: None,
        chosen_system: None,
        mv: None,
        bezout: None,
        bound_mod_rigid: None,
        rule_applied: None,
        conjectural: false,
        possibly_loose: false,
        systems_found: 0,
        seed: options.seed,
        verification: None,
    };
    if !report.laman {
        return Ok(report);
    }
    let h1 = h1_construction(g)?;
    let class = if h1.is_some() { GraphClass::H1 } else { GraphClass::H2 };
    report.class = Some(class);
    if class == GraphClass::H1 {
        report.bound_mod_rigid = Some(1u64 << (n - 2));
        report.rule_applied = Some(BoundRule::H1Power);
    }

    let mut chosen: Option<MinorSystem> = None;
    if n >= 5 && (class == GraphClass::H2 || options.cross_check_h1) {
        let cm = build_cm(g);
        let search = SearchOptions {
            budget: options.budget,
            seed: options.seed,
            rank: false,
            require_completable: true,
        };
        let mut size = SizeClass::NMinus3;
        let mut scored = score(find_systems(&cm, size, &search)?.systems, options.seed)?;
        if scored.is_empty() {
            size = SizeClass::NMinus2;
            scored = score(find_systems(&cm, size, &search)?.systems, options.seed)?;
        }
        report.systems_found = scored.len();
        if let Some(best) = scored.into_iter().next() {
            report.chosen_system = Some(summarize(&best.system, &cm, options.seed));
            report.mv = Some(best.mv);
            report.bezout = Some(best.bezout);
            if class == GraphClass::H2 {
                let (bound, rule) = match size {
                    SizeClass::NMinus2 if options.allow_n2_conjecture => (best.mv, BoundRule::MVConjectureNoDouble),
                    _ => (2 * best.mv, BoundRule::MVTimes2),
                };
                report.bound_mod_rigid = Some(bound);
                report.rule_applied = Some(rule);
                report.conjectural = rule == BoundRule::MVConjectureNoDouble;
                report.possibly_loose = size == SizeClass::NMinus2 && !options.allow_n2_conjecture;
            }
            chosen = Some(best.system);
        }
    }

    if options.verify {
        let lengths_seed = derive(options.seed, 0x1e9).next_u64();
        let lengths = sample_lengths(g, lengths_seed)?;
        let mut v = Verification {
            lengths_seed,
            real_embedding_roots: None,
            torus_roots: None,
            solver_unreliable: None,
            h1_embeddings: None,
            h1_real_embeddings: None,
        };
        if let Some(seq) = &h1 {
            let set = enumerate_h1(g, seq, &lengths)?;
            v.h1_embeddings = Some(set.len());
            v.h1_real_embeddings = Some(set.real_count());
        }
        if let Some(sys) = &chosen {
            let r = real_root_report(g, sys, &lengths, options.seed)?;
            v.real_embedding_roots = Some(r.embedding_roots);
            v.torus_roots = Some(r.solver.count.torus_roots);
            v.solver_unreliable = Some(r.solver.unreliable);
        }
        report.verification = Some(v);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub bound: u64,
    pub heuristic: bool,
    /// Number of Laman graphs analyzed (computed rows).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graphs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h2_graphs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attained_by: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Every census graph on `n` vertices with its report, in canonical order.
pub fn analyze_census(n: usize, options: &AnalyzeOptions) -> Result<Vec<BoundReport>> {
    generate_laman(n)?.par_iter().map(|g| analyze(g, options)).collect()
}

/// Maximum bound over the census for each `n` in `3..=n_max`; with
/// `n_max = 7` the rows for 8, 9 and 10 vertices are appended as
/// extrapolations (the published 8-vertex bound, then factors of 4).
pub fn table(n_max: usize, options: &AnalyzeOptions) -> Result<Vec<TableRow>> {
    if !(3..=TABLE_MAX_N).contains(&n_max) {
        return Err(Error::Precondition(format!(
            "table rows are computed for 3 <= n <= {TABLE_MAX_N}, got {n_max}"
        )));
    }
    let mut rows = Vec::new();
    for n in 3..=n_max {
        let reports = analyze_census(n, options)?;
        let mut best: Option<&BoundReport> = None;
        for r in &reports {
            if r.bound_mod_rigid > best.and_then(|b| b.bound_mod_rigid) {
                best = Some(r);
            }
        }
        let best = best.ok_or_else(|| Error::Precondition(format!("no bound at n = {n}")))?;
        rows.push(TableRow {
            n,
            bound: best.bound_mod_rigid.unwrap_or_default(),
            heuristic: false,
            graphs: Some(reports.len()),
            h2_graphs: Some(reports.iter().filter(|r| r.class == Some(GraphClass::H2)).count()),
            attained_by: Some(best.graph.clone()),
            note: None,
        });
    }
    if n_max == TABLE_MAX_N {
        let mut bound = LITERATURE_BOUND_N8;
        rows.push(TableRow {
            n: 8,
            bound,
            heuristic: true,
            graphs: None,
            h2_graphs: None,
            attained_by: None,
            note: Some("published bound, not computed".into()),
        });
        for n in 9..=10 {
            bound *= 4;
            rows.push(TableRow {
                n,
                bound,
                heuristic: true,
                graphs: None,
                h2_graphs: None,
                attained_by: None,
                note: Some("4 x previous row".into()),
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionRatio {
    pub parent: String,
    pub child: String,
    pub step: StepKind,
    pub parent_bound: u64,
    pub child_bound: u64,
    pub ratio: f64,
    /// An H2 step more than quadrupling the bound.
    pub counterexample: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepSummary {
    pub n: usize,
    pub step: StepKind,
    pub extensions: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub n_max: usize,
    pub summaries: Vec<StepSummary>,
    pub counterexamples: usize,
    pub ratios: Vec<ExtensionRatio>,
}

/// Child bound over parent bound, when both have one.
pub fn bound_ratio(parent: &BoundReport, child: &BoundReport) -> Option<f64> {
    Some(child.bound_mod_rigid? as f64 / parent.bound_mod_rigid? as f64)
}

/// Ratio of child to parent bound for every single Henneberg extension of
/// every census graph, children up to `n_max` vertices. Ratios above 4
/// after an H2 step are flagged, never asserted against.
pub fn h2_multiplier_experiment(n_max: usize, options: &AnalyzeOptions) -> Result<ExperimentReport> {
    if !(4..=TABLE_MAX_N).contains(&n_max) {
        return Err(Error::Precondition(format!(
            "experiment supports 4 <= n_max <= {TABLE_MAX_N}, got {n_max}"
        )));
    }
    let mut bounds: BTreeMap<(usize, u64), (String, u64)> = BTreeMap::new();
    for n in 3..=n_max {
        let census = generate_laman(n)?;
        let reports = census
            .par_iter()
            .map(|g| analyze(g, options))
            .collect::<Result<Vec<_>>>()?;
        for (g, r) in census.iter().zip(reports) {
            let bound = r
                .bound_mod_rigid
                .ok_or_else(|| Error::Precondition(format!("no bound for {}", r.graph)))?;
            bounds.insert((n, canonical_form(g).0), (r.graph, bound));
        }
    }
    let mut ratios = Vec::new();
    for n in 3..n_max {
        for g in generate_laman(n)? {
            let (parent, parent_bound) = bounds[&(n, canonical_form(&g).0)].clone();
            for (step, child) in extensions(&g) {
                let (child_id, child_bound) = bounds[&(n + 1, canonical_form(&child).0)].clone();
                let ratio = child_bound as f64 / parent_bound as f64;
                ratios.push(ExtensionRatio {
                    parent: parent.clone(),
                    child: child_id,
                    step,
                    parent_bound,
                    child_bound,
                    ratio,
                    counterexample: step == StepKind::H2 && child_bound > 4 * parent_bound,
                });
            }
        }
    }
    let mut summaries = Vec::new();
    for n in 4..=n_max {
        for step in [StepKind::H1, StepKind::H2] {
            let sel: Vec<f64> = ratios
                .iter()
                .filter(|r| r.step == step && r.child.starts_with(&format!("n{n}:")))
                .map(|r| r.ratio)
                .collect();
            if sel.is_empty() {
                continue;
            }
            summaries.push(StepSummary {
                n,
                step,
                extensions: sel.len(),
                min_ratio: sel.iter().copied().fold(f64::INFINITY, f64::min),
                max_ratio: sel.iter().copied().fold(0.0, f64::max),
            });
        }
    }
    Ok(ExperimentReport {
        n_max,
        summaries,
        counterexamples: ratios.iter().filter(|r| r.counterexample).count(),
        ratios,
    })
}
