//! Full per-order runs of a model problem: criterion, factor accuracy and the
//! empirical distances to a high-order reference truncation, written out as CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::families::ExampleFamily;
use crate::accuracy::{self, factor_accuracy, AccuracyReport};
use crate::arith::rational::{format_sig, to_f64};
use crate::arith::UpperBound;
use crate::criterion::{self, certify_stability, first_certified, TruncationAnalysis, ZetaMode};
use crate::engine::FactorisationResult;
use crate::error::{Error, Result};
use crate::laurent::NormBound;
use crate::normalise::NormaliseMode;
use crate::tail::truncation_distance;

#[derive(Clone, Debug)]
pub struct ReproduceConfig {
    /// Largest order in the tables.
    pub n_max: u64,
    /// Order of the truncation used as a stand-in for the full function.
    pub reference_order: u64,
    pub zeta: ZetaMode,
    pub mode: NormaliseMode,
    pub jobs: usize,
}

impl ReproduceConfig {
    pub fn for_family(family: &ExampleFamily) -> Self {
        Self { n_max: 30, reference_order: 40, zeta: ZetaMode::Fixed(family.default_zeta.clone()), mode: NormaliseMode::Auto, jobs: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct OrderRow {
    pub analysis: TruncationAnalysis,
    pub accuracy: AccuracyReport,
    /// `||a_{n_max} - a_N||_W`
    pub dist_n_max: NormBound,
    /// `||a_ref - a_N||_W`
    pub dist_reference: NormBound,
    /// `||a_plus^(ref) - a_plus^(N)||_W`, when both factorisations are normalised alike.
    pub dist_plus_reference: Option<NormBound>,
    pub dist_minus_reference: Option<NormBound>,
    /// `||a_plus^(N) - a_plus^(N-1)||_W`
    pub step_plus: Option<NormBound>,
    pub step_minus: Option<NormBound>,
}

impl OrderRow {
    pub fn n(&self) -> u64 {
        self.analysis.report.n
    }
}

#[derive(Clone, Debug)]
pub struct Reproduction {
    pub family: ExampleFamily,
    pub config: ReproduceConfig,
    pub rows: Vec<OrderRow>,
    /// The analysis at the reference order.
    pub reference: TruncationAnalysis,
    pub first_certified: Option<u64>,
}

fn comparable(a: &FactorisationResult, b: &FactorisationResult) -> bool {
    a.indices == b.indices && a.normalisation == b.normalisation && a.is_stable()
}

fn factor_distances(a: &FactorisationResult, b: &FactorisationResult) -> (Option<NormBound>, Option<NormBound>) {
    if !comparable(a, b) {
        return (None, None);
    }
    (Some((&a.a_plus - &b.a_plus).wiener_norm()), Some((&a.a_minus - &b.a_minus).wiener_norm()))
}

pub fn reproduce(family: &ExampleFamily, config: &ReproduceConfig) -> Result<Reproduction> {
    if config.n_max == 0 || config.reference_order < config.n_max {
        return Err(Error::InvalidParameter("need 1 <= n_max <= reference order".into()));
    }
    let mut orders: Vec<u64> = (1..=config.n_max).collect();
    if config.reference_order > config.n_max {
        orders.push(config.reference_order);
    }
    let mut analyses = certify_stability(&family.model, &orders, &config.zeta, config.mode, config.jobs)?;
    let reference = if config.reference_order > config.n_max {
        analyses.pop().expect("reference order was requested")
    } else {
        analyses.last().expect("n_max >= 1").clone()
    };
    let top = analyses.last().expect("n_max >= 1").a_n.clone();
    let mut rows: Vec<OrderRow> = Vec::with_capacity(analyses.len());
    for analysis in analyses {
        let accuracy = factor_accuracy(&analysis, family.theta, &analysis.report.delta_n)?;
        let (dist_plus_reference, dist_minus_reference) = factor_distances(&reference.factorisation, &analysis.factorisation);
        let (step_plus, step_minus) = match rows.last() {
            Some(prev) => factor_distances(&analysis.factorisation, &prev.analysis.factorisation),
            None => (None, None),
        };
        rows.push(OrderRow {
            dist_n_max: truncation_distance(&top, &analysis.a_n),
            dist_reference: truncation_distance(&reference.a_n, &analysis.a_n),
            dist_plus_reference,
            dist_minus_reference,
            step_plus,
            step_minus,
            accuracy,
            analysis,
        });
    }
    let reports: Vec<_> = rows.iter().map(|r| r.analysis.report.clone()).collect();
    Ok(Reproduction { family: family.clone(), config: config.clone(), first_certified: first_certified(&reports), rows, reference })
}

fn opt(b: &Option<UpperBound>) -> String {
    b.as_ref().map(|b| format_sig(&b.value, 10)).unwrap_or_default()
}

/// Provenance written at the top of every output file.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub description: String,
    pub n_max: u64,
    pub reference_order: u64,
    pub zeta: String,
    pub normalise: String,
    pub timestamp: Option<String>,
}

impl Provenance {
    pub fn new(r: &Reproduction, timestamp: Option<String>) -> Self {
        let zeta = match &r.config.zeta {
            ZetaMode::Fixed(c) => format!("fixed zeta1={} zeta2={}", c.zeta1, c.zeta2),
            ZetaMode::Optimize { epsilon, .. } => format!("optimised per order, epsilon={epsilon}"),
        };
        Self {
            description: r.family.describe(),
            n_max: r.config.n_max,
            reference_order: r.config.reference_order,
            zeta,
            normalise: format!("{:?}", r.config.mode).to_lowercase(),
            timestamp,
        }
    }

    pub fn header(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}", self.description);
        let _ = writeln!(s, "# n_max={} reference_order={} {} normalise={}", self.n_max, self.reference_order, self.zeta, self.normalise);
        if let Some(t) = &self.timestamp {
            let _ = writeln!(s, "# generated {t}");
        }
        s
    }
}

/// The five tables as `(file stem, contents)`.
pub fn tables(r: &Reproduction, prov: &Provenance) -> Vec<(String, String)> {
    let id = r.family.id.to_string();
    let head = prov.header();

    let mut crit = format!("{head}{}\n", criterion::CSV_HEADER);
    for row in &r.rows {
        let _ = writeln!(crit, "{}", row.analysis.report.csv_row());
    }

    let mut acc = format!("{head}{}\n", accuracy::CSV_HEADER);
    for row in &r.rows {
        let _ = writeln!(acc, "{}", row.accuracy.csv_row(row.n()));
    }

    let mut trunc = format!("{head}N,delta_N,gamma_N,dist_n_max,dist_reference\n");
    for row in &r.rows {
        let _ = writeln!(
            trunc,
            "{},{},{},{},{}",
            row.n(),
            format_sig(&row.analysis.report.delta_n.value, 10),
            opt(&row.accuracy.gamma_n),
            format_sig(&row.dist_n_max.value, 10),
            format_sig(&row.dist_reference.value, 10)
        );
    }

    let mut fac = format!("{head}N,delta_plus,delta_minus,dist_plus_reference,dist_minus_reference,step_plus,step_minus\n");
    for row in &r.rows {
        let _ = writeln!(
            fac,
            "{},{},{},{},{},{},{}",
            row.n(),
            opt(&row.accuracy.delta_plus),
            opt(&row.accuracy.delta_minus),
            opt(&row.dist_plus_reference),
            opt(&row.dist_minus_reference),
            opt(&row.step_plus),
            opt(&row.step_minus)
        );
    }

    let mut summary = format!("{head}key,value\n");
    let first = r.first_certified.map(|n| n.to_string()).unwrap_or_else(|| "none".into());
    let _ = writeln!(summary, "first_certified,{first}");
    let indices: Vec<String> = r.rows.iter().map(|row| format!("{}:{}", row.analysis.report.indices.0, row.analysis.report.indices.1)).collect();
    let _ = writeln!(summary, "indices,{}", indices.join(" "));
    let (i0, i1) = r.reference.factorisation.indices;
    let _ = writeln!(summary, "reference_indices,{i0}:{i1}");

    vec![
        (format!("{id}_criterion"), crit),
        (format!("{id}_accuracy"), acc),
        (format!("{id}_truncation"), trunc),
        (format!("{id}_factors"), fac),
        (format!("{id}_summary"), summary),
    ]
}

/// Two-column `N,log10(value)` series for every positive column.
pub fn plot_series(r: &Reproduction) -> Vec<(String, String)> {
    type Pick = fn(&OrderRow) -> Option<UpperBound>;
    let columns: [(&str, Pick); 9] = [
        ("delta_N", |w| Some(w.analysis.report.delta_n.clone())),
        ("q_N", |w| Some(w.analysis.report.q_n.clone())),
        ("norm_inv_plus", |w| Some(w.analysis.report.norm_inv_plus.clone())),
        ("norm_inv_minus", |w| Some(w.analysis.report.norm_inv_minus.clone())),
        ("gamma_N", |w| w.accuracy.gamma_n.clone()),
        ("dist_reference", |w| Some(w.dist_reference.clone())),
        ("delta_plus", |w| w.accuracy.delta_plus.clone()),
        ("delta_minus", |w| w.accuracy.delta_minus.clone()),
        ("dist_minus_reference", |w| w.dist_minus_reference.clone()),
    ];
    let id = r.family.id;
    columns
        .iter()
        .filter_map(|(name, pick)| {
            let mut s = format!("N,log10_{name}\n");
            let mut any = false;
            for row in &r.rows {
                if let Some(v) = pick(row) {
                    let x = to_f64(&v.value);
                    if x > 0.0 {
                        let _ = writeln!(s, "{},{:.10}", row.n(), x.log10());
                        any = true;
                    }
                }
            }
            any.then(|| (format!("{id}_plot_{name}"), s))
        })
        .collect()
}

/// Writes the tables and plot series into `dir`; returns the paths written.
pub fn write_reproduction(r: &Reproduction, dir: &Path, timestamp: Option<String>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let prov = Provenance::new(r, timestamp);
    let mut written = Vec::new();
    for (stem, body) in tables(r, &prov).into_iter().chain(plot_series(r)) {
        let path = dir.join(format!("{stem}.csv"));
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}
