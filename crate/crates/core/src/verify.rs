//! Acceptance checks shared by the test suite and `gtcnet verify`.
//!
//! Every check recomputes its numbers from the library; nothing here is
//! cached on disk. Tolerances are the engineering defaults listed with each
//! check.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::analysis::{
    self, asym_eval, convergence, limit_law_report, non_increasing, sandwich_check, AsymFormula,
};
use crate::combin::ln_big;
use crate::engine::{
    self, cached_table, erratum_diagnostic, gtc_direct, gtc_table, gtc_totals, literal_trivariate, low_k_columns,
    max_ret_checked, EngineConfig, ErratumReport,
};
use crate::network::PhyloNetwork;
use crate::onecomp::{otc, otc_total};
use crate::oracle::{
    component_graph, count_one_component, enumerate_tree_child_not_galled, is_galled, is_tree_child, Corpus,
};
use crate::sampler::{draw_rng, sample_plan, to_newick};

/// `GTC_n` for `n = 1..=10`.
pub const SMALL_TOTALS: [u64; 10] = [
    1,
    3,
    48,
    1611,
    87660,
    6891615,
    734112540,
    101717195895,
    17813516259420,
    3857230509496875,
];

/// Sizes for the trend checks on totals and columns.
pub const GRID: [usize; 4] = [50, 100, 200, 300];
pub const I_GRID: [usize; 3] = [40, 80, 120];
pub const OTC_GRID: [usize; 4] = [50, 100, 200, 400];

/// Trend-check tolerances. The defaults are engineering choices, not
/// proven error bounds.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Bound on `|r_300 - 1|` for the total and max-reticulated ratios.
    pub ratio: f64,
    /// Bound on `|E(R_200) - (200 - √200)|`.
    pub mean: f64,
    /// Bound on `|Var(R_200)/(√200/2) - 1|`.
    pub variance: f64,
    /// Bound on the Poisson total variation at n = 120.
    pub poisson: f64,
    /// Significance level of the uniformity test.
    pub alpha: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ratio: 0.25,
            mean: 2.0,
            variance: 0.15,
            poisson: 0.05,
            alpha: 1e-3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Totals to n = 10, the n ≤ 4 oracle comparison and the sandwich to n = 50.
    Fast,
    Full,
}

impl std::str::FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(format!("unknown level {s:?} (expected fast or full)")),
        }
    }
}

pub const FAST_SANDWICH_N: usize = 50;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Extra numbers that do not enter the verdict.
    pub diagnostics: Vec<String>,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {}  {} ({:.1} s)",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail,
            self.seconds
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Draws per size for the uniformity check.
    pub draws: u64,
    pub seed: u64,
    /// Corrupt one engine cell before the oracle comparison (self-test of the harness).
    pub tamper: bool,
    pub tolerances: Tolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            draws: 1_000_000,
            seed: 20240611,
            tamper: false,
            tolerances: Tolerances::default(),
        }
    }
}

pub const NAMES: [&str; 13] = [
    "small-totals",
    "table-vs-oracle",
    "formula-routes",
    "max-reticulated",
    "sandwich",
    "total-asymptotics",
    "max-ret-asymptotics",
    "fixed-k-asymptotics",
    "reticulation-normal-law",
    "poisson-law",
    "one-component",
    "sampler-uniformity",
    "component-graph",
];

struct Outcome {
    passed: bool,
    detail: String,
    diagnostics: Vec<String>,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome {
        passed,
        detail,
        diagnostics: Vec::new(),
    }
}

fn fail(err: impl std::fmt::Display) -> Outcome {
    outcome(false, format!("error: {err}"))
}

/// Runs criterion `id` (1..=13).
pub fn run_criterion(id: u8, opts: &VerifyOptions) -> CriterionResult {
    assert!((1..=13).contains(&id), "criteria are numbered 1 to 13");
    let start = Instant::now();
    let o = match id {
        1 => small_totals(),
        2 => oracle_equivalence(opts),
        3 => formula_routes(),
        4 => max_reticulated(),
        5 => sandwich(300),
        6 => total_asymptotics(&opts.tolerances),
        7 => max_ret_asymptotics(&opts.tolerances),
        8 => fixed_k(),
        9 => normal_law(&opts.tolerances),
        10 => poisson_law(&opts.tolerances),
        11 => one_component(),
        12 => sampler_uniformity(opts),
        _ => component_graph_check(),
    };
    CriterionResult {
        id,
        name: NAMES[id as usize - 1],
        passed: o.passed,
        detail: o.detail,
        diagnostics: o.diagnostics,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionResult> {
    (1..=13).map(|id| run_criterion(id, opts)).collect()
}

/// The fast subset: criteria 1 and 2, and criterion 5 cut at n = 50.
pub fn run_fast(opts: &VerifyOptions) -> Vec<CriterionResult> {
    let mut out = vec![run_criterion(1, opts), run_criterion(2, opts)];
    let start = Instant::now();
    let o = sandwich(FAST_SANDWICH_N);
    out.push(CriterionResult {
        id: 5,
        name: NAMES[4],
        passed: o.passed,
        detail: o.detail,
        diagnostics: o.diagnostics,
        seconds: start.elapsed().as_secs_f64(),
    });
    out
}

/// Machine-readable verdict of one verification run.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
    pub erratum: ErratumReport,
}

impl VerifyReport {
    pub fn failing(&self) -> Vec<&'static str> {
        self.criteria.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

pub fn verify(level: Level, opts: &VerifyOptions) -> VerifyReport {
    let criteria = match level {
        Level::Fast => run_fast(opts),
        Level::Full => run_all(opts),
    };
    VerifyReport {
        level,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
        erratum: erratum_diagnostic(),
    }
}

fn small_totals() -> Outcome {
    let start = Instant::now();
    let got = match gtc_totals(10) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    let secs = start.elapsed().as_secs_f64();
    let bad: Vec<usize> = (1..=10).filter(|&n| got[n] != BigUint::from(SMALL_TOTALS[n - 1])).collect();
    outcome(
        bad.is_empty() && secs < 5.0,
        format!("n = 1..10 match: {}, mismatches at {bad:?}, {secs:.3} s (< 5 s)", bad.is_empty()),
    )
}

fn oracle_equivalence(opts: &VerifyOptions) -> Outcome {
    let table = match gtc_table(4, true) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let mut mismatches = Vec::new();
    for n in 1..=4 {
        let corpus = match Corpus::gtc(n) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        let counts = corpus.counts();
        for k in 0..n {
            for i in 0..=k {
                let mut engine = table.get_i(n, k, i).unwrap_or_default();
                if opts.tamper && (n, k, i) == (4, 3, 2) {
                    engine += 1u32;
                }
                let oracle = BigUint::from(counts.get(&(k, i)).copied().unwrap_or(0));
                if engine != oracle {
                    mismatches.push(format!("(n={n},k={k},i={i}): engine {engine} vs oracle {oracle}"));
                }
            }
        }
    }
    let row3: Vec<String> = table.row(3).iter().map(|c| c.to_string()).collect();
    let col = table.get(4, 3);
    let passed = mismatches.is_empty() && row3 == ["3", "21", "24"] && col == BigUint::from(600u32);
    outcome(
        passed,
        format!("cells n ≤ 4 mismatches {}, row 3 = ({}), GTC_{{4,3}} = {col}", mismatches.len(), row3.join(", ")),
    )
}

fn formula_routes() -> Outcome {
    let table = match gtc_table(7, true) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let mut bad = Vec::new();
    for n in 1..=7 {
        match gtc_direct(n) {
            Ok(row) if row == table.row(n) => {}
            Ok(_) => bad.push(n),
            Err(e) => return fail(e),
        }
    }
    let literal = match literal_trivariate(7) {
        Ok(l) => l,
        Err(e) => return fail(e),
    };
    let mut literal_bad = 0;
    for n in 1..=7 {
        for k in 0..n {
            for i in 0..=k {
                if Some(&literal[n][k][i]) != table.get_i(n, k, i).as_ref() {
                    literal_bad += 1;
                }
            }
        }
    }
    outcome(
        bad.is_empty() && literal_bad == 0,
        format!("component-tree sum rows n ≤ 7 mismatching: {bad:?}; literal engine equation cells mismatching: {literal_bad}"),
    )
}

fn max_reticulated() -> Outcome {
    let series = match max_ret_checked(300) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let table = match cached_table(EngineConfig::default().bivariate_cap) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let table_bad = (1..=table.max_n()).filter(|&n| table.get(n, n - 1) != series[n - 1]).count();
    let e = erratum_diagnostic();
    let printed_ok = e.values[0].1 == "2" && e.values[2].1 == "84";
    outcome(
        table_bad == 0 && printed_ok,
        format!(
            "fixed point = Lagrange = deficit-0 column for n ≤ 300; full-table column agrees for n ≤ {} (mismatches {table_bad}); printed form gives {} at n = 1 and {} at n = 3 ({})",
            table.max_n(),
            e.values[0].1,
            e.values[2].1,
            e.status
        ),
    )
}

fn sandwich(n: usize) -> Outcome {
    match sandwich_check(n) {
        Ok(r) => {
            let three = r.row(3).expect("n = 3");
            let ok3 = (three.lower.as_str(), three.gtc.as_str(), three.upper.as_str()) == ("42", "48", "66");
            let last = r.row(n).expect("last row");
            let mut o = outcome(
                ok3,
                format!(
                    "L_n ≤ GTC_n ≤ U_n for n ≤ {n}; n = 3 gives ({}, {}, {})",
                    three.lower, three.gtc, three.upper
                ),
            );
            o.diagnostics.push(format!(
                "n = {n}: U/GTC = {:.4}, GTC/L = {:.4}",
                last.upper_ratio, last.lower_ratio
            ));
            o
        }
        Err(e) => fail(e),
    }
}

fn ratio_trend(
    name: &str,
    exact: impl FnMut(usize) -> Result<BigUint, analysis::AnalysisError>,
    formula: AsymFormula,
    k: Option<usize>,
    strict: bool,
    cap: Option<f64>,
) -> Outcome {
    let r = match convergence(name, &GRID, exact, formula, k) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let d = r.distances();
    let trend = if strict { r.strictly_decreasing } else { r.non_increasing };
    let last = d.last().copied().unwrap_or(f64::NAN);
    let within = cap.is_none_or(|c| last <= c);
    let ratios: Vec<String> = r.rows.iter().map(|x| format!("{:.4}", x.ratio)).collect();
    let mut detail = format!(
        "ratios at {GRID:?} = [{}], |r-1| {} ",
        ratios.join(", "),
        if strict { "strictly decreasing" } else { "non-increasing" },
    );
    detail.push_str(if trend { "yes" } else { "no" });
    if let Some(c) = cap {
        detail.push_str(&format!(", |r_300 - 1| = {last:.4} (≤ {c})"));
    }
    outcome(trend && within, detail)
}

fn total_asymptotics(tol: &Tolerances) -> Outcome {
    let g = match gtc_totals(300) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    let mut o = ratio_trend("gtc_total", |n| Ok(g[n].clone()), AsymFormula::GtcTotal, None, true, Some(tol.ratio));
    let shifted: Vec<String> = GRID
        .iter()
        .map(|&n| {
            let a = asym_eval(AsymFormula::GtcTotal, n, None).expect("n ≥ 1").ln;
            format!("{:.4}", f64::from(ln_big(&g[n]) - a - 0.5).exp())
        })
        .collect();
    o.diagnostics.push(format!(
        "with the constant e^{{1/4}}/2 in place of 1/(2e^{{1/4}}) the ratios are [{}]",
        shifted.join(", ")
    ));
    o
}

fn max_ret_asymptotics(tol: &Tolerances) -> Outcome {
    let m = match engine::max_ret_series(300) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    ratio_trend("max_ret", |n| Ok(m[n - 1].clone()), AsymFormula::MaxRet, None, true, Some(tol.ratio))
}

fn fixed_k() -> Outcome {
    let low = match low_k_columns(300, 3) {
        Ok(l) => l,
        Err(e) => return fail(e),
    };
    let one = ratio_trend("k=1", |n| Ok(low[n][1].clone()), AsymFormula::FixedK, Some(1), false, None);
    let two = ratio_trend("k=2", |n| Ok(low[n][2].clone()), AsymFormula::FixedK, Some(2), false, None);
    outcome(one.passed && two.passed, format!("k = 1: {}; k = 2: {}", one.detail, two.detail))
}

fn normal_law(tol: &Tolerances) -> Outcome {
    let mut reports = Vec::new();
    for n in GRID {
        match limit_law_report(n, false) {
            Ok(r) => reports.push(r),
            Err(e) => return fail(e),
        }
    }
    let at200 = &reports[2];
    let mean_gaps: Vec<f64> = reports.iter().map(|r| r.mean_gap).collect();
    let var_gaps: Vec<f64> = reports.iter().map(|r| r.variance_gap).collect();
    let tvs: Vec<f64> = reports.iter().map(|r| r.tv_normal).collect();
    let passed = at200.mean_gap <= tol.mean
        && at200.variance_gap <= tol.variance
        && non_increasing(&mean_gaps)
        && non_increasing(&var_gaps)
        && non_increasing(&tvs);
    let fmt = |xs: &[f64]| xs.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
    let mut o = outcome(
        passed,
        format!(
            "n = 200: |E - (n - √n)| = {:.4} (≤ {}), |Var/(√n/2) - 1| = {:.4} (≤ {}); over {GRID:?}: mean gaps [{}], variance gaps [{}], TV [{}]",
            at200.mean_gap,
            tol.mean,
            at200.variance_gap,
            tol.variance,
            fmt(&mean_gaps),
            fmt(&var_gaps),
            fmt(&tvs)
        ),
    );
    let nominal: Vec<f64> = reports.iter().map(|r| r.tv_normal_nominal).collect();
    o.diagnostics.push(format!("TV with centering n - √n and variance √n/2: [{}]", fmt(&nominal)));
    o
}

fn poisson_law(tol: &Tolerances) -> Outcome {
    let mut tv = Vec::new();
    let mut defect = Vec::new();
    let mut alt = Vec::new();
    for n in I_GRID {
        match limit_law_report(n, true) {
            Ok(r) => {
                tv.push(r.tv_poisson.expect("requested"));
                defect.push(r.independence_defect.expect("requested"));
            }
            Err(e) => return fail(e),
        }
        match engine::i_distribution(n, analysis::limits::I_LEN) {
            Ok(d) => alt.push(analysis::tv_poisson(&d.probs, d.tail, 0.75)),
            Err(e) => return fail(e),
        }
    }
    let fmt = |xs: &[f64]| xs.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
    let passed = non_increasing(&tv) && tv[2] <= tol.poisson && non_increasing(&defect);
    let mut o = outcome(
        passed,
        format!(
            "over {I_GRID:?}: TV to Poisson(1/4) [{}] (≤ {} at 120), independence defect [{}]",
            fmt(&tv),
            tol.poisson,
            fmt(&defect)
        ),
    );
    o.diagnostics.push(format!("TV to Poisson(3/4): [{}]", fmt(&alt)));
    o
}

fn one_component() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=6 {
        match count_one_component(n) {
            Ok(counts) => {
                for (k, &c) in counts.iter().enumerate() {
                    if otc(n, k) != BigUint::from(c) {
                        bad.push((n, k));
                    }
                }
            }
            Err(e) => return fail(e),
        }
    }
    let r = match convergence("otc_total", &OTC_GRID, |n| Ok(otc_total(n)), AsymFormula::OtcTotal, None) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let d = r.distances();
    outcome(
        bad.is_empty() && r.non_increasing,
        format!(
            "closed form = enumeration for n ≤ 6 (mismatches {bad:?}); |r-1| over {OTC_GRID:?} = [{}] non-increasing {}",
            d.iter().map(|x| format!("{x:.7}")).collect::<Vec<_>>().join(", "),
            if r.non_increasing { "yes" } else { "no" }
        ),
    )
}

/// Chi-square statistic, degrees of freedom and upper-tail p-value for
/// `observed` against a uniform law.
pub fn chi_square_uniform(observed: &[u64]) -> (f64, f64, f64) {
    let total: u64 = observed.iter().sum();
    let e = total as f64 / observed.len() as f64;
    let stat: f64 = observed.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    let df = (observed.len() - 1) as f64;
    let p = 1.0 - ChiSquared::new(df).expect("df > 0").cdf(stat);
    (stat, df, p)
}

/// Uniformity of `draws` samples of size `n` against the oracle list.
pub fn sampler_chi_square(n: usize, draws: u64, seed: u64) -> Result<(f64, f64, f64, u64), String> {
    let corpus = Corpus::gtc(n).map_err(|e| e.to_string())?;
    let index: HashMap<String, usize> = corpus.networks.iter().enumerate().map(|(i, c)| (to_newick(c), i)).collect();
    let mut counts = vec![0u64; index.len()];
    let mut failures = 0u64;
    for d in 0..draws {
        let mut rng = draw_rng(seed, d);
        let plan = sample_plan(n, &mut rng).map_err(|e| e.to_string())?;
        let net = plan.realize();
        if !passes_predicates(&net, plan.root.reticulations()) {
            failures += 1;
            continue;
        }
        match index.get(&to_newick(&net)) {
            Some(&i) => counts[i] += 1,
            None => failures += 1,
        }
    }
    let (stat, df, p) = chi_square_uniform(&counts);
    Ok((stat, df, p, failures))
}

fn passes_predicates(net: &PhyloNetwork, k: usize) -> bool {
    net.is_valid() && is_tree_child(net) && is_galled(net) && net.reticulation_count() == k
}

fn sampler_uniformity(opts: &VerifyOptions) -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for n in [3usize, 4] {
        match sampler_chi_square(n, opts.draws, opts.seed.wrapping_add(n as u64)) {
            Ok((stat, df, p, failures)) => {
                passed &= p > opts.tolerances.alpha && failures == 0;
                parts.push(format!(
                    "n = {n}: χ² = {stat:.1} on {df} df, p = {p:.4}, predicate failures {failures}"
                ));
            }
            Err(e) => return fail(e),
        }
    }
    outcome(passed, format!("{} draws per size; {}", opts.draws, parts.join("; ")))
}

fn component_graph_check() -> Outcome {
    let mut checked = 0usize;
    let mut witnesses = 0usize;
    let mut disagreements = 0usize;
    for n in 1..=4 {
        let gtc = match Corpus::gtc(n) {
            Ok(c) => c.networks,
            Err(e) => return fail(e),
        };
        let others = match enumerate_tree_child_not_galled(n) {
            Ok(o) => o,
            Err(e) => return fail(e),
        };
        witnesses += others.len();
        for net in gtc.iter().chain(&others) {
            checked += 1;
            if is_galled(net) != component_graph(net).is_phylogenetic_tree() {
                disagreements += 1;
            }
        }
    }
    outcome(
        disagreements == 0 && witnesses > 0,
        format!("{checked} networks ({witnesses} tree-child but not galled), disagreements {disagreements}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_of_flat_counts() {
        let (stat, df, p) = chi_square_uniform(&[10, 10, 10]);
        assert_eq!((stat, df), (0.0, 2.0));
        assert!((p - 1.0).abs() < 1e-12);
        let (_, _, p) = chi_square_uniform(&[30, 0, 0]);
        assert!(p < 1e-10);
    }

    #[test]
    fn quick_criteria_pass() {
        let opts = VerifyOptions::default();
        for id in [1, 2, 3, 13] {
            let r = run_criterion(id, &opts);
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn tamper_is_detected() {
        let opts = VerifyOptions {
            tamper: true,
            ..VerifyOptions::default()
        };
        let report = verify(Level::Fast, &opts);
        assert!(!report.passed);
        assert_eq!(report.failing(), ["table-vs-oracle"]);
        assert_eq!(report.erratum.status, "documented-erratum");
    }

    #[test]
    fn fast_level_passes() {
        let report = verify(Level::Fast, &VerifyOptions::default());
        assert!(report.passed, "{:?}", report.failing());
        assert_eq!(report.criteria.len(), 3);
    }

    #[test]
    fn tolerances_reject_unknown_keys() {
        let t: Tolerances = serde_json::from_str(r#"{"ratio": 0.3}"#).unwrap();
        assert_eq!(t.ratio, 0.3);
        assert_eq!(t.alpha, 1e-3);
        assert!(serde_json::from_str::<Tolerances>(r#"{"ratios": 0.3}"#).is_err());
    }
}
