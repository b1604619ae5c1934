//! CSV bodies for `gtcnet report`.

use std::fmt::Write as _;

use gtc::analysis::{convergence, limit_law_report, sandwich_check, AnalysisError, AsymFormula, ConvergenceReport};
use gtc::engine::{self, EngineConfig};
use gtc::onecomp::otc_total;

/// Parses `a:b`, `a:b:step` or a comma list.
pub fn parse_grid(text: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("bad grid {text:?}; use a:b, a:b:step or a comma list");
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let grid: Vec<usize> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let (a, b, step) = match parts.as_slice() {
            [a, b] => (num(a)?, num(b)?, 1),
            [a, b, s] => (num(a)?, num(b)?, num(s)?),
            _ => return Err(bad()),
        };
        if step == 0 || a > b {
            return Err(bad());
        }
        (a..=b).step_by(step).collect()
    } else {
        text.split(',').map(num).collect::<Result<_, _>>()?
    };
    if grid.is_empty() || grid.contains(&0) {
        return Err(format!("grid {text:?} must be non-empty with sizes ≥ 1"));
    }
    Ok(grid)
}

fn push_rows(out: &mut String, name: &str, r: &ConvergenceReport) {
    let d = r.distances();
    for (j, row) in r.rows.iter().enumerate() {
        // pass: the distance to 1 has not grown since the previous size
        let pass = j == 0 || d[j] <= d[j - 1];
        let _ = writeln!(out, "{name},{},{},{},{},{pass}", row.n, row.exact_log, row.asym_log, row.ratio);
    }
}

/// `name,n,exact_log,asym_log,ratio,pass` for every first-order formula.
pub fn asymptotics(grid: &[usize]) -> Result<String, AnalysisError> {
    let top = *grid.iter().max().expect("non-empty grid");
    let mut out = String::from("name,n,exact_log,asym_log,ratio,pass\n");
    let g = engine::gtc_totals(top)?;
    push_rows(&mut out, "gtc_total", &convergence("gtc_total", grid, |n| Ok(g[n].clone()), AsymFormula::GtcTotal, None)?);
    let m = engine::max_ret_series(top)?;
    push_rows(&mut out, "max_ret", &convergence("max_ret", grid, |n| Ok(m[n - 1].clone()), AsymFormula::MaxRet, None)?);
    let low = engine::low_k_columns(top, 3)?;
    for k in [1usize, 2] {
        let ns: Vec<usize> = grid.iter().copied().filter(|&n| n > k).collect();
        if ns.is_empty() {
            continue;
        }
        let name = format!("fixed_k{k}");
        push_rows(&mut out, &name, &convergence(&name, &ns, |n| Ok(low[n][k].clone()), AsymFormula::FixedK, Some(k))?);
    }
    push_rows(&mut out, "otc_total", &convergence("otc_total", grid, |n| Ok(otc_total(n)), AsymFormula::OtcTotal, None)?);
    Ok(out)
}

/// `n,lower,gtc,upper,upper_ratio,lower_ratio,pass`.
pub fn bounds(grid: &[usize]) -> Result<String, AnalysisError> {
    let top = *grid.iter().max().expect("non-empty grid");
    let r = sandwich_check(top)?;
    let mut out = String::from("n,lower,gtc,upper,upper_ratio,lower_ratio,pass\n");
    for &n in grid {
        let row = r.row(n).expect("every size up to the top is checked");
        let _ = writeln!(
            out,
            "{n},{},{},{},{},{},true",
            row.lower, row.gtc, row.upper, row.upper_ratio, row.lower_ratio
        );
    }
    Ok(out)
}

/// `n,mean,variance,mean_gap,variance_gap,tv_normal,tv_normal_nominal,tv_poisson,independence_defect`.
///
/// The `I_n` columns are left empty above the trivariate cap.
pub fn limits(grid: &[usize], trivariate_cap: usize) -> Result<String, AnalysisError> {
    let mut out =
        String::from("n,mean,variance,mean_gap,variance_gap,tv_normal,tv_normal_nominal,tv_poisson,independence_defect\n");
    let cap = trivariate_cap.min(EngineConfig::default().trivariate_cap);
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for &n in grid {
        let r = limit_law_report(n, n <= cap)?;
        let _ = writeln!(
            out,
            "{n},{},{},{},{},{},{},{},{}",
            r.mean,
            r.variance,
            r.mean_gap,
            r.variance_gap,
            r.tv_normal,
            r.tv_normal_nominal,
            opt(r.tv_poisson),
            opt(r.independence_defect)
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1:4").unwrap(), [1, 2, 3, 4]);
        assert_eq!(parse_grid("10:30:10").unwrap(), [10, 20, 30]);
        assert_eq!(parse_grid("50, 100").unwrap(), [50, 100]);
        for bad in ["", "0:3", "3:1", "1:2:0", "a", "1:2:3:4"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn bounds_rows() {
        let csv = bounds(&[1, 3]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("3,42,48,66,"));
    }
}
