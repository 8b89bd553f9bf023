//! Solver comparison over a set of instance files.

use std::collections::BTreeMap;
use std::fs;

use rayon::prelude::*;
use rideshare_core::read_instance;

use crate::run::{solve, Algo, Fail, Options, RunReport, CSV_HEADER, CSV_VERSION, EXIT_SPEC};

/// Runs every `(instance, algo)` cell and returns the CSV text together with
/// the worst exit code seen among hard failures.
pub fn compare(paths: &[String], algos: &[Algo], opts: Options, timing: bool, allow_invalid: bool) -> (String, u8) {
    let cells: Vec<(&String, Algo)> = paths.iter().flat_map(|p| algos.iter().map(move |&a| (p, a))).collect();
    let mut rows: Vec<RunReport> = cells
        .par_iter()
        .map(|&(path, algo)| run_cell(path, algo, opts, timing))
        .collect();
    rows.sort_by(|a, b| (&a.instance, a.algo).cmp(&(&b.instance, b.algo)));

    let exact: BTreeMap<String, usize> = rows
        .iter()
        .filter(|r| r.algo == Algo::Exact && r.code == 0)
        .filter_map(|r| r.drivers.map(|d| (r.instance.clone(), d)))
        .collect();
    let mut max_ratio: Option<f64> = None;
    for r in &mut rows {
        if let (Some(d), Some(&opt)) = (r.drivers, exact.get(&r.instance)) {
            if opt > 0 {
                let ratio = d as f64 / opt as f64;
                r.ratio = Some(ratio);
                max_ratio = Some(max_ratio.map_or(ratio, |m| m.max(ratio)));
            }
        }
    }

    let mut out = format!("{CSV_VERSION}\n{CSV_HEADER}\n");
    let mut code = 0;
    for r in &rows {
        out.push_str(&r.csv());
        out.push('\n');
        let hard = r.code == EXIT_SPEC || (r.code == crate::run::EXIT_INTERNAL && !(allow_invalid && r.valid == Some(false)));
        if hard {
            code = code.max(r.code);
        }
    }
    if !rows.is_empty() {
        let ratio = max_ratio.map(|m| format!("{m:.4}")).unwrap_or_default();
        out.push_str(&format!("summary,all,max_ratio,,,,,,{ratio}\n"));
    }
    (out, code)
}

fn run_cell(path: &str, algo: Algo, opts: Options, timing: bool) -> RunReport {
    let inst = match fs::read_to_string(path)
        .map_err(|e| Fail::new(EXIT_SPEC, format!("{path}: {e}")))
        .and_then(|text| read_instance(&text).map_err(|e| Fail::new(EXIT_SPEC, format!("{path}: {e}"))))
    {
        Ok(inst) => inst,
        Err(fail) => return RunReport::failed(path, algo, &fail),
    };
    match solve(&inst, algo, opts) {
        Ok((sol, _, wall)) => RunReport::solved(path, algo, &inst, &sol, timing.then_some(wall)),
        Err(fail) => RunReport::failed(path, algo, &fail),
    }
}
