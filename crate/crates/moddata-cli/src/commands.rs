use std::fs;
use std::path::Path;

use modular_data::cyclic_tables::{self, special_tuple};
use modular_data::cyclo::working_modulus;
use modular_data::fusion::{
    abs_ring, check_modular_axioms_with, double_ring, find_positive_signs, FusionError, DEFAULT_SIGN_SEARCH_BOUND,
};
use modular_data::glcat::{self, splits_off_svect};
use modular_data::malle::{self, FamilySpec};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{Document, Table};
use crate::{CliError, Common};

type Outcome = Result<Vec<Document>, CliError>;

fn check_params(d: u32, n: usize, common: &Common) -> Result<(), CliError> {
    if d == 0 {
        return Err(CliError::Usage("d must be at least 1".into()));
    }
    if n == 0 || n > d as usize {
        return Err(CliError::Usage(format!("need 1 <= n <= d, got n = {n}, d = {d}")));
    }
    check_modulus(d, common)
}

fn check_modulus(d: u32, common: &Common) -> Result<(), CliError> {
    let big = working_modulus(d);
    if big > common.max_modulus {
        return Err(CliError::Usage(format!(
            "working modulus {big} for d = {d} exceeds the cap {} (MODDATA_MAX_MODULUS)",
            common.max_modulus
        )));
    }
    Ok(())
}

fn failure(docs: Vec<Document>, check: &str, detail: impl ToString) -> CliError {
    CliError::Verification(docs, json!({"check": check, "detail": detail.to_string()}))
}

/// Parses "a" or the inclusive range "a..b".
pub fn parse_range(s: &str) -> Result<Vec<i64>, CliError> {
    let bad = || CliError::Usage(format!("malformed range {s:?}; expected a or a..b"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse::<i64>().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(CliError::Usage(format!("empty range {s:?}")));
    }
    Ok((lo..=hi).collect())
}

fn record(fields: &[(&str, Value)]) -> Table {
    Table::Record(fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
}

pub fn ext(d: u32, n: usize, p: i64, common: &Common) -> Outcome {
    check_params(d, n, common)?;
    let lib = |e: &dyn std::fmt::Display| failure(vec![], "construction", e);
    let s = cyclic_tables::ext_s(n, d).map_err(|e| lib(&e))?;
    let t = cyclic_tables::ext_t_diag(n, d).map_err(|e| lib(&e))?;
    let special = special_tuple(p, n, d).map_err(|e| lib(&e))?;
    let labels = s.rows().to_vec();
    let mut docs = vec![
        Document::new(
            "summary",
            record(&[("d", json!(d)), ("n", json!(n)), ("p", json!(p)), ("special", json!(special.label())), ("rank", json!(labels.len()))]),
        ),
        Document::new("S", Table::Matrix(s)),
        Document::new("T", Table::Diagonal(labels, t)),
    ];
    match cyclic_tables::structure_constants(n, d, p) {
        Ok(ring) => {
            docs.push(Document::new("ring", Table::Ring(ring)));
            Ok(docs)
        }
        Err(e) => Err(failure(docs, "integrality", e)),
    }
}

struct Row {
    cells: Vec<String>,
    failures: Vec<String>,
}

const VERIFY_HEADER: [&str; 10] = ["d", "n", "p", "axioms", "integral", "positivity", "predicted", "double", "abs", "status"];

fn verify_one(d: u32, n: usize, p: i64) -> Row {
    let mut failures = Vec::new();
    let axioms = match cyclic_tables::modular_datum(n, d, p) {
        Ok(md) => {
            let rep = check_modular_axioms_with(&md, false);
            if !rep.passes() {
                failures.push(format!("axioms: {:?}", rep.failures()));
            }
            rep.passes()
        }
        Err(e) => {
            failures.push(format!("axioms: {e}"));
            false
        }
    };
    let super_case = (n as u32 + d).is_multiple_of(2);
    let predicted = !super_case || splits_off_svect(n, d).unwrap_or(false);
    let mut cells = vec![d.to_string(), n.to_string(), p.to_string(), ok(axioms).into()];
    match cyclic_tables::structure_constants(n, d, p) {
        Ok(ring) => {
            cells.push("yes".into());
            let positivity = match find_positive_signs(&ring, DEFAULT_SIGN_SEARCH_BOUND) {
                Ok(found) => {
                    if found.is_some() != predicted {
                        failures.push(format!("positivity: search found {}, prediction {}", found.is_some(), predicted));
                    }
                    if found.is_some() { "present" } else { "absent" }
                }
                Err(FusionError::TooLarge { .. }) => "skipped",
                Err(e) => {
                    failures.push(format!("positivity: {e}"));
                    "error"
                }
            };
            cells.push(positivity.into());
            cells.push(if predicted { "present" } else { "absent" }.into());
            for (name, res) in [("double", double_ring(&ring)), ("abs", abs_ring(&ring))] {
                match res {
                    Ok(_) => cells.push("associative".into()),
                    Err(e) => {
                        failures.push(format!("{name}: {e}"));
                        cells.push("fail".into());
                    }
                }
            }
        }
        Err(e) => {
            failures.push(format!("integrality: {e}"));
            cells.extend(["no", "-", if predicted { "present" } else { "absent" }, "-", "-"].map(String::from));
        }
    }
    cells.push(if failures.is_empty() { "pass" } else { "FAIL" }.into());
    Row { cells, failures }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "fail"
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

pub fn verify(d: &str, n: Option<&str>, p: Option<&str>, common: &Common) -> Outcome {
    let ds = parse_range(d)?;
    let ns = n.map(parse_range).transpose()?;
    let ps = p.map(parse_range).transpose()?;
    let mut grid: Vec<(u32, usize, i64)> = Vec::new();
    for &d in &ds {
        if d < 1 {
            return Err(CliError::Usage(format!("d must be at least 1, got {d}")));
        }
        let d = d as u32;
        check_modulus(d, common)?;
        let n_values = ns.clone().unwrap_or_else(|| (1..=d as i64).collect());
        let p_values = ps.clone().unwrap_or_else(|| (0..d as i64).collect());
        for &n in n_values.iter().filter(|&&n| n >= 1 && n <= d as i64) {
            for &p in &p_values {
                grid.push((d, n as usize, p));
            }
        }
    }
    if grid.is_empty() {
        return Err(CliError::Usage("the (d, n, p) grid is empty".into()));
    }
    // Tasks run in a seeded order; results are put back in grid order.
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.shuffle(&mut StdRng::seed_from_u64(common.seed));
    let mut done: Vec<(usize, Row)> =
        pool(common.jobs)?.install(|| order.par_iter().map(|&i| (i, verify_one(grid[i].0, grid[i].1, grid[i].2))).collect());
    done.sort_by_key(|(i, _)| *i);
    let header: Vec<String> = VERIFY_HEADER.iter().map(|s| s.to_string()).collect();
    let witness: Vec<Value> = done
        .iter()
        .filter(|(_, r)| !r.failures.is_empty())
        .map(|(i, r)| json!({"d": grid[*i].0, "n": grid[*i].1, "p": grid[*i].2, "failures": r.failures}))
        .collect();
    let docs = vec![Document::new("verify", Table::Rows(header, done.into_iter().map(|(_, r)| r.cells).collect()))];
    if witness.is_empty() {
        Ok(docs)
    } else {
        Err(CliError::Verification(docs, json!({"check": "verify", "rows": witness})))
    }
}

pub fn categorify(d: u32, n: usize, p: i64, common: &Common) -> Outcome {
    check_params(d, n, common)?;
    let (datum, report) = glcat::categorify(d, n, p).map_err(|e| failure(vec![], "categorification", e))?;
    let labels = datum.labels().to_vec();
    let ext_labels: Vec<String> = cyclic_tables::index_set(n, d)
        .map_err(|e| failure(vec![], "construction", e))?
        .iter()
        .map(|a| a.label())
        .collect();
    let images: Vec<Vec<String>> = ext_labels
        .iter()
        .zip(&report.unit_map)
        .zip(&report.sigma)
        .map(|((a, &i), s)| vec![a.clone(), labels[i].clone(), s.to_string()])
        .collect();
    let witness = glcat::positive_witness(&datum, &report);
    let mut docs = vec![
        Document::new(
            "report",
            record(&[
                ("d", json!(d)),
                ("n", json!(n)),
                ("p", json!(p)),
                ("omega", json!(report.omega.to_string())),
                ("zeta_star", json!(report.zeta_star.to_string())),
                ("super", json!(datum.is_super)),
                ("splits", json!(datum.splits)),
                ("positive_witness", json!(witness)),
            ]),
        ),
        Document::new("iota", Table::Rows(vec!["tuple".into(), "weight".into(), "sigma".into()], images)),
        Document::new("S_cat", Table::Matrix(datum.s.clone())),
        Document::new("twists", Table::Diagonal(labels, datum.twists.clone())),
    ];
    let cat_ring = datum.fusion_ring().map_err(|e| failure(vec![], "categorical fusion ring", e));
    let ext_ring = cyclic_tables::structure_constants(n, d, p).map_err(|e| failure(vec![], "integrality", e));
    match (cat_ring, ext_ring) {
        (Ok(c), Ok(r)) => {
            docs.push(Document::new("ring_cat", Table::Ring(c)));
            docs.push(Document::new("ring_ext", Table::Ring(r)));
        }
        (Err(CliError::Verification(_, w)), _) | (_, Err(CliError::Verification(_, w))) => {
            return Err(CliError::Verification(docs, w));
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    }
    if let Err(e) = glcat::check_fusion_consistency(&datum, &report) {
        return Err(failure(docs, "fusion consistency", e));
    }
    Ok(docs)
}

fn load_spec(path: &Path, common: &Common) -> Result<FamilySpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let spec = FamilySpec::from_json_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    check_modulus(spec.d, common)?;
    Ok(spec)
}

fn ennola_docs(spec: &FamilySpec) -> Result<Vec<Document>, CliError> {
    let xi = malle::enumerate_symbols(spec).map_err(|e| failure(vec![], "symbols", e))?;
    let rep = malle::check_ennola(spec).map_err(|e| failure(vec![], "ennola", e))?;
    let mut orbit_of = vec![0usize; xi.len()];
    for (k, o) in rep.orbits.iter().enumerate() {
        for &i in o {
            orbit_of[i] = k;
        }
    }
    let rows = xi
        .iter()
        .enumerate()
        .map(|(i, f)| vec![f.label(), xi[rep.perm[i]].label(), orbit_of[i].to_string()])
        .collect();
    Ok(vec![
        Document::new("ennola", Table::Rows(vec!["symbol".into(), "image".into(), "orbit".into()], rows)),
        Document::new("ennola_summary", record(&[("order", json!(rep.order)), ("orbits", json!(rep.orbits.len()))])),
    ])
}

pub fn family(path: &Path, common: &Common) -> Outcome {
    let spec = load_spec(path, common)?;
    let xi = malle::enumerate_symbols(&spec).map_err(|e| failure(vec![], "symbols", e))?;
    let labels: Vec<String> = xi.iter().map(|f| f.label()).collect();
    let symbol_rows = xi
        .iter()
        .map(|f| vec![f.label(), malle::epsilon_sign(&spec, f).to_string(), malle::frobenius(&spec, f).to_string()])
        .collect();
    let s = malle::fourier_matrix(&spec).map_err(|e| failure(vec![], "fourier matrix", e))?;
    let fr = malle::frobenius_diag(&spec).map_err(|e| failure(vec![], "frobenius", e))?;
    let mut docs = vec![
        Document::new("symbols", Table::Rows(vec!["symbol".into(), "epsilon".into(), "Fr".into()], symbol_rows)),
        Document::new("S", Table::Matrix(s)),
        Document::new("T", Table::Diagonal(labels, fr)),
    ];
    match malle::check_fourier_axioms(&spec) {
        Ok(rep) if rep.passes() => {}
        Ok(rep) => return Err(failure(docs, "fourier axioms", format!("{:?}", rep.failures()))),
        Err(e) => return Err(failure(docs, "fourier axioms", e)),
    }
    let m = match malle::match_family(&spec) {
        Ok(m) => m,
        Err(e) => return Err(failure(docs, "categorical match", e)),
    };
    match malle::family_fusion(&spec, &m.f0) {
        Ok(ring) => docs.push(Document::new("ring", Table::Ring(ring))),
        Err(e) => return Err(failure(docs, "integrality", e)),
    }
    docs.push(Document::new(
        "match",
        record(&[
            ("p", json!(m.p)),
            ("f0", json!(m.f0.label())),
            ("omega", json!(m.omega.to_string())),
            ("sigma", json!(m.sigma)),
            ("fr_f0", json!(m.fr_f0.to_string())),
            ("fr_f0_is_one", json!(m.fr_f0_is_one())),
        ]),
    ));
    match ennola_docs(&spec) {
        Ok(more) => docs.extend(more),
        Err(CliError::Verification(_, w)) => return Err(CliError::Verification(docs, w)),
        Err(e) => return Err(e),
    }
    Ok(docs)
}

pub fn ennola(path: &Path, common: &Common) -> Outcome {
    let spec = load_spec(path, common)?;
    ennola_docs(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert!(matches!(parse_range("5..2"), Err(CliError::Usage(_))));
        assert!(matches!(parse_range("a..2"), Err(CliError::Usage(_))));
    }

    #[test]
    fn verify_row_for_non_split_super_case() {
        let row = verify_one(4, 2, 0);
        assert!(row.failures.is_empty(), "{:?}", row.failures);
        assert_eq!(row.cells[5], "absent");
        assert_eq!(row.cells[8], "associative");
    }
}
