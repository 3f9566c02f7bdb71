use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clap::ValueEnum;
use modular_data::fusion::FusionRing;
use modular_data::{CycMatrix, CyclotomicNumber};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Exact: cyclotomic coefficients as rational pairs.
    Json,
    /// Lossy: entries embedded as floats at 15 significant digits.
    Csv,
    /// Human-readable, exact.
    Pretty,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Pretty => "txt",
        }
    }
}

#[derive(Debug)]
pub enum Table {
    Matrix(CycMatrix),
    Diagonal(Vec<String>, Vec<CyclotomicNumber>),
    Ring(FusionRing),
    Rows(Vec<String>, Vec<Vec<String>>),
    Record(Vec<(String, Value)>),
}

#[derive(Debug)]
pub struct Document {
    pub name: String,
    pub table: Table,
}

impl Document {
    pub fn new(name: &str, table: Table) -> Self {
        Document { name: name.to_string(), table }
    }
}

/// Shortest decimal of x rounded to 15 significant digits; embedding noise
/// below 1e-13 prints as 0.
fn sig15(x: f64) -> String {
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    if rounded.abs() < 1e-13 {
        "0".to_string()
    } else {
        format!("{rounded}")
    }
}

pub fn float_string(z: &CyclotomicNumber) -> String {
    let c = z.embed();
    let re = sig15(c.re);
    let im = sig15(c.im);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

fn table_json(t: &Table) -> Value {
    match t {
        Table::Matrix(m) => m.to_json(),
        Table::Diagonal(labels, diag) => json!({
            "labels": labels,
            "entries": diag.iter().map(CyclotomicNumber::to_json).collect::<Vec<_>>(),
        }),
        Table::Ring(r) => r.to_json(),
        Table::Rows(header, rows) => Value::Array(
            rows.iter()
                .map(|r| Value::Object(header.iter().cloned().zip(r.iter().map(|c| Value::String(c.clone()))).collect()))
                .collect(),
        ),
        Table::Record(fields) => Value::Object(fields.iter().cloned().collect::<Map<_, _>>()),
    }
}

fn table_rows(t: &Table) -> (Vec<String>, Vec<Vec<String>>) {
    match t {
        Table::Matrix(m) => {
            let header = std::iter::once(String::new()).chain(m.cols().iter().cloned()).collect();
            let rows = (0..m.nrows())
                .map(|i| std::iter::once(m.rows()[i].clone()).chain(m.row(i).iter().map(float_string)).collect())
                .collect();
            (header, rows)
        }
        Table::Diagonal(labels, diag) => (
            vec!["label".into(), "value".into()],
            labels.iter().zip(diag).map(|(l, v)| vec![l.clone(), float_string(v)]).collect(),
        ),
        Table::Ring(r) => (
            vec!["i".into(), "j".into(), "k".into(), "n".into()],
            r.nonzero()
                .into_iter()
                .map(|(i, j, k, n)| vec![r.basis()[i].clone(), r.basis()[j].clone(), r.basis()[k].clone(), n.to_string()])
                .collect(),
        ),
        Table::Rows(h, rows) => (h.clone(), rows.clone()),
        Table::Record(fields) => (
            vec!["key".into(), "value".into()],
            fields
                .iter()
                .map(|(k, v)| vec![k.clone(), v.as_str().map_or_else(|| v.to_string(), str::to_string)])
                .collect(),
        ),
    }
}

fn csv_string(t: &Table) -> String {
    let (header, rows) = table_rows(t);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing memory")).expect("csv output is UTF-8")
}

fn pretty_string(t: &Table) -> String {
    let mut out = String::new();
    match t {
        Table::Matrix(m) => {
            for i in 0..m.nrows() {
                let entries: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "{:>12} | {}", m.rows()[i], entries.join("  "));
            }
        }
        Table::Diagonal(labels, diag) => {
            for (l, v) in labels.iter().zip(diag) {
                let _ = writeln!(out, "{l:>12} | {v}");
            }
        }
        Table::Ring(r) => {
            for i in 0..r.rank() {
                for j in i..r.rank() {
                    let terms: Vec<String> = (0..r.rank())
                        .filter(|&k| r.get(i, j, k) != 0)
                        .map(|k| match r.get(i, j, k) {
                            1 => format!("[{}]", r.basis()[k]),
                            -1 => format!("-[{}]", r.basis()[k]),
                            n => format!("{n}[{}]", r.basis()[k]),
                        })
                        .collect();
                    let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                    let _ = writeln!(out, "[{}]·[{}] = {rhs}", r.basis()[i], r.basis()[j]);
                }
            }
        }
        Table::Rows(header, rows) => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for r in rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: &[String]| -> String {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(header));
            for r in rows {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        Table::Record(fields) => {
            for (k, v) in fields {
                let shown = v.as_str().map_or_else(|| v.to_string(), str::to_string);
                let _ = writeln!(out, "{k}: {shown}");
            }
        }
    }
    out
}

fn render_one(t: &Table, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&table_json(t)).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Csv => csv_string(t),
        Format::Pretty => pretty_string(t),
    }
}

/// All documents as one stream: a single JSON object, or sections headed by `# name`.
pub fn render(docs: &[Document], format: Format) -> String {
    match format {
        Format::Json => {
            let obj: Map<String, Value> = docs.iter().map(|d| (d.name.clone(), table_json(&d.table))).collect();
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON values serialize");
            s.push('\n');
            s
        }
        _ => docs
            .iter()
            .map(|d| format!("# {}\n{}", d.name, render_one(&d.table, format)))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

/// One file per document inside `dir`.
pub fn write_dir(docs: &[Document], format: Format, dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for d in docs {
        fs::write(dir.join(format!("{}.{}", d.name, format.extension())), render_one(&d.table, format))?;
    }
    Ok(())
}
