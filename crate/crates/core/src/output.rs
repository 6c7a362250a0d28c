//! CSV and JSON rendering of experiment records.
//!
//! CSV output starts with a `# schema=<name>/<version>` comment line followed
//! by the header. Missing values are written as `-`. JSON output wraps the
//! records as `{"schema", "version", "metadata", "records"}`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::experiment::{ErrorRecord, NoiseRecord, ProfileRecord, Table1Row, Table2Row};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format {s:?} (csv|json)"))),
        }
    }
}

pub trait CsvRecord {
    const SCHEMA: &'static str;
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), num)
}

fn skip_label<T: SkipLabel>(s: &Option<T>) -> String {
    s.as_ref().map_or_else(String::new, |s| s.label().to_string())
}

trait SkipLabel {
    fn label(&self) -> &'static str;
}

impl SkipLabel for crate::experiment::Skip {
    fn label(&self) -> &'static str {
        crate::experiment::Skip::label(self)
    }
}

pub fn render<R: CsvRecord + Serialize>(records: &[R], format: Format, metadata: serde_json::Value) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            writeln!(out, "# schema={}/{}", R::SCHEMA, SCHEMA_VERSION).unwrap();
            writeln!(out, "{}", R::HEADER.join(",")).unwrap();
            for r in records {
                writeln!(out, "{}", r.fields().join(",")).unwrap();
            }
            out
        }
        Format::Json => {
            let doc = serde_json::json!({
                "schema": R::SCHEMA,
                "version": SCHEMA_VERSION,
                "metadata": metadata,
                "records": records,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("records serialize");
            s.push('\n');
            s
        }
    }
}

impl CsvRecord for Table1Row {
    const SCHEMA: &'static str = "lejadiff.table1";
    const HEADER: &'static [&'static str] =
        &["degree", "order", "h", "lebesgue", "active_coeff", "lebesgue_term", "cond_term", "skip"];
    fn fields(&self) -> Vec<String> {
        let f = self.factors.as_ref();
        vec![
            self.degree.to_string(),
            self.order.to_string(),
            opt(self.h),
            opt(self.lebesgue),
            opt(f.map(|f| f.active_coeff)),
            opt(f.map(|f| f.lebesgue_term)),
            opt(f.map(|f| f.cond_term)),
            skip_label(&self.skip),
        ]
    }
}

impl CsvRecord for Table2Row {
    const SCHEMA: &'static str = "lejadiff.table2";
    const HEADER: &'static [&'static str] =
        &["radius", "degree", "order", "candidates", "stability_constant", "skip"];
    fn fields(&self) -> Vec<String> {
        vec![
            num(self.radius),
            self.degree.to_string(),
            self.order.to_string(),
            self.candidates.to_string(),
            opt(self.stability_constant),
            skip_label(&self.skip),
        ]
    }
}

impl CsvRecord for ErrorRecord {
    const SCHEMA: &'static str = "lejadiff.sweep";
    const HEADER: &'static [&'static str] = &[
        "function", "n", "distribution", "center_x", "center_y", "radius", "degree", "fe", "ge", "sde",
        "absolute", "cond", "h", "skip",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            self.function.to_string(),
            self.n.to_string(),
            self.distribution.clone(),
            num(self.center[0]),
            num(self.center[1]),
            num(self.radius),
            self.degree.to_string(),
            opt(self.fe),
            opt(self.ge),
            opt(self.sde),
            self.absolute.to_string(),
            opt(self.cond),
            opt(self.h),
            skip_label(&self.skip),
        ]
    }
}

impl CsvRecord for NoiseRecord {
    const SCHEMA: &'static str = "lejadiff.noise";
    const HEADER: &'static [&'static str] = &[
        "function", "center_x", "center_y", "radius", "degree", "epsilon", "seed", "ge", "gep", "gs", "gse", "skip",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            self.function.to_string(),
            num(self.center[0]),
            num(self.center[1]),
            num(self.radius),
            self.degree.to_string(),
            num(self.epsilon),
            self.seed.to_string(),
            opt(self.ge),
            opt(self.gep),
            opt(self.gs),
            opt(self.gse),
            skip_label(&self.skip),
        ]
    }
}

impl CsvRecord for ProfileRecord {
    const SCHEMA: &'static str = "lejadiff.profile";
    const HEADER: &'static [&'static str] =
        &["line", "x", "y", "degree", "order", "stability_constant", "skip"];
    fn fields(&self) -> Vec<String> {
        vec![
            match self.line {
                crate::experiment::Line::Horizontal => "horizontal".into(),
                crate::experiment::Line::Diagonal => "diagonal".into(),
            },
            num(self.center[0]),
            num(self.center[1]),
            self.degree.to_string(),
            self.order.to_string(),
            opt(self.stability_constant),
            skip_label(&self.skip),
        ]
    }
}

/// Table-2-style grid: one line per (order, radius), one column per degree,
/// `-` for infeasible cells.
pub fn table2_grid(rows: &[Table2Row]) -> String {
    let mut degrees: Vec<usize> = rows.iter().map(|r| r.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut radii: Vec<f64> = Vec::new();
    for r in rows {
        if !radii.contains(&r.radius) {
            radii.push(r.radius);
        }
    }
    let mut out = String::new();
    write!(out, "{:>6} {:>8}", "|nu|", "r").unwrap();
    for d in &degrees {
        write!(out, " {:>10}", format!("d={d}")).unwrap();
    }
    out.push('\n');
    for order in 0..=2 {
        for &r in &radii {
            write!(out, "{order:>6} {r:>8.4}").unwrap();
            for &d in &degrees {
                let cell = rows
                    .iter()
                    .find(|x| x.order == order && x.radius == r && x.degree == d)
                    .and_then(|x| x.stability_constant);
                match cell {
                    Some(v) => write!(out, " {v:>10.3e}").unwrap(),
                    None => write!(out, " {:>10}", "-").unwrap(),
                }
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::Skip;

    #[test]
    fn csv_marks_missing_cells() {
        let rows = vec![
            Table2Row { radius: 0.125, degree: 5, order: 0, candidates: 50, stability_constant: Some(1.8), skip: None },
            Table2Row {
                radius: 0.125,
                degree: 10,
                order: 0,
                candidates: 50,
                stability_constant: None,
                skip: Some(Skip::InsufficientPoints { needed: 66, available: 50 }),
            },
        ];
        let csv = render(&rows, Format::Csv, serde_json::Value::Null);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# schema=lejadiff.table2/1");
        assert_eq!(lines[1], "radius,degree,order,candidates,stability_constant,skip");
        assert_eq!(lines[2], "1.25e-1,5,0,50,1.8e0,");
        assert_eq!(lines[3], "1.25e-1,10,0,50,-,insufficient points");
        let json: serde_json::Value = serde_json::from_str(&render(&rows, Format::Json, serde_json::Value::Null)).unwrap();
        assert_eq!(json["schema"], "lejadiff.table2");
        assert!(json["records"][1]["stability_constant"].is_null());
        assert!(table2_grid(&rows).contains('-'));
    }
}
