//! Flat report records and their JSON, CSV and table renderings.

use std::io::Write;

use serde::Serialize;

use crate::catalog::{loi_zedda_classify, CatalogError, InvariantReport, PolarizedPair};
use crate::chowring::{to_f64, Rational};
use crate::numgeo::IntegrationResult;

#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub family: String,
    pub params: String,
    pub n: u32,
    pub d: i64,
    pub g: i64,
    pub delta: i64,
    pub h0: i64,
    pub canonical_intersection: i64,
    pub sigma_bar_sq_exact: String,
    pub sigma_bar_sq_decimal: f64,
    pub l2_ratio: String,
    pub l2_ratio_decimal: f64,
    pub l2_gate: String,
    pub r_min: Option<i64>,
    pub tag: String,
    pub del_pezzo: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub estimate: f64,
    pub stderr: f64,
    pub discretization_error: f64,
    pub z: f64,
    pub samples: usize,
    pub seed: u64,
    pub tolerance_sigma: f64,
    pub volume_ratio: f64,
    pub volume_ratio_stderr: f64,
    pub pass: bool,
}

impl Verification {
    pub fn new(result: &IntegrationResult, exact: &Rational, tolerance_sigma: f64) -> Self {
        let z = result.z_score(to_f64(exact));
        Verification {
            estimate: result.mean_estimate,
            stderr: result.standard_error,
            discretization_error: result.discretization_error,
            z,
            samples: result.sample_count,
            seed: result.seed,
            tolerance_sigma,
            volume_ratio: result.volume_ratio_estimate,
            volume_ratio_stderr: result.volume_ratio_standard_error,
            pass: z.abs() <= tolerance_sigma,
        }
    }
}

/// The fixed CSV layout.
#[derive(Serialize)]
struct CsvRow<'a> {
    family: &'a str,
    params: &'a str,
    n: u32,
    d: i64,
    g: i64,
    delta: i64,
    h0: i64,
    sigma_bar_sq_exact: &'a str,
    sigma_bar_sq_decimal: f64,
    l2_ratio: &'a str,
    r_min: Option<i64>,
    tag: &'a str,
}

impl OutputRecord {
    pub fn new(pair: &PolarizedPair, report: &InvariantReport) -> Result<Self, CatalogError> {
        Ok(OutputRecord {
            family: pair.family_name().to_string(),
            params: pair.params(),
            n: report.n,
            d: report.degree,
            g: report.sectional_genus,
            delta: report.delta_genus,
            h0: report.h0,
            canonical_intersection: report.canonical_intersection,
            sigma_bar_sq_exact: report.mean_sigma_sq.to_string(),
            sigma_bar_sq_decimal: to_f64(&report.mean_sigma_sq),
            l2_ratio: report.l2_ratio.to_string(),
            l2_ratio_decimal: to_f64(&report.l2_ratio),
            l2_gate: loi_zedda_classify(pair)?.to_string(),
            r_min: report.minimal_codimension,
            tag: report.classification.to_string(),
            del_pezzo: report.del_pezzo,
            verification: None,
        })
    }

    fn csv_row(&self) -> CsvRow<'_> {
        CsvRow {
            family: &self.family,
            params: &self.params,
            n: self.n,
            d: self.d,
            g: self.g,
            delta: self.delta,
            h0: self.h0,
            sigma_bar_sq_exact: &self.sigma_bar_sq_exact,
            sigma_bar_sq_decimal: self.sigma_bar_sq_decimal,
            l2_ratio: &self.l2_ratio,
            r_min: self.r_min,
            tag: &self.tag,
        }
    }
}

pub fn write_csv(records: &[OutputRecord], out: &mut dyn Write) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out);
    for r in records {
        w.serialize(r.csv_row()).map_err(std::io::Error::other)?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER).map_err(std::io::Error::other)?;
    }
    w.flush()
}

pub const CSV_HEADER: [&str; 12] = [
    "family",
    "params",
    "n",
    "d",
    "g",
    "delta",
    "h0",
    "sigma_bar_sq_exact",
    "sigma_bar_sq_decimal",
    "l2_ratio",
    "r_min",
    "tag",
];

pub fn write_json<T: Serialize + ?Sized>(value: &T, out: &mut dyn Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::other)?;
    writeln!(out)
}

pub fn write_table(records: &[OutputRecord], out: &mut dyn Write) -> std::io::Result<()> {
    let header = [
        "family",
        "params",
        "n",
        "d",
        "g",
        "delta",
        "h0",
        "sigma_bar_sq",
        "l2_ratio",
        "r_min",
        "tag",
    ];
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let mut tag = r.tag.clone();
            if r.del_pezzo {
                tag.push_str(" (del Pezzo)");
            }
            vec![
                r.family.clone(),
                r.params.clone(),
                r.n.to_string(),
                r.d.to_string(),
                r.g.to_string(),
                r.delta.to_string(),
                r.h0.to_string(),
                r.sigma_bar_sq_exact.clone(),
                r.l2_ratio.clone(),
                r.r_min.map_or("-".to_string(), |v| v.to_string()),
                tag,
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(&header.map(String::from)))?;
    for row in &rows {
        writeln!(out, "{}", line(row))?;
    }
    Ok(())
}
