use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, BenchResult};

pub const CSV_HEADER: [&str; 12] = [
    "retraction",
    "n",
    "p",
    "trial",
    "seed",
    "t_fwd_s",
    "t_inv_s",
    "res_point",
    "res_tangent",
    "res_rt_tangent",
    "res_rt_point",
    "out_of_domain",
];

/// One benchmark row. Absent values (no inverse registered, or the trial
/// left the domain) are `None`, written as empty CSV fields and JSON `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    #[serde(rename = "retraction")]
    pub retraction_name: String,
    pub n: usize,
    pub p: usize,
    pub trial: usize,
    pub seed: u64,
    #[serde(rename = "t_fwd_s")]
    pub wall_time_forward_s: Option<f64>,
    #[serde(rename = "t_inv_s")]
    pub wall_time_inverse_s: Option<f64>,
    #[serde(rename = "res_point")]
    pub residual_point: Option<f64>,
    #[serde(rename = "res_tangent")]
    pub residual_tangent: Option<f64>,
    #[serde(rename = "res_rt_tangent")]
    pub residual_roundtrip_tangent: Option<f64>,
    #[serde(rename = "res_rt_point")]
    pub residual_roundtrip_point: Option<f64>,
    pub out_of_domain: bool,
}

impl BenchRecord {
    /// A row with every measurement absent.
    pub fn empty(name: &str, n: usize, p: usize, trial: usize, seed: u64) -> Self {
        Self {
            retraction_name: name.to_string(),
            n,
            p,
            trial,
            seed,
            wall_time_forward_s: None,
            wall_time_inverse_s: None,
            residual_point: None,
            residual_tangent: None,
            residual_roundtrip_tangent: None,
            residual_roundtrip_point: None,
            out_of_domain: false,
        }
    }

    /// The same row with both timing columns cleared.
    pub fn without_timings(&self) -> Self {
        Self {
            wall_time_forward_s: None,
            wall_time_inverse_s: None,
            ..self.clone()
        }
    }

    fn csv_fields(&self) -> [String; 12] {
        [
            self.retraction_name.clone(),
            self.n.to_string(),
            self.p.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            real(self.wall_time_forward_s),
            real(self.wall_time_inverse_s),
            real(self.residual_point),
            real(self.residual_tangent),
            real(self.residual_roundtrip_tangent),
            real(self.residual_roundtrip_point),
            self.out_of_domain.to_string(),
        ]
    }

    fn from_csv_fields(row: &csv::StringRecord) -> BenchResult<Self> {
        if row.len() != CSV_HEADER.len() {
            return Err(BenchError::Parse(format!(
                "expected 12 fields, got {}",
                row.len()
            )));
        }
        Ok(Self {
            retraction_name: row[0].to_string(),
            n: parse(&row[1])?,
            p: parse(&row[2])?,
            trial: parse(&row[3])?,
            seed: parse(&row[4])?,
            wall_time_forward_s: parse_opt(&row[5])?,
            wall_time_inverse_s: parse_opt(&row[6])?,
            residual_point: parse_opt(&row[7])?,
            residual_tangent: parse_opt(&row[8])?,
            residual_roundtrip_tangent: parse_opt(&row[9])?,
            residual_roundtrip_point: parse_opt(&row[10])?,
            out_of_domain: parse(&row[11])?,
        })
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn real(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

fn parse<T: FromStr>(s: &str) -> BenchResult<T> {
    s.parse()
        .map_err(|_| BenchError::Parse(format!("cannot parse field {s:?}")))
}

fn parse_opt(s: &str) -> BenchResult<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse(s).map(Some)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Writes `records` to any writer. CSV always carries the header row; JSON
/// is an array of flat objects keyed like the CSV header.
pub fn write_records<W: Write>(records: &[BenchRecord], format: Format, out: W) -> BenchResult<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in records {
                w.write_record(r.csv_fields())?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn emit_records(records: &[BenchRecord], format: Format, path: &Path) -> BenchResult<()> {
    let file = BufWriter::new(File::create(path)?);
    write_records(records, format, file)
}

/// Parses a CSV produced by [`write_records`]; the header must match exactly.
pub fn read_csv<R: Read>(input: R) -> BenchResult<Vec<BenchRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(BenchError::Parse(format!("unexpected header {header:?}")));
    }
    reader
        .records()
        .map(|row| BenchRecord::from_csv_fields(&row?))
        .collect()
}
