//! Sequence CSV input and refined-grid CSV output.

use std::io::{Read, Write};

use maskforge::cyclotomic::{format_rational, parse_rational};
use maskforge::subdivision::Refinement;
use maskforge::{Error, Result, Sequence};
use num_rational::BigRational;

/// Reads `d` integer columns followed by value columns. A leading row whose
/// first field is not an integer is taken as a header.
pub fn read_sequence<R: Read>(input: R, dim: usize) -> Result<Sequence> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut rows: Vec<(Vec<i64>, Vec<BigRational>)> = Vec::new();
    let mut width = None;
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if line == 0 && record.get(0).is_some_and(|f| f.parse::<i64>().is_err()) {
            continue;
        }
        if record.len() <= dim {
            return Err(Error::ShapeMismatch(format!(
                "row {} has {} columns; need {dim} index columns and at least one value",
                line + 1,
                record.len()
            )));
        }
        let w = record.len() - dim;
        if *width.get_or_insert(w) != w {
            return Err(Error::ShapeMismatch(format!(
                "row {} has {w} values, expected {}",
                line + 1,
                width.unwrap()
            )));
        }
        let at = record
            .iter()
            .take(dim)
            .map(|f| {
                f.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("row {}: bad index {f:?}", line + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        let values = record
            .iter()
            .skip(dim)
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        rows.push((at, values));
    }
    let width = width.ok_or_else(|| Error::Parse("data file has no rows".into()))?;
    Sequence::from_rational_values(dim, width, rows)
}

pub fn write_refinement<W: Write>(
    out: W,
    dim: usize,
    refinement: &Refinement,
) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let width = refinement.sequence.width();
    let header: Vec<String> = (1..=dim)
        .map(|i| format!("x{i}"))
        .chain((1..=width).map(|i| format!("v{i}")))
        .collect();
    writer.write_record(&header)?;
    for (point, values) in &refinement.grid {
        writer.write_record(point.iter().chain(values).map(format_rational))?;
    }
    writer.flush()
}
