//! CSV formats.
//!
//! Dataset files: a header `grid,t1,...,tp` followed by one row per curve,
//! `label,v1,...,vp`. Depth files: `label,depth`. Lines starting with `#`
//! are comments and are skipped on read.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::data::{DepthVector, FunctionalDataset, Grid};
use crate::error::{Error, Result};

/// Full-precision decimal text: 17 significant digits, so parsing returns
/// the identical `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_cell(cell: &str, row: usize, column: usize) -> Result<f64> {
    let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
        row,
        column,
        message: format!("`{cell}` is not a number"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            row,
            column,
            message: format!("`{cell}` is not finite"),
        });
    }
    Ok(v)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(r)
}

pub fn read_dataset<R: Read>(r: R) -> Result<FunctionalDataset> {
    let mut rdr = reader(r);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(rec) => rec?,
        None => {
            return Err(Error::Parse {
                row: 1,
                column: 1,
                message: "empty file".into(),
            })
        }
    };
    let header_row = header.position().map_or(1, |p| p.line() as usize);
    if header.get(0).map(str::trim) != Some("grid") {
        return Err(Error::Parse {
            row: header_row,
            column: 1,
            message: "header must start with `grid`".into(),
        });
    }
    let points = header
        .iter()
        .enumerate()
        .skip(1)
        .map(|(c, cell)| parse_cell(cell, header_row, c + 1))
        .collect::<Result<Vec<_>>>()?;
    let grid = Grid::new(points).map_err(|e| Error::Parse {
        row: header_row,
        column: 2,
        message: e.to_string(),
    })?;
    let p = grid.len();

    let mut labels = Vec::new();
    let mut values = Vec::new();
    for rec in records {
        let rec = rec?;
        let row = rec.position().map_or(0, |pos| pos.line() as usize);
        if rec.len() != p + 1 {
            return Err(Error::Parse {
                row,
                column: rec.len(),
                message: format!("expected {} cells, found {}", p + 1, rec.len()),
            });
        }
        labels.push(rec[0].to_string());
        for (c, cell) in rec.iter().enumerate().skip(1) {
            values.push(parse_cell(cell, row, c + 1)?);
        }
    }
    if labels.is_empty() {
        return Err(Error::Parse {
            row: header_row + 1,
            column: 1,
            message: "no curves after the header".into(),
        });
    }
    FunctionalDataset::new(grid, values)?.with_labels(labels)
}

pub fn write_dataset<W: Write>(ds: &FunctionalDataset, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["grid".to_string()];
    header.extend(ds.grid().points().iter().map(|&t| format_value(t)));
    wtr.write_record(&header)?;
    for (i, row) in ds.rows().enumerate() {
        let mut rec = vec![ds.label(i)];
        rec.extend(row.iter().map(|&v| format_value(v)));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn load_dataset<P: AsRef<Path>>(path: P) -> Result<FunctionalDataset> {
    read_dataset(BufReader::new(File::open(path)?))
}

pub fn save_dataset<P: AsRef<Path>>(ds: &FunctionalDataset, path: P) -> Result<()> {
    write_dataset(ds, BufWriter::new(File::create(path)?))
}

/// Write `label,depth` rows for a depth vector over `ds`.
pub fn write_depths<W: Write>(ds: &FunctionalDataset, depth: &DepthVector, w: W) -> Result<()> {
    if depth.len() != ds.n() {
        return Err(Error::Dimension {
            expected: ds.n(),
            found: depth.len(),
        });
    }
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["label", "depth"])?;
    for (i, &d) in depth.values.iter().enumerate() {
        wtr.write_record([ds.label(i), format_value(d)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Read `label,depth` rows.
pub fn read_depths<R: Read>(r: R) -> Result<Vec<(String, f64)>> {
    let mut rdr = reader(r);
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec.position().map_or(k + 1, |p| p.line() as usize);
        if k == 0 && rec.get(1).map(str::trim) == Some("depth") {
            continue;
        }
        if rec.len() != 2 {
            return Err(Error::Parse {
                row,
                column: rec.len(),
                message: "expected `label,depth`".into(),
            });
        }
        out.push((rec[0].to_string(), parse_cell(&rec[1], row, 2)?));
    }
    Ok(out)
}
