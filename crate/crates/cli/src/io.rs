//! Trajectory and label CSV files.
//!
//! A trajectory file is UTF-8 CSV with a header row (`x0,x1,…`) and one row
//! per time step. A label file has the single header `label` and one integer
//! per time step, `-1` marking a gap. Floats are written in Rust's shortest
//! round-trip form, so a save/load cycle reproduces every value exactly.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use corrseg_core::{Labeling, Trajectory};

use crate::error::{CliError, CliResult};

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

pub fn read_trajectory<R: Read>(reader: R, source: &str) -> CliResult<Trajectory> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let bad = |msg: String| CliError::Input(format!("{source}: {msg}"));
    let dim = rdr.headers().map_err(|e| bad(e.to_string()))?.len();
    let mut data = Vec::new();
    let mut rows = 0;
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.len() != dim {
            return Err(bad(format!(
                "row {row} has {} columns, expected {dim}",
                record.len()
            )));
        }
        for (col, cell) in record.iter().enumerate() {
            let value: f64 = cell
                .parse()
                .map_err(|_| bad(format!("row {row}, column {col}: cannot parse {cell:?}")))?;
            if !value.is_finite() {
                return Err(bad(format!(
                    "row {row}, column {col}: non-finite value {cell:?}"
                )));
            }
            data.push(value);
        }
        rows += 1;
    }
    if rows < 2 || dim == 0 {
        return Err(bad(format!("trajectory requires T ≥ 2, got {rows}")));
    }
    Trajectory::from_flat(data, dim).map_err(|e| bad(e.to_string()))
}

pub fn load_trajectory(path: &Path) -> CliResult<Trajectory> {
    read_trajectory(open(path)?, &path.display().to_string())
}

pub fn write_trajectory<W: Write>(writer: W, traj: &Trajectory) -> CliResult<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let internal = |e: csv::Error| CliError::Internal(e.to_string());
    wtr.write_record((0..traj.dim()).map(|c| format!("x{c}")))
        .map_err(internal)?;
    for p in traj.points() {
        wtr.write_record(p.iter().map(|v| v.to_string()))
            .map_err(internal)?;
    }
    wtr.flush().map_err(|e| CliError::Internal(e.to_string()))
}

pub fn save_trajectory(path: &Path, traj: &Trajectory) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_trajectory(file, traj)
}

pub fn read_labels<R: Read>(reader: R, num_classes: usize, source: &str) -> CliResult<Labeling> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let bad = |msg: String| CliError::Input(format!("{source}: {msg}"));
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?;
    if headers.len() != 1 || &headers[0] != "label" {
        return Err(bad("label file must have the single header `label`".into()));
    }
    let mut classes = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let cell = &record[0];
        classes.push(
            cell.parse::<i32>()
                .map_err(|_| bad(format!("row {row}: cannot parse label {cell:?}")))?,
        );
    }
    Labeling::new(classes, num_classes).map_err(|e| bad(e.to_string()))
}

pub fn load_labels(path: &Path, num_classes: usize) -> CliResult<Labeling> {
    read_labels(open(path)?, num_classes, &path.display().to_string())
}

pub fn write_labels<W: Write>(mut writer: W, labeling: &Labeling) -> CliResult<()> {
    let internal = |e: std::io::Error| CliError::Internal(e.to_string());
    writeln!(writer, "label").map_err(internal)?;
    for c in labeling.classes() {
        writeln!(writer, "{c}").map_err(internal)?;
    }
    writer.flush().map_err(internal)
}

pub fn labels_to_bytes(labeling: &Labeling) -> Vec<u8> {
    let mut out = Vec::new();
    write_labels(&mut out, labeling).expect("writing to memory");
    out
}

pub fn save_labels(path: &Path, labeling: &Labeling) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_labels(std::io::BufWriter::new(file), labeling)
}
