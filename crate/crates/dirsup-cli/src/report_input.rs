//! Reader for the crate's own CSV artifacts (unquoted, comma-separated,
//! header row first).

use std::path::Path;

use crate::CliError;

pub struct CsvData {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn read_csv(path: &Path) -> Result<CsvData, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read input {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| CliError::usage(format!("{} is empty", path.display())))?
        .split(',')
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<String> = line.split(',').map(|s| s.to_string()).collect();
        if cells.len() != header.len() {
            return Err(CliError::usage(format!(
                "{} row {}: {} cells but {} header columns",
                path.display(),
                i + 2,
                cells.len(),
                header.len()
            )));
        }
        rows.push(cells);
    }
    Ok(CsvData { header, rows })
}
