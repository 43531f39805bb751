//! Merge prior CSV artifacts into standalone SVG line plots: one plot per
//! numeric metric column, series split by the categorical columns.

use std::collections::BTreeMap;
use std::path::Path;

use crate::config::ExperimentConfig;
use crate::report_input::read_csv;
use crate::svg::{render_line_plot, Series};
use crate::CliError;

const X_CANDIDATES: &[&str] = &["N", "M", "tau", "j", "m", "b"];
const GROUP_CANDIDATES: &[&str] = &["weight", "name", "sigma", "b", "tau"];
// parameter echoes, not metrics
const SKIP_COLUMNS: &[&str] = &["n_draws"];

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let inputs = cfg
        .input
        .clone()
        .filter(|v| !v.is_empty())
        .ok_or_else(|| CliError::usage("report requires at least one --input CSV"))?;
    let dir = super::out_dir(cfg)?;
    let mut wrote = 0usize;
    for input in &inputs {
        wrote += render_one(input, &dir)?;
    }
    println!("wrote {wrote} plot(s) to {}", dir.display());
    Ok(())
}

fn render_one(input: &Path, dir: &Path) -> Result<usize, CliError> {
    let data = read_csv(input)?;
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "report".to_string());

    let x_col = X_CANDIDATES
        .iter()
        .find_map(|c| data.header.iter().position(|h| h == c))
        .ok_or_else(|| {
            CliError::usage(format!(
                "{}: no plottable x column (expected one of {X_CANDIDATES:?})",
                input.display()
            ))
        })?;
    let group_cols: Vec<usize> = GROUP_CANDIDATES
        .iter()
        .filter_map(|c| data.header.iter().position(|h| h == c))
        .filter(|&i| i != x_col)
        .collect();
    let y_cols: Vec<usize> = (0..data.header.len())
        .filter(|i| *i != x_col && !group_cols.contains(i))
        .filter(|&i| !SKIP_COLUMNS.contains(&data.header[i].as_str()))
        .filter(|&i| {
            // numeric in at least one row
            data.rows
                .iter()
                .any(|r| !r[i].is_empty() && r[i].parse::<f64>().is_ok())
        })
        .collect();

    let log_x = matches!(data.header[x_col].as_str(), "N" | "M" | "tau");
    let mut wrote = 0usize;
    for &y in &y_cols {
        // series keyed by the categorical columns, in first-seen order via BTreeMap on key
        let mut series_map: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
        for row in &data.rows {
            let (Ok(xv), Ok(yv)) = (row[x_col].parse::<f64>(), row[y].parse::<f64>()) else {
                continue;
            };
            let key = group_cols
                .iter()
                .map(|&g| format!("{}={}", data.header[g], row[g]))
                .collect::<Vec<_>>()
                .join(" ");
            series_map.entry(key).or_default().push((xv, yv));
        }
        if series_map.is_empty() {
            continue;
        }
        let series: Vec<Series> = series_map
            .into_iter()
            .map(|(label, mut points)| {
                points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                Series {
                    label: if label.is_empty() {
                        data.header[y].clone()
                    } else {
                        label
                    },
                    points,
                }
            })
            .collect();
        let positive = series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.1))
            .all(|v| v > 0.0);
        let spread = {
            let vals: Vec<f64> = series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.1))
                .collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if lo > 0.0 {
                hi / lo
            } else {
                1.0
            }
        };
        let log_y = positive && spread > 50.0;
        let title = format!("{stem}: {} vs {}", data.header[y], data.header[x_col]);
        let svg = render_line_plot(
            &title,
            &data.header[x_col],
            &data.header[y],
            log_x,
            log_y,
            &series,
        );
        super::write_artifact(dir, &format!("{stem}_{}.svg", data.header[y]), &svg)?;
        wrote += 1;
    }
    Ok(wrote)
}
