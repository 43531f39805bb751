//! Weight-profile table: one row per M with the cumulative characteristics.

use dirsup::weights::cumulative_profile;

use crate::config::ExperimentConfig;
use crate::table::{Cell, CsvTable, PROFILE_HEADER};
use crate::CliError;

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let weight = super::parse_weight(cfg)?;
    let m_max = cfg.m_max.unwrap_or(10_000);
    let profile = cumulative_profile(&weight, m_max)?;

    let mut csv = CsvTable::new(PROFILE_HEADER);
    for m in 1..=m_max {
        csv.row(&[
            Cell::Int(m),
            Cell::Float(profile.d1(m)),
            Cell::Float(profile.d2(m)),
            Cell::Float(profile.d1_tilde(m)),
            Cell::Float(profile.d2_tilde(m)),
        ]);
    }

    let dir = super::out_dir(cfg)?;
    let path = super::write_artifact(&dir, &format!("profile_{}.csv", weight.id()), &csv.finish())?;
    println!("wrote {}", path.display());
    Ok(())
}
