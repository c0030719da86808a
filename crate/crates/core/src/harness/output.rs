//! CSV layout, stable across releases:
//!
//! - `{out}/{experiment}/{preset}/{metric}.csv`: a `# gerk band v1` line, then
//!   `iteration,min,q25,median,q75,max`, one row per checkpoint.
//! - `{out}/{experiment}/sparsity.csv`: a `# gerk sparsity v1` line, then
//!   `preset,min,median,max` over the final iterates.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use crate::io::write_atomic;
use crate::scalar::Scalar;

use super::metrics::{AggregateBand, SPARSITY_THRESHOLD};
use super::trials::{SparsityRow, TrialOutcome};

pub const BAND_HEADER: &str = "# gerk band v1";
pub const SPARSITY_HEADER: &str = "# gerk sparsity v1";

pub fn band_csv(band: &AggregateBand) -> String {
    let mut s = format!("{BAND_HEADER}\niteration,min,q25,median,q75,max\n");
    for i in 0..band.len() {
        writeln!(
            s,
            "{},{:e},{:e},{:e},{:e},{:e}",
            band.iterations[i], band.min[i], band.q25[i], band.median[i], band.q75[i], band.max[i]
        )
        .expect("writing to a String");
    }
    s
}

pub fn sparsity_csv(rows: &[SparsityRow]) -> String {
    let mut s = format!("{SPARSITY_HEADER}\npreset,min,median,max\n");
    for r in rows {
        writeln!(s, "{},{},{},{}", r.preset, r.min, r.median, r.max).expect("writing to a String");
    }
    s
}

/// Fixed-width `preset  min/median/max` listing.
pub fn format_sparsity_table(rows: &[SparsityRow]) -> String {
    let mut s = format!("{:<10}{}\n", "method", "min/median/max");
    for r in rows {
        writeln!(s, "{:<10}{}/{}/{}", r.preset.name(), r.min, r.median, r.max).expect("writing to a String");
    }
    s
}

/// Writes all band files and the sparsity summary; returns the paths written,
/// in a fixed order.
pub fn write_experiment<T: Scalar>(
    out: &Path,
    experiment: &str,
    outcome: &TrialOutcome<T>,
) -> io::Result<Vec<PathBuf>> {
    let root = out.join(experiment);
    let mut written = Vec::new();
    for po in &outcome.presets {
        let dir = root.join(po.preset.name());
        std::fs::create_dir_all(&dir)?;
        for (metric, band) in &po.bands {
            let path = dir.join(format!("{}.csv", metric.name()));
            write_atomic(&path, band_csv(band).as_bytes())?;
            written.push(path);
        }
    }
    std::fs::create_dir_all(&root)?;
    let path = root.join("sparsity.csv");
    write_atomic(
        &path,
        sparsity_csv(&outcome.sparsity_table(SPARSITY_THRESHOLD)).as_bytes(),
    )?;
    written.push(path);
    Ok(written)
}
