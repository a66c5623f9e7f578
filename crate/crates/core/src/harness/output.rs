use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::run::{ReplicateRecord, Summary};
use super::HarnessError;

pub const CSV_HEADER: &str = "replicate_index,raw_tau,scaled_tau,events,fixations,truncated";

/// `out.csv` -> `out.summary.json`.
pub fn summary_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("summary.json")
}

/// CSV text with a header row. Floats use Rust's shortest round-trip
/// formatting, so equal values give equal bytes.
pub fn format_csv(records: &[ReplicateRecord]) -> String {
    let mut s = String::with_capacity(64 * (records.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in records {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            r.replicate_index, r.raw_tau, r.scaled_tau, r.events, r.fixations, r.truncated
        )
        .expect("writing to a String");
    }
    s
}

pub fn write_csv(path: &Path, records: &[ReplicateRecord]) -> Result<(), HarnessError> {
    fs::write(path, format_csv(records))?;
    Ok(())
}

pub fn write_outputs(
    csv_path: &Path,
    records: &[ReplicateRecord],
    summary: &Summary,
) -> Result<(), HarnessError> {
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    write_csv(csv_path, records)?;
    let mut json = serde_json::to_string_pretty(summary)?;
    json.push('\n');
    fs::write(summary_path(csv_path), json)?;
    Ok(())
}
