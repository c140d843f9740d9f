//! Sweep serialization. The CSV layout is the stable interface: one header,
//! one line per cell in plan order, floats at 17 significant digits so
//! re-runs can be diffed bit-for-bit. Rows without a report keep the shape
//! with zeros and carry the reason in `status`.

use crate::error::Result;
use crate::harness::SweepRow;
use serde_json::json;
use std::io::Write;

pub const CSV_HEADER: &str =
    "family,s,n,p,E,rho_sup,rho_tilde_sup,leading,remainder,explicit_rhs,sharpness_ratio,interp_gap,status";

fn csv_line(row: &SweepRow) -> String {
    let z = [0.0f64; 8];
    let v = match &row.report {
        Some(r) => [
            r.bound.e_value,
            r.rho_sup,
            r.rho_tilde_sup,
            r.bound.leading,
            r.bound.remainder,
            r.bound.explicit_rhs,
            r.sharpness_ratio,
            r.interp_gap,
        ],
        None => z,
    };
    let nums: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
    format!(
        "{},{},{},{},{},{}",
        row.family,
        row.s,
        row.n,
        row.p,
        nums.join(","),
        row.status
    )
}

pub fn write_csv(out: &mut dyn Write, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", csv_line(row))?;
    }
    Ok(())
}

/// Same table as the CSV plus the per-row profile kind, seed and the raw
/// distance between the two sums, under a top-level base seed.
pub fn write_json(out: &mut dyn Write, rows: &[SweepRow], seed: u64) -> Result<()> {
    let rows: Vec<_> = rows
        .iter()
        .map(|row| {
            let mut obj = json!({
                "family": row.family,
                "kind": row.kind,
                "s": row.s,
                "n": row.n,
                "p": row.p,
                "seed": row.seed,
                "status": row.status,
            });
            if let Some(r) = &row.report {
                obj["E"] = json!(r.bound.e_value);
                obj["rho_sup"] = json!(r.rho_sup);
                obj["rho_tilde_sup"] = json!(r.rho_tilde_sup);
                obj["leading"] = json!(r.bound.leading);
                obj["remainder"] = json!(r.bound.remainder);
                obj["explicit_rhs"] = json!(r.bound.explicit_rhs);
                obj["sharpness_ratio"] = json!(r.sharpness_ratio);
                obj["interp_gap"] = json!(r.interp_gap);
                obj["diff_sup"] = json!(r.diff_sup);
            }
            obj
        })
        .collect();
    serde_json::to_writer_pretty(&mut *out, &json!({ "seed": seed, "rows": rows }))?;
    writeln!(out)?;
    Ok(())
}
