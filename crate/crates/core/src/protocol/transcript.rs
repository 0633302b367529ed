//! CSV transcript of protocol rounds.
//!
//! Columns: `round_index,alice_setting,bob_setting,alice_outcome_exponent,
//! bob_outcome_exponent,sift_class`. Outcomes are written as the exponent of ω.

use std::io::{BufRead, Write};

use super::{RoundRecord, SettingLabel, SiftClass};
use crate::error::{Error, Result};
use crate::linalg::CubeRoot;

pub const HEADER: &str =
    "round_index,alice_setting,bob_setting,alice_outcome_exponent,bob_outcome_exponent,sift_class";

fn io(e: std::io::Error) -> Error {
    Error::Transcript(e.to_string())
}

pub fn write_transcript<W: Write>(records: &[RoundRecord], mut out: W) -> Result<()> {
    writeln!(out, "{HEADER}").map_err(io)?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.index,
            r.alice_setting,
            r.bob_setting,
            r.alice_outcome.exponent(),
            r.bob_outcome.exponent(),
            r.sift
        )
        .map_err(io)?;
    }
    Ok(())
}

pub fn read_transcript<R: BufRead>(input: R) -> Result<Vec<RoundRecord>> {
    let mut lines = input.lines();
    match lines.next() {
        Some(h)
            if h.as_deref()
                .map_err(|e| Error::Transcript(e.to_string()))?
                .trim()
                == HEADER => {}
        _ => return Err(Error::Transcript("missing or unexpected header".into())),
    }
    let mut records = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line.map_err(io)?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        let bad = || Error::Transcript(format!("line {}: `{line}`", n + 2));
        let [index, alice, bob, ao, bo, sift] = fields[..] else {
            return Err(bad());
        };
        let exponent = |s: &str| match s.parse::<u8>() {
            Ok(e) if e < 3 => Ok(CubeRoot::from_exponent(e as i64)),
            _ => Err(bad()),
        };
        records.push(RoundRecord {
            index: index.parse().map_err(|_| bad())?,
            alice_setting: alice.parse::<SettingLabel>()?,
            bob_setting: bob.parse::<SettingLabel>()?,
            alice_outcome: exponent(ao)?,
            bob_outcome: exponent(bo)?,
            sift: sift.parse::<SiftClass>()?,
        });
    }
    Ok(records)
}
