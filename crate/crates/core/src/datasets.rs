//! Published frequency tables shipped with the crate.

use crate::distributions::CountSample;
use crate::{Error, Result};

/// Mammalian cytogenetic dosimetry lesions in rabbit lymphoblast induced by
/// streptonigrin (NSC-45383), exposure 60 micrograms/kg. Counts 0..=6.
pub const CYTOGENETIC: [(u64, u64); 7] = [(0, 413), (1, 124), (2, 42), (3, 15), (4, 5), (5, 0), (6, 2)];

/// Outbreaks of strikes in UK coal mining, successive four-week periods,
/// 1948-1959. The last row is the open cell ">= 4".
pub const STRIKES: [(u64, u64); 5] = [(0, 46), (1, 76), (2, 24), (3, 9), (4, 1)];

pub fn cytogenetic() -> CountSample {
    CountSample::from_frequencies(CYTOGENETIC).expect("embedded table")
}

pub fn strikes() -> CountSample {
    CountSample::from_frequencies(STRIKES)
        .and_then(|s| s.with_open_tail(4))
        .expect("embedded table")
}

pub const BUILTIN_NAMES: [&str; 2] = ["cytogenetic", "strikes"];

pub fn builtin(name: &str) -> Result<CountSample> {
    match name {
        "cytogenetic" => Ok(cytogenetic()),
        "strikes" => Ok(strikes()),
        other => Err(Error::Data(format!(
            "unknown builtin dataset '{other}' (available: {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}
