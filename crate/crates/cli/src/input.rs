//! Input specification: presentation multiplicities or a Hilbert window.
//!
//! Exactly one of the two forms is accepted per input (they are redundant,
//! so ambiguity is an error by construction of the tagged encoding):
//!
//! ```json
//! {"presentation": {"a": [[0, 4]], "b": [[1, 1]]}}
//! {"hilbert": {"values": [[-1, 0], [0, 1], [1, 3], [2, 6], [3, 10]]}}
//! ```

use serde::{Deserialize, Serialize};
use whnfilt_core::{Fdh64, FdhFunction, Seq64, SupportSeq};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSpec {
    Presentation { a: Vec<[i64; 2]>, b: Vec<[i64; 2]> },
    Hilbert { values: Vec<[i64; 2]> },
}

fn check_entries(field: &str, entries: &[[i64; 2]]) -> Result<(), String> {
    let mut seen = std::collections::BTreeSet::new();
    for (i, [n, v]) in entries.iter().enumerate() {
        if *v < 0 {
            return Err(format!("{field}[{i}]: value {v} at n={n} must be nonnegative"));
        }
        if !seen.insert(*n) {
            return Err(format!("{field}[{i}]: duplicate index n={n}"));
        }
    }
    Ok(())
}

impl InputSpec {
    /// Field-level validation: nonnegative counts and values, distinct
    /// indices per list.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            InputSpec::Presentation { a, b } => {
                check_entries("presentation.a", a)?;
                check_entries("presentation.b", b)
            }
            InputSpec::Hilbert { values } => check_entries("hilbert.values", values),
        }
    }

    /// Builds the function, reporting the core validation error verbatim.
    pub fn to_fdh(&self) -> Result<Fdh64, whnfilt_core::Error<i64>> {
        match self {
            InputSpec::Presentation { a, b } => {
                let (a, b) = (to_seq(a), to_seq(b));
                FdhFunction::from_presentation(&a, &b)
            }
            InputSpec::Hilbert { values } => {
                let mut pairs: Vec<(i64, i64)> = values.iter().map(|[n, v]| (*n, *v)).collect();
                pairs.sort();
                FdhFunction::from_hilbert_window(&pairs)
            }
        }
    }

    /// The presentation multiplicities: as given, or recovered from the
    /// sign parts of the third difference for Hilbert input.
    pub fn presentation_seqs(&self) -> Result<(Seq64, Seq64), whnfilt_core::Error<i64>> {
        match self {
            InputSpec::Presentation { a, b } => Ok((to_seq(a), to_seq(b))),
            InputSpec::Hilbert { .. } => {
                let f = self.to_fdh()?;
                Ok((f.diff().positive_part(), f.diff().negative_part()))
            }
        }
    }

    pub fn from_seqs(a: &Seq64, b: &Seq64) -> InputSpec {
        InputSpec::Presentation {
            a: from_seq(a),
            b: from_seq(b),
        }
    }
}

fn to_seq(entries: &[[i64; 2]]) -> Seq64 {
    SupportSeq::from_pairs(entries.iter().map(|[n, v]| (*n, *v)))
}

pub fn from_seq(seq: &Seq64) -> Vec<[i64; 2]> {
    seq.iter().map(|(n, v)| [*n, *v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_presentation() {
        let spec: InputSpec =
            serde_json::from_str(r#"{"presentation": {"a": [[0, 4]], "b": [[1, 1]]}}"#).unwrap();
        spec.validate().unwrap();
        let f = spec.to_fdh().unwrap();
        assert_eq!(f.rank_degree(), (3, 1));
    }

    #[test]
    fn parses_hilbert() {
        let spec: InputSpec =
            serde_json::from_str(r#"{"hilbert": {"values": [[-1,0],[0,4],[1,11],[2,21],[3,34]]}}"#)
                .unwrap();
        spec.validate().unwrap();
        let f = spec.to_fdh().unwrap();
        assert_eq!(f.rank_degree(), (3, 1));
    }

    #[test]
    fn rejects_both_forms() {
        let err = serde_json::from_str::<InputSpec>(
            r#"{"presentation": {"a": [], "b": []}, "hilbert": {"values": []}}"#,
        );
        assert!(err.is_err());
    }

    #[test]
    fn rejects_negative_and_duplicate() {
        let spec: InputSpec =
            serde_json::from_str(r#"{"presentation": {"a": [[0, -1]], "b": []}}"#).unwrap();
        let msg = spec.validate().unwrap_err();
        assert!(msg.contains("presentation.a[0]"), "{msg}");

        let spec: InputSpec =
            serde_json::from_str(r#"{"presentation": {"a": [[0, 1], [0, 2]], "b": []}}"#).unwrap();
        let msg = spec.validate().unwrap_err();
        assert!(msg.contains("duplicate index n=0"), "{msg}");
    }

    #[test]
    fn round_trips_through_json() {
        let spec = InputSpec::Presentation {
            a: vec![[0, 1], [2, 2]],
            b: vec![[3, 1]],
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: InputSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
