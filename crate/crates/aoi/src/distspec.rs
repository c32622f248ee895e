//! Text form of distributions: `geometric:<rate>`, `deterministic:<k>`,
//! `explicit:<w1,w2,...,wK>`.

use std::fmt::Write as _;

use aoi_core::{DiscreteDist, DistKind};

#[derive(Debug, Clone, thiserror::Error)]
pub enum DistSpecError {
    #[error("expected `<kind>:<params>`, got `{0}`")]
    Shape(String),
    #[error("unknown distribution kind `{0}` (expected geometric, deterministic or explicit)")]
    Kind(String),
    #[error("cannot parse `{0}` as a number")]
    Number(String),
    #[error(transparent)]
    Invalid(#[from] aoi_core::Error),
}

/// Parses a distribution spec. Numbers use `.` as decimal separator.
pub fn parse_dist(spec: &str) -> Result<DiscreteDist, DistSpecError> {
    let (kind, params) = spec.trim().split_once(':').ok_or_else(|| DistSpecError::Shape(spec.to_owned()))?;
    let params = params.trim();
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| DistSpecError::Number(s.trim().to_owned()));
    let dist = match kind.trim().to_ascii_lowercase().as_str() {
        "geometric" | "geo" => DiscreteDist::geometric(number(params)?)?,
        "deterministic" | "det" => {
            let k = params.parse::<usize>().map_err(|_| DistSpecError::Number(params.to_owned()))?;
            DiscreteDist::deterministic(k)?
        }
        "explicit" => {
            let weights = params.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
            DiscreteDist::explicit(&weights)?
        }
        other => return Err(DistSpecError::Kind(other.to_owned())),
    };
    Ok(dist)
}

/// Inverse of [`parse_dist`], using the shortest exact decimal forms.
pub fn format_dist(d: &DiscreteDist) -> String {
    match d.kind() {
        DistKind::Geometric { rate } => format!("geometric:{rate}"),
        DistKind::Deterministic { period } => format!("deterministic:{period}"),
        DistKind::Explicit => {
            let mut out = String::from("explicit:");
            for (i, p) in d.probs().unwrap_or(&[]).iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{p}");
            }
            out
        }
    }
}
