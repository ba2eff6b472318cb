//! Segre characteristics: the Jordan block sizes of a nilpotent matrix.
//!
//! Every other module is parameterised by a [`SegreChar`], the reduced
//! (strictly decreasing) form. Weakly decreasing input is accepted as a
//! [`RawSegre`] and must go through [`reduce`] first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawSegre {
    parts: Vec<u32>,
}

impl RawSegre {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::validation(
                None,
                "a Segre characteristic needs at least one part",
            ));
        }
        for (i, &p) in parts.iter().enumerate() {
            if p == 0 {
                return Err(Error::validation(Some(i), "parts must be positive"));
            }
            if i > 0 && parts[i - 1] < p {
                return Err(Error::validation(
                    Some(i),
                    format!(
                        "parts must be weakly decreasing, but {} < {}",
                        parts[i - 1],
                        p
                    ),
                ));
            }
        }
        Ok(RawSegre { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_reduced(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }
}

impl FromStr for RawSegre {
    type Err = Error;

    /// Parses the comma-separated form, e.g. `"5,3,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::validation(None, "empty Segre characteristic"));
        }
        let parts = s
            .split(',')
            .enumerate()
            .map(|(i, tok)| {
                let tok = tok.trim();
                tok.parse::<u32>().map_err(|_| {
                    Error::validation(Some(i), format!("{tok:?} is not a non-negative integer"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        RawSegre::new(parts)
    }
}

impl fmt::Display for RawSegre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.parts)
    }
}

/// A reduced Segre characteristic `α = (α₁ > α₂ > … > α_r > 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct SegreChar {
    parts: Vec<u32>,
}

impl SegreChar {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        let raw = RawSegre::new(parts)?;
        if let Some(i) = raw.parts.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::validation(
                Some(i + 1),
                "parts must be strictly decreasing; use reduce() for repeated parts",
            ));
        }
        Ok(SegreChar { parts: raw.parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts, `r`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// `αᵢ` with 1-based `i`, and 0 past the end. Several closed forms
    /// read `α₃` as 0 when `r = 2`.
    pub fn part(&self, i: usize) -> u32 {
        debug_assert!(i >= 1);
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Drops the first `k` parts, or `None` when nothing would remain.
    pub fn tail(&self, k: usize) -> Option<SegreChar> {
        if k >= self.parts.len() {
            return None;
        }
        Some(SegreChar {
            parts: self.parts[k..].to_vec(),
        })
    }
}

impl TryFrom<Vec<u32>> for SegreChar {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        SegreChar::new(parts)
    }
}

impl From<SegreChar> for Vec<u32> {
    fn from(s: SegreChar) -> Vec<u32> {
        s.parts
    }
}

impl FromStr for SegreChar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let raw: RawSegre = s.parse()?;
        SegreChar::new(raw.parts)
    }
}

impl fmt::Display for SegreChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.parts)
    }
}

fn write_parts(f: &mut fmt::Formatter<'_>, parts: &[u32]) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
    }
    Ok(())
}

/// Outcome of [`reduce`]. `changed` is set when repeated parts were
/// dropped, in which case the dimension of the input is not preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub segre: SegreChar,
    pub changed: bool,
}

/// Keeps each distinct part once, in order. The hyperlattices of a
/// characteristic and of its reduction are isomorphic.
pub fn reduce(raw: &RawSegre) -> Reduction {
    let mut parts = raw.parts.clone();
    parts.dedup();
    let changed = parts.len() != raw.parts.len();
    Reduction {
        segre: SegreChar { parts },
        changed,
    }
}

/// `n = α₁ + … + α_r`.
pub fn dimension(alpha: &SegreChar) -> u64 {
    alpha.parts.iter().map(|&p| u64::from(p)).sum()
}

/// Every reduced characteristic with dimension at most `n_max`, ordered by
/// dimension and then lexicographically descending.
pub fn enumerate_reduced(n_max: u32) -> Vec<SegreChar> {
    fn distinct_parts(
        remaining: u32,
        max_part: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<SegreChar>,
    ) {
        if remaining == 0 {
            out.push(SegreChar {
                parts: current.clone(),
            });
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            current.push(p);
            distinct_parts(remaining - p, p - 1, current, out);
            current.pop();
        }
    }

    let mut out = Vec::new();
    for n in 1..=n_max {
        distinct_parts(n, n, &mut Vec::new(), &mut out);
    }
    out
}
