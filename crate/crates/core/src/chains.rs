//! Special chains and riding chains.
//!
//! A special chain is a maximal chain `w₁ - … - w_t` in which every element
//! but the last has exactly one son, namely the next element. Only those
//! ending at the zero tuple are of interest; there are one or two of them,
//! of three possible shapes (`C1`, `C2`, `C3`).
//!
//! A riding chain on `C_p` starts with a (possibly empty) run of
//! unique-son steps, continues with elements that have exactly two sons,
//! the next element and one on `C_p`, and ends at an element whose only son
//! lies on `C_p`. At least one two-son step is required, the first son it
//! drops onto `C_p` is the top of `C_p`, and among all such chains only
//! those of maximum length are kept.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperlattice::{self, Hyperlattice, Hypertuple};
use crate::segre::SegreChar;

/// A descending sequence of hypertuples, each a son of its predecessor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Chain {
    tuples: Vec<Hypertuple>,
}

impl Chain {
    pub fn new(tuples: Vec<Hypertuple>) -> Self {
        Chain { tuples }
    }

    pub fn tuples(&self) -> &[Hypertuple] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn first(&self) -> Option<&Hypertuple> {
        self.tuples.first()
    }

    pub fn last(&self) -> Option<&Hypertuple> {
        self.tuples.last()
    }

    pub fn contains(&self, u: &Hypertuple) -> bool {
        self.tuples.contains(u)
    }

    pub fn reversed(&self) -> Chain {
        Chain {
            tuples: self.tuples.iter().rev().cloned().collect(),
        }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, u) in self.tuples.iter().enumerate() {
            if i > 0 {
                f.write_str(" - ")?;
            }
            write!(f, "{u}")?;
        }
        Ok(())
    }
}

impl FromStr for Chain {
    type Err = Error;

    /// Parses `"(2,2) - (2,1) - (2,0)"`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::validation(None, "empty chain"));
        }
        let tuples = s
            .split('-')
            .enumerate()
            .map(|(i, tok)| {
                let tok = tok.trim();
                if !(tok.starts_with('(') && tok.ends_with(')')) {
                    return Err(Error::validation(
                        Some(i),
                        format!("{tok:?} is not a parenthesised tuple"),
                    ));
                }
                tok.parse::<Hypertuple>().map_err(|e| match e {
                    Error::Validation { message, .. } => Error::validation(Some(i), message),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let r = tuples[0].len();
        if let Some(i) = tuples.iter().position(|u| u.len() != r) {
            return Err(Error::validation(
                Some(i),
                "tuples of a chain must have equal length",
            ));
        }
        Ok(Chain { tuples })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SpecialKind {
    C1,
    C2,
    C3,
}

impl SpecialKind {
    pub const ALL: [SpecialKind; 3] = [SpecialKind::C1, SpecialKind::C2, SpecialKind::C3];

    pub fn riding(self) -> RidingKind {
        match self {
            SpecialKind::C1 => RidingKind::RC1,
            SpecialKind::C2 => RidingKind::RC2,
            SpecialKind::C3 => RidingKind::RC3,
        }
    }
}

impl fmt::Display for SpecialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RidingKind {
    RC1,
    RC2,
    RC3,
}

impl fmt::Display for RidingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpecialChain {
    pub kind: SpecialKind,
    pub chain: Chain,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RidingChain {
    pub kind: RidingKind,
    pub attached_to: SpecialKind,
    pub chain: Chain,
}

/// The special-chain kinds present in `V(α)`:
/// `r = 1` gives `{C2}`; `r = 2` with `α₁−α₂ = 1` gives `{C3}`;
/// otherwise `{C1, C2}` when `α₁−α₂ > 1` and `{C1, C3}` when `α₁−α₂ = 1`.
pub fn expected_kinds(alpha: &SegreChar) -> Vec<SpecialKind> {
    let r = alpha.len();
    let gap = alpha.part(1) - alpha.part(2);
    match (r, gap) {
        (1, _) => vec![SpecialKind::C2],
        (2, 1) => vec![SpecialKind::C3],
        (_, 1) => vec![SpecialKind::C1, SpecialKind::C3],
        _ => vec![SpecialKind::C1, SpecialKind::C2],
    }
}

/// Expected length of a special chain of the given kind:
/// `r+1`, `α₁−α₂+1` or `2(α₁−α₃)` (with `αᵢ = 0` past the end).
pub fn special_length(alpha: &SegreChar, kind: SpecialKind) -> usize {
    let a1 = alpha.part(1) as usize;
    match kind {
        SpecialKind::C1 => alpha.len() + 1,
        SpecialKind::C2 => a1 - alpha.part(2) as usize + 1,
        SpecialKind::C3 => 2 * (a1 - alpha.part(3) as usize),
    }
}

/// The closed form of a special chain, when that kind is present in `V(α)`.
///
/// `C1` is `(1,…,1) - (1,…,1,0) - … - 0` and `C2` is
/// `(α₁−α₂,0,…,0) - … - 0`. `C3` starts at `(α₁−α₃, α₂−α₃, 0, …, 0)` and
/// follows unique sons down to zero.
pub fn special_chain_form(alpha: &SegreChar, kind: SpecialKind) -> Option<Chain> {
    if !expected_kinds(alpha).contains(&kind) {
        return None;
    }
    let r = alpha.len();
    let tuples = match kind {
        SpecialKind::C1 => (0..=r)
            .rev()
            .map(|ones| {
                let mut v = vec![0; r];
                v[..ones].fill(1);
                Hypertuple::new(v)
            })
            .collect(),
        SpecialKind::C2 => {
            let top = alpha.part(1) - alpha.part(2);
            (0..=top)
                .rev()
                .map(|x| {
                    let mut v = vec![0; r];
                    v[0] = x;
                    Hypertuple::new(v)
                })
                .collect()
        }
        SpecialKind::C3 => {
            let mut v = vec![0; r];
            v[0] = alpha.part(1) - alpha.part(3);
            v[1] = alpha.part(2) - alpha.part(3);
            let mut current = Hypertuple::new(v);
            let mut out = vec![current.clone()];
            while !current.is_zero() {
                current = hyperlattice::unique_son(alpha, &current).ok()??;
                out.push(current.clone());
            }
            out
        }
    };
    Some(Chain::new(tuples))
}

fn classify(alpha: &SegreChar, chain: Chain) -> Result<SpecialChain> {
    match SpecialKind::ALL
        .into_iter()
        .find(|&k| special_chain_form(alpha, k).as_ref() == Some(&chain))
    {
        Some(kind) => Ok(SpecialChain { kind, chain }),
        None => Err(Error::Internal(format!(
            "special chain {chain} of V({alpha}) matches none of C1, C2, C3"
        ))),
    }
}

/// Special chains ending at zero, found by climbing from the zero tuple:
/// a father `f` extends the chain when the unique-son criterion says `f`'s
/// only son is the current top.
pub fn special_chains(lattice: &Hyperlattice) -> Result<Vec<SpecialChain>> {
    let alpha = lattice.alpha();
    let zero = Hypertuple::zero(alpha.len());
    let mut found = Vec::new();
    let mut stack = vec![vec![zero]];
    while let Some(path) = stack.pop() {
        let top = path.last().expect("non-empty path");
        let mut extended = false;
        for f in hyperlattice::fathers(alpha, top)? {
            if hyperlattice::unique_son(alpha, &f)?.as_ref() == Some(top) {
                let mut longer = path.clone();
                longer.push(f);
                stack.push(longer);
                extended = true;
            }
        }
        if !extended {
            found.push(classify(
                alpha,
                Chain::new(path.into_iter().rev().collect()),
            )?);
        }
    }
    found.sort();
    Ok(found)
}

/// Special chains ending at zero, found by trying every node as a chain top
/// and following cached covers. Independent of [`special_chains`].
pub fn special_chains_exhaustive(lattice: &Hyperlattice) -> Result<Vec<SpecialChain>> {
    let bottom = lattice.bottom();
    let mut found = Vec::new();
    for start in 0..lattice.len() {
        if lattice
            .fathers_of(start)
            .iter()
            .any(|&f| lattice.only_son(f) == Some(start))
        {
            continue;
        }
        let mut path = vec![start];
        let mut x = start;
        while x != bottom {
            match lattice.only_son(x) {
                Some(s) => {
                    path.push(s);
                    x = s;
                }
                None => break,
            }
        }
        if x == bottom {
            let chain = Chain::new(path.iter().map(|&i| lattice.node(i).clone()).collect());
            found.push(classify(lattice.alpha(), chain)?);
        }
    }
    found.sort();
    Ok(found)
}

/// Riding chains on every special chain of the lattice. Empty for `r = 1`
/// and for the chain lattices `V(l, l−1)`.
pub fn riding_chains(lattice: &Hyperlattice) -> Result<Vec<RidingChain>> {
    let mut out = Vec::new();
    for special in special_chains(lattice)? {
        out.extend(riding_on(lattice, &special));
    }
    out.sort();
    Ok(out)
}

/// Riding chains on one special chain.
pub fn riding_on(lattice: &Hyperlattice, special: &SpecialChain) -> Vec<RidingChain> {
    let on_special: HashSet<usize> = special
        .chain
        .tuples()
        .iter()
        .filter_map(|u| lattice.index_of(u))
        .collect();
    let Some(special_top) = special.chain.first().and_then(|u| lattice.index_of(u)) else {
        return Vec::new();
    };

    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for start in 0..lattice.len() {
        if on_special.contains(&start) {
            continue;
        }
        if let Some(path) = ride_from(lattice, &on_special, special_top, start) {
            candidates.push(path);
        }
    }
    let Some(longest) = candidates.iter().map(Vec::len).max() else {
        return Vec::new();
    };
    candidates
        .into_iter()
        .filter(|p| p.len() == longest)
        .map(|p| RidingChain {
            kind: special.kind.riding(),
            attached_to: special.kind,
            chain: Chain::new(p.into_iter().map(|i| lattice.node(i).clone()).collect()),
        })
        .collect()
}

/// Follows the riding pattern down from `start`; `None` if it breaks.
fn ride_from(
    lattice: &Hyperlattice,
    on_special: &HashSet<usize>,
    special_top: usize,
    start: usize,
) -> Option<Vec<usize>> {
    let mut path = vec![start];
    let mut first_rider = None;
    let mut riders = 0;
    let mut x = start;
    loop {
        match *lattice.sons_of(x) {
            [s] if on_special.contains(&s) => {
                first_rider.get_or_insert(s);
                riders += 1;
                break;
            }
            // unique-son steps are only allowed before the first two-son step
            [s] if first_rider.is_none() => {
                path.push(s);
                x = s;
            }
            [s1, s2] => {
                let (next, rider) = match (on_special.contains(&s1), on_special.contains(&s2)) {
                    (true, false) => (s2, s1),
                    (false, true) => (s1, s2),
                    _ => return None,
                };
                first_rider.get_or_insert(rider);
                riders += 1;
                path.push(next);
                x = next;
            }
            _ => return None,
        }
    }
    (riders >= 2 && first_rider == Some(special_top)).then_some(path)
}

/// Whether consecutive tuples of `chain` are in the son relation of the
/// lattice. Tuples outside the lattice are an error.
pub fn validate_chain(lattice: &Hyperlattice, chain: &Chain) -> Result<bool> {
    let mut indices = Vec::with_capacity(chain.len());
    for u in chain.tuples() {
        match lattice.index_of(u) {
            Some(i) => indices.push(i),
            None => {
                return Err(Error::NotMember {
                    tuple: u.to_string(),
                    alpha: lattice.alpha().to_string(),
                })
            }
        }
    }
    Ok(indices
        .windows(2)
        .all(|w| lattice.sons_of(w[0]).contains(&w[1])))
}
