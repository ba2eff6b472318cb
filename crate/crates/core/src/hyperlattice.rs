//! The hyperlattice `V(α)`.
//!
//! For a nilpotent matrix with reduced Segre characteristic `α`, the
//! hyperinvariant subspaces are in order-preserving bijection with the
//! integer tuples `u` satisfying
//!
//! ```text
//!   u₁ ≥ u₂ ≥ … ≥ u_r ≥ 0
//!   α₁−u₁ ≥ α₂−u₂ ≥ … ≥ α_r−u_r ≥ 0
//! ```
//!
//! ordered entrywise. Meet and join are entrywise `min` and `max`.
//!
//! The free functions take `α` per call so that a [`Hypertuple`] stays a
//! plain integer sequence; [`Hyperlattice`] is the materialised lattice with
//! its cover relation precomputed.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segre::SegreChar;

/// Default cap on the number of nodes [`enumerate`] will materialise.
pub const DEFAULT_NODE_BOUND: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hypertuple(Vec<u32>);

impl Hypertuple {
    pub fn new(entries: Vec<u32>) -> Self {
        Hypertuple(entries)
    }

    pub fn zero(r: usize) -> Self {
        Hypertuple(vec![0; r])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Entrywise `≤`, the order `⊂` of the lattice.
    pub fn le(&self, other: &Hypertuple) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn meet(&self, other: &Hypertuple) -> Result<Hypertuple> {
        self.zip_with(other, u32::min)
    }

    pub fn join(&self, other: &Hypertuple) -> Result<Hypertuple> {
        self.zip_with(other, u32::max)
    }

    fn zip_with(&self, other: &Hypertuple, f: impl Fn(u32, u32) -> u32) -> Result<Hypertuple> {
        check_len(self.0.len(), other.0.len())?;
        Ok(Hypertuple(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    fn with_entry(&self, i: usize, value: u32) -> Hypertuple {
        let mut v = self.0.clone();
        v[i] = value;
        Hypertuple(v)
    }
}

impl From<Vec<u32>> for Hypertuple {
    fn from(v: Vec<u32>) -> Self {
        Hypertuple(v)
    }
}

impl From<&[u32]> for Hypertuple {
    fn from(v: &[u32]) -> Self {
        Hypertuple(v.to_vec())
    }
}

impl fmt::Display for Hypertuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Hypertuple {
    type Err = Error;

    /// Accepts `"(3,2,1)"` as well as the bare `"3,2,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = match (s.strip_prefix('('), s.strip_suffix(')')) {
            (Some(_), Some(_)) if s.len() >= 2 => &s[1..s.len() - 1],
            (None, None) => s,
            _ => return Err(Error::validation(None, "unbalanced parentheses")),
        };
        if inner.trim().is_empty() {
            return Err(Error::validation(None, "empty tuple"));
        }
        inner
            .split(',')
            .enumerate()
            .map(|(i, tok)| {
                let tok = tok.trim();
                tok.parse::<u32>().map_err(|_| {
                    Error::validation(Some(i), format!("{tok:?} is not a non-negative integer"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Hypertuple)
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}

/// Membership test for `V(α)`.
pub fn contains(alpha: &SegreChar, u: &[u32]) -> Result<bool> {
    let a = alpha.parts();
    check_len(a.len(), u.len())?;
    for i in 0..a.len() {
        if u[i] > a[i] {
            return Ok(false);
        }
        if i + 1 < a.len() {
            if u[i] < u[i + 1] {
                return Ok(false);
            }
            if a[i] - u[i] < a[i + 1].saturating_sub(u[i + 1]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn require_member(alpha: &SegreChar, u: &Hypertuple) -> Result<()> {
    if contains(alpha, u.entries())? {
        Ok(())
    } else {
        Err(Error::NotMember {
            tuple: u.to_string(),
            alpha: alpha.to_string(),
        })
    }
}

/// Meet within `V(α)`; both arguments must be members.
pub fn meet(alpha: &SegreChar, u: &Hypertuple, v: &Hypertuple) -> Result<Hypertuple> {
    require_member(alpha, u)?;
    require_member(alpha, v)?;
    u.meet(v)
}

/// Join within `V(α)`; both arguments must be members.
pub fn join(alpha: &SegreChar, u: &Hypertuple, v: &Hypertuple) -> Result<Hypertuple> {
    require_member(alpha, u)?;
    require_member(alpha, v)?;
    u.join(v)
}

/// `(α₁−α₂+1)(α₂−α₃+1)…(α_{r−1}−α_r+1)(α_r+1)`, saturating at `u128::MAX`.
pub fn cardinality(alpha: &SegreChar) -> u128 {
    let a = alpha.parts();
    let mut acc: u128 = 1;
    for i in 0..a.len() {
        let next = a.get(i + 1).copied().unwrap_or(0);
        let factor = u128::from(a[i] - next) + 1;
        acc = match acc.checked_mul(factor) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

/// `Σ uᵢ`. A maximal chain from `u` down to zero has `weight(u) + 1` elements.
pub fn weight(u: &Hypertuple) -> u64 {
    u.entries().iter().map(|&x| u64::from(x)).sum()
}

/// Whether position `i` (0-based) of `u` can be decremented by one while
/// staying in `V(α)`. With `u_{r+1} := 0` the three cases of the son lemma
/// collapse to: `uᵢ > uᵢ₊₁`, and for `i > 1` also `αᵢ₋₁−uᵢ₋₁ > αᵢ−uᵢ`.
/// For `r = 1` this reads `u₁ > 0`.
fn decrementable(a: &[u32], u: &[u32], i: usize) -> bool {
    let next = u.get(i + 1).copied().unwrap_or(0);
    if u[i] <= next {
        return false;
    }
    i == 0 || a[i - 1] - u[i - 1] > a[i] - u[i]
}

/// Whether position `i` (0-based) can be incremented by one inside `V(α)`.
fn incrementable(a: &[u32], u: &[u32], i: usize) -> bool {
    if u[i] >= a[i] {
        return false;
    }
    if i > 0 && u[i - 1] <= u[i] {
        return false;
    }
    match a.get(i + 1) {
        Some(&next_a) => a[i] - u[i] > next_a - u[i + 1],
        None => true,
    }
}

/// The sons (lower covers) of `u`, in lexicographically descending order.
/// The zero tuple has none.
pub fn sons(alpha: &SegreChar, u: &Hypertuple) -> Result<Vec<Hypertuple>> {
    require_member(alpha, u)?;
    Ok(sons_unchecked(alpha.parts(), u))
}

fn sons_unchecked(a: &[u32], u: &Hypertuple) -> Vec<Hypertuple> {
    // Decrementing a later position gives a lexicographically larger tuple.
    (0..a.len())
        .rev()
        .filter(|&i| decrementable(a, u.entries(), i))
        .map(|i| u.with_entry(i, u.entries()[i] - 1))
        .collect()
}

/// The fathers (upper covers) of `u`, in lexicographically descending order.
pub fn fathers(alpha: &SegreChar, u: &Hypertuple) -> Result<Vec<Hypertuple>> {
    require_member(alpha, u)?;
    let a = alpha.parts();
    let mut out = Vec::new();
    for i in 0..a.len() {
        if !incrementable(a, u.entries(), i) {
            continue;
        }
        let w = u.with_entry(i, u.entries()[i] + 1);
        // A single-entry increment inside V(α) is always a cover; the
        // son lemma applied to `w` must agree.
        debug_assert!(decrementable(a, w.entries(), i));
        out.push(w);
    }
    Ok(out)
}

/// The unique son of `u`, if `u` has exactly one.
///
/// With `k = max{i : u₁ = … = uᵢ}` and `q = max{i : uᵢ > 0}`, `u` has a
/// single son iff `α_k−u_k = α_{k+1}−u_{k+1} = … = α_q−u_q`, and that son
/// decrements position `k`.
pub fn unique_son(alpha: &SegreChar, u: &Hypertuple) -> Result<Option<Hypertuple>> {
    require_member(alpha, u)?;
    if u.is_zero() {
        return Err(Error::Precondition(
            "the zero tuple has no sons".to_string(),
        ));
    }
    let a = alpha.parts();
    let e = u.entries();
    // 0-based k and q.
    let k = e.iter().take_while(|&&x| x == e[0]).count() - 1;
    let q = e.iter().rposition(|&x| x > 0).expect("non-zero tuple");
    // u is in V(α), so k ≤ q.
    let gap = a[k] - e[k];
    if (k..=q).all(|i| a[i] - e[i] == gap) {
        Ok(Some(u.with_entry(k, e[k] - 1)))
    } else {
        Ok(None)
    }
}

/// The order-reversing involution `u ↦ (α₁−u₁, …, α_r−u_r)`.
pub fn dual(alpha: &SegreChar, u: &Hypertuple) -> Result<Hypertuple> {
    require_member(alpha, u)?;
    Ok(Hypertuple(
        alpha
            .parts()
            .iter()
            .zip(u.entries())
            .map(|(&a, &x)| a - x)
            .collect(),
    ))
}

/// A fully materialised `V(α)` with its Hasse diagram.
///
/// Nodes are stored in lexicographically descending order, so index 0 is
/// the top `α` and the last index is the zero tuple.
#[derive(Debug, Clone)]
pub struct Hyperlattice {
    alpha: SegreChar,
    nodes: Vec<Hypertuple>,
    index: HashMap<Hypertuple, usize>,
    sons: Vec<Vec<usize>>,
    fathers: Vec<Vec<usize>>,
}

/// Materialises `V(α)` under the default node bound.
pub fn enumerate(alpha: &SegreChar) -> Result<Hyperlattice> {
    enumerate_with_bound(alpha, DEFAULT_NODE_BOUND)
}

pub fn enumerate_with_bound(alpha: &SegreChar, bound: u128) -> Result<Hyperlattice> {
    let card = cardinality(alpha);
    if card > bound {
        return Err(Error::Resource {
            what: format!("V({alpha})"),
            required: card,
            bound,
        });
    }
    let a = alpha.parts();
    let mut nodes = Vec::with_capacity(card as usize);
    let mut current = Vec::with_capacity(a.len());
    fill(a, &mut current, &mut nodes);
    if nodes.len() as u128 != card {
        return Err(Error::Internal(format!(
            "enumerated {} nodes of V({alpha}) but the closed form gives {card}",
            nodes.len()
        )));
    }

    let index: HashMap<Hypertuple, usize> = nodes
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, u)| (u, i))
        .collect();
    let mut sons = Vec::with_capacity(nodes.len());
    let mut fathers = vec![Vec::new(); nodes.len()];
    for (i, u) in nodes.iter().enumerate() {
        let mut s: Vec<usize> = sons_unchecked(a, u).iter().map(|v| index[v]).collect();
        s.sort_unstable();
        for &j in &s {
            fathers[j].push(i);
        }
        sons.push(s);
    }
    Ok(Hyperlattice {
        alpha: alpha.clone(),
        nodes,
        index,
        sons,
        fathers,
    })
}

fn fill(a: &[u32], current: &mut Vec<u32>, out: &mut Vec<Hypertuple>) {
    let i = current.len();
    if i == a.len() {
        out.push(Hypertuple(current.clone()));
        return;
    }
    let (lo, hi) = if i == 0 {
        (0, a[0])
    } else {
        let prev = current[i - 1];
        // αᵢ−uᵢ ≤ αᵢ₋₁−uᵢ₋₁ and uᵢ ≤ uᵢ₋₁, uᵢ ≤ αᵢ
        let lo = (a[i] + prev).saturating_sub(a[i - 1]);
        (lo, prev.min(a[i]))
    };
    for x in (lo..=hi).rev() {
        current.push(x);
        fill(a, current, out);
        current.pop();
    }
}

impl Hyperlattice {
    pub fn alpha(&self) -> &SegreChar {
        &self.alpha
    }

    pub fn nodes(&self) -> &[Hypertuple] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &Hypertuple {
        &self.nodes[i]
    }

    pub fn index_of(&self, u: &Hypertuple) -> Option<usize> {
        self.index.get(u).copied()
    }

    pub fn top(&self) -> usize {
        0
    }

    pub fn bottom(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn sons_of(&self, i: usize) -> &[usize] {
        &self.sons[i]
    }

    pub fn fathers_of(&self, i: usize) -> &[usize] {
        &self.fathers[i]
    }

    pub fn weight_of(&self, i: usize) -> u64 {
        weight(&self.nodes[i])
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.nodes[i].le(&self.nodes[j])
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let m = self.nodes[i].meet(&self.nodes[j]).expect("same length");
        self.index[&m]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        let m = self.nodes[i].join(&self.nodes[j]).expect("same length");
        self.index[&m]
    }

    /// The unique son of node `i`, from the cached covers.
    pub fn only_son(&self, i: usize) -> Option<usize> {
        match self.sons[i].as_slice() {
            [s] => Some(*s),
            _ => None,
        }
    }

    /// All `(father, son)` index pairs, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.sons
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&j| (i, j)))
            .collect()
    }

    /// Node indices grouped by weight, lightest level first.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let top = self.weight_of(self.top()) as usize;
        let mut levels = vec![Vec::new(); top + 1];
        for i in 0..self.len() {
            levels[self.weight_of(i) as usize].push(i);
        }
        levels
    }

    pub fn to_json_value(&self) -> LatticeJson {
        LatticeJson {
            alpha: self.alpha.parts().to_vec(),
            nodes: self.nodes.iter().map(|u| u.entries().to_vec()).collect(),
            covers: self.covers().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serialisable")
    }

    /// Decodes the JSON export and checks it is exactly `V(alpha)` as this
    /// library would produce it.
    pub fn from_json(text: &str) -> Result<Hyperlattice> {
        Self::from_json_with_bound(text, DEFAULT_NODE_BOUND)
    }

    pub fn from_json_with_bound(text: &str, bound: u128) -> Result<Hyperlattice> {
        let doc: LatticeJson = serde_json::from_str(text)
            .map_err(|e| Error::validation(None, format!("malformed lattice JSON: {e}")))?;
        let alpha = SegreChar::new(doc.alpha)?;
        let lattice = enumerate_with_bound(&alpha, bound)?;
        if doc.nodes.len() != lattice.len() {
            return Err(Error::validation(
                None,
                format!(
                    "expected {} nodes, found {}",
                    lattice.len(),
                    doc.nodes.len()
                ),
            ));
        }
        if let Some(i) = doc
            .nodes
            .iter()
            .zip(&lattice.nodes)
            .position(|(got, want)| got.as_slice() != want.entries())
        {
            return Err(Error::validation(
                Some(i),
                "node differs from enumeration order",
            ));
        }
        let covers: Vec<[usize; 2]> = lattice.covers().into_iter().map(|(i, j)| [i, j]).collect();
        if doc.covers != covers {
            return Err(Error::validation(
                None,
                "cover list does not match V(alpha)",
            ));
        }
        Ok(lattice)
    }
}

/// Wire form of a [`Hyperlattice`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub alpha: Vec<u32>,
    pub nodes: Vec<Vec<u32>>,
    pub covers: Vec<[usize; 2]>,
}
