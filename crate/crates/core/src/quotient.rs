//! The congruences `∼₂` and `∼₃` and their factor lattices.
//!
//! `u ∼₂ v` when the entries from position 2 on agree, and `u ∼₃ v` when
//! they agree from position 3 on. The factor lattice is isomorphic to the
//! hyperlattice of the truncated characteristic.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperlattice::{self, Hyperlattice, Hypertuple};
use crate::segre::SegreChar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CongruenceKind {
    #[serde(rename = "SIM2")]
    Sim2,
    #[serde(rename = "SIM3")]
    Sim3,
}

impl CongruenceKind {
    /// Number of leading entries ignored by the relation.
    pub fn offset(self) -> usize {
        match self {
            CongruenceKind::Sim2 => 1,
            CongruenceKind::Sim3 => 2,
        }
    }

    /// The congruence that applies to `α`, if any.
    pub fn for_alpha(alpha: &SegreChar) -> Option<CongruenceKind> {
        [CongruenceKind::Sim2, CongruenceKind::Sim3]
            .into_iter()
            .find(|&k| Congruence::new(k, alpha.clone()).is_ok())
    }
}

impl fmt::Display for CongruenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CongruenceKind::Sim2 => "SIM2",
            CongruenceKind::Sim3 => "SIM3",
        })
    }
}

impl std::str::FromStr for CongruenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sim2" | "2" => Ok(CongruenceKind::Sim2),
            "sim3" | "3" => Ok(CongruenceKind::Sim3),
            other => Err(Error::validation(
                None,
                format!("unknown congruence {other:?}"),
            )),
        }
    }
}

/// A congruence together with the characteristic it acts on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Congruence {
    kind: CongruenceKind,
    alpha: SegreChar,
}

impl Congruence {
    /// `∼₂` needs `r ≥ 2` and `α₁−α₂ > 1`; `∼₃` needs `r ≥ 3` and `α₁−α₂ = 1`.
    pub fn new(kind: CongruenceKind, alpha: SegreChar) -> Result<Self> {
        let r = alpha.len();
        let gap = alpha.part(1) - alpha.part(2);
        let ok = match kind {
            CongruenceKind::Sim2 => r >= 2 && gap > 1,
            CongruenceKind::Sim3 => r >= 3 && gap == 1,
        };
        if !ok {
            let need = match kind {
                CongruenceKind::Sim2 => "r >= 2 and α1 - α2 > 1",
                CongruenceKind::Sim3 => "r >= 3 and α1 - α2 = 1",
            };
            return Err(Error::Precondition(format!(
                "{kind} on ({alpha}) needs {need}"
            )));
        }
        Ok(Congruence { kind, alpha })
    }

    pub fn kind(&self) -> CongruenceKind {
        self.kind
    }

    pub fn alpha(&self) -> &SegreChar {
        &self.alpha
    }

    /// The characteristic of the quotient: `(α₂,…,α_r)` or `(α₃,…,α_r)`.
    pub fn tail_alpha(&self) -> SegreChar {
        self.alpha
            .tail(self.kind.offset())
            .expect("precondition guarantees a non-empty tail")
    }

    /// `α₁−α₂+1` for `∼₂` and `2(α₁−α₃)` for `∼₃`.
    pub fn class_size_formula(&self) -> u128 {
        let a = &self.alpha;
        match self.kind {
            CongruenceKind::Sim2 => u128::from(a.part(1) - a.part(2)) + 1,
            CongruenceKind::Sim3 => 2 * u128::from(a.part(1) - a.part(3)),
        }
    }

    /// `(α₂−α₃+1)…(α_r+1)` for `∼₂` and `(α₃−α₄+1)…(α_r+1)` for `∼₃`.
    pub fn class_count_formula(&self) -> u128 {
        hyperlattice::cardinality(&self.tail_alpha())
    }

    fn key<'a>(&self, u: &'a Hypertuple) -> &'a [u32] {
        &u.entries()[self.kind.offset()..]
    }
}

/// Whether `u` and `v` lie in the same class.
pub fn congruent(c: &Congruence, u: &Hypertuple, v: &Hypertuple) -> Result<bool> {
    for w in [u, v] {
        if !hyperlattice::contains(&c.alpha, w.entries())? {
            return Err(Error::NotMember {
                tuple: w.to_string(),
                alpha: c.alpha.to_string(),
            });
        }
    }
    Ok(c.key(u) == c.key(v))
}

/// The quotient `V(α)/∼`. Classes hold node indices of the source lattice,
/// in enumeration order.
#[derive(Debug, Clone)]
pub struct FactorLattice {
    congruence: Congruence,
    classes: Vec<Vec<usize>>,
    representatives: Vec<usize>,
    class_of: Vec<usize>,
    covers: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorLatticeJson {
    pub alpha: SegreChar,
    pub congruence: CongruenceKind,
    pub classes: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
    pub covers: Vec<[usize; 2]>,
}

/// Partitions `V(α)` into classes and derives the class cover relation.
pub fn factor(lattice: &Hyperlattice, c: &Congruence) -> Result<FactorLattice> {
    if lattice.alpha() != c.alpha() {
        return Err(Error::Precondition(format!(
            "congruence is on ({}) but the lattice is V({})",
            c.alpha(),
            lattice.alpha()
        )));
    }

    let mut by_key: HashMap<&[u32], usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; lattice.len()];
    for (i, u) in lattice.nodes().iter().enumerate() {
        let id = *by_key.entry(c.key(u)).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[id].push(i);
        class_of[i] = id;
    }

    let mut representatives = Vec::with_capacity(classes.len());
    for class in &classes {
        // nodes are in descending order, so a chain has its minimum last
        let rep = *class.last().expect("classes are non-empty");
        if class.windows(2).any(|w| !lattice.leq(w[1], w[0])) {
            return Err(Error::Internal(format!(
                "class of {} is not a chain",
                lattice.node(rep)
            )));
        }
        representatives.push(rep);
    }

    // Every class cover is the image of a node cover; among those images,
    // (A, B) is a cover unless another image of A lies above B.
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    for (f, s) in lattice.covers() {
        let (a, b) = (class_of[f], class_of[s]);
        if a != b && !below[a].contains(&b) {
            below[a].push(b);
        }
    }
    let mut covers = Vec::new();
    for (a, succ) in below.iter().enumerate() {
        for &b in succ {
            let rb = representatives[b];
            let shadowed = succ
                .iter()
                .any(|&x| x != b && lattice.leq(rb, representatives[x]));
            if !shadowed {
                covers.push((a, b));
            }
        }
    }
    covers.sort_unstable();

    Ok(FactorLattice {
        congruence: c.clone(),
        classes,
        representatives,
        class_of,
        covers,
    })
}

impl FactorLattice {
    pub fn congruence(&self) -> &Congruence {
        &self.congruence
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the entrywise-minimal node of class `k`.
    pub fn representative(&self, k: usize) -> usize {
        self.representatives[k]
    }

    pub fn class_of(&self, node: usize) -> usize {
        self.class_of[node]
    }

    /// `(upper, lower)` class pairs, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn meet(&self, lattice: &Hyperlattice, a: usize, b: usize) -> usize {
        self.class_of[lattice.meet(self.representatives[a], self.representatives[b])]
    }

    pub fn join(&self, lattice: &Hyperlattice, a: usize, b: usize) -> usize {
        self.class_of[lattice.join(self.representatives[a], self.representatives[b])]
    }

    /// Classes whose enumerated size differs from the closed form, as
    /// `(class, enumerated size)`.
    pub fn size_discrepancies(&self) -> Vec<(usize, usize)> {
        let expected = self.congruence.class_size_formula();
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() as u128 != expected)
            .map(|(k, c)| (k, c.len()))
            .collect()
    }

    pub fn to_json_value(&self) -> FactorLatticeJson {
        FactorLatticeJson {
            alpha: self.congruence.alpha.clone(),
            congruence: self.congruence.kind,
            classes: self.classes.clone(),
            representatives: self.representatives.clone(),
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serialisable")
    }
}

/// A verified isomorphism from a factor lattice onto `V(tail)`.
#[derive(Debug, Clone)]
pub struct QuotientIso {
    pub factor: FactorLattice,
    pub target: Hyperlattice,
    /// `map[k]` is the target node of class `k`.
    pub map: Vec<usize>,
}

impl QuotientIso {
    /// `(representative, image)` tuple pairs, one per class.
    pub fn pairs<'a>(
        &'a self,
        source: &'a Hyperlattice,
    ) -> impl Iterator<Item = (&'a Hypertuple, &'a Hypertuple)> {
        self.map.iter().enumerate().map(move |(k, &t)| {
            (
                source.node(self.factor.representative(k)),
                self.target.node(t),
            )
        })
    }
}

/// Sends each class to the truncated tuple of its members and checks that
/// this is a bijection preserving covers, meets and joins.
pub fn quotient_iso(lattice: &Hyperlattice, c: &Congruence) -> Result<QuotientIso> {
    let factor = factor(lattice, c)?;
    let target = hyperlattice::enumerate(&c.tail_alpha())?;
    let fail = |what: String| {
        Error::Internal(format!(
            "quotient map of ({}) by {}: {what}",
            c.alpha(),
            c.kind()
        ))
    };

    let mut map = Vec::with_capacity(factor.len());
    let mut hit = vec![false; target.len()];
    for k in 0..factor.len() {
        let rep = lattice.node(factor.representative(k));
        let image = Hypertuple::new(c.key(rep).to_vec());
        let t = target
            .index_of(&image)
            .ok_or_else(|| fail(format!("{image} is not in V({})", target.alpha())))?;
        if std::mem::replace(&mut hit[t], true) {
            return Err(fail(format!("{image} is hit twice")));
        }
        map.push(t);
    }
    if map.len() != target.len() {
        return Err(fail(format!(
            "{} classes but {} target nodes",
            map.len(),
            target.len()
        )));
    }

    let mut mapped: Vec<(usize, usize)> = factor
        .covers()
        .iter()
        .map(|&(a, b)| (map[a], map[b]))
        .collect();
    mapped.sort_unstable();
    if mapped != target.covers() {
        return Err(fail("covers are not preserved".into()));
    }

    for a in 0..factor.len() {
        for b in a..factor.len() {
            if map[factor.meet(lattice, a, b)] != target.meet(map[a], map[b])
                || map[factor.join(lattice, a, b)] != target.join(map[a], map[b])
            {
                return Err(fail(format!(
                    "meet or join of classes {a} and {b} is not preserved"
                )));
            }
        }
    }

    Ok(QuotientIso {
        factor,
        target,
        map,
    })
}
