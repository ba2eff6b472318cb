//! Deciding whether two hyperlattices are isomorphic.
//!
//! [`decide_iso`] applies the classification: `V(α) ≅ V(β)` exactly when
//! `α = β`, when `{α, β} = {(5,2), (4,2,1)}`, or when
//! `{α, β} = {(l, l−1), (2l−1)}` for some `l ≥ 2`. [`brute_force_iso`] is an
//! independent search that knows nothing about tuples, and
//! [`verify_range`] compares the two over every pair up to a dimension.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::chains;
use crate::error::{Error, Result};
use crate::hyperlattice::{self, Hyperlattice, Hypertuple};
use crate::quotient::{self, Congruence, CongruenceKind};
use crate::segre::{self, SegreChar};

/// Largest lattice the search accepts.
pub const DEFAULT_ORACLE_BOUND: usize = 20_000;
/// Up to this many nodes the meet/join check covers every pair.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 2_000;
const SAMPLED_PAIRS: usize = 200_000;
const SAMPLE_SEED: u64 = 0x5e67e;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsoRule {
    Equal,
    Pair52_421,
    PairChain { l: u32 },
    NotIsomorphic,
}

impl fmt::Display for IsoRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoRule::Equal => f.write_str("EQUAL"),
            IsoRule::Pair52_421 => f.write_str("PAIR_52_421"),
            IsoRule::PairChain { l } => write!(f, "PAIR_CHAIN(l={l})"),
            IsoRule::NotIsomorphic => f.write_str("NOT_ISOMORPHIC"),
        }
    }
}

impl Serialize for IsoRule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An isomorphism `V(α) → V(β)` as tuple pairs, in the node order of `V(α)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub alpha: SegreChar,
    pub beta: SegreChar,
    pub map: Vec<(Hypertuple, Hypertuple)>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (u, v) in &self.map {
            writeln!(f, "{u} -> {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    pub rule: IsoRule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NecessaryConditions {
    pub dim_ok: bool,
    pub card_ok: bool,
}

/// Equal dimension and equal cardinality, both implied by isomorphism.
pub fn necessary_conditions(alpha: &SegreChar, beta: &SegreChar) -> NecessaryConditions {
    NecessaryConditions {
        dim_ok: segre::dimension(alpha) == segre::dimension(beta),
        card_ok: hyperlattice::cardinality(alpha) == hyperlattice::cardinality(beta),
    }
}

fn chain_pair_l(two: &SegreChar, one: &SegreChar) -> Option<u32> {
    match (two.parts(), one.parts()) {
        (&[l, m], &[n]) if l >= 2 && m + 1 == l && n == 2 * l - 1 => Some(l),
        _ => None,
    }
}

/// The classification rule for `(α, β)`. No witness is attached.
pub fn decide_iso(alpha: &SegreChar, beta: &SegreChar) -> IsoVerdict {
    let rule = if alpha == beta {
        IsoRule::Equal
    } else if matches!(
        (alpha.parts(), beta.parts()),
        ([5, 2], [4, 2, 1]) | ([4, 2, 1], [5, 2])
    ) {
        IsoRule::Pair52_421
    } else if let Some(l) = chain_pair_l(alpha, beta).or_else(|| chain_pair_l(beta, alpha)) {
        IsoRule::PairChain { l }
    } else {
        IsoRule::NotIsomorphic
    };
    IsoVerdict {
        isomorphic: rule != IsoRule::NotIsomorphic,
        rule,
        witness: None,
    }
}

/// Rank of each node: length of the longest descending path to the bottom.
fn ranks(l: &Hyperlattice) -> Vec<u32> {
    // sons always follow their fathers in node order
    let mut rank = vec![0u32; l.len()];
    for i in (0..l.len()).rev() {
        rank[i] = l.sons_of(i).iter().map(|&s| rank[s] + 1).max().unwrap_or(0);
    }
    rank
}

fn check_bound(l: &Hyperlattice, bound: usize) -> Result<()> {
    if l.len() > bound {
        return Err(Error::Resource {
            what: format!("isomorphism search on V({})", l.alpha()),
            required: l.len() as u128,
            bound: bound as u128,
        });
    }
    Ok(())
}

/// Colour refinement on both cover graphs with a shared palette.
/// `None` when the colour histograms already differ.
fn refine(a: &Hyperlattice, b: &Hyperlattice) -> Option<(Vec<u32>, Vec<u32>)> {
    let initial = |l: &Hyperlattice, rank: &[u32]| -> Vec<(u32, usize, usize)> {
        (0..l.len())
            .map(|i| (rank[i], l.fathers_of(i).len(), l.sons_of(i).len()))
            .collect()
    };
    let (ra, rb) = (ranks(a), ranks(b));
    let (ia, ib) = (initial(a, &ra), initial(b, &rb));
    let mut palette: HashMap<(u32, usize, usize), u32> = HashMap::new();
    let mut paint = |k: (u32, usize, usize)| {
        let n = palette.len() as u32;
        *palette.entry(k).or_insert(n)
    };
    let mut ca: Vec<u32> = ia.into_iter().map(&mut paint).collect();
    let mut cb: Vec<u32> = ib.into_iter().map(&mut paint).collect();
    let mut distinct = palette.len();

    loop {
        if histogram(&ca) != histogram(&cb) {
            return None;
        }
        let mut palette: HashMap<(u32, Vec<u32>, Vec<u32>), u32> = HashMap::new();
        let mut step = |l: &Hyperlattice, c: &[u32]| -> Vec<u32> {
            (0..l.len())
                .map(|i| {
                    let mut s: Vec<u32> = l.sons_of(i).iter().map(|&j| c[j]).collect();
                    let mut f: Vec<u32> = l.fathers_of(i).iter().map(|&j| c[j]).collect();
                    s.sort_unstable();
                    f.sort_unstable();
                    let n = palette.len() as u32;
                    *palette.entry((c[i], s, f)).or_insert(n)
                })
                .collect()
        };
        let na = step(a, &ca);
        let nb = step(b, &cb);
        let now = palette.len();
        ca = na;
        cb = nb;
        if now == distinct {
            break;
        }
        distinct = now;
    }
    (histogram(&ca) == histogram(&cb)).then_some((ca, cb))
}

fn histogram(c: &[u32]) -> Vec<(u32, usize)> {
    let mut h: HashMap<u32, usize> = HashMap::new();
    for &x in c {
        *h.entry(x).or_default() += 1;
    }
    let mut v: Vec<_> = h.into_iter().collect();
    v.sort_unstable();
    v
}

/// Backtracking over colour-respecting assignments. Calls `found` on each
/// complete map; the search stops when it returns `false`.
fn search(a: &Hyperlattice, b: &Hyperlattice, mut found: impl FnMut(&[usize]) -> bool) {
    let n = a.len();
    if n != b.len() || a.covers().len() != b.covers().len() {
        return;
    }
    let Some((ca, cb)) = refine(a, b) else {
        return;
    };
    let rank = ranks(a);
    let mut pool: HashMap<u32, Vec<usize>> = HashMap::new();
    for (j, &c) in cb.iter().enumerate() {
        pool.entry(c).or_default().push(j);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (rank[i], pool[&ca[i]].len(), ca[i], i));

    const FREE: usize = usize::MAX;
    let mut map = vec![FREE; n];
    let mut inv = vec![FREE; n];
    let mut cursor = vec![0usize; n];
    let mut depth = 0usize;

    let fits = |x: usize, y: usize, map: &[usize], inv: &[usize]| -> bool {
        a.sons_of(x)
            .iter()
            .all(|&s| map[s] == FREE || b.sons_of(y).contains(&map[s]))
            && a.fathers_of(x)
                .iter()
                .all(|&f| map[f] == FREE || b.fathers_of(y).contains(&map[f]))
            && b.sons_of(y)
                .iter()
                .all(|&t| inv[t] == FREE || a.sons_of(x).contains(&inv[t]))
            && b.fathers_of(y)
                .iter()
                .all(|&t| inv[t] == FREE || a.fathers_of(x).contains(&inv[t]))
    };

    loop {
        if depth == n {
            if !found(&map) {
                return;
            }
            depth -= 1;
            let x = order[depth];
            inv[map[x]] = FREE;
            map[x] = FREE;
            continue;
        }
        let x = order[depth];
        let candidates = &pool[&ca[x]];
        let mut placed = false;
        while cursor[depth] < candidates.len() {
            let y = candidates[cursor[depth]];
            cursor[depth] += 1;
            if inv[y] == FREE && fits(x, y, &map, &inv) {
                map[x] = y;
                inv[y] = x;
                placed = true;
                break;
            }
        }
        if placed {
            depth += 1;
            if depth < n {
                cursor[depth] = 0;
            }
        } else {
            if depth == 0 {
                return;
            }
            depth -= 1;
            let x = order[depth];
            inv[map[x]] = FREE;
            map[x] = FREE;
        }
    }
}

/// An order isomorphism `a → b` as node indices, if one exists.
pub fn brute_force_iso(a: &Hyperlattice, b: &Hyperlattice) -> Result<Option<Vec<usize>>> {
    brute_force_iso_with_bound(a, b, DEFAULT_ORACLE_BOUND)
}

pub fn brute_force_iso_with_bound(
    a: &Hyperlattice,
    b: &Hyperlattice,
    bound: usize,
) -> Result<Option<Vec<usize>>> {
    check_bound(a, bound)?;
    check_bound(b, bound)?;
    let mut out = None;
    search(a, b, |m| {
        out = Some(m.to_vec());
        false
    });
    if let Some(m) = &out {
        if !preserves_meet_join(a, b, m) {
            return Err(Error::Internal(format!(
                "order isomorphism V({}) -> V({}) does not preserve meet and join",
                a.alpha(),
                b.alpha()
            )));
        }
    }
    Ok(out)
}

/// Every order isomorphism `a → b`, in search order.
pub fn all_isomorphisms(
    a: &Hyperlattice,
    b: &Hyperlattice,
    bound: usize,
) -> Result<Vec<Vec<usize>>> {
    check_bound(a, bound)?;
    check_bound(b, bound)?;
    let mut out = Vec::new();
    search(a, b, |m| {
        out.push(m.to_vec());
        true
    });
    Ok(out)
}

pub fn automorphisms(l: &Hyperlattice) -> Result<Vec<Vec<usize>>> {
    all_isomorphisms(l, l, DEFAULT_ORACLE_BOUND)
}

/// Whether `map` sends meets to meets and joins to joins. Every pair is
/// checked up to [`EXHAUSTIVE_CHECK_LIMIT`] nodes; above that a fixed-seed
/// sample is used.
pub fn preserves_meet_join(a: &Hyperlattice, b: &Hyperlattice, map: &[usize]) -> bool {
    let ok = |i: usize, j: usize| {
        map[a.meet(i, j)] == b.meet(map[i], map[j]) && map[a.join(i, j)] == b.join(map[i], map[j])
    };
    let n = a.len();
    if n <= EXHAUSTIVE_CHECK_LIMIT {
        (0..n).all(|i| (i..n).all(|j| ok(i, j)))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        (0..SAMPLED_PAIRS).all(|_| ok(rng.gen_range(0..n), rng.gen_range(0..n)))
    }
}

/// Structural facts about an isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub bijective: bool,
    pub weight_preserved: bool,
    pub sons_preserved: bool,
    pub ends_preserved: bool,
    pub special_chains_preserved: bool,
}

impl WitnessCheck {
    pub fn all(&self) -> bool {
        self.bijective
            && self.weight_preserved
            && self.sons_preserved
            && self.ends_preserved
            && self.special_chains_preserved
    }
}

/// Checks a node map for bijectivity, weight, the son relation, zero and
/// top, and that special chains go to special chains of the same length.
pub fn check_witness(a: &Hyperlattice, b: &Hyperlattice, map: &[usize]) -> Result<WitnessCheck> {
    let n = a.len();
    let mut seen = vec![false; b.len()];
    let bijective = n == b.len()
        && map.len() == n
        && map
            .iter()
            .all(|&y| y < b.len() && !std::mem::replace(&mut seen[y], true));
    if !bijective {
        return Ok(WitnessCheck {
            bijective,
            weight_preserved: false,
            sons_preserved: false,
            ends_preserved: false,
            special_chains_preserved: false,
        });
    }
    let weight_preserved = (0..n).all(|i| a.weight_of(i) == b.weight_of(map[i]));
    let sons_preserved = (0..n).all(|i| {
        let mut img: Vec<usize> = a.sons_of(i).iter().map(|&s| map[s]).collect();
        let mut there = b.sons_of(map[i]).to_vec();
        img.sort_unstable();
        there.sort_unstable();
        img == there
    });
    let ends_preserved = map[a.bottom()] == b.bottom() && map[a.top()] == b.top();

    let as_sets = |l: &Hyperlattice, cs: &[chains::SpecialChain]| -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = cs
            .iter()
            .map(|c| {
                let mut s: Vec<usize> = c
                    .chain
                    .tuples()
                    .iter()
                    .filter_map(|u| l.index_of(u))
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        v.sort();
        v
    };
    let ca = as_sets(a, &chains::special_chains(a)?);
    let cb = as_sets(b, &chains::special_chains(b)?);
    let mut images: Vec<Vec<usize>> = ca
        .iter()
        .map(|c| {
            let mut s: Vec<usize> = c.iter().map(|&i| map[i]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    images.sort();
    let special_chains_preserved = images == cb;

    Ok(WitnessCheck {
        bijective,
        weight_preserved,
        sons_preserved,
        ends_preserved,
        special_chains_preserved,
    })
}

fn to_witness(a: &Hyperlattice, b: &Hyperlattice, map: &[usize]) -> Witness {
    Witness {
        alpha: a.alpha().clone(),
        beta: b.alpha().clone(),
        map: map
            .iter()
            .enumerate()
            .map(|(i, &j)| (a.node(i).clone(), b.node(j).clone()))
            .collect(),
    }
}

/// A verified isomorphism when the classification says one exists.
pub fn build_witness(alpha: &SegreChar, beta: &SegreChar) -> Result<Option<Witness>> {
    build_witness_with_bound(alpha, beta, DEFAULT_ORACLE_BOUND)
}

pub fn build_witness_with_bound(
    alpha: &SegreChar,
    beta: &SegreChar,
    bound: usize,
) -> Result<Option<Witness>> {
    let verdict = decide_iso(alpha, beta);
    if !verdict.isomorphic {
        return Ok(None);
    }
    let a = hyperlattice::enumerate_with_bound(alpha, bound as u128)?;
    if verdict.rule == IsoRule::Equal {
        let id: Vec<usize> = (0..a.len()).collect();
        return Ok(Some(to_witness(&a, &a, &id)));
    }
    let b = hyperlattice::enumerate_with_bound(beta, bound as u128)?;
    match brute_force_iso_with_bound(&a, &b, bound)? {
        Some(map) => {
            if !check_witness(&a, &b, &map)?.all() {
                return Err(Error::Internal(format!(
                    "witness V({alpha}) -> V({beta}) fails its checks"
                )));
            }
            Ok(Some(to_witness(&a, &b, &map)))
        }
        None => Err(Error::Internal(format!(
            "V({alpha}) and V({beta}) are classified isomorphic but the search found no map"
        ))),
    }
}

/// One compared pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairRecord {
    pub alpha: SegreChar,
    pub beta: SegreChar,
    pub theorem_verdict: IsoRule,
    /// `"isomorphic"`, `"not_isomorphic"` or `"skipped"`.
    pub oracle_verdict: &'static str,
    /// `None` when the pair was skipped.
    pub agree: Option<bool>,
    pub witness_found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_check: Option<WitnessCheck>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSizeNote {
    pub alpha: SegreChar,
    pub congruence: CongruenceKind,
    pub expected_size: u128,
    pub observed_sizes: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AutomorphismCount {
    pub alpha: SegreChar,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n_max: u32,
    pub records: Vec<PairRecord>,
    pub class_size_discrepancies: Vec<ClassSizeNote>,
    pub automorphism_counts: Vec<AutomorphismCount>,
}

impl VerificationReport {
    pub fn disagreements(&self) -> Vec<&PairRecord> {
        self.records
            .iter()
            .filter(|r| r.agree == Some(false))
            .collect()
    }

    pub fn skipped(&self) -> Vec<&PairRecord> {
        self.records.iter().filter(|r| r.agree.is_none()).collect()
    }

    /// Isomorphic pairs with `α ≠ β`, as found by the search.
    pub fn nontrivial_isomorphic_pairs(&self) -> Vec<(&SegreChar, &SegreChar)> {
        self.records
            .iter()
            .filter(|r| r.alpha != r.beta && r.oracle_verdict == "isomorphic")
            .map(|r| (&r.alpha, &r.beta))
            .collect()
    }

    pub fn is_clean(&self) -> bool {
        self.disagreements().is_empty()
            && self.skipped().is_empty()
            && self
                .records
                .iter()
                .all(|r| r.witness_check.is_none_or(|c| c.all()))
    }

    pub fn summary_table(&self) -> String {
        let mut out = format!(
            "{:<14} {:<14} {:<16} {:<15} {:<6} {:>10}\n",
            "alpha", "beta", "theorem", "oracle", "agree", "ms"
        );
        for r in &self.records {
            let agree = match r.agree {
                Some(true) => "yes",
                Some(false) => "NO",
                None => "-",
            };
            out.push_str(&format!(
                "{:<14} {:<14} {:<16} {:<15} {:<6} {:>10.3}\n",
                format!("({})", r.alpha),
                format!("({})", r.beta),
                r.theorem_verdict.to_string(),
                r.oracle_verdict,
                agree,
                r.elapsed_ms
            ));
        }
        out.push_str(&format!(
            "pairs: {}  disagreements: {}  skipped: {}  nontrivial isomorphic: {}\n",
            self.records.len(),
            self.disagreements().len(),
            self.skipped().len(),
            self.nontrivial_isomorphic_pairs().len()
        ));
        for p in &self.class_size_discrepancies {
            out.push_str(&format!(
                "class sizes of ({}) under {}: expected {}, observed {:?}\n",
                p.alpha, p.congruence, p.expected_size, p.observed_sizes
            ));
        }
        out
    }
}

fn compare(alpha: &SegreChar, beta: &SegreChar) -> PairRecord {
    let start = Instant::now();
    let verdict = decide_iso(alpha, beta);
    let outcome = (|| -> Result<Option<WitnessCheck>> {
        let a = hyperlattice::enumerate_with_bound(alpha, DEFAULT_ORACLE_BOUND as u128)?;
        let b = hyperlattice::enumerate_with_bound(beta, DEFAULT_ORACLE_BOUND as u128)?;
        match brute_force_iso(&a, &b)? {
            Some(map) => Ok(Some(check_witness(&a, &b, &map)?)),
            None => Ok(None),
        }
    })();
    let (oracle_verdict, agree, witness_check) = match outcome {
        Ok(Some(check)) => ("isomorphic", Some(verdict.isomorphic), Some(check)),
        Ok(None) => ("not_isomorphic", Some(!verdict.isomorphic), None),
        Err(_) => ("skipped", None, None),
    };
    PairRecord {
        alpha: alpha.clone(),
        beta: beta.clone(),
        theorem_verdict: verdict.rule,
        oracle_verdict,
        agree,
        witness_found: witness_check.is_some(),
        witness_check,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Compares classification and search on every unordered pair `{α, β}`
/// (including `α = β`) of reduced characteristics with equal dimension at
/// most `n_max`. Also logs class-size discrepancies of the congruences and
/// automorphism counts over the same range.
pub fn verify_range(n_max: u32) -> Result<VerificationReport> {
    if n_max == 0 {
        return Err(Error::validation(None, "n_max must be positive"));
    }
    let all = segre::enumerate_reduced(n_max);
    let mut pairs = Vec::new();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i..] {
            if segre::dimension(a) == segre::dimension(b) {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    // par_iter over a Vec keeps input order in collect
    let records: Vec<PairRecord> = pairs.par_iter().map(|(a, b)| compare(a, b)).collect();

    let per_alpha: Vec<Result<(Option<ClassSizeNote>, AutomorphismCount)>> = all
        .par_iter()
        .map(|alpha| {
            let l = hyperlattice::enumerate_with_bound(alpha, DEFAULT_ORACLE_BOUND as u128)?;
            let note = match CongruenceKind::for_alpha(alpha) {
                Some(kind) => {
                    let c = Congruence::new(kind, alpha.clone())?;
                    let f = quotient::factor(&l, &c)?;
                    (!f.size_discrepancies().is_empty()).then(|| ClassSizeNote {
                        alpha: alpha.clone(),
                        congruence: kind,
                        expected_size: c.class_size_formula(),
                        observed_sizes: f.classes().iter().map(Vec::len).collect(),
                    })
                }
                None => None,
            };
            let count = automorphisms(&l)?.len();
            Ok((
                note,
                AutomorphismCount {
                    alpha: alpha.clone(),
                    count,
                },
            ))
        })
        .collect();
    let mut class_size_discrepancies = Vec::new();
    let mut automorphism_counts = Vec::new();
    for r in per_alpha {
        let (note, count) = r?;
        class_size_discrepancies.extend(note);
        automorphism_counts.push(count);
    }

    Ok(VerificationReport {
        n_max,
        records,
        class_size_discrepancies,
        automorphism_counts,
    })
}
