//! Hasse diagrams as Graphviz DOT and as plain text.

use std::collections::HashMap;
use std::fmt::Write;

use crate::chains::Chain;
use crate::hyperlattice::Hyperlattice;
use crate::quotient::FactorLattice;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Directed father → son edges, one `rank=same` group per weight.
pub fn to_dot(lattice: &Hyperlattice) -> String {
    to_dot_highlighted(lattice, &[])
}

/// Like [`to_dot`], with the edges of each chain drawn in the paired colour.
pub fn to_dot_highlighted(lattice: &Hyperlattice, chains: &[(&Chain, &str)]) -> String {
    let mut colour: HashMap<(usize, usize), &str> = HashMap::new();
    for (chain, c) in chains {
        for w in chain.tuples().windows(2) {
            if let (Some(f), Some(s)) = (lattice.index_of(&w[0]), lattice.index_of(&w[1])) {
                colour.entry((f, s)).or_insert(c);
            }
        }
    }

    let mut out = String::new();
    writeln!(
        out,
        "digraph {} {{",
        quote(&format!("V({})", lattice.alpha()))
    )
    .unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for (i, u) in lattice.nodes().iter().enumerate() {
        writeln!(out, "  n{i} [label={}];", quote(&u.to_string())).unwrap();
    }
    for level in lattice.levels().iter().rev() {
        let ids: Vec<String> = level.iter().map(|i| format!("n{i};")).collect();
        writeln!(out, "  {{ rank=same; {} }}", ids.join(" ")).unwrap();
    }
    for (f, s) in lattice.covers() {
        match colour.get(&(f, s)) {
            Some(c) => writeln!(out, "  n{f} -> n{s} [color={}, penwidth=2];", quote(c)).unwrap(),
            None => writeln!(out, "  n{f} -> n{s};").unwrap(),
        }
    }
    out.push_str("}\n");
    out
}

/// One line per weight, heaviest first: `w: (u) (v) …`.
pub fn to_text(lattice: &Hyperlattice) -> String {
    let mut out = String::new();
    let levels = lattice.levels();
    for (w, level) in levels.iter().enumerate().rev() {
        let tuples: Vec<String> = level.iter().map(|&i| lattice.node(i).to_string()).collect();
        writeln!(out, "{w}: {}", tuples.join(" ")).unwrap();
    }
    out
}

/// The factor lattice, each class labelled by its representative.
pub fn factor_to_dot(lattice: &Hyperlattice, factor: &FactorLattice) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "digraph {} {{",
        quote(&format!(
            "V({})/{}",
            lattice.alpha(),
            factor.congruence().kind()
        ))
    )
    .unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for k in 0..factor.len() {
        let rep = lattice.node(factor.representative(k));
        writeln!(out, "  c{k} [label={}];", quote(&format!("[{rep}]"))).unwrap();
    }
    for &(a, b) in factor.covers() {
        writeln!(out, "  c{a} -> c{b};").unwrap();
    }
    out.push_str("}\n");
    out
}
