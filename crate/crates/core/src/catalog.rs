//! Named matroids.

use crate::bits::{bit, elements, size, Mask};
use crate::error::{Error, Result};
use crate::fans::enumerate_fans;
use crate::field::PrimeField;
use crate::glue::{glue_wheels, n12_blueprint};
use crate::matroid::{Matroid, RankFn};
use crate::repr::{graphic_matroid, Graph, ReprMatroid};
use crate::wheels::{wheel, whirl};

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub matroid: Matroid,
    /// A representation when one is part of the construction.
    pub repr: Option<ReprMatroid>,
    pub provenance: &'static str,
}

impl Entry {
    fn from_repr(name: &str, repr: ReprMatroid, provenance: &'static str) -> Result<Entry> {
        Ok(Entry { name: name.into(), matroid: repr.to_matroid()?, repr: Some(repr), provenance })
    }
}

/// Names accepted by [`get`]; `wheel{r}` and `whirl{r}` take any `r` in `2..=12`.
pub const NAMES: &[&str] = &[
    "U24", "U25", "U35", "U26", "U36", "U46", "P6", "F7", "F7dual", "K4", "K33", "K33dual", "N12", "wheel3", "whirl3",
];

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

pub fn fano() -> ReprMatroid {
    let cols = (1..=7u8).map(|k| vec![k & 1, (k >> 1) & 1, (k >> 2) & 1]).collect();
    ReprMatroid::new(PrimeField::GF2, 3, labels(7), cols).expect("fano")
}

/// Rank 3 over GF(5) with exactly one three-point line `{1, 2, 4}`.
pub fn p6() -> ReprMatroid {
    let cols = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0], vec![1, 2, 1], vec![1, 3, 3]];
    ReprMatroid::new(PrimeField::new(5).expect("GF(5)"), 3, labels(6), cols).expect("P6")
}

pub fn k4() -> ReprMatroid {
    let mut edges = Vec::new();
    for u in 0..4 {
        for v in u + 1..4 {
            edges.push((u, v, format!("{u}{v}")));
        }
    }
    graphic_matroid(&Graph::new(4, edges).expect("K4")).expect("K4")
}

pub fn k33() -> ReprMatroid {
    let mut edges = Vec::new();
    for u in 0..3 {
        for v in 3..6 {
            edges.push((u, v, format!("{}{}", u + 1, v - 2)));
        }
    }
    graphic_matroid(&Graph::new(6, edges).expect("K33")).expect("K33")
}

fn uniform(r: usize, n: usize) -> Result<Entry> {
    let m = Matroid::uniform(r, n)?.with_labels(labels(n))?;
    Ok(Entry { name: format!("U{r}{n}"), matroid: m, repr: None, provenance: "uniform" })
}

fn indexed(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

pub fn get(name: &str) -> Result<Entry> {
    match name {
        "U24" => uniform(2, 4),
        "U25" => uniform(2, 5),
        "U35" => uniform(3, 5),
        "U26" => uniform(2, 6),
        "U36" => uniform(3, 6),
        "U46" => uniform(4, 6),
        "P6" => Entry::from_repr(name, p6(), "GF(5) matrix; not ternary, so excluded from binary runs"),
        "F7" => Entry::from_repr(name, fano(), "points of PG(2,2)"),
        "F7dual" => Entry::from_repr(name, fano().dual(), "dual of F7"),
        "K4" => Entry::from_repr(name, k4(), "graphic"),
        "K33" => Entry::from_repr(name, k33(), "graphic"),
        "K33dual" => Entry::from_repr(name, k33().dual(), "dual of K33"),
        "N12" => Entry::from_repr(name, glue_wheels(&n12_blueprint())?.repr, "three copies of M(K4) glued to F7"),
        _ => {
            if let Some(r) = indexed(name, "wheel").filter(|r| (2..=12).contains(r)) {
                Entry::from_repr(name, wheel(r)?, "graphic wheel")
            } else if let Some(r) = indexed(name, "whirl").filter(|r| (2..=12).contains(r)) {
                Ok(Entry { name: name.into(), matroid: whirl(r)?, repr: None, provenance: "wheel with its rim relaxed" })
            } else {
                Err(Error::input(format!("unknown catalog matroid {name:?}")))
            }
        }
    }
}

/// Three pairwise disjoint maximal fans of length four, first in the order
/// of [`enumerate_fans`]; for `N12` these are the fans of the three wheels.
pub fn disjoint_four_fans(m: &Matroid) -> Option<Vec<Vec<String>>> {
    let fans: Vec<_> = enumerate_fans(m, 4).into_iter().filter(|f| f.maximal && f.fan.len() == 4).map(|f| f.fan).collect();
    for i in 0..fans.len() {
        for j in i + 1..fans.len() {
            for k in j + 1..fans.len() {
                let (a, b, c) = (fans[i].set(), fans[j].set(), fans[k].set());
                if size(a | b | c) == 12 {
                    return Some([i, j, k].iter().map(|&x| fans[x].labels(m)).collect());
                }
            }
        }
    }
    None
}

fn is_circuit(m: &Matroid, x: Mask) -> bool {
    m.rank(x) + 1 == size(x) && elements(x).all(|e| m.rank(x & !bit(e)) == size(x) - 1)
}

/// The three 4-fans of `N12`. Each 4-fan `(e1, e2, e3, e4)` is also a fan
/// with `e2` and `e3` swapped; the two orders give different fan families.
/// The order used has `{e3, e4} ∪ {e3', e4'}` a circuit for every two fans,
/// so the tail pairs span lines through one common point.
pub fn n12_fans() -> Result<Vec<Vec<String>>> {
    let m = get("N12")?.matroid;
    let base = disjoint_four_fans(&m).ok_or_else(|| Error::structural("N12 lacks three disjoint 4-fans"))?;
    for swaps in 0..8usize {
        let fans: Vec<Vec<String>> = base
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut f = f.clone();
                if swaps >> i & 1 == 1 {
                    f.swap(1, 2);
                }
                f
            })
            .collect();
        let tails: Vec<Mask> = fans.iter().map(|f| m.mask_of(&f[2..])).collect::<Result<_>>()?;
        if (0..3).all(|i| (i + 1..3).all(|j| is_circuit(&m, tails[i] | tails[j]))) {
            return Ok(fans);
        }
    }
    Err(Error::structural("no ordering of the N12 fans has concurrent tails"))
}
