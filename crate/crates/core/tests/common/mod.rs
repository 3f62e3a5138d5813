//! Forward oracle for fan-extensions: apply fan-lengthening moves to every
//! fan of every covering family, starting from `N` with its own labels.
//! Fans and covering families are found by brute force here, independently
//! of the library's fan and recognizer code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use fanforge_core::bits::{bit, Mask};
use fanforge_core::iso::{invariants, is_isomorphic};
use fanforge_core::repr::ReprMatroid;
use fanforge_core::{Matroid, RankFn, Structure};

pub fn triangle(m: &Matroid, t: [usize; 3]) -> bool {
    let s = bit(t[0]) | bit(t[1]) | bit(t[2]);
    m.rank(s) == 2 && [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| m.rank(bit(t[i]) | bit(t[j])) == 2)
}

pub fn triad(m: &Matroid, t: [usize; 3]) -> bool {
    let g = m.ground();
    let r = m.full_rank();
    let s = bit(t[0]) | bit(t[1]) | bit(t[2]);
    m.rank(g & !s) == r - 1 && [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| m.rank(g & !(bit(t[i]) | bit(t[j]))) == r)
}

/// Whether `seq` is a fan; `Some(true)` when its first window is a triangle.
pub fn fan_kind(m: &Matroid, seq: &[usize]) -> Option<bool> {
    if seq.len() < 3 {
        return None;
    }
    'start: for first in [true, false] {
        for (k, w) in seq.windows(3).enumerate() {
            let want_triangle = (k % 2 == 0) == first;
            let ok = if want_triangle { triangle(m, [w[0], w[1], w[2]]) } else { triad(m, [w[0], w[1], w[2]]) };
            if !ok {
                continue 'start;
            }
        }
        return Some(first);
    }
    None
}

/// Every fan (as an ordered sequence, both orientations) of length at least 3.
pub fn brute_fans(m: &Matroid) -> Vec<Vec<usize>> {
    fn grow(m: &Matroid, seq: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if seq.len() >= 3 {
            if fan_kind(m, seq).is_none() {
                return;
            }
            out.push(seq.clone());
        }
        for e in 0..m.len() {
            if !seq.contains(&e) {
                seq.push(e);
                grow(m, seq, out);
                seq.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(m, &mut Vec::new(), &mut out);
    out
}

fn subsequence(f: &[String], g: &[String]) -> bool {
    let mut it = g.iter();
    f.iter().all(|x| it.any(|y| y == x))
}

pub fn consistent(f: &[String], g: &[String]) -> bool {
    let rev: Vec<String> = g.iter().rev().cloned().collect();
    subsequence(f, g) || subsequence(f, &rev)
}

/// Fans (label sequences, both orientations) that belong to some covering
/// family of `m` relative to the labeled `N`-minor with labels `n_labels`.
pub fn covering_members(m: &Matroid, n_labels: &BTreeSet<String>, fans_n: &[Vec<String>]) -> BTreeSet<Vec<String>> {
    let fans: Vec<Vec<String>> = brute_fans(m).iter().map(|f| f.iter().map(|&e| m.label(e).to_string()).collect()).collect();
    let new: BTreeSet<String> = m.labels().iter().filter(|l| !n_labels.contains(*l)).cloned().collect();
    let mut out = BTreeSet::new();
    fn pick(
        i: usize,
        fans: &[Vec<String>],
        fans_n: &[Vec<String>],
        chosen: &mut Vec<usize>,
        new: &BTreeSet<String>,
        out: &mut BTreeSet<Vec<String>>,
    ) {
        if i == fans_n.len() {
            let covered: BTreeSet<&String> = chosen.iter().flat_map(|&c| fans[c].iter()).collect();
            if new.iter().all(|x| covered.contains(x)) {
                for &c in chosen.iter() {
                    out.insert(fans[c].clone());
                }
            }
            return;
        }
        for (k, f) in fans.iter().enumerate() {
            let disjoint = chosen.iter().all(|&c| fans[c].iter().all(|x| !f.contains(x)));
            if disjoint && consistent(&fans_n[i], f) {
                chosen.push(k);
                pick(i + 1, fans, fans_n, chosen, new, out);
                chosen.pop();
            }
        }
    }
    pick(0, &fans, fans_n, &mut Vec::new(), &new, &mut out);
    out
}

fn seq_indices(m: &Matroid, seq: &[String]) -> Vec<usize> {
    seq.iter().map(|l| m.index_of(l).expect("label")).collect()
}

/// One forward step: matroids obtained from `cur` by a fan-lengthening move
/// on a member of a covering family, adding at most `room` elements.
pub fn lengthenings(cur: &ReprMatroid, n_labels: &BTreeSet<String>, fans_n: &[Vec<String>], room: usize) -> Vec<ReprMatroid> {
    let cm = cur.to_matroid().expect("matroid");
    let members = covering_members(&cm, n_labels, fans_n);
    let mut out = Vec::new();
    if members.is_empty() || room == 0 {
        return out;
    }
    let one: Vec<(ReprMatroid, bool)> =
        cur.extensions().into_iter().map(|r| (r, true)).chain(cur.coextensions().into_iter().map(|r| (r, false))).collect();
    for (r, is_ext) in &one {
        let m = r.to_matroid().expect("matroid");
        let e = m.len() - 1;
        let mut hit = false;
        for f in &members {
            let mut seq = vec![e];
            seq.extend(seq_indices(&m, f));
            // A new spoke is deleted to undo the move, a new rim element contracted.
            if fan_kind(&m, &seq) == Some(*is_ext) {
                hit = true;
                break;
            }
        }
        if hit && m.is_3connected() {
            out.push(r.clone());
        }
    }
    if room >= 2 {
        for y_ext in cur.extensions() {
            for r in y_ext.coextensions() {
                let m = r.to_matroid().expect("matroid");
                let (y, x) = (m.len() - 2, m.len() - 1);
                let mut hit = false;
                'fans: for f in &members {
                    let base = seq_indices(&m, f);
                    for i in 0..=base.len() {
                        let mut seq = base[..i].to_vec();
                        seq.push(x);
                        seq.push(y);
                        seq.extend(&base[i..]);
                        if seq.len() < 5 {
                            continue;
                        }
                        if let Some(first_triangle) = fan_kind(&m, &seq) {
                            let x_is_spoke = (i % 2 == 0) == first_triangle;
                            if !x_is_spoke {
                                hit = true;
                                break 'fans;
                            }
                        }
                    }
                }
                if hit && m.is_3connected() {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// All fan-extensions of `n` with at most `depth` extra elements, labeled
/// so that `N` keeps its labels; duplicates up to isomorphism removed.
pub fn forward(n: &ReprMatroid, fans_n: &[Vec<String>], depth: usize) -> Vec<ReprMatroid> {
    let n_labels: BTreeSet<String> = n.labels.iter().cloned().collect();
    let mut all = vec![n.clone()];
    let mut frontier = vec![n.clone()];
    while let Some(cur) = frontier.pop() {
        let room = depth - (cur.len() - n.len());
        for next in lengthenings(&cur, &n_labels, fans_n, room) {
            if next.len() - n.len() < depth {
                frontier.push(next.clone());
            }
            all.push(next);
        }
    }
    dedup(all)
}

pub fn dedup(v: Vec<ReprMatroid>) -> Vec<ReprMatroid> {
    let mut out: Vec<(ReprMatroid, Matroid, u64)> = Vec::new();
    for r in v {
        let m = r.to_matroid().expect("matroid");
        let sig = invariants(&m).signature;
        if !out.iter().any(|(_, o, s)| *s == sig && is_isomorphic(o, &m).is_some()) {
            out.push((r, m, sig));
        }
    }
    out.into_iter().map(|t| t.0).collect()
}

pub fn contains_iso(pool: &[Matroid], m: &Matroid) -> bool {
    pool.iter().any(|p| p.len() == m.len() && is_isomorphic(p, m).is_some())
}

pub fn mask_of(m: &Matroid, labels: &[String]) -> Mask {
    labels.iter().fold(0, |a, l| a | bit(m.index_of(l).expect("label")))
}
