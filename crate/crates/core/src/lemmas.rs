//! Executable forms of the structural facts about fans. Each check scans a
//! matroid and returns the configurations that violate the statement; an
//! empty list means the statement holds on that matroid.

use crate::bits::{bit, elements, k_subsets, size, submasks, Mask};
use crate::fans::{all_fans, Fan};
use crate::iso::has_minor;
use crate::matroid::{Matroid, RankFn, Structure};
use crate::wheels::is_wheel_or_whirl;

fn window(f: &Fan, i: usize) -> Mask {
    bit(f.elems[i]) | bit(f.elems[i + 1]) | bit(f.elems[i + 2])
}

fn fan_str(m: &Matroid, f: &Fan) -> String {
    f.labels(m).join(" ")
}

/// Windows of `seq` alternate, starting with a triangle when `first_triangle`.
fn windows_ok<R: RankFn + ?Sized>(m: &R, seq: &[usize], first_triangle: bool) -> bool {
    seq.windows(3).enumerate().all(|(k, w)| {
        let s = bit(w[0]) | bit(w[1]) | bit(w[2]);
        if (k % 2 == 0) == first_triangle {
            m.is_triangle(s)
        } else {
            m.is_triad(s)
        }
    })
}

fn is_block(f: &Fan, x: Mask) -> bool {
    let pos: Vec<usize> = (0..f.len()).filter(|&p| x & bit(f.elems[p]) != 0).collect();
    match (pos.first(), pos.last()) {
        (Some(&a), Some(&b)) => b - a + 1 == pos.len(),
        _ => true,
    }
}

/// Every fan is 3-separating.
pub fn check_floor(m: &Matroid) -> Vec<String> {
    all_fans(m)
        .iter()
        .filter(|f| m.lambda(f.set()) > 2)
        .map(|f| format!("fan {} has lambda {}", fan_str(m, f), m.lambda(f.set())))
        .collect()
}

/// Removing a rim element and its successor from a fan of length at least
/// five leaves a fan of the minor with the same spoke and rim labels.
pub fn check_cider(m: &Matroid) -> Vec<String> {
    if !m.is_3connected() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for f in all_fans(m).iter().filter(|f| f.len() >= 5) {
        for g in [f.clone(), f.reversed()] {
            for i in 0..g.len() - 1 {
                if g.is_spoke(i) {
                    continue;
                }
                let v = m.view(bit(g.elems[i]), bit(g.elems[i + 1]));
                let mut rest = g.elems.clone();
                rest.drain(i..i + 2);
                if !windows_ok(&v, &rest, g.is_spoke(0)) {
                    out.push(format!("fan {} at position {}", fan_str(m, &g), i + 1));
                }
            }
        }
    }
    out
}

/// A 3-connected matroid with a fan missing at most one element is a wheel or a whirl.
pub fn check_hocus(m: &Matroid) -> Vec<String> {
    if m.len() < 4 || !m.is_3connected() {
        return Vec::new();
    }
    match all_fans(m).into_iter().find(|f| f.len() + 1 >= m.len()) {
        Some(f) if !is_wheel_or_whirl(m) => vec![format!("fan {} is nearly spanning", fan_str(m, &f))],
        _ => Vec::new(),
    }
}

/// A triangle and a triad meeting at an element outside a fan, with their
/// other elements inside it, force a wheel or a whirl.
pub fn check_thumb(m: &Matroid) -> Vec<String> {
    if m.len() < 4 || !m.is_3connected() || is_wheel_or_whirl(m) {
        return Vec::new();
    }
    let triangles = m.triangles();
    let triads = m.triads();
    let mut out = Vec::new();
    for f in all_fans(m) {
        let s = f.set();
        for e in elements(m.ground() & !s) {
            let inside = |t: &Mask| t & bit(e) != 0 && t & !bit(e) & !s == 0;
            let hit = triangles
                .iter()
                .filter(|t| inside(t))
                .any(|&u| triads.iter().filter(|t| inside(t)).any(|&t| size(u & t) == 2));
            if hit {
                out.push(format!("fan {} with {}", fan_str(m, &f), m.label(e)));
            }
        }
    }
    out
}

/// Triangles inside a fan are windows starting at a spoke.
pub fn check_steal(m: &Matroid) -> Vec<String> {
    if m.len() < 4 || !m.is_3connected() || is_wheel_or_whirl(m) {
        return Vec::new();
    }
    let triangles = m.triangles();
    let mut out = Vec::new();
    for f in all_fans(m) {
        let s = f.set();
        for &t in triangles.iter().filter(|&&t| t & !s == 0) {
            let ok = (0..f.len() - 2).any(|i| window(&f, i) == t && f.is_spoke(i));
            if !ok {
                out.push(format!("triangle {:?} in fan {}", m.labels_of(t), fan_str(m, &f)));
            }
        }
    }
    out
}

/// 3-separating subsets of a fan with at least three elements are blocks.
pub fn check_vicar(m: &Matroid) -> Vec<String> {
    if m.len() < 4 || !m.is_3connected() || is_wheel_or_whirl(m) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for f in all_fans(m) {
        for x in submasks(f.set()) {
            if size(x) >= 3 && m.lambda(x) <= 2 && !is_block(&f, x) {
                out.push(format!("{:?} in fan {}", m.labels_of(x), fan_str(m, &f)));
            }
        }
    }
    out
}

/// Fans sharing at least three elements meet in a block of each.
pub fn check_unity(m: &Matroid) -> Vec<String> {
    if m.len() < 4 || !m.is_3connected() || is_wheel_or_whirl(m) {
        return Vec::new();
    }
    let fans = all_fans(m);
    let mut out = Vec::new();
    for (i, f) in fans.iter().enumerate() {
        for g in &fans[i + 1..] {
            let x = f.set() & g.set();
            if size(x) >= 3 && !(is_block(f, x) && is_block(g, x)) {
                out.push(format!("fans {} and {}", fan_str(m, f), fan_str(m, g)));
            }
        }
    }
    out
}

/// Triangles through one outside element and a fan of length at least four
/// take one of five shapes.
pub fn check_ninny(m: &Matroid) -> Vec<String> {
    if !m.is_3connected() {
        return Vec::new();
    }
    let triangles = m.triangles();
    let mut out = Vec::new();
    for f in all_fans(m).into_iter().filter(|f| f.len() >= 4) {
        let n = f.len();
        let s = f.set();
        let e_at = |p: usize| bit(f.elems[p]);
        for e in elements(m.ground() & !s) {
            for &t in triangles.iter().filter(|&&t| t & bit(e) != 0 && t & !bit(e) & !s == 0) {
                let with = |seq: Vec<usize>| windows_ok(m, &seq, true) || windows_ok(m, &seq, false);
                let mut ext_front = vec![e];
                ext_front.extend(&f.elems);
                let mut ext_back = f.elems.clone();
                ext_back.push(e);
                let i = t == bit(e) | e_at(0) | e_at(1) && !f.is_spoke(0) && with(ext_front);
                let ii = t == bit(e) | e_at(n - 2) | e_at(n - 1) && !f.is_spoke(n - 1) && with(ext_back);
                let iii = t == bit(e) | e_at(0) | e_at(n - 1) && f.is_spoke(0) && f.is_spoke(n - 1);
                let iv = t == bit(e) | e_at(1) | e_at(3) && !f.is_spoke(1) && n <= 5;
                let v = t == bit(e) | e_at(n - 2) | e_at(n - 4) && !f.is_spoke(n - 2) && n <= 5;
                if !(i || ii || iii || iv || v) {
                    out.push(format!("triangle {:?} at fan {}", m.labels_of(t), fan_str(m, &f)));
                }
            }
        }
    }
    out
}

/// In a matroid with an `n`-minor that is 3-connected up to series and
/// parallel sets, triangles are coindependent and triads independent.
pub fn check_lasso(m: &Matroid, n: &Matroid) -> Vec<String> {
    if has_minor(m, n).is_none() || !m.is_3conn_up_to_sp() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for t in m.triangles() {
        if m.corank(t) < 3 {
            out.push(format!("triangle {:?} is codependent", m.labels_of(t)));
        }
    }
    for t in m.triads() {
        if m.rank(t) < 3 {
            out.push(format!("triad {:?} is dependent", m.labels_of(t)));
        }
    }
    out
}

/// Under the same hypotheses, `U2,4`-restrictions avoid every triad.
pub fn check_putty(m: &Matroid, n: &Matroid) -> Vec<String> {
    if has_minor(m, n).is_none() || !m.is_3conn_up_to_sp() {
        return Vec::new();
    }
    let triads = m.triads();
    let mut out = Vec::new();
    for x in k_subsets(m.ground(), 4) {
        let u24 = m.rank(x) == 2 && k_subsets(x, 2).all(|p| m.rank(p) == 2);
        if u24 && triads.iter().any(|&t| t & x != 0) {
            out.push(format!("{:?} meets a triad", m.labels_of(x)));
        }
    }
    out
}

/// If `N` survives an internal shortening of a fan, the result is 3-connected.
/// Only meaningful when every minor of `m` keeping `N` is 3-connected up to
/// series and parallel sets.
pub fn check_shrub(m: &Matroid, n: &Matroid) -> Vec<String> {
    if !m.is_3connected() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for f in all_fans(m).into_iter().filter(|f| f.len() >= 4) {
        for g in [f.clone(), f.reversed()] {
            for i in 0..g.len() - 1 {
                let small = m.minor(bit(g.elems[i]), bit(g.elems[i + 1]));
                if has_minor(&small, n).is_some() && !small.is_3connected() {
                    out.push(format!("fan {} at position {}", fan_str(m, &g), i + 1));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wheels_satisfy_unconditional_checks() {
        for r in 3..=5 {
            let w = crate::wheels::wheel(r).unwrap().to_matroid().unwrap();
            for v in [check_floor(&w), check_cider(&w), check_hocus(&w), check_ninny(&w)] {
                assert!(v.is_empty(), "{v:?}");
            }
        }
    }
}
