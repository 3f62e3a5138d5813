//! Isomorphism testing and minor containment.
//!
//! Elements are colored by membership counts in small circuits, small
//! cocircuits and bases, refined twice through triangles and triads.
//! Bijections are then built by backtracking along color classes, checking
//! the rank of every subset of the assigned prefix.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::ops::ControlFlow;

use crate::bits::{bit, elements, k_subsets, size, Mask};
use crate::matroid::{Matroid, RankFn, Structure};

/// Per-element colors and a whole-matroid signature. Isomorphic matroids
/// have equal signatures and matching color multisets.
#[derive(Clone, Debug)]
pub struct Invariants {
    pub colors: Vec<u64>,
    pub signature: u64,
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

pub fn invariants(m: &Matroid) -> Invariants {
    let n = m.len();
    let mut base = vec![[0u32; 9]; n];
    for &b in m.bases() {
        for e in elements(b) {
            base[e][0] += 1;
        }
    }
    let mut small_circuits = Vec::new();
    let mut small_cocircuits = Vec::new();
    for k in 1..=4.min(n) {
        for s in k_subsets(m.ground(), k) {
            if m.is_circuit(s) {
                for e in elements(s) {
                    base[e][k] += 1;
                }
                if k >= 3 {
                    small_circuits.push(s);
                }
            }
            if m.is_cocircuit(s) {
                for e in elements(s) {
                    base[e][4 + k] += 1;
                }
                if k >= 3 {
                    small_cocircuits.push(s);
                }
            }
        }
    }
    let mut colors: Vec<u64> = base.iter().map(hash_of).collect();
    for _ in 0..2 {
        let next = (0..n)
            .map(|e| {
                let around = |family: &[Mask]| {
                    let mut v: Vec<Vec<u64>> = family
                        .iter()
                        .filter(|&&s| s & bit(e) != 0)
                        .map(|&s| {
                            let mut c: Vec<u64> = elements(s & !bit(e)).map(|f| colors[f]).collect();
                            c.sort_unstable();
                            c
                        })
                        .collect();
                    v.sort_unstable();
                    v
                };
                hash_of(&(colors[e], around(&small_circuits), around(&small_cocircuits)))
            })
            .collect();
        colors = next;
    }
    let mut sorted = colors.clone();
    sorted.sort_unstable();
    let signature = hash_of(&(n, m.full_rank(), m.num_bases(), &sorted));
    Invariants { colors, signature }
}

/// Call `f` with every isomorphism `m1 -> m2` (as `map[i1] = i2`) until it
/// returns `ControlFlow::Break`.
pub fn for_each_isomorphism(
    m1: &Matroid,
    m2: &Matroid,
    mut f: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if m1.len() != m2.len() || m1.full_rank() != m2.full_rank() || m1.num_bases() != m2.num_bases() {
        return ControlFlow::Continue(());
    }
    let (i1, i2) = (invariants(m1), invariants(m2));
    isomorphisms_with(m1, &i1, m2, &i2, &mut f)
}

pub(crate) fn isomorphisms_with(
    m1: &Matroid,
    i1: &Invariants,
    m2: &Matroid,
    i2: &Invariants,
    f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if i1.signature != i2.signature {
        return ControlFlow::Continue(());
    }
    let n = m1.len();
    let class_size = |c: u64| i1.colors.iter().filter(|&&d| d == c).count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&e| (class_size(i1.colors[e]), i1.colors[e], e));
    let mut search = Search {
        m1,
        m2,
        colors1: &i1.colors,
        colors2: &i2.colors,
        order,
        map: vec![usize::MAX; n],
        used: 0,
        pairs: vec![(0, 0)],
    };
    search.go(0, f)
}

struct Search<'a> {
    m1: &'a Matroid,
    m2: &'a Matroid,
    colors1: &'a [u64],
    colors2: &'a [u64],
    order: Vec<usize>,
    map: Vec<usize>,
    used: Mask,
    pairs: Vec<(Mask, Mask)>,
}

impl Search<'_> {
    fn go(&mut self, depth: usize, f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        if depth == self.order.len() {
            return f(&self.map);
        }
        let a = self.order[depth];
        for b in 0..self.m2.len() {
            if self.used & bit(b) != 0 || self.colors2[b] != self.colors1[a] {
                continue;
            }
            let len = self.pairs.len();
            let mut ok = true;
            for i in 0..len {
                let (s1, s2) = self.pairs[i];
                let (t1, t2) = (s1 | bit(a), s2 | bit(b));
                if self.m1.rank(t1) != self.m2.rank(t2) {
                    ok = false;
                    break;
                }
                self.pairs.push((t1, t2));
            }
            if ok {
                self.map[a] = b;
                self.used |= bit(b);
                let r = self.go(depth + 1, f);
                self.used &= !bit(b);
                self.map[a] = usize::MAX;
                if r.is_break() {
                    self.pairs.truncate(len);
                    return r;
                }
            }
            self.pairs.truncate(len);
        }
        ControlFlow::Continue(())
    }
}

/// Some isomorphism `m1 -> m2`, preferring the positional identity when it works.
pub fn is_isomorphic(m1: &Matroid, m2: &Matroid) -> Option<Vec<usize>> {
    if m1.len() == m2.len() && m1.bases() == m2.bases() {
        return Some((0..m1.len()).collect());
    }
    let mut found = None;
    let _ = for_each_isomorphism(m1, m2, |map| {
        found = Some(map.to_vec());
        ControlFlow::Break(())
    });
    found
}

/// Every automorphism, as index permutations.
pub fn automorphisms(m: &Matroid) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let _ = for_each_isomorphism(m, m, |map| {
        out.push(map.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// `M / contract \ delete` is isomorphic to `N` via `map[i_N] = i_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub contract: Mask,
    pub delete: Mask,
    pub map: Vec<usize>,
}

impl MinorWitness {
    /// The image of `E(N)` in `E(M)`.
    pub fn image(&self) -> Mask {
        self.map.iter().fold(0, |m, &i| m | bit(i))
    }

    /// Recheck from scratch that the witness is valid.
    pub fn verify(&self, m: &Matroid, n: &Matroid) -> bool {
        let g = m.ground();
        if self.contract & self.delete != 0
            || (self.contract | self.delete) & !g != 0
            || self.map.len() != n.len()
            || self.image() != g & !self.contract & !self.delete
            || size(self.image()) != n.len()
        {
            return false;
        }
        let rc = m.rank(self.contract);
        (0..=n.ground()).all(|x| {
            let img = elements(x).fold(0, |acc, i| acc | bit(self.map[i]));
            m.rank(img | self.contract) - rc == n.rank(x)
        })
    }
}

/// Enumerate minor embeddings of `n` in `m`: every pair `(C, D)` with
/// `M/C\D ≅ N` and `C` independent, in lexicographic order of the kept set
/// and then of `C`. With `all_maps` every isomorphism is reported, otherwise
/// one per `(C, D)`.
pub fn for_each_minor(
    m: &Matroid,
    n: &Matroid,
    all_maps: bool,
    mut f: impl FnMut(&MinorWitness) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let (me, ne) = (m.len(), n.len());
    let (mr, nr) = (m.full_rank(), n.full_rank());
    if ne > me || nr > mr || ne - nr > me - mr {
        return ControlFlow::Continue(());
    }
    let ninv = invariants(n);
    let g = m.ground();
    let c_size = mr - nr;
    for keep in k_subsets(g, ne) {
        let rest = g & !keep;
        for c in k_subsets(rest, c_size) {
            if m.rank(c) != c_size || m.rank(keep | c) != mr {
                continue;
            }
            let nb = k_subsets(keep, nr).filter(|&x| m.rank(x | c) == mr).count();
            if nb != n.num_bases() {
                continue;
            }
            let d = rest & !c;
            let minor = m.minor(c, d);
            let minv = invariants(&minor);
            let kept: Vec<usize> = elements(keep).collect();
            let mut flow = ControlFlow::Continue(());
            let _ = isomorphisms_with(n, &ninv, &minor, &minv, &mut |map| {
                let w = MinorWitness { contract: c, delete: d, map: map.iter().map(|&j| kept[j]).collect() };
                flow = f(&w);
                if flow.is_break() || !all_maps {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            flow?;
        }
    }
    ControlFlow::Continue(())
}

/// First minor witness in enumeration order; `(∅, ∅, identity)` when `m == n` positionally.
pub fn has_minor(m: &Matroid, n: &Matroid) -> Option<MinorWitness> {
    if m.len() == n.len() {
        return is_isomorphic(n, m).map(|map| MinorWitness { contract: 0, delete: 0, map });
    }
    let mut found = None;
    let _ = for_each_minor(m, n, false, |w| {
        found = Some(w.clone());
        ControlFlow::Break(())
    });
    found
}

/// Whether some minor of `m` on exactly the elements of `keep` is isomorphic to `n`.
pub fn has_minor_on(m: &Matroid, n: &Matroid, keep: Mask) -> bool {
    let g = m.ground();
    let rest = g & !keep;
    let c_size = match m.full_rank().checked_sub(n.full_rank()) {
        Some(k) => k,
        None => return false,
    };
    k_subsets(rest, c_size).any(|c| {
        m.rank(c) == c_size
            && m.rank(keep | c) == m.full_rank()
            && is_isomorphic(n, &m.minor(c, rest & !c)).is_some()
    })
}

/// Deduplicate by isomorphism, keeping the first representative of each class.
pub fn dedup_isomorphic(ms: Vec<Matroid>) -> Vec<Matroid> {
    let mut reps: Vec<(Matroid, Invariants)> = Vec::new();
    for m in ms {
        let inv = invariants(&m);
        let dup = reps.iter().any(|(r, ri)| {
            let mut hit = false;
            let _ = isomorphisms_with(r, ri, &m, &inv, &mut |_| {
                hit = true;
                ControlFlow::Break(())
            });
            hit
        });
        if !dup {
            reps.push((m, inv));
        }
    }
    reps.into_iter().map(|(m, _)| m).collect()
}
