//! Small-set helpers. Subsets of a ground set of at most 32 indexed
//! elements are stored as `u32` bitmasks.

use std::cmp::Ordering;

pub type Mask = u32;

#[inline]
pub fn bit(i: usize) -> Mask {
    1 << i
}

#[inline]
pub fn full(n: usize) -> Mask {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[inline]
pub fn size(mask: Mask) -> usize {
    mask.count_ones() as usize
}

/// Indices set in `mask`, ascending.
pub fn elements(mask: Mask) -> Elements {
    Elements(mask)
}

pub struct Elements(Mask);

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Mask {
    it.into_iter().fold(0, |m, i| m | bit(i))
}

pub fn to_vec(mask: Mask) -> Vec<usize> {
    elements(mask).collect()
}

/// All submasks of `mask`, starting from the empty set.
pub fn submasks(mask: Mask) -> Submasks {
    Submasks { mask, cur: 0, done: false }
}

pub struct Submasks {
    mask: Mask,
    cur: Mask,
    done: bool,
}

impl Iterator for Submasks {
    type Item = Mask;

    fn next(&mut self) -> Option<Mask> {
        if self.done {
            return None;
        }
        let out = self.cur;
        if self.cur == self.mask {
            self.done = true;
        } else {
            self.cur = (self.cur.wrapping_sub(self.mask)) & self.mask;
        }
        Some(out)
    }
}

/// The `k`-element submasks of `mask` in lexicographic order of their
/// sorted index lists.
pub fn k_subsets(mask: Mask, k: usize) -> KSubsets {
    let pool = to_vec(mask);
    let idx = if k <= pool.len() { Some((0..k).collect()) } else { None };
    KSubsets { pool, idx }
}

pub struct KSubsets {
    pool: Vec<usize>,
    idx: Option<Vec<usize>>,
}

impl Iterator for KSubsets {
    type Item = Mask;

    fn next(&mut self) -> Option<Mask> {
        let idx = self.idx.as_mut()?;
        let out = idx.iter().fold(0, |m, &i| m | bit(self.pool[i]));
        let k = idx.len();
        let n = self.pool.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.idx = None;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Lexicographic comparison of the sorted index lists of two masks.
pub fn lex_cmp(a: Mask, b: Mask) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x.cmp(&y);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

/// Sort masks by size, then lexicographically.
pub fn sort_family(family: &mut [Mask]) {
    family.sort_by(|&a, &b| size(a).cmp(&size(b)).then(lex_cmp(a, b)));
}

/// Re-index the bits of `mask` that lie in `keep` into consecutive positions.
pub fn compress(mask: Mask, keep: Mask) -> Mask {
    let mut out = 0;
    for (j, i) in elements(keep).enumerate() {
        if mask & bit(i) != 0 {
            out |= bit(j);
        }
    }
    out
}

/// Inverse of [`compress`]: spread consecutive bits onto the positions of `keep`.
pub fn expand(mask: Mask, keep: Mask) -> Mask {
    let mut out = 0;
    for (j, i) in elements(keep).enumerate() {
        if mask & bit(j) != 0 {
            out |= bit(i);
        }
    }
    out
}
