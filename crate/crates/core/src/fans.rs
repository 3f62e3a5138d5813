//! Fans, their relations, shortening moves and covering families.

use std::collections::{BTreeSet, HashMap};

use crate::bits::{bit, elements, Mask};
use crate::error::{Error, Result};
use crate::iso::{has_minor, MinorWitness};
use crate::matroid::{Matroid, RankFn, Structure};
use crate::wheels::is_wheel_or_whirl;

/// A fan given by element indices of its host. When `first_triangle` holds
/// the window `{e1, e2, e3}` is a triangle and the odd positions are spokes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fan {
    pub elems: Vec<usize>,
    pub first_triangle: bool,
}

impl Fan {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn set(&self) -> Mask {
        self.elems.iter().fold(0, |m, &e| m | bit(e))
    }

    /// Whether the window starting at `k` is a triangle.
    pub fn window_is_triangle(&self, k: usize) -> bool {
        (k % 2 == 0) == self.first_triangle
    }

    pub fn reversed(&self) -> Fan {
        let n = self.elems.len();
        let last = n.saturating_sub(3);
        Fan { elems: self.elems.iter().rev().copied().collect(), first_triangle: self.window_is_triangle(last) }
    }

    /// Store with the smaller endpoint first.
    pub fn canonical(&self) -> Fan {
        if self.elems.first() <= self.elems.last() {
            self.clone()
        } else {
            self.reversed()
        }
    }

    pub fn is_spoke(&self, pos: usize) -> bool {
        (pos % 2 == 0) == self.first_triangle
    }

    pub fn is_terminal(&self, pos: usize) -> bool {
        pos == 0 || pos + 1 == self.elems.len()
    }

    pub fn position(&self, e: usize) -> Option<usize> {
        self.elems.iter().position(|&x| x == e)
    }

    pub fn labels(&self, m: &Matroid) -> Vec<String> {
        self.elems.iter().map(|&e| m.label(e).to_string()).collect()
    }
}

/// Spoke/rim and terminal/internal labels of one fan position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PositionKind {
    pub spoke: bool,
    pub terminal: bool,
}

/// The fan on `seq`, trying the triangle-first parity before the triad-first one.
pub fn is_fan<R: RankFn + ?Sized>(m: &R, seq: &[usize]) -> Option<Fan> {
    if seq.len() < 3 {
        return None;
    }
    let mut seen = 0;
    for &e in seq {
        if e >= 32 || m.ground() & bit(e) == 0 || seen & bit(e) != 0 {
            return None;
        }
        seen |= bit(e);
    }
    [true, false].into_iter().find_map(|first_triangle| {
        let ok = seq.windows(3).enumerate().all(|(k, w)| {
            let s = bit(w[0]) | bit(w[1]) | bit(w[2]);
            if (k % 2 == 0) == first_triangle {
                m.is_triangle(s)
            } else {
                m.is_triad(s)
            }
        });
        ok.then(|| Fan { elems: seq.to_vec(), first_triangle })
    })
}

/// Labeled form of [`is_fan`].
pub fn is_fan_labels<S: AsRef<str>>(m: &Matroid, seq: &[S]) -> Result<Option<Fan>> {
    let mut idx = Vec::with_capacity(seq.len());
    for l in seq {
        idx.push(m.index_of(l.as_ref()).ok_or_else(|| Error::input(format!("unknown element {:?}", l.as_ref())))?);
    }
    Ok(is_fan(m, &idx))
}

/// Spoke/rim and terminal/internal labels for every position of `fan`.
pub fn classify(m: &Matroid, fan: &Fan) -> Result<Vec<PositionKind>> {
    for w in fan.elems.windows(3) {
        let s = bit(w[0]) | bit(w[1]) | bit(w[2]);
        if m.is_triangle(s) && m.is_triad(s) {
            return Err(Error::structural("a window of the fan is both a triangle and a triad"));
        }
    }
    if is_wheel_or_whirl(m) {
        return Err(Error::structural("spoke and rim labels are not canonical in a wheel or whirl"));
    }
    Ok((0..fan.len()).map(|p| PositionKind { spoke: fan.is_spoke(p), terminal: fan.is_terminal(p) }).collect())
}

/// A fan together with whether its element set is maximal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundFan {
    pub fan: Fan,
    pub maximal: bool,
}

/// All fans of length at least `min_len`, one per reversal pair (smaller
/// endpoint first), sorted by length then elements.
pub fn enumerate_fans<R: RankFn + ?Sized>(m: &R, min_len: usize) -> Vec<FoundFan> {
    let all = all_fans(m);
    let sets: Vec<Mask> = all.iter().map(Fan::set).collect();
    let mut distinct: Vec<Mask> = sets.clone();
    distinct.sort_unstable();
    distinct.dedup();
    all.into_iter()
        .zip(sets)
        .filter(|(f, _)| f.len() >= min_len.max(3))
        .map(|(fan, s)| {
            let maximal = !distinct.iter().any(|&t| t != s && t & s == s);
            FoundFan { fan, maximal }
        })
        .collect()
}

/// Fans of every length, canonical orientation, sorted by length then elements.
pub fn all_fans<R: RankFn + ?Sized>(m: &R) -> Vec<Fan> {
    let tri = m.triangles();
    let tds = m.triads();
    // third elements completing a pair to a triangle / triad
    let mut close: HashMap<(usize, usize, bool), Vec<usize>> = HashMap::new();
    for (family, is_tri) in [(&tri, true), (&tds, false)] {
        for &t in family.iter() {
            let v: Vec<usize> = elements(t).collect();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        let k = 3 - i - j;
                        close.entry((v[i], v[j], is_tri)).or_default().push(v[k]);
                    }
                }
            }
        }
    }
    let mut out: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut parity: HashMap<Vec<usize>, bool> = HashMap::new();
    for (family, is_tri) in [(&tri, true), (&tds, false)] {
        for &t in family.iter() {
            let v: Vec<usize> = elements(t).collect();
            for p in permutations3(&v) {
                let mut seq = p.to_vec();
                grow(&close, &mut seq, is_tri, bit(p[0]) | bit(p[1]) | bit(p[2]), is_tri, &mut out, &mut parity);
            }
        }
    }
    out.into_iter()
        .map(|(_, elems)| {
            let first_triangle = parity[&elems];
            Fan { elems, first_triangle }
        })
        .collect()
}

fn permutations3(v: &[usize]) -> [[usize; 3]; 6] {
    let (a, b, c) = (v[0], v[1], v[2]);
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

fn grow(
    close: &HashMap<(usize, usize, bool), Vec<usize>>,
    seq: &mut Vec<usize>,
    last_is_tri: bool,
    used: Mask,
    first_tri: bool,
    out: &mut BTreeSet<(usize, Vec<usize>)>,
    parity: &mut HashMap<Vec<usize>, bool>,
) {
    if seq[0] < seq[seq.len() - 1] {
        let entry = parity.entry(seq.clone()).or_insert(first_tri);
        // triangle-first wins when both parities fit
        *entry |= first_tri;
        out.insert((seq.len(), seq.clone()));
    }
    let n = seq.len();
    if let Some(next) = close.get(&(seq[n - 2], seq[n - 1], !last_is_tri)) {
        for &d in next {
            if used & bit(d) == 0 {
                seq.push(d);
                grow(close, seq, !last_is_tri, used | bit(d), first_tri, out, parity);
                seq.pop();
            }
        }
    }
}

/// `f` is a (not necessarily contiguous) subsequence of `g` or of its reversal.
pub fn is_consistent<T: PartialEq>(f: &[T], g: &[T]) -> bool {
    fn subseq<'a, T: PartialEq + 'a>(f: &[T], mut g: impl Iterator<Item = &'a T>) -> bool {
        f.iter().all(|x| g.any(|y| y == x))
    }
    subseq(f, g.iter()) || subseq(f, g.iter().rev())
}

/// `f` or its reversal equals a contiguous block of `g`.
pub fn is_enclosed<T: PartialEq>(f: &[T], g: &[T]) -> bool {
    if f.is_empty() {
        return true;
    }
    if f.len() > g.len() {
        return false;
    }
    g.windows(f.len()).any(|w| w == f || w.iter().eq(f.iter().rev()))
}

/// The elements of `f` are exactly the elements of a contiguous block of `g`.
pub fn is_contiguous<T: PartialEq>(f: &[T], g: &[T]) -> bool {
    if f.is_empty() || f.len() > g.len() {
        return f.is_empty();
    }
    g.windows(f.len()).any(|w| w.iter().all(|x| f.contains(x)) && f.iter().all(|x| w.contains(x)))
}

/// Which fan-lengthening move relates a fan to its shortening.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    /// `M' = M \ e1` with `e1` a terminal spoke.
    Spoke,
    /// `M' = M / e1` with `e1` a terminal rim element.
    Rim,
    /// `M' = M / ei \ e(i+1)` with `ei` a rim element.
    Internal,
}

impl MoveKind {
    pub fn name(self) -> &'static str {
        match self {
            MoveKind::Spoke => "spoke",
            MoveKind::Rim => "rim",
            MoveKind::Internal => "internal",
        }
    }

    pub fn parse(s: &str) -> Option<MoveKind> {
        match s {
            "spoke" => Some(MoveKind::Spoke),
            "rim" => Some(MoveKind::Rim),
            "internal" => Some(MoveKind::Internal),
            _ => None,
        }
    }
}

/// A fan-shortening of a fan `F` of a 3-connected matroid, expressed in the
/// host's index space: `M' = M / contract \ delete` and `shortened` is the
/// remaining sequence, oriented as in `F` (possibly reversed).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shortening {
    pub kind: MoveKind,
    pub contract: Mask,
    pub delete: Mask,
    /// The oriented fan of `M` that is lengthened.
    pub lengthened: Vec<usize>,
    pub shortened: Vec<usize>,
}

impl Shortening {
    pub fn removed(&self) -> Mask {
        self.contract | self.delete
    }
}

/// Candidate shortenings of `fan` inside `m`, avoiding the elements of
/// `protect`, before any 3-connectivity check.
pub fn shortening_moves(fan: &Fan, protect: Mask) -> Vec<Shortening> {
    let mut out = Vec::new();
    for f in [fan.clone(), fan.reversed()] {
        let n = f.len();
        if n < 4 {
            continue;
        }
        let e1 = f.elems[0];
        if protect & bit(e1) == 0 {
            let (kind, c, d) = if f.is_spoke(0) { (MoveKind::Spoke, 0, bit(e1)) } else { (MoveKind::Rim, bit(e1), 0) };
            out.push(Shortening {
                kind,
                contract: c,
                delete: d,
                lengthened: f.elems.clone(),
                shortened: f.elems[1..].to_vec(),
            });
        }
        if n >= 5 {
            for i in 0..n - 1 {
                let (ei, ej) = (f.elems[i], f.elems[i + 1]);
                if f.is_spoke(i) || protect & (bit(ei) | bit(ej)) != 0 {
                    continue;
                }
                let mut rest = f.elems.clone();
                rest.drain(i..i + 2);
                out.push(Shortening {
                    kind: MoveKind::Internal,
                    contract: bit(ei),
                    delete: bit(ej),
                    lengthened: f.elems.clone(),
                    shortened: rest,
                });
            }
        }
    }
    out.sort();
    out.dedup_by(|a, b| a.contract == b.contract && a.delete == b.delete && same_up_to_reversal(&a.shortened, &b.shortened));
    out
}

fn same_up_to_reversal(a: &[usize], b: &[usize]) -> bool {
    a == b || a.iter().eq(b.iter().rev())
}

/// Every legal shortening of `fan` in `m`: the smaller matroid is
/// 3-connected, the shortened sequence is a fan of it, and it still has an
/// `n`-minor. Returns the materialized matroids with their fans.
pub fn shortenings(m: &Matroid, fan: &Fan, n: &Matroid) -> Vec<(Matroid, Fan, MoveKind)> {
    if !m.is_3connected() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for s in shortening_moves(fan, 0) {
        let v = m.view(s.contract, s.delete);
        if !v.is_3connected() {
            continue;
        }
        let Some(short) = is_fan(&v, &s.shortened) else { continue };
        let small = v.materialize();
        if has_minor(&small, n).is_none() {
            continue;
        }
        let keep = v.ground();
        let remap = |e: usize| elements(keep).position(|x| x == e).expect("kept element");
        let sf = Fan { elems: short.elems.iter().map(|&e| remap(e)).collect(), first_triangle: short.first_triangle };
        out.push((small, sf, s.kind));
    }
    out
}

/// The covering-family problem for one host: the elements `anchor` that
/// play `E(N)`, and the images of the fans of `N`.
#[derive(Clone, Debug)]
pub struct CoverProblem {
    pub anchor: Mask,
    pub targets: Vec<Vec<usize>>,
}

impl CoverProblem {
    /// The problem induced by a minor witness of `n` in some host.
    pub fn from_witness(w: &MinorWitness, fans_n: &[Vec<usize>]) -> CoverProblem {
        CoverProblem {
            anchor: w.image(),
            targets: fans_n.iter().map(|f| f.iter().map(|&i| w.map[i]).collect()).collect(),
        }
    }
}

struct FanIndex {
    fans: Vec<Fan>,
    sets: Vec<Mask>,
    /// bit t set when target t is consistent with the fan
    consistent: Vec<u32>,
}

impl FanIndex {
    fn new<R: RankFn + ?Sized>(m: &R, p: &CoverProblem) -> FanIndex {
        let fans = all_fans(m);
        let sets = fans.iter().map(Fan::set).collect();
        let consistent = fans
            .iter()
            .map(|f| {
                p.targets
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| is_consistent(t, &f.elems))
                    .fold(0u32, |acc, (i, _)| acc | (1 << i))
            })
            .collect();
        FanIndex { fans, sets, consistent }
    }
}

/// Every covering family of `m`, one per choice of fans up to reversal, in
/// lexicographic order of fan indices.
pub fn covering_families_in<R: RankFn + ?Sized>(m: &R, p: &CoverProblem) -> Vec<Vec<Fan>> {
    let idx = FanIndex::new(m, p);
    let k = p.targets.len();
    let new = m.ground() & !p.anchor;
    let all_targets = if k == 0 { 0 } else { (1u32 << k) - 1 };
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(
        idx: &FanIndex,
        k: usize,
        new: Mask,
        all_targets: u32,
        start: usize,
        used: Mask,
        cons: u32,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<Fan>>,
    ) {
        if chosen.len() == k {
            if cons == all_targets && new & !used == 0 {
                out.push(chosen.iter().map(|&i| idx.fans[i].clone()).collect());
            }
            return;
        }
        for i in start..idx.fans.len() {
            if idx.sets[i] & used == 0 {
                chosen.push(i);
                rec(idx, k, new, all_targets, i + 1, used | idx.sets[i], cons | idx.consistent[i], chosen, out);
                chosen.pop();
            }
        }
    }
    rec(&idx, k, new, all_targets, 0, 0, 0, &mut chosen, &mut out);
    out
}

/// Some covering family of `m` that contains `required` (when given).
pub fn find_covering_family<R: RankFn + ?Sized>(m: &R, p: &CoverProblem, required: Option<&[usize]>) -> Option<Vec<Fan>> {
    let idx = FanIndex::new(m, p);
    let k = p.targets.len();
    let new = m.ground() & !p.anchor;
    let mut chosen = Vec::new();
    let mut used = 0;
    let mut cons = 0;
    if let Some(req) = required {
        let canon = if req.first() <= req.last() { req.to_vec() } else { req.iter().rev().copied().collect() };
        let i = idx.fans.iter().position(|f| f.elems == canon)?;
        chosen.push(i);
        used = idx.sets[i];
        cons = idx.consistent[i];
    }
    let all_targets = if k == 0 { 0 } else { (1u32 << k) - 1 };
    if search_cover(&idx, k, new, all_targets, used, cons, &mut chosen) {
        Some(chosen.iter().map(|&i| idx.fans[i].clone()).collect())
    } else {
        None
    }
}

fn search_cover(idx: &FanIndex, k: usize, new: Mask, all: u32, used: Mask, cons: u32, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() > k {
        return false;
    }
    let uncovered = new & !used;
    let candidates: Box<dyn Iterator<Item = usize>> = if uncovered != 0 {
        let e = uncovered.trailing_zeros();
        Box::new((0..idx.fans.len()).filter(move |&i| idx.sets[i] & (1 << e) != 0))
    } else if cons != all {
        let t = (!cons & all).trailing_zeros();
        Box::new((0..idx.fans.len()).filter(move |&i| idx.consistent[i] & (1 << t) != 0))
    } else if chosen.len() == k {
        return true;
    } else {
        // remaining members are unconstrained; any disjoint fans do
        Box::new(0..idx.fans.len())
    };
    let cands: Vec<usize> = candidates.collect();
    for i in cands {
        if idx.sets[i] & used != 0 {
            continue;
        }
        chosen.push(i);
        if search_cover(idx, k, new, all, used | idx.sets[i], cons | idx.consistent[i], chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Labeled entry point: covering families of `m` relative to `n`, its fans
/// `fans_n` (as labels of `n`) and a minor witness.
pub fn covering_families(m: &Matroid, n: &Matroid, fans_n: &[Vec<String>], w: &MinorWitness) -> Result<Vec<Vec<Fan>>> {
    if !w.verify(m, n) {
        return Err(Error::input("minor witness does not realize N inside M"));
    }
    let targets = fan_indices(n, fans_n)?;
    Ok(covering_families_in(m, &CoverProblem::from_witness(w, &targets)))
}

/// Resolve labeled fans of `n` to index sequences, checking that they are
/// pairwise disjoint fans.
pub fn fan_indices(n: &Matroid, fans: &[Vec<String>]) -> Result<Vec<Vec<usize>>> {
    let mut used = 0;
    let mut out = Vec::new();
    for f in fans {
        let fan = is_fan_labels(n, f)?.ok_or_else(|| Error::input(format!("{f:?} is not a fan of N")))?;
        if used & fan.set() != 0 {
            return Err(Error::input("the fans of N must be pairwise disjoint"));
        }
        used |= fan.set();
        out.push(fan.elems);
    }
    if out.len() > 16 {
        return Err(Error::input("at most 16 fans are supported"));
    }
    Ok(out)
}

/// Whether some fan of `n` contains two distinct members of `fans` as sets.
pub fn fan_contains_two(n: &Matroid, fans: &[Vec<usize>]) -> bool {
    let sets: Vec<Mask> = fans.iter().map(|f| f.iter().fold(0, |m, &e| m | bit(e))).collect();
    all_fans(n).iter().any(|g| {
        let s = g.set();
        sets.iter().filter(|&&t| t & s == t).count() >= 2
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wheels::wheel;

    fn w3() -> Matroid {
        wheel(3).unwrap().to_matroid().unwrap()
    }

    #[test]
    fn triangle_is_a_fan() {
        let m = w3();
        let f = is_fan_labels(&m, &["x1", "y1", "x2"]).unwrap().unwrap();
        assert!(f.first_triangle);
        assert!(f.is_spoke(0) && !f.is_spoke(1));
    }

    #[test]
    fn wheel_walk_is_a_fan() {
        let m = w3();
        let seq = ["x1", "y1", "x2", "y2", "x3", "y3"];
        assert!(is_fan_labels(&m, &seq).unwrap().is_some());
        assert!(is_fan_labels(&m, &["x1", "y1", "x1"]).unwrap().is_none());
        assert!(is_fan_labels(&m, &["x1", "y1", "zz"]).is_err());
    }

    #[test]
    fn reversal_keeps_position_labels() {
        let m = w3();
        let f = is_fan_labels(&m, &["x1", "y1", "x2", "y2"]).unwrap().unwrap();
        let r = f.reversed();
        assert!(is_fan(&m, &r.elems).unwrap() == r);
        for p in 0..4 {
            assert_eq!(f.is_spoke(p), r.is_spoke(3 - p));
        }
    }

    #[test]
    fn u24_fans_are_all_sequences() {
        let m = Matroid::uniform(2, 4).unwrap();
        let fans = enumerate_fans(&m, 3);
        // 24 ordered triples and 24 orderings of all four, halved by reversal
        assert_eq!(fans.iter().filter(|f| f.fan.len() == 3).count(), 12);
        assert_eq!(fans.iter().filter(|f| f.fan.len() == 4).count(), 12);
        assert!(fans.iter().all(|f| f.maximal == (f.fan.len() == 4)));
    }

    #[test]
    fn wheel_has_a_six_element_maximal_fan() {
        let fans = enumerate_fans(&w3(), 3);
        assert!(fans.iter().any(|f| f.fan.len() == 6 && f.maximal));
    }

    #[test]
    fn no_triangles_no_fans() {
        assert!(enumerate_fans(&Matroid::uniform(3, 6).unwrap(), 3).is_empty());
    }

    #[test]
    fn relations() {
        let g = [1, 2, 3, 4, 5];
        assert!(is_consistent(&[1, 2, 3], &g) && is_enclosed(&[1, 2, 3], &g) && is_contiguous(&[1, 2, 3], &g));
        assert!(is_consistent(&[1, 4, 5], &g) && !is_enclosed(&[1, 4, 5], &g));
        let rev = [5, 4, 3, 2, 1];
        assert!(is_consistent(&[2, 3, 4], &rev));
        assert!(is_contiguous(&[3, 2, 4], &g) && !is_enclosed(&[3, 2, 4], &g));
    }

    #[test]
    fn short_fans_have_no_shortenings() {
        let m = w3();
        let f = is_fan_labels(&m, &["x1", "y1", "x2"]).unwrap().unwrap();
        assert!(shortening_moves(&f, 0).is_empty());
    }
}
