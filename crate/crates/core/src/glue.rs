//! Generalized parallel connection, gluing wheels onto triangles, and the
//! decomposition of a fan-extension into wheels glued onto `Core(N)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bits::{bit, elements, full, k_subsets, size, Mask};
use crate::error::{Error, Result};
use crate::fans::{covering_families_in, fan_contains_two, fan_indices, is_consistent, is_enclosed, is_fan, shortening_moves, Fan};
use crate::field::PrimeField;
use crate::iso::{automorphisms, MinorWitness};
use crate::matroid::{Matroid, RankFn, Structure, RANK_TABLE_LIMIT};
use crate::recognizer::{anchors, check_target, hereditary_sp, minor_bases, Anchor, SearchLimits};
use crate::repr::{rref, ReprMatroid};
use crate::wheels::wheel_over;

/// `r(X) + r(Y) - r(X ∪ Y)` for disjoint `X`, `Y`.
pub fn pi<R: RankFn + ?Sized>(m: &R, x: Mask, y: Mask) -> Result<usize> {
    if x & y != 0 {
        return Err(Error::input("pi is defined for disjoint sets only"));
    }
    if (x | y) & !m.ground() != 0 {
        return Err(Error::input("pi called with elements outside the ground set"));
    }
    Ok(m.rank(x) + m.rank(y) - m.rank(x | y))
}

fn is_triangle_repr(m: &ReprMatroid, t: Mask) -> bool {
    m.rank_of(t) == 2 && k_subsets(t, 2).all(|p| m.rank_of(p) == 2)
}

/// Generalized parallel connection of two represented matroids along the
/// triangle formed by their common labels. The triangle must be a modular
/// flat of `m2`. Labels of `m1` come first, then the other labels of `m2`.
pub fn gpc_repr(m1: &ReprMatroid, m2: &ReprMatroid) -> Result<ReprMatroid> {
    if m1.field != m2.field {
        return Err(Error::input("generalized parallel connection over different fields"));
    }
    let f = m1.field;
    let shared: Vec<usize> = (0..m2.len()).filter(|&i| m1.index_of(&m2.labels[i]).is_some()).collect();
    if shared.len() != 3 {
        return Err(Error::structural(format!(
            "gluing needs exactly three common elements, found {}",
            shared.len()
        )));
    }
    let t2: Mask = shared.iter().fold(0, |a, &i| a | bit(i));
    let in1: Vec<usize> = shared.iter().map(|&i| m1.index_of(&m2.labels[i]).expect("shared")).collect();
    let t1: Mask = in1.iter().fold(0, |a, &i| a | bit(i));
    if !is_triangle_repr(m1, t1) || !is_triangle_repr(m2, t2) {
        return Err(Error::structural("the common elements are not a triangle on both sides"));
    }
    let w = m2.to_matroid()?;
    // rank-2 wheels have a parallel pair, so only the closure of T is a flat
    if !is_modular_flat(&w, w.closure(t2)) {
        return Err(Error::structural("the common triangle does not span a modular flat of the second matroid"));
    }
    let (ia, ib, ic) = (shared[0], shared[1], shared[2]);
    let mut order = vec![ia, ic];
    order.extend((0..m2.len()).filter(|&i| i != ia && i != ic));
    let cols2: Vec<Vec<u8>> = order.iter().map(|&i| m2.cols[i].clone()).collect();
    let (red, _) = rref(f, m2.rows, &cols2);
    let r2 = red[0].len();
    let bw = &red[order.iter().position(|&i| i == ib).expect("b")];
    let (a1, b1, c1) = (&m1.cols[in1[0]], &m1.cols[in1[1]], &m1.cols[in1[2]]);
    let (red1, _) = rref(f, m1.rows, &[a1.clone(), c1.clone(), b1.clone()]);
    let s = f.div(red1[2][0], bw[0]);
    let t = f.div(red1[2][1], bw[1]);
    let rows = m1.rows + r2 - 2;
    let mut labels = m1.labels.clone();
    let mut cols: Vec<Vec<u8>> = m1
        .cols
        .iter()
        .map(|c| {
            let mut v = c.clone();
            v.resize(rows, 0);
            v
        })
        .collect();
    for (k, &i) in order.iter().enumerate() {
        if t2 & bit(i) != 0 {
            continue;
        }
        let wv = &red[k];
        let (u, v) = (f.mul(wv[0], s), f.mul(wv[1], t));
        let mut col: Vec<u8> = (0..m1.rows).map(|x| f.add(f.mul(u, a1[x]), f.mul(v, c1[x]))).collect();
        col.extend_from_slice(&wv[2..]);
        labels.push(m2.labels[i].clone());
        cols.push(col);
    }
    ReprMatroid::new(f, rows, labels, cols)
}

fn flat_table(m: &Matroid) -> Vec<bool> {
    let g = m.ground();
    (0..=g)
        .map(|x| elements(g & !x).all(|e| m.rank(x | bit(e)) > m.rank(x)))
        .collect()
}

/// `T` is a modular flat: `r(T) + r(F) = r(T ∪ F) + r(T ∩ F)` for every flat `F`.
pub fn is_modular_flat(m: &Matroid, t: Mask) -> bool {
    if m.closure(t) != t {
        return false;
    }
    let rt = m.rank(t);
    let flats = flat_table(m);
    (0..flats.len() as Mask)
        .filter(|&x| flats[x as usize])
        .all(|x| rt + m.rank(x) == m.rank(t | x) + m.rank(t & x))
}

/// Generalized parallel connection from the flats law. The common labels
/// must span a modular flat of `m2` on which both restrictions agree.
pub fn gpc_abstract(m1: &Matroid, m2: &Matroid) -> Result<Matroid> {
    let mut labels: Vec<String> = m1.labels().to_vec();
    labels.extend(m2.labels().iter().filter(|l| m1.index_of(l).is_none()).cloned());
    let n = labels.len();
    if n > RANK_TABLE_LIMIT {
        return Err(Error::ResourceCap(format!("flats-law gluing is limited to {RANK_TABLE_LIMIT} elements")));
    }
    let to1: Vec<Option<usize>> = labels.iter().map(|l| m1.index_of(l)).collect();
    let to2: Vec<Option<usize>> = labels.iter().map(|l| m2.index_of(l)).collect();
    let project = |x: Mask, to: &[Option<usize>]| {
        elements(x).filter_map(|e| to[e]).fold(0 as Mask, |a, i| a | bit(i))
    };
    let t: Mask = (0..n).filter(|&e| to1[e].is_some() && to2[e].is_some()).fold(0, |a, e| a | bit(e));
    let (t1, t2) = (project(t, &to1), project(t, &to2));
    if m1.restrict(t1).basis_labels() != m2.restrict(t2).basis_labels() {
        return Err(Error::structural("the two matroids disagree on their common elements"));
    }
    if !is_modular_flat(m2, t2) {
        return Err(Error::structural("the common set is not a modular flat of the second matroid"));
    }
    let (f1, f2) = (flat_table(m1), flat_table(m2));
    let mut table = vec![u8::MAX; 1 << n];
    for x in 0..(1 as Mask) << n {
        let (x1, x2) = (project(x, &to1), project(x, &to2));
        if f1[x1 as usize] && f2[x2 as usize] {
            table[x as usize] = (m1.rank(x1) + m2.rank(x2) - m1.rank(project(x & t, &to1))) as u8;
        }
    }
    for e in 0..n {
        for x in 0..(1usize << n) {
            if x & (1 << e) == 0 {
                table[x] = table[x].min(table[x | (1 << e)]);
            }
        }
    }
    let r = table[(1 << n) - 1] as usize;
    Ok(Matroid::from_rank_fn(labels, r, |x| table[x as usize] as usize))
}

/// Exhaustive check that the flats of `g` are exactly the sets meeting
/// the ground sets of `m1` and `m2` in flats.
pub fn check_flats_law(g: &Matroid, m1: &Matroid, m2: &Matroid) -> bool {
    let to1: Vec<Option<usize>> = g.labels().iter().map(|l| m1.index_of(l)).collect();
    let to2: Vec<Option<usize>> = g.labels().iter().map(|l| m2.index_of(l)).collect();
    if to1.iter().zip(&to2).any(|(a, b)| a.is_none() && b.is_none()) {
        return false;
    }
    let project = |x: Mask, to: &[Option<usize>]| elements(x).filter_map(|e| to[e]).fold(0 as Mask, |a, i| a | bit(i));
    let (fg, f1, f2) = (flat_table(g), flat_table(m1), flat_table(m2));
    (0..fg.len()).all(|x| fg[x] == (f1[project(x as Mask, &to1) as usize] && f2[project(x as Mask, &to2) as usize]))
}

/// A core matroid with triangles `(a, b, c)`, wheel ranks, and the set of
/// triangle elements deleted after gluing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blueprint {
    pub core: ReprMatroid,
    pub triangles: Vec<[String; 3]>,
    pub ranks: Vec<usize>,
    pub delete: BTreeSet<String>,
}

/// Output of [`glue_wheels`].
#[derive(Clone, Debug)]
pub struct Glued {
    pub repr: ReprMatroid,
    pub matroid: Matroid,
    /// Canonical fan of each wheel, as labels.
    pub fans: Vec<Vec<String>>,
}

impl Blueprint {
    /// Label of position `p` in the sequence `x1, y1, ..., xr, yr` of wheel
    /// `i` at rank `r`; `x1`, `xr`, `yr` are the triangle's `a`, `c`, `b`.
    pub fn position_label(&self, i: usize, p: usize, r: usize) -> String {
        let [a, b, c] = &self.triangles[i];
        if p == 0 {
            a.clone()
        } else if p == 2 * r - 2 {
            c.clone()
        } else if p == 2 * r - 1 {
            b.clone()
        } else if p % 2 == 0 {
            format!("w{}.x{}", i + 1, p / 2 + 1)
        } else {
            format!("w{}.y{}", i + 1, p.div_ceil(2))
        }
    }

    pub fn wheel_sequence(&self, i: usize) -> Vec<String> {
        let r = self.ranks[i];
        (0..2 * r).map(|p| self.position_label(i, p, r)).collect()
    }

    /// `(x1, y1, ..., xr)` minus the deleted set.
    pub fn canonical_fan(&self, i: usize) -> Vec<String> {
        let mut s = self.wheel_sequence(i);
        s.pop();
        s.retain(|l| !self.delete.contains(l));
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.triangles.len() != self.ranks.len() {
            return Err(Error::input("blueprint needs one rank per triangle"));
        }
        let mut on_triangles = BTreeSet::new();
        for (i, t) in self.triangles.iter().enumerate() {
            let mask = self.core.mask_of(t).map_err(|_| Error::input(format!("triangle {} uses unknown elements", i + 1)))?;
            if size(mask) != 3 || !is_triangle_repr(&self.core, mask) {
                return Err(Error::input(format!("{t:?} is not a triangle of the core")));
            }
            if self.ranks[i] < 2 {
                return Err(Error::input(format!("wheel {} has rank below 2", i + 1)));
            }
            on_triangles.extend(t.iter().cloned());
        }
        if let Some(x) = self.delete.iter().find(|x| !on_triangles.contains(*x)) {
            return Err(Error::input(format!("deleted element {x:?} is not on a glued triangle")));
        }
        let ends: BTreeSet<&String> = self.triangles.iter().flat_map(|t| [&t[0], &t[2]]).collect();
        for t in &self.triangles {
            if !self.delete.contains(&t[1]) && !ends.contains(&t[1]) {
                return Err(Error::input(format!("{:?} is kept but is not an end of any triangle", t[1])));
            }
        }
        for l in &self.core.labels {
            if l.starts_with('w') && l.contains('.') {
                return Err(Error::input(format!("core label {l:?} clashes with wheel labels")));
            }
        }
        Ok(())
    }
}

/// Glue a wheel of rank `r(i)` onto each triangle, then delete `X`.
pub fn glue_wheels(bp: &Blueprint) -> Result<Glued> {
    bp.validate()?;
    let mut cur = bp.core.clone();
    for i in 0..bp.triangles.len() {
        let mut w = wheel_over(bp.core.field, bp.ranks[i])?;
        w.labels = bp.wheel_sequence(i);
        cur = gpc_repr(&cur, &w)?;
    }
    let x = cur.mask_of(&bp.delete.iter().collect::<Vec<_>>())?;
    let repr = cur.delete(x);
    let matroid = repr.to_matroid()?;
    let fans = (0..bp.triangles.len()).map(|i| bp.canonical_fan(i)).collect();
    Ok(Glued { repr, matroid, fans })
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Three copies of `M(K4)` glued to the Fano plane along the lines through
/// a common point, keeping only three points of a line that avoids it.
pub fn n12_blueprint() -> Blueprint {
    let labels: Vec<String> = (1..=7).map(|k| k.to_string()).collect();
    let cols = (1..=7u8).map(|k| vec![k & 1, (k >> 1) & 1, (k >> 2) & 1]).collect();
    let core = ReprMatroid::new(PrimeField::GF2, 3, labels, cols).expect("fano");
    Blueprint {
        core,
        triangles: [["2", "1", "3"], ["4", "1", "5"], ["6", "1", "7"]].map(|t| t.map(String::from)).to_vec(),
        ranks: vec![3, 3, 3],
        delete: strs(&["1", "3", "5", "7"]).into_iter().collect(),
    }
}

/// A random blueprint over `core` with at most `max_wheels` triangles and
/// wheel ranks in `2..=max_rank`.
pub fn random_blueprint<R: Rng>(rng: &mut R, core: &ReprMatroid, max_wheels: usize, max_rank: usize) -> Option<Blueprint> {
    let triangles: Vec<Mask> = k_subsets(full(core.len()), 3).filter(|&t| is_triangle_repr(core, t)).collect();
    if triangles.is_empty() {
        return None;
    }
    let count = rng.gen_range(1..=max_wheels.max(1));
    let mut chosen = Vec::new();
    for _ in 0..count {
        let t = *triangles.choose(rng).expect("nonempty");
        let mut ls: Vec<String> = elements(t).map(|e| core.labels[e].clone()).collect();
        ls.shuffle(rng);
        chosen.push([ls[0].clone(), ls[1].clone(), ls[2].clone()]);
    }
    let ranks = (0..count).map(|_| rng.gen_range(2..=max_rank.max(2))).collect();
    let ends: BTreeSet<String> = chosen.iter().flat_map(|t| [t[0].clone(), t[2].clone()]).collect();
    let mut delete = BTreeSet::new();
    for t in &chosen {
        for (k, l) in t.iter().enumerate() {
            let forced = k == 1 && !ends.contains(l);
            if forced || rng.gen_bool(0.5) {
                delete.insert(l.clone());
            }
        }
    }
    Some(Blueprint { core: core.clone(), triangles: chosen, ranks, delete })
}

/// Points added for one fan: `a`, `b`, `c`, and which ends gained a new element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanPlus {
    pub a: Vec<u8>,
    pub b: Vec<u8>,
    pub c: Vec<u8>,
    pub prepend: bool,
    pub append: bool,
}

fn independent(f: PrimeField, rows: usize, vs: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    if vs.is_empty() {
        return vs;
    }
    let (_, piv) = rref(f, rows, &vs);
    piv.into_iter().map(|i| vs[i].clone()).collect()
}

/// The single projective point spanned by both families of vectors.
fn meet(f: PrimeField, rows: usize, u: Vec<Vec<u8>>, v: Vec<Vec<u8>>) -> Result<Vec<u8>> {
    let bu = independent(f, rows, u);
    let bv = independent(f, rows, v);
    let mut cols = bu.clone();
    cols.extend(bv);
    let (red, piv) = rref(f, rows, &cols);
    let free: Vec<usize> = (0..cols.len()).filter(|i| !piv.contains(i)).collect();
    if free.len() != 1 {
        return Err(Error::structural(format!("expected a single common point, the spans meet in rank {}", free.len())));
    }
    let mut x = vec![0u8; cols.len()];
    x[free[0]] = 1;
    for (k, &p) in piv.iter().enumerate() {
        x[p] = f.neg(red[free[0]][k]);
    }
    let mut w = vec![0u8; rows];
    for (i, b) in bu.iter().enumerate() {
        for (wr, &br) in w.iter_mut().zip(b) {
            *wr = f.add(*wr, f.mul(x[i], br));
        }
    }
    Ok(f.normalize(&w))
}

/// The points `a`, `b`, `c` distinguished by a fan of a represented matroid.
pub fn fan_plus(n: &ReprMatroid, fan: &Fan) -> Result<FanPlus> {
    let f = n.field;
    let comp: Vec<Vec<u8>> = (0..n.len()).filter(|&e| fan.set() & bit(e) == 0).map(|e| n.cols[e].clone()).collect();
    if comp.len() < 2 {
        return Err(Error::structural("the complement of the fan has fewer than two elements"));
    }
    let col = |p: usize| n.cols[fan.elems[p]].clone();
    let k = fan.len();
    let end = |p: usize, q: usize| -> Result<(Vec<u8>, bool)> {
        if fan.is_spoke(p) {
            Ok((f.normalize(&col(p)), false))
        } else {
            Ok((meet(f, n.rows, vec![col(p), col(q)], comp.clone())?, true))
        }
    };
    let (a, prepend) = end(0, 1)?;
    let (c, append) = end(k - 1, k - 2)?;
    let rims: Vec<Vec<u8>> = (0..k).filter(|&p| !fan.is_spoke(p)).map(col).collect();
    let b = meet(f, n.rows, rims, comp)?;
    Ok(FanPlus { a, b, c, prepend, append })
}

/// `N⁺`, `Core(N)` and the blueprint that rebuilds `N` from the core.
#[derive(Clone, Debug)]
pub struct CoreResult {
    pub core: ReprMatroid,
    pub augmented: ReprMatroid,
    pub triangles: Vec<[String; 3]>,
    /// `F⁺` for each fan, as labels of the augmented matroid.
    pub plus: Vec<Vec<String>>,
    /// Gluing this blueprint and applying `relabel` gives back `N`.
    pub base: Blueprint,
    pub relabel: BTreeMap<String, String>,
}

fn parallel(f: PrimeField, u: &[u8], v: &[u8]) -> bool {
    u.iter().any(|&x| x != 0) && f.normalize(u) == f.normalize(v)
}

/// Build `N⁺` and `Core(N)` for the fans `fans` (labels of `n`).
pub fn core(n: &ReprMatroid, fans: &[Vec<String>]) -> Result<CoreResult> {
    let nm = n.to_matroid()?;
    check_target(&nm)?;
    let idx = fan_indices(&nm, fans)?;
    let f = n.field;
    let t = idx.len();
    let names = |i: usize| [format!("_a{}", i + 1), format!("_b{}", i + 1), format!("_c{}", i + 1)];
    for i in 0..t {
        if let Some(l) = names(i).iter().find(|l| n.index_of(l).is_some()) {
            return Err(Error::input(format!("label {l:?} is reserved for added points")));
        }
    }
    let mut aug = n.clone();
    let mut plus = Vec::new();
    let mut fan_objs = Vec::new();
    for (i, seq) in idx.iter().enumerate() {
        let fan = is_fan(&nm, seq).expect("validated fan");
        let fp = fan_plus(n, &fan)?;
        let [a, b, c] = names(i);
        aug = aug.with_column(a.clone(), fp.a.clone());
        aug = aug.with_column(b, fp.b.clone());
        aug = aug.with_column(c.clone(), fp.c.clone());
        let mut p = Vec::new();
        if fp.prepend {
            p.push(a);
        }
        p.extend(seq.iter().map(|&e| n.labels[e].clone()));
        if fp.append {
            p.push(c);
        }
        plus.push(p);
        fan_objs.push((fan, fp));
    }
    let in_fans: Mask = idx.iter().flatten().fold(0, |m, &e| m | bit(e));
    let ends: Vec<(String, Vec<u8>)> = (0..t)
        .flat_map(|i| {
            let [a, _, c] = names(i);
            [(a, fan_objs[i].1.a.clone()), (c, fan_objs[i].1.c.clone())]
        })
        .collect();
    let s_set: Vec<usize> = (0..n.len())
        .filter(|&e| in_fans & bit(e) == 0 && ends.iter().any(|(_, v)| parallel(f, &n.cols[e], v)))
        .collect();
    let drop: Mask = in_fans | s_set.iter().fold(0, |m, &e| m | bit(e));
    let mut core_m = aug.delete(drop);
    // Labels of an already glued N would collide with the new wheels.
    let original: Vec<String> = core_m.labels.clone();
    for l in core_m.labels.iter_mut() {
        if l.starts_with('w') && l.contains('.') {
            *l = format!("n:{l}");
        }
    }
    let triangles: Vec<[String; 3]> = (0..t).map(names).collect();
    let ranks: Vec<usize> = plus.iter().map(|p| p.len().div_ceil(2)).collect();
    let mut base = Blueprint { core: core_m.clone(), triangles: triangles.clone(), ranks, delete: BTreeSet::new() };
    let mut relabel = BTreeMap::new();
    for (l, o) in core_m.labels.iter().zip(&original) {
        if !o.starts_with('_') || n.index_of(o).is_some() {
            relabel.insert(l.clone(), o.clone());
        }
    }
    for i in 0..t {
        let r = base.ranks[i];
        for (p, target) in plus[i].iter().enumerate() {
            if n.index_of(target).is_some() {
                relabel.insert(base.position_label(i, p, r), target.clone());
            }
        }
        debug_assert_eq!(plus[i].len(), 2 * r - 1);
    }
    for &s in &s_set {
        let claim = ends
            .iter()
            .find(|(l, v)| !relabel.contains_key(l) && parallel(f, &n.cols[s], v))
            .map(|(l, _)| l.clone())
            .expect("S is parallel to an end");
        relabel.insert(claim, n.labels[s].clone());
    }
    for tr in &triangles {
        for l in tr {
            if !relabel.contains_key(l) {
                base.delete.insert(l.clone());
            }
        }
    }
    Ok(CoreResult { core: core_m, augmented: aug, triangles, plus, base, relabel })
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    /// Check exhaustively that every minor of `M` with an `N`-minor is
    /// 3-connected up to series and parallel sets.
    pub verify_hypotheses: bool,
    pub limits: SearchLimits,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { verify_hypotheses: true, limits: SearchLimits::default() }
    }
}

/// `M` written as wheels glued onto `Core(N)`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub blueprint: Blueprint,
    /// Glued label to label of `M`.
    pub relabel: BTreeMap<String, String>,
    /// Covering family of `M`; member `i` is enclosed in canonical fan `i`.
    pub family: Vec<Vec<String>>,
    pub core: CoreResult,
}

#[derive(Clone, Debug)]
struct PeelState {
    c: Mask,
    d: Mask,
    family: Vec<Fan>,
}

struct Peeler<'a> {
    m: &'a Matroid,
    anchor: &'a Anchor,
    rank_n: usize,
    failed: HashSet<(Mask, Mask, Vec<Vec<usize>>)>,
    states: usize,
    limits: SearchLimits,
}

impl Peeler<'_> {
    fn is_cover<R: RankFn + ?Sized>(&self, v: &R, family: &[Fan]) -> bool {
        let used = family.iter().fold(0, |a, f| a | f.set());
        v.ground() & !self.anchor.image & !used == 0
            && self.anchor.targets.iter().all(|t| family.iter().any(|f| is_consistent(t, &f.elems)))
    }

    fn run(&mut self, c: Mask, d: Mask, family: Vec<Fan>) -> Result<Option<Vec<PeelState>>> {
        let v = self.m.view(c, d);
        let here = PeelState { c, d, family: family.clone() };
        if v.ground() == self.anchor.image {
            let ok = v.total_rank() == self.rank_n
                && minor_bases(self.m, c, v.ground(), self.rank_n) == self.anchor.bases;
            return Ok(ok.then(|| vec![here]));
        }
        let key = (c, d, family.iter().map(|f| f.elems.clone()).collect());
        if self.failed.contains(&key) {
            return Ok(None);
        }
        self.states += 1;
        if self.states > self.limits.max_states {
            return Err(Error::ResourceCap(format!("decomposition visited more than {} states", self.limits.max_states)));
        }
        for j in (0..family.len()).rev() {
            for mv in shortening_moves(&family[j], self.anchor.image) {
                let (c2, d2) = (c | mv.contract, d | mv.delete);
                let v2 = self.m.view(c2, d2);
                if !v2.is_3connected() {
                    continue;
                }
                let Some(short) = is_fan(&v2, &mv.shortened) else { continue };
                let mut next = Vec::with_capacity(family.len());
                let mut ok = true;
                for (k, f) in family.iter().enumerate() {
                    let g = if k == j { Some(short.canonical()) } else { is_fan(&v2, &f.elems) };
                    match g {
                        Some(g) => next.push(g),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok || !self.is_cover(&v2, &next) {
                    continue;
                }
                if let Some(mut chain) = self.run(c2, d2, next)? {
                    chain.insert(0, here);
                    return Ok(Some(chain));
                }
            }
        }
        self.failed.insert(key);
        Ok(None)
    }
}

/// Mutable replay state: the blueprint and where each glued label sits in `M`.
#[derive(Clone)]
struct Replay {
    bp: Blueprint,
    assign: BTreeMap<String, usize>,
}

fn glued_matches(m: &Matroid, st: &PeelState, r: &Replay) -> Result<bool> {
    let g = glue_wheels(&r.bp)?;
    let mut to_m = Vec::with_capacity(g.matroid.len());
    for l in g.matroid.labels() {
        match r.assign.get(l) {
            Some(&e) => to_m.push(e),
            None => return Ok(false),
        }
    }
    let v = m.view(st.c, st.d);
    let image = to_m.iter().fold(0, |a, &e| a | bit(e));
    if image != v.ground() || to_m.len() != size(image) || g.matroid.full_rank() != v.total_rank() {
        return Ok(false);
    }
    let mut mapped: Vec<Mask> = g
        .matroid
        .bases()
        .iter()
        .map(|&b| elements(b).fold(0, |a, e| a | bit(to_m[e])))
        .collect();
    mapped.sort_unstable();
    let mut want = minor_bases(m, st.c, v.ground(), v.total_rank());
    want.sort_unstable();
    if mapped != want {
        return Ok(false);
    }
    Ok(enclosed(st, r))
}

fn enclosed(st: &PeelState, r: &Replay) -> bool {
    st.family.iter().enumerate().all(|(i, f)| {
        let canon: Vec<usize> = r.bp.canonical_fan(i).iter().filter_map(|l| r.assign.get(l).copied()).collect();
        is_enclosed(&f.elems, &canon)
    })
}

/// Candidate replays of one lengthening of wheel `j` adding `added`.
fn edits(r: &Replay, j: usize, added: &[usize]) -> Vec<Replay> {
    let rank = r.bp.ranks[j];
    let mut out = Vec::new();
    for ins in std::iter::once(None).chain((0..2 * rank).map(Some)) {
        let r2 = rank + ins.is_some() as usize;
        let mut bp = r.bp.clone();
        bp.ranks[j] = r2;
        let mut assign = r.assign.clone();
        let old: Vec<String> = r.bp.wheel_sequence(j);
        let mut moved = Vec::new();
        for (p, l) in old.iter().enumerate() {
            if let Some(e) = assign.remove(l) {
                let q = match ins {
                    Some(t) if p >= t => p + 2,
                    _ => p,
                };
                moved.push((q, e));
            }
        }
        for (q, e) in moved {
            assign.insert(bp.position_label(j, q, r2), e);
        }
        let vacant: Vec<usize> = (0..2 * r2 - 1).filter(|&q| !assign.contains_key(&bp.position_label(j, q, r2))).collect();
        let required: Vec<usize> = vacant.iter().copied().filter(|&q| q != 0 && q != 2 * r2 - 2).collect();
        if required.len() > added.len() || vacant.len() < added.len() {
            continue;
        }
        let mut fills: Vec<Vec<usize>> = Vec::new();
        choose_injective(&vacant, added.len(), &mut Vec::new(), &mut fills);
        for fill in fills {
            if !required.iter().all(|q| fill.contains(q)) {
                continue;
            }
            let mut a2 = assign.clone();
            for (&q, &e) in fill.iter().zip(added) {
                a2.insert(bp.position_label(j, q, r2), e);
            }
            let mut bp2 = bp.clone();
            for l in &bp2.triangles[j].clone() {
                bp2.delete.remove(l);
                if !a2.contains_key(l) {
                    bp2.delete.insert(l.clone());
                }
            }
            out.push(Replay { bp: bp2, assign: a2 });
        }
    }
    out
}

fn choose_injective(pool: &[usize], k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for &q in pool {
        if !cur.contains(&q) {
            cur.push(q);
            choose_injective(pool, k, cur, out);
            cur.pop();
        }
    }
}

fn replay_from(m: &Matroid, chain: &[PeelState], k: usize, r: Replay, budget: &mut usize) -> Result<Option<Replay>> {
    if k == 0 {
        return Ok(Some(r));
    }
    if *budget == 0 {
        return Err(Error::ResourceCap("decomposition replay budget exhausted".into()));
    }
    *budget -= 1;
    let (small, big) = (&chain[k], &chain[k - 1]);
    let j = (0..big.family.len()).find(|&i| big.family[i].elems != small.family[i].elems).unwrap_or(0);
    let added: Vec<usize> = elements(m.view(big.c, big.d).ground() & !m.view(small.c, small.d).ground()).collect();
    for cand in edits(&r, j, &added) {
        if glued_matches(m, big, &cand)? {
            if let Some(done) = replay_from(m, chain, k - 1, cand, budget)? {
                return Ok(Some(done));
            }
        }
    }
    Ok(None)
}

/// Write `m` as wheels glued onto `Core(N)`, where `n` is given by a
/// representation and `fans_n` are labels of `n`.
pub fn decompose(
    m: &Matroid,
    n: &ReprMatroid,
    fans_n: &[Vec<String>],
    witness: Option<&MinorWitness>,
    opts: DecomposeOptions,
) -> Result<Decomposition> {
    let nm = n.to_matroid()?;
    check_target(&nm)?;
    let fans_idx = fan_indices(&nm, fans_n)?;
    if fan_contains_two(&nm, &fans_idx) {
        return Err(Error::input("a fan of N contains two members of the fan family"));
    }
    if !m.is_3connected() {
        return Err(Error::input("M must be 3-connected"));
    }
    if opts.verify_hypotheses && !hereditary_sp(m, &nm) {
        return Err(Error::input("some minor of M with an N-minor is not 3-connected up to series and parallel sets"));
    }
    let anchor_list = match witness {
        Some(w) => {
            if !w.verify(m, &nm) {
                return Err(Error::input("minor witness does not realize N inside M"));
            }
            vec![Anchor::from_witness(m, &nm, &fans_idx, w)]
        }
        None => anchors(m, &nm, &fans_idx),
    };
    let mut any_family = false;
    let mut budget = opts.limits.max_states;
    for anchor in &anchor_list {
        for family in covering_families_in(m, &anchor.problem()) {
            any_family = true;
            let mut peeler = Peeler {
                m,
                anchor,
                rank_n: nm.full_rank(),
                failed: HashSet::new(),
                states: 0,
                limits: opts.limits,
            };
            let Some(chain) = peeler.run(0, 0, family)? else { continue };
            if let Some(d) = rebuild(m, n, &nm, anchor, &chain, &mut budget)? {
                return Ok(d);
            }
        }
    }
    if any_family {
        Err(Error::structural("no decomposition into glued wheels was found"))
    } else {
        Err(Error::structural("M has no covering family"))
    }
}

fn rebuild(
    m: &Matroid,
    n: &ReprMatroid,
    nm: &Matroid,
    anchor: &Anchor,
    chain: &[PeelState],
    budget: &mut usize,
) -> Result<Option<Decomposition>> {
    let base = chain.last().expect("nonempty chain");
    let mut inv = vec![usize::MAX; m.len()];
    for (i, &e) in anchor.witness.map.iter().enumerate() {
        inv[e] = i;
    }
    let fans0: Vec<Vec<String>> =
        base.family.iter().map(|f| f.elems.iter().map(|&e| nm.label(inv[e]).to_string()).collect()).collect();
    let core_res = core(n, &fans0)?;
    let mut assign = BTreeMap::new();
    for (g, l) in &core_res.relabel {
        let i = nm.index_of(l).expect("label of N");
        assign.insert(g.clone(), anchor.witness.map[i]);
    }
    let start = Replay { bp: core_res.base.clone(), assign };
    if !glued_matches(m, base, &start)? {
        return Err(Error::structural("gluing wheels onto the core does not rebuild N"));
    }
    let Some(done) = replay_from(m, chain, chain.len() - 1, start, budget)? else {
        return Ok(None);
    };
    let top = &chain[0];
    let relabel = least_relabeling(m, top, &done)?;
    let family = top.family.iter().map(|f| f.labels(m)).collect();
    Ok(Some(Decomposition { blueprint: done.bp, relabel, family, core: core_res }))
}

/// Among relabelings that differ by an automorphism of the glued matroid
/// and keep the family enclosed, the lexicographically least.
fn least_relabeling(m: &Matroid, top: &PeelState, r: &Replay) -> Result<BTreeMap<String, String>> {
    let g = glue_wheels(&r.bp)?;
    let gl = g.matroid.labels();
    let mut best: Option<Vec<usize>> = None;
    for sigma in automorphisms(&g.matroid) {
        let assign: BTreeMap<String, usize> =
            gl.iter().enumerate().map(|(i, l)| (l.clone(), r.assign[&gl[sigma[i]]])).collect();
        let cand = Replay { bp: r.bp.clone(), assign };
        if !enclosed(top, &cand) {
            continue;
        }
        let key: Vec<usize> = gl.iter().map(|l| cand.assign[l]).collect();
        let better = match &best {
            None => true,
            Some(b) => key.iter().map(|&e| m.label(e)).lt(b.iter().map(|&e| m.label(e))),
        };
        if better {
            best = Some(key);
        }
    }
    let key = best.unwrap_or_else(|| gl.iter().map(|l| r.assign[l]).collect());
    Ok(gl.iter().zip(key).map(|(l, e)| (l.clone(), m.label(e).to_string())).collect())
}
