//! Finite matroids stored by their basis family.
//!
//! Every structural query reduces to rank evaluations. Ground sets carry at
//! most [`MAX_ELEMENTS`] elements; for ground sets of up to
//! [`RANK_TABLE_LIMIT`] elements a full rank table is built lazily, which
//! makes rank queries a single lookup.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::bits::{self, bit, elements, full, k_subsets, size, submasks, Mask};
use crate::error::{Error, Result};

pub const MAX_ELEMENTS: usize = 24;
pub const RANK_TABLE_LIMIT: usize = 20;

/// Anything with a rank function on a subset of an indexed ground set.
///
/// Masks passed to [`RankFn::rank`] must lie inside [`RankFn::ground`].
pub trait RankFn {
    fn ground(&self) -> Mask;
    fn rank(&self, set: Mask) -> usize;

    fn total_rank(&self) -> usize {
        self.rank(self.ground())
    }

    /// Rank in the dual: `|X| + r(E - X) - r(E)`.
    fn corank(&self, set: Mask) -> usize {
        size(set) + self.rank(self.ground() & !set) - self.total_rank()
    }

    /// Connectivity function `r(X) + r(E - X) - r(E)`.
    fn lambda(&self, set: Mask) -> usize {
        self.rank(set) + self.rank(self.ground() & !set) - self.total_rank()
    }
}

/// Structural queries shared by matroids and minor views.
pub trait Structure: RankFn {
    fn is_independent(&self, set: Mask) -> bool {
        self.rank(set) == size(set)
    }

    fn is_circuit(&self, set: Mask) -> bool {
        let k = size(set);
        k > 0 && self.rank(set) == k - 1 && elements(set).all(|e| self.rank(set & !bit(e)) == k - 1)
    }

    fn is_cocircuit(&self, set: Mask) -> bool {
        let k = size(set);
        k > 0
            && self.corank(set) == k - 1
            && elements(set).all(|e| self.corank(set & !bit(e)) == k - 1)
    }

    fn is_triangle(&self, set: Mask) -> bool {
        size(set) == 3 && self.rank(set) == 2 && elements(set).all(|e| self.rank(set & !bit(e)) == 2)
    }

    fn is_triad(&self, set: Mask) -> bool {
        size(set) == 3
            && self.corank(set) == 2
            && elements(set).all(|e| self.corank(set & !bit(e)) == 2)
    }

    /// All circuits, ordered by size and then lexicographically.
    fn circuits(&self) -> Vec<Mask> {
        let g = self.ground();
        let mut out = Vec::new();
        for k in 1..=size(g) {
            out.extend(k_subsets(g, k).filter(|&s| self.is_circuit(s)));
        }
        out
    }

    fn circuits_of_size(&self, k: usize) -> Vec<Mask> {
        k_subsets(self.ground(), k).filter(|&s| self.is_circuit(s)).collect()
    }

    fn cocircuits_of_size(&self, k: usize) -> Vec<Mask> {
        k_subsets(self.ground(), k).filter(|&s| self.is_cocircuit(s)).collect()
    }

    fn triangles(&self) -> Vec<Mask> {
        k_subsets(self.ground(), 3).filter(|&s| self.is_triangle(s)).collect()
    }

    fn triads(&self) -> Vec<Mask> {
        k_subsets(self.ground(), 3).filter(|&s| self.is_triad(s)).collect()
    }

    fn closure(&self, set: Mask) -> Mask {
        let r = self.rank(set);
        let rest = self.ground() & !set;
        elements(rest).filter(|&e| self.rank(set | bit(e)) == r).fold(set, |m, e| m | bit(e))
    }

    fn coclosure(&self, set: Mask) -> Mask {
        let r = self.corank(set);
        let rest = self.ground() & !set;
        elements(rest).filter(|&e| self.corank(set | bit(e)) == r).fold(set, |m, e| m | bit(e))
    }

    fn is_loop(&self, e: usize) -> bool {
        self.rank(bit(e)) == 0
    }

    fn is_coloop(&self, e: usize) -> bool {
        self.corank(bit(e)) == 0
    }

    /// A set `X` with `lambda(X) < k` and both sides of size at least `k`,
    /// with `X` containing the least ground element.
    fn find_separation(&self, k: usize) -> Option<Mask> {
        let g = self.ground();
        if g == 0 {
            return None;
        }
        let low = bit(g.trailing_zeros() as usize);
        let rest = g & !low;
        for s in submasks(rest) {
            let x = s | low;
            if x == g {
                continue;
            }
            let (a, b) = (size(x), size(g & !x));
            if a >= k && b >= k && self.lambda(x) < k {
                return Some(x);
            }
        }
        None
    }

    fn is_connected(&self) -> bool {
        self.find_separation(1).is_none()
    }

    /// No 1- or 2-separations.
    fn is_3connected(&self) -> bool {
        self.is_connected() && self.find_separation(2).is_none()
    }

    /// Connected, and every 2-separation has a side of rank one or of corank one.
    fn is_3conn_up_to_sp(&self) -> bool {
        if !self.is_connected() {
            return false;
        }
        let g = self.ground();
        let low = bit(g.trailing_zeros() as usize);
        for s in submasks(g & !low) {
            let x = s | low;
            let y = g & !x;
            if size(x) < 2 || size(y) < 2 || self.lambda(x) != 1 {
                continue;
            }
            let r_ok = self.rank(x).min(self.rank(y)) == 1;
            let c_ok = self.corank(x).min(self.corank(y)) == 1;
            if !r_ok && !c_ok {
                return false;
            }
        }
        true
    }

    /// Parallel classes of the non-loop elements; each loop forms its own class.
    fn parallel_classes(&self) -> Result<Vec<Mask>> {
        if !self.is_connected() {
            return Err(Error::structural("parallel classes requested for a disconnected matroid"));
        }
        Ok(classes_by(self.ground(), |e| self.rank(bit(e)) == 0, |e, f| self.rank(bit(e) | bit(f)) == 1))
    }

    fn series_classes(&self) -> Result<Vec<Mask>> {
        if !self.is_connected() {
            return Err(Error::structural("series classes requested for a disconnected matroid"));
        }
        Ok(classes_by(
            self.ground(),
            |e| self.corank(bit(e)) == 0,
            |e, f| self.corank(bit(e) | bit(f)) == 1,
        ))
    }
}

impl<T: RankFn + ?Sized> Structure for T {}

fn classes_by(
    ground: Mask,
    isolated: impl Fn(usize) -> bool,
    related: impl Fn(usize, usize) -> bool,
) -> Vec<Mask> {
    let mut out = Vec::new();
    let mut seen = 0;
    for e in elements(ground) {
        if seen & bit(e) != 0 {
            continue;
        }
        let mut class = bit(e);
        if !isolated(e) {
            for f in elements(ground & !full(e + 1)) {
                if seen & bit(f) == 0 && !isolated(f) && related(e, f) {
                    class |= bit(f);
                }
            }
        }
        seen |= class;
        out.push(class);
    }
    out
}

/// A matroid on a labeled, ordered ground set, given by its bases.
#[derive(Clone)]
pub struct Matroid {
    labels: Vec<String>,
    rank: usize,
    bases: Vec<Mask>,
    table: OnceLock<Arc<Vec<u8>>>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Matroid {{ elements: {:?}, rank: {}, bases: {} }}",
            self.labels,
            self.rank,
            self.bases.len()
        )
    }
}

impl RankFn for Matroid {
    fn ground(&self) -> Mask {
        full(self.labels.len())
    }

    fn rank(&self, set: Mask) -> usize {
        match self.rank_table() {
            Some(t) => t[set as usize] as usize,
            None => self.bases.iter().map(|&b| size(b & set)).max().unwrap_or(0),
        }
    }

    fn total_rank(&self) -> usize {
        self.rank
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.len() > MAX_ELEMENTS {
        return Err(Error::input(format!(
            "ground set has {} elements; at most {MAX_ELEMENTS} are supported",
            labels.len()
        )));
    }
    let mut seen = HashSet::new();
    for l in labels {
        if l.is_empty() || l.chars().any(char::is_whitespace) || l.starts_with('#') {
            return Err(Error::input(format!("invalid element label {l:?}")));
        }
        if !seen.insert(l.as_str()) {
            return Err(Error::input(format!("duplicate element label {l:?}")));
        }
    }
    Ok(())
}

impl Matroid {
    /// Build from basis masks, checking every matroid axiom.
    pub fn from_basis_masks(labels: Vec<String>, bases: Vec<Mask>) -> Result<Self> {
        check_labels(&labels)?;
        let g = full(labels.len());
        if bases.is_empty() {
            return Err(Error::input("a matroid needs at least one basis"));
        }
        if bases.iter().any(|&b| b & !g != 0) {
            return Err(Error::input("basis mentions an element outside the ground set"));
        }
        let r = size(bases[0]);
        if bases.iter().any(|&b| size(b) != r) {
            return Err(Error::input("bases have different sizes"));
        }
        let m = Self::from_masks_unchecked(labels, bases);
        m.validate()?;
        Ok(m)
    }

    pub fn from_bases<S: AsRef<str>>(labels: Vec<String>, bases: &[Vec<S>]) -> Result<Self> {
        let index: BTreeMap<&str, usize> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut masks = Vec::with_capacity(bases.len());
        for b in bases {
            let mut m = 0;
            for l in b {
                let i = index
                    .get(l.as_ref())
                    .ok_or_else(|| Error::input(format!("unknown element {:?}", l.as_ref())))?;
                if m & bit(*i) != 0 {
                    return Err(Error::input(format!("repeated element {:?} in basis", l.as_ref())));
                }
                m |= bit(*i);
            }
            masks.push(m);
        }
        Self::from_basis_masks(labels, masks)
    }

    /// Caller guarantees the masks form a basis family on `labels`.
    pub(crate) fn from_masks_unchecked(labels: Vec<String>, mut bases: Vec<Mask>) -> Self {
        bases.sort_unstable();
        bases.dedup();
        let rank = bases.first().map_or(0, |&b| size(b));
        Matroid { labels, rank, bases, table: OnceLock::new() }
    }

    /// The matroid whose bases are the `rank`-subsets on which `f` equals `rank`.
    pub(crate) fn from_rank_fn(labels: Vec<String>, rank: usize, f: impl Fn(Mask) -> usize) -> Self {
        let g = full(labels.len());
        let bases = k_subsets(g, rank).filter(|&s| f(s) == rank).collect();
        Self::from_masks_unchecked(labels, bases)
    }

    /// The uniform matroid `U_{r,n}` on labels `a, b, c, ...` (or `e1..en` past 26).
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r > n || n > MAX_ELEMENTS {
            return Err(Error::input(format!("no uniform matroid U({r},{n}) in range")));
        }
        let labels = default_labels(n);
        Ok(Self::from_masks_unchecked(labels, k_subsets(full(n), r).collect()))
    }

    /// Check the basis-exchange axiom (through submodularity of the derived
    /// rank function when a rank table is available).
    pub fn validate(&self) -> Result<()> {
        check_labels(&self.labels)?;
        let n = self.labels.len();
        if self.bases.is_empty() {
            return Err(Error::input("empty basis family"));
        }
        if n <= RANK_TABLE_LIMIT {
            // max |B ∩ X| is a matroid rank function iff the family is a basis family
            let t = self.rank_table().expect("table below limit");
            let g = full(n);
            for x in 0..=g {
                let rx = t[x as usize];
                for e in elements(g & !x) {
                    let re = t[(x | bit(e)) as usize];
                    if re < rx || re > rx + 1 {
                        return Err(Error::input("rank function is not unit-increasing"));
                    }
                    for f in elements(g & !x & !full(e + 1)) {
                        let rf = t[(x | bit(f)) as usize];
                        let ref_ = t[(x | bit(e) | bit(f)) as usize];
                        if re + rf < ref_ + rx {
                            return Err(Error::input("basis family violates the exchange axiom"));
                        }
                    }
                }
            }
        } else {
            let set: HashSet<Mask> = self.bases.iter().copied().collect();
            for &b1 in &self.bases {
                for &b2 in &self.bases {
                    for x in elements(b1 & !b2) {
                        let ok = elements(b2 & !b1).any(|y| set.contains(&((b1 & !bit(x)) | bit(y))));
                        if !ok {
                            return Err(Error::input("basis family violates the exchange axiom"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn rank_table(&self) -> Option<&Arc<Vec<u8>>> {
        let n = self.labels.len();
        if n > RANK_TABLE_LIMIT {
            return None;
        }
        Some(self.table.get_or_init(|| Arc::new(build_rank_table(n, &self.bases))))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Rank of the whole matroid.
    pub fn full_rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[Mask] {
        &self.bases
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Mask> {
        let mut m = 0;
        for l in labels {
            let i = self
                .index_of(l.as_ref())
                .ok_or_else(|| Error::input(format!("unknown element {:?}", l.as_ref())))?;
            m |= bit(i);
        }
        Ok(m)
    }

    pub fn labels_of(&self, mask: Mask) -> Vec<String> {
        elements(mask).map(|i| self.labels[i].clone()).collect()
    }

    /// Rank of a labeled subset.
    pub fn rank_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        Ok(self.rank(self.mask_of(labels)?))
    }

    pub fn dual(&self) -> Matroid {
        let g = self.ground();
        let bases = self.bases.iter().map(|&b| g & !b).collect();
        Self::from_masks_unchecked(self.labels.clone(), bases)
    }

    pub fn delete(&self, set: Mask) -> Matroid {
        self.minor(0, set)
    }

    pub fn contract(&self, set: Mask) -> Matroid {
        self.minor(set, 0)
    }

    /// `M / contract \ delete`; the sets must be disjoint.
    pub fn minor(&self, contract: Mask, delete: Mask) -> Matroid {
        debug_assert_eq!(contract & delete, 0);
        let g = self.ground();
        let keep = g & !contract & !delete;
        let mut cur: Vec<Mask> = self.bases.clone();
        if contract != 0 {
            let best = cur.iter().map(|&b| size(b & contract)).max().unwrap_or(0);
            cur.retain(|&b| size(b & contract) == best);
            for b in &mut cur {
                *b &= !contract;
            }
        }
        if delete != 0 {
            let least = cur.iter().map(|&b| size(b & delete)).min().unwrap_or(0);
            cur.retain(|&b| size(b & delete) == least);
        }
        let bases = cur.into_iter().map(|b| bits::compress(b & keep, keep)).collect();
        let labels = elements(keep).map(|i| self.labels[i].clone()).collect();
        Self::from_masks_unchecked(labels, bases)
    }

    pub fn restrict(&self, set: Mask) -> Matroid {
        self.delete(self.ground() & !set)
    }

    pub fn delete_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Matroid> {
        Ok(self.delete(self.mask_of(labels)?))
    }

    pub fn contract_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Matroid> {
        Ok(self.contract(self.mask_of(labels)?))
    }

    /// A rank-function view of `M / contract \ delete` in this matroid's index space.
    pub fn view(&self, contract: Mask, delete: Mask) -> MinorView<'_> {
        MinorView::new(self, contract, delete)
    }

    /// Same matroid with labels replaced position-wise.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Matroid> {
        if labels.len() != self.labels.len() {
            return Err(Error::input("relabeling has the wrong number of labels"));
        }
        check_labels(&labels)?;
        let mut m = self.clone();
        m.labels = labels;
        Ok(m)
    }

    /// Rename elements through `map`; unmapped labels stay.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Result<Matroid> {
        let labels = self.labels.iter().map(|l| map.get(l).cloned().unwrap_or_else(|| l.clone())).collect();
        self.with_labels(labels)
    }

    /// The same matroid with its ground set listed in the order `order`
    /// (a permutation of indices).
    pub fn reorder(&self, order: &[usize]) -> Matroid {
        let mut pos = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let bases = self
            .bases
            .iter()
            .map(|&b| elements(b).fold(0, |m, i| m | bit(pos[i])))
            .collect();
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        Self::from_masks_unchecked(labels, bases)
    }

    /// The basis family as sorted label lists.
    pub fn basis_labels(&self) -> BTreeSet<Vec<String>> {
        self.bases
            .iter()
            .map(|&b| {
                let mut v = self.labels_of(b);
                v.sort();
                v
            })
            .collect()
    }

    /// Delete loops and all but the least label of every parallel class.
    pub fn simplify(&self) -> Matroid {
        let mut drop = 0;
        for e in 0..self.len() {
            if self.is_loop(e) {
                drop |= bit(e);
            }
        }
        for e in 0..self.len() {
            if drop & bit(e) != 0 {
                continue;
            }
            for f in 0..self.len() {
                if f != e
                    && drop & bit(f) == 0
                    && self.rank(bit(e) | bit(f)) == 1
                    && self.labels[f] < self.labels[e]
                {
                    drop |= bit(e);
                    break;
                }
            }
        }
        self.delete(drop)
    }

    /// Dual of [`Matroid::simplify`]: contract coloops and all but one element of each series class.
    pub fn cosimplify(&self) -> Matroid {
        self.dual().simplify().dual()
    }
}

impl PartialEq for Matroid {
    /// Equality as matroids on labeled ground sets, independent of element order.
    fn eq(&self, other: &Self) -> bool {
        if self.labels.len() != other.labels.len() || self.rank != other.rank || self.bases.len() != other.bases.len() {
            return false;
        }
        let mut pos = Vec::with_capacity(self.labels.len());
        for l in &other.labels {
            match self.index_of(l) {
                Some(i) => pos.push(i),
                None => return false,
            }
        }
        let mut mapped: Vec<Mask> = other
            .bases
            .iter()
            .map(|&b| elements(b).fold(0, |m, i| m | bit(pos[i])))
            .collect();
        mapped.sort_unstable();
        mapped == self.bases
    }
}

impl Eq for Matroid {}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=n).map(|i| format!("e{i}")).collect()
    }
}

fn build_rank_table(n: usize, bases: &[Mask]) -> Vec<u8> {
    let len = 1usize << n;
    let mut indep = vec![false; len];
    for &b in bases {
        indep[b as usize] = true;
    }
    for i in 0..n {
        let bi = 1usize << i;
        for x in 0..len {
            if x & bi == 0 && indep[x | bi] {
                indep[x] = true;
            }
        }
    }
    let mut rank = vec![0u8; len];
    for x in 1..len {
        if indep[x] {
            rank[x] = (x as u32).count_ones() as u8;
        } else {
            let mut best = 0;
            let mut rest = x;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                best = best.max(rank[x & !low]);
                rest &= rest - 1;
            }
            rank[x] = best;
        }
    }
    rank
}

/// `M / C \ D` evaluated through the parent's rank function, keeping the
/// parent's element indices.
#[derive(Clone, Copy)]
pub struct MinorView<'a> {
    parent: &'a Matroid,
    contract: Mask,
    delete: Mask,
    ground: Mask,
    rc: usize,
}

impl<'a> MinorView<'a> {
    pub fn new(parent: &'a Matroid, contract: Mask, delete: Mask) -> Self {
        let ground = parent.ground() & !contract & !delete;
        MinorView { parent, contract, delete, ground, rc: parent.rank(contract) }
    }

    pub fn parent(&self) -> &'a Matroid {
        self.parent
    }

    pub fn contracted(&self) -> Mask {
        self.contract
    }

    pub fn deleted(&self) -> Mask {
        self.delete
    }

    pub fn materialize(&self) -> Matroid {
        self.parent.minor(self.contract, self.delete)
    }
}

impl RankFn for MinorView<'_> {
    fn ground(&self) -> Mask {
        self.ground
    }

    fn rank(&self, set: Mask) -> usize {
        self.parent.rank(set | self.contract) - self.rc
    }
}
