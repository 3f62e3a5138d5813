//! Deciding whether a matroid is a fan-extension of `N`.
//!
//! For every way of seeing `N` inside `M` the search walks backwards over
//! fan-shortening moves. A state is a minor `M / C \ D` in the index space of
//! `M`; a move is usable when the smaller matroid is 3-connected and the
//! shortened fan belongs to one of its covering families. The search
//! succeeds when it reaches the embedded copy of `N` itself.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use crate::bits::{bit, k_subsets, Mask};
use crate::error::{Error, Result};
use crate::fans::{all_fans, find_covering_family, is_fan, shortening_moves, CoverProblem, Fan, MoveKind};
use crate::iso::{for_each_minor, has_minor, MinorWitness};
use crate::matroid::{Matroid, RankFn, Structure};
use crate::wheels::is_wheel_or_whirl;

/// One fan-lengthening step, from `M / contract \ delete` to the next state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: MoveKind,
    /// The elements added by the move, in fan order.
    pub added: Vec<usize>,
    /// The smaller matroid, as a minor of the top matroid.
    pub contract: Mask,
    pub delete: Mask,
    /// Covering family of the smaller matroid containing the fan that is lengthened.
    pub family: Vec<Vec<usize>>,
    /// Index into `family` of the lengthened fan.
    pub fan_index: usize,
    /// The fan after lengthening.
    pub lengthened: Vec<usize>,
}

/// A successful recognition: the copy of `N` used and the moves from it to `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub witness: MinorWitness,
    pub steps: Vec<Step>,
}

impl Trace {
    /// One line per move: `lengthen <kind> <elements> at <fan-index>`.
    pub fn lines(&self, m: &Matroid) -> Vec<String> {
        self.steps
            .iter()
            .map(|s| {
                let els: Vec<&str> = s.added.iter().map(|&e| m.label(e)).collect();
                format!("lengthen {} {} at {}", s.kind.name(), els.join(" "), s.fan_index)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    /// Maximum number of distinct states visited before aborting.
    pub max_states: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_states: 1_000_000 }
    }
}

/// Check the hypotheses placed on `N`: 3-connected, at least four
/// elements, neither a wheel nor a whirl.
pub fn check_target(n: &Matroid) -> Result<()> {
    if n.len() < 4 {
        return Err(Error::input("N must have at least four elements"));
    }
    if !n.is_3connected() {
        return Err(Error::input("N must be 3-connected"));
    }
    if is_wheel_or_whirl(n) {
        return Err(Error::input("N must be neither a wheel nor a whirl"));
    }
    Ok(())
}

/// One way of seeing `N` inside `M`, up to the data the search depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub image: Mask,
    /// Images of the fans of `N`, each oriented with the smaller endpoint first.
    pub targets: Vec<Vec<usize>>,
    /// Bases of the embedded copy of `N`, in the index space of `M`.
    pub bases: Vec<Mask>,
    pub witness: MinorWitness,
}

impl Anchor {
    pub fn problem(&self) -> CoverProblem {
        CoverProblem { anchor: self.image, targets: self.targets.clone() }
    }
}

fn orient(f: Vec<usize>) -> Vec<usize> {
    if f.first() <= f.last() {
        f
    } else {
        f.into_iter().rev().collect()
    }
}

pub(crate) fn minor_bases(m: &Matroid, contract: Mask, ground: Mask, r: usize) -> Vec<Mask> {
    let rc = m.rank(contract);
    k_subsets(ground, r).filter(|&x| m.rank(x | contract) - rc == r).collect()
}

impl Anchor {
    /// The anchor of a single minor witness.
    pub fn from_witness(m: &Matroid, n: &Matroid, fans_n: &[Vec<usize>], w: &MinorWitness) -> Anchor {
        let image = w.image();
        Anchor {
            image,
            targets: fans_n.iter().map(|f| orient(f.iter().map(|&i| w.map[i]).collect())).collect(),
            bases: minor_bases(m, w.contract, image, n.full_rank()),
            witness: w.clone(),
        }
    }
}

/// Every distinct anchor of `n` in `m`, in a fixed order.
pub fn anchors(m: &Matroid, n: &Matroid, fans_n: &[Vec<usize>]) -> Vec<Anchor> {
    let mut seen: BTreeMap<(Mask, Vec<Vec<usize>>, Vec<Mask>), MinorWitness> = BTreeMap::new();
    let _ = for_each_minor(m, n, true, |w| {
        let a = Anchor::from_witness(m, n, fans_n, w);
        seen.entry((a.image, a.targets, a.bases)).or_insert(a.witness);
        ControlFlow::Continue(())
    });
    seen.into_iter()
        .map(|((image, targets, bases), witness)| Anchor { image, targets, bases, witness })
        .collect()
}

struct Search<'a> {
    m: &'a Matroid,
    anchor: &'a Anchor,
    problem: CoverProblem,
    rank_n: usize,
    memo: HashMap<(Mask, Mask), Option<Vec<Step>>>,
    conn: HashMap<(Mask, Mask), bool>,
    states: &'a mut usize,
    limits: SearchLimits,
}

impl Search<'_> {
    fn three_connected(&mut self, c: Mask, d: Mask) -> bool {
        let m = self.m;
        *self.conn.entry((c, d)).or_insert_with(|| m.view(c, d).is_3connected())
    }

    fn is_base(&self, c: Mask, d: Mask) -> bool {
        let v = self.m.view(c, d);
        v.ground() == self.anchor.image
            && v.total_rank() == self.rank_n
            && minor_bases(self.m, c, v.ground(), self.rank_n) == self.anchor.bases
    }

    /// Moves from the copy of `N` up to `M / c \ d`, if it is a fan-extension.
    fn run(&mut self, c: Mask, d: Mask) -> Result<Option<Vec<Step>>> {
        if let Some(r) = self.memo.get(&(c, d)) {
            return Ok(r.clone());
        }
        *self.states += 1;
        if *self.states > self.limits.max_states {
            return Err(Error::ResourceCap(format!(
                "recognizer visited more than {} states",
                self.limits.max_states
            )));
        }
        let result = self.expand(c, d)?;
        self.memo.insert((c, d), result.clone());
        Ok(result)
    }

    fn expand(&mut self, c: Mask, d: Mask) -> Result<Option<Vec<Step>>> {
        let view = self.m.view(c, d);
        if view.ground() == self.anchor.image {
            return Ok(self.is_base(c, d).then(Vec::new));
        }
        let fans: Vec<Fan> = all_fans(&view).into_iter().filter(|f| f.len() >= 4).collect();
        let mut tried: Vec<(Mask, Mask, Vec<usize>)> = Vec::new();
        for fan in &fans {
            for mv in shortening_moves(fan, self.anchor.image) {
                let (c2, d2) = (c | mv.contract, d | mv.delete);
                let key = (c2, d2, orient(mv.shortened.clone()));
                if tried.contains(&key) {
                    continue;
                }
                tried.push(key);
                if !self.three_connected(c2, d2) {
                    continue;
                }
                let small = self.m.view(c2, d2);
                if is_fan(&small, &mv.shortened).is_none() {
                    continue;
                }
                let Some(family) = find_covering_family(&small, &self.problem, Some(&mv.shortened)) else {
                    continue;
                };
                if let Some(mut steps) = self.run(c2, d2)? {
                    let short = orient(mv.shortened.clone());
                    let fan_index = family.iter().position(|f| f.elems == short || f.elems.iter().eq(short.iter().rev())).unwrap_or(0);
                    let added: Vec<usize> =
                        mv.lengthened.iter().copied().filter(|&e| mv.removed() & bit(e) != 0).collect();
                    steps.push(Step {
                        kind: mv.kind,
                        added,
                        contract: c2,
                        delete: d2,
                        family: family.into_iter().map(|f| f.elems).collect(),
                        fan_index,
                        lengthened: mv.lengthened.clone(),
                    });
                    return Ok(Some(steps));
                }
            }
        }
        Ok(None)
    }
}

/// Decide whether `m` is a fan-extension of `n` relative to the fans
/// `fans_n` (index sequences of `n`). Returns the trace of one
/// construction, or `None`.
pub fn is_fan_extension(
    m: &Matroid,
    n: &Matroid,
    fans_n: &[Vec<usize>],
    limits: SearchLimits,
) -> Result<Option<Trace>> {
    check_target(n)?;
    check_fans(n, fans_n)?;
    if m.len() < n.len() {
        return Ok(None);
    }
    let top_connected = m.is_3connected();
    if !top_connected && m.len() != n.len() {
        return Ok(None);
    }
    let mut states = 0;
    for anchor in anchors(m, n, fans_n) {
        if let Some(t) = search_anchor(m, n, &anchor, limits, &mut states)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

pub(crate) fn search_anchor(
    m: &Matroid,
    n: &Matroid,
    anchor: &Anchor,
    limits: SearchLimits,
    states: &mut usize,
) -> Result<Option<Trace>> {
    let mut s = Search {
        m,
        anchor,
        problem: anchor.problem(),
        rank_n: n.full_rank(),
        memo: HashMap::new(),
        conn: HashMap::new(),
        states,
        limits,
    };
    Ok(s.run(0, 0)?.map(|steps| Trace { witness: anchor.witness.clone(), steps }))
}

pub(crate) fn check_fans(n: &Matroid, fans_n: &[Vec<usize>]) -> Result<()> {
    let mut used = 0;
    for f in fans_n {
        let fan = is_fan(n, f).ok_or_else(|| Error::input("a member of the fan family is not a fan of N"))?;
        if fan.set() & used != 0 {
            return Err(Error::input("the fans of N must be pairwise disjoint"));
        }
        used |= fan.set();
    }
    if fans_n.len() > 16 {
        return Err(Error::input("at most 16 fans are supported"));
    }
    Ok(())
}

/// Every minor of `m` that keeps an `n`-minor is 3-connected up to series
/// and parallel sets. Checked over all minors removing at most
/// `|E(M)| - |E(N)|` elements.
pub fn hereditary_sp(m: &Matroid, n: &Matroid) -> bool {
    let extra = m.len() - n.len();
    let g = m.ground();
    for k in 0..=extra {
        for removed in k_subsets(g, k) {
            for c in crate::bits::submasks(removed) {
                let small = m.minor(c, removed & !c);
                if has_minor(&small, n).is_some() && !small.is_3conn_up_to_sp() {
                    return false;
                }
            }
        }
    }
    true
}

/// Shortcut: when the hypotheses of the fast path hold and `m` has a
/// covering family, `m` is a fan-extension. `class_guarantee` asserts the
/// hereditary hypothesis instead of checking it. Returns `None` whenever the
/// shortcut does not apply.
pub fn court_fast_path(m: &Matroid, n: &Matroid, fans_n: &[Vec<usize>], class_guarantee: bool) -> Option<bool> {
    if check_target(n).is_err() || check_fans(n, fans_n).is_err() || !m.is_3connected() {
        return None;
    }
    if crate::fans::fan_contains_two(n, fans_n) {
        return None;
    }
    if !class_guarantee && !hereditary_sp(m, n) {
        return None;
    }
    anchors(m, n, fans_n)
        .iter()
        .any(|a| find_covering_family(m, &a.problem(), None).is_some())
        .then_some(true)
}

/// Number of elements added over the whole trace.
pub fn trace_growth(t: &Trace) -> usize {
    t.steps.iter().map(|s| s.added.len()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wheel_targets_are_rejected() {
        let w = crate::wheels::wheel(3).unwrap().to_matroid().unwrap();
        assert!(matches!(is_fan_extension(&w, &w, &[], SearchLimits::default()), Err(Error::Input(_))));
        let u = Matroid::uniform(2, 4).unwrap();
        assert!(matches!(check_target(&u), Err(Error::Input(_))));
    }
}
