//! Minor-set membership and fragility.

use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::bits::{bit, k_subsets, Mask};
use crate::iso::{has_minor, invariants, isomorphisms_with};
use crate::matroid::{Matroid, RankFn, Structure};
use crate::wheels::is_wheel_or_whirl;

/// The excluded-minor set `S`.
#[derive(Clone, Debug, Default)]
pub struct MinorSet {
    pub members: Vec<Matroid>,
}

impl MinorSet {
    pub fn new(members: Vec<Matroid>) -> Self {
        MinorSet { members }
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Shape problems that rule the set out as a hypothesis of the main theorem.
    pub fn shape_issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, s) in self.members.iter().enumerate() {
            if s.len() < 4 {
                out.push(format!("member {} has fewer than four elements", i + 1));
            } else if !s.is_3connected() {
                out.push(format!("member {} is not 3-connected", i + 1));
            } else if is_wheel_or_whirl(s) {
                out.push(format!("member {} is a wheel or a whirl", i + 1));
            }
        }
        out
    }
}

pub fn has_s_minor(m: &Matroid, s: &MinorSet) -> bool {
    s.members.iter().any(|n| has_minor(m, n).is_some())
}

/// Whether removing `e` either way keeps an `S`-minor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementVerdict {
    pub element: String,
    pub delete_keeps: bool,
    pub contract_keeps: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragilityReport {
    pub verdicts: Vec<ElementVerdict>,
    pub has_minor: bool,
    pub fragile: bool,
}

impl FragilityReport {
    pub fn lines(&self) -> Vec<String> {
        let word = |b: bool| if b { "keeps" } else { "loses" };
        let mut out: Vec<String> = self
            .verdicts
            .iter()
            .map(|v| format!("{}: del={} con={}", v.element, word(v.delete_keeps), word(v.contract_keeps)))
            .collect();
        out.push(format!("fragile: {}", if self.fragile { "yes" } else { "no" }));
        out
    }
}

/// Mark in `del` every element deleted by some `n`-minor embedding and in
/// `con` every element contracted by one. Returns whether any embedding exists.
fn scan(m: &Matroid, n: &Matroid, del: &mut Mask, con: &mut Mask) -> bool {
    let (me, ne) = (m.len(), n.len());
    let (mr, nr) = (m.full_rank(), n.full_rank());
    if ne > me || nr > mr || ne - nr > me - mr {
        return false;
    }
    let g = m.ground();
    if ne == me {
        return crate::iso::is_isomorphic(n, m).is_some();
    }
    let ninv = invariants(n);
    let c_size = mr - nr;
    let mut found = false;
    for keep in k_subsets(g, ne) {
        let rest = g & !keep;
        for c in k_subsets(rest, c_size) {
            let d = rest & !c;
            if found && c & !*con == 0 && d & !*del == 0 {
                continue;
            }
            if m.rank(c) != c_size || m.rank(keep | c) != mr {
                continue;
            }
            let nb = k_subsets(keep, nr).filter(|&x| m.rank(x | c) == mr).count();
            if nb != n.num_bases() {
                continue;
            }
            let minor = m.minor(c, d);
            let minv = invariants(&minor);
            let mut hit = false;
            let _ = isomorphisms_with(n, &ninv, &minor, &minv, &mut |_| {
                hit = true;
                ControlFlow::Break(())
            });
            if hit {
                found = true;
                *con |= c;
                *del |= d;
                if *con == g && *del == g {
                    return true;
                }
            }
        }
    }
    found
}

/// Per-element fragility verdicts: `M` is `S`-fragile when no element keeps
/// an `S`-minor under both deletion and contraction.
pub fn is_s_fragile(m: &Matroid, s: &MinorSet) -> FragilityReport {
    let (mut del, mut con) = (0, 0);
    let mut any = false;
    for n in &s.members {
        any |= scan(m, n, &mut del, &mut con);
    }
    let verdicts: Vec<ElementVerdict> = (0..m.len())
        .map(|e| {
            let (mut d, mut c) = (del & bit(e) != 0, con & bit(e) != 0);
            if m.is_loop(e) || m.is_coloop(e) {
                d |= c;
                c = d;
            }
            ElementVerdict { element: m.label(e).to_string(), delete_keeps: d, contract_keeps: c }
        })
        .collect();
    let fragile = verdicts.iter().all(|v| !(v.delete_keeps && v.contract_keeps));
    FragilityReport { verdicts, has_minor: any, fragile }
}

/// Membership test for the class used by the certifier: all matroids
/// (representable by construction) when `s` is `None`, otherwise the
/// `S`-fragile ones.
#[derive(Clone, Debug, Default)]
pub struct ClassPredicate {
    pub s: Option<MinorSet>,
}

impl ClassPredicate {
    pub fn contains(&self, m: &Matroid) -> bool {
        match &self.s {
            None => true,
            Some(s) => is_s_fragile(m, s).fragile,
        }
    }
}

/// Hypothesis checks gating the main theorem.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HypothesisReport {
    pub issues: Vec<String>,
    pub samples_checked: usize,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Check the shape of `S`, the hypotheses on `N`, and that every sample
/// member that is fragile with an `S`-minor is 3-connected up to series and
/// parallel sets.
pub fn check_hypotheses(n: &Matroid, s: &MinorSet, samples: &[Matroid]) -> HypothesisReport {
    let mut issues: Vec<String> = s.shape_issues().into_iter().map(|i| format!("S: {i}")).collect();
    if n.len() < 4 {
        issues.push("N has fewer than four elements".into());
    }
    if !n.is_3connected() {
        issues.push("N is not 3-connected".into());
    }
    if is_wheel_or_whirl(n) {
        issues.push("N is a wheel or a whirl".into());
    }
    if !s.is_empty() {
        let rep = is_s_fragile(n, s);
        if !rep.has_minor {
            issues.push("N has no S-minor".into());
        }
        if !rep.fragile {
            issues.push("N is not S-fragile".into());
        }
    }
    let bad: Vec<usize> = samples
        .par_iter()
        .enumerate()
        .filter(|(_, m)| {
            let r = is_s_fragile(m, s);
            r.fragile && r.has_minor && !m.is_3conn_up_to_sp()
        })
        .map(|(i, _)| i)
        .collect();
    for i in bad {
        issues.push(format!("sample {} is fragile with an S-minor but not 3-connected up to series and parallel sets", i + 1));
    }
    HypothesisReport { issues, samples_checked: samples.len() }
}

/// Elements whose removal in both ways keeps an `S`-minor.
pub fn robust_elements(m: &Matroid, s: &MinorSet) -> Vec<String> {
    is_s_fragile(m, s)
        .verdicts
        .into_iter()
        .filter(|v| v.delete_keeps && v.contract_keeps)
        .map(|v| v.element)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wheels::{wheel, whirl};

    fn u24() -> Matroid {
        Matroid::uniform(2, 4).unwrap()
    }

    #[test]
    fn whirls_are_u24_fragile() {
        let s = MinorSet::new(vec![u24()]);
        for r in 2..=4 {
            let rep = is_s_fragile(&whirl(r).unwrap(), &s);
            assert!(rep.fragile && rep.has_minor, "whirl {r}");
        }
        let w = wheel(3).unwrap().to_matroid().unwrap();
        assert!(!has_s_minor(&w, &s));
    }

    #[test]
    fn loops_count_both_ways() {
        let m = Matroid::from_bases(vec!["a".into(), "b".into(), "c".into(), "d".into(), "z".into()], &[
            vec!["a", "b"],
            vec!["a", "c"],
            vec!["a", "d"],
            vec!["b", "c"],
            vec!["b", "d"],
            vec!["c", "d"],
        ])
        .unwrap();
        let rep = is_s_fragile(&m, &MinorSet::new(vec![u24()]));
        let z = rep.verdicts.iter().find(|v| v.element == "z").unwrap();
        assert!(z.delete_keeps && z.contract_keeps);
        assert!(!rep.fragile);
    }
}
