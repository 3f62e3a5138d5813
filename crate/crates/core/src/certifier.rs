//! Bounded certification: every 3-connected class member with an `N`-minor
//! and at most `depth` extra elements is checked to be a fan-extension.

use std::collections::HashMap;
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::fragility::{check_hypotheses, ClassPredicate, HypothesisReport};
use crate::iso::{has_minor, invariants, isomorphisms_with, Invariants, MinorWitness};
use crate::matroid::{Matroid, Structure};
use crate::recognizer::{check_fans, is_fan_extension, SearchLimits};
use crate::repr::ReprMatroid;

#[derive(Clone, Copy, Debug)]
pub struct CertLimits {
    /// Maximum number of isomorphism classes kept on one level.
    pub max_candidates: usize,
    pub search: SearchLimits,
}

impl Default for CertLimits {
    fn default() -> Self {
        CertLimits { max_candidates: 200_000, search: SearchLimits::default() }
    }
}

#[derive(Clone, Debug)]
pub struct CertTask {
    pub n: ReprMatroid,
    /// Fans of `N` as index sequences.
    pub fans: Vec<Vec<usize>>,
    pub class: ClassPredicate,
    pub depth: usize,
    pub limits: CertLimits,
}

impl CertTask {
    pub fn new(n: ReprMatroid, fans: Vec<Vec<usize>>, class: ClassPredicate) -> Self {
        CertTask { n, fans, class, depth: 2, limits: CertLimits::default() }
    }

    pub fn n_matroid(&self) -> Result<Matroid> {
        self.n.to_matroid()
    }

    pub fn hypotheses(&self) -> Result<HypothesisReport> {
        let n = self.n_matroid()?;
        let s = self.class.s.clone().unwrap_or_default();
        Ok(check_hypotheses(&n, &s, &[]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCount {
    pub level: usize,
    /// Single-element extensions and coextensions generated from the previous level.
    pub generated: usize,
    /// Isomorphism classes among them that lie in the class.
    pub in_class: usize,
    /// Those that are 3-connected and were run through the recognizer.
    pub checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Counterexample,
}

#[derive(Clone, Debug)]
pub struct CertWitness {
    pub matroid: ReprMatroid,
    pub minor: MinorWitness,
    pub level: usize,
}

#[derive(Clone, Debug)]
pub struct CertResult {
    pub verdict: Verdict,
    pub levels: Vec<LevelCount>,
    pub witness: Option<CertWitness>,
    /// Over fields other than GF(2) the search starts from one fixed
    /// representation and is only complete relative to it.
    pub relative_to_representation: bool,
}

struct Candidate {
    repr: ReprMatroid,
    matroid: Matroid,
    inv: Invariants,
}

fn dedup(cands: Vec<Candidate>) -> Vec<Candidate> {
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut out: Vec<Candidate> = Vec::new();
    for c in cands {
        let bucket = buckets.entry(c.inv.signature).or_default();
        let dup = bucket.iter().any(|&i| {
            let r = &out[i];
            let mut hit = false;
            let _ = isomorphisms_with(&r.matroid, &r.inv, &c.matroid, &c.inv, &mut |_| {
                hit = true;
                ControlFlow::Break(())
            });
            hit
        });
        if !dup {
            bucket.push(out.len());
            out.push(c);
        }
    }
    out
}

fn candidate(repr: ReprMatroid) -> Result<Candidate> {
    let matroid = repr.to_matroid()?;
    let inv = invariants(&matroid);
    Ok(Candidate { repr, matroid, inv })
}

/// Isomorphism classes in the class on each level `0..=depth`, built from
/// the reduced representation of `N` by single-element extensions (first)
/// and coextensions, in lexicographic order of the added vector.
fn levels(task: &CertTask, counts: &mut Vec<LevelCount>) -> Result<Vec<Vec<Candidate>>> {
    PrimeField::new(task.n.field.p())?;
    let start = candidate(task.n.reduced())?;
    let mut out = vec![vec![start]];
    counts.push(LevelCount { level: 0, generated: 1, in_class: 1, checked: 0 });
    for level in 1..=task.depth {
        let prev = out.last().expect("level 0");
        let next: Vec<ReprMatroid> = prev
            .iter()
            .flat_map(|c| {
                let mut v = c.repr.extensions();
                v.extend(c.repr.coextensions());
                v
            })
            .collect();
        let generated = next.len();
        let built: Vec<Candidate> = next.into_par_iter().map(candidate).collect::<Result<_>>()?;
        let classes = dedup(built);
        if classes.len() > task.limits.max_candidates {
            return Err(Error::ResourceCap(format!(
                "level {level} has {} isomorphism classes, above the cap of {}",
                classes.len(),
                task.limits.max_candidates
            )));
        }
        let keep: Vec<bool> = classes.par_iter().map(|c| task.class.contains(&c.matroid)).collect();
        let kept: Vec<Candidate> = classes.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
        counts.push(LevelCount { level, generated, in_class: kept.len(), checked: 0 });
        out.push(kept);
    }
    Ok(out)
}

/// The 3-connected candidates of every level, in deterministic order.
pub fn enumerate_candidates(task: &CertTask) -> Result<Vec<(usize, ReprMatroid)>> {
    let mut counts = Vec::new();
    let lv = levels(task, &mut counts)?;
    Ok(lv
        .into_iter()
        .enumerate()
        .flat_map(|(k, cs)| cs.into_iter().filter(|c| c.matroid.is_3connected()).map(move |c| (k, c.repr)))
        .collect())
}

/// Run the bounded certification. Refuses (input error) when the theorem's
/// hypotheses fail; aborts (resource cap) rather than under-searching.
pub fn certify(task: &CertTask) -> Result<CertResult> {
    let n = task.n_matroid()?;
    let report = task.hypotheses()?;
    if !report.passed() {
        return Err(Error::input(format!("hypotheses not satisfied: {}", report.issues.join("; "))));
    }
    check_fans(&n, &task.fans)?;
    let mut counts = Vec::new();
    let lv = levels(task, &mut counts)?;
    let mut finals: Vec<(usize, &Candidate)> = Vec::new();
    for (k, cs) in lv.iter().enumerate() {
        let here: Vec<&Candidate> = cs.iter().filter(|c| c.matroid.is_3connected()).collect();
        counts[k].checked = here.len();
        finals.extend(here.into_iter().map(|c| (k, c)));
    }
    let verdicts: Vec<Result<bool>> = finals
        .par_iter()
        .map(|(_, c)| is_fan_extension(&c.matroid, &n, &task.fans, task.limits.search).map(|t| t.is_some()))
        .collect();
    let mut witness = None;
    for ((k, c), v) in finals.iter().zip(verdicts) {
        if !v? {
            let minor = has_minor(&c.matroid, &n).ok_or_else(|| Error::structural("candidate lost its N-minor"))?;
            witness = Some(CertWitness { matroid: c.repr.clone(), minor, level: *k });
            break;
        }
    }
    Ok(CertResult {
        verdict: if witness.is_some() { Verdict::Counterexample } else { Verdict::Certified },
        levels: counts,
        witness,
        relative_to_representation: task.n.field != PrimeField::GF2,
    })
}

/// Re-check a counterexample from scratch: in the class, 3-connected, has
/// `N` as a minor via the recorded witness, and not a fan-extension.
pub fn verify_witness(task: &CertTask, w: &CertWitness) -> bool {
    let (Ok(n), Ok(m)) = (task.n_matroid(), w.matroid.to_matroid()) else { return false };
    task.class.contains(&m)
        && m.is_3connected()
        && w.minor.map.len() == n.len()
        && w.minor.verify(&m, &n)
        && matches!(is_fan_extension(&m, &n, &task.fans, task.limits.search), Ok(None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragility::MinorSet;

    fn fano() -> ReprMatroid {
        crate::glue::n12_blueprint().core
    }

    #[test]
    fn depth_zero_is_trivially_certified() {
        let f7 = fano();
        let triangle = vec![vec![0, 1, 2]];
        let class = ClassPredicate { s: Some(MinorSet::new(vec![f7.to_matroid().unwrap(), f7.dual().to_matroid().unwrap()])) };
        let mut task = CertTask::new(f7, triangle, class);
        task.depth = 0;
        let r = certify(&task).unwrap();
        assert_eq!(r.verdict, Verdict::Certified);
        assert_eq!(enumerate_candidates(&task).unwrap().len(), 1);
    }
}
