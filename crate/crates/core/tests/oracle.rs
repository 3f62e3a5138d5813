mod common;

use std::collections::BTreeSet;

use fanforge_core::catalog;
use fanforge_core::certifier::{enumerate_candidates, CertTask};
use fanforge_core::fans::fan_indices;
use fanforge_core::fragility::ClassPredicate;
use fanforge_core::glue::{glue_wheels, Blueprint};
use fanforge_core::recognizer::{is_fan_extension, SearchLimits};
use fanforge_core::repr::ReprMatroid;
use fanforge_core::{Matroid, Structure};

fn small_seed() -> (ReprMatroid, Vec<Vec<String>>) {
    let bp = Blueprint {
        core: catalog::fano(),
        triangles: vec![["2".into(), "1".into(), "3".into()]],
        ranks: vec![3],
        delete: ["1", "3"].iter().map(|s| s.to_string()).collect::<BTreeSet<_>>(),
    };
    let g = glue_wheels(&bp).unwrap();
    (g.repr, g.fans)
}

#[test]
fn oracle_brute_fans_match_triangle_triad_definition() {
    let w = fanforge_core::wheels::wheel(4).unwrap().to_matroid().unwrap();
    let fans = common::brute_fans(&w);
    assert!(fans.iter().any(|f| f.len() == 7));
    assert!(fans.iter().all(|f| common::fan_kind(&w, f).is_some()));
}

#[test]
fn small_seed_recognizer_matches_forward_oracle_at_depth_one() {
    let (n, fans) = small_seed();
    let nm = n.to_matroid().unwrap();
    assert!(nm.is_3connected());
    let forward: Vec<Matroid> = common::forward(&n, &fans, 1).iter().map(|r| r.to_matroid().unwrap()).collect();
    let idx = fan_indices(&nm, &fans).unwrap();
    let mut task = CertTask::new(n.clone(), idx.clone(), ClassPredicate::default());
    task.depth = 1;
    let cands = enumerate_candidates(&task).unwrap();
    for f in &forward {
        assert!(cands.iter().any(|(_, c)| fanforge_core::iso::is_isomorphic(&c.to_matroid().unwrap(), f).is_some()));
    }
    for (_, c) in &cands {
        let m = c.to_matroid().unwrap();
        let rec = is_fan_extension(&m, &nm, &idx, SearchLimits::default()).unwrap().is_some();
        assert_eq!(rec, common::contains_iso(&forward, &m), "{:?}", c.cols);
    }
}
