//! Wheels and whirls.
//!
//! The rank-`r` wheel has spokes `x1..xr` and rim elements `y1..yr`, labeled
//! so that `(x1, y1, x2, y2, ..., xr, yr)` is a fan starting with the
//! triangle `{x1, y1, x2}` and `{x1, yr, xr}` is a triangle.

use crate::bits::bit;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::iso::is_isomorphic;
use crate::matroid::Matroid;
use crate::repr::{graphic_over, Graph, ReprMatroid};

/// Labels in fan order: `x1, y1, x2, y2, ..., xr, yr`.
pub fn wheel_labels(r: usize) -> Vec<String> {
    (1..=r).flat_map(|j| [format!("x{j}"), format!("y{j}")]).collect()
}

/// The wheel graph with hub `0` and rim vertices `1..=r`; spoke `xj` joins
/// the hub to vertex `j` and rim edge `yj` joins vertex `j` to vertex `j+1`.
pub fn wheel_graph(r: usize) -> Result<Graph> {
    if r < 2 {
        return Err(Error::input(format!("wheel rank must be at least 2, got {r}")));
    }
    let mut edges = Vec::with_capacity(2 * r);
    for j in 1..=r {
        edges.push((0, j, format!("x{j}")));
        edges.push((j, j % r + 1, format!("y{j}")));
    }
    Graph::new(r + 1, edges)
}

pub fn wheel_over(field: PrimeField, r: usize) -> Result<ReprMatroid> {
    graphic_over(field, &wheel_graph(r)?)
}

pub fn wheel(r: usize) -> Result<ReprMatroid> {
    wheel_over(PrimeField::GF2, r)
}

/// The wheel with its rim circuit relaxed to a basis.
pub fn whirl(r: usize) -> Result<Matroid> {
    let w = wheel(r)?.to_matroid()?;
    let rim = (0..r).fold(0, |m, j| m | bit(2 * j + 1));
    let mut bases = w.bases().to_vec();
    bases.push(rim);
    Ok(Matroid::from_masks_unchecked(w.labels().to_vec(), bases))
}

fn wheel_like(m: &Matroid, build: impl Fn(usize) -> Result<Matroid>) -> bool {
    let n = m.len();
    if n < 4 || n % 2 != 0 || m.full_rank() != n / 2 {
        return false;
    }
    match build(n / 2) {
        Ok(w) => w.num_bases() == m.num_bases() && is_isomorphic(&w, m).is_some(),
        Err(_) => false,
    }
}

pub fn is_wheel(m: &Matroid) -> bool {
    wheel_like(m, |r| wheel(r)?.to_matroid())
}

pub fn is_whirl(m: &Matroid) -> bool {
    wheel_like(m, whirl)
}

pub fn is_wheel_or_whirl(m: &Matroid) -> bool {
    is_wheel(m) || is_whirl(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::size;
    use crate::matroid::{RankFn, Structure};

    #[test]
    fn wheel_sizes_and_bases() {
        for r in 2..=5 {
            let w = wheel(r).unwrap().to_matroid().unwrap();
            assert_eq!(w.len(), 2 * r);
            assert_eq!(w.full_rank(), r);
            let wh = whirl(r).unwrap();
            assert_eq!(wh.num_bases(), w.num_bases() + 1);
            wh.validate().unwrap();
        }
        assert!(wheel(1).is_err());
    }

    #[test]
    fn wheel_labeling_conventions() {
        for r in 3..=5 {
            let w = wheel(r).unwrap().to_matroid().unwrap();
            let idx = |l: &str| w.index_of(l).unwrap();
            let t = bit(idx("x1")) | bit(idx(&format!("y{r}"))) | bit(idx(&format!("x{r}")));
            assert!(w.is_triangle(t));
            assert!(w.is_triangle(bit(idx("x1")) | bit(idx("y1")) | bit(idx("x2"))));
            assert!(w.is_triad(bit(idx("y1")) | bit(idx("x2")) | bit(idx("y2"))));
        }
    }

    #[test]
    fn whirl2_is_u24() {
        assert!(is_isomorphic(&whirl(2).unwrap(), &Matroid::uniform(2, 4).unwrap()).is_some());
        assert!(is_whirl(&Matroid::uniform(2, 4).unwrap()));
    }

    #[test]
    fn wheel2_has_one_parallel_and_one_series_pair() {
        let w = wheel(2).unwrap().to_matroid().unwrap();
        let par = w.parallel_classes().unwrap();
        let ser = w.series_classes().unwrap();
        assert_eq!(par.iter().filter(|&&c| size(c) == 2).count(), 1);
        assert_eq!(ser.iter().filter(|&&c| size(c) == 2).count(), 1);
        assert_eq!(par.len(), 3);
    }

    #[test]
    fn wheel_and_whirl_are_distinct() {
        let w = wheel(3).unwrap().to_matroid().unwrap();
        let wh = whirl(3).unwrap();
        assert!(is_isomorphic(&w, &wh).is_none());
        assert!(is_wheel(&w) && !is_whirl(&w));
        assert!(is_whirl(&wh) && !is_wheel(&wh));
        assert!(w.is_3connected() && wh.is_3connected());
        assert_eq!(w.rank(w.ground()), 3);
    }
}
