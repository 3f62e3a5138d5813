//! Matrices over prime fields with labeled columns.

use std::collections::HashSet;

use crate::bits::{bit, elements, full, k_subsets, Mask};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matroid::Matroid;

/// A matrix over `field` with `rows` rows; `cols[i]` is the column of `labels[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReprMatroid {
    pub field: PrimeField,
    pub rows: usize,
    pub labels: Vec<String>,
    pub cols: Vec<Vec<u8>>,
}

/// A simple undirected multigraph on vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, String)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize, String)>) -> Result<Self> {
        for (u, v, _) in &edges {
            if *u >= vertices || *v >= vertices {
                return Err(Error::input(format!("edge ({u},{v}) mentions a missing vertex")));
            }
        }
        Ok(Graph { vertices, edges })
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for (u, v, _) in &self.edges {
                for (a, b) in [(*u, *v), (*v, *u)] {
                    if a == x && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// A graph with a distinguished vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graft {
    pub graph: Graph,
    pub gamma: Vec<usize>,
    pub label: String,
}

impl ReprMatroid {
    pub fn new(field: PrimeField, rows: usize, labels: Vec<String>, cols: Vec<Vec<u8>>) -> Result<Self> {
        if labels.len() != cols.len() {
            return Err(Error::input("column count differs from label count"));
        }
        let mut seen = HashSet::new();
        for (l, c) in labels.iter().zip(&cols) {
            if !seen.insert(l) {
                return Err(Error::input(format!("duplicate element label {l:?}")));
            }
            if c.len() != rows {
                return Err(Error::input(format!("column {l:?} has {} entries, expected {rows}", c.len())));
            }
            if c.iter().any(|&d| d >= field.p()) {
                return Err(Error::input(format!("column {l:?} has a digit outside {field}")));
            }
        }
        Ok(ReprMatroid { field, rows, labels, cols })
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn column(&self, label: &str) -> Option<&[u8]> {
        self.index_of(label).map(|i| self.cols[i].as_slice())
    }

    /// Rank of the columns in `set`.
    pub fn rank_of(&self, set: Mask) -> usize {
        rank_of_vectors(self.field, elements(set).map(|i| self.cols[i].clone()).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank_of(full(self.len()))
    }

    pub fn to_matroid(&self) -> Result<Matroid> {
        let n = self.len();
        let r = self.rank();
        let bases: Vec<Mask> = k_subsets(full(n), r).filter(|&s| self.rank_of(s) == r).collect();
        // linear independence always yields a basis family
        Ok(Matroid::from_masks_unchecked(self.labels.clone(), bases))
    }

    /// Same column matroid with `rank` rows in reduced row-echelon form.
    pub fn reduced(&self) -> ReprMatroid {
        let (rref, _) = rref(self.field, self.rows, &self.cols);
        let r = rref.first().map_or(0, |c| c.len());
        ReprMatroid { field: self.field, rows: r, labels: self.labels.clone(), cols: rref }
    }

    /// The orthogonal representation of the dual matroid, same labels.
    pub fn dual(&self) -> ReprMatroid {
        let f = self.field;
        let (rcols, pivots) = rref(f, self.rows, &self.cols);
        let n = self.len();
        let free: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let mut cols = vec![vec![0u8; free.len()]; n];
        for (j, &q) in free.iter().enumerate() {
            cols[q][j] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                cols[p][j] = f.neg(rcols[q][i]);
            }
        }
        ReprMatroid { field: f, rows: free.len(), labels: self.labels.clone(), cols }
    }

    pub fn delete(&self, set: Mask) -> ReprMatroid {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| set & bit(i) == 0).collect();
        ReprMatroid {
            field: self.field,
            rows: self.rows,
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            cols: keep.iter().map(|&i| self.cols[i].clone()).collect(),
        }
    }

    /// Contract the columns in `set` by projecting them out one at a time.
    pub fn contract(&self, set: Mask) -> ReprMatroid {
        let f = self.field;
        let mut cols = self.cols.clone();
        let mut rows = self.rows;
        for e in elements(set) {
            let Some(piv) = cols[e].iter().position(|&d| d != 0) else { continue };
            let pe = cols[e].clone();
            let inv = f.inv(pe[piv]);
            for c in cols.iter_mut() {
                let s = f.mul(c[piv], inv);
                if s != 0 {
                    for (x, &y) in c.iter_mut().zip(&pe) {
                        *x = f.sub(*x, f.mul(s, y));
                    }
                }
                c.remove(piv);
            }
            rows -= 1;
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&i| set & bit(i) == 0).collect();
        ReprMatroid {
            field: f,
            rows,
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            cols: keep.iter().map(|&i| cols[i].clone()).collect(),
        }
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

    /// The first label `_x1, _x2, ...` not already in use.
    pub fn fresh_label(&self) -> String {
        (1..).map(|k| format!("_x{k}")).find(|l| self.index_of(l).is_none()).expect("unbounded")
    }

    pub fn with_column(&self, label: String, col: Vec<u8>) -> ReprMatroid {
        let mut r = self.clone();
        r.labels.push(label);
        r.cols.push(col);
        r
    }

    /// One single-element extension per projective point of `field^rows`,
    /// in lexicographic order of the added vector.
    pub fn extensions(&self) -> Vec<ReprMatroid> {
        let label = self.fresh_label();
        self.field
            .projective_points(self.rows)
            .into_iter()
            .map(|v| self.with_column(label.clone(), v))
            .collect()
    }

    /// Single-element coextensions, obtained by extending the dual
    /// representation and dualizing back.
    pub fn coextensions(&self) -> Vec<ReprMatroid> {
        let label = self.fresh_label();
        let d = self.dual();
        self.field
            .projective_points(d.rows)
            .into_iter()
            .map(|v| d.with_column(label.clone(), v).dual())
            .collect()
    }
}

/// Rank of a list of vectors over `f`.
pub fn rank_of_vectors(f: PrimeField, mut vs: Vec<Vec<u8>>) -> usize {
    let mut rank = 0;
    let len = vs.first().map_or(0, |v| v.len());
    for c in 0..len {
        let Some(p) = (rank..vs.len()).find(|&i| vs[i][c] != 0) else { continue };
        vs.swap(rank, p);
        let inv = f.inv(vs[rank][c]);
        let pivot = vs[rank].clone();
        for v in vs.iter_mut().skip(rank + 1) {
            let s = f.mul(v[c], inv);
            if s != 0 {
                for (x, &y) in v.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(s, y));
                }
            }
        }
        rank += 1;
        if rank == vs.len() {
            break;
        }
    }
    rank
}

/// Reduced row-echelon form of the matrix with the given columns, zero rows
/// removed. Returns the new columns and the pivot column indices.
pub(crate) fn rref(f: PrimeField, rows: usize, cols: &[Vec<u8>]) -> (Vec<Vec<u8>>, Vec<usize>) {
    let n = cols.len();
    let mut m: Vec<Vec<u8>> = (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = f.inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let s = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(s, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let out = (0..n).map(|c| (0..r).map(|i| m[i][c]).collect()).collect();
    (out, pivots)
}

/// Signed incidence matrix of a connected graph over `field`, with the row
/// of vertex 0 dropped. Loops give zero columns.
pub fn graphic_over(field: PrimeField, g: &Graph) -> Result<ReprMatroid> {
    if !g.is_connected() {
        return Err(Error::structural("graphic representation of a disconnected graph"));
    }
    let rows = g.vertices.saturating_sub(1);
    let mut cols = Vec::new();
    for (u, v, _) in &g.edges {
        let mut c = vec![0u8; rows];
        if u != v {
            if *u > 0 {
                c[u - 1] = 1;
            }
            if *v > 0 {
                c[v - 1] = field.neg(1);
            }
        }
        cols.push(c);
    }
    ReprMatroid::new(field, rows, g.edges.iter().map(|e| e.2.clone()).collect(), cols)
}

/// The cycle matroid of a connected graph over GF(2).
pub fn graphic_matroid(g: &Graph) -> Result<ReprMatroid> {
    graphic_over(PrimeField::GF2, g)
}

/// The binary matroid of a graft: the full vertex-edge incidence matrix over
/// GF(2) together with the characteristic vector of `gamma`.
pub fn graft_matroid(gr: &Graft) -> Result<ReprMatroid> {
    let g = &gr.graph;
    if !g.is_connected() {
        return Err(Error::structural("graft on a disconnected graph"));
    }
    let mut seen = HashSet::new();
    for &v in &gr.gamma {
        if v >= g.vertices || !seen.insert(v) {
            return Err(Error::input(format!("invalid graft vertex {v}")));
        }
    }
    let rows = g.vertices;
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for (u, v, l) in &g.edges {
        let mut c = vec![0u8; rows];
        if u != v {
            c[*u] = 1;
            c[*v] = 1;
        }
        cols.push(c);
        labels.push(l.clone());
    }
    let mut c = vec![0u8; rows];
    for &v in &gr.gamma {
        c[v] = 1;
    }
    cols.push(c);
    labels.push(gr.label.clone());
    ReprMatroid::new(PrimeField::GF2, rows, labels, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{RankFn, Structure};

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn fano() -> ReprMatroid {
        let cols: Vec<Vec<u8>> = (1u8..8).map(|v| vec![v & 1, (v >> 1) & 1, (v >> 2) & 1]).collect();
        ReprMatroid::new(PrimeField::GF2, 3, s(&["1", "2", "3", "4", "5", "6", "7"]), cols).unwrap()
    }

    fn k4() -> Graph {
        let e = |u, v, l: &str| (u, v, l.to_string());
        Graph::new(4, vec![e(0, 1, "a"), e(0, 2, "b"), e(0, 3, "c"), e(1, 2, "d"), e(1, 3, "e"), e(2, 3, "f")])
            .unwrap()
    }

    #[test]
    fn fano_has_28_bases() {
        let m = fano().to_matroid().unwrap();
        // oracle: 35 triples minus the 7 lines
        assert_eq!(m.num_bases(), 35 - 7);
        assert_eq!(m.full_rank(), 3);
    }

    #[test]
    fn identity_columns_are_free() {
        let r = ReprMatroid::new(PrimeField::GF3, 2, s(&["a", "b"]), vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(r.to_matroid().unwrap().num_bases(), 1);
    }

    #[test]
    fn equal_columns_are_parallel() {
        let r = ReprMatroid::new(PrimeField::GF2, 1, s(&["a", "b"]), vec![vec![1], vec![1]]).unwrap();
        let m = r.to_matroid().unwrap();
        assert_eq!(m.rank(0b11), 1);
    }

    #[test]
    fn triangle_graph_is_u23() {
        let g = Graph::new(3, vec![(0, 1, "a".into()), (1, 2, "b".into()), (0, 2, "c".into())]).unwrap();
        let m = graphic_matroid(&g).unwrap().to_matroid().unwrap();
        assert_eq!(m, Matroid::uniform(2, 3).unwrap());
    }

    #[test]
    fn k4_cycle_matroid() {
        let m = graphic_matroid(&k4()).unwrap().to_matroid().unwrap();
        assert_eq!(m.full_rank(), 3);
        // spanning trees of K4
        assert_eq!(m.num_bases(), 16);
        assert_eq!(m.triangles().len(), 4);
        assert!(m.is_3connected());
    }

    #[test]
    fn disconnected_graph_rejected() {
        let g = Graph::new(3, vec![(0, 1, "a".into())]).unwrap();
        assert!(matches!(graphic_matroid(&g), Err(Error::Structural(_))));
    }

    #[test]
    fn graft_cases() {
        let gr = Graft { graph: k4(), gamma: vec![0, 1], label: "g".into() };
        let m = graft_matroid(&gr).unwrap().to_matroid().unwrap();
        assert_eq!((m.len(), m.full_rank()), (7, 3));
        assert_eq!(m.delete(bit(6)), graphic_matroid(&k4()).unwrap().to_matroid().unwrap());
        // gamma = {0,1} puts g parallel to the edge a
        assert_eq!(m.rank(bit(0) | bit(6)), 1);

        let empty = Graft { graph: k4(), gamma: vec![], label: "g".into() };
        assert!(graft_matroid(&empty).unwrap().to_matroid().unwrap().is_loop(6));

        let bad = Graft { graph: k4(), gamma: vec![9], label: "g".into() };
        assert!(matches!(graft_matroid(&bad), Err(Error::Input(_))));
    }

    #[test]
    fn extension_counts() {
        let r = ReprMatroid::new(PrimeField::GF2, 2, s(&["a", "b"]), vec![vec![1, 0], vec![0, 1]]).unwrap();
        let ex = r.extensions();
        assert_eq!(ex.len(), 3);
        assert!(ex.iter().all(|e| e.labels[2] == "_x1"));
        let r3 = ReprMatroid { field: PrimeField::GF3, ..r };
        assert_eq!(r3.extensions().len(), 4);
    }

    #[test]
    fn fano_extensions_are_all_parallel() {
        for e in fano().extensions() {
            let m = e.to_matroid().unwrap();
            let x = m.len() - 1;
            assert!((0..7).any(|i| m.rank(bit(i) | bit(x)) == 1));
        }
    }

    #[test]
    fn dual_representation_represents_dual() {
        let r = fano();
        assert_eq!(r.dual().to_matroid().unwrap(), r.to_matroid().unwrap().dual());
        let g = graphic_over(PrimeField::GF3, &k4()).unwrap();
        assert_eq!(g.dual().to_matroid().unwrap(), g.to_matroid().unwrap().dual());
    }

    #[test]
    fn coextension_then_contraction_round_trips() {
        let r = graphic_matroid(&k4()).unwrap();
        let base = r.to_matroid().unwrap();
        let co = r.coextensions();
        assert_eq!(co.len(), r.dual().extensions().len());
        for c in co {
            let m = c.to_matroid().unwrap();
            assert_eq!(m.full_rank(), 4);
            assert_eq!(m.contract(bit(m.len() - 1)), base);
        }
    }

    #[test]
    fn repr_minors_match_matroid_minors() {
        let r = fano();
        let m = r.to_matroid().unwrap();
        for e in 0..7 {
            assert_eq!(r.delete(bit(e)).to_matroid().unwrap(), m.delete(bit(e)));
            assert_eq!(r.contract(bit(e)).to_matroid().unwrap(), m.contract(bit(e)));
        }
        assert_eq!(r.contract(0b11).to_matroid().unwrap(), m.contract(0b11));
    }
}
