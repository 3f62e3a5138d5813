//! Text formats: `.mtx` matroids, `.fans` fan families, `.bp` blueprints,
//! `.graft` grafts (optional `label <name>` line for the graft element) and certifier result files.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::certifier::{CertResult, Verdict};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::glue::Blueprint;
use crate::matroid::Matroid;
use crate::repr::{Graft, Graph, ReprMatroid};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, split into tokens, 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| perr(line, format!("expected a number, found {tok:?}")))
}

/// A parsed `.mtx` file: the abstract matroid, plus its matrix when given.
#[derive(Clone, Debug)]
pub struct MtxFile {
    pub name: String,
    pub matroid: Matroid,
    pub repr: Option<ReprMatroid>,
}

pub fn parse_mtx(text: &str) -> Result<MtxFile> {
    let mut name = None;
    let mut elements: Option<Vec<String>> = None;
    let mut rank: Option<usize> = None;
    let mut bases: Vec<Vec<String>> = Vec::new();
    let mut field: Option<(PrimeField, usize)> = None;
    let mut cols: Vec<(String, Vec<u8>)> = Vec::new();
    let mut last = 0;
    for (ln, t) in lines(text) {
        last = ln;
        match t[0] {
            "matroid" if t.len() == 2 => name = Some(t[1].to_string()),
            "elements" => elements = Some(t[1..].iter().map(|s| s.to_string()).collect()),
            "rank" if t.len() == 2 => rank = Some(num(ln, t[1])?),
            "basis" => bases.push(t[1..].iter().map(|s| s.to_string()).collect()),
            "repr" if t.len() == 4 && t[2] == "rows" => {
                let p = t[1]
                    .strip_prefix("GF(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| perr(ln, format!("bad field {:?}", t[1])))?;
                let f = PrimeField::new(num(ln, p)?).map_err(|e| perr(ln, e.to_string()))?;
                field = Some((f, num(ln, t[3])?));
            }
            "col" if t.len() == 3 => {
                let (f, rows) = field.ok_or_else(|| perr(ln, "col before repr"))?;
                let digits: Vec<u8> = t[2]
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as u8).filter(|&d| d < f.p()))
                    .collect::<Option<_>>()
                    .ok_or_else(|| perr(ln, format!("bad digits {:?} for {f}", t[2])))?;
                if digits.len() != rows {
                    return Err(perr(ln, format!("column has {} digits, expected {rows}", digits.len())));
                }
                cols.push((t[1].to_string(), digits));
            }
            other => return Err(perr(ln, format!("unrecognized line starting with {other:?}"))),
        }
    }
    let name = name.ok_or_else(|| perr(1, "missing `matroid <name>` line"))?;
    let elements = elements.ok_or_else(|| perr(last, "missing `elements` line"))?;
    let (matroid, repr) = if let Some((f, rows)) = field {
        if !bases.is_empty() {
            return Err(perr(last, "both basis lines and a repr block"));
        }
        let labels: Vec<String> = cols.iter().map(|c| c.0.clone()).collect();
        if labels != elements {
            return Err(perr(last, "repr columns must follow the elements line"));
        }
        let r = ReprMatroid::new(f, rows, labels, cols.into_iter().map(|c| c.1).collect())?;
        (r.to_matroid()?, Some(r))
    } else {
        (Matroid::from_bases(elements, &bases)?, None)
    };
    if let Some(r) = rank {
        if r != matroid.full_rank() {
            return Err(perr(last, format!("declared rank {r} but the matroid has rank {}", matroid.full_rank())));
        }
    }
    Ok(MtxFile { name, matroid, repr })
}

/// Serialize with a `repr` block when `repr` is given, otherwise with basis lines.
pub fn write_mtx(name: &str, m: &Matroid, repr: Option<&ReprMatroid>) -> String {
    let mut s = format!("matroid {name}\nelements {}\nrank {}\n", m.labels().join(" "), m.full_rank());
    match repr {
        Some(r) => {
            let _ = writeln!(s, "repr {} rows {}", r.field, r.rows);
            for (l, c) in r.labels.iter().zip(&r.cols) {
                let digits: String = c.iter().map(|d| char::from(b'0' + d)).collect();
                let _ = writeln!(s, "col {l} {digits}");
            }
        }
        None => {
            for b in m.basis_labels() {
                let _ = writeln!(s, "basis {}", b.join(" "));
            }
        }
    }
    s
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FansFile {
    pub target: Option<String>,
    pub fans: Vec<Vec<String>>,
}

pub fn parse_fans(text: &str) -> Result<FansFile> {
    let mut out = FansFile::default();
    for (ln, t) in lines(text) {
        match t[0] {
            "target" if t.len() == 2 => out.target = Some(t[1].to_string()),
            "fan" if t.len() >= 4 => out.fans.push(t[1..].iter().map(|s| s.to_string()).collect()),
            "fan" => return Err(perr(ln, "a fan needs at least three elements")),
            other => return Err(perr(ln, format!("unrecognized line starting with {other:?}"))),
        }
    }
    Ok(out)
}

pub fn write_fans(f: &FansFile) -> String {
    let mut s = String::new();
    if let Some(t) = &f.target {
        let _ = writeln!(s, "target {t}");
    }
    for fan in &f.fans {
        let _ = writeln!(s, "fan {}", fan.join(" "));
    }
    s
}

/// Parse a blueprint; `load_core` resolves the `core <file>` line.
pub fn parse_bp(text: &str, load_core: impl Fn(&str) -> Result<ReprMatroid>) -> Result<Blueprint> {
    let mut core = None;
    let mut triangles: Vec<(usize, [String; 3])> = Vec::new();
    let mut ranks: Vec<(usize, usize)> = Vec::new();
    let mut delete = BTreeSet::new();
    for (ln, t) in lines(text) {
        match t[0] {
            "core" if t.len() == 2 => core = Some(load_core(t[1])?),
            "triangle" if t.len() == 5 => triangles.push((num(ln, t[1])?, [t[2].into(), t[3].into(), t[4].into()])),
            "rank" if t.len() == 3 => ranks.push((num(ln, t[1])?, num(ln, t[2])?)),
            "delete" => delete.extend(t[1..].iter().map(|s| s.to_string())),
            other => return Err(perr(ln, format!("unrecognized line starting with {other:?}"))),
        }
    }
    let core = core.ok_or_else(|| perr(1, "missing `core <file>` line"))?;
    let k = triangles.len();
    let mut tri: Vec<Option<[String; 3]>> = vec![None; k];
    let mut rk: Vec<Option<usize>> = vec![None; k];
    for (i, t) in triangles {
        let slot = tri.get_mut(i.wrapping_sub(1)).ok_or_else(|| Error::input(format!("triangle index {i} out of range 1..={k}")))?;
        *slot = Some(t);
    }
    for (i, r) in ranks {
        let slot = rk.get_mut(i.wrapping_sub(1)).ok_or_else(|| Error::input(format!("rank index {i} has no triangle")))?;
        *slot = Some(r);
    }
    let triangles = tri.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| Error::input("triangle indices must be 1..k"))?;
    let ranks = rk.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| Error::input("every triangle needs a rank"))?;
    Ok(Blueprint { core, triangles, ranks, delete })
}

pub fn write_bp(bp: &Blueprint, core_file: &str) -> String {
    let mut s = format!("core {core_file}\n");
    for (i, t) in bp.triangles.iter().enumerate() {
        let _ = writeln!(s, "triangle {} {} {} {}", i + 1, t[0], t[1], t[2]);
    }
    for (i, r) in bp.ranks.iter().enumerate() {
        let _ = writeln!(s, "rank {} {r}", i + 1);
    }
    if !bp.delete.is_empty() {
        let _ = writeln!(s, "delete {}", bp.delete.iter().cloned().collect::<Vec<_>>().join(" "));
    }
    s
}

pub fn parse_graft(text: &str) -> Result<Graft> {
    let mut vertices = None;
    let mut edges = Vec::new();
    let mut gamma = Vec::new();
    let mut label = "g".to_string();
    for (ln, t) in lines(text) {
        match t[0] {
            "vertices" if t.len() == 2 => vertices = Some(num(ln, t[1])?),
            "edge" if t.len() == 4 => edges.push((num(ln, t[1])?, num(ln, t[2])?, t[3].to_string())),
            "label" if t.len() == 2 => label = t[1].to_string(),
            "gamma" => gamma = t[1..].iter().map(|v| num(ln, v)).collect::<Result<_>>()?,
            other => return Err(perr(ln, format!("unrecognized line starting with {other:?}"))),
        }
    }
    let graph = Graph::new(vertices.ok_or_else(|| perr(1, "missing `vertices` line"))?, edges)?;
    Ok(Graft { graph, gamma, label })
}

/// Load a `.mtx` file or, for a name without a path, a catalog entry.
pub fn load_matroid(spec: &str) -> Result<MtxFile> {
    let p = Path::new(spec);
    if p.exists() {
        let text = std::fs::read_to_string(p)?;
        if spec.ends_with(".graft") {
            let r = crate::repr::graft_matroid(&parse_graft(&text)?)?;
            return Ok(MtxFile { name: spec.into(), matroid: r.to_matroid()?, repr: Some(r) });
        }
        return parse_mtx(&text);
    }
    let e = crate::catalog::get(spec)?;
    Ok(MtxFile { name: e.name, matroid: e.matroid, repr: e.repr })
}

/// Machine-readable certifier result.
pub fn write_result(r: &CertResult, trace: &[String]) -> String {
    let mut s = String::new();
    let verdict = match r.verdict {
        Verdict::Certified => "certified",
        Verdict::Counterexample => "counterexample",
    };
    let _ = writeln!(s, "verdict {verdict}");
    if r.relative_to_representation {
        let _ = writeln!(s, "scope relative-to-representation");
    }
    for l in &r.levels {
        let _ = writeln!(s, "level {} generated {} in-class {} checked {}", l.level, l.generated, l.in_class, l.checked);
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(s, "witness-level {}", w.level);
        let _ = writeln!(s, "witness-minor contract {} delete {} map {}", w.minor.contract, w.minor.delete, join(&w.minor.map));
        let m = w.matroid.to_matroid().expect("witness matroid");
        s.push_str("begin-mtx\n");
        s.push_str(&write_mtx("witness", &m, Some(&w.matroid)));
        s.push_str("end-mtx\n");
    }
    for t in trace {
        let _ = writeln!(s, "trace {t}");
    }
    s
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Witness part of a result file: the matroid and its minor witness.
pub fn parse_result_witness(text: &str) -> Result<Option<(usize, ReprMatroid, crate::iso::MinorWitness)>> {
    let Some(start) = text.find("begin-mtx\n") else { return Ok(None) };
    let end = text.find("end-mtx").ok_or_else(|| perr(0, "unterminated witness block"))?;
    let mtx = parse_mtx(&text[start + 10..end])?;
    let repr = mtx.repr.ok_or_else(|| perr(0, "witness without a representation"))?;
    let mut level = 0;
    let mut minor = None;
    for (ln, t) in lines(text) {
        match t[0] {
            "witness-level" if t.len() == 2 => level = num(ln, t[1])?,
            "witness-minor" if t.len() == 7 => {
                let map = t[6].split(',').map(|x| num(ln, x)).collect::<Result<_>>()?;
                minor = Some(crate::iso::MinorWitness { contract: num(ln, t[2])?, delete: num(ln, t[4])?, map });
            }
            _ => {}
        }
    }
    let minor = minor.ok_or_else(|| perr(0, "missing witness-minor line"))?;
    Ok(Some((level, repr, minor)))
}
