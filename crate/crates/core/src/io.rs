//! Serialization: complexes as JSON, Betti tables as text or JSON, meshes as
//! OFF.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{exponent_vector, Cell, LabeledComplex};
use crate::error::{Error, Result};
use crate::linalg::{rank, Backend, IntMatrix};
use crate::monomial::{BlockConfig, Monomial, VarId};
use crate::resolution::{BettiTable, Certificate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub factors: Vec<Vec<String>>,
    pub dim: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub arity: usize,
    pub cells: Vec<CellRecord>,
}

impl From<&LabeledComplex> for ComplexRecord {
    fn from(x: &LabeledComplex) -> Self {
        ComplexRecord {
            arity: x.arity(),
            cells: x
                .cells()
                .iter()
                .map(|c| CellRecord {
                    factors: c
                        .factors()
                        .iter()
                        .map(|u| u.iter().map(VarId::dotted).collect())
                        .collect(),
                    dim: c.dim(),
                    label: c.label().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ComplexRecord> for LabeledComplex {
    type Error = Error;

    fn try_from(rec: ComplexRecord) -> Result<Self> {
        let mut cells = Vec::with_capacity(rec.cells.len());
        for r in rec.cells {
            let factors = r
                .factors
                .iter()
                .map(|u| u.iter().map(|s| VarId::parse_dotted(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let cell = Cell::new(factors)?;
            if cell.dim() != r.dim {
                return Err(Error::InvalidCell(format!("{cell} has dimension {}, record says {}", cell.dim(), r.dim)));
            }
            let label: Monomial = r.label.parse()?;
            if cell.label() != label {
                return Err(Error::InvalidCell(format!("{cell} has label {}, record says {label}", cell.label())));
            }
            cells.push(cell);
        }
        LabeledComplex::from_cells(rec.arity, cells)
    }
}

pub fn complex_to_json(x: &LabeledComplex) -> String {
    serde_json::to_string_pretty(&ComplexRecord::from(x)).expect("serializable") + "\n"
}

pub fn complex_from_json(s: &str) -> Result<LabeledComplex> {
    let rec: ComplexRecord = serde_json::from_str(s)?;
    rec.try_into()
}

/// Betti table laid out with homological degree `i` across and `j - i` down.
pub fn betti_text(table: &BettiTable) -> String {
    let coarse = table.coarse();
    if coarse.is_empty() {
        return "zero module\n".into();
    }
    let max_i = coarse.keys().map(|&(i, _)| i).max().unwrap_or(0);
    let rows: BTreeSet<i64> = coarse.keys().map(|&(i, j)| j as i64 - i as i64).collect();
    let totals = table.totals();
    let mut grid: Vec<(String, Vec<String>)> = Vec::new();
    grid.push((String::new(), (0..=max_i).map(|i| i.to_string()).collect()));
    grid.push(("total:".into(), (0..=max_i).map(|i| totals.get(i).copied().unwrap_or(0).to_string()).collect()));
    for r in rows {
        let cells = (0..=max_i)
            .map(|i| {
                let j = r + i as i64;
                match coarse.get(&(i, j as u32)) {
                    Some(&v) if j >= 0 && v > 0 => v.to_string(),
                    _ => ".".into(),
                }
            })
            .collect();
        grid.push((format!("{r}:"), cells));
    }
    let head = grid.iter().map(|(h, _)| h.len()).max().unwrap_or(0);
    let width = grid.iter().flat_map(|(_, c)| c.iter().map(String::len)).max().unwrap_or(1);
    let mut out = String::new();
    for (h, cells) in grid {
        let mut line = format!("{h:>head$}");
        for c in cells {
            let _ = write!(line, " {c:>width$}");
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn betti_json(table: &BettiTable) -> Value {
    let graded: Vec<Value> = table
        .coarse()
        .into_iter()
        .map(|((i, j), v)| json!({"i": i, "j": j, "value": v}))
        .collect();
    let multigraded: Vec<Value> = table
        .multigraded()
        .iter()
        .map(|((i, b), v)| json!({"i": i, "degree": b.to_string(), "value": v}))
        .collect();
    json!({"totals": table.totals(), "graded": graded, "multigraded": multigraded})
}

/// Configuration echo, with a warning when block sizes are not weakly
/// increasing.
pub fn config_metadata(cfg: &BlockConfig) -> Value {
    let mut v = json!({"n": cfg.n(), "t": cfg.t(), "b": cfg.block_sizes(), "m": cfg.m()});
    if !cfg.is_weakly_increasing() {
        v["warning"] = json!(
            "block sizes are not weakly increasing; the complex is built for this block order as given"
        );
    }
    v
}

pub fn certificate_json(cfg: &BlockConfig, cert: &Certificate) -> Value {
    let d2: Vec<Value> = cert
        .d2
        .violations
        .iter()
        .map(|v| json!({"index": v.index, "source": v.source, "target": v.target, "residue": v.residue.to_string()}))
        .collect();
    let minimal: Vec<Value> = cert
        .minimal
        .violations
        .iter()
        .map(|v| json!({"index": v.index, "source": v.source, "target": v.target, "label": v.label.to_string()}))
        .collect();
    let acyclic: Vec<Value> = cert
        .acyclic
        .failures
        .iter()
        .map(|f| json!({"degree": f.degree.to_string(), "reduced_homology": f.reduced_homology}))
        .collect();
    json!({
        "config": config_metadata(cfg),
        "backend": cert.acyclic.backend.to_string(),
        "passed": cert.passed(),
        "d2": {"passed": cert.d2.passed(), "compositions_checked": cert.d2.compositions_checked, "violations": d2},
        "minimal": {"passed": cert.minimal.passed(), "violations": minimal},
        "acyclic": {"passed": cert.acyclic.passed(), "degrees_checked": cert.acyclic.degrees_checked, "failures": acyclic},
    })
}

pub fn certificate_line(cert: &Certificate) -> String {
    let word = |b: bool| if b { "PASS" } else { "FAIL" };
    format!(
        "d2: {}, minimal: {}, acyclic: {} ({} degrees checked)",
        word(cert.d2.passed()),
        word(cert.minimal.passed()),
        word(cert.acyclic.passed()),
        cert.acyclic.degrees_checked
    )
}

/// Coordinates that carry the affine hull of the points, chosen greedily.
fn hull_coordinates(points: &[Vec<i64>]) -> Vec<usize> {
    let Some(p0) = points.first() else { return Vec::new() };
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = 0;
    for col in 0..p0.len() {
        let mut trial = chosen.clone();
        trial.push(col);
        let mut m = IntMatrix::new(diffs.len(), trial.len());
        for (r, d) in diffs.iter().enumerate() {
            for (c, &k) in trial.iter().enumerate() {
                if d[k] != 0 {
                    m.push(r, c, d[k]);
                }
            }
        }
        let r = rank(&m, Backend::Rational);
        if r > current {
            current = r;
            chosen = trial;
        }
    }
    chosen
}

/// Polyhedral mesh of the cells of dimension at most two. Points are the
/// exponent vectors projected onto coordinates spanning their affine hull;
/// 2-cells are fanned from their smallest vertex and edges outside every
/// 2-cell become two-vertex faces. Hulls of dimension above three are
/// written as `nOFF`.
pub fn off_export(x: &LabeledComplex) -> String {
    let axes = x.variables();
    let vertices: Vec<&Cell> = x.vertices();
    let index: BTreeMap<&Cell, usize> = vertices.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let points: Vec<Vec<i64>> = vertices.iter().map(|c| exponent_vector(&c.label(), &axes)).collect();
    let coords = hull_coordinates(&points);
    let dim = coords.len().max(3);

    let vertex_ids = |c: &Cell| -> Vec<usize> {
        c.faces().iter().filter(|f| f.dim() == 0).map(|f| index[f]).collect()
    };
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut covered: BTreeSet<Cell> = BTreeSet::new();
    for c in x.cells_of_dim(2) {
        let apex = c.faces().into_iter().filter(|f| f.dim() == 0).min().expect("nonempty");
        let a = index[&apex];
        for inc in c.boundary() {
            let ids = vertex_ids(&inc.facet);
            if !ids.contains(&a) {
                faces.push(vec![a, ids[0], ids[1]]);
            }
        }
        covered.extend(c.faces().into_iter().filter(|f| f.dim() == 1));
    }
    for e in x.cells_of_dim(1) {
        if !covered.contains(e) {
            faces.push(vertex_ids(e));
        }
    }

    let mut out = String::new();
    if coords.len() <= 3 {
        out.push_str("OFF\n");
    } else {
        let _ = writeln!(out, "nOFF\n{dim}");
    }
    for (k, c) in vertices.iter().enumerate() {
        let _ = writeln!(out, "# vertex {k}: {}", c.label());
    }
    let _ = writeln!(out, "{} {} 0", vertices.len(), faces.len());
    for p in &points {
        let mut row: Vec<String> = coords.iter().map(|&k| p[k].to_string()).collect();
        row.resize(dim, "0".into());
        let _ = writeln!(out, "{}", row.join(" "));
    }
    for f in faces {
        let ids: Vec<String> = f.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{} {}", f.len(), ids.join(" "));
    }
    out
}
