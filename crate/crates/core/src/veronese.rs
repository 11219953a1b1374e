//! Squarefree Veronese ideals: all blocks have size one, variable `x_i` is
//! `x[i,1]`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::complex::LabeledComplex;
use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::linalg::Backend;
use crate::monomial::{BlockConfig, Monomial, VarId};
use crate::resolution::reduced_homology;

/// A monomial in `y_1, ..., y_s`; `exps[k]` is the exponent of `y_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YMonomial {
    exps: Vec<u32>,
}

impl YMonomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        YMonomial { exps }
    }

    pub fn exponent(&self, k: usize) -> u32 {
        k.checked_sub(1).and_then(|i| self.exps.get(i)).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Largest index with a nonzero exponent.
    pub fn max_index(&self) -> usize {
        self.exps.len()
    }

    /// Indices with multiplicity, ascending.
    fn indices(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .flat_map(|(k, &e)| std::iter::repeat_n(k + 1, e as usize))
            .collect()
    }
}

impl fmt::Display for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, &e)| if e == 1 { format!("y{}", k + 1) } else { format!("y{}^{}", k + 1, e) })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Parses `i`, `i^e` with the given letter prefix, also `letter[i]`.
fn parse_indexed(tok: &str, letter: char) -> Result<(usize, u32)> {
    let bad = || Error::Parse(format!("expected {letter}<index>[^exp], got `{tok}`"));
    let rest = tok.trim().strip_prefix(letter).ok_or_else(bad)?;
    let (idx, exp) = match rest.split_once('^') {
        Some((i, e)) => (i, e.trim().parse::<u32>().map_err(|_| bad())?),
        None => (rest, 1),
    };
    let idx = idx.trim().trim_start_matches('[').trim_end_matches(']');
    let idx: usize = idx.parse().map_err(|_| bad())?;
    if idx == 0 {
        return Err(bad());
    }
    Ok((idx, exp))
}

impl FromStr for YMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(YMonomial::new(Vec::new()));
        }
        let mut exps = Vec::new();
        for tok in s.split('*') {
            let (i, e) = parse_indexed(tok, 'y')?;
            if exps.len() < i {
                exps.resize(i, 0);
            }
            exps[i - 1] += e;
        }
        Ok(YMonomial::new(exps))
    }
}

/// `x_i` as the variable `x[i,1]`.
pub fn x(i: usize) -> VarId {
    VarId::new(i as u16, 1)
}

/// Reads `x1*x3*x4`, or anything the general monomial parser accepts.
pub fn parse_x_monomial(s: &str) -> Result<Monomial> {
    if s.contains('[') {
        return s.parse();
    }
    let mut pairs = Vec::new();
    for tok in s.split('*') {
        let (i, e) = parse_indexed(tok, 'x')?;
        pairs.push((x(i), e));
    }
    Ok(Monomial::from_exponents(pairs))
}

/// Writes a monomial in `x[i,1]` variables as `x1*x3*x4`.
pub fn format_x_monomial(mono: &Monomial) -> String {
    if mono.is_one() {
        return "1".into();
    }
    mono.exponents()
        .iter()
        .map(|&(v, e)| {
            let name = if v.index == 1 { format!("x{}", v.block) } else { v.to_string() };
            if e == 1 { name } else { format!("{name}^{e}") }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// `x_{i_1} ⋯ x_{i_t} ↦ y_{i_1} y_{i_2 - 1} ⋯ y_{i_t - t + 1}`.
pub fn depolarize(mono: &Monomial, m: usize, t: usize) -> Result<YMonomial> {
    if !mono.is_squarefree() {
        return Err(Error::Unexpected {
            expected: "a squarefree monomial".into(),
            got: mono.to_string(),
        });
    }
    if mono.degree() as usize != t {
        return Err(Error::Unexpected {
            expected: format!("degree {t}"),
            got: format!("{mono} of degree {}", mono.degree()),
        });
    }
    let vars = mono.support();
    if let Some(v) = vars.iter().find(|v| v.index != 1 || v.block as usize > m) {
        return Err(Error::IndexOutOfRange(format!("{v} is not one of x_1..x_{m}")));
    }
    let s = m + 1 - t;
    let mut exps = vec![0u32; s];
    for (k, v) in vars.iter().enumerate() {
        exps[v.block as usize - k - 1] += 1;
    }
    Ok(YMonomial::new(exps))
}

/// Inverse of [`depolarize`].
pub fn polarize(y: &YMonomial, m: usize, t: usize) -> Result<Monomial> {
    if y.degree() as usize != t {
        return Err(Error::Unexpected {
            expected: format!("degree {t}"),
            got: format!("{y} of degree {}", y.degree()),
        });
    }
    let s = (m + 1).checked_sub(t).ok_or_else(|| Error::InvalidConfig(format!("t = {t} exceeds m = {m}")))?;
    if y.max_index() > s {
        return Err(Error::IndexOutOfRange(format!("{y} uses an index above s = {s}")));
    }
    Ok(Monomial::from_vars(y.indices().into_iter().enumerate().map(|(k, c)| x(c + k))))
}

/// All monomials of degree `t` in `y_1..y_s`, ascending.
pub fn y_power_generators(s: usize, t: usize) -> Vec<YMonomial> {
    fn go(s: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<YMonomial>) {
        if prefix.len() + 1 == s {
            prefix.push(left);
            out.push(YMonomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            go(s, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if s > 0 {
        go(s, t as u32, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// The `m - t + 1` consecutive products `x_i ⋯ x_{i+t-1}`.
pub fn corner_vertices(m: usize, t: usize) -> Vec<Monomial> {
    (1..=m + 1 - t)
        .map(|i| Monomial::from_vars((i..i + t).map(x)))
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// One named check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VeroneseReport {
    pub m: usize,
    pub t: usize,
    pub f_vector: Vec<usize>,
    pub checks: Vec<Check>,
}

impl VeroneseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VeroneseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m={} t={} f={:?}", self.m, self.t, self.f_vector)?;
        for c in &self.checks {
            writeln!(f, "{}: {} ({})", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail)?;
        }
        Ok(())
    }
}

/// Counts, per codimension-one cell, the maximal cells containing it.
fn worst_ridge_count(x: &LabeledComplex, top: usize) -> usize {
    if top == 0 {
        return 0;
    }
    let mut counts = std::collections::BTreeMap::new();
    for c in x.cells_of_dim(top) {
        for inc in c.boundary() {
            *counts.entry(inc.facet).or_insert(0usize) += 1;
        }
    }
    counts.values().copied().max().unwrap_or(0)
}

/// Necessary conditions for the complex of the squarefree Veronese ideal to
/// subdivide the `(m - t)`-simplex.
pub fn veronese_checks(m: usize, t: usize, backend: Backend) -> Result<VeroneseReport> {
    let cfg = BlockConfig::veronese(m, t)?;
    let x = gamma(&cfg)?;
    let f_vector = x.f_vector();
    let top = m - t;
    let mut checks = Vec::new();

    let dim = x.dim();
    checks.push(Check {
        name: "pure",
        passed: x.is_pure() && dim == Some(top),
        detail: format!("dim {}, expected {top}", dim.map_or("none".into(), |d| d.to_string())),
    });
    let maximal = x.maximal_cells().len();
    let want = binomial(m - 1, t - 1);
    checks.push(Check {
        name: "maximal cells",
        passed: maximal == want,
        detail: format!("{maximal}, expected {want}"),
    });
    let chi = x.euler_characteristic();
    let h = reduced_homology(&x, backend)?;
    checks.push(Check {
        name: "acyclic",
        passed: chi == 1 && h.iter().all(|&v| v == 0),
        detail: format!("euler {chi}, reduced homology {h:?}"),
    });
    let worst = worst_ridge_count(&x, top);
    checks.push(Check {
        name: "pseudomanifold",
        passed: worst <= 2,
        detail: format!("most maximal cells on one ridge: {worst}"),
    });
    let vertices = f_vector.first().copied().unwrap_or(0);
    let want = binomial(m, t);
    checks.push(Check {
        name: "vertices",
        passed: vertices == want,
        detail: format!("{vertices}, expected {want}"),
    });
    let labels = x.vertex_labels();
    let corners = corner_vertices(m, t);
    let missing: Vec<String> = corners.iter().filter(|c| !labels.contains(c)).map(|c| c.to_string()).collect();
    checks.push(Check {
        name: "corners",
        passed: missing.is_empty() && corners.len() == top + 1,
        detail: if missing.is_empty() {
            format!("{} corner vertices present", corners.len())
        } else {
            format!("missing {}", missing.join(", "))
        },
    });
    Ok(VeroneseReport {
        m,
        t,
        f_vector,
        checks,
    })
}
