//! Variables grouped in blocks, monomials, and monomial ideals.
//!
//! The polynomial ring has variables `x[i,j]` for block `i` in `1..=n` and
//! `j` in `1..=b_i`. Every ordering in the crate is derived from the
//! lexicographic `(block, index)` order on variables.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A variable `x[block,index]`, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub block: u16,
    pub index: u16,
}

impl VarId {
    pub const fn new(block: u16, index: u16) -> Self {
        VarId { block, index }
    }

    /// `"i.j"`, the spelling used in JSON exports.
    pub fn dotted(&self) -> String {
        format!("{}.{}", self.block, self.index)
    }

    pub fn parse_dotted(s: &str) -> Result<Self> {
        let (b, i) = s
            .split_once('.')
            .ok_or_else(|| Error::Parse(format!("variable id `{s}` is not of the form i.j")))?;
        let block = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad block in `{s}`")))?;
        let index = i
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in `{s}`")))?;
        if block == 0 || index == 0 {
            return Err(Error::Parse(format!("variable ids are 1-based: `{s}`")));
        }
        Ok(VarId { block, index })
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.block, self.index)
    }
}

#[derive(Serialize, Deserialize)]
struct RawBlockConfig {
    n: usize,
    t: usize,
    b: Vec<usize>,
}

/// The parameters `(n, t, b_1..b_n)` of a transversal ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBlockConfig", into = "RawBlockConfig")]
pub struct BlockConfig {
    t: usize,
    b: Vec<usize>,
}

impl TryFrom<RawBlockConfig> for BlockConfig {
    type Error = Error;

    fn try_from(raw: RawBlockConfig) -> Result<Self> {
        if raw.b.len() != raw.n {
            return Err(Error::InvalidConfig(format!(
                "n = {} but {} block sizes given",
                raw.n,
                raw.b.len()
            )));
        }
        BlockConfig::new(raw.t, raw.b)
    }
}

impl From<BlockConfig> for RawBlockConfig {
    fn from(cfg: BlockConfig) -> Self {
        RawBlockConfig {
            n: cfg.n(),
            t: cfg.t,
            b: cfg.b,
        }
    }
}

impl BlockConfig {
    pub fn new(t: usize, b: Vec<usize>) -> Result<Self> {
        let n = b.len();
        if n == 0 {
            return Err(Error::InvalidConfig("at least one block is required".into()));
        }
        if n > u16::MAX as usize {
            return Err(Error::InvalidConfig(format!("too many blocks ({n})")));
        }
        if t < 1 || t > n {
            return Err(Error::InvalidConfig(format!("t = {t} must satisfy 1 <= t <= n = {n}")));
        }
        if let Some(pos) = b.iter().position(|&x| x == 0 || x > u16::MAX as usize) {
            return Err(Error::InvalidConfig(format!(
                "block size b_{} = {} must be a positive 16-bit integer",
                pos + 1,
                b[pos]
            )));
        }
        Ok(BlockConfig { t, b })
    }

    /// All blocks of size one: the squarefree Veronese case.
    pub fn veronese(m: usize, t: usize) -> Result<Self> {
        Self::new(t, vec![1; m])
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.b
    }

    pub fn m(&self) -> usize {
        self.b.iter().sum()
    }

    /// Block sizes are normally listed as `b_1 <= ... <= b_n`; other orders
    /// are accepted and only flagged.
    pub fn is_weakly_increasing(&self) -> bool {
        self.b.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_veronese(&self) -> bool {
        self.b.iter().all(|&x| x == 1)
    }

    /// Variables of block `j`, in order.
    pub fn block_vars(&self, j: usize) -> Result<Vec<VarId>> {
        self.check_block(j)?;
        Ok((1..=self.b[j - 1])
            .map(|i| VarId::new(j as u16, i as u16))
            .collect())
    }

    /// Variables of blocks `r..=s`, in order.
    pub fn range_vars(&self, r: usize, s: usize) -> Result<Vec<VarId>> {
        if r > s {
            return Err(Error::IndexOutOfRange(format!("block range {r}..={s} is empty")));
        }
        let mut out = Vec::new();
        for j in r..=s {
            out.extend(self.block_vars(j)?);
        }
        Ok(out)
    }

    pub fn variables(&self) -> Vec<VarId> {
        self.range_vars(1, self.n()).expect("full range is valid")
    }

    /// Position of `v` in the canonical variable order, if it belongs to this ring.
    pub fn var_position(&self, v: VarId) -> Option<usize> {
        let j = v.block as usize;
        if j == 0 || j > self.n() || v.index == 0 || v.index as usize > self.b[j - 1] {
            return None;
        }
        Some(self.b[..j - 1].iter().sum::<usize>() + v.index as usize - 1)
    }

    /// The configuration on the first `p` blocks with degree `q`.
    pub fn prefix(&self, p: usize, q: usize) -> Result<Self> {
        if p == 0 || p > self.n() {
            return Err(Error::IndexOutOfRange(format!(
                "prefix length {p} not in 1..={}",
                self.n()
            )));
        }
        Self::new(q, self.b[..p].to_vec())
    }

    fn check_block(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n() {
            return Err(Error::IndexOutOfRange(format!("block {j} not in 1..={}", self.n())));
        }
        Ok(())
    }
}

impl fmt::Display for BlockConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        write!(f, "n={} t={} b=({})", self.n(), self.t, b.join(","))
    }
}

/// A monomial as a sparse exponent vector, sorted by variable, with no
/// zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    /// Product of the given variables, repetitions raising exponents.
    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        Self::from_exponents(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn from_exponents<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Self {
        let mut exps: Vec<(VarId, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        exps.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(VarId, u32)> = Vec::with_capacity(exps.len());
        for (v, e) in exps {
            match merged.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { exps: merged }
    }

    pub fn exponents(&self) -> &[(VarId, u32)] {
        &self.exps
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.exps
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&(_, e)| e == 1)
    }

    pub fn support(&self) -> Vec<VarId> {
        self.exps.iter().map(|&(v, _)| v).collect()
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        let mut it = other.exps.iter().peekable();
        'outer: for &(v, e) in &self.exps {
            while let Some(&&(w, f)) = it.peek() {
                match w.cmp(&v) {
                    Ordering::Less => {
                        it.next();
                    }
                    Ordering::Equal => {
                        if f < e {
                            return false;
                        }
                        it.next();
                        continue 'outer;
                    }
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    fn merge_with(&self, other: &Monomial, op: impl Fn(u32, u32) -> u32) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(&(v, e)), Some(&(w, f))) => match v.cmp(&w) {
                    Ordering::Less => {
                        i += 1;
                        (v, op(e, 0))
                    }
                    Ordering::Greater => {
                        j += 1;
                        (w, op(0, f))
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (v, op(e, f))
                    }
                },
                (Some(&(v, e)), None) => {
                    i += 1;
                    (v, op(e, 0))
                }
                (None, Some(&(w, f))) => {
                    j += 1;
                    (w, op(0, f))
                }
                (None, None) => unreachable!(),
            };
            if next.1 > 0 {
                out.push(next);
            }
        }
        Monomial { exps: out }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, u32::max)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, u32::min)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, |a, b| a + b)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        other
            .divides(self)
            .then(|| self.merge_with(other, |a, b| a - b))
    }

    /// The variables with multiplicity, in canonical order.
    pub fn expanded(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps
            .iter()
            .flat_map(|&(v, e)| std::iter::repeat_n(v, e as usize))
    }
}

/// Lexicographic on the expanded variable lists, so `x[1,1]*x[2,1]` sorts
/// before `x[1,1]*x[2,2]` and a proper prefix sorts first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.expanded().cmp(other.expanded())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Parses `x[i,j]^e` factors joined by `*`; `1` is the unit monomial.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut pairs = Vec::new();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (var, exp) = match factor.split_once('^') {
                Some((v, e)) => (
                    v.trim(),
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            let inner = var
                .strip_prefix("x[")
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected x[i,j], got `{var}`")))?;
            let (b, i) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected x[i,j], got `{var}`")))?;
            let v = VarId::parse_dotted(&format!("{}.{}", b.trim(), i.trim()))?;
            pairs.push((v, exp));
        }
        Ok(Monomial::from_exponents(pairs))
    }
}

/// A monomial ideal, stored by its minimal generators in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MonomialIdeal {
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn zero() -> Self {
        MonomialIdeal { gens: Vec::new() }
    }

    pub fn unit() -> Self {
        MonomialIdeal {
            gens: vec![Monomial::one()],
        }
    }

    pub fn from_generators<I: IntoIterator<Item = Monomial>>(gens: I) -> Self {
        minimalize(gens)
    }

    /// Ideal generated by variables.
    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        minimalize(vars.into_iter().map(Monomial::var))
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Ideal containment `self ⊆ other`.
    pub fn is_subideal_of(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn lcm_of_generators(&self) -> Monomial {
        self.gens.iter().fold(Monomial::one(), |acc, g| acc.lcm(g))
    }

    /// Some(d) if every minimal generator has degree d.
    pub fn common_degree(&self) -> Option<u32> {
        let d = self.gens.first()?.degree();
        self.gens.iter().all(|g| g.degree() == d).then_some(d)
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        ideal_sum(self, other)
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        ideal_product(self, other)
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        ideal_intersect(self, other)
    }
}

impl fmt::Display for MonomialIdeal {
    /// One generator per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gens {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for MonomialIdeal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let gens = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(Monomial::from_str)
            .collect::<Result<Vec<_>>>()?;
        Ok(minimalize(gens))
    }
}

/// Drops duplicates and generators divisible by another one, then sorts.
pub fn minimalize<I: IntoIterator<Item = Monomial>>(gens: I) -> MonomialIdeal {
    let mut all: Vec<Monomial> = gens.into_iter().collect();
    all.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    all.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(all.len());
    for g in all {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort();
    MonomialIdeal { gens: kept }
}

pub fn ideal_sum(a: &MonomialIdeal, b: &MonomialIdeal) -> MonomialIdeal {
    minimalize(a.gens.iter().chain(&b.gens).cloned())
}

pub fn ideal_product(a: &MonomialIdeal, b: &MonomialIdeal) -> MonomialIdeal {
    minimalize(
        a.gens
            .iter()
            .flat_map(|g| b.gens.iter().map(move |h| g.mul(h))),
    )
}

/// Pairwise lcms generate the intersection of two monomial ideals.
pub fn ideal_intersect(a: &MonomialIdeal, b: &MonomialIdeal) -> MonomialIdeal {
    minimalize(
        a.gens
            .iter()
            .flat_map(|g| b.gens.iter().map(move |h| g.lcm(h))),
    )
}

pub fn lcm(a: &Monomial, b: &Monomial) -> Monomial {
    a.lcm(b)
}

pub fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.divides(b)
}

/// Generators `x[j1,a1]*...*x[jt,at]` for `j1 < ... < jt`, in canonical order.
pub fn transversal_generators(cfg: &BlockConfig) -> MonomialIdeal {
    let mut gens = Vec::new();
    let mut stack: Vec<VarId> = Vec::with_capacity(cfg.t());
    fn rec(cfg: &BlockConfig, from_block: usize, stack: &mut Vec<VarId>, out: &mut Vec<Monomial>) {
        if stack.len() == cfg.t() {
            out.push(Monomial::from_vars(stack.iter().copied()));
            return;
        }
        let remaining = cfg.t() - stack.len();
        for j in from_block..=cfg.n() + 1 - remaining {
            for i in 1..=cfg.block_sizes()[j - 1] {
                stack.push(VarId::new(j as u16, i as u16));
                rec(cfg, j + 1, stack, out);
                stack.pop();
            }
        }
    }
    rec(cfg, 1, &mut stack, &mut gens);
    // enumeration order is already canonical; minimalize only sorts
    minimalize(gens)
}

/// `P_j`, the ideal of the variables of block `j`.
pub fn prime_block(cfg: &BlockConfig, j: usize) -> Result<MonomialIdeal> {
    Ok(MonomialIdeal::from_vars(cfg.block_vars(j)?))
}

/// `Q_r(s) = P_r + ... + P_s`.
pub fn q_range(cfg: &BlockConfig, r: usize, s: usize) -> Result<MonomialIdeal> {
    Ok(MonomialIdeal::from_vars(cfg.range_vars(r, s)?))
}

/// `I_{p,q}` on the first `p` blocks: the unit ideal for `q = 0` and the zero
/// ideal for `q > p`.
pub fn transversal_prefix(cfg: &BlockConfig, p: usize, q: usize) -> Result<MonomialIdeal> {
    if p > cfg.n() {
        return Err(Error::IndexOutOfRange(format!("prefix {p} > n = {}", cfg.n())));
    }
    if q == 0 {
        return Ok(MonomialIdeal::unit());
    }
    if q > p {
        return Ok(MonomialIdeal::zero());
    }
    Ok(transversal_generators(&cfg.prefix(p, q)?))
}
