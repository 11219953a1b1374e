//! Cellular chain complexes, Betti tables and the checks that certify a
//! labeled complex supports a minimal free resolution.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::complex::LabeledComplex;
use crate::error::{Error, Result};
use crate::linalg::{rank, Backend, IntMatrix};
use crate::monomial::{Monomial, MonomialIdeal, VarId};

/// Largest generating set for which the inclusion-exclusion side of the
/// Hilbert numerator check is expanded.
pub const HILBERT_GENERATOR_CAP: usize = 20;
/// Largest generating set accepted by [`taylor_complex`].
pub const TAYLOR_GENERATOR_CAP: usize = 16;

/// A sparse polynomial with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, i64>,
}

impl Polynomial {
    pub fn add_term(&mut self, m: Monomial, c: i64) {
        let e = self.terms.entry(m.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, i64> {
        &self.terms
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            match (k, *c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub multidegree: Monomial,
}

impl Generator {
    pub fn degree(&self) -> u32 {
        self.multidegree.degree()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedFreeModule {
    pub generators: Vec<Generator>,
}

impl GradedFreeModule {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// One entry `sign * coefficient` of a differential, sending basis element
/// `source` of `F_{i+1}` to basis element `target` of `F_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffEntry {
    pub source: usize,
    pub target: usize,
    pub sign: i8,
    pub coefficient: Monomial,
}

/// `F_0 <- F_1 <- ... <- F_d` with monomial-scaled differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    modules: Vec<GradedFreeModule>,
    /// `differentials[i]` maps `F_{i+1}` to `F_i`.
    differentials: Vec<Vec<DiffEntry>>,
}

impl ChainComplex {
    pub fn modules(&self) -> &[GradedFreeModule] {
        &self.modules
    }

    /// The map `F_{i+1} -> F_i`.
    pub fn differential(&self, i: usize) -> &[DiffEntry] {
        &self.differentials[i]
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(GradedFreeModule::rank).collect()
    }

    /// Negates the entry of `F_{i+1} -> F_i` at `(source, target)`. Returns
    /// whether such an entry exists.
    pub fn negate_entry(&mut self, i: usize, source: usize, target: usize) -> bool {
        match self
            .differentials
            .get_mut(i)
            .and_then(|d| d.iter_mut().find(|e| e.source == source && e.target == target))
        {
            Some(e) => {
                e.sign = -e.sign;
                true
            }
            None => false,
        }
    }

    fn entries_by_source(&self, i: usize) -> Vec<Vec<&DiffEntry>> {
        let mut by: Vec<Vec<&DiffEntry>> = vec![Vec::new(); self.modules[i + 1].rank()];
        for e in &self.differentials[i] {
            by[e.source].push(e);
        }
        by
    }
}

/// The cellular complex: one generator per cell in degree of its label,
/// `∂F = Σ ε(F,F') (m_F / m_F') F'`.
pub fn cellular_complex(x: &LabeledComplex) -> Result<ChainComplex> {
    let Some(top) = x.dim() else {
        return Err(Error::Unexpected {
            expected: "a nonempty complex".into(),
            got: "the empty complex".into(),
        });
    };
    let by_dim: Vec<Vec<_>> = (0..=top).map(|d| x.cells_of_dim(d)).collect();
    let modules = by_dim
        .iter()
        .map(|cells| GradedFreeModule {
            generators: cells
                .iter()
                .map(|c| Generator {
                    name: c.to_string(),
                    multidegree: c.label(),
                })
                .collect(),
        })
        .collect();
    let mut differentials = Vec::with_capacity(top);
    for d in 1..=top {
        let index: HashMap<_, usize> = by_dim[d - 1].iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut entries = Vec::new();
        for (s, c) in by_dim[d].iter().enumerate() {
            let label = c.label();
            for pair in c.boundary() {
                let target = *index
                    .get(&pair.facet)
                    .ok_or_else(|| Error::NotFaceClosed(pair.facet.to_string()))?;
                let coefficient = label
                    .div(&pair.facet.label())
                    .expect("face labels divide cell labels");
                entries.push(DiffEntry {
                    source: s,
                    target,
                    sign: pair.sign,
                    coefficient,
                });
            }
        }
        differentials.push(entries);
    }
    Ok(ChainComplex {
        modules,
        differentials,
    })
}

/// The Taylor complex on a list of monomials: generators are nonempty
/// subsets in degree of their lcm. The list need not be minimal.
pub fn taylor_complex(gens: &[Monomial]) -> Result<ChainComplex> {
    let r = gens.len();
    if r == 0 {
        return Err(Error::Unexpected {
            expected: "a nonzero ideal".into(),
            got: "the zero ideal".into(),
        });
    }
    if r > TAYLOR_GENERATOR_CAP {
        return Err(Error::SizeCap {
            what: "|G(I)| for the Taylor complex",
            value: r,
            limit: TAYLOR_GENERATOR_CAP,
        });
    }
    let mut subsets: Vec<Vec<u32>> = vec![Vec::new(); r];
    for mask in 1u32..(1 << r) {
        subsets[mask.count_ones() as usize - 1].push(mask);
    }
    let lcm_of = |mask: u32| {
        (0..r)
            .filter(|k| mask >> k & 1 == 1)
            .fold(Monomial::one(), |acc, k| acc.lcm(&gens[k]))
    };
    let modules = subsets
        .iter()
        .map(|masks| GradedFreeModule {
            generators: masks
                .iter()
                .map(|&mask| Generator {
                    name: format!(
                        "{{{}}}",
                        (0..r)
                            .filter(|k| mask >> k & 1 == 1)
                            .map(|k| gens[k].to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                    multidegree: lcm_of(mask),
                })
                .collect(),
        })
        .collect::<Vec<_>>();
    let mut differentials = Vec::new();
    for d in 1..r {
        let index: HashMap<u32, usize> = subsets[d - 1].iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let mut entries = Vec::new();
        for (s, &mask) in subsets[d].iter().enumerate() {
            let label = lcm_of(mask);
            for (p, k) in (0..r).filter(|k| mask >> k & 1 == 1).enumerate() {
                let face = mask & !(1 << k);
                entries.push(DiffEntry {
                    source: s,
                    target: index[&face],
                    sign: if p % 2 == 0 { 1 } else { -1 },
                    coefficient: label.div(&lcm_of(face)).expect("lcm of a subset divides"),
                });
            }
        }
        differentials.push(entries);
    }
    Ok(ChainComplex {
        modules,
        differentials,
    })
}

/// A nonzero entry of `∂∘∂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Violation {
    /// Homological index of the source.
    pub index: usize,
    pub source: String,
    pub target: String,
    pub residue: Polynomial,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct D2Report {
    pub compositions_checked: usize,
    pub violations: Vec<D2Violation>,
}

impl D2Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Multiplies consecutive differentials symbolically.
pub fn check_d2(c: &ChainComplex) -> D2Report {
    let mut report = D2Report::default();
    for i in 0..c.differentials.len().saturating_sub(1) {
        report.compositions_checked += 1;
        let lower = c.entries_by_source(i);
        let upper = c.entries_by_source(i + 1);
        for (s, outs) in upper.iter().enumerate() {
            let mut acc: BTreeMap<usize, Polynomial> = BTreeMap::new();
            for e in outs {
                for f in &lower[e.target] {
                    acc.entry(f.target)
                        .or_default()
                        .add_term(e.coefficient.mul(&f.coefficient), (e.sign * f.sign) as i64);
                }
            }
            for (t, residue) in acc {
                if !residue.is_zero() {
                    report.violations.push(D2Violation {
                        index: i + 2,
                        source: c.modules[i + 2].generators[s].name.clone(),
                        target: c.modules[i].generators[t].name.clone(),
                        residue,
                    });
                }
            }
        }
    }
    report
}

/// An incident pair with equal labels, i.e. a unit entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityViolation {
    pub index: usize,
    pub source: String,
    pub target: String,
    pub label: Monomial,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinimalityReport {
    pub pairs_checked: usize,
    pub violations: Vec<MinimalityViolation>,
}

impl MinimalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_minimal_chain(c: &ChainComplex) -> MinimalityReport {
    let mut report = MinimalityReport::default();
    for (i, d) in c.differentials.iter().enumerate() {
        for e in d {
            report.pairs_checked += 1;
            if e.coefficient.is_one() {
                let src = &c.modules[i + 1].generators[e.source];
                report.violations.push(MinimalityViolation {
                    index: i + 1,
                    source: src.name.clone(),
                    target: c.modules[i].generators[e.target].name.clone(),
                    label: src.multidegree.clone(),
                });
            }
        }
    }
    report
}

/// No codimension-one face carries the same label as its cell.
pub fn check_minimal(x: &LabeledComplex) -> MinimalityReport {
    let mut report = MinimalityReport::default();
    for cell in x.cells() {
        let pairs = cell.boundary();
        if pairs.is_empty() {
            continue;
        }
        let label = cell.label();
        for pair in pairs {
            report.pairs_checked += 1;
            if pair.facet.label() == label {
                report.violations.push(MinimalityViolation {
                    index: cell.dim(),
                    source: cell.to_string(),
                    target: pair.facet.to_string(),
                    label: label.clone(),
                });
            }
        }
    }
    report
}

/// Dense exponent vectors over a fixed list of variables.
struct Packer {
    axes: Vec<VarId>,
}

impl Packer {
    fn new<'a, I: IntoIterator<Item = &'a Monomial>>(monos: I) -> Self {
        let axes: BTreeSet<VarId> = monos.into_iter().flat_map(|m| m.support()).collect();
        Packer {
            axes: axes.into_iter().collect(),
        }
    }

    fn pack(&self, m: &Monomial) -> Vec<u32> {
        self.axes.iter().map(|&v| m.exponent(v)).collect()
    }

    fn unpack(&self, e: &[u32]) -> Monomial {
        Monomial::from_exponents(self.axes.iter().copied().zip(e.iter().copied()))
    }
}

fn packed_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn packed_lattice(gens: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let gens: Vec<Vec<u32>> = gens.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut seen: HashSet<Vec<u32>> = gens.iter().cloned().collect();
    let mut queue = gens.clone();
    while let Some(m) = queue.pop() {
        for g in &gens {
            let l: Vec<u32> = m.iter().zip(g).map(|(a, b)| *a.max(b)).collect();
            if !seen.contains(&l) {
                seen.insert(l.clone());
                queue.push(l);
            }
        }
    }
    seen.into_iter().collect()
}

/// Closure of `labels` under pairwise lcm, sorted.
pub fn lcm_lattice(labels: &[Monomial]) -> Vec<Monomial> {
    let packer = Packer::new(labels);
    let packed: Vec<Vec<u32>> = labels.iter().map(|m| packer.pack(m)).collect();
    let mut out: Vec<Monomial> = packed_lattice(&packed).iter().map(|e| packer.unpack(e)).collect();
    out.sort();
    out
}

/// Reduced homology of one degree strand, `dims[k] = dim H̃_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
    pub degree: Monomial,
    pub reduced_homology: Vec<usize>,
}

impl DegreeHomology {
    pub fn vanishes(&self) -> bool {
        self.reduced_homology.iter().all(|&h| h == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub backend: Backend,
    pub degrees_checked: usize,
    pub failures: Vec<DegreeHomology>,
}

impl AcyclicityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Reduced homology of the subcomplex of generators whose multidegree
/// divides `degree`, with all monomial coefficients set to one. `None` if
/// that subcomplex is empty.
pub fn strand_homology(c: &ChainComplex, degree: &Monomial, backend: Backend) -> Option<DegreeHomology> {
    let packer = Packer::new(c.modules.iter().flat_map(|m| m.generators.iter().map(|g| &g.multidegree)));
    let packed = pack_modules(c, &packer);
    strand_homology_packed(c, &packed, &packer.pack(degree), backend).map(|reduced_homology| DegreeHomology {
        degree: degree.clone(),
        reduced_homology,
    })
}

fn pack_modules(c: &ChainComplex, packer: &Packer) -> Vec<Vec<Vec<u32>>> {
    c.modules
        .iter()
        .map(|m| m.generators.iter().map(|g| packer.pack(&g.multidegree)).collect())
        .collect()
}

fn strand_homology_packed(
    c: &ChainComplex,
    packed: &[Vec<Vec<u32>>],
    degree: &[u32],
    backend: Backend,
) -> Option<Vec<usize>> {
    let selected: Vec<Vec<Option<usize>>> = packed
        .iter()
        .map(|m| {
            let mut next = 0;
            m.iter()
                .map(|g| {
                    packed_divides(g, degree).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    if !selected.first().is_some_and(|v| v.iter().any(Option::is_some)) {
        return None;
    }
    let mut strand = Strand::new(c, &selected);
    strand.cancel_free_pairs();
    Some(strand.reduced_homology(backend))
}

/// A strand as a based complex, for cancelling free pairs before taking
/// ranks.
struct Strand {
    dim: Vec<usize>,
    /// `(facet, sign)` per cell.
    facets: Vec<Vec<(usize, i8)>>,
    cofaces: Vec<Vec<usize>>,
    coface_count: Vec<usize>,
    alive: Vec<bool>,
}

impl Strand {
    fn new(c: &ChainComplex, selected: &[Vec<Option<usize>>]) -> Self {
        let mut offsets = Vec::with_capacity(selected.len());
        let mut dim = Vec::new();
        for (k, s) in selected.iter().enumerate() {
            offsets.push(dim.len());
            dim.extend(s.iter().filter(|x| x.is_some()).map(|_| k));
        }
        let total = dim.len();
        let mut facets = vec![Vec::new(); total];
        let mut cofaces = vec![Vec::new(); total];
        for (i, d) in c.differentials.iter().enumerate() {
            for e in d {
                if let (Some(r), Some(col)) = (selected[i + 1][e.source], selected[i][e.target]) {
                    let (hi, lo) = (offsets[i + 1] + r, offsets[i] + col);
                    facets[hi].push((lo, e.sign));
                    cofaces[lo].push(hi);
                }
            }
        }
        let coface_count = cofaces.iter().map(Vec::len).collect();
        Strand {
            dim,
            facets,
            cofaces,
            coface_count,
            alive: vec![true; total],
        }
    }

    /// Repeatedly removes a cell with a single coface together with that
    /// coface, when the coface is itself maximal. The remaining cells span a
    /// subcomplex with the same homology.
    fn cancel_free_pairs(&mut self) {
        let mut queue: Vec<usize> = (0..self.dim.len()).filter(|&g| self.coface_count[g] == 1).collect();
        while let Some(low) = queue.pop() {
            if !self.alive[low] || self.coface_count[low] != 1 {
                continue;
            }
            let high = *self.cofaces[low].iter().find(|&&h| self.alive[h]).expect("one live coface");
            if self.coface_count[high] != 0 {
                continue;
            }
            self.alive[low] = false;
            self.alive[high] = false;
            for cell in [high, low] {
                for k in 0..self.facets[cell].len() {
                    let f = self.facets[cell][k].0;
                    if !self.alive[f] {
                        continue;
                    }
                    self.coface_count[f] -= 1;
                    match self.coface_count[f] {
                        1 => queue.push(f),
                        0 => queue.extend(
                            self.facets[f]
                                .iter()
                                .map(|&(g, _)| g)
                                .filter(|&g| self.alive[g] && self.coface_count[g] == 1),
                        ),
                        _ => {}
                    }
                }
            }
        }
    }

    fn reduced_homology(&self, backend: Backend) -> Vec<usize> {
        let top = self.dim.iter().copied().max().unwrap_or(0);
        let mut local = vec![usize::MAX; self.dim.len()];
        let mut sizes = vec![0usize; top + 1];
        for g in (0..self.dim.len()).filter(|&g| self.alive[g]) {
            local[g] = sizes[self.dim[g]];
            sizes[self.dim[g]] += 1;
        }
        // rank_out[k] = rank of the map leaving degree k; vertices map onto
        // the field
        let mut rank_out = vec![0usize; top + 2];
        rank_out[0] = usize::from(sizes[0] > 0);
        for k in 1..=top {
            if sizes[k] == 0 {
                continue;
            }
            let mut m = IntMatrix::new(sizes[k], sizes[k - 1]);
            for g in (0..self.dim.len()).filter(|&g| self.alive[g] && self.dim[g] == k) {
                for &(f, sign) in &self.facets[g] {
                    if self.alive[f] {
                        m.push(local[g], local[f], sign as i64);
                    }
                }
            }
            rank_out[k] = if m.nnz() == 0 { 0 } else { rank(&m, backend) };
        }
        (0..=top)
            // only meaningful when ∂∘∂ = 0, which is checked separately
            .map(|k| sizes[k].saturating_sub(rank_out[k] + rank_out[k + 1]))
            .collect()
    }
}

/// Checks that every strand over the lcm lattice of the `F_0` labels is acyclic.
pub fn check_acyclic_chain(c: &ChainComplex, backend: Backend) -> AcyclicityReport {
    let packer = Packer::new(c.modules.iter().flat_map(|m| m.generators.iter().map(|g| &g.multidegree)));
    let packed = pack_modules(c, &packer);
    let mut lattice = packed_lattice(packed.first().map(Vec::as_slice).unwrap_or_default());
    lattice.sort();
    let results: Vec<(Vec<u32>, Vec<usize>)> = lattice
        .into_par_iter()
        .filter_map(|b| strand_homology_packed(c, &packed, &b, backend).map(|h| (b, h)))
        .collect();
    AcyclicityReport {
        backend,
        degrees_checked: results.len(),
        failures: results
            .into_iter()
            .filter(|(_, h)| h.iter().any(|&v| v > 0))
            .map(|(b, reduced_homology)| DegreeHomology {
                degree: packer.unpack(&b),
                reduced_homology,
            })
            .collect(),
    }
}

pub fn check_acyclic(x: &LabeledComplex, backend: Backend) -> Result<AcyclicityReport> {
    Ok(check_acyclic_chain(&cellular_complex(x)?, backend))
}

/// Reduced homology of the whole complex.
pub fn reduced_homology(x: &LabeledComplex, backend: Backend) -> Result<Vec<usize>> {
    let c = cellular_complex(x)?;
    let top = x
        .cells()
        .iter()
        .fold(Monomial::one(), |acc, cell| acc.lcm(&cell.label()));
    Ok(strand_homology(&c, &top, backend)
        .map(|h| h.reduced_homology)
        .unwrap_or_default())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertReport {
    /// `Σ_F (-1)^{dim F} x^{a_F}` over the cells.
    pub cellular: Polynomial,
    /// `Σ_{∅≠S⊆G(I)} (-1)^{|S|+1} x^{lcm S}`.
    pub inclusion_exclusion: Polynomial,
}

impl HilbertReport {
    pub fn passed(&self) -> bool {
        self.cellular == self.inclusion_exclusion
    }
}

pub fn inclusion_exclusion_numerator(ideal: &MonomialIdeal) -> Result<Polynomial> {
    let gens = ideal.generators();
    if gens.len() > HILBERT_GENERATOR_CAP {
        return Err(Error::SizeCap {
            what: "|G(I)| for the Hilbert numerator check",
            value: gens.len(),
            limit: HILBERT_GENERATOR_CAP,
        });
    }
    fn rec(gens: &[Vec<u32>], start: usize, acc: &[u32], size: usize, out: &mut HashMap<Vec<u32>, i64>) {
        for k in start..gens.len() {
            let l: Vec<u32> = acc.iter().zip(&gens[k]).map(|(a, b)| *a.max(b)).collect();
            rec(gens, k + 1, &l, size + 1, out);
            *out.entry(l).or_insert(0) += if size.is_multiple_of(2) { 1 } else { -1 };
        }
    }
    let packer = Packer::new(gens);
    let packed: Vec<Vec<u32>> = gens.iter().map(|g| packer.pack(g)).collect();
    let mut terms = HashMap::new();
    rec(&packed, 0, &vec![0; packer.axes.len()], 0, &mut terms);
    let mut p = Polynomial::default();
    for (m, c) in terms {
        if c != 0 {
            p.terms.insert(packer.unpack(&m), c);
        }
    }
    Ok(p)
}

pub fn cellular_numerator(x: &LabeledComplex) -> Polynomial {
    let mut p = Polynomial::default();
    for c in x.cells() {
        p.add_term(c.label(), if c.dim() % 2 == 0 { 1 } else { -1 });
    }
    p
}

pub fn hilbert_numerator_check(x: &LabeledComplex, ideal: &MonomialIdeal) -> Result<HilbertReport> {
    Ok(HilbertReport {
        cellular: cellular_numerator(x),
        inclusion_exclusion: inclusion_exclusion_numerator(ideal)?,
    })
}

/// Betti numbers `β_{i,b}` indexed by homological index and multidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    multigraded: BTreeMap<(usize, Monomial), u64>,
}

impl BettiTable {
    pub fn from_entries<I: IntoIterator<Item = ((usize, Monomial), u64)>>(entries: I) -> Self {
        let mut multigraded = BTreeMap::new();
        for (k, v) in entries {
            if v > 0 {
                *multigraded.entry(k).or_insert(0) += v;
            }
        }
        BettiTable { multigraded }
    }

    pub fn multigraded(&self) -> &BTreeMap<(usize, Monomial), u64> {
        &self.multigraded
    }

    pub fn get_multi(&self, i: usize, b: &Monomial) -> u64 {
        self.multigraded.get(&(i, b.clone())).copied().unwrap_or(0)
    }

    /// `β_{i,j}`, summed over multidegrees of total degree `j`.
    pub fn get(&self, i: usize, j: u32) -> u64 {
        self.coarse().get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn coarse(&self) -> BTreeMap<(usize, u32), u64> {
        let mut out = BTreeMap::new();
        for ((i, b), v) in &self.multigraded {
            *out.entry((*i, b.degree())).or_insert(0) += v;
        }
        out
    }

    /// `β_i = Σ_j β_{i,j}` for `i = 0..=projdim`.
    pub fn totals(&self) -> Vec<u64> {
        let len = self.multigraded.keys().map(|(i, _)| i + 1).max().unwrap_or(0);
        let mut out = vec![0; len];
        for ((i, _), v) in &self.multigraded {
            out[*i] += v;
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.multigraded.is_empty()
    }

    /// Whether `β_{i,j} = 0` for all `j != i + t`.
    pub fn is_linear(&self, t: u32) -> bool {
        self.multigraded.keys().all(|(i, b)| b.degree() == *i as u32 + t)
    }

    /// `Σ_{i,b} (-1)^i β_{i,b} x^b`.
    pub fn alternating_sum(&self) -> Polynomial {
        let mut p = Polynomial::default();
        for ((i, b), v) in &self.multigraded {
            let v = *v as i64;
            p.add_term(b.clone(), if i % 2 == 0 { v } else { -v });
        }
        p
    }
}

/// Counts `i`-cells by label; refuses complexes that fail the minimality test.
pub fn betti_table(x: &LabeledComplex) -> Result<BettiTable> {
    let report = check_minimal(x);
    if let Some(v) = report.violations.first() {
        return Err(Error::NotMinimal(format!(
            "{} violating pair(s), first: {} ⊃ {} both labeled {}",
            report.violations.len(),
            v.source,
            v.target,
            v.label
        )));
    }
    Ok(BettiTable::from_entries(
        x.cells().iter().map(|c| ((c.dim(), c.label()), 1)),
    ))
}

/// The three resolution checks run together.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub d2: D2Report,
    pub minimal: MinimalityReport,
    pub acyclic: AcyclicityReport,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.d2.passed() && self.minimal.passed() && self.acyclic.passed()
    }
}

pub fn certify(x: &LabeledComplex, backend: Backend) -> Result<Certificate> {
    let c = cellular_complex(x)?;
    Ok(Certificate {
        d2: check_d2(&c),
        minimal: check_minimal(x),
        acyclic: check_acyclic_chain(&c, backend),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{glue, product, simplex};
    use crate::gamma::gamma;
    use crate::monomial::{transversal_generators, BlockConfig, VarId};

    fn x(b: u16, i: u16) -> VarId {
        VarId::new(b, i)
    }

    fn mono(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn simplex_gives_koszul_ranks() {
        let vars: Vec<VarId> = (1..=5).map(|j| x(1, j)).collect();
        let c = cellular_complex(&simplex(&vars).unwrap()).unwrap();
        assert_eq!(c.ranks(), (0..5).map(|i| binom(5, i + 1)).collect::<Vec<_>>());
        assert!(check_d2(&c).passed());
    }

    #[test]
    fn single_vertex_complex() {
        let v = simplex(&[x(1, 1)]).unwrap();
        let c = cellular_complex(&v).unwrap();
        assert_eq!(c.ranks(), vec![1]);
        assert!(check_d2(&c).passed());
        assert!(check_minimal(&v).passed());
        assert!(check_acyclic(&v, Backend::default()).unwrap().passed());
        assert!(cellular_complex(&LabeledComplex::empty(1)).is_err());
    }

    #[test]
    fn example_ranks_and_certificate() {
        let cfg = BlockConfig::new(3, vec![2, 2, 1, 1]).unwrap();
        let g = gamma(&cfg).unwrap();
        let c = cellular_complex(&g).unwrap();
        assert_eq!(c.ranks(), vec![12, 22, 14, 3]);
        let cert = certify(&g, Backend::default()).unwrap();
        assert!(cert.passed(), "{cert:?}");
        assert!(cert.acyclic.degrees_checked > 12);
    }

    #[test]
    fn flipped_sign_is_detected() {
        let cfg = BlockConfig::new(3, vec![2, 2, 1, 1]).unwrap();
        let mut c = cellular_complex(&gamma(&cfg).unwrap()).unwrap();
        let e = c.differential(1)[0].clone();
        assert!(c.negate_entry(1, e.source, e.target));
        let report = check_d2(&c);
        assert!(!report.passed());
        assert!(report.violations.iter().all(|v| v.index == 2 || v.index == 3));
        assert!(!c.negate_entry(7, 0, 0));
    }

    #[test]
    fn taylor_of_non_minimal_generators_fails_minimality() {
        // (x, xy) as an explicit generating set: the edge has the label of a vertex
        let gens = [mono("x[1,1]"), mono("x[1,1]*x[2,1]")];
        let c = taylor_complex(&gens).unwrap();
        assert!(check_d2(&c).passed());
        let report = check_minimal_chain(&c);
        assert!(!report.passed());
        assert_eq!(report.violations[0].label, mono("x[1,1]*x[2,1]"));
    }

    #[test]
    fn disconnected_restriction_fails_acyclicity() {
        let two = glue(&simplex(&[x(1, 1)]).unwrap(), &simplex(&[x(2, 1)]).unwrap()).unwrap();
        let report = check_acyclic(&two, Backend::default()).unwrap();
        assert!(!report.passed());
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].degree, mono("x[1,1]*x[2,1]"));
        assert_eq!(report.failures[0].reduced_homology, vec![1]);
    }

    #[test]
    fn hollow_complexes_keep_their_homology() {
        let vars: Vec<VarId> = (1..=4).map(|j| x(j, 1)).collect();
        let solid = simplex(&vars).unwrap();
        let boundary = LabeledComplex::from_cells(1, solid.cells().iter().filter(|c| c.dim() < 3).cloned()).unwrap();
        assert_eq!(reduced_homology(&boundary, Backend::default()).unwrap(), vec![0, 0, 1]);
        let circle = LabeledComplex::from_cells(1, solid.cells().iter().filter(|c| c.dim() < 2).cloned()).unwrap();
        assert_eq!(reduced_homology(&circle, Backend::Rational).unwrap(), vec![0, 3]);
        // the boundary of a square
        let square = product(&simplex(&[x(1, 1), x(1, 2)]).unwrap(), &simplex(&[x(2, 1), x(2, 2)]).unwrap()).unwrap();
        let ring = LabeledComplex::from_cells(2, square.cells().iter().filter(|c| c.dim() < 2).cloned()).unwrap();
        assert_eq!(reduced_homology(&ring, Backend::default()).unwrap(), vec![0, 1]);
    }

    #[test]
    fn full_simplex_is_acyclic_at_top() {
        let vars: Vec<VarId> = (1..=4).map(|j| x(j, 1)).collect();
        let s = simplex(&vars).unwrap();
        assert_eq!(reduced_homology(&s, Backend::default()).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(reduced_homology(&s, Backend::Rational).unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn betti_tables() {
        let cfg = BlockConfig::new(3, vec![2, 2, 1, 1]).unwrap();
        let t = betti_table(&gamma(&cfg).unwrap()).unwrap();
        assert_eq!(t.coarse().into_iter().collect::<Vec<_>>(), vec![((0, 3), 12), ((1, 4), 22), ((2, 5), 14), ((3, 6), 3)]);
        assert!(t.is_linear(3));

        let cfg = BlockConfig::veronese(4, 2).unwrap();
        let t = betti_table(&gamma(&cfg).unwrap()).unwrap();
        assert_eq!((t.get(0, 2), t.get(1, 3), t.get(2, 4)), (6, 8, 3));
        assert_eq!(t.totals(), vec![6, 8, 3]);

        let s = simplex(&(1..=6).map(|j| x(j, 1)).collect::<Vec<_>>()).unwrap();
        let t = betti_table(&s).unwrap();
        for i in 0..6 {
            assert_eq!(t.get(i, i as u32 + 1), binom(6, i + 1) as u64);
        }
    }

    #[test]
    fn hilbert_numerators() {
        let p = simplex(&[x(1, 1)]).unwrap();
        let r = hilbert_numerator_check(&p, &MonomialIdeal::from_vars([x(1, 1)])).unwrap();
        assert!(r.passed());
        assert_eq!(r.cellular.to_string(), "x[1,1]");

        for cfg in [BlockConfig::new(3, vec![2, 2, 1, 1]).unwrap(), BlockConfig::veronese(4, 2).unwrap()] {
            let g = gamma(&cfg).unwrap();
            let r = hilbert_numerator_check(&g, &transversal_generators(&cfg)).unwrap();
            assert!(r.passed());
            assert_eq!(betti_table(&g).unwrap().alternating_sum(), r.cellular);
        }
        let big = transversal_generators(&BlockConfig::veronese(7, 3).unwrap());
        assert!(matches!(inclusion_exclusion_numerator(&big), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn lattice_of_two_coprime_labels() {
        let l = lcm_lattice(&[mono("x[1,1]"), mono("x[2,1]")]);
        assert_eq!(l, vec![mono("x[1,1]"), mono("x[1,1]*x[2,1]"), mono("x[2,1]")]);
    }

    #[test]
    fn polynomial_display() {
        let mut p = Polynomial::default();
        p.add_term(mono("x[1,1]"), 2);
        p.add_term(mono("x[2,1]"), -1);
        assert_eq!(p.to_string(), "2*x[1,1] - x[2,1]");
        p.add_term(mono("x[1,1]"), -2);
        assert_eq!(p.to_string(), "-x[2,1]");
    }
}
