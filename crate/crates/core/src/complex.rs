//! Labeled polytopal complexes whose cells are products of simplices.
//!
//! A cell is a tuple `(U_1, ..., U_k)` of nonempty variable sets with every
//! block of `U_i` strictly before every block of `U_{i+1}`. Its vertices are
//! the monomials `u_1 * ... * u_k` with `u_i` in `U_i`, its label is the
//! product of all variables involved, and its faces are the componentwise
//! nonempty subsets. Block separation makes the factor tuple recoverable from
//! the vertex set, so two pieces that share a face share the same `Cell`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{rank, Backend, IntMatrix};
use crate::monomial::{Monomial, VarId};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    factors: Vec<Vec<VarId>>,
}

/// A codimension-one face together with its incidence sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidencePair {
    pub cell: Cell,
    pub facet: Cell,
    pub sign: i8,
}

fn check_factors(factors: &[Vec<VarId>]) -> Result<()> {
    for (k, u) in factors.iter().enumerate() {
        if u.is_empty() {
            return Err(Error::InvalidCell(format!("factor {k} is empty")));
        }
        if u.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCell(format!("factor {k} is not strictly sorted")));
        }
    }
    for (k, w) in factors.windows(2).enumerate() {
        let last = w[0].last().expect("nonempty");
        let first = w[1].first().expect("nonempty");
        if last.block >= first.block {
            return Err(Error::InvalidCell(format!(
                "factors {k} and {} are not block-separated ({last} vs {first})",
                k + 1
            )));
        }
    }
    Ok(())
}

impl Cell {
    /// Sorts each factor and validates nonemptiness and block separation.
    pub fn new(factors: Vec<Vec<VarId>>) -> Result<Self> {
        let factors: Vec<Vec<VarId>> = factors
            .into_iter()
            .map(|mut u| {
                u.sort();
                u.dedup();
                u
            })
            .collect();
        check_factors(&factors)?;
        Ok(Cell { factors })
    }

    pub fn vertex(vars: &[VarId]) -> Result<Self> {
        Self::new(vars.iter().map(|&v| vec![v]).collect())
    }

    pub fn factors(&self) -> &[Vec<VarId>] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|u| u.len() - 1).sum()
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        self.factors.iter().flatten().copied()
    }

    /// The lcm of the vertex labels, i.e. the product of all variables.
    pub fn label(&self) -> Monomial {
        Monomial::from_vars(self.variables())
    }

    pub fn is_face_of(&self, other: &Cell) -> bool {
        self.arity() == other.arity()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(u, v)| u.iter().all(|x| v.binary_search(x).is_ok()))
    }

    /// Vertex labels `u_1 * ... * u_k`, in canonical order.
    pub fn vertex_labels(&self) -> Vec<Monomial> {
        let mut out = vec![Vec::<VarId>::new()];
        for u in &self.factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    u.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Monomial::from_vars).collect()
    }

    /// Recovers the factor tuple from a set of vertex labels of a common
    /// arity. Returns `None` if the labels do not form the full vertex set of
    /// a block-separated product.
    pub fn from_vertex_labels(labels: &[Monomial]) -> Option<Cell> {
        let first = labels.first()?;
        let arity = first.degree() as usize;
        let mut factors: Vec<BTreeSet<VarId>> = vec![BTreeSet::new(); arity];
        for l in labels {
            if !l.is_squarefree() || l.degree() as usize != arity {
                return None;
            }
            for (slot, v) in l.support().into_iter().enumerate() {
                factors[slot].insert(v);
            }
        }
        let cell = Cell::new(factors.into_iter().map(|s| s.into_iter().collect()).collect()).ok()?;
        let mut expected = cell.vertex_labels();
        let mut given = labels.to_vec();
        expected.sort();
        given.sort();
        given.dedup();
        (expected == given).then_some(cell)
    }

    /// All faces including the cell itself.
    pub fn faces(&self) -> Vec<Cell> {
        let mut out: Vec<Vec<Vec<VarId>>> = vec![Vec::new()];
        for u in &self.factors {
            assert!(u.len() < 32, "factor too large to enumerate subsets");
            let subsets: Vec<Vec<VarId>> = (1u32..(1 << u.len()))
                .map(|mask| {
                    u.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    subsets.iter().map(move |s| {
                        let mut p = prefix.clone();
                        p.push(s.clone());
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(|factors| Cell { factors }).collect()
    }

    /// Codimension-one faces with signs `(-1)^(p + sum_{l<k} (|U_l| - 1))`,
    /// where the `p`-th element of `U_k` is deleted. Empty for vertices.
    pub fn boundary(&self) -> Vec<IncidencePair> {
        let mut out = Vec::new();
        let mut offset = 0usize;
        for (k, u) in self.factors.iter().enumerate() {
            if u.len() >= 2 {
                for p in 0..u.len() {
                    let mut factors = self.factors.clone();
                    factors[k].remove(p);
                    let sign = if (p + offset).is_multiple_of(2) { 1 } else { -1 };
                    out.push(IncidencePair {
                        cell: self.clone(),
                        facet: Cell { factors },
                        sign,
                    });
                }
            }
            offset += u.len() - 1;
        }
        out
    }

    /// Concatenation of factor tuples.
    pub fn concat(&self, other: &Cell) -> Result<Cell> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        check_factors(&factors)
            .map_err(|e| Error::IncompatibleFactors(e.to_string()))?;
        Ok(Cell { factors })
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, u) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            let names: Vec<String> = u.iter().map(|v| v.dotted()).collect();
            write!(f, "{}", names.join(" "))?;
        }
        write!(f, ")")
    }
}

/// A face-closed set of cells of a common arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledComplex {
    arity: usize,
    cells: BTreeSet<Cell>,
}

impl LabeledComplex {
    pub fn empty(arity: usize) -> Self {
        LabeledComplex {
            arity,
            cells: BTreeSet::new(),
        }
    }

    /// Validates arity and face-closure of an explicit cell set.
    pub fn from_cells<I: IntoIterator<Item = Cell>>(arity: usize, cells: I) -> Result<Self> {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        for c in &cells {
            if c.arity() != arity {
                return Err(Error::ArityMismatch(arity, c.arity()));
            }
            for pair in c.boundary() {
                if !cells.contains(&pair.facet) {
                    return Err(Error::NotFaceClosed(pair.facet.to_string()));
                }
            }
        }
        Ok(LabeledComplex { arity, cells })
    }

    /// The smallest complex containing the given cells.
    pub fn closure<I: IntoIterator<Item = Cell>>(arity: usize, maximal: I) -> Result<Self> {
        let mut cells = BTreeSet::new();
        for c in maximal {
            if c.arity() != arity {
                return Err(Error::ArityMismatch(arity, c.arity()));
            }
            cells.extend(c.faces());
        }
        Ok(LabeledComplex { arity, cells })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains_cell(&self, c: &Cell) -> bool {
        self.cells.contains(c)
    }

    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().map(Cell::dim).max()
    }

    /// Cells of dimension `d` in canonical order.
    pub fn cells_of_dim(&self, d: usize) -> Vec<&Cell> {
        self.cells.iter().filter(|c| c.dim() == d).collect()
    }

    pub fn vertices(&self) -> Vec<&Cell> {
        self.cells_of_dim(0)
    }

    /// Sorted vertex labels.
    pub fn vertex_labels(&self) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = self.vertices().into_iter().map(Cell::label).collect();
        v.sort();
        v
    }

    /// All variables occurring in some cell, in canonical order.
    pub fn variables(&self) -> Vec<VarId> {
        let set: BTreeSet<VarId> = self.cells.iter().flat_map(|c| c.variables()).collect();
        set.into_iter().collect()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim().map_or(0, |d| d + 1)];
        for c in &self.cells {
            f[c.dim()] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Cells that are not a proper face of another cell.
    pub fn maximal_cells(&self) -> Vec<&Cell> {
        let mut covered: BTreeSet<&Cell> = BTreeSet::new();
        let mut facets_of: Vec<Cell> = Vec::new();
        for c in &self.cells {
            for pair in c.boundary() {
                facets_of.push(pair.facet);
            }
        }
        for f in &facets_of {
            if let Some(c) = self.cells.get(f) {
                covered.insert(c);
            }
        }
        self.cells.iter().filter(|c| !covered.contains(c)).collect()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.maximal_cells().iter().all(|c| Some(c.dim()) == d)
    }

    /// Connectivity of the 1-skeleton; the empty complex counts as disconnected.
    pub fn is_connected(&self) -> bool {
        let verts = self.vertices();
        if verts.is_empty() {
            return false;
        }
        let index: HashMap<&Cell, usize> = verts.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in self.cells_of_dim(1) {
            let ends: Vec<usize> = e
                .boundary()
                .iter()
                .map(|p| index[&p.facet])
                .collect();
            let (a, b) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..verts.len()).all(|i| find(&mut parent, i) == root)
    }

    /// `self ⊇ other` as labeled cell sets.
    pub fn contains(&self, other: &LabeledComplex) -> bool {
        other.is_subcomplex_of(self)
    }

    /// `self ⊆ other` as labeled cell sets.
    pub fn is_subcomplex_of(&self, other: &LabeledComplex) -> bool {
        (self.is_empty() || self.arity == other.arity) && self.cells.is_subset(&other.cells)
    }

    pub fn intersection(&self, other: &LabeledComplex) -> LabeledComplex {
        LabeledComplex {
            arity: self.arity,
            cells: self.cells.intersection(&other.cells).cloned().collect(),
        }
    }

    /// Cells whose label divides `degree`. Face labels divide cell labels, so
    /// the result is again a complex.
    pub fn restrict_below(&self, degree: &Monomial) -> LabeledComplex {
        LabeledComplex {
            arity: self.arity,
            cells: self
                .cells
                .iter()
                .filter(|c| c.label().divides(degree))
                .cloned()
                .collect(),
        }
    }

    /// Every signed codimension-one incidence in the complex.
    pub fn incidences(&self) -> Vec<IncidencePair> {
        self.cells.iter().flat_map(Cell::boundary).collect()
    }
}

/// The simplex on `vars` as an arity-one complex.
pub fn simplex(vars: &[VarId]) -> Result<LabeledComplex> {
    if vars.is_empty() {
        return Err(Error::EmptyVarSet);
    }
    let top = Cell::new(vec![vars.to_vec()])?;
    LabeledComplex::closure(1, [top])
}

/// Cartesian product; every block of `x` must precede every block of `y`.
pub fn product(x: &LabeledComplex, y: &LabeledComplex) -> Result<LabeledComplex> {
    let (xv, yv) = (x.variables(), y.variables());
    if let (Some(a), Some(b)) = (xv.last(), yv.first()) {
        if a.block >= b.block {
            return Err(Error::IncompatibleFactors(format!(
                "left complex reaches block {} but right complex starts at block {}",
                a.block, b.block
            )));
        }
    }
    let mut cells = BTreeSet::new();
    for c in &x.cells {
        for d in &y.cells {
            cells.insert(c.concat(d)?);
        }
    }
    Ok(LabeledComplex {
        arity: x.arity + y.arity,
        cells,
    })
}

/// Union of two complexes of the same arity.
pub fn glue(x: &LabeledComplex, y: &LabeledComplex) -> Result<LabeledComplex> {
    if x.arity != y.arity {
        return Err(Error::ArityMismatch(x.arity, y.arity));
    }
    Ok(LabeledComplex {
        arity: x.arity,
        cells: x.cells.union(&y.cells).cloned().collect(),
    })
}

/// Vertex coordinates of every cell, using exponent vectors over `axes`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub axes: Vec<VarId>,
    pub cells: BTreeMap<Cell, Vec<Vec<i64>>>,
}

impl Realization {
    /// Cells whose vertex set has the wrong affine dimension.
    pub fn dimension_mismatches(&self) -> Vec<(Cell, usize)> {
        self.cells
            .iter()
            .filter_map(|(c, pts)| {
                let d = affine_dim(pts);
                (d != c.dim()).then(|| (c.clone(), d))
            })
            .collect()
    }
}

pub fn exponent_vector(label: &Monomial, axes: &[VarId]) -> Vec<i64> {
    axes.iter().map(|&v| label.exponent(v) as i64).collect()
}

/// Places each vertex at its label's exponent vector over the complex's variables.
pub fn geometric_realization(x: &LabeledComplex) -> Realization {
    let axes = x.variables();
    let cells = x
        .cells
        .iter()
        .map(|c| {
            let pts = c
                .vertex_labels()
                .iter()
                .map(|l| exponent_vector(l, &axes))
                .collect();
            (c.clone(), pts)
        })
        .collect();
    Realization { axes, cells }
}

/// Dimension of the affine hull, computed exactly.
pub fn affine_dim(points: &[Vec<i64>]) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    let mut m = IntMatrix::new(points.len().saturating_sub(1), base.len());
    for (r, p) in points.iter().skip(1).enumerate() {
        for (c, (&a, &b)) in p.iter().zip(base).enumerate() {
            if a != b {
                m.push(r, c, a - b);
            }
        }
    }
    rank(&m, Backend::Rational)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(b: u16, i: u16) -> VarId {
        VarId::new(b, i)
    }

    #[test]
    fn cell_validation() {
        assert!(Cell::new(vec![vec![]]).is_err());
        assert!(Cell::new(vec![vec![x(2, 1)], vec![x(1, 1)]]).is_err());
        assert!(Cell::new(vec![vec![x(1, 1), x(2, 1)], vec![x(2, 2)]]).is_err());
        let c = Cell::new(vec![vec![x(1, 2), x(1, 1)], vec![x(3, 1)]]).unwrap();
        assert_eq!(c.factors()[0], vec![x(1, 1), x(1, 2)]);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.label().to_string(), "x[1,1]*x[1,2]*x[3,1]");
    }

    #[test]
    fn simplex_examples() {
        let p = simplex(&[x(3, 1)]).unwrap();
        assert_eq!(p.f_vector(), vec![1]);
        assert_eq!(p.vertex_labels()[0].to_string(), "x[3,1]");

        let e = simplex(&[x(1, 1), x(1, 2)]).unwrap();
        assert_eq!(e.f_vector(), vec![2, 1]);
        assert_eq!(e.cells_of_dim(1)[0].label().to_string(), "x[1,1]*x[1,2]");

        assert_eq!(simplex(&[x(3, 1), x(4, 1)]).unwrap().len(), 3);
        assert_eq!(simplex(&[x(1, 1), x(1, 2), x(1, 3)]).unwrap().f_vector(), vec![3, 3, 1]);
        assert!(matches!(simplex(&[]), Err(Error::EmptyVarSet)));
    }

    #[test]
    fn product_examples() {
        let p1 = simplex(&[x(1, 1), x(1, 2)]).unwrap();
        let p2 = simplex(&[x(2, 1), x(2, 2)]).unwrap();
        let sq = product(&p1, &p2).unwrap();
        assert_eq!(sq.len(), 9);
        assert_eq!(sq.f_vector(), vec![4, 4, 1]);
        assert_eq!(sq.arity(), 2);

        let pt = simplex(&[x(3, 1)]).unwrap();
        let xp = product(&p1, &pt).unwrap();
        assert_eq!(xp.f_vector(), p1.f_vector());
        assert_eq!(xp.arity(), 2);

        let v = product(&simplex(&[x(1, 1)]).unwrap(), &simplex(&[x(2, 1)]).unwrap()).unwrap();
        assert_eq!(v.vertex_labels()[0].to_string(), "x[1,1]*x[2,1]");
        assert_eq!(v.len(), 1);

        assert!(product(&p2, &p1).is_err());
        assert!(product(&p1, &p1).is_err());
    }

    #[test]
    fn glue_examples() {
        let p1 = simplex(&[x(1, 1), x(1, 2)]).unwrap();
        assert_eq!(glue(&p1, &p1).unwrap(), p1);
        let two = glue(&simplex(&[x(1, 1)]).unwrap(), &simplex(&[x(2, 1)]).unwrap()).unwrap();
        assert_eq!(two.f_vector(), vec![2]);
        assert!(!two.is_connected());
        let sq = product(&p1, &simplex(&[x(2, 1)]).unwrap()).unwrap();
        assert!(matches!(glue(&p1, &sq), Err(Error::ArityMismatch(1, 2))));
    }

    #[test]
    fn edge_boundary_signs() {
        let e = Cell::new(vec![vec![x(1, 1), x(1, 2)]]).unwrap();
        let b = e.boundary();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].facet, Cell::vertex(&[x(1, 2)]).unwrap());
        assert_eq!(b[0].sign, 1);
        assert_eq!(b[1].facet, Cell::vertex(&[x(1, 1)]).unwrap());
        assert_eq!(b[1].sign, -1);
        assert!(Cell::vertex(&[x(1, 1)]).unwrap().boundary().is_empty());
    }

    /// Sums sign products over every codimension-two flag.
    fn boundary_squared(c: &Cell) -> BTreeMap<Cell, i64> {
        let mut acc: BTreeMap<Cell, i64> = BTreeMap::new();
        for p in c.boundary() {
            for q in p.facet.boundary() {
                *acc.entry(q.facet).or_default() += (p.sign * q.sign) as i64;
            }
        }
        acc.retain(|_, v| *v != 0);
        acc
    }

    #[test]
    fn square_boundary_squares_to_zero() {
        let sq = Cell::new(vec![vec![x(1, 1), x(1, 2)], vec![x(3, 1), x(4, 1)]]).unwrap();
        let b = sq.boundary();
        assert_eq!(b.len(), 4);
        let signs: Vec<i8> = b.iter().map(|p| p.sign).collect();
        assert_eq!(signs, vec![1, -1, -1, 1]);
        assert!(boundary_squared(&sq).is_empty());
        let big = Cell::new(vec![
            vec![x(1, 1), x(1, 2), x(1, 3)],
            vec![x(2, 1)],
            vec![x(3, 1), x(3, 2), x(4, 1)],
        ])
        .unwrap();
        assert!(boundary_squared(&big).is_empty());
    }

    #[test]
    fn canonical_form_round_trip() {
        let c = Cell::new(vec![vec![x(1, 1), x(1, 2)], vec![x(2, 1), x(3, 1)], vec![x(4, 1)]]).unwrap();
        for f in c.faces() {
            assert_eq!(Cell::from_vertex_labels(&f.vertex_labels()), Some(f.clone()));
        }
        // three of the four corners of a square are not a cell
        let labels = c.faces().into_iter().find(|f| f.dim() == 2 && f.factors()[0].len() == 2).unwrap().vertex_labels();
        assert_eq!(Cell::from_vertex_labels(&labels[..3]), None);
    }

    #[test]
    fn closure_and_validation() {
        let c = Cell::new(vec![vec![x(1, 1), x(1, 2)], vec![x(2, 1), x(2, 2)]]).unwrap();
        let k = LabeledComplex::closure(2, [c.clone()]).unwrap();
        assert_eq!(k.maximal_cells(), vec![&c]);
        assert!(LabeledComplex::from_cells(2, [c.clone()]).is_err());
        assert!(LabeledComplex::from_cells(2, k.cells().iter().cloned()).is_ok());
        assert!(LabeledComplex::closure(3, [c]).is_err());
    }

    #[test]
    fn restrict_examples() {
        let p1 = simplex(&[x(1, 1), x(1, 2)]).unwrap();
        let sq = product(&p1, &simplex(&[x(3, 1), x(4, 1)]).unwrap()).unwrap();
        let top = sq.vertex_labels().iter().fold(Monomial::one(), |a, b| a.lcm(b));
        assert_eq!(sq.restrict_below(&top), sq);
        assert!(sq.restrict_below(&Monomial::one()).is_empty());
        let edge = sq.restrict_below(&"x[1,1]*x[3,1]*x[4,1]".parse().unwrap());
        assert_eq!(edge.f_vector(), vec![2, 1]);
    }

    #[test]
    fn f_vector_connectivity_containment() {
        let s = simplex(&[x(1, 1), x(1, 2), x(1, 3)]).unwrap();
        assert_eq!(s.f_vector(), vec![3, 3, 1]);
        assert_eq!(s.euler_characteristic(), 1);
        assert!(s.is_connected());
        let e = simplex(&[x(1, 1), x(1, 2)]).unwrap();
        assert!(s.contains(&e));
        assert!(e.is_subcomplex_of(&s));
        assert!(!e.contains(&s));
        assert!(!LabeledComplex::empty(1).is_connected());
    }

    #[test]
    fn realization_dims() {
        let c = Cell::new(vec![vec![x(1, 1), x(1, 2)], vec![x(3, 1), x(4, 1)]]).unwrap();
        let k = LabeledComplex::closure(2, [c]).unwrap();
        let r = geometric_realization(&k);
        assert_eq!(r.axes, vec![x(1, 1), x(1, 2), x(3, 1), x(4, 1)]);
        assert!(r.dimension_mismatches().is_empty());
        let v = Cell::vertex(&[x(1, 1), x(4, 1)]).unwrap();
        assert_eq!(r.cells[&v], vec![vec![1, 0, 0, 1]]);
        assert_eq!(affine_dim(&[vec![0, 0], vec![1, 1], vec![2, 2]]), 1);
        assert_eq!(affine_dim(&[]), 0);
    }
}
