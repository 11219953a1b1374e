//! Ground truth computed from the ideal alone, with no cell complex involved.
//!
//! Multigraded Betti numbers come from the upper Koszul simplicial complexes
//! `K^b(I) = { S ⊆ supp(b) : x^b / x^S ∈ I }` via
//! `β_{i,b}(I) = dim H̃_{i-1}(K^b(I))`.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{rank, Backend, IntMatrix};
use crate::monomial::{Monomial, MonomialIdeal, VarId};
use crate::resolution::BettiTable;

/// Largest number of variables in `supp(lcm G(I))` the oracle sweeps.
pub const ORACLE_VARIABLE_CAP: usize = 16;
/// Largest number of divisors of `lcm G(I)` the oracle sweeps.
pub const ORACLE_DIVISOR_CAP: usize = 1 << 20;

/// A simplicial complex given by all its faces, possibly including `∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: Vec<VarId>,
    pub faces: BTreeSet<Vec<VarId>>,
}

impl SimplicialComplex {
    /// `out[k] = dim H̃_{k-1}`, for `k = 0..=max face size`.
    pub fn reduced_homology(&self, backend: Backend) -> Vec<usize> {
        let masks: Vec<u32> = self
            .faces
            .iter()
            .map(|f| {
                f.iter()
                    .map(|v| 1u32 << self.vertices.binary_search(v).expect("face vertex"))
                    .sum()
            })
            .collect();
        mask_complex_homology(&masks, backend)
    }
}

/// `K^b(I)`, straight from the definition.
pub fn upper_koszul(ideal: &MonomialIdeal, b: &Monomial) -> SimplicialComplex {
    let vertices = b.support();
    assert!(vertices.len() <= 31, "support too large");
    let mut faces = BTreeSet::new();
    for mask in 0u32..(1 << vertices.len()) {
        let s: Vec<VarId> = (0..vertices.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| vertices[k])
            .collect();
        let quotient = b.div(&Monomial::from_vars(s.iter().copied())).expect("S ⊆ supp(b)");
        if ideal.contains(&quotient) {
            faces.insert(s);
        }
    }
    SimplicialComplex { vertices, faces }
}

/// Reduced homology of a complex whose faces are bitmasks over its vertices.
/// `out[k] = dim H̃_{k-1}`; empty input means the void complex.
fn mask_complex_homology(faces: &[u32], backend: Backend) -> Vec<usize> {
    if faces.is_empty() {
        return Vec::new();
    }
    let top = faces.iter().map(|f| f.count_ones() as usize).max().unwrap_or(0);
    let span = faces.iter().fold(0u32, |acc, f| acc | f);
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); top + 1];
    // position of each face within its size class
    let mut position = vec![usize::MAX; span as usize + 1];
    for &f in faces {
        let k = f.count_ones() as usize;
        position[f as usize] = by_size[k].len();
        by_size[k].push(f);
    }
    // ranks[k] = rank of ∂ from faces of size k to size k-1
    let mut ranks = vec![0usize; top + 2];
    for k in 1..=top {
        let (rows, cols) = (&by_size[k], &by_size[k - 1]);
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let mut m = IntMatrix::new(rows.len(), cols.len());
        for (r, &f) in rows.iter().enumerate() {
            let mut pos = 0;
            let mut rest = f;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest ^= bit;
                let c = position[(f ^ bit) as usize];
                assert!(c != usize::MAX, "faces are downward closed");
                m.push(r, c, if pos % 2 == 0 { 1 } else { -1 });
                pos += 1;
            }
        }
        ranks[k] = rank(&m, backend);
    }
    (0..=top)
        .map(|k| by_size[k].len() - ranks[k] - ranks[k + 1])
        .collect()
}

/// Divisors of a monomial in mixed radix, with ideal membership for each.
struct DivisorTable {
    strides: Vec<usize>,
    radices: Vec<usize>,
    in_ideal: Vec<bool>,
}

impl DivisorTable {
    fn new(ideal: &MonomialIdeal, lcm: &Monomial) -> Result<Self> {
        let exps = lcm.exponents();
        let radices: Vec<usize> = exps.iter().map(|&(_, e)| e as usize + 1).collect();
        let mut strides = Vec::with_capacity(radices.len());
        let mut total = 1usize;
        for &r in &radices {
            strides.push(total);
            total = total.checked_mul(r).filter(|&t| t <= ORACLE_DIVISOR_CAP).ok_or(Error::SizeCap {
                what: "number of divisors of lcm(G(I))",
                value: usize::MAX,
                limit: ORACLE_DIVISOR_CAP,
            })?;
        }
        let mut in_ideal = vec![false; total];
        for g in ideal.generators() {
            let idx: usize = exps
                .iter()
                .zip(&strides)
                .map(|(&(v, _), s)| g.exponent(v) as usize * s)
                .sum();
            in_ideal[idx] = true;
        }
        for idx in 0..total {
            if in_ideal[idx] {
                continue;
            }
            in_ideal[idx] = (0..radices.len())
                .any(|k| (idx / strides[k]) % radices[k] > 0 && in_ideal[idx - strides[k]]);
        }
        Ok(DivisorTable {
            strides,
            radices,
            in_ideal,
        })
    }

    fn digit(&self, idx: usize, k: usize) -> usize {
        (idx / self.strides[k]) % self.radices[k]
    }

    /// Faces of `K^b` as masks over the support positions of `b`.
    fn upper_koszul_masks(&self, b: usize) -> Vec<u32> {
        let support: Vec<usize> = (0..self.radices.len()).filter(|&k| self.digit(b, k) > 0).collect();
        (0u32..(1 << support.len()))
            .filter(|&mask| {
                let off: usize = (0..support.len())
                    .filter(|j| mask >> j & 1 == 1)
                    .map(|j| self.strides[support[j]])
                    .sum();
                self.in_ideal[b - off]
            })
            .collect()
    }

    fn monomial(&self, idx: usize, vars: &[VarId]) -> Monomial {
        Monomial::from_exponents(
            vars.iter()
                .enumerate()
                .map(|(k, &v)| (v, self.digit(idx, k) as u32)),
        )
    }
}

/// Every multigraded Betti number of `I`, by sweeping all divisors of
/// `lcm(G(I))`.
pub fn betti_oracle(ideal: &MonomialIdeal, backend: Backend) -> Result<BettiTable> {
    let lcm = ideal.lcm_of_generators();
    let vars = lcm.support();
    if vars.len() > ORACLE_VARIABLE_CAP {
        return Err(Error::SizeCap {
            what: "number of variables for the Betti oracle",
            value: vars.len(),
            limit: ORACLE_VARIABLE_CAP,
        });
    }
    if ideal.is_empty() {
        return Ok(BettiTable::default());
    }
    let table = DivisorTable::new(ideal, &lcm)?;
    let entries: Vec<((usize, Monomial), u64)> = (0..table.in_ideal.len())
        .into_par_iter()
        .filter(|&b| table.in_ideal[b])
        .flat_map_iter(|b| {
            let h = mask_complex_homology(&table.upper_koszul_masks(b), backend);
            let degree = table.monomial(b, &vars);
            h.into_iter()
                .enumerate()
                .filter(|&(_, v)| v > 0)
                .map(move |(i, v)| ((i, degree.clone()), v as u64))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(BettiTable::from_entries(entries))
}

/// Supports of the generators of a squarefree ideal generated in one degree.
fn facets(ideal: &MonomialIdeal) -> Result<HashSet<Vec<VarId>>> {
    if let Some(g) = ideal.generators().iter().find(|g| !g.is_squarefree()) {
        return Err(Error::Unexpected {
            expected: "a squarefree ideal".into(),
            got: format!("generator {g}"),
        });
    }
    if !ideal.is_empty() && ideal.common_degree().is_none() {
        return Err(Error::Unexpected {
            expected: "generators of a single degree".into(),
            got: "mixed degrees".into(),
        });
    }
    Ok(ideal.generators().iter().map(Monomial::support).collect())
}

fn exchanged(f: &[VarId], out: VarId, inn: VarId) -> Vec<VarId> {
    let mut e: Vec<VarId> = f.iter().copied().filter(|&v| v != out).collect();
    e.push(inn);
    e.sort();
    e
}

/// Basis exchange: for facets `F != G` and `i ∈ F` some `j ∈ G` makes
/// `(F \ i) ∪ j` a facet.
pub fn matroid_exchange(ideal: &MonomialIdeal) -> Result<bool> {
    let fs = facets(ideal)?;
    let list: Vec<&Vec<VarId>> = fs.iter().collect();
    for f in &list {
        for g in &list {
            if f == g {
                continue;
            }
            for &i in f.iter() {
                if g.contains(&i) {
                    continue;
                }
                let ok = g
                    .iter()
                    .filter(|j| !f.contains(j))
                    .any(|&j| fs.contains(&exchanged(f, i, j)));
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Strong exchange: every `i ∈ F` and every `j ∈ G \ F` give a facet.
pub fn strong_exchange(ideal: &MonomialIdeal) -> Result<bool> {
    let fs = facets(ideal)?;
    let list: Vec<&Vec<VarId>> = fs.iter().collect();
    for f in &list {
        for g in &list {
            if f == g {
                continue;
            }
            for &i in f.iter() {
                for &j in g.iter().filter(|j| !f.contains(j)) {
                    if !fs.contains(&exchanged(f, i, j)) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{transversal_generators, BlockConfig};

    fn mono(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn ideal(gens: &[&str]) -> MonomialIdeal {
        MonomialIdeal::from_generators(gens.iter().map(|g| mono(g)))
    }

    #[test]
    fn upper_koszul_examples() {
        let i = ideal(&["x[1,1]"]);
        let k = upper_koszul(&i, &mono("x[1,1]"));
        assert_eq!(k.faces, BTreeSet::from([vec![]]));
        assert_eq!(k.reduced_homology(Backend::default()), vec![1]);

        let k = upper_koszul(&i, &mono("x[2,1]"));
        assert!(k.faces.is_empty());
        assert!(k.reduced_homology(Backend::default()).is_empty());

        let i43 = transversal_generators(&BlockConfig::new(3, vec![2, 2, 1, 1]).unwrap());
        let b = mono("x[1,1]*x[2,1]*x[3,1]*x[4,1]");
        let k = upper_koszul(&i43, &b);
        // x^b / x_v stays in I for every single variable v, never for pairs
        assert_eq!(k.faces.len(), 5);
        assert_eq!(k.reduced_homology(Backend::default()), vec![0, 3]);
    }

    #[test]
    fn oracle_on_variables_is_koszul() {
        let vars: Vec<VarId> = (1..=5).map(|j| VarId::new(j, 1)).collect();
        let t = betti_oracle(&MonomialIdeal::from_vars(vars), Backend::default()).unwrap();
        assert_eq!(t.totals(), vec![5, 10, 10, 5, 1]);
        assert!(t.is_linear(1));
    }

    #[test]
    fn oracle_on_principal_and_powers() {
        let t = betti_oracle(&ideal(&["x[1,1]^2*x[2,1]"]), Backend::default()).unwrap();
        assert_eq!(t.totals(), vec![1]);
        // (x, y)^2 = (x^2, xy, y^2): 3 generators, 2 linear syzygies
        let t = betti_oracle(&ideal(&["x[1,1]^2", "x[1,1]*x[2,1]", "x[2,1]^2"]), Backend::Rational).unwrap();
        assert_eq!(t.totals(), vec![3, 2]);
        assert_eq!(t.get(1, 3), 2);
    }

    #[test]
    fn oracle_example_values() {
        let i43 = transversal_generators(&BlockConfig::new(3, vec![2, 2, 1, 1]).unwrap());
        let t = betti_oracle(&i43, Backend::default()).unwrap();
        assert_eq!(t.coarse().into_iter().collect::<Vec<_>>(), vec![((0, 3), 12), ((1, 4), 22), ((2, 5), 14), ((3, 6), 3)]);

        let i52 = transversal_generators(&BlockConfig::veronese(5, 2).unwrap());
        let t = betti_oracle(&i52, Backend::default()).unwrap();
        assert_eq!(t.coarse().into_iter().collect::<Vec<_>>(), vec![((0, 2), 10), ((1, 3), 20), ((2, 4), 15), ((3, 5), 4)]);
    }

    #[test]
    fn fast_sweep_agrees_with_definition() {
        let i = transversal_generators(&BlockConfig::new(2, vec![1, 2, 2]).unwrap());
        let t = betti_oracle(&i, Backend::default()).unwrap();
        let lcm = i.lcm_of_generators();
        let vars = lcm.support();
        for mask in 1u32..(1 << vars.len()) {
            let b = Monomial::from_vars((0..vars.len()).filter(|k| mask >> k & 1 == 1).map(|k| vars[k]));
            let h = upper_koszul(&i, &b).reduced_homology(Backend::default());
            for (k, &v) in h.iter().enumerate() {
                assert_eq!(t.get_multi(k, &b), v as u64, "degree {b}");
            }
        }
    }

    #[test]
    fn oracle_size_cap() {
        let vars: Vec<VarId> = (1..=17).map(|j| VarId::new(j, 1)).collect();
        assert!(matches!(
            betti_oracle(&MonomialIdeal::from_vars(vars), Backend::default()),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn exchange_properties() {
        let i = transversal_generators(&BlockConfig::new(3, vec![2, 2, 1, 1]).unwrap());
        assert!(matroid_exchange(&i).unwrap());
        assert!(!matroid_exchange(&ideal(&["x[1,1]*x[2,1]", "x[3,1]*x[4,1]"])).unwrap());
        assert!(matroid_exchange(&ideal(&["x[1,1]*x[2,1]"])).unwrap());
        assert!(strong_exchange(&ideal(&["x[1,1]*x[2,1]"])).unwrap());

        let veronese = transversal_generators(&BlockConfig::veronese(4, 2).unwrap());
        assert!(strong_exchange(&veronese).unwrap());
        // F = {11,21}, G = {12,31}: dropping 21 for 12 gives x[1,1]*x[1,2], not a generator
        let i = transversal_generators(&BlockConfig::new(2, vec![2, 1, 1]).unwrap());
        assert!(matroid_exchange(&i).unwrap());
        assert!(!strong_exchange(&i).unwrap());

        assert!(matroid_exchange(&ideal(&["x[1,1]^2"])).is_err());
        assert!(matroid_exchange(&ideal(&["x[1,1]", "x[2,1]*x[3,1]"])).is_err());
    }
}
