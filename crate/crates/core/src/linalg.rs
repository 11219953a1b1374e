//! Exact rank of sparse integer matrices, over GF(p) or over the rationals.
//!
//! Both backends share one row-echelon routine: rows are reduced against the
//! pivots found so far, shortest rows first, and every surviving row becomes
//! a new pivot keyed by its leading column.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u32 = 32003;

/// A prime below `2^31`, so products of residues fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Prime(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }
}

impl Default for Prime {
    fn default() -> Self {
        Prime(DEFAULT_PRIME)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 4 {
        return p >= 2;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Where ranks are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Prime(Prime),
    Rational,
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Prime(Prime::default())
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Prime(p) => write!(f, "GF({})", p.get()),
            Backend::Rational => write!(f, "Q"),
        }
    }
}

/// Row-sparse integer matrix; duplicate pushes to one position accumulate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![Vec::new(); rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn push(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of bounds");
        let row = &mut self.entries[r];
        match row.binary_search_by_key(&c, |&(k, _)| k) {
            Ok(i) => {
                row[i].1 += v;
                if row[i].1 == 0 {
                    row.remove(i);
                }
            }
            Err(i) if v != 0 => row.insert(i, (c, v)),
            Err(_) => {}
        }
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.entries[r]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }
}

/// Sparse matrix over GF(p) with reduced, nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    rows: usize,
    cols: usize,
    prime: Prime,
    entries: Vec<Vec<(usize, u32)>>,
}

impl PrimeFieldMatrix {
    pub fn new(rows: usize, cols: usize, prime: Prime) -> Self {
        PrimeFieldMatrix {
            rows,
            cols,
            prime,
            entries: vec![Vec::new(); rows],
        }
    }

    pub fn from_int(m: &IntMatrix, prime: Prime) -> Self {
        let mut out = Self::new(m.rows, m.cols, prime);
        for (r, row) in m.entries.iter().enumerate() {
            out.entries[r] = row
                .iter()
                .map(|&(c, v)| (c, prime.reduce(v)))
                .filter(|&(_, v)| v != 0)
                .collect();
        }
        out
    }

    pub fn identity(k: usize, prime: Prime) -> Self {
        let mut out = Self::new(k, k, prime);
        for i in 0..k {
            out.entries[i].push((i, 1));
        }
        out
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Adds `v` (reduced mod p) to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of bounds");
        let p = self.prime.0 as u64;
        let v = self.prime.reduce(v) as u64;
        let row = &mut self.entries[r];
        match row.binary_search_by_key(&c, |&(k, _)| k) {
            Ok(i) => {
                row[i].1 = ((row[i].1 as u64 + v) % p) as u32;
                if row[i].1 == 0 {
                    row.remove(i);
                }
            }
            Err(i) if v != 0 => row.insert(i, (c, v as u32)),
            Err(_) => {}
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }
}

trait Field {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - f * b`
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
}

struct Gf(u64);

impl Field for Gf {
    type E = u32;
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u32) -> u32 {
        let (mut base, mut exp, mut acc) = (*a as u64, self.0 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        acc as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (*a as u64 * *b as u64 % self.0) as u32
    }
    fn sub_mul(&self, a: &u32, f: &u32, b: &u32) -> u32 {
        let fb = *f as u64 * *b as u64 % self.0;
        ((*a as u64 + self.0 - fb) % self.0) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            (self.0 - *a as u64) as u32
        }
    }
}

struct Rationals;

impl Field for Rationals {
    type E = BigRational;
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        BigRational::one() / a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub_mul(&self, a: &BigRational, f: &BigRational, b: &BigRational) -> BigRational {
        a - f * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
}

type SparseRow<E> = Vec<(usize, E)>;

/// `row - f * pivot` for sorted sparse rows.
fn eliminate<F: Field>(field: &F, row: &SparseRow<F::E>, f: &F::E, pivot: &SparseRow<F::E>) -> SparseRow<F::E> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            let v = field.mul(&field.neg(f), &pivot[j].1);
            out.push((pivot[j].0, v));
            j += 1;
        } else {
            let v = field.sub_mul(&row[i].1, f, &pivot[j].1);
            if !field.is_zero(&v) {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn echelon_rank<F: Field>(field: &F, mut rows: Vec<SparseRow<F::E>>) -> usize {
    rows.retain(|r| !r.is_empty());
    rows.sort_by_key(Vec::len);
    let mut pivots: HashMap<usize, SparseRow<F::E>> = HashMap::new();
    for mut row in rows {
        loop {
            let Some((lead, coeff)) = row.first().cloned() else {
                break;
            };
            match pivots.get(&lead) {
                Some(p) => row = eliminate(field, &row, &coeff, p),
                None => {
                    let inv = field.inv(&coeff);
                    let normalized = row.iter().map(|(c, v)| (*c, field.mul(v, &inv))).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

pub fn rank_gf(m: &PrimeFieldMatrix) -> usize {
    let field = Gf(m.prime.0 as u64);
    let p = field.0;
    let mut rows: Vec<&SparseRow<u32>> = m.entries.iter().filter(|r| !r.is_empty()).collect();
    rows.sort_by_key(|r| r.len());
    // pivot rows indexed by leading column, normalized to lead 1
    let mut pivots: Vec<Option<SparseRow<u32>>> = vec![None; m.cols];
    let mut found = 0;
    let mut cur: SparseRow<u32> = Vec::new();
    let mut next: SparseRow<u32> = Vec::new();
    for row in rows {
        cur.clear();
        cur.extend_from_slice(row);
        while let Some(&(lead, coeff)) = cur.first() {
            let Some(piv) = &pivots[lead] else {
                let inv = field.inv(&coeff) as u64;
                pivots[lead] = Some(cur.iter().map(|&(c, v)| (c, (v as u64 * inv % p) as u32)).collect());
                found += 1;
                break;
            };
            // cur - coeff * piv; the leading entries cancel
            let f = coeff as u64;
            next.clear();
            let (mut i, mut j) = (1, 1);
            while i < cur.len() || j < piv.len() {
                if j >= piv.len() || (i < cur.len() && cur[i].0 < piv[j].0) {
                    next.push(cur[i]);
                    i += 1;
                } else if i >= cur.len() || piv[j].0 < cur[i].0 {
                    next.push((piv[j].0, ((p - f * piv[j].1 as u64 % p) % p) as u32));
                    j += 1;
                } else {
                    let v = (cur[i].1 as u64 + p - f * piv[j].1 as u64 % p) % p;
                    if v != 0 {
                        next.push((cur[i].0, v as u32));
                    }
                    i += 1;
                    j += 1;
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
    }
    found
}

pub fn rank_rational(m: &IntMatrix) -> usize {
    let rows = m
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(c, v)| (c, BigRational::from_integer(BigInt::from(v))))
                .collect()
        })
        .collect();
    echelon_rank(&Rationals, rows)
}

pub fn rank(m: &IntMatrix, backend: Backend) -> usize {
    match backend {
        Backend::Prime(p) => rank_gf(&PrimeFieldMatrix::from_int(m, p)),
        Backend::Rational => rank_rational(m),
    }
}
