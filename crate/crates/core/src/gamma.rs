//! Construction of the complex `Γ_{n,t}` supporting the resolution of the
//! transversal ideal `I_{n,t}`.
//!
//! The recursive builder glues `Γ_{i,t-1} × Δ(Q_{i+1})` for
//! `i = t-1, ..., n-1`, where `Γ_{i,t-1}` lives on the first `i` blocks and
//! `Q_{i+1}` is the set of variables of blocks `i+1..=n`. Unwinding the
//! recursion gives a closed form: the maximal cells are the products
//! `Δ(B_1) × ... × Δ(B_t)` over all splittings of the block sequence into
//! `t` consecutive nonempty intervals `B_1, ..., B_t`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::complex::{glue, product, simplex, Cell, LabeledComplex};
use crate::error::{Error, Result};
use crate::monomial::BlockConfig;

/// `Δ(P_1) × ... × Δ(P_n)`, the complex for `t = n`.
pub fn gamma_full(cfg: &BlockConfig) -> Result<LabeledComplex> {
    if cfg.t() != cfg.n() {
        return Err(Error::InvalidConfig(format!(
            "gamma_full needs t = n, got {cfg}"
        )));
    }
    full_product(cfg, cfg.n())
}

fn full_product(cfg: &BlockConfig, p: usize) -> Result<LabeledComplex> {
    let top = Cell::new(
        (1..=p)
            .map(|j| cfg.block_vars(j))
            .collect::<Result<Vec<_>>>()?,
    )?;
    LabeledComplex::closure(p, [top])
}

/// One recursive summand `Γ_{i,t-1} × Δ(Q_{i+1})` of the top-level union.
#[derive(Clone, Debug)]
pub struct Summand {
    pub i: usize,
    pub complex: LabeledComplex,
}

struct Builder<'a> {
    cfg: &'a BlockConfig,
    memo: HashMap<(usize, usize), LabeledComplex>,
}

impl Builder<'_> {
    /// `Γ_{p,q}` on the first `p` blocks.
    fn gamma(&mut self, p: usize, q: usize) -> Result<LabeledComplex> {
        if let Some(g) = self.memo.get(&(p, q)) {
            return Ok(g.clone());
        }
        let g = if q == 1 {
            simplex(&self.cfg.range_vars(1, p)?)?
        } else if p == q {
            full_product(self.cfg, p)?
        } else {
            let mut acc = LabeledComplex::empty(q);
            for s in self.summands(p, q)? {
                acc = glue(&acc, &s.complex)?;
            }
            acc
        };
        self.memo.insert((p, q), g.clone());
        Ok(g)
    }

    /// The summands of `Γ_{p,q}` for `q >= 2`, in increasing `i`.
    fn summands(&mut self, p: usize, q: usize) -> Result<Vec<Summand>> {
        let lower: Vec<(usize, LabeledComplex)> = (q - 1..p)
            .map(|i| Ok((i, self.gamma(i, q - 1)?)))
            .collect::<Result<_>>()?;
        let cfg = self.cfg;
        lower
            .into_par_iter()
            .map(|(i, g)| {
                let q_simplex = simplex(&cfg.range_vars(i + 1, p)?)?;
                Ok(Summand {
                    i,
                    complex: product(&g, &q_simplex)?,
                })
            })
            .collect()
    }
}

/// `Γ_{n,t}` by the recursive gluing construction.
pub fn gamma(cfg: &BlockConfig) -> Result<LabeledComplex> {
    Builder {
        cfg,
        memo: HashMap::new(),
    }
    .gamma(cfg.n(), cfg.t())
}

/// The top-level summands of `Γ_{n,t}` (empty for `t = 1`).
pub fn gamma_summands(cfg: &BlockConfig) -> Result<Vec<Summand>> {
    if cfg.t() == 1 {
        return Ok(Vec::new());
    }
    Builder {
        cfg,
        memo: HashMap::new(),
    }
    .summands(cfg.n(), cfg.t())
}

/// One gluing step of the recursion: the union of the summands before `i`,
/// the summand for `i`, and their intersection.
#[derive(Clone, Debug)]
pub struct GluingStep {
    pub i: usize,
    pub union_so_far: LabeledComplex,
    pub piece: LabeledComplex,
    pub intersection: LabeledComplex,
}

pub fn gluing_steps(cfg: &BlockConfig) -> Result<Vec<GluingStep>> {
    let summands = gamma_summands(cfg)?;
    let mut steps = Vec::new();
    let mut acc = LabeledComplex::empty(cfg.t());
    for (k, s) in summands.into_iter().enumerate() {
        if k > 0 {
            steps.push(GluingStep {
                i: s.i,
                intersection: acc.intersection(&s.complex),
                union_so_far: acc.clone(),
                piece: s.complex.clone(),
            });
        }
        acc = glue(&acc, &s.complex)?;
    }
    Ok(steps)
}

/// Cut points `1 <= i_1 < ... < i_{t-1} <= n-1`, in lexicographic order.
pub fn interval_splittings(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - left {
            cur.push(i);
            rec(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if t >= 1 && t <= n {
        rec(1, n, t - 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Maximal cells of the closed form, one per splitting of the blocks into
/// `t` consecutive intervals.
pub fn closed_form_maximal_cells(cfg: &BlockConfig) -> Result<Vec<Cell>> {
    interval_splittings(cfg.n(), cfg.t())
        .into_iter()
        .map(|cuts| {
            let bounds: Vec<usize> = std::iter::once(0)
                .chain(cuts)
                .chain(std::iter::once(cfg.n()))
                .collect();
            let factors = bounds
                .windows(2)
                .map(|w| cfg.range_vars(w[0] + 1, w[1]))
                .collect::<Result<Vec<_>>>()?;
            Cell::new(factors)
        })
        .collect()
}

/// `Γ_{n,t}` as the face closure of the closed-form maximal cells.
pub fn gamma_closed(cfg: &BlockConfig) -> Result<LabeledComplex> {
    LabeledComplex::closure(cfg.t(), closed_form_maximal_cells(cfg)?)
}

/// `⋃_i Δ(P_1) × ... × Δ(P_i + P_{i+1}) × ... × Δ(P_n)`, the complex for `t = n-1`.
pub fn gamma_nminus1(cfg: &BlockConfig) -> Result<LabeledComplex> {
    let n = cfg.n();
    if n < 2 || cfg.t() != n - 1 {
        return Err(Error::InvalidConfig(format!(
            "gamma_nminus1 needs t = n - 1, got {cfg}"
        )));
    }
    let tops = (1..n)
        .map(|i| {
            let mut factors = Vec::with_capacity(n - 1);
            for j in 1..i {
                factors.push(cfg.block_vars(j)?);
            }
            factors.push(cfg.range_vars(i, i + 1)?);
            for j in i + 2..=n {
                factors.push(cfg.block_vars(j)?);
            }
            Cell::new(factors)
        })
        .collect::<Result<Vec<_>>>()?;
    LabeledComplex::closure(n - 1, tops)
}
