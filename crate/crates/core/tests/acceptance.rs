//! Acceptance run: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit if
//! any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use tmi_core::complex::{Cell, LabeledComplex};
use tmi_core::gamma::{gamma, gamma_closed};
use tmi_core::linalg::{Backend, Prime, DEFAULT_PRIME};
use tmi_core::monomial::{
    ideal_intersect, ideal_product, ideal_sum, prime_block, q_range, transversal_generators, transversal_prefix,
    BlockConfig, Monomial, MonomialIdeal, VarId,
};
use tmi_core::oracle::betti_oracle;
use tmi_core::resolution::{
    betti_table, cellular_complex, certify, check_acyclic, check_d2, hilbert_numerator_check, BettiTable,
};
use tmi_core::veronese::{depolarize, parse_x_monomial, polarize, veronese_checks, y_power_generators, YMonomial};

/// Wall-clock limit for the single golden example.
const GOLDEN_TIME_LIMIT: Duration = Duration::from_secs(1);
/// Wall-clock limit for computing both Betti tables over the whole sweep.
const SWEEP_TIME_LIMIT: Duration = Duration::from_secs(300);
/// The sweep covers every block-size composition of `m` up to this bound.
const SWEEP_MAX_VARIABLES: usize = 10;
const KOSZUL_MAX_VARIABLES: usize = 8;
const VERONESE_MAX_VARIABLES: usize = 8;
/// Generator count up to which the Hilbert numerator is expanded.
const HILBERT_MAX_GENERATORS: usize = 20;

fn backend() -> Backend {
    Backend::Prime(Prime::new(DEFAULT_PRIME as u64).expect("prime"))
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn compositions(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    (1..=m)
        .flat_map(|first| {
            compositions(m - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn sweep_configs() -> Vec<BlockConfig> {
    let mut out = Vec::new();
    for m in 1..=SWEEP_MAX_VARIABLES {
        for b in compositions(m) {
            for t in 1..=b.len() {
                out.push(BlockConfig::new(t, b.clone()).expect("valid"));
            }
        }
    }
    out
}

fn coarse_vec(t: &BettiTable) -> Vec<((usize, u32), u64)> {
    t.coarse().into_iter().collect()
}

/// Everything the sweep criteria look at, for one configuration.
struct SweepRecord {
    cfg: BlockConfig,
    problems: BTreeMap<u8, Vec<String>>,
}

impl SweepRecord {
    fn flag(&mut self, criterion: u8, msg: String) {
        self.problems.entry(criterion).or_default().push(msg);
    }
}

fn ideal_identities(cfg: &BlockConfig) -> Vec<String> {
    let mut bad = Vec::new();
    let n = cfg.n();
    let t = cfg.t();
    let whole = transversal_generators(cfg);
    if t >= 2 {
        let mut sum = MonomialIdeal::zero();
        for i in t - 1..n {
            let piece = ideal_product(&transversal_prefix(cfg, i, t - 1).unwrap(), &q_range(cfg, i + 1, n).unwrap());
            sum = ideal_sum(&sum, &piece);
        }
        if sum != whole {
            bad.push("sum decomposition over the last factor".into());
        }
        for s in t..n {
            let mut partial = MonomialIdeal::zero();
            for i in t - 1..s {
                let piece =
                    ideal_product(&transversal_prefix(cfg, i, t - 1).unwrap(), &q_range(cfg, i + 1, n).unwrap());
                partial = ideal_sum(&partial, &piece);
            }
            let next = ideal_product(&transversal_prefix(cfg, s, t - 1).unwrap(), &q_range(cfg, s + 1, n).unwrap());
            let expected =
                ideal_product(&transversal_prefix(cfg, s - 1, t - 1).unwrap(), &q_range(cfg, s + 1, n).unwrap());
            if ideal_intersect(&partial, &next) != expected {
                bad.push(format!("intersection identity at s = {s}"));
            }
        }
    }
    if n >= 2 && t == n - 1 {
        let mut sum = MonomialIdeal::zero();
        for i in 1..n {
            let mut prod = MonomialIdeal::unit();
            let mut j = 1;
            while j <= n {
                if j == i {
                    prod = ideal_product(&prod, &q_range(cfg, i, i + 1).unwrap());
                    j += 2;
                } else {
                    prod = ideal_product(&prod, &prime_block(cfg, j).unwrap());
                    j += 1;
                }
            }
            sum = ideal_sum(&sum, &prod);
        }
        if sum != whole {
            bad.push("merged-neighbour decomposition for t = n - 1".into());
        }
    }
    bad
}

/// Both Betti tables for one configuration: the part of the sweep that the
/// oracle comparison is timed on.
fn run_tables(cfg: BlockConfig) -> SweepRecord {
    let mut rec = SweepRecord {
        cfg: cfg.clone(),
        problems: BTreeMap::new(),
    };
    let x = gamma(&cfg).expect("build");
    match (betti_table(&x), betti_oracle(&transversal_generators(&cfg), backend())) {
        (Ok(ours), Ok(oracle)) => {
            if ours != oracle {
                rec.flag(4, format!("cellular {:?} vs oracle {:?}", coarse_vec(&ours), coarse_vec(&oracle)));
            }
            if !ours.is_linear(cfg.t() as u32) {
                rec.flag(8, format!("nonlinear table {:?}", coarse_vec(&ours)));
            }
        }
        (a, b) => rec.flag(4, format!("computation failed: {:?} / {:?}", a.err(), b.err())),
    }
    rec
}

fn run_checks(mut rec: SweepRecord) -> SweepRecord {
    let cfg = rec.cfg.clone();
    let x = gamma(&cfg).expect("build");
    let gens = transversal_generators(&cfg);

    let cert = certify(&x, backend()).expect("certify");
    if !cert.passed() {
        rec.flag(
            5,
            format!(
                "d2 {} minimal {} acyclic {}",
                cert.d2.passed(),
                cert.minimal.passed(),
                cert.acyclic.passed()
            ),
        );
    }

    let closed = gamma_closed(&cfg).expect("closed form");
    if closed != x {
        rec.flag(6, "recursive and closed-form cell sets differ".into());
    }
    let maximal = x.maximal_cells().len() as u64;
    if maximal != binomial(cfg.n() - 1, cfg.t() - 1) {
        rec.flag(6, format!("{maximal} maximal cells"));
    }

    if !x.is_connected() {
        rec.flag(7, "disconnected".into());
    }
    let mut prefixes: Vec<LabeledComplex> = (cfg.t()..cfg.n())
        .map(|s| gamma(&cfg.prefix(s, cfg.t()).unwrap()).unwrap())
        .collect();
    prefixes.push(x.clone());
    for (k, pair) in prefixes.windows(2).enumerate() {
        if !pair[0].is_subcomplex_of(&pair[1]) {
            let s = cfg.t() + k;
            rec.flag(7, format!("prefix {s} not inside prefix {}", s + 1));
        }
    }

    if gens.len() <= HILBERT_MAX_GENERATORS {
        let h = hilbert_numerator_check(&x, &gens).expect("hilbert");
        if !h.passed() {
            rec.flag(11, "numerators differ".into());
        }
    }

    for msg in ideal_identities(&cfg) {
        rec.flag(12, msg);
    }
    rec
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn golden_table() -> Outcome {
    let cfg = BlockConfig::new(3, vec![2, 2, 1, 1]).unwrap();
    let start = Instant::now();
    let table = betti_table(&gamma(&cfg).unwrap()).unwrap();
    let elapsed = start.elapsed();
    let expected = vec![((0, 3), 12), ((1, 4), 22), ((2, 5), 3)];
    let got = coarse_vec(&table);
    outcome(
        got == expected && elapsed < GOLDEN_TIME_LIMIT,
        format!("expected {expected:?}, got {got:?} in {elapsed:.2?}"),
    )
}

fn drawn_vertices() -> Outcome {
    let cfg = BlockConfig::new(3, vec![2, 2, 1, 1]).unwrap();
    let shown = [
        "x12x31x41", "x22x31x41", "x21x31x41", "x11x31x41", "x11x21x41", "x11x22x41", "x12x21x41", "x11x21x31",
        "x12x22x31", "x11x22x31", "x12x22x41", "x12x21x31",
    ];
    let shown: BTreeSet<Monomial> = shown
        .iter()
        .map(|s| {
            let d: Vec<u16> = s.split('x').filter(|p| !p.is_empty()).map(|p| p.parse().unwrap()).collect();
            Monomial::from_vars(d.iter().map(|&v| VarId::new(v / 10, v % 10)))
        })
        .collect();
    let labels: BTreeSet<Monomial> = gamma(&cfg).unwrap().vertex_labels().into_iter().collect();
    outcome(shown.len() == 12 && labels == shown, format!("{} vertex labels, {} drawn", labels.len(), shown.len()))
}

fn koszul() -> Outcome {
    let mut bad = Vec::new();
    for m in 1..=KOSZUL_MAX_VARIABLES {
        let table = betti_table(&gamma(&BlockConfig::veronese(m, 1).unwrap()).unwrap()).unwrap();
        let expected: Vec<((usize, u32), u64)> = (0..m).map(|i| ((i, i as u32 + 1), binomial(m, i + 1))).collect();
        if coarse_vec(&table) != expected {
            bad.push(m);
        }
    }
    outcome(bad.is_empty(), format!("m = 1..={KOSZUL_MAX_VARIABLES}, mismatches at {bad:?}"))
}

fn negative_controls() -> (bool, String) {
    let cfg = BlockConfig::new(2, vec![1, 2, 1]).unwrap();
    let mut c = cellular_complex(&gamma(&cfg).unwrap()).unwrap();
    let e = c.differential(1)[0].clone();
    let flipped = c.negate_entry(1, e.source, e.target) && !check_d2(&c).passed();

    let a = Cell::vertex(&[VarId::new(1, 1)]).unwrap();
    let b = Cell::vertex(&[VarId::new(2, 1)]).unwrap();
    let split = LabeledComplex::from_cells(1, [a, b]).unwrap();
    let report = check_acyclic(&split, backend()).unwrap();
    let disconnected = report
        .failures
        .iter()
        .any(|f| f.degree == Monomial::from_vars([VarId::new(1, 1), VarId::new(2, 1)]) && f.reduced_homology == vec![1]);
    (flipped && disconnected, format!("flipped sign caught {flipped}, disconnected restriction caught {disconnected}"))
}

fn veronese() -> Outcome {
    let mut bad = Vec::new();
    for m in 1..=VERONESE_MAX_VARIABLES {
        for t in 1..=m {
            let r = veronese_checks(m, t, backend()).unwrap();
            if !r.passed() {
                bad.push(format!("({m},{t})"));
            }
        }
    }
    let f = veronese_checks(5, 2, backend()).unwrap().f_vector;
    outcome(bad.is_empty() && f == vec![10, 20, 15, 4], format!("failures {bad:?}; (5,2) f-vector {f:?}"))
}

fn depolarization() -> Outcome {
    let mut bad = Vec::new();
    for m in 1..=VERONESE_MAX_VARIABLES {
        for t in 1..=m {
            let s = m + 1 - t;
            let gens = transversal_generators(&BlockConfig::veronese(m, t).unwrap());
            let image: BTreeSet<YMonomial> = gens.generators().iter().map(|g| depolarize(g, m, t).unwrap()).collect();
            let targets = y_power_generators(s, t);
            let round_x = gens.generators().iter().all(|g| polarize(&depolarize(g, m, t).unwrap(), m, t).unwrap() == *g);
            let round_y = targets.iter().all(|y| depolarize(&polarize(y, m, t).unwrap(), m, t).unwrap() == *y);
            let onto = image == targets.iter().cloned().collect::<BTreeSet<_>>() && image.len() == gens.len();
            if !(round_x && round_y && onto) {
                bad.push(format!("({m},{t})"));
            }
        }
    }
    let worked = depolarize(&parse_x_monomial("x1*x3*x4").unwrap(), 4, 3).unwrap();
    let expected: YMonomial = "y1*y2^2".parse().unwrap();
    outcome(bad.is_empty() && worked == expected, format!("failures {bad:?}; x1*x3*x4 -> {worked}"))
}

fn main() -> ExitCode {
    let mut lines: Vec<(u8, &str, Outcome)> = Vec::new();
    lines.push((1, "golden Betti table for n=4 t=3 b=(2,2,1,1)", golden_table()));
    lines.push((2, "drawn vertex set for n=4 t=3 b=(2,2,1,1)", drawn_vertices()));
    lines.push((3, "Koszul ranks for t=1", koszul()));

    let configs = sweep_configs();
    let start = Instant::now();
    let records: Vec<SweepRecord> = configs.into_par_iter().map(run_tables).collect();
    let elapsed = start.elapsed();
    let records: Vec<SweepRecord> = records.into_par_iter().map(run_checks).collect();
    let summary = |k: u8| -> (bool, String) {
        let bad: Vec<String> = records
            .iter()
            .filter_map(|r| r.problems.get(&k).map(|p| format!("{}: {}", r.cfg, p.join("; "))))
            .collect();
        let mut d = format!("{} configurations, {} failing", records.len(), bad.len());
        if !bad.is_empty() {
            d += &format!(": {}", bad.iter().take(3).cloned().collect::<Vec<_>>().join(" | "));
        }
        (bad.is_empty(), d)
    };

    let (ok, d) = summary(4);
    lines.push((
        4,
        "cellular Betti tables equal the oracle",
        outcome(ok && elapsed < SWEEP_TIME_LIMIT, format!("{d}; tables took {elapsed:.1?}")),
    ));
    let (ok, d) = summary(5);
    let (neg_ok, neg_d) = negative_controls();
    lines.push((5, "certification and negative controls", outcome(ok && neg_ok, format!("{d}; {neg_d}"))));
    let (ok, d) = summary(6);
    lines.push((6, "closed form and maximal cell count", outcome(ok, d)));
    let (ok, d) = summary(7);
    lines.push((7, "connected and nested", outcome(ok, d)));
    let (ok, d) = summary(8);
    lines.push((8, "linear resolutions", outcome(ok, d)));
    lines.push((9, "Veronese ball conditions", veronese()));
    lines.push((10, "depolarization bijection", depolarization()));
    let (ok, d) = summary(11);
    lines.push((11, "Hilbert numerators", outcome(ok, d)));
    let (ok, d) = summary(12);
    lines.push((12, "ideal decompositions", outcome(ok, d)));

    lines.sort_by_key(|l| l.0);
    let mut failed = 0;
    for (k, name, o) in &lines {
        println!("[{}] criterion {k:>2}: {name} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("{} of {} criteria passed", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
