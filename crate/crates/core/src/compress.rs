//! Compression of a type into a certificate: the `𝓑_n` ladder, the family
//! `H(β)`, evaluation of a certificate as a type definition, and the
//! uniform padded export.
//!
//! Ties are broken deterministically throughout. Ladder levels are listed in
//! construction order (parents in level order, then extensions in domain
//! order); the top-level `β` is the first member of the last level with
//! nothing strictly below it; each `β'_i` comes from first-candidate descent
//! starting at `β_i`; `H(β)` is listed by length, ties in construction order.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::bits::RowSet;
use crate::error::{Error, Result};
use crate::order::{
    decided_sign, descend, making_correct_decisions_on_rows, star_decision_from_rows, strictly_below,
    OrderContext, StarDecision,
};
use crate::pattern::tp_bound_k;
use crate::trace::{literal_rows, type_count, TraceSystem, TypeAssignment};

/// Default cap on the number of ladder sequences built per compression.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// `f(1) = 1`, `f(n) = n·f(n−1) + 1`: the padded row count of the uniform
/// form at height `n`.
pub fn f(n: usize) -> usize {
    (1..=n).fold(0, |acc, i| i * acc + 1)
}

mod bits01 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[bool], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&b| b as u8))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        let raw = Vec::<u8>::deserialize(d)?;
        raw.into_iter()
            .map(|b| match b {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(serde::de::Error::custom("signs are 0 or 1")),
            })
            .collect()
    }
}

mod grid01 {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<bool>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            seq.serialize_element(&row.iter().map(|&b| b as u8).collect::<Vec<u8>>())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<bool>>, D::Error> {
        let raw = Vec::<Vec<u8>>::deserialize(d)?;
        Ok(raw.into_iter().map(|r| r.into_iter().map(|b| b != 0).collect()).collect())
    }
}

/// One sequence of the certificate with its stored signs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gamma {
    pub cols: Vec<usize>,
    #[serde(with = "bits01")]
    pub signs: Vec<bool>,
}

impl Gamma {
    fn pairs(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.cols.iter().copied().zip(self.signs.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressionCertificate {
    pub n: usize,
    pub gammas: Vec<Gamma>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub domain_size: usize,
    /// Sign table of the height-0 case, where every column is constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<Gamma>,
}

impl CompressionCertificate {
    /// Total number of parameter columns.
    pub fn parameter_count(&self) -> usize {
        self.gammas.iter().map(|g| g.cols.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformCertificate {
    pub n: usize,
    pub f_n: usize,
    #[serde(with = "grid01")]
    pub s: Vec<Vec<bool>>,
    pub b: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct CompressOptions {
    pub budget: Option<u64>,
    /// Record `K` on the certificate (costs a TP search on first use).
    pub record_k: bool,
}

impl Default for CompressOptions {
    fn default() -> Self {
        CompressOptions { budget: Some(DEFAULT_NODE_BUDGET), record_k: true }
    }
}

/// Levels `𝓑_1..𝓑_n` of the ladder; only nonempty levels are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ladder {
    levels: Vec<Vec<Vec<usize>>>,
}

impl Ladder {
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// `𝓑_n` for `n ≥ 1`; empty above the height.
    pub fn level(&self, n: usize) -> &[Vec<usize>] {
        match n {
            0 => &[],
            _ => self.levels.get(n - 1).map_or(&[], |l| l.as_slice()),
        }
    }

    pub fn levels(&self) -> &[Vec<Vec<usize>>] {
        &self.levels
    }

    pub fn contains(&self, seq: &[usize]) -> bool {
        self.level(seq.len()).iter().any(|m| m.as_slice() == seq)
    }

    pub fn size(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

type SetKey = SmallVec<[usize; 8]>;

fn set_key(seq: &[usize]) -> SetKey {
    let mut k: SetKey = seq.iter().copied().collect();
    k.sort_unstable();
    k
}

/// Per-compression working state: memoized `p_{set}` rows and *-decision
/// masks over the domain, keyed by the underlying set.
struct Engine<'a> {
    ctx: OrderContext<'a>,
    domain: &'a [usize],
    info: HashMap<SetKey, (RowSet, Vec<bool>)>,
    nodes: u64,
    budget: Option<u64>,
}

impl<'a> Engine<'a> {
    fn new(ctx: OrderContext<'a>, domain: &'a [usize], budget: Option<u64>) -> Self {
        Engine { ctx, domain, info: HashMap::new(), nodes: 0, budget }
    }

    fn set_info(&mut self, seq: &[usize]) -> &(RowSet, Vec<bool>) {
        let key = set_key(seq);
        let ctx = self.ctx;
        let domain = self.domain;
        self.info.entry(key).or_insert_with_key(|key| {
            let base = ctx.rows_unchecked(key);
            let perturbed: Vec<(usize, RowSet)> = key.iter().map(|&b| (b, ctx.perturbed_rows(key, b))).collect();
            let decided = domain
                .iter()
                .map(|&c| star_decision_from_rows(ctx.sys, &base, &perturbed, c, None).decided)
                .collect();
            (base, decided)
        })
    }

    fn rows(&mut self, seq: &[usize]) -> RowSet {
        self.set_info(seq).0.clone()
    }

    fn charge(&mut self, n: u64) -> Result<()> {
        self.nodes += n;
        match self.budget {
            Some(b) if self.nodes > b => Err(Error::BudgetExceeded { budget: b }),
            _ => Ok(()),
        }
    }

    fn level_one(&mut self) -> Result<Vec<Vec<usize>>> {
        let sys = self.ctx.sys;
        let lvl: Vec<Vec<usize>> = self
            .domain
            .iter()
            .filter(|&&b| !sys.column_rows(b, true).is_empty() && !sys.column_rows(b, false).is_empty())
            .map(|&b| vec![b])
            .collect();
        self.charge(lvl.len() as u64)?;
        Ok(lvl)
    }

    fn extend(&mut self, prev: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
        let mut next = Vec::new();
        for beta in prev {
            let decided = self.set_info(beta).1.clone();
            for (i, &b) in self.domain.iter().enumerate() {
                if !decided[i] {
                    let mut s = beta.clone();
                    s.push(b);
                    next.push(s);
                }
            }
            if let Some(budget) = self.budget {
                if self.nodes + next.len() as u64 > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
            }
        }
        self.charge(next.len() as u64)?;
        Ok(next)
    }

    fn ladder(&mut self) -> Result<Ladder> {
        let mut levels = Vec::new();
        let mut cur = self.level_one()?;
        while !cur.is_empty() {
            let next = self.extend(&cur)?;
            levels.push(cur);
            cur = next;
        }
        Ok(Ladder { levels })
    }
}

struct HBuilder<'l> {
    ladder: &'l Ladder,
    level_rows: Vec<Vec<RowSet>>,
    index: Vec<HashMap<&'l [usize], usize>>,
    memo: HashMap<(usize, usize), Vec<(usize, usize)>>,
}

impl<'l> HBuilder<'l> {
    fn new(engine: &mut Engine, ladder: &'l Ladder) -> Self {
        let level_rows = ladder
            .levels
            .iter()
            .map(|lvl| lvl.iter().map(|m| engine.rows(m)).collect())
            .collect();
        let index = ladder
            .levels
            .iter()
            .map(|lvl| lvl.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect())
            .collect();
        HBuilder { ladder, level_rows, index, memo: HashMap::new() }
    }

    fn first_minimal(&self, n: usize) -> Option<usize> {
        let rows = &self.level_rows[n - 1];
        (0..rows.len()).find(|&j| !rows.iter().any(|r| strictly_below(r, &rows[j])))
    }

    fn is_minimal(&self, n: usize, j: usize) -> bool {
        let rows = &self.level_rows[n - 1];
        !rows.iter().any(|r| strictly_below(r, &rows[j]))
    }

    /// `H` of member `j` of `𝓑_n` as `(level, index)` pairs.
    fn h(&mut self, n: usize, j: usize) -> Result<Vec<(usize, usize)>> {
        if let Some(h) = self.memo.get(&(n, j)) {
            return Ok(h.clone());
        }
        let mut out: Vec<(usize, usize)> = Vec::new();
        if n > 1 {
            let beta = &self.ladder.levels[n - 1][j];
            for i in 0..n {
                let beta_i: Vec<usize> = beta.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &b)| b).collect();
                let pos = *self.index[n - 2].get(beta_i.as_slice()).ok_or_else(|| {
                    Error::contract(format!("subsequence {beta_i:?} missing from level {}", n - 1))
                })?;
                let prime = descend(&self.level_rows[n - 2], pos);
                for e in self.h(n - 1, prime)? {
                    if !out.contains(&e) {
                        out.push(e);
                    }
                }
            }
        }
        out.push((n, j));
        // Stable: recursive lists are already length-sorted.
        out.sort_by_key(|&(lvl, _)| lvl);
        self.memo.insert((n, j), out.clone());
        Ok(out)
    }

    fn seqs(&self, h: &[(usize, usize)]) -> Vec<Vec<usize>> {
        h.iter().map(|&(n, j)| self.ladder.levels[n - 1][j].clone()).collect()
    }
}

fn prepare<'a>(sys: &'a TraceSystem, b: &[usize], t: &'a TypeAssignment) -> Result<OrderContext<'a>> {
    sys.check_cols(b)?;
    let mut sorted = b.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != b.len() {
        return Err(Error::domain("domain lists a column twice"));
    }
    if sorted != t.domain() {
        return Err(Error::contract("type domain differs from B"));
    }
    OrderContext::new(sys, t)
}

/// `𝓑_1`: columns of `b` that take both values on the row universe.
pub fn build_b1(sys: &TraceSystem, b: &[usize]) -> Result<Vec<Vec<usize>>> {
    sys.check_cols(b)?;
    Ok(b.iter()
        .filter(|&&c| !sys.column_rows(c, true).is_empty() && !sys.column_rows(c, false).is_empty())
        .map(|&c| vec![c])
        .collect())
}

/// `𝓑_{n}` from `𝓑_{n−1}`: every `β⌢⟨b⟩` with `b ∈ B` not *-decided by `β`.
pub fn extend_ladder(ctx: &OrderContext, b: &[usize], prev: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    ctx.sys.check_cols(b)?;
    for beta in prev {
        ctx.rows(beta)?;
    }
    Engine::new(*ctx, b, None).extend(prev)
}

/// The full ladder and its height `n` (`0` when `𝓑_1` is empty).
pub fn max_ladder(ctx: &OrderContext, b: &[usize]) -> Result<(usize, Ladder)> {
    max_ladder_with_budget(ctx, b, Some(DEFAULT_NODE_BUDGET))
}

pub fn max_ladder_with_budget(ctx: &OrderContext, b: &[usize], budget: Option<u64>) -> Result<(usize, Ladder)> {
    if b.is_empty() {
        return Err(Error::domain("B must be nonempty"));
    }
    ctx.rows(b)?;
    let ladder = Engine::new(*ctx, b, budget).ladder()?;
    Ok((ladder.height(), ladder))
}

/// `H(β)` for a `≤_p`-minimal `β` of the ladder's level `|β|`.
pub fn build_h(ctx: &OrderContext, ladder: &Ladder, beta: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = beta.len();
    let j = ladder
        .level(n)
        .iter()
        .position(|m| m.as_slice() == beta)
        .ok_or_else(|| Error::contract("β is not a ladder member"))?;
    let domain = ctx.t.domain();
    let mut engine = Engine::new(*ctx, &domain, None);
    let mut hb = HBuilder::new(&mut engine, ladder);
    if !hb.is_minimal(n, j) {
        return Err(Error::contract("β is not ≤_p-minimal in its level"));
    }
    let h = hb.h(n, j)?;
    Ok(hb.seqs(&h))
}

pub fn compress(sys: &TraceSystem, b: &[usize], t: &TypeAssignment) -> Result<CompressionCertificate> {
    compress_with(sys, b, t, &CompressOptions::default())
}

pub fn compress_with(
    sys: &TraceSystem,
    b: &[usize],
    t: &TypeAssignment,
    opts: &CompressOptions,
) -> Result<CompressionCertificate> {
    Ok(compress_full(sys, b, t, opts)?.0)
}

/// Certificate together with the ladder it came from.
pub fn compress_full(
    sys: &TraceSystem,
    b: &[usize],
    t: &TypeAssignment,
    opts: &CompressOptions,
) -> Result<(CompressionCertificate, Ladder)> {
    if b.len() < 2 {
        return Err(Error::contract("compression needs |B| ≥ 2"));
    }
    let ctx = prepare(sys, b, t)?;
    let mut engine = Engine::new(ctx, b, opts.budget);
    let ladder = engine.ladder()?;
    let n = ladder.height();
    let k = opts.record_k.then(|| tp_bound_k(sys));
    let signs_of = |cols: &[usize]| cols.iter().map(|&c| ctx.sign(c)).collect::<Vec<bool>>();
    if n == 0 {
        let constants = Gamma { cols: b.to_vec(), signs: signs_of(b) };
        let cert = CompressionCertificate { n, gammas: vec![], k, domain_size: b.len(), constants: Some(constants) };
        return Ok((cert, ladder));
    }
    let mut hb = HBuilder::new(&mut engine, &ladder);
    let top = hb.first_minimal(n).expect("finite nonempty level has a minimal member");
    let h = hb.h(n, top)?;
    let gammas = hb
        .seqs(&h)
        .into_iter()
        .map(|cols| {
            let signs = signs_of(&cols);
            Gamma { cols, signs }
        })
        .collect();
    let cert = CompressionCertificate { n, gammas, k, domain_size: b.len(), constants: None };
    Ok((cert, ladder))
}

/// *-decision of `c` by one stored sequence, from its stored signs only.
pub(crate) fn gamma_decision(sys: &TraceSystem, g: &Gamma, c: usize) -> StarDecision {
    let base = literal_rows(sys, g.pairs());
    let perturbed: Vec<(usize, RowSet)> = (0..g.cols.len())
        .map(|l| {
            let rows = literal_rows(sys, g.pairs().enumerate().map(|(i, (col, s))| (col, s ^ (i == l))));
            (g.cols[l], rows)
        })
        .collect();
    star_decision_from_rows(sys, &base, &perturbed, c, None)
}

/// Index of the deciding sequence and its decision.
pub fn evaluate_explained(sys: &TraceSystem, cert: &CompressionCertificate, c: usize) -> Result<(Option<usize>, bool)> {
    sys.check_col(c)?;
    if let Some(g) = cert.gammas.iter().flat_map(|g| &g.cols).find(|&&g| g >= sys.col_count()) {
        return Err(Error::domain(format!("certificate column {g} out of range")));
    }
    if cert.n == 0 {
        return decided_sign(sys, &sys.all_rows(), c)
            .map(|s| (None, s))
            .ok_or(Error::Undetermined { col: c });
    }
    for (i, g) in cert.gammas.iter().enumerate() {
        if let Some(v) = gamma_decision(sys, g, c).verdict() {
            return Ok((Some(i), v));
        }
    }
    Err(Error::Undetermined { col: c })
}

/// Runs the certificate's decision procedure on column `c`: the first
/// sequence that *-decides `c` answers, directly if its pattern decides
/// `c`, otherwise `+` iff every consistent deciding perturbation says `+`.
pub fn evaluate(sys: &TraceSystem, cert: &CompressionCertificate, c: usize) -> Result<bool> {
    Ok(evaluate_explained(sys, cert, c)?.1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub certificate: CompressionCertificate,
    pub mismatches: Vec<usize>,
    /// Columns where some shortest deciding sequence decides incorrectly.
    pub minimal_length_violations: Vec<usize>,
}

impl RoundtripReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.minimal_length_violations.is_empty()
    }
}

pub fn verify_roundtrip(sys: &TraceSystem, b: &[usize], t: &TypeAssignment) -> Result<RoundtripReport> {
    verify_roundtrip_with(sys, b, t, &CompressOptions::default())
}

pub fn verify_roundtrip_with(
    sys: &TraceSystem,
    b: &[usize],
    t: &TypeAssignment,
    opts: &CompressOptions,
) -> Result<RoundtripReport> {
    let certificate = compress_with(sys, b, t, opts)?;
    roundtrip_of(sys, b, t, certificate)
}

pub(crate) fn roundtrip_of(
    sys: &TraceSystem,
    b: &[usize],
    t: &TypeAssignment,
    certificate: CompressionCertificate,
) -> Result<RoundtripReport> {
    let mut mismatches = Vec::new();
    let mut minimal_length_violations = Vec::new();
    for &c in b {
        let truth = t.sign(c).expect("c in domain");
        match evaluate(sys, &certificate, c) {
            Ok(v) if v == truth => {}
            Ok(_) | Err(Error::Undetermined { .. }) => mismatches.push(c),
            Err(e) => return Err(e),
        }
        let decisions: Vec<(usize, StarDecision)> = certificate
            .gammas
            .iter()
            .map(|g| (g.cols.len(), gamma_decision(sys, g, c)))
            .filter(|(_, d)| d.decided)
            .collect();
        if let Some(&(len, _)) = decisions.first() {
            let bad = decisions
                .iter()
                .filter(|(l, _)| *l == len)
                .any(|(_, d)| d.direct.is_none() && d.via_perturbations.iter().any(|&(_, s)| s != truth));
            if bad {
                minimal_length_violations.push(c);
            }
        }
    }
    Ok(RoundtripReport { certificate, mismatches, minimal_length_violations })
}

/// Pads to exactly `f(n)` rows (repeating the last sequence) of `n` columns
/// (repeating each sequence's last entry).
pub fn pad_certificate(cert: &CompressionCertificate) -> Result<UniformCertificate> {
    let n = cert.n;
    if n == 0 || cert.gammas.is_empty() {
        return Err(Error::contract("the uniform form needs n ≥ 1"));
    }
    let f_n = f(n);
    if cert.gammas.len() > f_n {
        return Err(Error::contract(format!("{} sequences exceed f({n}) = {f_n}", cert.gammas.len())));
    }
    let last = cert.gammas.last().expect("nonempty");
    let (mut s, mut b) = (Vec::with_capacity(f_n), Vec::with_capacity(f_n));
    for i in 0..f_n {
        let g = cert.gammas.get(i).unwrap_or(last);
        if g.cols.is_empty() || g.cols.len() > n {
            return Err(Error::contract("sequence length outside 1..=n"));
        }
        let pad = |v: &[usize]| -> Vec<usize> { (0..n).map(|j| v[j.min(v.len() - 1)]).collect() };
        b.push(pad(&g.cols));
        s.push((0..n).map(|j| g.signs[j.min(g.signs.len() - 1)]).collect());
    }
    Ok(UniformCertificate { n, f_n, s, b })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BasicBnReport {
    pub checked: usize,
    pub failures: [usize; 5],
    pub first_failure: Option<String>,
}

impl BasicBnReport {
    pub fn ok(&self) -> bool {
        self.failures.iter().all(|&f| f == 0)
    }

    fn fail(&mut self, clause: usize, beta: &[usize]) {
        self.failures[clause] += 1;
        if self.first_failure.is_none() {
            let name = ["i", "ii", "iii", "iv", "v"][clause];
            self.first_failure = Some(format!("clause ({name}) fails at {beta:?}"));
        }
    }
}

/// Checks clauses (i)–(v) of the basic ladder lemma on every member.
pub fn basic_bn_report(ctx: &OrderContext, ladder: &Ladder, b: &[usize]) -> Result<BasicBnReport> {
    let mut report = BasicBnReport::default();
    let mut engine = Engine::new(*ctx, b, None);
    let sets: Vec<HashMap<&[usize], ()>> = ladder
        .levels
        .iter()
        .map(|l| l.iter().map(|m| (m.as_slice(), ())).collect())
        .collect();
    let in_level = |seq: &[usize]| sets.get(seq.len().wrapping_sub(1)).is_some_and(|s| s.contains_key(seq));
    for lvl in &ladder.levels {
        for beta in lvl {
            report.checked += 1;
            let n = beta.len();
            if beta.iter().any(|&x| ctx.perturbed_rows(beta, x).is_empty()) {
                report.fail(0, beta);
            }
            let ii = (0..n).all(|k| {
                (0..k).all(|l| {
                    !literal_rows(
                        ctx.sys,
                        beta[..=k].iter().enumerate().map(|(i, &x)| (x, ctx.sign(x) ^ (i == l || i == k))),
                    )
                    .is_empty()
                })
            });
            if !ii {
                report.fail(1, beta);
            }
            let iii = (1u64..(1 << n)).all(|mask| {
                let sub: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| beta[i]).collect();
                in_level(&sub)
            });
            if !iii {
                report.fail(2, beta);
            }
            if type_count(ctx.sys, beta) <= n * (n + 1) / 2 {
                report.fail(3, beta);
            }
            let decided = engine.set_info(beta).1.clone();
            let v = b.iter().zip(&decided).all(|(&c, &d)| {
                let mut ext = beta.clone();
                ext.push(c);
                d || in_level(&ext)
            });
            if !v {
                report.fail(4, beta);
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecisionLemmaReport {
    pub obvious_checked: usize,
    pub obvious_failures: usize,
    /// Instances whose hypotheses all hold.
    pub correct_decisions_checked: usize,
    pub correct_decisions_failures: usize,
}

impl DecisionLemmaReport {
    pub fn ok(&self) -> bool {
        self.obvious_failures == 0 && self.correct_decisions_failures == 0
    }
}

/// Checks the obvious-decide lemma on every ladder member and target, and
/// the making-correct-decisions lemma on every minimal member of every
/// level, for every perturbed element and target.
pub fn decision_lemma_report(ctx: &OrderContext, ladder: &Ladder, b: &[usize]) -> Result<DecisionLemmaReport> {
    let mut report = DecisionLemmaReport::default();
    for lvl in &ladder.levels {
        let rows: Vec<RowSet> = lvl.iter().map(|m| ctx.rows_unchecked(m)).collect();
        for (j, beta) in lvl.iter().enumerate() {
            for &c in b {
                if let Some(s) = decided_sign(ctx.sys, &rows[j], c) {
                    report.obvious_checked += 1;
                    if s != ctx.sign(c) {
                        report.obvious_failures += 1;
                    }
                }
            }
            if rows.iter().any(|r| strictly_below(r, &rows[j])) {
                continue;
            }
            for &bp in beta {
                for &c in b {
                    if let Some(ok) = making_correct_decisions_on_rows(ctx, lvl, &rows, beta, bp, c)? {
                        report.correct_decisions_checked += 1;
                        if !ok {
                            report.correct_decisions_failures += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
