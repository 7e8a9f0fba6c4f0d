//! Dividing-line diagnostics: independence dimension, Sauer bound, TP and
//! ICT patterns, the bound `K`, local VC density and `Δ_N` oracles.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::RowSet;
use crate::error::{Error, Result};
use crate::par;
use crate::trace::{literal_rows, type_count, TraceSystem};

/// Lexicographic `k`-subsets of `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `Σ_{i≤d} C(n, i)`.
pub fn sauer_bound(n: usize, d: usize) -> u128 {
    (0..=d.min(n)).map(|i| binomial(n, i)).sum()
}

fn shattered(sys: &TraceSystem, cols: &[usize]) -> bool {
    cols.len() <= 63
        && (1usize << cols.len()) <= sys.row_count()
        && type_count(sys, cols) == 1 << cols.len()
}

/// Largest shattered subset of `cols`; the witness is the
/// lexicographically first one of that size (positions taken in `cols`
/// order). Shattered sets are closed downward, so the search only extends
/// shattered prefixes.
pub fn independence_dimension_on(sys: &TraceSystem, cols: &[usize]) -> Result<(usize, Vec<usize>)> {
    sys.check_cols(cols)?;
    let mut best: Vec<usize> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn dfs(sys: &TraceSystem, cols: &[usize], from: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
        for i in from..cols.len() {
            // Not enough columns left to beat the current best.
            if cur.len() + (cols.len() - i) <= best.len() {
                return;
            }
            cur.push(cols[i]);
            if shattered(sys, cur) {
                if cur.len() > best.len() {
                    *best = cur.clone();
                }
                dfs(sys, cols, i + 1, cur, best);
            }
            cur.pop();
        }
    }
    dfs(sys, cols, 0, &mut cur, &mut best);
    Ok((best.len(), best))
}

pub fn independence_dimension(sys: &TraceSystem) -> (usize, Vec<usize>) {
    let all: Vec<usize> = (0..sys.col_count()).collect();
    independence_dimension_on(sys, &all).expect("all columns are valid")
}

/// `|S(B0)| ≤ Σ_{i≤d} C(|B0|, i)` with `d` the dimension of the restriction.
pub fn sauer_check(sys: &TraceSystem, b0: &[usize]) -> Result<bool> {
    let (d, _) = independence_dimension_on(sys, b0)?;
    Ok(type_count(sys, b0) as u128 <= sauer_bound(b0.len(), d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VcDensityCheck {
    pub n: usize,
    pub pass: bool,
    pub failing: Option<Vec<usize>>,
}

/// Checks `|S(B)| ≤ N(N+1)/2` for every column set of size exactly `N`;
/// reports the lexicographically first failing set.
pub fn local_vc_density_check(sys: &TraceSystem, n: usize) -> Result<VcDensityCheck> {
    if n == 0 || n > sys.col_count() {
        return Err(Error::domain(format!("N must lie in 1..={}", sys.col_count())));
    }
    let bound = n * (n + 1) / 2;
    let sets = combinations(sys.col_count(), n);
    let failing = par::find_map_first(&sets, |b| (type_count(sys, b) > bound).then(|| b.clone()));
    Ok(VcDensityCheck { n, pass: failing.is_none(), failing })
}

/// Rows realizing the TP pair condition at `(ℓ, k)` for `seq[..=k]`.
fn tp_pair_rows(sys: &TraceSystem, seq: &[usize], l: usize, k: usize, pol: bool) -> RowSet {
    literal_rows(
        sys,
        (0..k)
            .filter(|&i| i != l)
            .map(|i| (seq[i], !pol))
            .chain([(seq[k], pol), (seq[l], pol)]),
    )
}

fn tp_new_position_ok(sys: &TraceSystem, seq: &[usize], k: usize, pol: bool) -> bool {
    (0..k).all(|l| !tp_pair_rows(sys, seq, l, k, pol).is_empty())
}

/// TP condition with polarity `pol` (`true` = positive pattern). Repeated
/// columns are allowed; contradictory literals make a pair fail.
pub fn verify_tp_sequence(sys: &TraceSystem, seq: &[usize], pol: bool) -> Result<bool> {
    if seq.is_empty() {
        return Err(Error::domain("TP sequences are nonempty"));
    }
    sys.check_cols(seq)?;
    Ok((1..seq.len()).all(|k| tp_new_position_ok(sys, seq, k, pol)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternWitness {
    pub kind: PatternKind,
    pub sequences: Vec<Vec<usize>>,
    pub length: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternKind {
    PositiveTp,
    NegativeTp,
    Ict,
}

/// Longest TP sequence of the given polarity; the witness is the first one
/// found in lexicographic DFS order. Each new position only adds pair
/// conditions ending at it, so a failing prefix prunes all extensions.
pub fn max_tp_pattern(sys: &TraceSystem, pol: bool) -> PatternWitness {
    let cols = sys.col_count();
    let top = par::map_range(cols, |first| {
        let mut best = vec![first];
        let mut cur = vec![first];
        tp_dfs(sys, pol, &mut cur, &mut best);
        best
    });
    let best = top
        .into_iter()
        .reduce(|a, b| if b.len() > a.len() { b } else { a })
        .expect("at least one column");
    PatternWitness {
        kind: if pol { PatternKind::PositiveTp } else { PatternKind::NegativeTp },
        length: best.len(),
        sequences: vec![best],
    }
}

fn tp_dfs(sys: &TraceSystem, pol: bool, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    // Beyond length 2 every entry must be distinct, so the length is capped.
    if cur.len() >= sys.col_count().max(2) {
        return;
    }
    for c in 0..sys.col_count() {
        cur.push(c);
        if tp_new_position_ok(sys, cur, cur.len() - 1, pol) {
            if cur.len() > best.len() {
                *best = cur.clone();
            }
            tp_dfs(sys, pol, cur, best);
        }
        cur.pop();
    }
}

/// `K = 1 + max(L⁺, L⁻)`: every sequence of length `K` fails both TP
/// conditions. Cached on the system.
pub fn tp_bound_k(sys: &TraceSystem) -> usize {
    *sys.tp_bound.get_or_init(|| {
        1 + max_tp_pattern(sys, true).length.max(max_tp_pattern(sys, false).length)
    })
}

fn check_same_rows(a: &TraceSystem, b: &TraceSystem) -> Result<()> {
    if a.row_count() != b.row_count() {
        return Err(Error::domain(format!(
            "row universes differ ({} vs {} rows)",
            a.row_count(),
            b.row_count()
        )));
    }
    Ok(())
}

/// First cross pair `(ℓ, k)` whose ICT pattern is inconsistent.
pub fn ict_first_failure(
    sys_phi: &TraceSystem,
    sys_psi: &TraceSystem,
    bseq: &[usize],
    cseq: &[usize],
) -> Result<Option<(usize, usize)>> {
    check_same_rows(sys_phi, sys_psi)?;
    if bseq.is_empty() || cseq.is_empty() {
        return Err(Error::domain("ICT sequences are nonempty"));
    }
    sys_phi.check_cols(bseq)?;
    sys_psi.check_cols(cseq)?;
    let b_rows: Vec<RowSet> = (0..bseq.len())
        .map(|l| literal_rows(sys_phi, bseq.iter().enumerate().map(|(i, &b)| (b, i == l))))
        .collect();
    for (l, bl) in b_rows.iter().enumerate() {
        for k in 0..cseq.len() {
            let ck = literal_rows(sys_psi, cseq.iter().enumerate().map(|(j, &c)| (c, j == k)));
            if bl.is_disjoint(&ck) {
                return Ok(Some((l, k)));
            }
        }
    }
    Ok(None)
}

pub fn ict_check(sys_phi: &TraceSystem, sys_psi: &TraceSystem, bseq: &[usize], cseq: &[usize]) -> Result<bool> {
    Ok(ict_first_failure(sys_phi, sys_psi, bseq, cseq)?.is_none())
}

/// `θ = ¬(φ ↔ ψ)` on the paired columns; returns the θ-system and the TP
/// sequence `0..m` over it, verified before returning.
pub fn ict_to_tp(
    sys_phi: &TraceSystem,
    sys_psi: &TraceSystem,
    bseq: &[usize],
    cseq: &[usize],
) -> Result<(TraceSystem, Vec<usize>)> {
    if bseq.len() != cseq.len() {
        return Err(Error::contract("ICT sequences must have equal length"));
    }
    if let Some((l, k)) = ict_first_failure(sys_phi, sys_psi, bseq, cseq)? {
        return Err(Error::contract(format!("ICT pattern fails at (ℓ,k) = ({l},{k})")));
    }
    let theta = TraceSystem::from_fn(sys_phi.row_count(), bseq.len(), |r, i| {
        sys_phi.get(r, bseq[i]) ^ sys_psi.get(r, cseq[i])
    })?;
    let theta = theta.with_col_labels(
        (0..bseq.len()).map(|i| format!("{}^{}", sys_phi.col_name(bseq[i]), sys_psi.col_name(cseq[i]))),
    )?;
    let dseq: Vec<usize> = (0..bseq.len()).collect();
    if !verify_tp_sequence(&theta, &dseq, true)? {
        return Err(Error::contract("θ-sequence failed the TP check"));
    }
    Ok((theta, dseq))
}

/// Pure sign oracle `(tuple, s) ↦ bool` of fixed arity.
#[derive(Clone)]
pub struct DeltaOracle {
    arity: usize,
    eval: Arc<dyn Fn(&[usize], &[bool]) -> bool + Send + Sync>,
}

impl fmt::Debug for DeltaOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeltaOracle").field("arity", &self.arity).finish_non_exhaustive()
    }
}

impl DeltaOracle {
    pub fn new(arity: usize, eval: impl Fn(&[usize], &[bool]) -> bool + Send + Sync + 'static) -> Self {
        DeltaOracle { arity, eval: Arc::new(eval) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Panics if the tuple or sign vector has the wrong length.
    pub fn eval(&self, tuple: &[usize], s: &[bool]) -> bool {
        assert_eq!(tuple.len(), self.arity, "tuple arity");
        assert_eq!(s.len(), self.arity, "sign vector arity");
        (self.eval)(tuple, s)
    }
}

/// `Δ_N(ȳ_0..ȳ_{N−1})` at sign vector `s`: consistency of the literals
/// `(tuple[i], s[i])`.
pub fn delta_n_oracle(sys: &TraceSystem, n: usize) -> Result<DeltaOracle> {
    if n == 0 {
        return Err(Error::domain("Δ_N needs N ≥ 1"));
    }
    let sys = Arc::new(sys.clone());
    Ok(DeltaOracle::new(n, move |tuple, s| {
        !literal_rows(&sys, tuple.iter().copied().zip(s.iter().copied())).is_empty()
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IctWitness {
    /// `(b_{2i}, b_{2i+1})` for `i < K`.
    pub c_pairs: Vec<(usize, usize)>,
    /// `(b_{2i}, b_{2i+1})` for `K ≤ i < 2K`.
    pub d_pairs: Vec<(usize, usize)>,
    pub checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TpIctOutcome {
    Verified(IctWitness),
    Failed(String),
}

/// Finite core of the TP-to-ICT direction.
///
/// Checks the length, `Δ_{4K}`-indiscernibility, that row `a` realizes the
/// alternation type on `b_0..b_{6K+1}` with a constant tail, and then, by
/// direct row scans, that for all `ℓ < K ≤ k < 2K` the pattern
/// `{ψ(pair i) : i < 2K, i ∉ {ℓ,k}} ∪ {¬ψ(pair ℓ), ¬ψ(pair k)}` is consistent
/// with `ψ(x; y0, y1) = φ(x; y0) ↔ φ(x; y1)` and pair `i = (b_{2i}, b_{2i+1})`.
pub fn tp_to_ict_step(sys: &TraceSystem, seq: &[usize], k: usize, a: usize) -> Result<TpIctOutcome> {
    sys.check_cols(seq)?;
    sys.check_row(a)?;
    if k == 0 {
        return Err(Error::domain("K must be positive"));
    }
    let fail = |m: String| Ok(TpIctOutcome::Failed(m));
    if seq.len() < 6 * k + 2 {
        return fail(format!("sequence too short: {} < 6K+2 = {}", seq.len(), 6 * k + 2));
    }
    let oracle = delta_n_oracle(sys, 4 * k)?;
    if let Some(tuple) = crate::indiscernible::first_indiscernibility_failure(seq, &oracle) {
        return fail(format!("indiscernibility fails at tuple {tuple:?}"));
    }
    for i in 0..=6 * k + 1 {
        let want = i == 2 * k || i == 6 * k + 1;
        if sys.get(a, seq[i]) != want {
            return fail(format!("row {a} does not realize the alternation type at index {i}"));
        }
    }
    if let Some(tail) = seq.get(6 * k + 2..) {
        if tail.windows(2).any(|w| sys.get(a, w[0]) != sys.get(a, w[1])) {
            return fail("truth value is not constant after index 6K+1".into());
        }
    }
    let pair = |i: usize| (seq[2 * i], seq[2 * i + 1]);
    let mut checked = 0;
    for l in 0..k {
        for kk in k..2 * k {
            let found = (0..sys.row_count()).any(|r| {
                (0..2 * k).all(|i| {
                    let (y0, y1) = pair(i);
                    let psi = sys.get(r, y0) == sys.get(r, y1);
                    psi != (i == l || i == kk)
                })
            });
            if !found {
                return fail(format!("displayed pattern inconsistent at (ℓ,k) = ({l},{kk})"));
            }
            checked += 1;
        }
    }
    Ok(TpIctOutcome::Verified(IctWitness {
        c_pairs: (0..k).map(pair).collect(),
        d_pairs: (k..2 * k).map(pair).collect(),
        checked,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gen;

    #[test]
    fn combinations_in_order() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(binomial(36, 4), 58905);
        assert_eq!(sauer_bound(3, 1), 4);
    }

    #[test]
    fn independence_examples() {
        assert_eq!(independence_dimension(&fixtures::chain4x3()), (1, vec![0]));
        assert_eq!(independence_dimension(&fixtures::cube2()).0, 2);
        let ones = TraceSystem::from_strings(&["1", "1"]).unwrap();
        assert_eq!(independence_dimension(&ones), (0, vec![]));
        assert_eq!(independence_dimension(&fixtures::intv4()).0, 2);
    }

    #[test]
    fn sauer_examples() {
        assert!(sauer_check(&fixtures::chain4x3(), &[0, 1, 2]).unwrap());
        assert!(sauer_check(&fixtures::cube2(), &[0, 1]).unwrap());
        assert!(sauer_check(&fixtures::cube2(), &[]).unwrap());
    }

    #[test]
    fn vc_density_examples() {
        let c = local_vc_density_check(&fixtures::cube2(), 2).unwrap();
        assert!(!c.pass);
        assert_eq!(c.failing, Some(vec![0, 1]));
        assert!(local_vc_density_check(&fixtures::chain4x3(), 2).unwrap().pass);
        assert!(local_vc_density_check(&fixtures::chain4x3(), 4).is_err());
    }

    #[test]
    fn tp_examples() {
        let chain = fixtures::chain4x3();
        assert!(verify_tp_sequence(&chain, &[0, 1], true).unwrap());
        assert!(!verify_tp_sequence(&chain, &[0, 1, 2], true).unwrap());
        assert_eq!(max_tp_pattern(&chain, true).length, 2);
        assert_eq!(max_tp_pattern(&chain, false).length, 2);
        assert_eq!(tp_bound_k(&chain), 3);
        let single = TraceSystem::from_strings(&["0", "1"]).unwrap();
        let w = max_tp_pattern(&single, true);
        assert_eq!((w.length, w.sequences[0].clone()), (2, vec![0, 0]));
        assert!(!verify_tp_sequence(&single, &[0, 0, 0], true).unwrap());
    }

    #[test]
    fn constant_system_k() {
        // Every column constant: the negative polarity still admits (b, b)
        // on an all-zero column, so K = 3 by the defining formula.
        let sys = TraceSystem::from_strings(&["01", "01"]).unwrap();
        assert_eq!(max_tp_pattern(&sys, true).length, 2);
        assert_eq!(max_tp_pattern(&sys, false).length, 2);
        assert_eq!(tp_bound_k(&sys), 3);
    }

    #[test]
    fn grid_ict_and_tp() {
        for m in 3..=5 {
            let (phi, psi) = gen::gen_grid(m).unwrap();
            let seq: Vec<usize> = (0..m).collect();
            assert!(ict_check(&phi, &psi, &seq, &seq).unwrap());
            let (theta, dseq) = ict_to_tp(&phi, &psi, &seq, &seq).unwrap();
            assert!(verify_tp_sequence(&theta, &dseq, true).unwrap());
            assert!(max_tp_pattern(&theta, true).length >= m);
            if m == 4 {
                assert!(tp_bound_k(&theta) >= 5);
            }
        }
    }

    #[test]
    fn ict_failures() {
        let s = fixtures::singletons(4);
        assert!(!ict_check(&s, &s, &[0, 1], &[2, 3]).unwrap());
        let e = ict_to_tp(&s, &s, &[0, 1], &[2, 3]).unwrap_err();
        assert!(e.to_string().contains("(0,0)"));
        assert!(ict_check(&s, &s, &[0], &[0]).unwrap());
        let (theta, d) = ict_to_tp(&s, &s, &[0], &[0]).unwrap();
        assert_eq!(d, vec![0]);
        assert_eq!(theta.col_count(), 1);
        let chain = fixtures::chain4x3();
        assert!(ict_check(&fixtures::singletons(5), &chain, &[0], &[0]).is_err());
    }

    #[test]
    fn delta_oracle_examples() {
        let chain = fixtures::chain4x3();
        let d = delta_n_oracle(&chain, 2).unwrap();
        assert!(d.eval(&[0, 1], &[true, false]));
        assert!(!d.eval(&[0, 1], &[false, true]));
        assert!(!d.eval(&[1, 1], &[true, false]));
        assert!(d.eval(&[1, 0], &[false, true]));
        assert!(delta_n_oracle(&chain, 0).is_err());
    }

    fn weight_two_system() -> TraceSystem {
        let rows: Vec<Vec<bool>> = (0u32..256)
            .filter(|v| v.count_ones() <= 2)
            .map(|v| (0..8).map(|i| v >> i & 1 == 1).collect())
            .collect();
        TraceSystem::from_rows(&rows).unwrap()
    }

    #[test]
    fn tp_to_ict_k1() {
        let sys = weight_two_system();
        let seq: Vec<usize> = (0..8).collect();
        let a = (0..sys.row_count())
            .find(|&r| (0..8).all(|i| sys.get(r, i) == (i == 2 || i == 7)))
            .unwrap();
        match tp_to_ict_step(&sys, &seq, 1, a).unwrap() {
            TpIctOutcome::Verified(w) => {
                assert_eq!(w.c_pairs, vec![(0, 1)]);
                assert_eq!(w.d_pairs, vec![(2, 3)]);
                assert_eq!(w.checked, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tp_to_ict_guards() {
        let sys = weight_two_system();
        let seq: Vec<usize> = (0..7).collect();
        match tp_to_ict_step(&sys, &seq, 1, 0).unwrap() {
            TpIctOutcome::Failed(m) => assert!(m.contains("sequence too short")),
            other => panic!("{other:?}"),
        }
        let h = fixtures::halfline(10, 8);
        let seq = [0, 2, 1, 3, 4, 5, 6, 7];
        match tp_to_ict_step(&h, &seq, 1, 0).unwrap() {
            TpIctOutcome::Failed(m) => assert!(m.contains("indiscernibility fails at tuple"), "{m}"),
            other => panic!("{other:?}"),
        }
    }
}
