//! Finite Δ-indiscernibility, order-sensitive instances, convex blocks and
//! type definitions over finite indiscernible sequences.
//!
//! An oracle of arity `N+1` plays the role of `Δ(ȳ_0..ȳ_N)`; each sign
//! vector `s` names one instance, and `±` adds its negation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::{combinations, delta_n_oracle, independence_dimension, DeltaOracle};
use crate::trace::{TraceSystem, TypeAssignment};

fn sign_vectors(m: usize) -> impl Iterator<Item = Vec<bool>> {
    // Lexicographic bit strings, first slot most significant.
    (0..1u64 << m).map(move |v| (0..m).map(|i| v >> (m - 1 - i) & 1 == 1).collect())
}

/// Truth values of every instance on one tuple of sequence indices.
fn signature(seq: &[usize], oracle: &DeltaOracle, idx: &[usize]) -> Vec<bool> {
    let cols: Vec<usize> = idx.iter().map(|&i| seq[i]).collect();
    sign_vectors(oracle.arity()).map(|s| oracle.eval(&cols, &s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Indiscernibility {
    pub holds: bool,
    /// Fewer elements than the oracle's arity: nothing to compare.
    pub vacuous: bool,
    /// Index tuple disagreeing with the first one.
    pub failing_tuple: Option<Vec<usize>>,
}

impl Indiscernibility {
    fn vacuous() -> Self {
        Indiscernibility { holds: true, vacuous: true, failing_tuple: None }
    }

    fn from_failure(f: Option<Vec<usize>>) -> Self {
        Indiscernibility { holds: f.is_none(), vacuous: false, failing_tuple: f }
    }
}

/// First increasing index tuple whose instance values differ from those of
/// `(0, 1, .., N)`.
pub fn first_indiscernibility_failure(seq: &[usize], oracle: &DeltaOracle) -> Option<Vec<usize>> {
    let m = oracle.arity();
    if seq.len() < m {
        return None;
    }
    let tuples = combinations(seq.len(), m);
    let reference = signature(seq, oracle, &tuples[0]);
    crate::par::find_map_first(&tuples[1..], |t| (signature(seq, oracle, t) != reference).then(|| t.clone()))
}

pub fn is_delta_indiscernible(seq: &[usize], oracle: &DeltaOracle) -> Indiscernibility {
    if seq.len() < oracle.arity() {
        return Indiscernibility::vacuous();
    }
    Indiscernibility::from_failure(first_indiscernibility_failure(seq, oracle))
}

fn injective_tuples(l: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(l: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in 0..l {
            if !cur.contains(&i) {
                cur.push(i);
                rec(l, m, cur, out);
                cur.pop();
            }
        }
    }
    rec(l, m, &mut cur, &mut out);
    out
}

/// All injective index tuples agree, regardless of order.
pub fn is_delta_indiscernible_set(seq: &[usize], oracle: &DeltaOracle) -> Indiscernibility {
    let m = oracle.arity();
    if seq.len() < m {
        return Indiscernibility::vacuous();
    }
    let tuples = injective_tuples(seq.len(), m);
    let reference = signature(seq, oracle, &tuples[0]);
    let f = crate::par::find_map_first(&tuples[1..], |t| (signature(seq, oracle, t) != reference).then(|| t.clone()));
    Indiscernibility::from_failure(f)
}

/// An instance of `±Δ` (sign vector `s`, negated when `polarity` is false)
/// that flips under swapping slots `t` and `t+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderSensitive {
    #[serde(serialize_with = "ser_bits")]
    pub s: Vec<bool>,
    pub polarity: bool,
    pub t: usize,
}

fn ser_bits<S: serde::Serializer>(v: &[bool], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&bits(v))
}

pub(crate) fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl OrderSensitive {
    fn eval(&self, oracle: &DeltaOracle, cols: &[usize]) -> bool {
        oracle.eval(cols, &self.s) == self.polarity
    }

    pub fn s_string(&self) -> String {
        bits(&self.s)
    }
}

/// Flip test on the first `N+1` members: true in order, false with slots
/// `t`, `t+1` swapped.
pub fn flip_test(seq: &[usize], oracle: &DeltaOracle, os: &OrderSensitive) -> bool {
    let m = oracle.arity();
    if seq.len() < m || os.t + 1 >= m {
        return false;
    }
    let orig: Vec<usize> = seq[..m].to_vec();
    let mut swapped = orig.clone();
    swapped.swap(os.t, os.t + 1);
    os.eval(oracle, &orig) && !os.eval(oracle, &swapped)
}

/// Searches polarity (`+` first), then `t`, then `s` in lexicographic
/// order for an instance passing the flip test.
pub fn find_order_sensitive(seq: &[usize], oracle: &DeltaOracle) -> Result<OrderSensitive> {
    if !is_delta_indiscernible(seq, oracle).holds {
        return Err(Error::contract("sequence is not Δ-indiscernible"));
    }
    let set = is_delta_indiscernible_set(seq, oracle);
    if set.holds {
        return Err(Error::contract("sequence is a Δ-indiscernible set"));
    }
    let m = oracle.arity();
    for polarity in [true, false] {
        for t in 0..m - 1 {
            for s in sign_vectors(m) {
                let os = OrderSensitive { s, polarity, t };
                if flip_test(seq, oracle, &os) {
                    return Ok(os);
                }
            }
        }
    }
    Err(Error::contract("no order-sensitive instance found"))
}

/// `θ(y0, y1)`: the instance with the first `t` slots bound to the head of
/// the sequence and the last `N−t−1` slots to its tail.
pub fn theta(seq: &[usize], oracle: &DeltaOracle, os: &OrderSensitive, y0: usize, y1: usize) -> bool {
    let (m, l) = (oracle.arity(), seq.len());
    let n = m - 1;
    let mut cols: Vec<usize> = seq[..os.t].to_vec();
    cols.push(y0);
    cols.push(y1);
    cols.extend_from_slice(&seq[l - n + os.t + 1..]);
    os.eval(oracle, &cols)
}

/// Index range `t..=L−N+t` on which `θ` orders the sequence.
pub fn middle_segment(len: usize, arity: usize, t: usize) -> (usize, usize) {
    (t, len + 1 + t - arity)
}

/// `θ(b_i, b_j) ⟺ i < j` for all distinct `i, j` in the middle segment.
pub fn order_predicate_check(seq: &[usize], oracle: &DeltaOracle, os: &OrderSensitive) -> bool {
    let m = oracle.arity();
    if seq.len() < m || os.t + 1 >= m {
        return false;
    }
    let (lo, hi) = middle_segment(seq.len(), m, os.t);
    (lo..=hi).all(|i| (lo..=hi).filter(|&j| j != i).all(|j| theta(seq, oracle, os, seq[i], seq[j]) == (i < j)))
}

/// Maximal index intervals (inclusive) where row `r` is positive.
pub fn alternation_blocks(sys: &TraceSystem, r: usize, seq: &[usize]) -> Result<Vec<(usize, usize)>> {
    sys.check_row(r)?;
    sys.check_cols(seq)?;
    let mut out = Vec::new();
    let mut start = None;
    for (i, &c) in seq.iter().enumerate() {
        match (sys.get(r, c), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, seq.len() - 1));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum DefinitionCase {
    /// `c` takes `sign` iff it is one of the listed members.
    SetLike { listed: Vec<usize>, sign: bool },
    OrderLike {
        order: OrderSensitive,
        prefix: Vec<usize>,
        suffix: Vec<usize>,
        /// Convex positive blocks inside the middle segment, as index pairs.
        blocks: Vec<(usize, usize)>,
        /// Verbatim signs of the members outside the middle segment.
        edge_signs: Vec<(usize, bool)>,
    },
}

/// A definition of one type over a finite indiscernible sequence, using
/// only sequence members as parameters.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceTypeDefinition {
    pub n: usize,
    #[serde(flatten)]
    pub case: DefinitionCase,
    #[serde(skip)]
    seq: Vec<usize>,
    #[serde(skip)]
    oracle: DeltaOracle,
}

impl SequenceTypeDefinition {
    /// The defined sign of column `c`.
    pub fn evaluate(&self, c: usize) -> bool {
        match &self.case {
            DefinitionCase::SetLike { listed, sign } => listed.iter().any(|&i| self.seq[i] == c) == *sign,
            DefinitionCase::OrderLike { order, blocks, edge_signs, .. } => {
                if let Some(&(_, s)) = edge_signs.iter().find(|&&(i, _)| self.seq[i] == c) {
                    return s;
                }
                let th = |a: usize, b: usize| theta(&self.seq, &self.oracle, order, a, b);
                blocks.iter().any(|&(s, e)| {
                    let (bs, be) = (self.seq[s], self.seq[e]);
                    (c == bs || th(bs, c)) && (c == be || th(c, be))
                })
            }
        }
    }

    /// Shape of the definition: everything except the parameter choice.
    pub fn shape(&self) -> String {
        match &self.case {
            DefinitionCase::SetLike { listed, sign } => format!("set:{}:{}", *sign as u8, listed.len()),
            DefinitionCase::OrderLike { order, blocks, edge_signs, .. } => {
                let edges: Vec<bool> = edge_signs.iter().map(|&(_, s)| s).collect();
                format!(
                    "order:t{}:{}{}:k{}:e{}",
                    order.t,
                    if order.polarity { '+' } else { '-' },
                    order.s_string(),
                    blocks.len(),
                    bits(&edges)
                )
            }
        }
    }
}

/// Builds the definition with `N` the independence dimension of `sys` and
/// oracle `Δ_{N+1}`.
pub fn define_type_over_indiscernible(
    sys: &TraceSystem,
    seq: &[usize],
    t: &TypeAssignment,
) -> Result<SequenceTypeDefinition> {
    let n = independence_dimension(sys).0;
    let oracle = delta_n_oracle(sys, n + 1)?;
    define_type_with_oracle(sys, seq, t, n, oracle)
}

pub fn define_type_with_oracle(
    sys: &TraceSystem,
    seq: &[usize],
    t: &TypeAssignment,
    n: usize,
    oracle: DeltaOracle,
) -> Result<SequenceTypeDefinition> {
    sys.check_cols(seq)?;
    if seq.len() < 2 {
        return Err(Error::contract("sequence needs L ≥ 2"));
    }
    let mut sorted = seq.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != seq.len() {
        return Err(Error::contract("sequence members must be distinct columns"));
    }
    if sorted != t.domain() {
        return Err(Error::contract("type domain differs from the sequence"));
    }
    let Some(row) = t.realizers(sys).first() else {
        return Err(Error::contract("type not realized"));
    };
    if oracle.arity() != n + 1 {
        return Err(Error::contract("oracle arity must be N+1"));
    }
    if !is_delta_indiscernible(seq, &oracle).holds {
        return Err(Error::contract("sequence is not Δ_{N+1}-indiscernible"));
    }
    let l = seq.len();
    let signs: Vec<bool> = seq.iter().map(|&c| t.sign(c).expect("in domain")).collect();
    let case = if l <= 2 * n + 1 || is_delta_indiscernible_set(seq, &oracle).holds {
        let pos = signs.iter().filter(|&&s| s).count();
        let sign = pos <= l - pos;
        let listed = (0..l).filter(|&i| signs[i] == sign).collect();
        DefinitionCase::SetLike { listed, sign }
    } else {
        let order = find_order_sensitive(seq, &oracle)?;
        let (lo, hi) = middle_segment(l, oracle.arity(), order.t);
        let blocks = alternation_blocks(sys, row, seq)?
            .into_iter()
            .filter_map(|(s, e)| {
                let (s, e) = (s.max(lo), e.min(hi));
                (s <= e).then_some((s, e))
            })
            .collect();
        let edge_signs = (0..l).filter(|&i| i < lo || i > hi).map(|i| (i, signs[i])).collect();
        DefinitionCase::OrderLike {
            prefix: (0..order.t).collect(),
            suffix: (hi + 1..l).collect(),
            order,
            blocks,
            edge_signs,
        }
    };
    Ok(SequenceTypeDefinition { n, case, seq: seq.to_vec(), oracle })
}

/// First (lexicographic) order-preserving subsequence of `cols` of length
/// `target_len` that is Δ-indiscernible. Indiscernibility passes to
/// subsequences, so failing prefixes are pruned.
pub fn extract_indiscernible_subsequence(
    sys: &TraceSystem,
    cols: &[usize],
    oracle: &DeltaOracle,
    target_len: usize,
) -> Result<Option<Vec<usize>>> {
    sys.check_cols(cols)?;
    if target_len > cols.len() {
        return Ok(None);
    }
    fn rec(cols: &[usize], oracle: &DeltaOracle, from: usize, cur: &mut Vec<usize>, target: usize) -> bool {
        if cur.len() == target {
            return true;
        }
        for i in from..cols.len() {
            if cols.len() - i < target - cur.len() {
                return false;
            }
            cur.push(cols[i]);
            if is_delta_indiscernible(cur, oracle).holds && rec(cols, oracle, i + 1, cur, target) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    Ok(rec(cols, oracle, 0, &mut cur, target_len).then_some(cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::trace::realized_types;

    #[test]
    fn halfline_indiscernibility() {
        let h = fixtures::halfline(10, 6);
        let seq: Vec<usize> = (0..6).collect();
        let d2 = delta_n_oracle(&h, 2).unwrap();
        assert!(is_delta_indiscernible(&seq, &d2).holds);
        let set = is_delta_indiscernible_set(&seq, &d2);
        assert!(!set.holds && !set.vacuous);
        let os = find_order_sensitive(&seq, &d2).unwrap();
        assert_eq!((os.s_string(), os.polarity, os.t), ("10".into(), true, 0));
        assert!(flip_test(&seq, &d2, &os));
        assert!(order_predicate_check(&seq, &d2, &os));
        let wrong = OrderSensitive { s: vec![false, true], polarity: true, t: 0 };
        assert!(!order_predicate_check(&seq, &d2, &wrong));
    }

    #[test]
    fn vacuous_and_guards() {
        let h = fixtures::halfline(10, 6);
        let d3 = delta_n_oracle(&h, 3).unwrap();
        let r = is_delta_indiscernible(&[0, 1], &d3);
        assert!(r.holds && r.vacuous);
        let s = fixtures::singletons(5);
        let d2 = delta_n_oracle(&s, 2).unwrap();
        let seq: Vec<usize> = (0..5).collect();
        assert!(is_delta_indiscernible(&seq, &d2).holds);
        assert!(is_delta_indiscernible_set(&seq, &d2).holds);
        assert!(matches!(find_order_sensitive(&seq, &d2), Err(Error::Contract(_))));
    }

    #[test]
    fn reversed_halfline() {
        let h = fixtures::halfline(10, 6);
        let seq: Vec<usize> = (0..6).rev().collect();
        let d2 = delta_n_oracle(&h, 2).unwrap();
        let os = find_order_sensitive(&seq, &d2).unwrap();
        assert!(flip_test(&seq, &d2, &os));
        assert!(order_predicate_check(&seq, &d2, &os));
    }

    #[test]
    fn blocks() {
        let h = fixtures::halfline(10, 6);
        let seq: Vec<usize> = (0..6).collect();
        assert_eq!(alternation_blocks(&h, 4, &seq).unwrap(), vec![(0, 3)]);
        assert!(alternation_blocks(&h, 0, &seq).unwrap().is_empty());
        let s = fixtures::singletons(5);
        assert_eq!(alternation_blocks(&s, 2, &[0, 1, 2, 3, 4]).unwrap(), vec![(2, 2)]);
    }

    #[test]
    fn halfline_definitions() {
        let h = fixtures::halfline(10, 6);
        let seq: Vec<usize> = (0..6).collect();
        let t = crate::trace::trace_of_row(&h, 4, &seq).unwrap();
        let def = define_type_over_indiscernible(&h, &seq, &t).unwrap();
        match &def.case {
            DefinitionCase::OrderLike { blocks, .. } => assert_eq!(blocks, &vec![(0, 3)]),
            other => panic!("{other:?}"),
        }
        for t in realized_types(&h, &seq).unwrap() {
            let def = define_type_over_indiscernible(&h, &seq, &t).unwrap();
            for &c in &seq {
                assert_eq!(def.evaluate(c), t.sign(c).unwrap());
            }
        }
    }

    #[test]
    fn singleton_definitions() {
        let s = fixtures::singletons(5);
        let seq: Vec<usize> = (0..5).collect();
        let t = crate::trace::trace_of_row(&s, 2, &seq).unwrap();
        let def = define_type_over_indiscernible(&s, &seq, &t).unwrap();
        assert_eq!(def.case, DefinitionCase::SetLike { listed: vec![2], sign: true });
        let short = crate::trace::trace_of_row(&s, 0, &[0, 1]).unwrap();
        let def = define_type_over_indiscernible(&s, &[0, 1], &short).unwrap();
        assert!(matches!(def.case, DefinitionCase::SetLike { .. }));
        assert!(def.evaluate(0) && !def.evaluate(1));
    }

    #[test]
    fn extraction() {
        let h = fixtures::halfline(10, 6);
        let d2 = delta_n_oracle(&h, 2).unwrap();
        let seq: Vec<usize> = (0..6).collect();
        assert_eq!(extract_indiscernible_subsequence(&h, &seq, &d2, 6).unwrap(), Some(seq.clone()));
        let shuffled = [3, 0, 5, 1, 4, 2];
        let sub = extract_indiscernible_subsequence(&h, &shuffled, &d2, 4).unwrap();
        assert_eq!(sub, None);
        let sub = extract_indiscernible_subsequence(&h, &shuffled, &d2, 3).unwrap().unwrap();
        assert!(is_delta_indiscernible(&sub, &d2).holds);
        assert!(extract_indiscernible_subsequence(&h, &shuffled, &d2, 7).unwrap().is_none());
    }
}
