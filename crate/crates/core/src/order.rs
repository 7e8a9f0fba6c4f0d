//! The `≤_p` quasi-order on column sets and the decides / *-decides
//! predicates relative to a fixed realized type `p`.
//!
//! Sequences are compared through their underlying sets.

use serde::Serialize;

use crate::bits::RowSet;
use crate::error::{Error, Result};
use crate::trace::{literal_rows, satisfying_rows, SignedPattern, TraceSystem, TypeAssignment};

/// A system together with the ambient type `p` (sign function δ).
#[derive(Clone, Copy, Debug)]
pub struct OrderContext<'a> {
    pub sys: &'a TraceSystem,
    pub t: &'a TypeAssignment,
}

impl<'a> OrderContext<'a> {
    pub fn new(sys: &'a TraceSystem, t: &'a TypeAssignment) -> Result<Self> {
        sys.check_cols(&t.domain())?;
        if t.realizers(sys).is_empty() {
            return Err(Error::contract("type not realized"));
        }
        Ok(OrderContext { sys, t })
    }

    fn check(&self, cols: &[usize]) -> Result<()> {
        match cols.iter().find(|&&c| !self.t.contains(c)) {
            Some(c) => Err(Error::domain(format!("column {c} outside the type's domain"))),
            None => Ok(()),
        }
    }

    /// Rows of `p_{B0}`; all rows for the empty set.
    pub fn rows(&self, b0: &[usize]) -> Result<RowSet> {
        self.check(b0)?;
        Ok(self.rows_unchecked(b0))
    }

    pub(crate) fn rows_unchecked(&self, b0: &[usize]) -> RowSet {
        literal_rows(self.sys, b0.iter().map(|&c| (c, self.sign(c))))
    }

    /// Rows of `p_{B0,{b'}}`.
    pub(crate) fn perturbed_rows(&self, b0: &[usize], flip: usize) -> RowSet {
        literal_rows(self.sys, b0.iter().map(|&c| (c, self.sign(c) ^ (c == flip))))
    }

    pub(crate) fn sign(&self, c: usize) -> bool {
        self.t.sign(c).expect("column in domain")
    }
}

/// `B0 ≤_p B1`: `p_{B0} ⊢ p_{B1}`.
pub fn le_p(ctx: &OrderContext, b0: &[usize], b1: &[usize]) -> Result<bool> {
    Ok(ctx.rows(b0)?.is_subset(&ctx.rows(b1)?))
}

pub fn equiv_p(ctx: &OrderContext, b0: &[usize], b1: &[usize]) -> Result<bool> {
    Ok(le_p(ctx, b0, b1)? && le_p(ctx, b1, b0)?)
}

pub fn lt_p(ctx: &OrderContext, b0: &[usize], b1: &[usize]) -> Result<bool> {
    Ok(le_p(ctx, b0, b1)? && !le_p(ctx, b1, b0)?)
}

pub(crate) fn strictly_below(a: &RowSet, b: &RowSet) -> bool {
    a.is_subset(b) && !b.is_subset(a)
}

/// Descent from `start` over precomputed member row sets: move to the first
/// member strictly below the current one until none exists.
pub(crate) fn descend(rows: &[RowSet], start: usize) -> usize {
    let mut cur = start;
    while let Some(next) = rows.iter().position(|r| strictly_below(r, &rows[cur])) {
        cur = next;
    }
    cur
}

/// A `≤_p`-minimal member of `family` lying `≤_p start`, by deterministic
/// first-candidate descent in family order.
pub fn minimal_below(ctx: &OrderContext, family: &[Vec<usize>], start: &[usize]) -> Result<Vec<usize>> {
    let pos = family
        .iter()
        .position(|m| m.as_slice() == start)
        .ok_or_else(|| Error::domain("start is not a member of the family"))?;
    let rows = family.iter().map(|m| ctx.rows(m)).collect::<Result<Vec<_>>>()?;
    Ok(family[descend(&rows, pos)].clone())
}

/// The sign a nonempty row set entails on column `c`, if any.
pub(crate) fn decided_sign(sys: &TraceSystem, rows: &RowSet, c: usize) -> Option<bool> {
    if rows.is_subset(sys.column_rows(c, true)) {
        Some(true)
    } else if rows.is_subset(sys.column_rows(c, false)) {
        Some(false)
    } else {
        None
    }
}

/// `q` decides `c`: the sign `q` entails on `c`, if any. `q` must be
/// consistent.
pub fn decides(sys: &TraceSystem, q: &SignedPattern, c: usize) -> Result<Option<bool>> {
    sys.check_col(c)?;
    let rows = satisfying_rows(sys, q)?;
    if rows.is_empty() {
        return Err(Error::contract("decides called on an inconsistent pattern"));
    }
    Ok(decided_sign(sys, &rows, c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarDecision {
    pub target: usize,
    pub decided: bool,
    pub direct: Option<bool>,
    /// `(b', sign)` for every `b'` whose single perturbation is consistent
    /// and decides the target.
    pub via_perturbations: Vec<(usize, bool)>,
    /// Present when the target lies in the type's domain and the decision
    /// was made.
    pub correct: Option<bool>,
}

impl StarDecision {
    /// The sign the evaluation algorithm reads off this decision: the
    /// direct sign, else `+` iff every perturbation concludes `+`.
    pub fn verdict(&self) -> Option<bool> {
        if !self.decided {
            return None;
        }
        Some(self.direct.unwrap_or_else(|| self.via_perturbations.iter().all(|&(_, s)| s)))
    }
}

pub(crate) fn star_decision_from_rows(
    sys: &TraceSystem,
    base: &RowSet,
    perturbed: &[(usize, RowSet)],
    c: usize,
    truth: Option<bool>,
) -> StarDecision {
    let direct = if base.is_empty() { None } else { decided_sign(sys, base, c) };
    let via_perturbations: Vec<(usize, bool)> = perturbed
        .iter()
        .filter(|(_, r)| !r.is_empty())
        .filter_map(|(b, r)| decided_sign(sys, r, c).map(|s| (*b, s)))
        .collect();
    let decided = direct.is_some() || !via_perturbations.is_empty();
    let correct = match (decided, truth) {
        (true, Some(d)) => Some(direct.is_some() || via_perturbations.iter().all(|&(_, s)| s == d)),
        _ => None,
    };
    StarDecision { target: c, decided, direct, via_perturbations, correct }
}

/// Whether `B0` *-decides `c`: `p_{B0}` decides it, or some consistent
/// single perturbation `p_{B0,{b'}}` does.
pub fn star_decides(ctx: &OrderContext, b0: &[usize], c: usize) -> Result<StarDecision> {
    ctx.check(b0)?;
    ctx.sys.check_col(c)?;
    let base = ctx.rows_unchecked(b0);
    let mut seen = Vec::new();
    let perturbed: Vec<(usize, RowSet)> = b0
        .iter()
        .filter(|b| {
            let fresh = !seen.contains(*b);
            seen.push(**b);
            fresh
        })
        .map(|&b| (b, ctx.perturbed_rows(b0, b)))
        .collect();
    Ok(star_decision_from_rows(ctx.sys, &base, &perturbed, c, ctx.t.sign(c)))
}

/// Obvious-decide lemma instance: a subtype that decides `c` does so as δ.
pub fn obvious_decide_holds(ctx: &OrderContext, b0: &[usize], c: usize) -> Result<bool> {
    let q = crate::trace::restrict(ctx.t, b0)?;
    let truth = ctx.t.sign(c).ok_or_else(|| Error::domain("target outside the type's domain"))?;
    Ok(decides(ctx.sys, &q, c)?.is_none_or(|s| s == truth))
}

/// Instance of the making-correct-decisions lemma for `B0` in `family`
/// (compared as sets), perturbed element `b'` and target `c`.
///
/// Returns `None` when a hypothesis fails (minimality of `B0`, a consistent
/// deciding perturbation, `p_{B0}` undecided, or no `B1 ≤_p B0 − {b'}` with
/// `B1 ∪ {c}` in the family), else whether the conclusion holds.
pub fn making_correct_decisions_holds(
    ctx: &OrderContext,
    family: &[Vec<usize>],
    b0: &[usize],
    b_prime: usize,
    c: usize,
) -> Result<Option<bool>> {
    ctx.check(b0)?;
    ctx.check(&[c])?;
    if !b0.contains(&b_prime) {
        return Err(Error::domain("perturbed element not in B0"));
    }
    let rows: Vec<RowSet> = family.iter().map(|m| ctx.rows(m)).collect::<Result<_>>()?;
    let base = ctx.rows_unchecked(b0);
    if rows.iter().any(|r| strictly_below(r, &base)) || !family.iter().any(|m| same_set(m, b0)) {
        return Ok(None);
    }
    making_correct_decisions_on_rows(ctx, family, &rows, b0, b_prime, c)
}

pub(crate) fn same_set(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

/// As [`making_correct_decisions_holds`] with minimality of `B0` already
/// established and member row sets supplied.
pub(crate) fn making_correct_decisions_on_rows(
    ctx: &OrderContext,
    family: &[Vec<usize>],
    rows: &[RowSet],
    b0: &[usize],
    b_prime: usize,
    c: usize,
) -> Result<Option<bool>> {
    let base = ctx.rows_unchecked(b0);
    let pert = ctx.perturbed_rows(b0, b_prime);
    if pert.is_empty() {
        return Ok(None);
    }
    let Some(concl) = decided_sign(ctx.sys, &pert, c) else {
        return Ok(None);
    };
    if decided_sign(ctx.sys, &base, c).is_some() {
        return Ok(None);
    }
    let rest: Vec<usize> = b0.iter().copied().filter(|&b| b != b_prime).collect();
    let rest_rows = ctx.rows_unchecked(&rest);
    // B1 ∪ {c} = set(γ) with B1 ∈ {set(γ), set(γ) − {c}}; the weaker
    // requirement set(γ) ≤_p B0 − {b'} covers both choices.
    let witnessed = family
        .iter()
        .zip(rows)
        .any(|(g, r)| g.contains(&c) && r.is_subset(&rest_rows));
    if !witnessed {
        return Ok(None);
    }
    Ok(Some(concl == ctx.sign(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ty(sys: &TraceSystem, signs: &[bool]) -> TypeAssignment {
        let dom: Vec<usize> = (0..signs.len()).collect();
        TypeAssignment::from_signs(sys, &dom, signs).unwrap()
    }

    #[test]
    fn le_p_examples() {
        let sys = fixtures::chain4x3();
        let t = ty(&sys, &[true, true, true]);
        let ctx = OrderContext::new(&sys, &t).unwrap();
        assert!(le_p(&ctx, &[2], &[1]).unwrap());
        assert!(!le_p(&ctx, &[1], &[2]).unwrap());
        assert!(le_p(&ctx, &[0, 1], &[]).unwrap());
        assert!(le_p(&ctx, &[0], &[0]).unwrap());
        assert!(equiv_p(&ctx, &[0], &[0]).unwrap());
        assert!(lt_p(&ctx, &[2], &[1]).unwrap());
        assert!(!equiv_p(&ctx, &[0, 1], &[0]).unwrap());
        assert!(le_p(&ctx, &[5], &[]).is_err());
    }

    #[test]
    fn minimal_below_examples() {
        let sys = fixtures::chain4x3();
        let t = ty(&sys, &[true, true, true]);
        let ctx = OrderContext::new(&sys, &t).unwrap();
        let fam = vec![vec![0], vec![1], vec![2]];
        assert_eq!(minimal_below(&ctx, &fam, &[0]).unwrap(), vec![2]);
        assert_eq!(minimal_below(&ctx, &[vec![0]], &[0]).unwrap(), vec![0]);
        assert!(minimal_below(&ctx, &fam, &[0, 1]).is_err());
        let t = ty(&sys, &[true, false, false]);
        let ctx = OrderContext::new(&sys, &t).unwrap();
        assert_eq!(minimal_below(&ctx, &fam, &[2]).unwrap(), vec![1]);
    }

    #[test]
    fn decides_examples() {
        let sys = fixtures::chain4x3();
        let q = SignedPattern::from_pairs([(1, true)]).unwrap();
        assert_eq!(decides(&sys, &q, 0).unwrap(), Some(true));
        let q = SignedPattern::from_pairs([(0, true)]).unwrap();
        assert_eq!(decides(&sys, &q, 1).unwrap(), None);
        assert_eq!(decides(&sys, &q, 0).unwrap(), Some(true));
        let bad = SignedPattern::from_pairs([(0, false), (1, true)]).unwrap();
        assert!(matches!(decides(&sys, &bad, 2), Err(Error::Contract(_))));
    }

    #[test]
    fn star_decides_examples() {
        let sys = fixtures::chain4x3();
        let t = ty(&sys, &[true, true, true]);
        let ctx = OrderContext::new(&sys, &t).unwrap();
        let d = star_decides(&ctx, &[0], 1).unwrap();
        assert!(d.decided);
        assert_eq!(d.direct, None);
        assert_eq!(d.via_perturbations, vec![(0, false)]);
        assert_eq!(d.correct, Some(false));
        let d = star_decides(&ctx, &[2], 0).unwrap();
        assert_eq!((d.direct, d.correct), (Some(true), Some(true)));
        let d = star_decides(&ctx, &[1], 1).unwrap();
        assert_eq!((d.direct, d.correct), (Some(true), Some(true)));
    }

    #[test]
    fn decision_lemmas_on_chain() {
        let sys = fixtures::chain4x3();
        let fam = vec![vec![0], vec![1], vec![2]];
        for t in crate::trace::realized_types(&sys, &[0, 1, 2]).unwrap() {
            let ctx = OrderContext::new(&sys, &t).unwrap();
            for b0 in &fam {
                for c in 0..3 {
                    assert!(obvious_decide_holds(&ctx, b0, c).unwrap());
                    if let Some(ok) = making_correct_decisions_holds(&ctx, &fam, b0, b0[0], c).unwrap() {
                        assert!(ok);
                    }
                }
            }
        }
    }
}
