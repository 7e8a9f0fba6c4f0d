//! Definition schemes: black-box evaluators `ψ(y; z_0..z_{k−1})` checked
//! exhaustively against types over finite column sets, plus the closure
//! constructions (many-to-one, negation, conjunction, single-variable
//! lifting).
//!
//! A scheme evaluator is bound to a system once per search, then queried as
//! `(candidate column, parameter columns) -> sign`. Parameter equality is
//! column identity.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::compress::{
    compress_with, f, gamma_decision, pad_certificate, CompressOptions, Gamma, DEFAULT_NODE_BUDGET,
};
use crate::error::{Error, Result};
use crate::gen::DEFAULT_CELL_BUDGET;
use crate::order::decided_sign;
use crate::pattern::combinations;
use crate::trace::{realized_types, trace_of_row, TraceSystem, TypeAssignment};

/// `|B|^k` up to which [`scheme_defines`] scans every parameter tuple.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 16;

pub type BoundEval = Box<dyn Fn(usize, &[usize]) -> bool + Send + Sync>;
type Binder = Arc<dyn Fn(Arc<TraceSystem>) -> BoundEval + Send + Sync>;
type Finder = Arc<dyn Fn(&TraceSystem, &[usize], &TypeAssignment) -> Option<Vec<usize>> + Send + Sync>;

#[derive(Clone)]
pub struct DefinitionScheme {
    arity: usize,
    tag: String,
    binder: Binder,
    finder: Option<Finder>,
}

impl fmt::Debug for DefinitionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DefinitionScheme")
            .field("arity", &self.arity)
            .field("tag", &self.tag)
            .field("finder", &self.finder.is_some())
            .finish()
    }
}

impl DefinitionScheme {
    pub fn new(
        arity: usize,
        tag: impl Into<String>,
        eval: impl Fn(&TraceSystem, usize, &[usize]) -> bool + Send + Sync + 'static,
    ) -> Self {
        let eval = Arc::new(eval);
        let binder: Binder = Arc::new(move |sys: Arc<TraceSystem>| {
            let eval = eval.clone();
            Box::new(move |c: usize, p: &[usize]| eval(&sys, c, p)) as BoundEval
        });
        DefinitionScheme { arity, tag: tag.into(), binder, finder: None }
    }

    /// A scheme given by how it binds to a system.
    pub fn from_binder(
        arity: usize,
        tag: impl Into<String>,
        binder: impl Fn(Arc<TraceSystem>) -> BoundEval + Send + Sync + 'static,
    ) -> Self {
        DefinitionScheme { arity, tag: tag.into(), binder: Arc::new(binder), finder: None }
    }

    /// Parameter suggestions used when `|B|^k` is too large to scan.
    /// Suggestions are always verified.
    pub fn with_finder(
        mut self,
        finder: impl Fn(&TraceSystem, &[usize], &TypeAssignment) -> Option<Vec<usize>> + Send + Sync + 'static,
    ) -> Self {
        self.finder = Some(Arc::new(finder));
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn bind(&self, sys: Arc<TraceSystem>) -> BoundEval {
        (self.binder)(sys)
    }

    /// One-off evaluation; prefer [`DefinitionScheme::bind`] in loops.
    pub fn eval(&self, sys: &TraceSystem, c: usize, params: &[usize]) -> bool {
        self.bind(Arc::new(sys.clone()))(c, params)
    }
}

fn check_type(sys: &TraceSystem, b: &[usize], t: &TypeAssignment) -> Result<()> {
    if b.len() < 2 {
        return Err(Error::contract("definability is asked for |B| ≥ 2"));
    }
    sys.check_cols(b)?;
    let mut sorted = b.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != b.len() {
        return Err(Error::domain("B lists a column twice"));
    }
    if sorted != t.domain() {
        return Err(Error::contract("type domain differs from B"));
    }
    if t.realizers(sys).is_empty() {
        return Err(Error::contract("type not realized"));
    }
    Ok(())
}

fn search(
    ev: &BoundEval,
    scheme: &DefinitionScheme,
    sys: &TraceSystem,
    b: &[usize],
    t: &TypeAssignment,
) -> Option<Vec<usize>> {
    let truth: Vec<bool> = b.iter().map(|&c| t.sign(c).expect("in domain")).collect();
    let defines = |p: &[usize]| b.iter().zip(&truth).all(|(&c, &s)| ev(c, p) == s);
    let k = scheme.arity;
    let space = (b.len() as u128).checked_pow(k as u32);
    if space.is_some_and(|s| s <= EXHAUSTIVE_LIMIT) {
        let mut idx = vec![0usize; k];
        let mut p: Vec<usize> = vec![b[0]; k];
        loop {
            if defines(&p) {
                return Some(p);
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < b.len() {
                    p[i] = b[idx[i]];
                    break;
                }
                idx[i] = 0;
                p[i] = b[0];
            }
        }
    }
    let finder = scheme.finder.as_ref()?;
    finder(sys, b, t).filter(|p| p.len() == k && p.iter().all(|c| b.contains(c)) && defines(p))
}

/// Parameters from `B` under which the scheme defines `t` on all of `B`.
///
/// Scans `B^k` in lexicographic order (in the order `B` is given) when
/// `|B|^k ≤ EXHAUSTIVE_LIMIT`; larger searches rely on the scheme's finder.
pub fn scheme_defines(
    sys: &TraceSystem,
    scheme: &DefinitionScheme,
    b: &[usize],
    t: &TypeAssignment,
) -> Result<Option<Vec<usize>>> {
    check_type(sys, b, t)?;
    let ev = scheme.bind(Arc::new(sys.clone()));
    Ok(search(&ev, scheme, sys, b, t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub domain: Vec<usize>,
    pub signs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub max_b: usize,
    pub sets_checked: usize,
    pub types_checked: usize,
    pub counterexample: Option<Counterexample>,
}

/// Checks that the scheme defines every realized type over every `B` with
/// `2 ≤ |B| ≤ max_b` (clamped to the column count).
pub fn scheme_valid(sys: &TraceSystem, scheme: &DefinitionScheme, max_b: usize) -> Result<ValidityReport> {
    let max_b = max_b.min(sys.col_count());
    let mut jobs: Vec<(Vec<usize>, TypeAssignment)> = Vec::new();
    let mut sets_checked = 0;
    for size in 2..=max_b {
        for b in combinations(sys.col_count(), size) {
            sets_checked += 1;
            for t in realized_types(sys, &b)? {
                jobs.push((b.clone(), t));
            }
        }
    }
    let ev = scheme.bind(Arc::new(sys.clone()));
    let counterexample = crate::par::find_map_first(&jobs, |(b, t)| {
        search(&ev, scheme, sys, b, t).is_none().then(|| Counterexample { domain: b.clone(), signs: t.bit_string() })
    });
    Ok(ValidityReport {
        valid: counterexample.is_none(),
        max_b,
        sets_checked,
        types_checked: jobs.len(),
        counterexample,
    })
}

/// The many-to-one combination: parameters `(z_0..z_{N−1}, w, v_0..v_{L−1})`
/// and output `+` iff every scheme `ℓ` with `w = v_ℓ` outputs `+` on its
/// leading `z`'s.
pub fn combine_many_to_one(schemes: Vec<DefinitionScheme>) -> Result<DefinitionScheme> {
    if schemes.is_empty() {
        return Err(Error::contract("many-to-one needs at least one scheme"));
    }
    let n = schemes.iter().map(|s| s.arity).max().expect("nonempty");
    let l = schemes.len();
    let tag = format!("many-to-one[{}]", schemes.iter().map(|s| s.tag.as_str()).collect::<Vec<_>>().join(","));
    let schemes = Arc::new(schemes);
    let bind_from = schemes.clone();
    let out = DefinitionScheme::from_binder(n + 1 + l, tag, move |sys| {
        let evs: Vec<(usize, BoundEval)> = bind_from.iter().map(|s| (s.arity, s.bind(sys.clone()))).collect();
        Box::new(move |c: usize, p: &[usize]| {
            let w = p[n];
            evs.iter().enumerate().all(|(i, (k, ev))| p[n + 1 + i] != w || ev(c, &p[..*k]))
        })
    });
    Ok(out.with_finder(move |sys, b, t| {
        schemes.iter().enumerate().find_map(|(i, s)| {
            let mut p = scheme_defines(sys, s, b, t).ok().flatten()?;
            p.resize(n, b[0]);
            p.push(b[1]);
            p.extend((0..l).map(|j| if j == i { b[1] } else { b[0] }));
            Some(p)
        })
    }))
}

/// `¬ψ`, a scheme for the complemented system.
pub fn negate_scheme(scheme: &DefinitionScheme) -> DefinitionScheme {
    let inner = scheme.clone();
    let for_finder = scheme.clone();
    DefinitionScheme::from_binder(scheme.arity, format!("not[{}]", scheme.tag), move |sys| {
        let ev = inner.bind(Arc::new(sys.complement()));
        Box::new(move |c: usize, p: &[usize]| !ev(c, p))
    })
    .with_finder(move |sys, b, t| scheme_defines(&sys.complement(), &for_finder, b, &t.flipped()).ok().flatten())
}

/// The product system: column `y·|ψ cols| + z` is the pair `(y, z)` with
/// entry `φ(r; y) ∧ ψ(r; z)`.
pub fn product_system(sys_phi: &TraceSystem, sys_psi: &TraceSystem) -> Result<TraceSystem> {
    if sys_phi.row_count() != sys_psi.row_count() {
        return Err(Error::domain("the two systems have different row universes"));
    }
    let np = sys_psi.col_count();
    let prod = TraceSystem::from_fn(sys_phi.row_count(), sys_phi.col_count() * np, |r, c| {
        sys_phi.get(r, c / np) && sys_psi.get(r, c % np)
    })?;
    let labels: Vec<String> = (0..prod.col_count())
        .map(|c| format!("{}&{}", sys_phi.col_name(c / np), sys_psi.col_name(c % np)))
        .collect();
    prod.with_col_labels(labels)
}

/// Distinct values of `key` over `b`, each with the first column of `b`
/// carrying it.
fn projection(b: &[usize], key: impl Fn(usize) -> usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &c in b {
        if !out.iter().any(|&(v, _)| v == key(c)) {
            out.push((key(c), c));
        }
    }
    out
}

/// Parameters for `scheme` defining the component type of the first
/// realizer of `t`, lifted back to product columns.
fn component_params(
    prod: &TraceSystem,
    comp: &TraceSystem,
    scheme: &DefinitionScheme,
    b: &[usize],
    t: &TypeAssignment,
    key: impl Fn(usize) -> usize,
) -> Option<Vec<usize>> {
    let row = t.realizers(prod).first()?;
    let proj = projection(b, key);
    let cols: Vec<usize> = proj.iter().map(|&(v, _)| v).collect();
    let ct = trace_of_row(comp, row, &cols).ok()?;
    let p = scheme_defines(comp, scheme, &cols, &ct).ok().flatten()?;
    Some(p.iter().map(|v| proj.iter().find(|&&(u, _)| u == *v).expect("parameter in projection").1).collect())
}

/// Scheme for `φ ∧ ψ` types over pair columns of [`product_system`].
///
/// The conjunction of the two component definitions needs both projections
/// of `B` to have two or more elements; when one projection is a single
/// column the type is the other component's type or constantly false, so
/// those cases join as further alternatives under many-to-one.
pub fn conjoin_schemes(
    sys_phi: &TraceSystem,
    scheme_phi: &DefinitionScheme,
    sys_psi: &TraceSystem,
    scheme_psi: &DefinitionScheme,
) -> Result<(TraceSystem, DefinitionScheme)> {
    let prod = product_system(sys_phi, sys_psi)?;
    let np = sys_psi.col_count();
    let (sp, sq) = (Arc::new(sys_phi.clone()), Arc::new(sys_psi.clone()));
    let (kp, kq) = (scheme_phi.arity, scheme_psi.arity);

    let both = {
        let (sp, sq, a, b) = (sp.clone(), sq.clone(), scheme_phi.clone(), scheme_psi.clone());
        DefinitionScheme::from_binder(kp + kq, "and", move |_| {
            let (ea, eb) = (a.bind(sp.clone()), b.bind(sq.clone()));
            Box::new(move |c: usize, p: &[usize]| {
                let pa: Vec<usize> = p[..kp].iter().map(|&x| x / np).collect();
                let pb: Vec<usize> = p[kp..].iter().map(|&x| x % np).collect();
                ea(c / np, &pa) && eb(c % np, &pb)
            })
        })
    }
    .with_finder({
        let (sp, sq, a, b) = (sp.clone(), sq.clone(), scheme_phi.clone(), scheme_psi.clone());
        move |prod, cols, t| {
            let mut p = component_params(prod, &sp, &a, cols, t, |c| c / np)?;
            p.extend(component_params(prod, &sq, &b, cols, t, |c| c % np)?);
            Some(p)
        }
    });
    let psi_only = {
        let (sq, b) = (sq.clone(), scheme_psi.clone());
        DefinitionScheme::from_binder(kq, "second", move |_| {
            let eb = b.bind(sq.clone());
            Box::new(move |c: usize, p: &[usize]| {
                let pb: Vec<usize> = p.iter().map(|&x| x % np).collect();
                eb(c % np, &pb)
            })
        })
    }
    .with_finder({
        let (sq, b) = (sq.clone(), scheme_psi.clone());
        move |prod, cols, t| component_params(prod, &sq, &b, cols, t, |c| c % np)
    });
    let phi_only = {
        let (sp, a) = (sp.clone(), scheme_phi.clone());
        DefinitionScheme::from_binder(kp, "first", move |_| {
            let ea = a.bind(sp.clone());
            Box::new(move |c: usize, p: &[usize]| {
                let pa: Vec<usize> = p.iter().map(|&x| x / np).collect();
                ea(c / np, &pa)
            })
        })
    }
    .with_finder({
        let (sp, a) = (sp.clone(), scheme_phi.clone());
        move |prod, cols, t| component_params(prod, &sp, &a, cols, t, |c| c / np)
    });
    let combined = combine_many_to_one(vec![both, psi_only, phi_only, constant_scheme(false)])?;
    let tag = format!("and[{},{}]", scheme_phi.tag, scheme_psi.tag);
    Ok((prod, DefinitionScheme { tag, ..combined }))
}

/// Always `sign`; arity 0.
pub fn constant_scheme(sign: bool) -> DefinitionScheme {
    DefinitionScheme::new(0, if sign { "true" } else { "false" }, move |_, _, _| sign)
        .with_finder(|_, _, _| Some(Vec::new()))
}

/// `+` iff the candidate's positive rows contain those of the parameter.
pub fn superset_of_param() -> DefinitionScheme {
    DefinitionScheme::new(1, "superset", |sys, c, p| {
        sys.column_rows(p[0], true).is_subset(sys.column_rows(c, true))
    })
}

/// `(c ∈ {z_0..z_{k−1}})^sign`.
pub fn membership_scheme(slots: usize, sign: bool) -> DefinitionScheme {
    let tag = format!("member{}{}", if sign { '+' } else { '-' }, slots);
    DefinitionScheme::new(slots, tag, move |_, c, p| p.contains(&c) == sign)
}

/// Certificate evaluation at ladder height `h` from its uniform form.
///
/// Parameters: the `f(h)×h` column grid row by row, then one pair `(u, v)`
/// per grid cell with stored sign `u = v`. Padded duplicates collapse before
/// evaluation; a row listing one column with both signs never decides.
pub fn compression_piece(h: usize) -> DefinitionScheme {
    let m = if h == 0 { 0 } else { f(h) };
    let cells = m * h;
    DefinitionScheme::from_binder(3 * cells, format!("compress{h}"), move |sys| {
        Box::new(move |c: usize, p: &[usize]| {
            if h == 0 {
                return decided_sign(&sys, &sys.all_rows(), c).unwrap_or(false);
            }
            let (grid, pairs) = p.split_at(cells);
            let mut gammas: Vec<Gamma> = Vec::with_capacity(m);
            for i in 0..m {
                let mut g = Gamma { cols: Vec::with_capacity(h), signs: Vec::with_capacity(h) };
                let mut consistent = true;
                for j in 0..h {
                    let cell = i * h + j;
                    let (col, s) = (grid[cell], pairs[2 * cell] == pairs[2 * cell + 1]);
                    match g.cols.iter().position(|&x| x == col) {
                        Some(q) => consistent &= g.signs[q] == s,
                        None => {
                            g.cols.push(col);
                            g.signs.push(s);
                        }
                    }
                }
                if consistent && !gammas.contains(&g) {
                    gammas.push(g);
                }
            }
            gammas.iter().find_map(|g| gamma_decision(&sys, g, c).verdict()).unwrap_or(false)
        })
    })
    .with_finder(move |sys, b, t| {
        let opts = CompressOptions { budget: Some(DEFAULT_NODE_BUDGET), record_k: false };
        let cert = compress_with(sys, b, t, &opts).ok()?;
        if cert.n != h {
            return None;
        }
        if h == 0 {
            return Some(Vec::new());
        }
        let u = pad_certificate(&cert).ok()?;
        let mut p: Vec<usize> = u.b.concat();
        for s in u.s.concat() {
            p.push(b[0]);
            p.push(if s { b[0] } else { b[1] });
        }
        Some(p)
    })
}

/// Many-to-one over the certificate evaluators of heights `0..=max_h`.
pub fn compression_scheme(max_h: usize) -> Result<DefinitionScheme> {
    combine_many_to_one((0..=max_h).map(compression_piece).collect())
}

/// Largest `n` with `n(n+1)/2 < rows`, capped by the column count. A ladder
/// of height `n` traces more than `n(n+1)/2` types, so no taller ladder
/// fits in the system.
pub fn height_cap(sys: &TraceSystem) -> usize {
    let mut n = 0;
    while n < sys.col_count() && (n + 1) * (n + 2) / 2 < sys.row_count() {
        n += 1;
    }
    n
}

pub fn compression_scheme_for(sys: &TraceSystem) -> Result<DefinitionScheme> {
    compression_scheme(height_cap(sys))
}

/// A system whose rows are `n`-tuples over `A = {0..a−1}`, indexed in mixed
/// radix with the first coordinate most significant.
#[derive(Clone)]
pub struct MultiTraceSystem {
    base: usize,
    free: usize,
    cols: usize,
    entry: Arc<dyn Fn(&[usize], usize) -> bool + Send + Sync>,
    sys: TraceSystem,
}

impl fmt::Debug for MultiTraceSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiTraceSystem")
            .field("base", &self.base)
            .field("free", &self.free)
            .field("cols", &self.cols)
            .finish()
    }
}

impl MultiTraceSystem {
    pub fn new(
        base: usize,
        free: usize,
        cols: usize,
        entry: impl Fn(&[usize], usize) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::from_arc(base, free, cols, Arc::new(entry))
    }

    fn from_arc(
        base: usize,
        free: usize,
        cols: usize,
        entry: Arc<dyn Fn(&[usize], usize) -> bool + Send + Sync>,
    ) -> Result<Self> {
        if base == 0 || free == 0 || cols == 0 {
            return Err(Error::domain("base set, free arity and columns must be nonempty"));
        }
        let rows = base
            .checked_pow(free as u32)
            .filter(|r| r.checked_mul(cols).is_some_and(|cells| cells <= DEFAULT_CELL_BUDGET))
            .ok_or(Error::BudgetExceeded { budget: DEFAULT_CELL_BUDGET as u64 })?;
        let mut tuple = vec![0; free];
        let grid: Vec<Vec<bool>> = (0..rows)
            .map(|r| {
                Self::fill_tuple(base, r, &mut tuple);
                (0..cols).map(|c| entry(&tuple, c)).collect()
            })
            .collect();
        let sys = TraceSystem::from_rows(&grid)?;
        Ok(MultiTraceSystem { base, free, cols, entry, sys })
    }

    fn fill_tuple(base: usize, mut row: usize, out: &mut [usize]) {
        for x in out.iter_mut().rev() {
            *x = row % base;
            row /= base;
        }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn free(&self) -> usize {
        self.free
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn system(&self) -> &TraceSystem {
        &self.sys
    }

    pub fn tuple_of(&self, row: usize) -> Vec<usize> {
        let mut t = vec![0; self.free];
        Self::fill_tuple(self.base, row, &mut t);
        t
    }

    pub fn row_of(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |r, &x| r * self.base + x)
    }

    /// Column of the repartitioned system for the pair `(x_n, c)`.
    pub fn hat_col(&self, xn: usize, c: usize) -> usize {
        xn * self.cols + c
    }

    /// The last free coordinate joins the parameters: rows are
    /// `(n−1)`-tuples, columns are `A × columns`.
    pub fn hat(&self) -> Result<MultiTraceSystem> {
        if self.free < 2 {
            return Err(Error::contract("repartition needs at least two free coordinates"));
        }
        let (entry, cols) = (self.entry.clone(), self.cols);
        MultiTraceSystem::from_arc(
            self.base,
            self.free - 1,
            self.base * cols,
            Arc::new(move |x: &[usize], j: usize| {
                let mut full = x.to_vec();
                full.push(j / cols);
                entry(&full, j % cols)
            }),
        )
    }
}

/// The one-variable system of `ψ̂'`: rows `x_n ∈ A`, columns `(k+1)`-tuples
/// `(y, z_0..z_{k−1})` of original columns in mixed radix, entry
/// `ψ(x_n⌢y; x_n⌢z_0, ..)` for the repartitioned scheme `ψ` of arity `k`.
#[derive(Clone, Debug)]
pub struct GammaSystem {
    pub k: usize,
    pub cols: usize,
    pub sys: TraceSystem,
}

impl GammaSystem {
    pub fn tuple_col(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |r, &x| r * self.cols + x)
    }

    pub fn col_tuple(&self, mut col: usize) -> Vec<usize> {
        let mut t = vec![0; self.k + 1];
        for x in t.iter_mut().rev() {
            *x = col % self.cols;
            col /= self.cols;
        }
        t
    }
}

pub fn gamma_system(msys: &MultiTraceSystem, scheme_hat: &DefinitionScheme) -> Result<GammaSystem> {
    let hat = msys.hat()?;
    let k = scheme_hat.arity;
    let cols = msys.cols;
    let ncols = cols
        .checked_pow(k as u32 + 1)
        .filter(|n| n.checked_mul(msys.base).is_some_and(|cells| cells <= DEFAULT_CELL_BUDGET))
        .ok_or(Error::BudgetExceeded { budget: DEFAULT_CELL_BUDGET as u64 })?;
    let ev = scheme_hat.bind(Arc::new(hat.sys.clone()));
    let shell = GammaSystem { k, cols, sys: msys.sys.clone() };
    let columns: Vec<Vec<bool>> = crate::par::map_range(ncols, |j| {
        let t = shell.col_tuple(j);
        (0..msys.base)
            .map(|xn| {
                let params: Vec<usize> = t[1..].iter().map(|&z| msys.hat_col(xn, z)).collect();
                ev(msys.hat_col(xn, t[0]), &params)
            })
            .collect()
    });
    let sys = TraceSystem::from_fn(msys.base, ncols, |r, c| columns[c][r])?;
    Ok(GammaSystem { sys, ..shell })
}

/// Parameters found along the lifting argument for one realizing row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftWitness {
    pub row: usize,
    /// Parameters of `ψ` on the repartitioned system, all of shape `a_n⌢d`.
    pub hat_params: Vec<usize>,
    pub d: Vec<usize>,
    /// Parameters of `γ` as gamma-system columns.
    pub e: Vec<usize>,
    pub params: Vec<usize>,
}

struct LiftParts {
    msys: MultiTraceSystem,
    hat: MultiTraceSystem,
    scheme_hat: DefinitionScheme,
    gamma: GammaSystem,
    scheme_gamma: DefinitionScheme,
}

impl LiftParts {
    fn witness(&self, b: &[usize], row: usize) -> Result<Option<LiftWitness>> {
        let tuple = self.msys.tuple_of(row);
        let an = tuple[self.msys.free - 1];
        let hat_row = self.hat.row_of(&tuple[..self.msys.free - 1]);
        let hat_b: Vec<usize> = b.iter().map(|&c| self.msys.hat_col(an, c)).collect();
        let p_hat = trace_of_row(&self.hat.sys, hat_row, &hat_b)?;
        let Some(hat_params) = scheme_defines(&self.hat.sys, &self.scheme_hat, &hat_b, &p_hat)? else {
            return Ok(None);
        };
        let d: Vec<usize> = hat_params.iter().map(|&x| x % self.msys.cols).collect();
        let k = self.gamma.k;
        let mut bk: Vec<usize> = Vec::with_capacity(b.len().pow(k as u32 + 1));
        let mut idx = vec![0usize; k + 1];
        loop {
            let t: Vec<usize> = idx.iter().map(|&i| b[i]).collect();
            bk.push(self.gamma.tuple_col(&t));
            let Some(pos) = (0..=k).rev().find(|&i| idx[i] + 1 < b.len()) else { break };
            idx[pos] += 1;
            idx[pos + 1..].iter_mut().for_each(|x| *x = 0);
        }
        let q = trace_of_row(&self.gamma.sys, an, &bk)?;
        let Some(e) = scheme_defines(&self.gamma.sys, &self.scheme_gamma, &bk, &q)? else {
            return Ok(None);
        };
        let mut params = d.clone();
        for &g in &e {
            params.extend(self.gamma.col_tuple(g));
        }
        Ok(Some(LiftWitness { row, hat_params, d, e, params }))
    }
}

/// `γ̂(y; z_0..z_{k−1}, 𝐰)`: the gamma scheme on the tuple `y⌢z_0⌢..`
/// with `𝐰` read as `(k+1)`-tuples. Arity `k + (k+1)·m`.
pub fn lift_single_variable(
    msys: &MultiTraceSystem,
    scheme_hat: &DefinitionScheme,
    gamma: &GammaSystem,
    scheme_gamma: &DefinitionScheme,
) -> Result<DefinitionScheme> {
    if msys.free == 1 {
        return Ok(scheme_gamma.clone());
    }
    if gamma.k != scheme_hat.arity {
        return Err(Error::contract(format!(
            "gamma system built for k = {} but the repartitioned scheme has arity {}",
            gamma.k, scheme_hat.arity
        )));
    }
    if gamma.cols != msys.cols || gamma.sys.row_count() != msys.base {
        return Err(Error::contract("gamma system does not match the multi-variable system"));
    }
    let parts = Arc::new(LiftParts {
        msys: msys.clone(),
        hat: msys.hat()?,
        scheme_hat: scheme_hat.clone(),
        gamma: gamma.clone(),
        scheme_gamma: scheme_gamma.clone(),
    });
    let (k, m) = (gamma.k, scheme_gamma.arity);
    let bind_parts = parts.clone();
    let tag = format!("lift[{},{}]", scheme_hat.tag, scheme_gamma.tag);
    Ok(DefinitionScheme::from_binder(k + (k + 1) * m, tag, move |_| {
        let parts = bind_parts.clone();
        let ev = parts.scheme_gamma.bind(Arc::new(parts.gamma.sys.clone()));
        Box::new(move |c: usize, p: &[usize]| {
            let mut cand = vec![c];
            cand.extend_from_slice(&p[..k]);
            let params: Vec<usize> = p[k..].chunks(k + 1).map(|t| parts.gamma.tuple_col(t)).collect();
            ev(parts.gamma.tuple_col(&cand), &params)
        })
    })
    .with_finder(move |sys, b, t| {
        let row = t.realizers(sys).first()?;
        parts.witness(b, row).ok().flatten().map(|w| w.params)
    }))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub checked: usize,
    /// Failures per link of the equivalence chain.
    pub failures: [usize; 5],
    /// Configurations where a parameter search along the chain failed.
    pub missing: usize,
}

impl ChainReport {
    pub fn ok(&self) -> bool {
        self.failures.iter().all(|&f| f == 0) && self.missing == 0
    }
}

/// Checks the five links `φ ⟺ φ̂ ⟺ ψ ⟺ ψ' ⟺ γ ⟺ γ̂` for every row, every
/// `B` with `2 ≤ |B| ≤ max_b` and every `b ∈ B`.
pub fn lift_chain_check(
    msys: &MultiTraceSystem,
    scheme_hat: &DefinitionScheme,
    gamma: &GammaSystem,
    scheme_gamma: &DefinitionScheme,
    max_b: usize,
) -> Result<ChainReport> {
    let lifted = lift_single_variable(msys, scheme_hat, gamma, scheme_gamma)?;
    let parts = LiftParts {
        msys: msys.clone(),
        hat: msys.hat()?,
        scheme_hat: scheme_hat.clone(),
        gamma: gamma.clone(),
        scheme_gamma: scheme_gamma.clone(),
    };
    let ev_hat = scheme_hat.bind(Arc::new(parts.hat.sys.clone()));
    let ev_gamma = scheme_gamma.bind(Arc::new(gamma.sys.clone()));
    let ev_lift = lifted.bind(Arc::new(msys.sys.clone()));
    let mut report = ChainReport::default();
    for size in 2..=max_b.min(msys.cols) {
        for b in combinations(msys.cols, size) {
            for row in 0..msys.sys.row_count() {
                let Some(w) = parts.witness(&b, row)? else {
                    report.missing += 1;
                    continue;
                };
                let tuple = msys.tuple_of(row);
                let an = tuple[msys.free - 1];
                let hat_row = parts.hat.row_of(&tuple[..msys.free - 1]);
                let d_hat: Vec<usize> = w.d.iter().map(|&z| msys.hat_col(an, z)).collect();
                for &c in &b {
                    let mut cand = vec![c];
                    cand.extend_from_slice(&w.d);
                    let v = [
                        msys.sys.get(row, c),
                        parts.hat.sys.get(hat_row, msys.hat_col(an, c)),
                        ev_hat(msys.hat_col(an, c), &w.hat_params),
                        ev_hat(msys.hat_col(an, c), &d_hat),
                        ev_gamma(gamma.tuple_col(&cand), &w.e),
                        ev_lift(c, &w.params),
                    ];
                    report.checked += 1;
                    for (i, pair) in v.windows(2).enumerate() {
                        if pair[0] != pair[1] {
                            report.failures[i] += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Two free coordinates over `A = {0,1,2}`, thresholds `θ ∈ {1,2}`, entry
/// `x_1 ≥ θ ∧ x_2 ≥ θ`.
pub fn lift_toy() -> Result<MultiTraceSystem> {
    MultiTraceSystem::new(3, 2, 2, |x, c| x[0] > c && x[1] > c)
}

/// The full lifting pipeline with certificate-backed schemes on both
/// intermediate systems.
#[derive(Clone, Debug)]
pub struct LiftSetup {
    pub msys: MultiTraceSystem,
    pub scheme_hat: DefinitionScheme,
    pub gamma: GammaSystem,
    pub scheme_gamma: DefinitionScheme,
    pub lifted: DefinitionScheme,
}

pub fn lift_setup(msys: MultiTraceSystem) -> Result<LiftSetup> {
    let hat = msys.hat()?;
    let scheme_hat = compression_scheme_for(hat.system())?;
    let gamma = gamma_system(&msys, &scheme_hat)?;
    let scheme_gamma = compression_scheme_for(&gamma.sys)?;
    let lifted = lift_single_variable(&msys, &scheme_hat, &gamma, &scheme_gamma)?;
    Ok(LiftSetup { msys, scheme_hat, gamma, scheme_gamma, lifted })
}

pub const SUITES: [&str; 6] = ["compression", "threshold", "membership", "negation", "conjunction", "lift"];

/// A named scheme together with the system it is meant for. `lift` ignores
/// `sys` and uses [`lift_toy`].
pub fn suite(name: &str, sys: &TraceSystem) -> Result<(TraceSystem, DefinitionScheme)> {
    match name {
        "compression" => Ok((sys.clone(), compression_scheme_for(sys)?)),
        "threshold" => Ok((sys.clone(), combine_many_to_one(vec![superset_of_param(), constant_scheme(false)])?)),
        "membership" => {
            Ok((sys.clone(), combine_many_to_one(vec![membership_scheme(1, true), constant_scheme(false)])?))
        }
        "negation" => {
            let comp = sys.complement();
            Ok((comp, negate_scheme(&compression_scheme_for(sys)?)))
        }
        "conjunction" => {
            let s = compression_scheme_for(sys)?;
            conjoin_schemes(sys, &s, sys, &s)
        }
        "lift" => {
            let setup = lift_setup(lift_toy()?)?;
            Ok((setup.msys.system().clone(), setup.lifted))
        }
        other => Err(Error::domain(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
}
