//! Trace systems: immutable boolean matrices whose rows are realizations and
//! whose columns are parameter instances of one partitioned formula.
//!
//! Signed patterns are finite sets of literals `(column, sign)`; a pattern is
//! consistent when some row satisfies every literal. Entailment is inclusion
//! of satisfying-row sets, so an inconsistent pattern entails everything.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::bits::RowSet;
use crate::error::{Error, Result};

pub const HEADER: &str = "trace-system v1";

#[derive(Clone, Debug)]
pub struct TraceSystem {
    rows: usize,
    cols: usize,
    pos: Vec<RowSet>,
    neg: Vec<RowSet>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
    pub(crate) tp_bound: OnceLock<usize>,
}

impl PartialEq for TraceSystem {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.pos == other.pos
            && self.row_labels == other.row_labels
            && self.col_labels == other.col_labels
    }
}

impl Eq for TraceSystem {}

fn check_unique(labels: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::domain(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

impl TraceSystem {
    /// Builds a system from an entry function `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain("trace systems need at least one row and one column"));
        }
        let mut pos = vec![RowSet::empty(rows); cols];
        for r in 0..rows {
            for (c, set) in pos.iter_mut().enumerate() {
                if f(r, c) {
                    set.insert(r);
                }
            }
        }
        let neg = pos.iter().map(RowSet::complement).collect();
        Ok(TraceSystem {
            rows,
            cols,
            pos,
            neg,
            row_labels: None,
            col_labels: None,
            tp_bound: OnceLock::new(),
        })
    }

    /// Builds a system from rows written as `0`/`1` strings.
    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let grid: Vec<Vec<bool>> = rows
            .iter()
            .map(|s| {
                s.as_ref()
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::domain(format!("invalid character {other:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Self::from_rows(&grid)
    }

    pub fn from_rows(grid: &[Vec<bool>]) -> Result<Self> {
        let cols = grid.first().map_or(0, Vec::len);
        if let Some(bad) = grid.iter().position(|r| r.len() != cols) {
            return Err(Error::domain(format!("ragged row {bad}")));
        }
        Self::from_fn(grid.len(), cols, |r, c| grid[r][c])
    }

    pub fn with_row_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.rows {
            return Err(Error::domain("row label count differs from row count"));
        }
        check_unique(&labels, "row")?;
        self.row_labels = Some(labels);
        Ok(self)
    }

    pub fn with_col_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.cols {
            return Err(Error::domain("column label count differs from column count"));
        }
        check_unique(&labels, "column")?;
        self.col_labels = Some(labels);
        Ok(self)
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.pos[col].contains(row)
    }

    /// Rows where column `col` has value `sign`.
    pub fn column_rows(&self, col: usize, sign: bool) -> &RowSet {
        if sign {
            &self.pos[col]
        } else {
            &self.neg[col]
        }
    }

    pub fn all_rows(&self) -> RowSet {
        RowSet::full(self.rows)
    }

    pub fn check_col(&self, col: usize) -> Result<()> {
        if col < self.cols {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "column {col} out of range (system has {} columns)",
                self.cols
            )))
        }
    }

    pub fn check_row(&self, row: usize) -> Result<()> {
        if row < self.rows {
            Ok(())
        } else {
            Err(Error::domain(format!("row {row} out of range (system has {} rows)", self.rows)))
        }
    }

    pub fn check_cols(&self, cols: &[usize]) -> Result<()> {
        cols.iter().try_for_each(|&c| self.check_col(c))
    }

    /// Display name of a column: its label, or `#j` when unlabeled.
    pub fn col_name(&self, col: usize) -> String {
        match &self.col_labels {
            Some(l) => l[col].clone(),
            None => format!("#{col}"),
        }
    }

    /// Resolves a column by label, `#j`, or bare index.
    pub fn resolve_col(&self, name: &str) -> Result<usize> {
        if let Some(labels) = &self.col_labels {
            if let Some(i) = labels.iter().position(|l| l == name) {
                return Ok(i);
            }
        }
        let idx = name.strip_prefix('#').unwrap_or(name);
        match idx.parse::<usize>() {
            Ok(i) if i < self.cols => Ok(i),
            _ => Err(Error::domain(format!("unknown column {name:?}"))),
        }
    }

    /// The system with every entry negated (the trace system of `¬φ`).
    pub fn complement(&self) -> TraceSystem {
        TraceSystem {
            rows: self.rows,
            cols: self.cols,
            pos: self.neg.clone(),
            neg: self.pos.clone(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            tp_bound: OnceLock::new(),
        }
    }

    /// Row `r` restricted to `cols`, as a bit string.
    pub fn row_string(&self, row: usize, cols: &[usize]) -> String {
        cols.iter()
            .map(|&c| if self.get(row, c) { '1' } else { '0' })
            .collect()
    }

    /// Serializes to the `trace-system v1` text format (LF newlines).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        let all: Vec<usize> = (0..self.cols).collect();
        for r in 0..self.rows {
            out.push_str(&self.row_string(r, &all));
            out.push('\n');
        }
        if let Some(labels) = &self.row_labels {
            for (i, l) in labels.iter().enumerate() {
                let _ = writeln!(out, "rowlabel {i} {l}");
            }
        }
        if let Some(labels) = &self.col_labels {
            for (j, l) in labels.iter().enumerate() {
                let _ = writeln!(out, "collabel {j} {l}");
            }
        }
        out
    }

    /// Hex SHA-256 of the serialized form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// Parses the `trace-system v1` format.
pub fn load_system(text: &str) -> Result<TraceSystem> {
    let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    if header.trim_end() != HEADER {
        return Err(perr(hline, "malformed header"));
    }
    let (dline, dims) = lines.next().ok_or_else(|| perr(hline + 1, "missing dimensions"))?;
    let parsed: Vec<usize> = dims
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| perr(dline, "malformed dimensions"))?;
    let (rows, cols) = match parsed[..] {
        [r, c] if r > 0 && c > 0 => (r, c),
        _ => return Err(perr(dline, "malformed dimensions")),
    };

    let mut grid = Vec::with_capacity(rows);
    let mut last_line = dline;
    for _ in 0..rows {
        let (ln, row) = lines
            .next()
            .ok_or_else(|| perr(last_line + 1, "missing row"))?;
        last_line = ln;
        if row.chars().count() != cols {
            return Err(perr(ln, "ragged row"));
        }
        let bits = row
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(perr(ln, "invalid character")),
            })
            .collect::<Result<Vec<bool>>>()?;
        grid.push(bits);
    }

    let mut row_labels: BTreeMap<usize, String> = BTreeMap::new();
    let mut col_labels: BTreeMap<usize, String> = BTreeMap::new();
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, ' ');
        let kind = parts.next().unwrap_or_default();
        let idx: Option<usize> = parts.next().and_then(|s| s.parse().ok());
        let name = parts.next().map(str::trim).unwrap_or_default();
        let (map, limit) = match kind {
            "rowlabel" => (&mut row_labels, rows),
            "collabel" => (&mut col_labels, cols),
            _ => return Err(perr(ln, "unexpected content")),
        };
        let idx = idx.filter(|&i| i < limit).ok_or_else(|| perr(ln, "bad label index"))?;
        if name.is_empty() {
            return Err(perr(ln, "empty label"));
        }
        if map.insert(idx, name.to_string()).is_some() {
            return Err(perr(ln, "label index repeated"));
        }
    }

    let mut sys = TraceSystem::from_rows(&grid)?;
    let end = last_line;
    if !row_labels.is_empty() {
        if row_labels.len() != rows {
            return Err(perr(end, "row labels must cover every row"));
        }
        sys = sys
            .with_row_labels(row_labels.into_values())
            .map_err(|e| perr(end, &e.to_string()))?;
    }
    if !col_labels.is_empty() {
        if col_labels.len() != cols {
            return Err(perr(end, "column labels must cover every column"));
        }
        sys = sys
            .with_col_labels(col_labels.into_values())
            .map_err(|e| perr(end, &e.to_string()))?;
    }
    Ok(sys)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedLiteral {
    pub col: usize,
    pub sign: bool,
}

impl SignedLiteral {
    pub fn new(col: usize, sign: bool) -> Self {
        SignedLiteral { col, sign }
    }

    pub fn negated(self) -> Self {
        SignedLiteral { col: self.col, sign: !self.sign }
    }
}

/// Rows satisfying every literal. Literals may repeat or contradict each
/// other; a contradiction simply yields the empty set. Columns must be valid.
pub fn literal_rows<I>(sys: &TraceSystem, lits: I) -> RowSet
where
    I: IntoIterator<Item = (usize, bool)>,
{
    let mut rows = sys.all_rows();
    for (c, s) in lits {
        rows.intersect_with(sys.column_rows(c, s));
    }
    rows
}

/// A finite set of literals with at most one literal per column.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignedPattern {
    lits: Vec<SignedLiteral>,
}

impl SignedPattern {
    pub fn empty() -> Self {
        SignedPattern::default()
    }

    /// Collects literals; identical duplicates merge, contradictory ones are
    /// rejected.
    pub fn new(lits: impl IntoIterator<Item = SignedLiteral>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for l in lits {
            if let Some(prev) = map.insert(l.col, l.sign) {
                if prev != l.sign {
                    return Err(Error::contract(format!(
                        "contradictory literals on column {}",
                        l.col
                    )));
                }
            }
        }
        Ok(SignedPattern {
            lits: map.into_iter().map(|(col, sign)| SignedLiteral { col, sign }).collect(),
        })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, bool)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(c, s)| SignedLiteral::new(c, s)))
    }

    pub fn literals(&self) -> &[SignedLiteral] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn sign_of(&self, col: usize) -> Option<bool> {
        self.lits
            .binary_search_by_key(&col, |l| l.col)
            .ok()
            .map(|i| self.lits[i].sign)
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.lits.iter().map(|l| (l.col, l.sign))
    }
}

fn check_pattern(sys: &TraceSystem, q: &SignedPattern) -> Result<()> {
    q.lits.iter().try_for_each(|l| sys.check_col(l.col))
}

pub fn satisfying_rows(sys: &TraceSystem, q: &SignedPattern) -> Result<RowSet> {
    check_pattern(sys, q)?;
    Ok(literal_rows(sys, q.pairs()))
}

pub fn is_consistent(sys: &TraceSystem, q: &SignedPattern) -> Result<bool> {
    Ok(!satisfying_rows(sys, q)?.is_empty())
}

/// `q ⊢ lit`; vacuously true for inconsistent `q`.
pub fn entails(sys: &TraceSystem, q: &SignedPattern, lit: SignedLiteral) -> Result<bool> {
    sys.check_col(lit.col)?;
    let rows = satisfying_rows(sys, q)?;
    Ok(rows.is_subset(sys.column_rows(lit.col, lit.sign)))
}

/// The set of traces `{row|B0}`; its size is `|S_φ(B0)|`.
pub fn type_space(sys: &TraceSystem, b0: &[usize]) -> Result<BTreeSet<Vec<bool>>> {
    sys.check_cols(b0)?;
    Ok((0..sys.row_count())
        .map(|r| b0.iter().map(|&c| sys.get(r, c)).collect())
        .collect())
}

/// Number of distinct traces on `b0`, without building the vectors.
pub(crate) fn type_count(sys: &TraceSystem, b0: &[usize]) -> usize {
    if b0.len() <= 64 {
        let mut seen: HashSet<u64> = HashSet::new();
        for r in 0..sys.row_count() {
            let mut key = 0u64;
            for (i, &c) in b0.iter().enumerate() {
                if sys.get(r, c) {
                    key |= 1 << i;
                }
            }
            seen.insert(key);
        }
        seen.len()
    } else {
        type_space(sys, b0).map(|s| s.len()).unwrap_or(0)
    }
}

/// A realized φ-type over a finite column set, given by its sign function δ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeAssignment {
    delta: BTreeMap<usize, bool>,
}

impl TypeAssignment {
    /// Fails with a contract error unless some row realizes every sign.
    pub fn new(sys: &TraceSystem, pairs: impl IntoIterator<Item = (usize, bool)>) -> Result<Self> {
        let mut delta = BTreeMap::new();
        for (c, s) in pairs {
            sys.check_col(c)?;
            if let Some(prev) = delta.insert(c, s) {
                if prev != s {
                    return Err(Error::contract(format!("column {c} assigned both signs")));
                }
            }
        }
        let t = TypeAssignment { delta };
        if t.realizers(sys).is_empty() {
            return Err(Error::contract("type not realized"));
        }
        Ok(t)
    }

    pub fn from_signs(sys: &TraceSystem, domain: &[usize], signs: &[bool]) -> Result<Self> {
        if domain.len() != signs.len() {
            return Err(Error::domain("domain and sign vector lengths differ"));
        }
        Self::new(sys, domain.iter().copied().zip(signs.iter().copied()))
    }

    pub(crate) fn new_unchecked(delta: BTreeMap<usize, bool>) -> Self {
        TypeAssignment { delta }
    }

    /// The domain in increasing column order.
    pub fn domain(&self) -> Vec<usize> {
        self.delta.keys().copied().collect()
    }

    pub fn contains(&self, col: usize) -> bool {
        self.delta.contains_key(&col)
    }

    pub fn sign(&self, col: usize) -> Option<bool> {
        self.delta.get(&col).copied()
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.delta.iter().map(|(&c, &s)| (c, s))
    }

    /// Rows realizing the whole type.
    pub fn realizers(&self, sys: &TraceSystem) -> RowSet {
        literal_rows(sys, self.iter())
    }

    /// Same domain, every sign flipped (the type in the complemented system).
    pub fn flipped(&self) -> TypeAssignment {
        TypeAssignment {
            delta: self.delta.iter().map(|(&c, &s)| (c, !s)).collect(),
        }
    }

    /// Signs in domain order, as a bit string.
    pub fn bit_string(&self) -> String {
        self.delta.values().map(|&s| if s { '1' } else { '0' }).collect()
    }

    fn check_subset(&self, cols: &[usize]) -> Result<()> {
        match cols.iter().find(|c| !self.delta.contains_key(c)) {
            Some(c) => Err(Error::domain(format!("column {c} outside the type's domain"))),
            None => Ok(()),
        }
    }
}

/// `p_{B0}`: the type restricted to `b0`.
pub fn restrict(t: &TypeAssignment, b0: &[usize]) -> Result<SignedPattern> {
    t.check_subset(b0)?;
    SignedPattern::from_pairs(b0.iter().map(|&c| (c, t.delta[&c])))
}

/// `p_{B0,B1}`: the restriction to `b0` with signs flipped on `b1 ⊆ b0`.
pub fn perturb(t: &TypeAssignment, b0: &[usize], b1: &[usize]) -> Result<SignedPattern> {
    t.check_subset(b0)?;
    if let Some(c) = b1.iter().find(|c| !b0.contains(c)) {
        return Err(Error::domain(format!("perturbed column {c} not in B0")));
    }
    SignedPattern::from_pairs(
        b0.iter()
            .map(|&c| (c, t.delta[&c] ^ b1.contains(&c))),
    )
}

pub fn trace_of_row(sys: &TraceSystem, row: usize, b0: &[usize]) -> Result<TypeAssignment> {
    sys.check_row(row)?;
    sys.check_cols(b0)?;
    Ok(TypeAssignment::new_unchecked(
        b0.iter().map(|&c| (c, sys.get(row, c))).collect(),
    ))
}

/// Every realized type over `b0`, one per distinct trace, ordered by the
/// first row realizing it.
pub fn realized_types(sys: &TraceSystem, b0: &[usize]) -> Result<Vec<TypeAssignment>> {
    sys.check_cols(b0)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in 0..sys.row_count() {
        let trace: Vec<bool> = b0.iter().map(|&c| sys.get(r, c)).collect();
        if seen.insert(trace) {
            out.push(trace_of_row(sys, r, b0)?);
        }
    }
    Ok(out)
}

/// Bounded memo of satisfying-row sets keyed by literal lists.
///
/// Owned by a single computation (never shared across threads); cleared
/// wholesale once it reaches capacity.
#[derive(Debug)]
pub struct RowCache {
    map: HashMap<Vec<(usize, bool)>, RowSet>,
    cap: usize,
}

impl RowCache {
    pub fn new(cap: usize) -> Self {
        RowCache { map: HashMap::new(), cap }
    }

    /// Satisfying rows of a sorted, duplicate-free literal list.
    pub fn rows(&mut self, sys: &TraceSystem, key: &[(usize, bool)]) -> RowSet {
        if let Some(r) = self.map.get(key) {
            return r.clone();
        }
        let rows = literal_rows(sys, key.iter().copied());
        if self.map.len() >= self.cap {
            self.map.clear();
        }
        self.map.insert(key.to_vec(), rows.clone());
        rows
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
