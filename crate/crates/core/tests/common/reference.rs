//! Naive reference walker for the compression procedure. Works on a plain
//! row-major matrix with row lists instead of bitsets, recomputes every
//! pattern from scratch and shares no code with the library beyond reading
//! matrix entries.

use udtfs::TraceSystem;

pub struct Matrix {
    pub rows: Vec<Vec<bool>>,
}

impl Matrix {
    pub fn of(sys: &TraceSystem) -> Self {
        let rows = (0..sys.row_count()).map(|r| (0..sys.col_count()).map(|c| sys.get(r, c)).collect()).collect();
        Matrix { rows }
    }

    pub fn from_strs(rows: &[&str]) -> Self {
        Matrix { rows: rows.iter().map(|r| r.chars().map(|ch| ch == '1').collect()).collect() }
    }

    /// Rows satisfying every literal.
    pub fn sat(&self, lits: &[(usize, bool)]) -> Vec<usize> {
        (0..self.rows.len()).filter(|&r| lits.iter().all(|&(c, s)| self.rows[r][c] == s)).collect()
    }

    /// The sign a consistent pattern entails on `c`.
    pub fn decides(&self, lits: &[(usize, bool)], c: usize) -> Option<bool> {
        let rows = self.sat(lits);
        if rows.is_empty() {
            return None;
        }
        if rows.iter().all(|&r| self.rows[r][c]) {
            Some(true)
        } else if rows.iter().all(|&r| !self.rows[r][c]) {
            Some(false)
        } else {
            None
        }
    }

    fn mixed(&self, c: usize) -> bool {
        self.rows.iter().any(|r| r[c]) && self.rows.iter().any(|r| !r[c])
    }
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// A *-decision: `(decided, answer)` where the answer is the direct sign,
/// else `+` iff every deciding perturbation says `+`.
pub fn star(m: &Matrix, pattern: &[(usize, bool)], c: usize) -> (bool, bool) {
    if let Some(s) = m.decides(pattern, c) {
        return (true, s);
    }
    let mut seen: Vec<usize> = Vec::new();
    let mut answers = Vec::new();
    for &(b, _) in pattern {
        if seen.contains(&b) {
            continue;
        }
        seen.push(b);
        let flipped: Vec<(usize, bool)> = pattern.iter().map(|&(x, s)| (x, if x == b { !s } else { s })).collect();
        if let Some(s) = m.decides(&flipped, c) {
            answers.push(s);
        }
    }
    (!answers.is_empty(), answers.iter().all(|&s| s))
}

pub struct Walk<'a> {
    m: &'a Matrix,
    b: Vec<usize>,
    delta: Vec<(usize, bool)>,
    pub levels: Vec<Vec<Vec<usize>>>,
}

impl<'a> Walk<'a> {
    pub fn new(m: &'a Matrix, delta: &[(usize, bool)]) -> Self {
        let b: Vec<usize> = delta.iter().map(|&(c, _)| c).collect();
        let mut w = Walk { m, b, delta: delta.to_vec(), levels: Vec::new() };
        w.build();
        w
    }

    fn sign(&self, c: usize) -> bool {
        self.delta.iter().find(|&&(x, _)| x == c).expect("column in B").1
    }

    fn pattern(&self, seq: &[usize]) -> Vec<(usize, bool)> {
        let mut set: Vec<usize> = seq.to_vec();
        set.sort_unstable();
        set.dedup();
        set.into_iter().map(|c| (c, self.sign(c))).collect()
    }

    fn rows(&self, seq: &[usize]) -> Vec<usize> {
        self.m.sat(&self.pattern(seq))
    }

    fn build(&mut self) {
        let mut cur: Vec<Vec<usize>> = self.b.iter().filter(|&&c| self.m.mixed(c)).map(|&c| vec![c]).collect();
        while !cur.is_empty() {
            let mut next = Vec::new();
            for beta in &cur {
                let pat = self.pattern(beta);
                for &c in &self.b {
                    if !star(self.m, &pat, c).0 {
                        let mut s = beta.clone();
                        s.push(c);
                        next.push(s);
                    }
                }
            }
            self.levels.push(std::mem::replace(&mut cur, next));
        }
    }

    fn strictly_below(&self, a: &[usize], b: &[usize]) -> bool {
        let (ra, rb) = (self.rows(a), self.rows(b));
        subset(&ra, &rb) && !subset(&rb, &ra)
    }

    fn descend(&self, level: &[Vec<usize>], start: usize) -> usize {
        let mut cur = start;
        while let Some(next) = (0..level.len()).find(|&j| self.strictly_below(&level[j], &level[cur])) {
            cur = next;
        }
        cur
    }

    fn h(&self, n: usize, beta: &[usize]) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        if n > 1 {
            let level = &self.levels[n - 2];
            for i in 0..n {
                let beta_i: Vec<usize> = beta.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
                let pos = level.iter().position(|g| *g == beta_i).expect("subsequence in the level below");
                let prime = level[self.descend(level, pos)].clone();
                for g in self.h(n - 1, &prime) {
                    if !out.contains(&g) {
                        out.push(g);
                    }
                }
            }
        }
        out.push(beta.to_vec());
        out.sort_by_key(Vec::len);
        out
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// The certificate sequences with their signs.
    pub fn certificate(&self) -> Vec<(Vec<usize>, Vec<bool>)> {
        let n = self.height();
        if n == 0 {
            return Vec::new();
        }
        let top = &self.levels[n - 1];
        let first = (0..top.len()).find(|&j| !top.iter().any(|g| self.strictly_below(g, &top[j]))).expect("minimal");
        self.h(n, &top[first])
            .into_iter()
            .map(|g| {
                let signs = g.iter().map(|&c| self.sign(c)).collect();
                (g, signs)
            })
            .collect()
    }
}

/// Runs a certificate on `c` from its stored signs.
pub fn evaluate(m: &Matrix, cert: &[(Vec<usize>, Vec<bool>)], c: usize) -> Option<bool> {
    if cert.is_empty() {
        return m.decides(&[], c);
    }
    cert.iter().find_map(|(cols, signs)| {
        let pat: Vec<(usize, bool)> = cols.iter().copied().zip(signs.iter().copied()).collect();
        let (decided, answer) = star(m, &pat, c);
        decided.then_some(answer)
    })
}
