//! Deterministic trace-system generators.
//!
//! Random systems use ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64(seed)`. Entries are drawn row-major, one
//! `next_u64` per entry, and an entry is 1 iff `(x >> 11) * 2^-53 < density`.
//! Both steps are fully specified, so any implementation of ChaCha8 with the
//! same seeding reproduces the same matrix bit for bit.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::TraceSystem;

/// Largest matrix (rows × cols) a generator will build.
pub const DEFAULT_CELL_BUDGET: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GenSpec {
    Intervals {
        points: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        which: Option<Vec<(usize, usize)>>,
    },
    Halfline {
        points: usize,
        thresholds: usize,
    },
    Singletons {
        points: usize,
    },
    Cube {
        dim: usize,
    },
    Grid {
        m: usize,
    },
    Random {
        rows: usize,
        cols: usize,
        density: f64,
        seed: u64,
    },
}

impl GenSpec {
    /// Builds the system. `grid` yields the row-band and column-band
    /// families side by side on the shared cell universe.
    pub fn build(&self) -> Result<TraceSystem> {
        self.build_with_budget(DEFAULT_CELL_BUDGET)
    }

    pub fn build_with_budget(&self, budget: usize) -> Result<TraceSystem> {
        let (rows, cols) = self.dimensions()?;
        if rows.checked_mul(cols).is_none_or(|cells| cells > budget) {
            return Err(Error::BudgetExceeded { budget: budget as u64 });
        }
        match self {
            GenSpec::Intervals { points, which: None } => gen_intervals(*points, IntervalChoice::All),
            GenSpec::Intervals { points, which: Some(list) } => {
                gen_intervals(*points, IntervalChoice::Explicit(list.clone()))
            }
            GenSpec::Halfline { points, thresholds } => gen_halfline(*points, *thresholds),
            GenSpec::Singletons { points } => gen_singletons(*points),
            GenSpec::Cube { dim } => gen_cube(*dim),
            GenSpec::Grid { m } => gen_grid_combined(*m),
            GenSpec::Random { rows, cols, density, seed } => gen_random(*rows, *cols, *density, *seed),
        }
    }

    fn dimensions(&self) -> Result<(usize, usize)> {
        Ok(match self {
            GenSpec::Intervals { points, which } => {
                (*points, which.as_ref().map_or(points * (points + 1) / 2, Vec::len))
            }
            GenSpec::Halfline { points, thresholds } => (*points, *thresholds),
            GenSpec::Singletons { points } => (*points, *points),
            GenSpec::Cube { dim } => {
                if *dim >= usize::BITS as usize / 2 {
                    return Err(Error::BudgetExceeded { budget: DEFAULT_CELL_BUDGET as u64 });
                }
                (1usize << dim, *dim)
            }
            GenSpec::Grid { m } => (m.saturating_mul(*m), m.saturating_mul(2)),
            GenSpec::Random { rows, cols, .. } => (*rows, *cols),
        })
    }

    pub fn with_seed(self, new_seed: u64) -> Self {
        match self {
            GenSpec::Random { rows, cols, density, .. } => GenSpec::Random { rows, cols, density, seed: new_seed },
            other => other,
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Intervals { points, which: None } => write!(f, "intervals:{points}"),
            GenSpec::Intervals { points, which: Some(list) } => {
                write!(f, "intervals:{points}")?;
                for (a, b) in list {
                    write!(f, ":{a}-{b}")?;
                }
                Ok(())
            }
            GenSpec::Halfline { points, thresholds } => write!(f, "halfline:{points}:{thresholds}"),
            GenSpec::Singletons { points } => write!(f, "singletons:{points}"),
            GenSpec::Cube { dim } => write!(f, "cube:{dim}"),
            GenSpec::Grid { m } => write!(f, "grid:{m}"),
            GenSpec::Random { rows, cols, density, seed } => write!(f, "random:{rows}:{cols}:{density}:{seed}"),
        }
    }
}

impl FromStr for GenSpec {
    type Err = Error;

    /// Accepts a JSON object or the compact `kind:arg:...` form, e.g.
    /// `cube:2`, `halfline:10:6`, `intervals:8`, `intervals:8:0-3:2-5`,
    /// `random:12:6:0.5:7`. A leading `gen:` is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::domain(format!("bad GenSpec JSON: {e}")));
        }
        let s = s.strip_prefix("gen:").unwrap_or(s);
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::domain(format!("bad generator spec {s:?}"));
        let num = |i: usize| -> Result<usize> { parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(bad) };
        let spec = match parts[0] {
            "intervals" => {
                let points = num(1)?;
                let which = if parts.len() > 2 {
                    let list = parts[2..]
                        .iter()
                        .map(|p| {
                            let (a, b) = p.split_once('-').ok_or_else(bad)?;
                            Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Some(list)
                } else {
                    None
                };
                GenSpec::Intervals { points, which }
            }
            "halfline" if parts.len() == 3 => GenSpec::Halfline { points: num(1)?, thresholds: num(2)? },
            "singletons" if parts.len() == 2 => GenSpec::Singletons { points: num(1)? },
            "cube" if parts.len() == 2 => GenSpec::Cube { dim: num(1)? },
            "grid" if parts.len() == 2 => GenSpec::Grid { m: num(1)? },
            "random" if parts.len() == 5 => GenSpec::Random {
                rows: num(1)?,
                cols: num(2)?,
                density: parts[3].parse().map_err(|_| bad())?,
                seed: parts[4].parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalChoice {
    All,
    Explicit(Vec<(usize, usize)>),
}

/// Points `0..P` as rows; one column per closed interval, by membership.
/// `All` lists every `[i, j]` with `i ≤ j` in lexicographic order.
pub fn gen_intervals(points: usize, which: IntervalChoice) -> Result<TraceSystem> {
    if points < 2 {
        return Err(Error::domain("intervals need at least 2 points"));
    }
    let list = match which {
        IntervalChoice::All => (0..points)
            .flat_map(|i| (i..points).map(move |j| (i, j)))
            .collect(),
        IntervalChoice::Explicit(list) => list,
    };
    if list.is_empty() {
        return Err(Error::domain("empty interval list"));
    }
    if let Some(&(a, b)) = list.iter().find(|&&(a, b)| a > b || b >= points) {
        return Err(Error::domain(format!("interval [{a},{b}] outside 0..{points}")));
    }
    let labels: Vec<String> = list.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
    let unique: std::collections::HashSet<_> = labels.iter().collect();
    let sys = TraceSystem::from_fn(points, list.len(), |r, c| list[c].0 <= r && r <= list[c].1)?;
    if unique.len() == labels.len() {
        sys.with_col_labels(labels)
    } else {
        Ok(sys)
    }
}

/// Points `0..P`; column θ (for θ = 1..=L) holds `x ≥ θ`.
pub fn gen_halfline(points: usize, thresholds: usize) -> Result<TraceSystem> {
    TraceSystem::from_fn(points, thresholds, |r, c| r > c)?
        .with_col_labels((1..=thresholds).map(|t| format!("ge{t}")))
}

/// Points `0..P`; column `i` is the singleton `{i}`.
pub fn gen_singletons(points: usize) -> Result<TraceSystem> {
    TraceSystem::from_fn(points, points, |r, c| r == c)?.with_col_labels((0..points).map(|i| format!("eq{i}")))
}

/// All `2^d` sign vectors on `d` columns; row `r` spells `r` in binary with
/// column 0 as the most significant bit.
pub fn gen_cube(dim: usize) -> Result<TraceSystem> {
    if dim == 0 || dim > 20 {
        return Err(Error::domain("cube dimension must be in 1..=20"));
    }
    TraceSystem::from_fn(1 << dim, dim, |r, c| (r >> (dim - 1 - c)) & 1 == 1)?
        .with_col_labels((0..dim).map(|i| format!("c{i}")))
}

/// `m × m` cells (row id `x·m + y`); the φ-system has row bands `R_i = {x = i}`,
/// the ψ-system column bands `C_j = {y = j}`.
pub fn gen_grid(m: usize) -> Result<(TraceSystem, TraceSystem)> {
    if m == 0 {
        return Err(Error::domain("grid size must be positive"));
    }
    let phi = TraceSystem::from_fn(m * m, m, |r, i| r / m == i)?.with_col_labels((0..m).map(|i| format!("R{i}")))?;
    let psi = TraceSystem::from_fn(m * m, m, |r, j| r % m == j)?.with_col_labels((0..m).map(|j| format!("C{j}")))?;
    Ok((phi, psi))
}

/// Both grid families as one system: columns `R_0..R_{m-1}, C_0..C_{m-1}`.
pub fn gen_grid_combined(m: usize) -> Result<TraceSystem> {
    if m == 0 {
        return Err(Error::domain("grid size must be positive"));
    }
    TraceSystem::from_fn(m * m, 2 * m, |r, c| if c < m { r / m == c } else { r % m == c - m })?
        .with_col_labels((0..m).map(|i| format!("R{i}")).chain((0..m).map(|j| format!("C{j}"))))
}

/// Independent biased bits; see the module docs for the exact stream.
pub fn gen_random(rows: usize, cols: usize, density: f64, seed: u64) -> Result<TraceSystem> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::domain("density must lie in [0, 1]"));
    }
    if rows == 0 || cols == 0 {
        return Err(Error::domain("random systems need positive sizes"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (1u64 << 53) as f64;
    let bits: Vec<bool> = (0..rows * cols)
        .map(|_| ((rng.next_u64() >> 11) as f64) * scale < density)
        .collect();
    TraceSystem::from_fn(rows, cols, |r, c| bits[r * cols + c])
}
