use serde_json::json;

use crate::error::{Error, Result};
use crate::perm::factorial;

/// Enumerating standard Young tableaux is capped here; the count across all
/// shapes grows like the involution numbers (~2.1M at n = 14).
pub const SYT_CAP: usize = 14;

/// An integer partition in non-increasing order of positive parts.
/// The empty partition is the unique partition of 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.render())
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?}")));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Parses the comma-separated form, e.g. "3,2,1". Empty string is the
    /// empty partition.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("partition part {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    /// Comma-separated parts, e.g. "3,2,1".
    pub fn render(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part i (1-indexed), 0 beyond the last row.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Dominance order: every prefix sum of self is >= that of other.
    /// Both partitions must be of the same integer.
    pub fn dominates(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n(), other.n());
        let mut a = 0usize;
        let mut b = 0usize;
        for k in 0..self.parts.len().max(other.parts.len()) {
            a += self.parts.get(k).copied().unwrap_or(0);
            b += other.parts.get(k).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }

    /// Conjugate partition (transpose of the Young diagram).
    pub fn transpose(&self) -> Self {
        if self.parts.is_empty() {
            return Self::empty();
        }
        let parts = (1..=self.parts[0])
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Self { parts }
    }

    fn hooks(&self) -> Vec<usize> {
        let conj = self.transpose();
        let mut hooks = Vec::with_capacity(self.n());
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 1..=row {
                hooks.push(row - j + conj.parts[j - 1] - (i + 1) + 1);
            }
        }
        hooks
    }

    /// Number of standard Young tableaux of this shape (hook length formula).
    pub fn dimension(&self) -> u64 {
        let n = self.n();
        if n == 0 {
            return 1;
        }
        let mut num = factorial(n) as u128;
        for h in self.hooks() {
            num /= h as u128;
        }
        num as u64
    }

    /// ln(dimension), usable far beyond u64 range.
    pub fn log_dimension(&self) -> f64 {
        let n = self.n();
        let log_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
        log_fact - self.hooks().iter().map(|&h| (h as f64).ln()).sum::<f64>()
    }

    /// mu fits inside self box-by-box.
    pub fn contains(&self, mu: &Self) -> bool {
        mu.parts
            .iter()
            .enumerate()
            .all(|(k, &p)| self.parts.get(k).copied().unwrap_or(0) >= p)
    }
}

/// All partitions of n in descending lexicographic order, which refines
/// dominance downward: (n) first, (1,...,1) last.
pub fn partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for_each_partition(n, |parts| {
        out.push(Partition {
            parts: parts.to_vec(),
        })
    });
    out
}

/// Streaming version of `partitions` (same order) that never materializes
/// the list; the callback borrows a scratch buffer.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    let mut buf = Vec::with_capacity(n.max(1));
    fn rec(remaining: usize, cap: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if remaining == 0 {
            f(buf);
            return;
        }
        for p in (1..=remaining.min(cap)).rev() {
            buf.push(p);
            rec(remaining - p, p, buf, f);
            buf.pop();
        }
    }
    rec(n, n, &mut buf, &mut f);
}

/// The dominance-greatest partition of n with first part n - k: (n-k, k)
/// when k <= n/2, otherwise rows of n - k repeated with one remainder row.
pub fn max_dominant(n: usize, k: usize) -> Result<Partition> {
    if n == 0 || k >= n {
        return Err(Error::Domain(format!("max_dominant(n={n}, k={k})")));
    }
    let b = n - k;
    let q = n / b;
    let r = n % b;
    let mut parts = vec![b; q];
    if r > 0 {
        parts.push(r);
    }
    Ok(Partition { parts })
}

/// A filling of a Young diagram with 1..n, each exactly once. Rows hold the
/// values; `standard` fillings increase along rows and down columns.
#[derive(Clone, PartialEq, Eq)]
pub struct Tableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl std::fmt::Debug for Tableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tableau{:?}", self.rows)
    }
}

impl Tableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len()).collect())
            .map_err(|_| Error::InvalidTableau(format!("ragged rows {rows:?}")))?;
        let n = shape.n();
        let mut seen = vec![false; n];
        for v in rows.iter().flatten() {
            if *v == 0 || *v > n || seen[*v - 1] {
                return Err(Error::InvalidTableau(format!(
                    "entries must be a bijection on 1..={n}: {rows:?}"
                )));
            }
            seen[*v - 1] = true;
        }
        Ok(Self { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Entry at row i, column j (1-indexed).
    pub fn entry(&self, i: usize, j: usize) -> usize {
        self.rows[i - 1][j - 1]
    }

    pub fn is_standard(&self) -> bool {
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if j + 1 < row.len() && row[j + 1] <= v {
                    return false;
                }
                if let Some(below) = self.rows.get(i + 1).and_then(|r| r.get(j)) {
                    if *below <= v {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// (row, column) of each value, 1-indexed; index 0 holds value 1.
    pub fn positions_by_value(&self) -> Vec<(usize, usize)> {
        let mut pos = vec![(0, 0); self.n()];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                pos[v - 1] = (i + 1, j + 1);
            }
        }
        pos
    }

    /// j - i + 1 for the box (i, j) holding `value`: the column offset that
    /// drives the eigenvalue formulas.
    pub fn shifted_content_of(&self, value: usize) -> i64 {
        let (i, j) = self.positions_by_value()[value - 1];
        j as i64 - i as i64 + 1
    }

    /// Transposed tableau: entry (i, j) moves to (j, i).
    pub fn transpose(&self) -> Self {
        let shape = self.shape.transpose();
        let mut rows: Vec<Vec<usize>> = shape.parts().iter().map(|&p| vec![0; p]).collect();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                rows[j][i] = v;
            }
        }
        Self { shape, rows }
    }

    /// JSON form: {"shape":[...], "rows":[[...],...]}.
    pub fn to_json(&self) -> serde_json::Value {
        json!({ "shape": self.shape.parts(), "rows": self.rows })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let rows = v
            .get("rows")
            .and_then(|r| r.as_array())
            .ok_or_else(|| Error::Parse("tableau JSON needs a rows array".to_string()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("tableau row must be an array".to_string()))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|u| u as usize)
                            .ok_or_else(|| Error::Parse(format!("bad tableau entry {x}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let t = Self::new(rows)?;
        if let Some(shape) = v.get("shape").and_then(|s| s.as_array()) {
            let declared: Vec<usize> =
                shape.iter().filter_map(|x| x.as_u64()).map(|u| u as usize).collect();
            if declared != t.shape.parts() {
                return Err(Error::Parse("tableau shape does not match rows".to_string()));
            }
        }
        Ok(t)
    }
}

/// The three distinguished fillings of a shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialKind {
    /// Rows filled left to right, top to bottom: the eigenvalue maximizer.
    Row,
    /// Columns filled top to bottom, left to right: the eigenvalue minimizer.
    Col,
    /// Diagonals (constant j - i) filled left to right, each top to bottom.
    Diag,
}

pub fn special_tableau(shape: &Partition, kind: SpecialKind) -> Tableau {
    let mut rows: Vec<Vec<usize>> = shape.parts().iter().map(|&p| vec![0; p]).collect();
    let mut next = 1usize;
    match kind {
        SpecialKind::Row => {
            for row in rows.iter_mut() {
                for slot in row.iter_mut() {
                    *slot = next;
                    next += 1;
                }
            }
        }
        SpecialKind::Col => {
            let width = shape.part(1);
            for j in 0..width {
                for row in rows.iter_mut() {
                    if j < row.len() {
                        row[j] = next;
                        next += 1;
                    }
                }
            }
        }
        SpecialKind::Diag => {
            let depth = shape.len() as i64;
            let width = shape.part(1) as i64;
            for d in (1 - depth)..width {
                for i in 1..=shape.len() {
                    let j = i as i64 + d;
                    if j >= 1 && j <= shape.part(i) as i64 {
                        rows[i - 1][j as usize - 1] = next;
                        next += 1;
                    }
                }
            }
        }
    }
    Tableau {
        shape: shape.clone(),
        rows,
    }
}

/// Visits every standard Young tableau of `shape`, placing n, n-1, ... at
/// removable corners. Deterministic order: at each step the corner in the
/// topmost row is tried first.
pub fn for_each_syt(shape: &Partition, mut f: impl FnMut(&Tableau)) -> Result<()> {
    let n = shape.n();
    if n > SYT_CAP {
        return Err(Error::CapExceeded {
            what: "standard tableau enumeration",
            n,
            cap: SYT_CAP,
        });
    }
    let mut rows: Vec<Vec<usize>> = shape.parts().iter().map(|&p| vec![0; p]).collect();
    let mut fill: Vec<usize> = shape.parts().to_vec();
    fn rec(
        m: usize,
        shape: &Partition,
        fill: &mut Vec<usize>,
        rows: &mut Vec<Vec<usize>>,
        f: &mut impl FnMut(&Tableau),
    ) {
        if m == 0 {
            f(&Tableau {
                shape: shape.clone(),
                rows: rows.clone(),
            });
            return;
        }
        for i in 0..fill.len() {
            let removable = fill[i] > 0 && (i + 1 == fill.len() || fill[i] > fill[i + 1]);
            if removable {
                fill[i] -= 1;
                rows[i][fill[i]] = m;
                rec(m - 1, shape, fill, rows, f);
                fill[i] += 1;
            }
        }
    }
    rec(n, shape, &mut fill, &mut rows, &mut f);
    Ok(())
}

/// All standard Young tableaux of `shape` in `for_each_syt` order.
pub fn enumerate_syt(shape: &Partition) -> Result<Vec<Tableau>> {
    let mut out = Vec::new();
    for_each_syt(shape, |t| out.push(t.clone()))?;
    Ok(out)
}
