//! Exhaustive checks of the structural facts behind the mixing-time bounds:
//! extremal fillings, transpose duality, dominance monotonicity, closed
//! forms, and the per-shape eigenvalue gap estimates. Everything is compared
//! in exact rational arithmetic; a failure carries a printable witness.

use num::{BigInt, BigRational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::harmonic::HarmonicCache;
use crate::perm::{factorial, Permutation};
use crate::scalar::{ratio, Scalar};
use crate::shuffle::{CumulativeWeight, WeightFunction};
use crate::spectrum::eig_weighted;
use crate::tableaux::{
    for_each_syt, max_dominant, partitions, special_tableau, Partition, SpecialKind, Tableau,
    SYT_CAP,
};

#[derive(Clone, Debug)]
pub struct PredicateOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub cases: u64,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug)]
pub struct PredicateReport {
    pub n: usize,
    pub alpha: f64,
    pub outcomes: Vec<PredicateOutcome>,
}

impl PredicateReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }

    pub fn total_cases(&self) -> u64 {
        self.outcomes.iter().map(|o| o.cases).sum()
    }

    pub fn to_json(&self) -> Value {
        let mut preds = serde_json::Map::new();
        for o in &self.outcomes {
            preds.insert(
                o.name.to_string(),
                json!({
                    "pass": o.pass,
                    "cases": o.cases,
                    "counterexample": o.counterexample,
                }),
            );
        }
        json!({
            "n": self.n,
            "alpha": self.alpha,
            "all_pass": self.all_pass(),
            "predicates": Value::Object(preds),
        })
    }
}

/// Accumulates checks for one predicate, keeping the first failing witness.
struct Check {
    name: &'static str,
    cases: u64,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failure: None,
        }
    }

    fn assert(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    fn finish(self) -> PredicateOutcome {
        PredicateOutcome {
            name: self.name,
            pass: self.failure.is_none(),
            cases: self.cases,
            counterexample: self.failure,
        }
    }
}

fn eig(t: &Tableau, w: &WeightFunction) -> BigRational {
    // Power/unbiased weights are defined at every value, so this cannot fail
    // for the weight families this module constructs.
    eig_weighted(t, w).unwrap()
}

fn tableau_str(t: &Tableau) -> String {
    format!("{:?}", t.rows())
}

/// Runs every predicate applicable to the weight exponent `alpha` on decks of
/// size n, exhaustively over shapes and standard fillings (general fillings
/// are sampled with a fixed seed). All comparisons are exact.
pub fn bound_predicates(n: usize, alpha: f64) -> Result<PredicateReport> {
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("weight exponent {alpha}")));
    }
    if n == 0 || n > SYT_CAP {
        return Err(Error::CapExceeded {
            what: "predicate sweep",
            n,
            cap: SYT_CAP,
        });
    }
    let w = WeightFunction::from_alpha(alpha);
    let mut outcomes = vec![first_row_dimension_bound(n)];
    if alpha == 0.0 {
        outcomes.push(value_swap_difference(n));
        outcomes.push(transpose_duality(n));
        outcomes.push(negative_column_flip(n));
        outcomes.push(two_row_closed_form(n));
    }
    if alpha <= 1.0 {
        outcomes.push(extremal_fillings(n, &w, true));
        outcomes.push(dominance_monotonicity(n, &w));
        outcomes.push(row_eigenvalue_gap(n, &w)?);
    }
    if alpha >= 1.0 {
        outcomes.push(extremal_fillings(n, &w, false));
        outcomes.push(column_dominated_by_extreme_diagonal(n, &w)?);
        outcomes.push(diagonal_box_offset_bound(n)?);
        outcomes.push(column_eigenvalue_gap(n, alpha)?);
    }
    Ok(PredicateReport {
        n,
        alpha,
        outcomes,
    })
}

/// Swapping two values u < v sitting at boxes (i1,j1), (i2,j2) of any
/// bijective filling changes the eigenvalue by exactly
/// ((i1-i2)+(j2-j1))/n * (1/u - 1/v).
fn value_swap_difference(n: usize) -> PredicateOutcome {
    let w = WeightFunction::Unbiased;
    let mut check = Check::new("value_swap_difference");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5357_4150 ^ n as u64);
    for shape in partitions(n) {
        let fillings: Vec<Vec<usize>> = if n <= 4 {
            (0..factorial(n))
                .map(|r| Permutation::unrank(n, r).unwrap().one_line())
                .collect()
        } else {
            (0..40)
                .map(|_| {
                    let mut flat: Vec<usize> = (1..=n).collect();
                    flat.shuffle(&mut rng);
                    flat
                })
                .collect()
        };
        for flat in fillings {
            let t = filling_from_flat(&shape, &flat);
            let pairs: Vec<(usize, usize)> = if n <= 4 {
                (1..=n)
                    .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
                    .collect()
            } else {
                let u = rng.random_range(1..=n);
                let mut v = rng.random_range(1..=n);
                while v == u {
                    v = rng.random_range(1..=n);
                }
                vec![(u.min(v), u.max(v))]
            };
            for (u, v) in pairs {
                let swapped: Vec<usize> = flat
                    .iter()
                    .map(|&x| {
                        if x == u {
                            v
                        } else if x == v {
                            u
                        } else {
                            x
                        }
                    })
                    .collect();
                let s = filling_from_flat(&shape, &swapped);
                let pos = t.positions_by_value();
                let (i1, j1) = pos[u - 1];
                let (i2, j2) = pos[v - 1];
                let lhs = eig(&s, &w) - eig(&t, &w);
                let rhs = ratio(
                    (i1 as i64 - i2 as i64) + (j2 as i64 - j1 as i64),
                    n as i64,
                ) * (ratio(1, u as i64) - ratio(1, v as i64));
                check.assert(lhs == rhs, || {
                    format!(
                        "filling {} swap ({u},{v}): difference {} expected {}",
                        tableau_str(&t),
                        lhs.render(),
                        rhs.render()
                    )
                });
            }
        }
    }
    check.finish()
}

fn filling_from_flat(shape: &Partition, flat: &[usize]) -> Tableau {
    let mut rows = Vec::with_capacity(shape.len());
    let mut off = 0;
    for &len in shape.parts() {
        rows.push(flat[off..off + len].to_vec());
        off += len;
    }
    Tableau::new(rows).unwrap()
}

/// Row/column special fillings bracket every standard filling's eigenvalue.
/// For exponents <= 1 the row filling is the maximum and the column filling
/// the minimum; for exponents >= 1 the roles flip.
fn extremal_fillings(n: usize, w: &WeightFunction, row_is_max: bool) -> PredicateOutcome {
    let mut check = Check::new(if row_is_max {
        "row_filling_maximizes"
    } else {
        "column_filling_maximizes"
    });
    for shape in partitions(n) {
        let row_v = eig(&special_tableau(&shape, SpecialKind::Row), w);
        let col_v = eig(&special_tableau(&shape, SpecialKind::Col), w);
        let (lo, hi) = if row_is_max {
            (col_v, row_v)
        } else {
            (row_v, col_v)
        };
        for_each_syt(&shape, |t| {
            let v = eig(t, w);
            check.assert(lo <= v && v <= hi, || {
                format!(
                    "shape {} tableau {}: {} outside [{}, {}]",
                    shape.render(),
                    tableau_str(t),
                    v.render(),
                    lo.render(),
                    hi.render()
                )
            });
        })
        .unwrap();
    }
    check.finish()
}

/// eig(T) + eig(transpose of T) = 2 H_n / n for every standard filling.
fn transpose_duality(n: usize) -> PredicateOutcome {
    let w = WeightFunction::Unbiased;
    let mut check = Check::new("transpose_duality");
    let h = HarmonicCache::new(n);
    let target = ratio(2, n as i64) * h.get(n);
    for shape in partitions(n) {
        for_each_syt(&shape, |t| {
            let sum = eig(t, &w) + eig(&t.transpose(), &w);
            check.assert(sum == target, || {
                format!(
                    "tableau {}: sum {} expected {}",
                    tableau_str(t),
                    sum.render(),
                    target.render()
                )
            });
        })
        .unwrap();
    }
    check.finish()
}

/// When the column filling of a shape has nonpositive eigenvalue, its
/// magnitude is dominated by the row filling of the transposed shape.
fn negative_column_flip(n: usize) -> PredicateOutcome {
    let w = WeightFunction::Unbiased;
    let mut check = Check::new("negative_column_flip");
    for shape in partitions(n) {
        let col_v = eig(&special_tableau(&shape, SpecialKind::Col), &w);
        if col_v > ratio(0, 1) {
            continue;
        }
        let dual_row = eig(&special_tableau(&shape.transpose(), SpecialKind::Row), &w);
        check.assert(-&col_v <= dual_row, || {
            format!(
                "shape {}: |{}| > {}",
                shape.render(),
                col_v.render(),
                dual_row.render()
            )
        });
    }
    check.finish()
}

/// Closed form for the row filling of (n-k, k): its eigenvalue equals
/// 1 - ((n-k+1)/n)(H_n - H_{n-k+1}) - 1/n, and also the direct sum
/// (n-k)/n + (1/n) sum_{j=1}^{k} (j-1)/(n-k+j).
fn two_row_closed_form(n: usize) -> PredicateOutcome {
    let w = WeightFunction::Unbiased;
    let mut check = Check::new("two_row_closed_form");
    let h = HarmonicCache::new(n);
    for k in 1..=n / 2 {
        let shape = Partition::new(vec![n - k, k]).unwrap();
        let row_v = eig(&special_tableau(&shape, SpecialKind::Row), &w);
        let closed = ratio(1, 1)
            - ratio((n - k + 1) as i64, n as i64) * (h.get(n) - h.get(n - k + 1))
            - ratio(1, n as i64);
        let mut direct = ratio((n - k) as i64, n as i64);
        for j in 1..=k {
            direct += ratio((j - 1) as i64, (n * (n - k + j)) as i64);
        }
        check.assert(row_v == closed && row_v == direct, || {
            format!(
                "k={k}: row {} closed {} direct {}",
                row_v.render(),
                closed.render(),
                direct.render()
            )
        });
    }
    check.finish()
}

/// Comparable shapes order their special-filling eigenvalues: if lambda
/// dominates mu then both the row and column fillings of lambda have
/// eigenvalues at least those of mu.
fn dominance_monotonicity(n: usize, w: &WeightFunction) -> PredicateOutcome {
    let mut check = Check::new("dominance_monotonicity");
    let shapes = partitions(n);
    let values: Vec<(BigRational, BigRational)> = shapes
        .iter()
        .map(|s| {
            (
                eig(&special_tableau(s, SpecialKind::Row), w),
                eig(&special_tableau(s, SpecialKind::Col), w),
            )
        })
        .collect();
    for (a, va) in shapes.iter().zip(&values) {
        for (b, vb) in shapes.iter().zip(&values) {
            if a == b || !a.dominates(b) {
                continue;
            }
            check.assert(va.0 >= vb.0 && va.1 >= vb.1, || {
                format!(
                    "{} dominates {} but row {} < {} or col {} < {}",
                    a.render(),
                    b.render(),
                    va.0.render(),
                    vb.0.render(),
                    va.1.render(),
                    vb.1.render()
                )
            });
        }
    }
    check.finish()
}

/// sum of squared dimensions over shapes with first row n-k is at most
/// binom(n,k)^2 k!, which in turn is at most n^{2k}/k!.
fn first_row_dimension_bound(n: usize) -> PredicateOutcome {
    let mut check = Check::new("first_row_dimension_bound");
    for k in 1..n {
        let mut sum = BigInt::from(0u32);
        for shape in partitions(n) {
            if shape.part(1) == n - k {
                let d = BigInt::from(shape.dimension());
                sum += &d * &d;
            }
        }
        let binom = BigInt::from(factorial(n) / (factorial(k) * factorial(n - k)));
        let kf = BigInt::from(factorial(k));
        let mid = &binom * &binom * &kf;
        let upper = BigInt::from(n).pow(2 * k as u32);
        check.assert(sum <= mid && &mid * &kf <= upper, || {
            format!("k={k}: {sum} vs {mid} vs {upper}/{kf}")
        });
    }
    check.finish()
}

/// Row-filling eigenvalue gap for exponents <= 1: every shape missing k
/// cells from its first row satisfies
/// eig <= 1 - (n-k+1) k w(n) / (n N)  when k <= n/4, and
/// eig <= 1 - k w(n) / (2 N)         otherwise.
fn row_eigenvalue_gap(n: usize, w: &WeightFunction) -> Result<PredicateOutcome> {
    let mut check = Check::new("row_eigenvalue_gap");
    let total = CumulativeWeight::new(n, w)?.total().clone();
    let w_n = w.exact_weight(n)?;
    let one = ratio(1, 1);
    for shape in partitions(n) {
        let k = n - shape.part(1);
        if k == 0 {
            continue;
        }
        let row_v = eig(&special_tableau(&shape, SpecialKind::Row), w);
        let bound = if k <= n / 4 {
            &one - ratio(((n - k + 1) * k) as i64, n as i64) * &w_n / &total
        } else {
            &one - ratio(k as i64, 2) * &w_n / &total
        };
        check.assert(row_v <= bound, || {
            format!(
                "shape {}: row {} exceeds {}",
                shape.render(),
                row_v.render(),
                bound.render()
            )
        });
    }
    Ok(check.finish())
}

/// For exponents >= 1, the column filling of any shape missing k cells from
/// its first row is dominated by the diagonal filling of the most dominant
/// shape with first row n-k.
fn column_dominated_by_extreme_diagonal(n: usize, w: &WeightFunction) -> Result<PredicateOutcome> {
    let mut check = Check::new("column_dominated_by_extreme_diagonal");
    for shape in partitions(n) {
        let k = n - shape.part(1);
        if k == 0 {
            continue;
        }
        let target = eig(
            &special_tableau(&max_dominant(n, k)?, SpecialKind::Diag),
            w,
        );
        let col_v = eig(&special_tableau(&shape, SpecialKind::Col), w);
        check.assert(col_v <= target, || {
            format!(
                "shape {}: col {} exceeds diagonal cap {}",
                shape.render(),
                col_v.render(),
                target.render()
            )
        });
    }
    Ok(check.finish())
}

/// Box-index inequality on the extreme diagonal filling: n times the shifted
/// content of each value m is at most (n-k) m, for k up to n-2.
fn diagonal_box_offset_bound(n: usize) -> Result<PredicateOutcome> {
    let mut check = Check::new("diagonal_box_offset_bound");
    for k in 1..=n.saturating_sub(2) {
        let t = special_tableau(&max_dominant(n, k)?, SpecialKind::Diag);
        for m in 1..=n {
            let sc = t.shifted_content_of(m);
            check.assert(sc * n as i64 <= ((n - k) * m) as i64, || {
                format!("k={k} value {m}: offset {sc} times {n} exceeds {}", (n - k) * m)
            });
        }
    }
    Ok(check.finish())
}

/// Column-filling eigenvalue gap for exponents >= 1: with N and N' the
/// cumulative weights at exponents alpha and alpha - 1,
/// eig <= 1 - k (n-k) N' / (n N) when k <= n/4, and eig <= 1 - k/n always.
fn column_eigenvalue_gap(n: usize, alpha: f64) -> Result<PredicateOutcome> {
    let mut check = Check::new("column_eigenvalue_gap");
    let w = WeightFunction::from_alpha(alpha);
    let total = CumulativeWeight::new(n, &w)?.total().clone();
    let lower_total = CumulativeWeight::new(n, &WeightFunction::from_alpha(alpha - 1.0))?
        .total()
        .clone();
    let one = ratio(1, 1);
    for shape in partitions(n) {
        let k = n - shape.part(1);
        if k == 0 {
            continue;
        }
        let col_v = eig(&special_tableau(&shape, SpecialKind::Col), &w);
        check.assert(col_v <= &one - ratio(k as i64, n as i64), || {
            format!(
                "shape {}: col {} exceeds 1 - {k}/{n}",
                shape.render(),
                col_v.render()
            )
        });
        if k <= n / 4 {
            let bound =
                &one - ratio((k * (n - k)) as i64, n as i64) * &lower_total / &total;
            check.assert(col_v <= bound, || {
                format!(
                    "shape {}: col {} exceeds {}",
                    shape.render(),
                    col_v.render(),
                    bound.render()
                )
            });
        }
    }
    Ok(check.finish())
}
