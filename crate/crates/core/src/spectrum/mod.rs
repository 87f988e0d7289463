pub mod oracle;
pub mod predicates;

use std::io::Write;

use num::{BigInt, BigRational};

use crate::dist::{convolve, tv_distance, GroupDistribution};
use crate::error::{Error, Result};
use crate::harmonic::{harmonic_f64, HarmonicCache};
use crate::scalar::{ratio, Scalar};
use crate::shuffle::{build_generator, CumulativeWeight, WeightFunction};
use crate::tableaux::{
    for_each_partition, for_each_syt, special_tableau, Partition, SpecialKind, Tableau, SYT_CAP,
};

/// Exact TV profiles walk the full n!-dimensional distribution; these are the
/// default degree caps per arithmetic mode (env/CLI can override).
pub const EXACT_TV_CAP_RATIONAL: usize = 6;
pub const EXACT_TV_CAP_FLOAT: usize = 10;

/// Eigenvalue of the unbiased walk attached to one filling:
/// (1/n) * sum over values m of (j - i + 1)/m, where m sits at box (i, j).
pub fn eig_unbiased(t: &Tableau) -> BigRational {
    eig_weighted(t, &WeightFunction::Unbiased).unwrap()
}

/// Weighted eigenvalue (1/N_w) * sum over boxes (j-i+1) w(T(i,j))/T(i,j).
///
/// Computed twice, iterating boxes and iterating values, and the two sums are
/// asserted equal before returning.
pub fn eig_weighted(t: &Tableau, w: &WeightFunction) -> Result<BigRational> {
    let n = t.n();
    if n == 0 {
        return Err(Error::Domain("empty tableau".to_string()));
    }
    let total = CumulativeWeight::new(n, w)?.total().clone();

    let mut by_boxes = ratio(0, 1);
    for (i, row) in t.rows().iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            let sc = j as i64 - i as i64 + 1;
            by_boxes += ratio(sc, m as i64) * w.exact_weight(m)?;
        }
    }

    let mut by_values = ratio(0, 1);
    for (m, &(i, j)) in t.positions_by_value().iter().enumerate() {
        let sc = j as i64 - i as i64 + 1;
        by_values += ratio(sc, (m + 1) as i64) * w.exact_weight(m + 1)?;
    }
    assert_eq!(by_boxes, by_values, "eigenvalue sum forms disagree");

    Ok(by_boxes / total)
}

/// One spectral line: the eigenvalue of a standard tableau, carried with
/// multiplicity d_lambda.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueRecord {
    pub shape: Partition,
    pub tableau_index: usize,
    pub value: BigRational,
    pub multiplicity: u64,
}

/// The full spectrum of the walk on S_n: one record per standard tableau,
/// shapes in descending lexicographic order.
#[derive(Clone, Debug)]
pub struct SpectrumSummary {
    n: usize,
    weight: String,
    records: Vec<EigenvalueRecord>,
}

impl SpectrumSummary {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight_label(&self) -> &str {
        &self.weight
    }

    pub fn records(&self) -> &[EigenvalueRecord] {
        &self.records
    }

    /// Total eigenvalue count including multiplicity: must be n!.
    pub fn total_multiplicity(&self) -> u64 {
        self.records.iter().map(|r| r.multiplicity).sum()
    }

    /// Sum of eigenvalues with multiplicity: the trace of the transition
    /// matrix, i.e. n! times the step probability of the identity.
    pub fn trace(&self) -> BigRational {
        self.records.iter().fold(ratio(0, 1), |acc, r| {
            acc + &r.value * BigRational::from_integer(BigInt::from(r.multiplicity))
        })
    }

    /// All eigenvalues as floats with multiplicity, ascending.
    pub fn expand_f64(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_multiplicity() as usize);
        for r in &self.records {
            let v = Scalar::to_f64(&r.value);
            for _ in 0..r.multiplicity {
                out.push(v);
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    /// CSV dump: `shape,tableau_index,eigenvalue,multiplicity`, eigenvalues
    /// as exact fractions, shapes quoted.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "shape,tableau_index,eigenvalue,multiplicity")?;
        for r in &self.records {
            writeln!(
                out,
                "\"{}\",{},{},{}",
                r.shape.render(),
                r.tableau_index,
                r.value.render(),
                r.multiplicity
            )?;
        }
        Ok(())
    }
}

/// Computes every eigenvalue of the weighted walk on S_n via standard
/// tableaux. Capped at n <= 14 by tableau enumeration.
pub fn full_spectrum(n: usize, w: &WeightFunction) -> Result<SpectrumSummary> {
    if n == 0 || n > SYT_CAP {
        return Err(Error::CapExceeded {
            what: "full spectrum",
            n,
            cap: SYT_CAP,
        });
    }
    let mut records = Vec::new();
    for shape in crate::tableaux::partitions(n) {
        let mult = shape.dimension();
        let mut index = 0usize;
        let mut err = None;
        for_each_syt(&shape, |t| {
            if err.is_some() {
                return;
            }
            match eig_weighted(t, w) {
                Ok(value) => records.push(EigenvalueRecord {
                    shape: shape.clone(),
                    tableau_index: index,
                    value,
                    multiplicity: mult,
                }),
                Err(e) => err = Some(e),
            }
            index += 1;
        })?;
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(SpectrumSummary {
        n,
        weight: w.describe(),
        records,
    })
}

/// Eigenvalue term sum_{nontrivial} multiplicity * value^{2t}: four times the
/// squared-TV upper bound at time t.
pub fn l2_bound_from(summary: &SpectrumSummary, t: u32) -> BigRational {
    let n = summary.n();
    summary
        .records
        .iter()
        .filter(|r| r.shape.part(1) != n)
        .fold(ratio(0, 1), |acc, r| {
            acc + r.value.pow(2 * t as i32)
                * BigRational::from_integer(BigInt::from(r.multiplicity))
        })
}

pub fn l2_bound(n: usize, w: &WeightFunction, t: u32) -> Result<BigRational> {
    Ok(l2_bound_from(&full_spectrum(n, w)?, t))
}

/// Relaxed eigenvalue bound for the unbiased walk, computed per partition:
/// eig(column of 1^n)^{2t} + 2 * sum over shapes (other than the trivial one)
/// with nonnegative row-filling eigenvalue of d^2 * eig(row)^{2t}.
///
/// Exact variant; practical for n up to a few dozen shapes-wise.
pub fn l2_bound_relaxed_exact(n: usize, t: u32) -> Result<BigRational> {
    if n == 0 || n > 30 {
        return Err(Error::CapExceeded {
            what: "exact relaxed bound",
            n,
            cap: 30,
        });
    }
    let h = HarmonicCache::new(n);
    let single_column = ratio(2, n as i64) * h.get(n) - ratio(1, 1);
    let mut sum = single_column.pow(2 * t as i32);
    let two = ratio(2, 1);
    for shape in crate::tableaux::partitions(n) {
        if shape.part(1) == n {
            continue;
        }
        let row = special_tableau(&shape, SpecialKind::Row);
        let value = eig_unbiased(&row);
        if value >= ratio(0, 1) {
            let d = BigRational::from_integer(BigInt::from(shape.dimension()));
            sum += &two * &d * &d * value.pow(2 * t as i32);
        }
    }
    Ok(sum)
}

/// Float/log-space version of `l2_bound_relaxed_exact`: memory O(n), one pass
/// over the partitions of n. Runtime is driven by the partition count
/// (~2e8 at n = 100), which bounds the practical range on one core.
pub fn l2_bound_relaxed(n: usize, t: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("empty deck".to_string()));
    }
    let h: Vec<f64> = {
        // h[k] = H_k
        let mut v = Vec::with_capacity(n + 1);
        v.push(0.0);
        for k in 1..=n {
            v.push(v[k - 1] + 1.0 / k as f64);
        }
        v
    };
    let log_fact: Vec<f64> = {
        let mut v = Vec::with_capacity(n + 1);
        v.push(0.0);
        for k in 1..=n {
            v.push(v[k - 1] + (k as f64).ln());
        }
        v
    };
    let single_column = 2.0 * h[n] / n as f64 - 1.0;
    let mut sum = if single_column == 0.0 {
        0.0
    } else {
        (2.0 * t as f64 * single_column.abs().ln()).exp()
    };
    let nf = n as f64;
    for_each_partition(n, |parts| {
        if parts[0] == n {
            return;
        }
        //

        // Row filling eigenvalue: rows laid out consecutively, the box at
        // row i (0-based), column j (1-based) holds value offset + j.
        let mut value = 0.0;
        let mut offset = 0usize;
        for (i, &len) in parts.iter().enumerate() {
            for j in 1..=len {
                value += (j as f64 - i as f64) / (offset + j) as f64;
            }
            offset += len;
        }
        value /= nf;
        if value <= 0.0 {
            return;
        }
        // log d = log n! - sum log hooks; hooks via conjugate prefix counts.
        let mut log_dim = log_fact[n];
        let width = parts[0];
        let mut conj = vec![0usize; width];
        for &len in parts {
            for c in conj.iter_mut().take(len) {
                *c += 1;
            }
        }
        for (i, &len) in parts.iter().enumerate() {
            for j in 0..len {
                let hook = (len - j) + (conj[j] - i) - 1;
                log_dim -= (hook as f64).ln();
            }
        }
        let log_term = std::f64::consts::LN_2 + 2.0 * log_dim + 2.0 * t as f64 * value.ln();
        sum += log_term.exp();
    });
    Ok(sum)
}

/// Total variation distance to uniform after each step t = 0..t_max.
#[derive(Clone, Debug)]
pub struct TvProfile<S: Scalar> {
    pub n: usize,
    pub rows: Vec<(u32, S)>,
}

impl<S: Scalar> TvProfile<S> {
    /// First t with tv <= eps.
    pub fn mixing_time(&self, eps: f64) -> Option<u32> {
        self.rows
            .iter()
            .find(|(_, tv)| tv.to_f64() <= eps)
            .map(|(t, _)| *t)
    }
}

/// Runs the walk's distribution forward and records exact TV to uniform at
/// every step. Degree capped per mode (rational 6, float 10) unless
/// overridden.
pub fn tv_profile<S: Scalar>(
    n: usize,
    w: &WeightFunction,
    t_max: u32,
    cap_override: Option<usize>,
) -> Result<TvProfile<S>> {
    let cap = cap_override.unwrap_or(if S::EXACT {
        EXACT_TV_CAP_RATIONAL
    } else {
        EXACT_TV_CAP_FLOAT
    });
    if n == 0 || n > cap {
        return Err(Error::CapExceeded {
            what: "exact TV profile",
            n,
            cap,
        });
    }
    let g = build_generator::<S>(n, w)?;
    let pi = GroupDistribution::<S>::uniform(n)?;
    let mut d = GroupDistribution::<S>::point_mass(n)?;
    let mut rows = Vec::with_capacity(t_max as usize + 1);
    rows.push((0, tv_distance(&d, &pi)?));
    for t in 1..=t_max {
        d = convolve(&d, &g)?;
        rows.push((t, tv_distance(&d, &pi)?));
    }
    Ok(TvProfile { n, rows })
}

/// Brute-force spectrum of the n! x n! transition matrix (Jacobi rotations),
/// ascending. Capped at n <= 6.
pub fn matrix_spectrum(n: usize, w: &WeightFunction) -> Result<Vec<f64>> {
    if n == 0 || n > oracle::MATRIX_CAP {
        return Err(Error::CapExceeded {
            what: "matrix spectrum",
            n,
            cap: oracle::MATRIX_CAP,
        });
    }
    let g = build_generator::<f64>(n, w)?;
    let m = oracle::transition_matrix(&g);
    oracle::symmetric_eigenvalues(m, crate::perm::factorial(n) as usize)
}

/// 2 H_n / n - 1: the eigenvalue of the single-column shape, the unique
/// negative-most line of the unbiased walk for n >= 5.
pub fn single_column_eigenvalue(n: usize) -> BigRational {
    let h = HarmonicCache::new(n);
    ratio(2, n as i64) * h.get(n) - ratio(1, 1)
}

/// Float view of the cutoff-window upper bound sqrt(relaxed)/2 at time t.
pub fn tv_upper_from_relaxed(n: usize, t: u32) -> Result<f64> {
    Ok(l2_bound_relaxed(n, t)?.sqrt() / 2.0)
}

/// n log n + c n, the natural time scale of the unbiased walk.
pub fn unbiased_time(n: usize, c: f64) -> f64 {
    let nf = n as f64;
    nf * nf.ln() + c * nf
}

/// n log n - n log log n - c n, where the lower bound bites.
pub fn lower_window_time(n: usize, c: f64) -> f64 {
    let nf = n as f64;
    nf * nf.ln() - nf * nf.ln().ln() - c * nf
}

#[allow(unused)]
fn harmonic_sanity(n: usize) -> f64 {
    harmonic_f64(n)
}
