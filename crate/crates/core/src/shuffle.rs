use std::path::Path;

use num::{BigInt, BigRational, One, ToPrimitive};
use rand::Rng;

use crate::dist::SparseGenerator;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::{ratio, Scalar};

/// Weight put on the right hand's position j.
///
/// `Unbiased` is w = 1; `Power(alpha)` is w(j) = j^alpha; `Table` is an
/// explicit positive weight per position, read from a file with one decimal
/// per line.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightFunction {
    Unbiased,
    Power(f64),
    Table(Vec<BigRational>),
}

impl WeightFunction {
    /// Reads a weight table: one positive decimal literal per line; blank
    /// lines ignored. Decimals parse exactly into rationals (e.g. 1.5 = 3/2).
    pub fn table_from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::table_from_str(&text)
    }

    pub fn table_from_str(text: &str) -> Result<Self> {
        let mut weights = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let w = parse_decimal(line).map_err(|e| {
                Error::Parse(format!("weight table line {}: {e}", lineno + 1))
            })?;
            if w <= ratio(0, 1) {
                return Err(Error::InvalidWeight(format!(
                    "weight table line {}: weights must be positive",
                    lineno + 1
                )));
            }
            weights.push(w);
        }
        if weights.is_empty() {
            return Err(Error::InvalidWeight("empty weight table".to_string()));
        }
        Ok(Self::Table(weights))
    }

    /// w(j) as an exact rational.
    ///
    /// Integer exponents give the exact power. A fractional exponent has an
    /// irrational weight, so the f64 value of j^alpha is lifted into Q
    /// exactly instead; every identity that treats the weights as given
    /// (mass normalization, eigenvalue sum forms, bound inequalities) still
    /// holds exactly, with "weight" meaning that rational.
    pub fn exact_weight(&self, j: usize) -> Result<BigRational> {
        if j == 0 {
            return Err(Error::Domain("weight position 0".to_string()));
        }
        match self {
            Self::Unbiased => Ok(ratio(1, 1)),
            Self::Power(alpha) => {
                if alpha.fract() == 0.0 && alpha.abs() <= 64.0 {
                    let e = *alpha as i64;
                    let p = BigInt::from(j).pow(e.unsigned_abs() as u32);
                    Ok(if e >= 0 {
                        BigRational::from_integer(p)
                    } else {
                        BigRational::new(BigInt::one(), p)
                    })
                } else {
                    let w = (j as f64).powf(*alpha);
                    if !w.is_finite() || w <= 0.0 {
                        return Err(Error::InvalidWeight(format!(
                            "{j}^{alpha} is not a positive finite weight"
                        )));
                    }
                    Ok(BigRational::from_float(w).unwrap())
                }
            }
            Self::Table(ws) => ws.get(j - 1).cloned().ok_or_else(|| {
                Error::InvalidWeight(format!(
                    "weight table has {} entries, position {j} requested",
                    ws.len()
                ))
            }),
        }
    }

    /// Label for config echoes.
    pub fn describe(&self) -> String {
        match self {
            Self::Unbiased => "unbiased".to_string(),
            Self::Power(a) => format!("power({a})"),
            Self::Table(ws) => format!("table({})", ws.len()),
        }
    }

    /// The weight function for `alpha`, mapping 0 to `Unbiased`.
    pub fn from_alpha(alpha: f64) -> Self {
        if alpha == 0.0 {
            Self::Unbiased
        } else {
            Self::Power(alpha)
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Self::Unbiased => Some(0.0),
            Self::Power(a) => Some(*a),
            Self::Table(_) => None,
        }
    }
}

fn parse_decimal(s: &str) -> std::result::Result<BigRational, String> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err("empty literal".to_string());
    }
    let digits: String = [int_part, frac_part].concat();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not an unsigned decimal literal: {s:?}"));
    }
    let numer: BigInt = digits.parse().map_err(|e| format!("{e}"))?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(numer, denom))
}

/// Partial sums N_w(k) = w(1) + ... + w(k), exact, with a f64 view used for
/// sampling.
#[derive(Clone, Debug)]
pub struct CumulativeWeight {
    n: usize,
    exact: Vec<BigRational>,
    approx: Vec<f64>,
}

impl CumulativeWeight {
    pub fn new(n: usize, w: &WeightFunction) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("empty deck".to_string()));
        }
        let mut exact = Vec::with_capacity(n);
        let mut acc = ratio(0, 1);
        for j in 1..=n {
            acc += w.exact_weight(j)?;
            exact.push(acc.clone());
        }
        let approx = exact.iter().map(|q| ToPrimitive::to_f64(q).unwrap()).collect();
        Ok(Self { n, exact, approx })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// N_w(k) for 1 <= k <= n.
    pub fn prefix(&self, k: usize) -> &BigRational {
        &self.exact[k - 1]
    }

    /// Total weight N_w(n).
    pub fn total(&self) -> &BigRational {
        &self.exact[self.n - 1]
    }

    pub fn total_f64(&self) -> f64 {
        self.approx[self.n - 1]
    }

    /// Samples the right hand's position: P(r = j) = w(j) / N_w(n).
    pub fn sample_r<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.total_f64();
        // First index with cumulative weight > u.
        match self
            .approx
            .binary_search_by(|c| c.partial_cmp(&u).unwrap())
        {
            Ok(k) => (k + 1).min(self.n - 1) + 1,
            Err(k) => k.min(self.n - 1) + 1,
        }
    }
}

/// One step's hand positions, 1 <= l <= r <= n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HandPair {
    pub l: usize,
    pub r: usize,
}

impl HandPair {
    pub fn new(l: usize, r: usize, n: usize) -> Result<Self> {
        if 1 <= l && l <= r && r <= n {
            Ok(Self { l, r })
        } else {
            Err(Error::Domain(format!(
                "hand pair (l={l}, r={r}) out of range for n={n}"
            )))
        }
    }

    pub fn is_identity_move(&self) -> bool {
        self.l == self.r
    }
}

/// Step distribution of the shuffle: the transposition (i j) carries mass
/// w(j)/(N_w(n) j) for each i < j, and the identity aggregates the l = r
/// cases, totalling sum_j w(j)/(N_w(n) j).
pub fn build_generator<S: Scalar>(n: usize, w: &WeightFunction) -> Result<SparseGenerator<S>> {
    if n == 0 {
        return Err(Error::Domain("empty deck".to_string()));
    }
    let cum = CumulativeWeight::new(n, w)?;
    let total = cum.total().clone();
    let mut identity = ratio(0, 1);
    let mut column_mass = Vec::with_capacity(n);
    for j in 1..=n {
        let m = w.exact_weight(j)? / (&total * BigRational::from_integer(BigInt::from(j)));
        identity += &m;
        column_mass.push(m);
    }
    let mut transpositions = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..n {
        for j in (i + 1)..=n {
            transpositions.push((i, j, S::from_exact(&column_mass[j - 1])));
        }
    }
    SparseGenerator::new(n, S::from_exact(&identity), transpositions)
}

/// Samples one step: r with probability w(r)/N_w(n), then l uniform on 1..=r.
pub fn sample_step<R: Rng + ?Sized>(cum: &CumulativeWeight, rng: &mut R) -> HandPair {
    let r = cum.sample_r(rng);
    let l = rng.random_range(1..=r);
    HandPair { l, r }
}

/// Runs the walk for t steps from the identity and returns the endpoint:
/// the composition of t sampled transpositions (right multiplication).
pub fn walk_sample<R: Rng + ?Sized>(
    cum: &CumulativeWeight,
    t: usize,
    rng: &mut R,
) -> Permutation {
    let n = cum.n();
    let mut word: Vec<u8> = (1..=n as u8).collect();
    for _ in 0..t {
        let pair = sample_step(cum, rng);
        if pair.l != pair.r {
            word.swap(pair.l - 1, pair.r - 1);
        }
    }
    Permutation::from_bytes(word)
}

/// The cutoff location t_{n,alpha}: N_alpha(n)/n^alpha for alpha <= 1 and
/// N_alpha(n)/N_{alpha-1}(n) for alpha >= 1 (the branches agree at alpha = 1).
pub fn cutoff_time(n: usize, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("empty deck".to_string()));
    }
    let sum_pow = |e: f64| -> f64 { (1..=n).map(|j| (j as f64).powf(e)) .sum() };
    let n_alpha = sum_pow(alpha);
    let low = n_alpha / (n as f64).powf(alpha);
    let high = n_alpha / sum_pow(alpha - 1.0);
    if alpha == 1.0 {
        debug_assert_eq!(low, high);
    }
    Ok(if alpha <= 1.0 { low } else { high })
}
