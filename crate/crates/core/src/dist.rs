use std::io::Write;

use num::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::{factorial, rank_bytes, unrank_into, Permutation};
use crate::scalar::{ratio, Scalar};

/// Float-mode tolerance for "sums to one" style checks.
pub const FLOAT_SUM_TOL: f64 = 1e-12;

/// Probability distribution on S_n, indexed by lexicographic rank.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupDistribution<S: Scalar> {
    n: usize,
    probs: Vec<S>,
}

impl<S: Scalar> GroupDistribution<S> {
    /// Point mass at the identity.
    pub fn point_mass(n: usize) -> Result<Self> {
        let order = checked_order(n)?;
        let mut probs = vec![S::zero(); order];
        let id_rank = Permutation::identity(n).rank() as usize;
        probs[id_rank] = S::one();
        Ok(Self { n, probs })
    }

    /// Uniform (stationary) distribution.
    pub fn uniform(n: usize) -> Result<Self> {
        let order = checked_order(n)?;
        let p = S::from_exact(&BigRational::new(1.into(), factorial(n).into()));
        Ok(Self {
            n,
            probs: vec![p; order],
        })
    }

    pub fn from_probs(n: usize, probs: Vec<S>) -> Result<Self> {
        let order = checked_order(n)?;
        if probs.len() != order {
            return Err(Error::InvalidDistribution(format!(
                "expected {order} probabilities for S_{n}, got {}",
                probs.len()
            )));
        }
        let zero = S::zero();
        if probs.iter().any(|p| *p < zero) {
            return Err(Error::InvalidDistribution(
                "negative probability".to_string(),
            ));
        }
        let sum = probs.iter().fold(S::zero(), |acc, p| acc.add(p));
        if !sums_to_one(&sum) {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum:?}, not 1"
            )));
        }
        Ok(Self { n, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.probs.len()
    }

    pub fn prob_by_rank(&self, rank: u64) -> &S {
        &self.probs[rank as usize]
    }

    pub fn prob(&self, p: &Permutation) -> &S {
        &self.probs[p.rank() as usize]
    }

    pub fn probs(&self) -> &[S] {
        &self.probs
    }

    /// CSV dump: header `rank,probability`, one row per permutation in rank
    /// order. Probabilities render as `p/q` in rational mode, decimals in
    /// float mode.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "rank,probability")?;
        for (rank, p) in self.probs.iter().enumerate() {
            writeln!(out, "{rank},{}", p.render())?;
        }
        Ok(())
    }
}

fn checked_order(n: usize) -> Result<usize> {
    // 12! = 479M entries is already ~4GB of f64; refuse beyond it.
    if n == 0 || n > 12 {
        return Err(Error::CapExceeded {
            what: "GroupDistribution",
            n,
            cap: 12,
        });
    }
    Ok(factorial(n) as usize)
}

fn sums_to_one<S: Scalar>(sum: &S) -> bool {
    if S::EXACT {
        *sum == S::one()
    } else {
        (sum.to_f64() - 1.0).abs() <= FLOAT_SUM_TOL
    }
}

/// Sparse step distribution of a transposition shuffle: the identity plus
/// transpositions (i j), each with positive probability, summing to one.
/// The identity's mass is stored aggregated, not per hand pair.
#[derive(Clone, Debug)]
pub struct SparseGenerator<S: Scalar> {
    n: usize,
    identity_mass: S,
    transpositions: Vec<(u8, u8, S)>,
}

impl<S: Scalar> SparseGenerator<S> {
    /// `transpositions` are (i, j, mass) with 1 <= i < j <= n, distinct pairs,
    /// positive masses; total mass including `identity_mass` must be one.
    pub fn new(
        n: usize,
        identity_mass: S,
        mut transpositions: Vec<(usize, usize, S)>,
    ) -> Result<Self> {
        let zero = S::zero();
        if identity_mass < zero {
            return Err(Error::InvalidDistribution(
                "negative identity mass".to_string(),
            ));
        }
        transpositions.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut sum = identity_mass.clone();
        let mut prev = (0usize, 0usize);
        for &(i, j, ref mass) in &transpositions {
            if !(1 <= i && i < j && j <= n) {
                return Err(Error::Domain(format!(
                    "support entry ({i} {j}) out of range for S_{n}"
                )));
            }
            if (i, j) == prev {
                return Err(Error::InvalidDistribution(format!(
                    "duplicate support entry ({i} {j})"
                )));
            }
            prev = (i, j);
            if *mass <= zero {
                return Err(Error::InvalidDistribution(format!(
                    "non-positive mass at ({i} {j})"
                )));
            }
            sum = sum.add(mass);
        }
        if !sums_to_one(&sum) {
            return Err(Error::InvalidDistribution(format!(
                "generator masses sum to {sum:?}, not 1"
            )));
        }
        Ok(Self {
            n,
            identity_mass,
            transpositions: transpositions
                .into_iter()
                .map(|(i, j, m)| (i as u8, j as u8, m))
                .collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn identity_mass(&self) -> &S {
        &self.identity_mass
    }

    /// Mass of the transposition (i j), if in the support.
    pub fn transposition_mass(&self, i: usize, j: usize) -> Option<&S> {
        self.transpositions
            .iter()
            .find(|&&(a, b, _)| (a as usize, b as usize) == (i, j))
            .map(|(_, _, m)| m)
    }

    /// Support as explicit permutations, identity first, then transpositions
    /// in lexicographic (i, j) order.
    pub fn entries(&self) -> Vec<(Permutation, S)> {
        let mut out = vec![(Permutation::identity(self.n), self.identity_mass.clone())];
        for &(i, j, ref m) in &self.transpositions {
            out.push((
                Permutation::transposition(self.n, i as usize, j as usize).unwrap(),
                m.clone(),
            ));
        }
        out
    }

    pub(crate) fn transpositions(&self) -> &[(u8, u8, S)] {
        &self.transpositions
    }

    /// Step probability of an arbitrary permutation (zero off the support).
    pub fn mass_of(&self, p: &Permutation) -> S {
        if p.is_identity() {
            return self.identity_mass.clone();
        }
        let moved: Vec<usize> = (1..=self.n).filter(|&k| p.image_of(k) != k).collect();
        if moved.len() == 2 && p.image_of(moved[0]) == moved[1] {
            if let Some(m) = self.transposition_mass(moved[0], moved[1]) {
                return m.clone();
            }
        }
        S::zero()
    }
}

/// Convolution (d * g)(sigma) = sum over support tau of d(sigma tau^{-1}) g(tau):
/// the distribution after one more right-multiplication step by g.
pub fn convolve<S: Scalar>(
    d: &GroupDistribution<S>,
    g: &SparseGenerator<S>,
) -> Result<GroupDistribution<S>> {
    let n = d.n();
    if n != g.n() {
        return Err(Error::DegreeMismatch {
            left: n,
            right: g.n(),
        });
    }
    let order = d.order();
    let taus = g.transpositions();
    // sigma * (i j) has the one-line entries at positions i, j swapped, and
    // transpositions are involutions, so d(sigma tau^{-1}) = d[swapped rank].
    let probs: Vec<S> = (0..order)
        .into_par_iter()
        .map(|r| {
            let mut buf = [0u8; crate::perm::MAX_DEGREE];
            let word = &mut buf[..n];
            unrank_into(n, r as u64, word);
            let mut acc = d.probs[r].mul(&g.identity_mass);
            for &(i, j, ref mass) in taus {
                word.swap(i as usize - 1, j as usize - 1);
                let s = rank_bytes(word) as usize;
                word.swap(i as usize - 1, j as usize - 1);
                acc = acc.add(&d.probs[s].mul(mass));
            }
            acc
        })
        .collect();
    Ok(GroupDistribution { n, probs })
}

/// Total variation distance (1/2) sum |a - b|.
pub fn tv_distance<S: Scalar>(
    a: &GroupDistribution<S>,
    b: &GroupDistribution<S>,
) -> Result<S> {
    if a.n() != b.n() {
        return Err(Error::DegreeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let half = S::from_exact(&ratio(1, 2));
    let sum = a
        .probs
        .par_iter()
        .zip(b.probs.par_iter())
        .fold(S::zero, |acc, (x, y)| acc.add(&x.sub(y).abs()))
        .reduce(S::zero, |x, y| x.add(&y));
    Ok(sum.mul(&half))
}
