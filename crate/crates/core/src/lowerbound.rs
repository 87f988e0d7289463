//! Coupon-collecting machinery behind the mixing-time lower bound.
//!
//! A counting process dominates the number of cards the shuffle has touched
//! inside a watched segment of the deck (the top segment when the right hand
//! favors low positions, the bottom segment when it favors high ones). Its
//! hitting time of the segment size concentrates, and Chebyshev turns that
//! into an early-hit probability bound. Monte Carlo estimators for
//! fixed-point probabilities are checked against exact convolution oracles on
//! small decks.

use std::f64::consts::PI;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::{convolve, GroupDistribution};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::ratio;
use crate::shuffle::{build_generator, sample_step, CumulativeWeight, WeightFunction};
use crate::spectrum::EXACT_TV_CAP_RATIONAL;

/// Which shuffle regime the counting process dominates.
///
/// The low-exponent variant covers weights j^alpha with alpha <= 1 and
/// watches the top of the deck; the high-exponent variant covers alpha >= 1
/// and watches the bottom. `Unbiased` is the alpha = 0 process with its own,
/// slightly tighter, success masses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CouponKind {
    Unbiased,
    BiasedLow(f64),
    BiasedHigh(f64),
}

impl CouponKind {
    /// The natural kind for the weight j^alpha.
    pub fn from_alpha(alpha: f64) -> Self {
        if alpha == 0.0 {
            Self::Unbiased
        } else if alpha <= 1.0 {
            Self::BiasedLow(alpha)
        } else {
            Self::BiasedHigh(alpha)
        }
    }
}

/// Sum of j^e over 1 <= j <= n.
fn power_sum(n: usize, e: f64) -> f64 {
    (1..=n).map(|j| (j as f64).powf(e)).sum()
}

/// The dominating counting process. State M counts collected cards; each
/// step increments by 0, 1, or 2, and conditioned on moving at all the
/// two-step mass is exactly 1/m, independent of the state.
#[derive(Clone, Debug)]
pub struct CouponProcess {
    n: usize,
    m: f64,
    kind: CouponKind,
    target: usize,
    rate: f64,
    scale: f64,
    up: Vec<f64>,
}

/// One simulated hitting time, with per-state sojourn counts. A sojourn of
/// zero means the state was skipped by a two-step increment; the counts
/// always sum to `steps`.
#[derive(Clone, Debug)]
pub struct HittingSample {
    pub seed: u64,
    pub stream: u64,
    pub steps: u64,
    pub sojourns: Vec<u64>,
}

impl CouponProcess {
    /// Process with the standard threshold divisor m = ln n.
    pub fn new(n: usize, kind: CouponKind) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(
                "counting process needs at least two cards".to_string(),
            ));
        }
        Self::with_divisor(n, (n as f64).ln(), kind)
    }

    /// Process with an explicit threshold divisor m > 1. The watched segment
    /// holds floor(n/m) cards (at least one), and every per-state success
    /// mass must land in (0, 1]; decks too small for the requested regime are
    /// refused rather than clamped.
    pub fn with_divisor(n: usize, m: f64, kind: CouponKind) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(
                "counting process needs at least two cards".to_string(),
            ));
        }
        if !m.is_finite() || m <= 1.0 {
            return Err(Error::Domain(format!(
                "threshold divisor must be finite and exceed 1, got {m}"
            )));
        }
        let nf = n as f64;
        let rate = match kind {
            CouponKind::Unbiased => m / ((m - 1.0) * nf),
            CouponKind::BiasedLow(a) => {
                if !a.is_finite() || a > 1.0 {
                    return Err(Error::Domain(format!(
                        "low-exponent process needs alpha <= 1, got {a}"
                    )));
                }
                (m / (m - 1.0)).powf(2.0 - a) * nf.powf(a) / power_sum(n, a)
            }
            CouponKind::BiasedHigh(a) => {
                if !a.is_finite() || a < 1.0 {
                    return Err(Error::Domain(format!(
                        "high-exponent process needs alpha >= 1, got {a}"
                    )));
                }
                m / (m - 1.0) * power_sum(n, a - 1.0) / power_sum(n, a)
            }
        };
        let target = ((nf / m).floor() as usize).max(1);
        let up: Vec<f64> = (0..target).map(|i| rate * (nf / m - i as f64)).collect();
        for (i, &p) in up.iter().enumerate() {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Domain(format!(
                    "success mass {p:.6} at state {i} is not a probability; \
                     the deck is too small for this regime"
                )));
            }
        }
        let scale = match kind {
            CouponKind::Unbiased => nf,
            CouponKind::BiasedLow(a) => power_sum(n, a) / nf.powf(a),
            CouponKind::BiasedHigh(a) => power_sum(n, a) / power_sum(n, a - 1.0),
        };
        Ok(Self {
            n,
            m,
            kind,
            target,
            rate,
            scale,
            up,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Threshold divisor m.
    pub fn divisor(&self) -> f64 {
        self.m
    }

    pub fn kind(&self) -> CouponKind {
        self.kind
    }

    /// Number of cards to collect: floor(n/m), at least 1.
    pub fn target(&self) -> usize {
        self.target
    }

    /// Probability of moving at all from state i.
    pub fn up_probability(&self, i: usize) -> f64 {
        let remaining = (self.n as f64 / self.m - i as f64).max(0.0);
        (self.rate * remaining).min(1.0)
    }

    /// Step masses (stay, one up, two up) from state i. Once i reaches n/m
    /// nothing is left to collect and the state freezes.
    pub fn step_probs(&self, i: usize) -> (f64, f64, f64) {
        let up = self.up_probability(i);
        let p2 = up / self.m;
        let p1 = up - p2;
        (1.0 - up, p1, p2)
    }

    /// Expectation of the dominated hitting time: sum of (m-1)/(m p_i).
    pub fn expected_hitting(&self) -> f64 {
        self.up.iter().map(|&p| (self.m - 1.0) / (self.m * p)).sum()
    }

    /// Exact expectation of the stepped chain's hitting time. State i is
    /// visited with probability q_i where q_0 = 1 and q_i = 1 - q_{i-1}/m
    /// (a state is skipped exactly when the previous one exits by two), and
    /// a visited state holds the chain for 1/p_i steps on average. Always
    /// at least `expected_hitting`, since q_i >= 1 - 1/m.
    pub fn expected_hitting_stepped(&self) -> f64 {
        let mut q = 1.0;
        let mut total = 0.0;
        for &p in &self.up {
            total += q / p;
            q = 1.0 - q / self.m;
        }
        total
    }

    /// Variance bound for the dominated hitting time: sum of 1/p_i^2.
    pub fn variance_bound(&self) -> f64 {
        self.up.iter().map(|&p| 1.0 / (p * p)).sum()
    }

    /// The early-hit bound: hitting before `early_window(c)` has probability
    /// at most this value. The unbiased and high-exponent processes need
    /// c > 2; the low-exponent process needs c > 3 - alpha.
    pub fn chebyshev_bound(&self, c: f64) -> Result<f64> {
        let slack = match self.kind {
            CouponKind::Unbiased | CouponKind::BiasedHigh(_) => c - 2.0,
            CouponKind::BiasedLow(a) => c - (3.0 - a),
        };
        if !(slack > 0.0) {
            return Err(Error::Domain(format!(
                "chebyshev slack requires c above the regime threshold, got c = {c}"
            )));
        }
        Ok(PI * PI / (6.0 * slack * slack))
    }

    /// The time the Chebyshev bound refers to: scale (ln n - ln ln n - c),
    /// where scale is n for the unbiased process, N_alpha/n^alpha for the
    /// low-exponent one, and N_alpha/N_{alpha-1} for the high-exponent one.
    pub fn early_window(&self, c: f64) -> f64 {
        let ln_n = (self.n as f64).ln();
        self.scale * (ln_n - ln_n.ln() - c)
    }

    fn run_chain<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, Vec<u64>) {
        let mut sojourns = vec![0u64; self.target];
        let mut steps = 0u64;
        let mut state = 0usize;
        while state < self.target {
            let up = self.up[state];
            let u: f64 = rng.random();
            sojourns[state] += 1;
            steps += 1;
            if u < up / self.m {
                state = (state + 2).min(self.target);
            } else if u < up {
                state += 1;
            }
        }
        (steps, sojourns)
    }

    /// Steps the chain to the target once, on the given seed and stream.
    pub fn sample_hitting(&self, seed: u64, stream: u64) -> HittingSample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let (steps, sojourns) = self.run_chain(&mut rng);
        HittingSample {
            seed,
            stream,
            steps,
            sojourns,
        }
    }

    /// Hitting times of `trials` independent chains (streams 0..trials of
    /// the seed). Trials are merged by collection only, so the result does
    /// not depend on scheduling.
    pub fn hitting_times(&self, trials: u64, seed: u64) -> Vec<u64> {
        (0..trials)
            .into_par_iter()
            .map(|stream| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(stream);
                self.run_chain(&mut rng).0
            })
            .collect()
    }

    /// Samples of the dominated hitting time: an independent sojourn per
    /// state, zero with probability 1/m and geometric with success p_i
    /// otherwise. Its mean is `expected_hitting` exactly.
    pub fn dominated_hitting_times(&self, trials: u64, seed: u64) -> Vec<u64> {
        (0..trials)
            .into_par_iter()
            .map(|stream| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(stream);
                let mut total = 0u64;
                for &p in &self.up {
                    let skip: f64 = rng.random();
                    if skip < 1.0 / self.m {
                        continue;
                    }
                    let v: f64 = rng.random();
                    let k = ((1.0 - v).ln() / (1.0 - p).ln()).ceil().max(1.0);
                    total += k as u64;
                }
                total
            })
            .collect()
    }
}

/// Mean and standard error of the mean for a sample of times.
pub fn sample_mean_stderr(xs: &[u64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / k;
    let var = xs
        .iter()
        .map(|&x| (x as f64 - mean).powi(2))
        .sum::<f64>()
        / (k - 1.0).max(1.0);
    (mean, (var / k).sqrt())
}

/// Size of the watched segment: floor(n/ln n), at least 1.
pub fn watched_size(n: usize) -> usize {
    ((n as f64 / (n as f64).ln()).floor() as usize).clamp(1, n)
}

/// Watched positions (inclusive): the top segment unless the weight puts
/// exponent above 1 on the right hand, which favors high positions and moves
/// the slow-to-touch cards to the bottom.
pub fn watched_segment(n: usize, w: &WeightFunction) -> (usize, usize) {
    let v = watched_size(n);
    if w.alpha().is_some_and(|a| a > 1.0) {
        (1, v)
    } else {
        (n - v + 1, n)
    }
}

/// Monte Carlo estimate of the probability that the deck has a fixed point
/// in the watched segment after t shuffles.
#[derive(Clone, Debug)]
pub struct FixedPointStat {
    pub n: usize,
    pub t: u32,
    pub trials: u64,
    /// Inclusive position range watched.
    pub segment: (usize, usize),
    pub estimate: f64,
    pub stderr: f64,
    /// Threshold divisor m = ln n; the stationary mass of the event is at
    /// most 1/m.
    pub divisor: f64,
}

impl FixedPointStat {
    /// The total-variation lower bound this estimate witnesses: the event
    /// probability minus the stationary ceiling 1/m.
    pub fn lower_bound_estimate(&self) -> f64 {
        self.estimate - 1.0 / self.divisor
    }
}

/// Runs `trials` seeded walks of t steps each and counts decks with a fixed
/// point in the watched segment. Binomial standard error.
pub fn fixed_point_estimate(
    n: usize,
    w: &WeightFunction,
    t: u32,
    trials: u64,
    seed: u64,
) -> Result<FixedPointStat> {
    if n < 2 {
        return Err(Error::Domain(
            "watched-segment statistics need at least two cards".to_string(),
        ));
    }
    if trials == 0 {
        return Err(Error::Domain("at least one trial required".to_string()));
    }
    let (lo, hi) = watched_segment(n, w);
    let cum = CumulativeWeight::new(n, w)?;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let mut deck: Vec<u32> = (1..=n as u32).collect();
            for _ in 0..t {
                let pair = sample_step(&cum, &mut rng);
                deck.swap(pair.l - 1, pair.r - 1);
            }
            u64::from((lo..=hi).any(|p| deck[p - 1] == p as u32))
        })
        .sum();
    let estimate = hits as f64 / trials as f64;
    let stderr = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok(FixedPointStat {
        n,
        t,
        trials,
        segment: (lo, hi),
        estimate,
        stderr,
        divisor: (n as f64).ln(),
    })
}

/// Exact probability of a fixed point in the watched segment after t steps,
/// by full convolution over the group. Only for small decks.
pub fn exact_b_probability(n: usize, w: &WeightFunction, t: u32) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::Domain(
            "watched-segment statistics need at least two cards".to_string(),
        ));
    }
    if n > EXACT_TV_CAP_RATIONAL {
        return Err(Error::CapExceeded {
            what: "exact fixed-point probability",
            n,
            cap: EXACT_TV_CAP_RATIONAL,
        });
    }
    let (lo, hi) = watched_segment(n, w);
    let generator = build_generator::<BigRational>(n, w)?;
    let mut dist = GroupDistribution::<BigRational>::point_mass(n)?;
    for _ in 0..t {
        dist = convolve(&dist, &generator)?;
    }
    let mut acc = ratio(0, 1);
    for r in 0..dist.order() as u64 {
        let p = Permutation::unrank(n, r)?;
        if (lo..=hi).any(|pos| p.image_of(pos) == pos) {
            acc += dist.prob_by_rank(r);
        }
    }
    Ok(acc)
}

fn big_factorial(k: usize) -> BigInt {
    (2..=k).fold(BigInt::from(1), |acc, j| acc * BigInt::from(j))
}

fn binomial(v: usize, j: usize) -> BigInt {
    big_factorial(v) / (big_factorial(j) * big_factorial(v - j))
}

/// Stationary probability of a fixed point in the watched segment, by
/// inclusion-exclusion over which watched positions are fixed. Uniform
/// measure is exchangeable, so only the segment size matters; the value is
/// at most 1/ln n.
pub fn stationary_b_probability(n: usize) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::Domain(
            "watched-segment statistics need at least two cards".to_string(),
        ));
    }
    let v = watched_size(n);
    let nf = big_factorial(n);
    let mut acc = ratio(0, 1);
    for j in 1..=v {
        let term = BigRational::new(binomial(v, j) * big_factorial(n - j), nf.clone());
        if j % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}
