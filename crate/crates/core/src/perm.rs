use crate::error::{Error, Result};

/// Largest degree whose ranks fit in u64 (20! < 2^64).
pub const MAX_DEGREE: usize = 20;

const FACTORIALS: [u64; MAX_DEGREE + 1] = {
    let mut f = [1u64; MAX_DEGREE + 1];
    let mut i = 1;
    while i <= MAX_DEGREE {
        f[i] = f[i - 1] * i as u64;
        i += 1;
    }
    f
};

/// n! for n <= 20.
pub fn factorial(n: usize) -> u64 {
    FACTORIALS[n]
}

/// A permutation of {1..n} in one-line notation: position p holds card
/// `image_of(p)`. Values are 1-indexed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n as u8).collect(),
        }
    }

    /// The transposition (i j), 1 <= i < j <= n.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::Domain(format!(
                "transposition ({i} {j}) out of range for S_{n}"
            )));
        }
        let mut p = Self::identity(n);
        p.images.swap(i - 1, j - 1);
        Ok(p)
    }

    /// Validates that `images` is a bijection on {1..n}.
    pub fn from_one_line(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::CapExceeded {
                what: "Permutation",
                n,
                cap: MAX_DEGREE,
            });
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::Domain(format!(
                    "not a bijection on 1..={n}: {images:?}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Self {
            images: images.into_iter().map(|v| v as u8).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of position p (1-indexed).
    pub fn image_of(&self, p: usize) -> usize {
        self.images[p - 1] as usize
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize).collect()
    }

    pub(crate) fn from_bytes(images: Vec<u8>) -> Self {
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }

    /// Composition "apply q first, then p": (p.compose(q))(x) = p(q(x)).
    pub fn compose(&self, q: &Self) -> Result<Self> {
        if self.degree() != q.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: q.degree(),
            });
        }
        let images = q
            .images
            .iter()
            .map(|&qx| self.images[qx as usize - 1])
            .collect();
        Ok(Self { images })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.degree()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v as usize - 1] = (k + 1) as u8;
        }
        Self { images }
    }

    /// Lexicographic rank of the one-line word among all of S_n, 0-based.
    pub fn rank(&self) -> u64 {
        rank_bytes(&self.images)
    }

    /// Inverse of `rank`.
    pub fn unrank(n: usize, rank: u64) -> Result<Self> {
        if n > MAX_DEGREE || rank >= factorial(n) {
            return Err(Error::RankOutOfRange { rank, n });
        }
        let mut images = vec![0u8; n];
        unrank_into(n, rank, &mut images);
        Ok(Self { images })
    }

    /// Positions p with p(p) = p, 1-indexed.
    pub fn fixed_points(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(k, &v)| v as usize == k + 1)
            .map(|(k, _)| k + 1)
            .collect()
    }

    /// Cycle lengths in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                len += 1;
                k = self.images[k] as usize - 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn sign(&self) -> i64 {
        let transpositions: usize = self.cycle_type().iter().map(|c| c - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Lehmer-code rank of a one-line word (1-indexed values), 0-based result.
pub(crate) fn rank_bytes(images: &[u8]) -> u64 {
    let n = images.len();
    let mut seen: u32 = 0;
    let mut acc: u64 = 0;
    for (k, &v) in images.iter().enumerate() {
        let b = v as u32 - 1;
        let digit = b - (seen & ((1u32 << b) - 1)).count_ones();
        seen |= 1 << b;
        acc = acc * (n - k) as u64 + digit as u64;
    }
    acc
}

/// Writes the one-line word of the given rank into `out` (1-indexed values).
pub(crate) fn unrank_into(n: usize, mut rank: u64, out: &mut [u8]) {
    let mut unused: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for (k, slot) in out.iter_mut().enumerate().take(n) {
        let f = FACTORIALS[n - 1 - k];
        let mut digit = (rank / f) as u32;
        rank %= f;
        let mut m = unused;
        while digit > 0 {
            m &= m - 1;
            digit -= 1;
        }
        let b = m.trailing_zeros();
        unused &= !(1 << b);
        *slot = (b + 1) as u8;
    }
}
