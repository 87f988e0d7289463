//! Formal rational combinations of words, the permutation action on their
//! positions, and the operators the eigenvector lifting is built from:
//! the walk operator Q, the appending operator, and the letter switch.

use std::collections::BTreeMap;

use num::BigRational;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::{ratio, Scalar};
use crate::shuffle::{CumulativeWeight, WeightFunction};
use crate::tableaux::{enumerate_syt, Partition, Tableau};

pub type Word = Vec<u8>;

/// A finite formal sum of words with rational coefficients. Zero
/// coefficients are never stored, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WordVector {
    terms: BTreeMap<Word, BigRational>,
}

impl WordVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(word: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(word, ratio(1, 1));
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[u8]) -> BigRational {
        self.terms.get(word).cloned().unwrap_or_else(|| ratio(0, 1))
    }

    /// Length of the words in the support; None when the vector is zero.
    /// All words in one vector have the same length by construction.
    pub fn word_length(&self) -> Option<usize> {
        self.terms.keys().next().map(|w| w.len())
    }

    pub fn add_term(&mut self, word: Word, coeff: BigRational) {
        use std::collections::btree_map::Entry;
        if Scalar::is_zero(&coeff) {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if Scalar::is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: &BigRational) {
        if Scalar::is_zero(scale) {
            return;
        }
        for (word, coeff) in &other.terms {
            self.add_term(word.clone(), coeff * scale);
        }
    }

    pub fn scale(&mut self, scale: &BigRational) {
        if Scalar::is_zero(scale) {
            self.terms.clear();
            return;
        }
        for coeff in self.terms.values_mut() {
            *coeff *= scale;
        }
    }

    /// Sum of absolute coefficient values: zero exactly when the vector is.
    pub fn l1_norm(&self) -> BigRational {
        self.terms
            .values()
            .fold(ratio(0, 1), |acc, c| acc + num::Signed::abs(c))
    }

    /// Letter counts: entry a-1 holds the number of occurrences of letter a
    /// across any single word (identical for every word in the support when
    /// the vector was built by the operators in this module).
    pub fn evaluation(&self) -> Option<Vec<usize>> {
        let word = self.terms.keys().next()?;
        let max = *word.iter().max()? as usize;
        let mut counts = vec![0usize; max];
        for &letter in word {
            counts[letter as usize - 1] += 1;
        }
        Some(counts)
    }
}

/// Permutes word positions: the letter at position i moves to position
/// sigma(i).
pub fn place_permute_word(word: &[u8], sigma: &Permutation) -> Result<Word> {
    if sigma.degree() != word.len() {
        return Err(Error::DegreeMismatch {
            left: sigma.degree(),
            right: word.len(),
        });
    }
    let mut out = vec![0u8; word.len()];
    for (i, &letter) in word.iter().enumerate() {
        out[sigma.image_of(i + 1) - 1] = letter;
    }
    Ok(out)
}

pub fn place_permute(v: &WordVector, sigma: &Permutation) -> Result<WordVector> {
    let mut out = WordVector::zero();
    for (word, coeff) in v.terms() {
        out.add_term(place_permute_word(word, sigma)?, coeff.clone());
    }
    Ok(out)
}

/// The word of a tableau: position T(i,j) holds the row index i.
pub fn word_of_tableau(t: &Tableau) -> Word {
    let mut word = vec![0u8; t.n()];
    for (m, &(i, _)) in t.positions_by_value().iter().enumerate() {
        word[m] = i as u8;
    }
    word
}

/// Signed sum of the column-stabilizer orbit of the tableau's word: the
/// standard spanning vectors of the irreducible inside the word space.
pub fn polytabloid(t: &Tableau) -> WordVector {
    // Columns as lists of values; row index of the value in row r is r.
    let shape = t.shape();
    let width = shape.part(1);
    let mut columns: Vec<Vec<(usize, usize)>> = vec![Vec::new(); width];
    for (i, row) in t.rows().iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            columns[j].push((i, v));
        }
    }
    let base = word_of_tableau(t);
    let mut out = WordVector::zero();
    // Iterate over the product of per-column permutations via a digit
    // counter; each column of depth d contributes d! assignments.
    let depths: Vec<usize> = columns.iter().map(|c| c.len()).collect();
    let mut counters = vec![0u64; columns.len()];
    loop {
        let mut word = base.clone();
        let mut sign = 1i64;
        for (c, col) in columns.iter().enumerate() {
            let perm = nth_permutation(depths[c], counters[c]);
            sign *= perm_sign(&perm);
            for (slot, &(_, value)) in col.iter().enumerate() {
                // The value in row index `slot` of this column receives the
                // row label of the entry the permutation moves into it.
                word[value - 1] = (col[perm[slot]].0 + 1) as u8;
            }
        }
        out.add_term(word, ratio(sign, 1));
        // Advance the mixed-radix counter over column permutations.
        let mut c = 0;
        loop {
            if c == columns.len() {
                return out;
            }
            counters[c] += 1;
            if counters[c] < factorial_u64(depths[c]) {
                break;
            }
            counters[c] = 0;
            c += 1;
        }
    }
}

fn factorial_u64(d: usize) -> u64 {
    (1..=d as u64).product::<u64>().max(1)
}

/// The k-th permutation of 0..d in lexicographic order.
fn nth_permutation(d: usize, mut k: u64) -> Vec<usize> {
    let mut items: Vec<usize> = (0..d).collect();
    let mut out = Vec::with_capacity(d);
    for pos in (0..d).rev() {
        let f = factorial_u64(pos);
        let idx = (k / f) as usize;
        k %= f;
        out.push(items.remove(idx));
    }
    out
}

fn perm_sign(perm: &[usize]) -> i64 {
    let mut inversions = 0;
    for a in 0..perm.len() {
        for b in (a + 1)..perm.len() {
            if perm[a] > perm[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Spanning eigvector seeds: one polytabloid per standard tableau of the
/// shape. These are linearly independent.
pub fn specht_basis(shape: &Partition) -> Result<Vec<WordVector>> {
    Ok(enumerate_syt(shape)?.iter().map(polytabloid).collect())
}

/// Rank of a family of word vectors over the rationals, by Gaussian
/// elimination on their coefficients.
pub fn rank(vectors: &[WordVector]) -> usize {
    use std::collections::BTreeSet;
    let support: BTreeSet<&Word> = vectors.iter().flat_map(|v| v.terms.keys()).collect();
    let cols: Vec<&Word> = support.into_iter().collect();
    let mut rows: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|v| cols.iter().map(|w| v.coeff(w.as_slice())).collect())
        .collect();
    let mut rank = 0usize;
    for col in 0..cols.len() {
        let Some(pivot) = (rank..rows.len()).find(|&r| !Scalar::is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = ratio(1, 1) / rows[rank][col].clone();
        for c in col..cols.len() {
            let scaled = &rows[rank][c] * &inv;
            rows[rank][c] = scaled;
        }
        for r in 0..rows.len() {
            if r == rank || Scalar::is_zero(&rows[r][col]) {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in col..cols.len() {
                let updated = &rows[r][c] - &factor * &rows[rank][c];
                rows[r][c] = updated;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// The walk operator on length-n words: pairs i <= j <= n act by the place
/// transposition (i j) with coefficient n w(j) / (N_w(n) j); the i = j terms
/// aggregate on the identity. Eigenvalues of Q are n times the walk's.
pub fn q_apply(n: usize, w: &WeightFunction, v: &WordVector) -> Result<WordVector> {
    if let Some(len) = v.word_length() {
        if len != n {
            return Err(Error::Domain(format!(
                "operator degree {n} does not match word length {len}"
            )));
        }
    }
    let total = CumulativeWeight::new(n, w)?.total().clone();
    let mut out = WordVector::zero();
    let mut identity_coeff = ratio(0, 1);
    for j in 1..=n {
        let cj = ratio(n as i64, j as i64) * w.exact_weight(j)? / &total;
        identity_coeff += &cj;
        for i in 1..j {
            for (word, coeff) in v.terms() {
                let mut swapped = word.clone();
                swapped.swap(i - 1, j - 1);
                out.add_term(swapped, coeff * &cj);
            }
        }
    }
    out.add_scaled(v, &identity_coeff);
    Ok(out)
}

/// Appends the letter a to every word.
pub fn phi(a: u8, v: &WordVector) -> WordVector {
    let mut out = WordVector::zero();
    for (word, coeff) in v.terms() {
        let mut longer = word.clone();
        longer.push(a);
        out.add_term(longer, coeff.clone());
    }
    out
}

/// Switches letters: for each occurrence of b in each word, replace that one
/// occurrence by a and sum. With b = a this scales each word by its count
/// of a.
pub fn theta(b: u8, a: u8, v: &WordVector) -> WordVector {
    let mut out = WordVector::zero();
    for (word, coeff) in v.terms() {
        for (pos, &letter) in word.iter().enumerate() {
            if letter != b {
                continue;
            }
            let mut switched = word.clone();
            switched[pos] = a;
            out.add_term(switched, coeff.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab(rows: &[&[usize]]) -> Tableau {
        Tableau::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn w(list: &[u8]) -> Word {
        list.to_vec()
    }

    #[test]
    fn place_permutation_moves_letters_to_images() {
        // The 3-cycle 1->2->3->1 carries word (2,3,2) to (2,2,3).
        let sigma = Permutation::from_one_line(vec![2, 3, 1]).unwrap();
        assert_eq!(
            place_permute_word(&[2, 3, 2], &sigma).unwrap(),
            vec![2, 2, 3]
        );
        // Composition of actions matches action of composition.
        let tau = Permutation::from_one_line(vec![1, 3, 2]).unwrap();
        let once = place_permute_word(&[1, 2, 3], &tau).unwrap();
        let twice = place_permute_word(&once, &sigma).unwrap();
        let both = sigma.compose(&tau).unwrap();
        assert_eq!(twice, place_permute_word(&[1, 2, 3], &both).unwrap());
    }

    #[test]
    fn vector_arithmetic_drops_zeros() {
        let mut v = WordVector::from_word(w(&[1, 2]));
        v.add_term(w(&[1, 2]), ratio(-1, 1));
        assert!(v.is_zero());
        let mut u = WordVector::from_word(w(&[1, 2]));
        u.add_scaled(&WordVector::from_word(w(&[2, 1])), &ratio(2, 3));
        assert_eq!(u.coeff(&[2, 1]), ratio(2, 3));
        assert_eq!(u.support_len(), 2);
        assert_eq!(u.l1_norm(), ratio(5, 3));
        u.scale(&ratio(0, 1));
        assert!(u.is_zero());
    }

    #[test]
    fn tableau_words() {
        assert_eq!(word_of_tableau(&tab(&[&[1, 3], &[2]])), w(&[1, 2, 1]));
        assert_eq!(word_of_tableau(&tab(&[&[1, 2, 3]])), w(&[1, 1, 1]));
        assert_eq!(word_of_tableau(&tab(&[&[1], &[2], &[3]])), w(&[1, 2, 3]));
    }

    #[test]
    fn polytabloid_of_single_column_alternates() {
        let v = polytabloid(&tab(&[&[1], &[2]]));
        assert_eq!(v.coeff(&[1, 2]), ratio(1, 1));
        assert_eq!(v.coeff(&[2, 1]), ratio(-1, 1));
        assert_eq!(v.support_len(), 2);
    }

    #[test]
    fn polytabloid_of_hook() {
        // Tableau [[1,2,3],[4]]: word (1,1,1,2); the only column of depth 2
        // is the first, swapping values 1 and 4.
        let v = polytabloid(&tab(&[&[1, 2, 3], &[4]]));
        assert_eq!(v.coeff(&[1, 1, 1, 2]), ratio(1, 1));
        assert_eq!(v.coeff(&[2, 1, 1, 1]), ratio(-1, 1));
        assert_eq!(v.support_len(), 2);
    }

    #[test]
    fn polytabloid_term_count_is_column_factorial_product() {
        // Shape (2,2,1): columns of depth 3 and 2 give 3! * 2! = 12 signed
        // words (all distinct for a standard tableau).
        let t = tab(&[&[1, 2], &[3, 4], &[5]]);
        let v = polytabloid(&t);
        assert_eq!(v.support_len(), 12);
        // Every word keeps the letter multiset: evaluation (2,2,1).
        assert_eq!(v.evaluation().unwrap(), vec![2, 2, 1]);
    }

    #[test]
    fn specht_bases_have_full_rank() {
        for n in 1..=6 {
            for shape in crate::tableaux::partitions(n) {
                let basis = specht_basis(&shape).unwrap();
                assert_eq!(
                    rank(&basis),
                    shape.dimension() as usize,
                    "{}",
                    shape.render()
                );
            }
        }
    }

    #[test]
    fn rank_detects_dependence() {
        let a = WordVector::from_word(w(&[1, 2]));
        let b = WordVector::from_word(w(&[2, 1]));
        let mut c = a.clone();
        c.add_scaled(&b, &ratio(1, 1));
        assert_eq!(rank(&[a.clone(), b.clone(), c]), 2);
        assert_eq!(rank(&[a.clone()]), 1);
        assert_eq!(rank(&[WordVector::zero()]), 0);
    }

    #[test]
    fn walk_operator_on_two_positions() {
        // Q on length-2 words: (3/2) id + (1/2) swap.
        let v = WordVector::from_word(w(&[1, 2]));
        let out = q_apply(2, &WeightFunction::Unbiased, &v).unwrap();
        assert_eq!(out.coeff(&[1, 2]), ratio(3, 2));
        assert_eq!(out.coeff(&[2, 1]), ratio(1, 2));
        // A symmetric vector doubles.
        let mut sym = WordVector::from_word(w(&[1, 2]));
        sym.add_scaled(&WordVector::from_word(w(&[2, 1])), &ratio(1, 1));
        let mut expected = sym.clone();
        expected.scale(&ratio(2, 1));
        assert_eq!(q_apply(2, &WeightFunction::Unbiased, &sym).unwrap(), expected);
    }

    #[test]
    fn switch_operator_examples() {
        let v = WordVector::from_word(w(&[1, 2, 2]));
        let out = theta(2, 1, &v);
        assert_eq!(out.coeff(&[1, 1, 2]), ratio(1, 1));
        assert_eq!(out.coeff(&[1, 2, 1]), ratio(1, 1));
        assert_eq!(out.support_len(), 2);
        // Same-letter switch multiplies by the occurrence count.
        let same = theta(2, 2, &v);
        assert_eq!(same.coeff(&[1, 2, 2]), ratio(2, 1));
        assert_eq!(same.support_len(), 1);
        // Absent letter kills the vector.
        assert!(theta(3, 1, &v).is_zero());
    }

    #[test]
    fn append_operator() {
        let mut v = WordVector::from_word(w(&[1, 2]));
        v.add_scaled(&WordVector::from_word(w(&[2, 1])), &ratio(-1, 1));
        let out = phi(3, &v);
        assert_eq!(out.coeff(&[1, 2, 3]), ratio(1, 1));
        assert_eq!(out.coeff(&[2, 1, 3]), ratio(-1, 1));
        assert_eq!(out.word_length(), Some(3));
    }
}
