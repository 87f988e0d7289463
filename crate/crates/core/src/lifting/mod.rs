//! Recursive eigenvector construction for the walk, working in exact
//! arithmetic on word vectors. An eigenvector for n cards is pushed to n+1
//! cards by appending a letter and projecting onto the right isotypic
//! component; iterating from a single card along a standard tableau's
//! growth path produces every eigenvector, with its eigenvalue accumulated
//! box by box.

pub mod characters;
pub mod words;

pub use characters::{character, isotypic_project, CharacterTable, PROJECTION_CAP};
pub use words::{
    phi, place_permute, polytabloid, q_apply, rank, specht_basis, theta, word_of_tableau, Word,
    WordVector,
};

use num::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{ratio, Scalar};
use crate::shuffle::WeightFunction;
use crate::tableaux::{enumerate_syt, Partition, Tableau};

/// Hard degree cap for end-to-end lifting: each step projects over a full
/// symmetric group on the word length.
pub const LIFT_CAP: usize = 6;

/// Grows a shape by one box at `row` (1-based; one past the last row starts
/// a new row), checking the result is still a partition.
pub fn grow_shape(shape: &Partition, row: usize) -> Result<Partition> {
    let mut parts = shape.parts().to_vec();
    if row == 0 || row > parts.len() + 1 {
        return Err(Error::InvalidPartition(format!(
            "cannot add a box at row {row} of {}",
            shape.render()
        )));
    }
    if row == parts.len() + 1 {
        parts.push(1);
    } else {
        parts[row - 1] += 1;
    }
    Partition::new(parts)
}

/// The lifting operator: append the row label as a letter, then project onto
/// the isotypic component of the grown shape. Maps eigenvectors for n cards
/// to eigenvectors for n+1 cards, injectively.
pub fn kappa(shape: &Partition, row: usize, v: &WordVector) -> Result<WordVector> {
    let grown = grow_shape(shape, row)?;
    isotypic_project(&grown, &phi(row as u8, v))
}

/// One fully lifted eigenvector: the tableau encoding its growth path, the
/// eigenvalue of the lifted operator Q, and the walk eigenvalue (their
/// ratio by n).
#[derive(Clone, Debug)]
pub struct LiftedEigenvector {
    pub tableau: Tableau,
    pub q_eigenvalue: BigRational,
    pub walk_eigenvalue: BigRational,
    pub vector: WordVector,
}

/// Runs the lifting chain along one standard tableau's growth path and
/// verifies the result exactly: the output is a nonzero eigenvector of the
/// walk operator with the accumulated eigenvalue.
pub fn lift_tableau(t: &Tableau) -> Result<LiftedEigenvector> {
    let n = t.n();
    if n == 0 || n > LIFT_CAP {
        return Err(Error::CapExceeded {
            what: "eigenvector lifting",
            n,
            cap: LIFT_CAP,
        });
    }
    if !t.is_standard() {
        return Err(Error::InvalidTableau(
            "lifting requires a standard tableau".to_string(),
        ));
    }
    let positions = t.positions_by_value();
    let mut vector = WordVector::from_word(vec![1]);
    let mut eps = ratio(1, 1);
    let mut rows: Vec<usize> = vec![1];
    for (m, &(i, j)) in positions.iter().enumerate().skip(1) {
        let value = m + 1;
        let before = Partition::new(rows.clone())?;
        vector = kappa(&before, i, &vector)?;
        if vector.is_zero() {
            return Err(Error::Verification(format!(
                "lift of {:?} vanished at value {value}",
                t.rows()
            )));
        }
        eps += ratio(j as i64 - i as i64 + 1, value as i64);
        if i == rows.len() + 1 {
            rows.push(1);
        } else {
            rows[i - 1] += 1;
        }
    }
    let image = q_apply(n, &WeightFunction::Unbiased, &vector)?;
    let mut expected = vector.clone();
    expected.scale(&eps);
    if image != expected {
        return Err(Error::Verification(format!(
            "lifted vector of {:?} is not an eigenvector for eigenvalue {}",
            t.rows(),
            eps.render()
        )));
    }
    let walk_eigenvalue = &eps / ratio(n as i64, 1);
    Ok(LiftedEigenvector {
        tableau: t.clone(),
        q_eigenvalue: eps,
        walk_eigenvalue,
        vector,
    })
}

/// Lifts every standard tableau of the shape and verifies the family spans:
/// the vectors must be linearly independent with count equal to the shape's
/// dimension.
pub fn lift_spectrum(shape: &Partition) -> Result<Vec<LiftedEigenvector>> {
    let lifted: Vec<LiftedEigenvector> = enumerate_syt(shape)?
        .iter()
        .map(lift_tableau)
        .collect::<Result<_>>()?;
    let vectors: Vec<WordVector> = lifted.iter().map(|l| l.vector.clone()).collect();
    let got = rank(&vectors);
    if got != shape.dimension() as usize {
        return Err(Error::Verification(format!(
            "lifted family of {} has rank {got}, expected {}",
            shape.render(),
            shape.dimension()
        )));
    }
    Ok(lifted)
}

/// Residual of the recursion identity connecting the walk operators on n and
/// n+1 positions, summed over every length-n word on n letters:
/// Q_{n+1} after appending a, minus appending a after Q_n, must equal
/// (append + sum of switch-then-append corrections) / (n+1). Returns the
/// total L1 residual, which is zero exactly when the identity holds.
pub fn master_identity_residual(n: usize, a: u8) -> Result<BigRational> {
    if n == 0 || n > 5 {
        return Err(Error::CapExceeded {
            what: "recursion identity sweep",
            n,
            cap: 5,
        });
    }
    if a == 0 || a as usize > n + 1 {
        return Err(Error::Domain(format!(
            "appended letter {a} out of range for degree {n}"
        )));
    }
    let unbiased = WeightFunction::Unbiased;
    let scale = ratio(1, (n + 1) as i64);
    let minus_one = ratio(-1, 1);
    let mut total = ratio(0, 1);
    let mut word = vec![1u8; n];
    loop {
        let v = WordVector::from_word(word.clone());
        let mut residual = q_apply(n + 1, &unbiased, &phi(a, &v))?;
        residual.add_scaled(&phi(a, &q_apply(n, &unbiased, &v)?), &minus_one);
        let mut rhs = phi(a, &v);
        for b in 1..=n {
            rhs.add_scaled(&phi(b as u8, &theta(b as u8, a, &v)), &ratio(1, 1));
        }
        rhs.scale(&scale);
        residual.add_scaled(&rhs, &minus_one);
        total += residual.l1_norm();

        // Advance to the next word over the alphabet 1..=n.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(total);
            }
            word[pos] += 1;
            if word[pos] as usize <= n {
                break;
            }
            word[pos] = 1;
            pos += 1;
        }
    }
}
