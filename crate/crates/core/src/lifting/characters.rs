//! Irreducible characters of the symmetric group, computed by rim-hook
//! removal on beta-sets, plus the isotypic projections built from them.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lifting::words::{place_permute, WordVector};
use crate::perm::{factorial, Permutation};
use crate::scalar::ratio;
use crate::tableaux::{partitions, Partition};

/// Isotypic projections enumerate a full symmetric group on word positions;
/// this caps the word length they accept.
pub const PROJECTION_CAP: usize = 7;

/// Character value of the irreducible labeled by `shape` on the conjugacy
/// class of cycle type `class`, by recursive rim-hook removal.
pub fn character(shape: &Partition, class: &Partition) -> i64 {
    assert_eq!(
        shape.n(),
        class.n(),
        "character arguments must partition the same n"
    );
    mn_recurse(shape.parts(), class.parts())
}

fn mn_recurse(shape: &[usize], class: &[usize]) -> i64 {
    if class.is_empty() {
        return 1;
    }
    let hook = class[0] as i64;
    let rest = &class[1..];
    // Beta-set of the shape: strictly decreasing first-column hook lengths.
    let len = shape.len();
    let beta: Vec<i64> = (0..len)
        .map(|i| shape[i] as i64 + (len - 1 - i) as i64)
        .collect();
    let mut total = 0i64;
    for &b in &beta {
        let target = b - hook;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let crossed = beta.iter().filter(|&&c| target < c && c < b).count();
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        let mut next: Vec<i64> = beta.iter().copied().filter(|&c| c != b).collect();
        next.push(target);
        next.sort_unstable_by(|x, y| y.cmp(x));
        let next_shape: Vec<usize> = next
            .iter()
            .enumerate()
            .map(|(i, &c)| (c - (len - 1 - i) as i64) as usize)
            .filter(|&p| p > 0)
            .collect();
        total += sign * mn_recurse(&next_shape, rest);
    }
    total
}

/// Character table of S_n: rows indexed by shape, columns by cycle type,
/// both in the descending order of `partitions(n)`.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    n: usize,
    classes: Vec<Partition>,
    class_sizes: Vec<u64>,
    rows: Vec<(Partition, Vec<i64>)>,
}

impl CharacterTable {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 12 {
            return Err(Error::CapExceeded {
                what: "character table",
                n,
                cap: 12,
            });
        }
        let classes = partitions(n);
        let class_sizes: Vec<u64> = classes.iter().map(class_size).collect();
        let rows = classes
            .iter()
            .map(|shape| {
                (
                    shape.clone(),
                    classes.iter().map(|c| character(shape, c)).collect(),
                )
            })
            .collect();
        Ok(Self {
            n,
            classes,
            class_sizes,
            rows,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[Partition] {
        &self.classes
    }

    pub fn class_size(&self, idx: usize) -> u64 {
        self.class_sizes[idx]
    }

    pub fn shapes(&self) -> impl Iterator<Item = &Partition> {
        self.rows.iter().map(|(s, _)| s)
    }

    pub fn row(&self, shape: &Partition) -> Option<&[i64]> {
        self.rows
            .iter()
            .find(|(s, _)| s == shape)
            .map(|(_, r)| r.as_slice())
    }

    pub fn value(&self, shape: &Partition, class: &Partition) -> Option<i64> {
        let idx = self.classes.iter().position(|c| c == class)?;
        Some(self.row(shape)?[idx])
    }
}

/// Conjugacy class size n!/z, with z the product over cycle lengths i of
/// i^{m_i} m_i!.
fn class_size(class: &Partition) -> u64 {
    let n = class.n();
    let mut z = 1u64;
    let mut run = 0u64;
    let mut prev = 0usize;
    for &part in class.parts() {
        if part == prev {
            run += 1;
        } else {
            prev = part;
            run = 1;
        }
        z *= part as u64 * run;
    }
    factorial(n) / z
}

/// Projects a vector of length-N words onto the isotypic component of the
/// irreducible labeled by `shape`: (d/N!) sum over sigma of chi(sigma) sigma v.
pub fn isotypic_project(shape: &Partition, v: &WordVector) -> Result<WordVector> {
    let n = shape.n();
    if n > PROJECTION_CAP {
        return Err(Error::CapExceeded {
            what: "isotypic projection",
            n,
            cap: PROJECTION_CAP,
        });
    }
    if let Some(len) = v.word_length() {
        if len != n {
            return Err(Error::Domain(format!(
                "projection shape size {n} does not match word length {len}"
            )));
        }
    } else {
        return Ok(WordVector::zero());
    }
    let mut by_type: HashMap<Vec<usize>, i64> = HashMap::new();
    for class in partitions(n) {
        by_type.insert(class.parts().to_vec(), character(shape, &class));
    }
    let mut out = WordVector::zero();
    for rank in 0..factorial(n) {
        let sigma = Permutation::unrank(n, rank)?;
        let chi = by_type[&sigma.cycle_type()];
        if chi == 0 {
            continue;
        }
        out.add_scaled(&place_permute(v, &sigma)?, &ratio(chi, 1));
    }
    let scale = ratio(shape.dimension() as i64, factorial(n) as i64);
    out.scale(&scale);
    Ok(out)
}
