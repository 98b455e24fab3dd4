//! Exact integer combinatorics behind the closed-form derivative formula.
//!
//! Two different families of index sets show up:
//! - subsets of `{1..r}` ([`IndexSubset`]), used for the even-cardinality
//!   sums inside `F_r` and for the size-`r` sums inside `G_r`;
//! - ordered partitions of `k` into `n` non-negative parts
//!   ([`OrderedPartition`]), which distribute `k` derivatives over the
//!   `n` factors of the holonomy product.
//!
//! Positions are zero-based in code; `signature` and `alternating_length`
//! are written so that they agree with the one-based block definitions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Parity of `m`: `0` for even, `1` for odd.
pub fn parity(m: u64) -> u64 {
    m & 1
}

/// A subset of `{0..ambient}` stored as strictly increasing positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSubset {
    ambient: usize,
    indices: Vec<usize>,
}

impl IndexSubset {
    pub fn new(ambient: usize, indices: Vec<usize>) -> Result<Self> {
        for (pos, &i) in indices.iter().enumerate() {
            if i >= ambient {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: ambient,
                });
            }
            if pos > 0 && indices[pos - 1] >= i {
                return Err(Error::InvalidRange(format!(
                    "subset positions must be strictly increasing: {indices:?}"
                )));
            }
        }
        Ok(Self { ambient, indices })
    }

    pub fn empty(ambient: usize) -> Self {
        Self {
            ambient,
            indices: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Positions of `{0..ambient}` not in the subset.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.ambient).filter(|&i| !self.contains(i)).collect()
    }

    /// Total size of the even-numbered blocks cut out of `{1..r}` by the
    /// subset: `(i_2 - i_1 + 1) + (i_4 - i_3 + 1) + …`, closed with
    /// `(r - i_m + 1)` when the subset has odd cardinality. The empty
    /// subset has signature `0`.
    pub fn signature(&self) -> usize {
        let mut s: usize = self
            .indices
            .chunks_exact(2)
            .map(|pair| pair[1] - pair[0] + 1)
            .sum();
        if self.indices.len() % 2 == 1 {
            // one-based: r - i_m + 1 == ambient - position
            s += self.ambient - self.indices[self.indices.len() - 1];
        }
        s
    }

    /// `-l_{i_1} + l_{i_2} - l_{i_3} + …`, zero for the empty subset.
    pub fn alternating_length(&self, lengths: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        for (j, &i) in self.indices.iter().enumerate() {
            let l = *lengths.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                len: lengths.len(),
            })?;
            if j % 2 == 0 {
                total -= l;
            } else {
                total += l;
            }
        }
        Ok(total)
    }
}

/// All subsets of `{0..r}` with even cardinality, the empty set included.
///
/// Subsets come out in bitmask order, so for `r = 3` the sequence is
/// `∅, {0,1}, {0,2}, {1,2}`.
pub fn even_subsets(r: usize) -> impl Iterator<Item = IndexSubset> {
    assert!(r < 64, "even_subsets: r = {r} does not fit a bitmask");
    (0u64..(1u64 << r))
        .filter(|mask| mask.count_ones() % 2 == 0)
        .map(move |mask| IndexSubset {
            ambient: r,
            indices: (0..r).filter(|&i| mask & (1 << i) != 0).collect(),
        })
}

/// All size-`r` subsets of `{0..n}` in lexicographic order.
pub fn subsets_of_size(n: usize, r: usize) -> Result<impl Iterator<Item = IndexSubset>> {
    if r > n {
        return Err(Error::InvalidRange(format!(
            "subset size {r} exceeds ambient size {n}"
        )));
    }
    Ok((0..n).combinations(r).map(move |indices| IndexSubset {
        ambient: n,
        indices,
    }))
}

/// An ordered partition of `k` into non-negative parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    parts: Vec<u64>,
}

impl OrderedPartition {
    pub fn new(parts: Vec<u64>) -> Self {
        Self { parts }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn parity_vector(&self) -> Vec<u64> {
        self.parts.iter().map(|&p| parity(p)).collect()
    }

    /// Number of odd parts.
    pub fn odd_count(&self) -> usize {
        self.parts.iter().filter(|&&p| p % 2 == 1).count()
    }

    /// If the parity vector has the form `(1,…,1,0,…,0)`, the number of
    /// leading ones.
    fn leading_odd_block(&self) -> Option<usize> {
        let r = self.parts.iter().take_while(|&&p| p % 2 == 1).count();
        self.parts[r..]
            .iter()
            .all(|&p| p % 2 == 0)
            .then_some(r)
    }
}

/// Iterator over every ordered partition of `k` into `n` parts, starting
/// at `(k, 0, …, 0)` and ending at `(0, …, 0, k)`.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<u64>>,
}

impl Iterator for Partitions {
    type Item = OrderedPartition;

    fn next(&mut self) -> Option<OrderedPartition> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let last = next.len() - 1;
        let tail = next[last];
        next[last] = 0;
        if let Some(i) = (0..last).rev().find(|&i| next[i] > 0) {
            next[i] -= 1;
            next[i + 1] = tail + 1;
            self.current = Some(next);
        }
        Some(OrderedPartition::new(out))
    }
}

/// Ordered partitions of `k` into `n ≥ 1` parts; there are `C(k+n-1, n-1)`.
pub fn enumerate_partitions(k: u64, n: usize) -> Result<Partitions> {
    if n == 0 {
        return Err(Error::InvalidRange(
            "ordered partitions need at least one part".into(),
        ));
    }
    let mut start = vec![0; n];
    start[0] = k;
    Ok(Partitions {
        current: Some(start),
    })
}

pub fn factorial(m: u64) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    (0..r).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `k! / (p_1! ⋯ p_n!)`.
pub fn multinomial(k: u64, partition: &OrderedPartition) -> Result<BigUint> {
    let sum = partition.total();
    if sum != k {
        return Err(Error::PartitionSumMismatch { sum, expected: k });
    }
    // product of binomials keeps intermediates small
    let mut acc = BigUint::one();
    let mut running = 0;
    for &p in partition.parts() {
        running += p;
        acc *= binomial(running, p);
    }
    Ok(acc)
}

type CoefficientRow = Arc<Vec<BigUint>>;

fn coefficient_cache() -> &'static Mutex<HashMap<(usize, u64), CoefficientRow>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), CoefficientRow>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `B_{n,k,r}` for every `r` in `0..=n`, from one pass over `P(k,n)`.
pub fn coefficient_row(n: usize, k: u64) -> CoefficientRow {
    if let Some(row) = coefficient_cache().lock().unwrap().get(&(n, k)) {
        return row.clone();
    }
    let mut row = vec![BigUint::zero(); n + 1];
    if n == 0 {
        if k == 0 {
            row[0] = BigUint::one();
        }
    } else {
        for q in enumerate_partitions(k, n).expect("n >= 1") {
            if let Some(r) = q.leading_odd_block() {
                row[r] += multinomial(k, &q).expect("partition of k");
            }
        }
    }
    let row = Arc::new(row);
    coefficient_cache()
        .lock()
        .unwrap()
        .insert((n, k), row.clone());
    row
}

/// Sum of the multinomials `k!/(q_1!⋯q_n!)` over ordered partitions `q` of
/// `k` whose odd parts are exactly the first `r` positions.
///
/// The value only depends on how many parts are odd, not which ones. It
/// vanishes unless `r ≡ k (mod 2)`.
pub fn coefficient_b(n: usize, k: u64, r: usize) -> Result<BigUint> {
    if r as u64 > k || r > n {
        return Err(Error::InvalidRange(format!(
            "B(n={n}, k={k}, r={r}) needs r <= min(k, n)"
        )));
    }
    if parity(r as u64) != parity(k) {
        return Ok(BigUint::zero());
    }
    Ok(coefficient_row(n, k)[r].clone())
}
