use std::fmt;

use super::JetError;

/// An unordered multi-index over the base variables, stored as the number of
/// derivatives taken along each `x^i`.
///
/// Two multi-indices are equal exactly when their exponent vectors agree, so
/// `(1,2)` and `(2,1)` as ordered tuples both map to the exponent vector
/// `[1, 1]`. The derived ordering is lexicographic on the exponent vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// The empty multi-index in dimension `n`.
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The multi-index of a single derivative along `x^j` (0-based).
    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        MultiIndex(e)
    }

    /// Builds a multi-index from a list of (0-based) base directions, in any
    /// order and with repetition.
    pub fn from_directions(n: usize, dirs: &[usize]) -> Self {
        let mut e = vec![0; n];
        for &j in dirs {
            e[j] += 1;
        }
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|I|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    /// `Ij`: one more derivative along `x^j`.
    pub fn with_added(&self, j: usize) -> Self {
        let mut e = self.0.clone();
        e[j] += 1;
        MultiIndex(e)
    }

    /// Componentwise sum.
    pub fn plus(&self, other: &MultiIndex) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Whether `other ⊆ self` componentwise.
    pub fn contains(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// `self ∖ other`, when `other ⊆ self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<Self> {
        if !self.contains(other) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// The directions of the multi-index, ascending and with repetition.
    pub fn directions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(j, &k)| std::iter::repeat_n(j, k as usize))
            .collect()
    }

    /// All multi-indices `I ⊆ self`, including `∅` and `self`.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &k in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=k).map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// All multi-indices of dimension `n` with `|I| == order`.
    pub fn of_order(n: usize, order: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for c in (0..=left).rev() {
                prefix.push(c);
                rec(n, left - c, prefix, out);
                prefix.pop();
            }
        }
        if n == 0 {
            return if order == 0 {
                vec![MultiIndex(vec![])]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        rec(n, order, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }

    /// All multi-indices of dimension `n` with `|I| <= max_order`, by order.
    pub fn up_to_order(n: usize, max_order: u32) -> Vec<MultiIndex> {
        (0..=max_order).flat_map(|k| Self::of_order(n, k)).collect()
    }

    /// The 1-based nondecreasing digit string used by the text grammar,
    /// e.g. `[1, 2]` → `"122"`. Empty for `∅`.
    pub fn to_digits(&self) -> String {
        self.directions()
            .into_iter()
            .map(|j| char::from_digit((j + 1) as u32, 10).unwrap_or('?'))
            .collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

fn binom(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// The multi-index binomial `Π_k binom(J_k, I_k)`; zero unless `I ⊆ J`.
pub fn mi_binom(big: &MultiIndex, small: &MultiIndex) -> Result<u64, JetError> {
    if big.dim() != small.dim() {
        return Err(JetError::DimensionMismatch {
            left: big.dim(),
            right: small.dim(),
        });
    }
    Ok(big
        .0
        .iter()
        .zip(&small.0)
        .map(|(&j, &i)| binom(j, i))
        .product())
}
