//! Closed forms of `Ī_l` in the two explicitly solvable cases: vertical
//! degree two at any level, and level one at any vertical degree.

use std::collections::{BTreeMap, BTreeSet};

use super::{FiltrationError, GradedClass};
use crate::forms::{ContactFactor, Factor, Form, WedgeMonomial};
use crate::jet::{MultiIndex, Polynomial};
use crate::scalar::{sign, Scalar};

/// Coefficients `A^I_{αβ}` of `A^I_{αβ} θ^α ∧ θ^β_I ∧ ν` with `|I| = l`.
pub type S2Coeffs<C> = BTreeMap<(usize, usize, MultiIndex), Polynomial<C>>;

/// Coefficients `A^i_{α_1⋯α_s}` of
/// `A^i_{α_1⋯α_s} θ^{α_1} ∧ ⋯ ∧ θ^{α_{s−1}} ∧ θ^{α_s}_i ∧ ν`, keyed by the
/// fibre tuple and the base index `i`; antisymmetric in the first `s−1` slots.
pub type L1Coeffs<C> = BTreeMap<(Vec<usize>, usize), Polynomial<C>>;

/// Which subspace a membership query targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L1Part {
    Image,
    Kernel,
}

fn top_factors(n: usize, contact: impl IntoIterator<Item = ContactFactor>) -> Vec<Factor> {
    let mut factors: Vec<Factor> = contact.into_iter().map(Factor::Theta).collect();
    factors.extend((0..n).map(Factor::Dx));
    factors
}

fn lookup<C: Scalar, K: Ord>(map: &BTreeMap<K, Polynomial<C>>, key: &K) -> Polynomial<C> {
    map.get(key).cloned().unwrap_or_default()
}

fn insert_nonzero<C: Scalar, K: Ord>(
    map: &mut BTreeMap<K, Polynomial<C>>,
    key: K,
    value: Polynomial<C>,
) {
    if !value.is_zero() {
        map.insert(key, value);
    }
}

/// The class `A^I_{αβ} θ^α ∧ θ^β_I ∧ ν` in `Gr^l Ω^{n,2}_0`.
pub fn s2_class<C: Scalar>(
    n: usize,
    level: u32,
    coeffs: &S2Coeffs<C>,
) -> Result<GradedClass<C>, FiltrationError> {
    let mut w = Form::zero(n, (n, 2));
    for ((alpha, beta, index), a) in coeffs {
        if index.order() != level || index.dim() != n {
            return Err(FiltrationError::InvalidInput(format!(
                "multi-index {index} does not have order {level} in dimension {n}"
            )));
        }
        let contact = [
            ContactFactor::new(*alpha, MultiIndex::zero(n)),
            ContactFactor::new(*beta, index.clone()),
        ];
        w.add_factors(top_factors(n, contact), a.clone());
    }
    GradedClass::new(level, w)
}

/// Reads `A^I_{αβ}` off an `s = 2` class. At level 0 the basis is
/// antisymmetric and the antisymmetric representative is returned.
pub fn s2_coeffs<C: Scalar>(eta: &GradedClass<C>) -> Result<S2Coeffs<C>, FiltrationError> {
    if !eta.is_zero() && eta.vertical_degree() != 2 {
        return Err(FiltrationError::InvalidInput(
            "expected vertical degree 2".into(),
        ));
    }
    let n = eta.payload().base_dim();
    let mut out = S2Coeffs::new();
    for (mono, c) in eta.payload().terms() {
        let [a, b] = mono.contact() else {
            unreachable!("vertical degree 2");
        };
        if eta.level() == 0 {
            let half = c.scale(&C::ratio(1, 2));
            out.insert((a.alpha, b.alpha, MultiIndex::zero(n)), half.clone());
            out.insert((b.alpha, a.alpha, MultiIndex::zero(n)), -half);
            continue;
        }
        let (zero, high) = if a.index.is_empty() { (a, b) } else { (b, a) };
        let (_, odd) = WedgeMonomial::from_factors(top_factors(n, [zero.clone(), high.clone()]))
            .expect("distinct factors");
        let value = if odd { -c } else { c.clone() };
        out.insert((zero.alpha, high.alpha, high.index.clone()), value);
    }
    Ok(out)
}

/// `A^I_{αβ} ↦ ½(A^I_{αβ} + (−1)^{l+1} A^I_{βα})`.
pub fn ibar_s2<C: Scalar>(coeffs: &S2Coeffs<C>, level: u32) -> S2Coeffs<C> {
    let flip: C = sign(level as usize + 1);
    let half = C::ratio(1, 2);
    let keys: BTreeSet<_> = coeffs
        .keys()
        .flat_map(|(a, b, i)| [(*a, *b, i.clone()), (*b, *a, i.clone())])
        .collect();
    let mut out = S2Coeffs::new();
    for (a, b, i) in keys {
        let direct = lookup(coeffs, &(a, b, i.clone()));
        let swapped = lookup(coeffs, &(b, a, i.clone())).scale(&flip);
        insert_nonzero(&mut out, (a, b, i), (direct + swapped).scale(&half));
    }
    out
}

fn s2_symmetry<C: Scalar>(coeffs: &S2Coeffs<C>, parity: usize) -> bool {
    let flip: C = sign(parity);
    coeffs.keys().all(|(a, b, i)| {
        lookup(coeffs, &(*a, *b, i.clone())) == lookup(coeffs, &(*b, *a, i.clone())).scale(&flip)
    })
}

/// `A^I_{αβ} = (−1)^{l+1} A^I_{βα}`: the class lies in `im Ī_l`.
pub fn s2_in_image<C: Scalar>(coeffs: &S2Coeffs<C>, level: u32) -> bool {
    s2_symmetry(coeffs, level as usize + 1)
}

/// `A^I_{αβ} = (−1)^l A^I_{βα}`: the class lies in `ker Ī_l`.
pub fn s2_in_kernel<C: Scalar>(coeffs: &S2Coeffs<C>, level: u32) -> bool {
    s2_symmetry(coeffs, level as usize)
}

/// A square matrix over a scalar field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<C> {
    size: usize,
    entries: Vec<C>,
}

impl<C: Scalar> Matrix<C> {
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> C) -> Self {
        let entries = (0..size * size).map(|k| f(k / size, k % size)).collect();
        Matrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &C {
        &self.entries[row * self.size + col]
    }

    pub fn mul(&self, other: &Matrix<C>) -> Matrix<C> {
        assert_eq!(self.size, other.size);
        Matrix::from_fn(self.size, |i, j| {
            (0..self.size).fold(C::zero(), |acc, k| {
                acc + self.get(i, k).clone() * other.get(k, j).clone()
            })
        })
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.size;
        let mut rows: Vec<Vec<C>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            let p = pivot_row[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && !row[col].is_zero() {
                    let factor = row[col].clone() / p.clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                        *x = x.clone() - factor.clone() * y.clone();
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// `I_s − c cᵀ` with `c_k = (−1)^{(s−1)k}/√s`, stored exactly as
/// `δ_{jk} − (−1)^{(s−1)(j+k)}/s`.
pub fn l1_matrix<C: Scalar>(s: usize) -> Result<Matrix<C>, FiltrationError> {
    if s == 0 {
        return Err(FiltrationError::InvalidInput("s must be positive".into()));
    }
    Ok(Matrix::from_fn(s, |j, k| {
        let delta = if j == k { C::one() } else { C::zero() };
        delta - sign::<C>((s - 1) * (j + k)) * C::ratio(1, s as i64)
    }))
}

fn cyclic_shift(tuple: &[usize], k: usize) -> Vec<usize> {
    tuple[k..].iter().chain(&tuple[..k]).copied().collect()
}

/// All permutations of `0..k` with their parity (`true` when odd).
fn permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    if k == 0 {
        return vec![(Vec::new(), false)];
    }
    let mut out = Vec::new();
    for (p, odd) in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            let inv = p.len() - pos;
            out.push((q, odd ^ (inv % 2 == 1)));
        }
    }
    out
}

fn validate_l1<C: Scalar>(coeffs: &L1Coeffs<C>, s: usize) -> Result<(), FiltrationError> {
    for (tuple, _) in coeffs.keys() {
        if tuple.len() != s {
            return Err(FiltrationError::InvalidInput(format!(
                "fibre tuple of length {} for s = {s}",
                tuple.len()
            )));
        }
    }
    for ((tuple, i), v) in coeffs {
        for p in 0..s.saturating_sub(2) {
            let mut swapped = tuple.clone();
            swapped.swap(p, p + 1);
            if lookup(coeffs, &(swapped, *i)) != -v {
                return Err(FiltrationError::NotAntisymmetric);
            }
        }
    }
    Ok(())
}

/// The weight-one `(n,s)`-form of an `L1Coeffs` family.
pub fn l1_class<C: Scalar>(
    n: usize,
    s: usize,
    coeffs: &L1Coeffs<C>,
) -> Result<Form<C>, FiltrationError> {
    validate_l1(coeffs, s)?;
    let mut w = Form::zero(n, (n, s));
    for ((tuple, i), a) in coeffs {
        let contact = tuple.iter().enumerate().map(|(k, &alpha)| {
            if k + 1 == s {
                ContactFactor::new(alpha, MultiIndex::unit(n, *i))
            } else {
                ContactFactor::new(alpha, MultiIndex::zero(n))
            }
        });
        w.add_factors(top_factors(n, contact), a.clone());
    }
    Ok(w)
}

/// Reads the antisymmetric coefficient family off a weight-one `(n,s)`-form.
pub fn l1_coeffs<C: Scalar>(w: &Form<C>, s: usize) -> Result<L1Coeffs<C>, FiltrationError> {
    let n = w.base_dim();
    if !w.is_zero() && w.bidegree() != (n, s) {
        return Err(FiltrationError::Bidegree(w.bidegree()));
    }
    let fact: i64 = (1..s as i64).product();
    let perms = permutations(s - 1);
    let mut out = L1Coeffs::new();
    for (mono, c) in w.terms() {
        if mono.contact_weight() != 1 {
            return Err(FiltrationError::WrongWeight {
                level: 1,
                found: mono.contact_weight(),
            });
        }
        let (zeros, ones): (Vec<_>, Vec<_>) =
            mono.contact().iter().partition(|c| c.index.is_empty());
        let high = ones[0];
        let i = high.index.directions()[0];
        let ordered: Vec<ContactFactor> = zeros
            .iter()
            .map(|c| (*c).clone())
            .chain([high.clone()])
            .collect();
        let (_, odd) =
            WedgeMonomial::from_factors(top_factors(n, ordered)).expect("distinct factors");
        let base = c.scale(&C::ratio(if odd { -1 } else { 1 }, fact));
        for (perm, podd) in &perms {
            let mut tuple: Vec<usize> = perm.iter().map(|&k| zeros[k].alpha).collect();
            tuple.push(high.alpha);
            let v = if *podd { -&base } else { base.clone() };
            out.insert((tuple, i), v);
        }
    }
    Ok(out)
}

fn orbit_keys<C: Scalar>(coeffs: &L1Coeffs<C>, s: usize) -> BTreeSet<(Vec<usize>, usize)> {
    coeffs
        .keys()
        .flat_map(|(t, i)| (0..s).map(move |k| (cyclic_shift(t, k), *i)))
        .collect()
}

fn cyclic_sum<C: Scalar>(
    coeffs: &L1Coeffs<C>,
    s: usize,
    tuple: &[usize],
    i: usize,
) -> Polynomial<C> {
    let mut acc = Polynomial::zero();
    for k in 0..s {
        let term = lookup(coeffs, &(cyclic_shift(tuple, k), i)).scale(&sign::<C>((s - 1) * k));
        acc += &term;
    }
    acc
}

/// Applies `Ī_1` through the matrix: the `a`-vector of cyclic shifts is
/// multiplied by [`l1_matrix`] and the leading entry is kept.
pub fn l1_apply<C: Scalar>(coeffs: &L1Coeffs<C>, s: usize) -> Result<L1Coeffs<C>, FiltrationError> {
    validate_l1(coeffs, s)?;
    let m = l1_matrix::<C>(s)?;
    let mut out = L1Coeffs::new();
    for (tuple, i) in orbit_keys(coeffs, s) {
        let mut acc = Polynomial::zero();
        for k in 0..s {
            acc += &lookup(coeffs, &(cyclic_shift(&tuple, k), i)).scale(m.get(0, k));
        }
        insert_nonzero(&mut out, (tuple, i), acc);
    }
    Ok(out)
}

/// Image: every signed cyclic sum vanishes. Kernel: `s·A` equals its signed
/// cyclic sum.
pub fn l1_membership<C: Scalar>(
    coeffs: &L1Coeffs<C>,
    s: usize,
    part: L1Part,
) -> Result<bool, FiltrationError> {
    validate_l1(coeffs, s)?;
    let scale = C::from_int(s as i64);
    Ok(orbit_keys(coeffs, s).into_iter().all(|(tuple, i)| {
        let sum = cyclic_sum(coeffs, s, &tuple, i);
        match part {
            L1Part::Image => sum.is_zero(),
            L1Part::Kernel => lookup(coeffs, &(tuple, i)).scale(&scale) == sum,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::ibar;
    use num_rational::Ratio;

    type Q = Ratio<i64>;
    type P = Polynomial<Q>;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a, b)
    }

    #[test]
    fn l1_matrix_small_cases() {
        let m1 = l1_matrix::<Q>(1).unwrap();
        assert_eq!(*m1.get(0, 0), q(0, 1));
        let m2 = l1_matrix::<Q>(2).unwrap();
        assert_eq!(*m2.get(0, 0), q(1, 2));
        assert_eq!(*m2.get(0, 1), q(1, 2));
        assert_eq!(*m2.get(1, 1), q(1, 2));
        let m3 = l1_matrix::<Q>(3).unwrap();
        assert_eq!(*m3.get(0, 0), q(2, 3));
        assert_eq!(*m3.get(0, 1), q(-1, 3));
        assert!(l1_matrix::<Q>(0).is_err());
        for s in 2..=5 {
            let m = l1_matrix::<Q>(s).unwrap();
            assert!(m.is_idempotent());
            assert_eq!(m.rank(), s - 1);
        }
    }

    #[test]
    fn permutation_parity() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        let odd = perms.iter().filter(|(_, o)| *o).count();
        assert_eq!(odd, 3);
        assert!(perms.contains(&(vec![1, 0, 2], true)));
        assert!(perms.contains(&(vec![1, 2, 0], false)));
    }

    #[test]
    fn s2_examples() {
        let i1 = MultiIndex::new(vec![1]);
        let mut a = S2Coeffs::new();
        a.insert((0, 1, i1.clone()), P::int(2));
        let sym = ibar_s2(&a, 1);
        assert_eq!(sym[&(0, 1, i1.clone())], P::int(1));
        assert_eq!(sym[&(1, 0, i1.clone())], P::int(1));
        assert!(s2_in_image(&sym, 1));
        assert_eq!(ibar_s2(&sym, 1), sym);

        let i2 = MultiIndex::new(vec![2]);
        let mut b = S2Coeffs::new();
        b.insert((0, 0, i2), P::int(5));
        assert!(ibar_s2(&b, 2).is_empty());
        assert!(s2_in_kernel(&b, 2));
    }

    #[test]
    fn s2_coeff_roundtrip() {
        let i = MultiIndex::new(vec![0, 1]);
        let mut a = S2Coeffs::new();
        a.insert((1, 0, i.clone()), P::u(0, MultiIndex::zero(2)));
        a.insert((0, 0, i), P::int(-3));
        let class = s2_class(2, 1, &a).unwrap();
        assert_eq!(s2_coeffs(&class).unwrap(), a);
    }

    fn l1_family(entries: &[(&[usize], usize, i64)]) -> L1Coeffs<Q> {
        entries
            .iter()
            .map(|(t, i, v)| ((t.to_vec(), *i), P::int(*v)))
            .collect()
    }

    #[test]
    fn l1_membership_s3() {
        // A_{012} = 1, A_{120} = -1, A_{201} = 0 and antisymmetric partners.
        let a = l1_family(&[
            (&[0, 1, 2], 0, 1),
            (&[1, 0, 2], 0, -1),
            (&[1, 2, 0], 0, -1),
            (&[2, 1, 0], 0, 1),
        ]);
        assert!(l1_membership(&a, 3, L1Part::Image).unwrap());
        assert!(!l1_membership(&a, 3, L1Part::Kernel).unwrap());
        assert!(l1_membership(&L1Coeffs::<Q>::new(), 3, L1Part::Kernel).unwrap());
        let bad = l1_family(&[(&[0, 1, 2], 0, 1)]);
        assert_eq!(
            l1_membership(&bad, 3, L1Part::Image),
            Err(FiltrationError::NotAntisymmetric)
        );
    }

    #[test]
    fn l1_s2_symmetric_is_fixed() {
        let a = l1_family(&[(&[0, 1], 0, 3), (&[1, 0], 0, 3)]);
        assert!(l1_membership(&a, 2, L1Part::Image).unwrap());
        assert_eq!(l1_apply(&a, 2).unwrap(), a);
    }

    #[test]
    fn l1_matches_generic_path_s3() {
        let a = l1_family(&[(&[0, 1, 1], 0, 1), (&[1, 0, 1], 0, -1)]);
        let w = l1_class(1, 3, &a).unwrap();
        let eta = GradedClass::new(1, w).unwrap();
        let generic = ibar(&eta).unwrap();
        let closed = l1_class(1, 3, &l1_apply(&a, 3).unwrap()).unwrap();
        assert_eq!(generic.payload(), &closed);
        assert_eq!(l1_coeffs(&closed, 3).unwrap(), l1_apply(&a, 3).unwrap());
    }
}
