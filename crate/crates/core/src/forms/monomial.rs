use std::fmt;

use crate::jet::MultiIndex;

/// The contact 1-form `θ^α_I = du^α_I − u^α_{Ij} dx^j`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContactFactor {
    pub alpha: usize,
    pub index: MultiIndex,
}

impl ContactFactor {
    pub fn new(alpha: usize, index: MultiIndex) -> Self {
        ContactFactor { alpha, index }
    }

    pub fn order(&self) -> u32 {
        self.index.order()
    }
}

impl fmt::Debug for ContactFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ContactFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta{}", self.alpha + 1)?;
        if !self.index.is_empty() {
            write!(f, "_{}", self.index.to_digits())?;
        }
        Ok(())
    }
}

/// A 1-form factor of a wedge product. Contact factors sort before `dx`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Theta(ContactFactor),
    Dx(usize),
}

/// A canonical wedge monomial `θ^{α_1}_{I_1} ∧ ⋯ ∧ θ^{α_s}_{I_s} ∧ dx^{i_1} ∧ ⋯ ∧ dx^{i_r}`
/// with strictly ascending contact factors and horizontal indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WedgeMonomial {
    contact: Vec<ContactFactor>,
    horizontal: Vec<usize>,
}

impl WedgeMonomial {
    /// The empty product (the constant 0-form basis element).
    pub fn unit() -> Self {
        Self::default()
    }

    /// Sorts an arbitrary ordered product into canonical form.
    ///
    /// Returns the monomial and whether the sorting permutation was odd, or
    /// `None` when a factor repeats (the product vanishes).
    pub fn from_factors(mut factors: Vec<Factor>) -> Option<(WedgeMonomial, bool)> {
        let mut odd = false;
        for i in 1..factors.len() {
            let mut k = i;
            while k > 0 && factors[k - 1] > factors[k] {
                factors.swap(k - 1, k);
                odd = !odd;
                k -= 1;
            }
        }
        if factors.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let mut mono = WedgeMonomial::unit();
        for f in factors {
            match f {
                Factor::Theta(c) => mono.contact.push(c),
                Factor::Dx(i) => mono.horizontal.push(i),
            }
        }
        Some((mono, odd))
    }

    pub fn factors(&self) -> Vec<Factor> {
        self.contact
            .iter()
            .cloned()
            .map(Factor::Theta)
            .chain(self.horizontal.iter().map(|&i| Factor::Dx(i)))
            .collect()
    }

    pub fn contact(&self) -> &[ContactFactor] {
        &self.contact
    }

    pub fn horizontal(&self) -> &[usize] {
        &self.horizontal
    }

    /// `(r, s)`.
    pub fn bidegree(&self) -> (usize, usize) {
        (self.horizontal.len(), self.contact.len())
    }

    /// `|I_1| + ⋯ + |I_s|`.
    pub fn contact_weight(&self) -> u32 {
        self.contact.iter().map(ContactFactor::order).sum()
    }

    /// Whether some contact factor has order zero (membership in `Ω_0`).
    pub fn has_order_zero_contact(&self) -> bool {
        self.contact.iter().any(|c| c.index.is_empty())
    }

    pub(crate) fn contact_position(&self, factor: &ContactFactor) -> Option<usize> {
        self.contact.binary_search(factor).ok()
    }

    pub(crate) fn without_contact(&self, k: usize) -> WedgeMonomial {
        let mut out = self.clone();
        out.contact.remove(k);
        out
    }

    pub(crate) fn without_horizontal(&self, k: usize) -> WedgeMonomial {
        let mut out = self.clone();
        out.horizontal.remove(k);
        out
    }
}
