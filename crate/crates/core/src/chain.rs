//! Integer chains over a graded basis.
//!
//! A chain is a finite formal ℤ-linear combination of basis elements of one
//! fixed dimension. Coefficients stay exact: every construction in this crate
//! is integer arithmetic, so `Coeff` is a plain machine integer (the largest
//! coefficient any in-scope construction produces is a single-digit count).

use std::collections::BTreeMap;
use std::fmt;

use crate::complex::GenId;

/// Scalar type for chain coefficients.
pub type Coeff = i64;

/// A formal sum of basis elements of one dimension.
///
/// The zero chain of dimension `dim` has an empty coefficient map; entries
/// with coefficient zero are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    dim: usize,
    coeffs: BTreeMap<GenId, Coeff>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain { dim, coeffs: BTreeMap::new() }
    }

    pub fn unit(dim: usize, id: GenId) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(id, 1);
        Chain { dim, coeffs }
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (GenId, Coeff)>) -> Self {
        let mut c = Chain::zero(dim);
        for (id, k) in entries {
            c.add_term(id, k);
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, id: &GenId) -> Coeff {
        self.coeffs.get(id).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, id: GenId, k: Coeff) {
        if k == 0 {
            return;
        }
        let e = self.coeffs.entry(id.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.coeffs.remove(&id);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GenId, Coeff)> {
        self.coeffs.iter().map(|(g, k)| (g, *k))
    }

    pub fn support(&self) -> impl Iterator<Item = &GenId> {
        self.coeffs.keys()
    }

    pub fn add(&self, other: &Chain) -> Chain {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (id, k) in other.iter() {
            out.add_term(id.clone(), k);
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (id, k) in other.iter() {
            out.add_term(id.clone(), -k);
        }
        out
    }

    pub fn scale(&self, k: Coeff) -> Chain {
        let mut out = Chain::zero(self.dim);
        for (id, c) in self.iter() {
            out.add_term(id.clone(), c * k);
        }
        out
    }

    /// True when every coefficient is non-negative (a "positive chain").
    pub fn is_nonneg(&self) -> bool {
        self.coeffs.values().all(|k| *k > 0)
    }

    /// Positive part of the canonical decomposition `x = x⁺ − x⁻`.
    pub fn pos_part(&self) -> Chain {
        Chain {
            dim: self.dim,
            coeffs: self.coeffs.iter().filter(|(_, k)| **k > 0).map(|(g, k)| (g.clone(), *k)).collect(),
        }
    }

    /// Negative part of the canonical decomposition (with positive coefficients).
    pub fn neg_part(&self) -> Chain {
        Chain {
            dim: self.dim,
            coeffs: self.coeffs.iter().filter(|(_, k)| **k < 0).map(|(g, k)| (g.clone(), -*k)).collect(),
        }
    }

    /// Coefficient sum; on dimension-0 chains this is the augmentation.
    pub fn total(&self) -> Coeff {
        self.coeffs.values().sum()
    }

    /// Pointwise `self ≤ other` on coefficients (both assumed non-negative).
    pub fn le(&self, other: &Chain) -> bool {
        self.iter().all(|(id, k)| k <= other.coeff(id))
    }

    /// Apply a basis substitution; entries mapping to `None` are dropped.
    pub fn map_basis(&self, dim: usize, f: impl Fn(&GenId) -> Option<Chain>) -> Chain {
        let mut out = Chain::zero(dim);
        for (id, k) in self.iter() {
            if let Some(img) = f(id) {
                debug_assert_eq!(img.dim(), dim);
                for (h, c) in img.iter() {
                    out.add_term(h.clone(), c * k);
                }
            }
        }
        out
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (id, k) in self.coeffs.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *k == 1 {
                write!(f, "{id}")?;
            } else {
                write!(f, "{k}*{id}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::GenId;

    fn g(name: &str) -> GenId {
        GenId::name(name)
    }

    #[test]
    fn add_cancels_to_zero() {
        let a = Chain::unit(1, g("f"));
        let b = a.sub(&Chain::unit(1, g("f")));
        assert!(b.is_zero());
        assert_eq!(b, Chain::zero(1));
    }

    #[test]
    fn pos_neg_decomposition() {
        let c = Chain::from_entries(0, [(g("x"), 2), (g("y"), -3)]);
        assert_eq!(c.pos_part(), Chain::from_entries(0, [(g("x"), 2)]));
        assert_eq!(c.neg_part(), Chain::from_entries(0, [(g("y"), 3)]));
        assert_eq!(c.pos_part().sub(&c.neg_part()), c);
        assert_eq!(c.total(), -1);
    }
}
