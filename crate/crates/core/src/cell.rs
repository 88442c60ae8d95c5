//! Cells of a free ∞-category in canonical form.
//!
//! A cell of dimension n is a double table of non-negative chains
//! `x⁻_0, x⁺_0, …, x⁻_n, x⁺_n` with `x⁻_n = x⁺_n`, each level satisfying
//! `∂(x^α_k) = x⁺_{k−1} − x⁻_{k−1}` and augmentation 1 at the bottom. All
//! globular operations — source, target, identity, composition — are chain
//! arithmetic on these tables, and equality of arrows is table equality.

use std::collections::BTreeSet;

use crate::chain::Chain;
use crate::complex::{DirComplex, GenId};
use crate::error::{Error, Result};

/// Canonical form of an arrow of the free ∞-category on a `DirComplex`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellTable {
    /// `tables[k] = (x⁻_k, x⁺_k)`; the two entries at the top coincide.
    tables: Vec<(Chain, Chain)>,
}

impl CellTable {
    /// The 0-cell sitting at a single basis element.
    pub fn object(id: GenId) -> CellTable {
        let c = Chain::unit(0, id);
        CellTable { tables: vec![(c.clone(), c)] }
    }

    pub fn from_tables(tables: Vec<(Chain, Chain)>) -> Result<CellTable> {
        if tables.is_empty() {
            return Err(Error::Precondition("a cell table needs at least dimension 0".into()));
        }
        for (k, (n, p)) in tables.iter().enumerate() {
            if n.dim() != k || p.dim() != k {
                return Err(Error::DimensionMismatch { expected: k, got: n.dim() });
            }
        }
        let top = tables.last().unwrap();
        if top.0 != top.1 {
            return Err(Error::Precondition("top tables of a cell must coincide".into()));
        }
        Ok(CellTable { tables })
    }

    pub fn dim(&self) -> usize {
        self.tables.len() - 1
    }

    /// Shared top chain `x_n`.
    pub fn top(&self) -> &Chain {
        &self.tables.last().unwrap().0
    }

    pub fn neg(&self, k: usize) -> &Chain {
        &self.tables[k].0
    }

    pub fn pos(&self, k: usize) -> &Chain {
        &self.tables[k].1
    }

    /// A cell with zero top chain is an identity on its truncation.
    pub fn is_identity(&self) -> bool {
        self.dim() >= 1 && self.top().is_zero()
    }

    /// Full validation against the carrying complex.
    pub fn validate(&self, complex: &DirComplex) -> Result<()> {
        for (k, (n, p)) in self.tables.iter().enumerate() {
            for (side, ch) in [("neg", n), ("pos", p)] {
                if !ch.is_nonneg() {
                    return Err(Error::Precondition(format!("{side} table at level {k} is not a positive chain")));
                }
                for g in ch.support() {
                    if complex.dim_of(g) != Some(k) {
                        return Err(Error::UnknownGenerator(g.clone()));
                    }
                }
            }
            if k == 0 {
                if n.total() != 1 || p.total() != 1 {
                    return Err(Error::Precondition("augmentation of a cell's 0-tables must be 1".into()));
                }
            } else {
                let want = self.tables[k - 1].1.sub(&self.tables[k - 1].0);
                for ch in [n, p] {
                    if complex.boundary_chain(ch)? != want {
                        return Err(Error::BoundaryMismatch { context: format!("cell table level {k}") });
                    }
                }
            }
        }
        Ok(())
    }

    /// Globular source `π⁻_k`.
    pub fn source(&self, k: usize) -> Result<CellTable> {
        self.truncate(k, false)
    }

    /// Globular target `π⁺_k`.
    pub fn target(&self, k: usize) -> Result<CellTable> {
        self.truncate(k, true)
    }

    fn truncate(&self, k: usize, pos: bool) -> Result<CellTable> {
        if k > self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: k });
        }
        let mut tables: Vec<(Chain, Chain)> = self.tables[..k].to_vec();
        let top = if pos { self.tables[k].1.clone() } else { self.tables[k].0.clone() };
        tables.push((top.clone(), top));
        Ok(CellTable { tables })
    }

    /// The identity cell one dimension up.
    pub fn identity(&self) -> CellTable {
        let mut tables = self.tables.clone();
        let d = self.dim() + 1;
        tables.push((Chain::zero(d), Chain::zero(d)));
        CellTable { tables }
    }

    /// Pad with identities up to dimension `d`.
    pub fn pad_to(&self, d: usize) -> CellTable {
        let mut out = self.clone();
        while out.dim() < d {
            out = out.identity();
        }
        out
    }

    /// Composition `self #_k other`; top dimensions are equalized by identity
    /// padding first. Defined when `target(self,k) = source(other,k)`.
    pub fn compose(&self, other: &CellTable, k: usize) -> Result<CellTable> {
        let d = self.dim().max(other.dim());
        if k >= d {
            return Err(Error::NotComposable { k });
        }
        let x = self.pad_to(d);
        let y = other.pad_to(d);
        if x.target(k)? != y.source(k)? {
            return Err(Error::NotComposable { k });
        }
        let mut tables = Vec::with_capacity(d + 1);
        for i in 0..=d {
            if i <= k {
                tables.push((x.tables[i].0.clone(), y.tables[i].1.clone()));
            } else {
                tables.push((x.tables[i].0.add(&y.tables[i].0), x.tables[i].1.add(&y.tables[i].1)));
            }
        }
        Ok(CellTable { tables })
    }

    /// Generators of dimension `d` appearing in the cell: the shared table at
    /// the top, the union of both tables below.
    pub fn support(&self, d: usize) -> Result<BTreeSet<GenId>> {
        if d > self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: d });
        }
        let (n, p) = &self.tables[d];
        Ok(n.support().chain(p.support()).cloned().collect())
    }

    pub fn relabel(&self, f: &impl Fn(&GenId) -> GenId) -> CellTable {
        let map = |c: &Chain| Chain::from_entries(c.dim(), c.iter().map(|(g, k)| (f(g), k)));
        CellTable { tables: self.tables.iter().map(|(n, p)| (map(n), map(p))).collect() }
    }

    /// Linear transport along a chain-level map; used by morphism application.
    pub fn map_chains(&self, f: &impl Fn(&Chain) -> Chain) -> CellTable {
        CellTable { tables: self.tables.iter().map(|(n, p)| (f(n), f(p))).collect() }
    }
}

/// Atom computed by pure iterated boundary splitting, ignoring stored
/// attachment tables. This is the Steiner canonical cell when it exists.
pub fn split_atom(complex: &DirComplex, id: &GenId) -> Result<CellTable> {
    let dim = complex.dim_of(id).ok_or_else(|| Error::UnknownGenerator(id.clone()))?;
    let top = Chain::unit(dim, id.clone());
    let mut tables = vec![(top.clone(), top)];
    for _ in 0..dim {
        let (n, p) = &tables[0];
        let lower_n = complex.boundary_chain(n)?.neg_part();
        let lower_p = complex.boundary_chain(p)?.pos_part();
        tables.insert(0, (lower_n, lower_p));
    }
    CellTable::from_tables(tables)
}

/// The canonical cell `⟨b⟩` of a generator: explicit attachment tables when
/// present, iterated boundary splitting otherwise.
pub fn atom(complex: &DirComplex, id: &GenId) -> Result<CellTable> {
    let dim = complex.dim_of(id).ok_or_else(|| Error::UnknownGenerator(id.clone()))?;
    if let Some((src, tgt)) = complex.attachment(id) {
        return atom_from_pair(dim, id, src, tgt);
    }
    split_atom(complex, id)
}

/// Assemble an atom of dimension `dim` from its parallel source/target cells.
pub fn atom_from_pair(dim: usize, id: &GenId, src: &CellTable, tgt: &CellTable) -> Result<CellTable> {
    if dim == 0 || src.dim() != dim - 1 || tgt.dim() != dim - 1 {
        return Err(Error::DimensionMismatch { expected: dim.saturating_sub(1), got: src.dim() });
    }
    let mut tables = Vec::with_capacity(dim + 1);
    for k in 0..dim - 1 {
        if src.neg(k) != tgt.neg(k) || src.pos(k) != tgt.pos(k) {
            return Err(Error::BoundaryMismatch { context: format!("attachment of `{id}` is not parallel") });
        }
        tables.push((src.neg(k).clone(), src.pos(k).clone()));
    }
    tables.push((src.top().clone(), tgt.top().clone()));
    let top = Chain::unit(dim, id.clone());
    tables.push((top.clone(), top));
    CellTable::from_tables(tables)
}

/// Unitality plus strong loop-freeness: the complex presents a polygraph with
/// canonical cell arithmetic iff this holds.
pub fn is_loopfree_unital(complex: &DirComplex) -> bool {
    if !complex.validate().ok() || !complex.is_strongly_loopfree() {
        return false;
    }
    for (_, id) in complex.all_gens() {
        match split_atom(complex, id) {
            Ok(a) => {
                if a.validate(complex).is_err() {
                    return false;
                }
                if let Some((s, t)) = complex.attachment(id) {
                    // a stored attachment that disagrees with the split atom
                    // means the presentation is not the free Steiner one
                    let d = a.dim();
                    if d == 0 || &a.source(d - 1).unwrap() != s || &a.target(d - 1).unwrap() != t {
                        return false;
                    }
                }
            }
            Err(_) => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygraph::{globe_complex, Polygraph};

    fn e(n: &str) -> GenId {
        GenId::name(n)
    }

    #[test]
    fn atom_of_globe_arrow() {
        let d1 = globe_complex(1);
        let a = atom(&d1, &e("e1")).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.neg(0), &Chain::unit(0, e("e0-")));
        assert_eq!(a.pos(0), &Chain::unit(0, e("e0+")));
        assert_eq!(a.top(), &Chain::unit(1, e("e1")));
        a.validate(&d1).unwrap();
    }

    #[test]
    fn atom_of_point() {
        let d0 = globe_complex(0);
        let a = atom(&d0, &e("e0")).unwrap();
        assert_eq!(a.dim(), 0);
        assert_eq!(a, CellTable::object(e("e0")));
    }

    #[test]
    fn unknown_basis_id_is_an_error() {
        let d1 = globe_complex(1);
        assert!(matches!(atom(&d1, &e("nope")), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn source_of_globe_atom_is_lower_atom() {
        let d2 = globe_complex(2);
        let top = atom(&d2, &e("e2")).unwrap();
        assert_eq!(top.source(1).unwrap(), atom(&d2, &e("e1-")).unwrap());
        assert_eq!(top.target(1).unwrap(), atom(&d2, &e("e1+")).unwrap());
    }

    #[test]
    fn identity_axioms() {
        let d2 = globe_complex(2);
        let x = atom(&d2, &e("e2")).unwrap();
        let i = x.identity();
        assert_eq!(i.source(2).unwrap(), x);
        assert_eq!(i.target(2).unwrap(), x);
        // right and left unit laws
        assert_eq!(x.compose(&x.target(2 - 1).unwrap().identity(), 1).unwrap(), x);
        assert_eq!(x.source(1).unwrap().identity().compose(&x, 1).unwrap(), x);
        // iterated identity has its top two chains zero
        let ii = i.identity();
        assert!(ii.top().is_zero() && ii.neg(3).is_zero());
    }

    #[test]
    fn composition_in_a_path() {
        let path = Polygraph::path(2);
        let f = path.atom(&e("a0")).unwrap();
        let g = path.atom(&e("a1")).unwrap();
        let fg = f.compose(&g, 0).unwrap();
        assert_eq!(fg.top(), &Chain::from_entries(1, [(e("a0"), 1), (e("a1"), 1)]));
        assert_eq!(fg.support(1).unwrap().len(), 2);
        assert!(f.compose(&f, 0).is_err());
    }

    #[test]
    fn globe_is_loopfree_unital() {
        assert!(is_loopfree_unital(&globe_complex(3)));
    }
}
