//! Directed chain complexes with a graded basis.
//!
//! A `DirComplex` is the presentation substrate for a free ∞-category: a
//! finite graded basis where every element of dimension ≥ 1 carries a pair of
//! positive chains one dimension lower (its negative and positive boundary),
//! subject to ∂∂ = 0 and augmentation zero on 1-dimensional boundaries.
//!
//! Basis identifiers are structured so provenance survives the constructions:
//! a tensor basis element is the ordered pair of its parents, a join element
//! the pair of joined cells, a suspended element wraps the original.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cell::CellTable;
use crate::chain::Chain;
use crate::error::{Error, Result};

/// Structured identifier of a basis element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenId {
    /// Plain named generator.
    Name(String),
    /// Suspension pole; `false` is the source pole, `true` the target pole.
    Pole(bool),
    /// Image of a generator under suspension.
    Susp(Box<GenId>),
    /// Tensor basis element `a ⊗ b`.
    Tensor(Box<GenId>, Box<GenId>),
    /// Join basis element `a ⋆ b`.
    Join(Box<GenId>, Box<GenId>),
    /// Namespaced generator (coproducts, attachments).
    Tag(String, Box<GenId>),
    /// Oriental basis element, a set of simplex vertices.
    Simplex(Vec<u8>),
}

impl GenId {
    pub fn name(s: impl Into<String>) -> Self {
        GenId::Name(s.into())
    }

    pub fn tensor(a: GenId, b: GenId) -> Self {
        GenId::Tensor(Box::new(a), Box::new(b))
    }

    pub fn join(a: GenId, b: GenId) -> Self {
        GenId::Join(Box::new(a), Box::new(b))
    }

    pub fn susp(a: GenId) -> Self {
        GenId::Susp(Box::new(a))
    }

    pub fn tag(t: impl Into<String>, a: GenId) -> Self {
        GenId::Tag(t.into(), Box::new(a))
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenId::Name(s) => write!(f, "{s}"),
            GenId::Pole(false) => write!(f, "@-"),
            GenId::Pole(true) => write!(f, "@+"),
            GenId::Susp(a) => write!(f, "S({a})"),
            GenId::Tensor(a, b) => write!(f, "T({a},{b})"),
            GenId::Join(a, b) => write!(f, "J({a},{b})"),
            GenId::Tag(t, a) => write!(f, "N({t},{a})"),
            GenId::Simplex(vs) => {
                write!(f, "[")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Boundary data of a basis element of dimension ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenBoundary {
    /// Negative boundary, a positive chain one dimension lower.
    pub src: Chain,
    /// Positive boundary, a positive chain one dimension lower.
    pub tgt: Chain,
}

/// Graded basis with signed boundary decomposition.
///
/// `attachments` carries full source/target tables for generators whose
/// attachment cells cannot be recovered from the chains by iterated boundary
/// splitting. Complexes in the Steiner fragment never need it; presentation
/// grade polygraphs (cells glued onto identities or whiskered composites) do.
#[derive(Debug, Clone, PartialEq)]
pub struct DirComplex {
    basis: Vec<BTreeMap<GenId, Option<GenBoundary>>>,
    attachments: BTreeMap<GenId, (CellTable, CellTable)>,
}

/// Outcome of `validate_complex`: OK iff no violations.
#[derive(Debug, Clone, Default)]
pub struct ValidityReport {
    pub violations: Vec<String>,
}

impl ValidityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Default for DirComplex {
    fn default() -> Self {
        Self::new()
    }
}

impl DirComplex {
    pub fn new() -> Self {
        DirComplex { basis: Vec::new(), attachments: BTreeMap::new() }
    }

    /// Number of graded levels present (one more than the top dimension).
    pub fn levels(&self) -> usize {
        self.basis.len()
    }

    pub fn max_dim(&self) -> usize {
        self.basis.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.basis.iter().all(|l| l.is_empty())
    }

    pub fn gen_counts(&self) -> Vec<usize> {
        self.basis.iter().map(|l| l.len()).collect()
    }

    pub fn gens_of_dim(&self, d: usize) -> impl Iterator<Item = &GenId> {
        self.basis.get(d).into_iter().flat_map(|l| l.keys())
    }

    pub fn all_gens(&self) -> impl Iterator<Item = (usize, &GenId)> {
        self.basis.iter().enumerate().flat_map(|(d, l)| l.keys().map(move |g| (d, g)))
    }

    pub fn contains(&self, id: &GenId) -> bool {
        self.dim_of(id).is_some()
    }

    pub fn dim_of(&self, id: &GenId) -> Option<usize> {
        self.basis.iter().position(|l| l.contains_key(id))
    }

    pub fn add_gen0(&mut self, id: GenId) -> Result<()> {
        self.insert(id, 0, None)
    }

    pub fn add_gen(&mut self, id: GenId, dim: usize, src: Chain, tgt: Chain) -> Result<()> {
        if dim == 0 {
            return Err(Error::Precondition("dimension-0 generators carry no boundary".into()));
        }
        if src.dim() != dim - 1 || tgt.dim() != dim - 1 {
            return Err(Error::DimensionMismatch { expected: dim - 1, got: src.dim() });
        }
        self.insert(id, dim, Some(GenBoundary { src, tgt }))
    }

    /// Record an explicit attachment table for a generator already present.
    pub fn set_attachment(&mut self, id: &GenId, src: CellTable, tgt: CellTable) -> Result<()> {
        if !self.contains(id) {
            return Err(Error::UnknownGenerator(id.clone()));
        }
        self.attachments.insert(id.clone(), (src, tgt));
        Ok(())
    }

    pub fn attachment(&self, id: &GenId) -> Option<&(CellTable, CellTable)> {
        self.attachments.get(id)
    }

    pub fn attachments(&self) -> impl Iterator<Item = (&GenId, &(CellTable, CellTable))> {
        self.attachments.iter()
    }

    fn insert(&mut self, id: GenId, dim: usize, bnd: Option<GenBoundary>) -> Result<()> {
        if self.contains(&id) {
            return Err(Error::Precondition(format!("duplicate basis id `{id}`")));
        }
        while self.basis.len() <= dim {
            self.basis.push(BTreeMap::new());
        }
        self.basis[dim].insert(id, bnd);
        Ok(())
    }

    pub fn boundary_neg(&self, id: &GenId) -> Result<&Chain> {
        self.bnd(id).map(|b| &b.src)
    }

    pub fn boundary_pos(&self, id: &GenId) -> Result<&Chain> {
        self.bnd(id).map(|b| &b.tgt)
    }

    fn bnd(&self, id: &GenId) -> Result<&GenBoundary> {
        let dim = self.dim_of(id).ok_or_else(|| Error::UnknownGenerator(id.clone()))?;
        self.basis[dim][id]
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("generator `{id}` has dimension 0")))
    }

    /// Signed boundary `∂b = boundary_pos − boundary_neg`.
    pub fn boundary_gen(&self, id: &GenId) -> Result<Chain> {
        let b = self.bnd(id)?;
        Ok(b.tgt.sub(&b.src))
    }

    /// Linear extension of the signed boundary to chains of dimension ≥ 1.
    pub fn boundary_chain(&self, c: &Chain) -> Result<Chain> {
        let mut out = Chain::zero(c.dim() - 1);
        for (id, k) in c.iter() {
            out = out.add(&self.boundary_gen(id)?.scale(k));
        }
        Ok(out)
    }

    /// Check all `DirComplex` invariants; the report lists every violation.
    pub fn validate(&self) -> ValidityReport {
        let mut report = ValidityReport::default();
        for (dim, level) in self.basis.iter().enumerate() {
            for (id, bnd) in level {
                match bnd {
                    None => {
                        if dim != 0 {
                            report.violations.push(format!("`{id}` at dimension {dim} lacks a boundary"));
                        }
                    }
                    Some(b) => {
                        if dim == 0 {
                            report.violations.push(format!("dimension-0 `{id}` carries a boundary"));
                            continue;
                        }
                        for (side, ch) in [("neg", &b.src), ("pos", &b.tgt)] {
                            if !ch.is_nonneg() {
                                report.violations.push(format!("boundary_{side}({id}) has a negative coefficient"));
                            }
                            for g in ch.support() {
                                if self.dim_of(g) != Some(dim - 1) {
                                    report.violations.push(format!(
                                        "boundary_{side}({id}) references `{g}` which is not a basis element of dimension {}",
                                        dim - 1
                                    ));
                                }
                            }
                        }
                        if dim == 1 {
                            // augmentation of ∂b vanishes
                            if b.tgt.total() != b.src.total() {
                                report.violations.push(format!("augmentation of ∂{id} is nonzero"));
                            }
                        } else {
                            match (self.boundary_chain(&b.src), self.boundary_chain(&b.tgt)) {
                                (Ok(ds), Ok(dt)) => {
                                    if ds != dt {
                                        report.violations.push(format!("∂∂ ≠ 0 at `{id}`"));
                                    }
                                }
                                _ => report.violations.push(format!("boundary of `{id}` not computable")),
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Strong loop-freeness: the preorder generated by `u ≤ b` for
    /// `u ∈ supp(∂⁻b)` and `b ≤ v` for `v ∈ supp(∂⁺b)` must be antisymmetric,
    /// i.e. the generated digraph on the basis has no directed cycle.
    pub fn is_strongly_loopfree(&self) -> bool {
        let nodes: Vec<&GenId> = self.basis.iter().flat_map(|l| l.keys()).collect();
        let index: BTreeMap<&GenId, usize> = nodes.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        let mut edges: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nodes.len()];
        for (dim, level) in self.basis.iter().enumerate() {
            if dim == 0 {
                continue;
            }
            for (id, bnd) in level {
                let b = bnd.as_ref().expect("validated");
                let bi = index[id];
                for u in b.src.support() {
                    if let Some(&ui) = index.get(u) {
                        edges[ui].insert(bi);
                    }
                }
                for v in b.tgt.support() {
                    if let Some(&vi) = index.get(v) {
                        edges[bi].insert(vi);
                    }
                }
            }
        }
        // iterative three-colour DFS
        let n = nodes.len();
        let mut colour = vec![0u8; n];
        for start in 0..n {
            if colour[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, false)];
            while let Some((v, processed)) = stack.pop() {
                if processed {
                    colour[v] = 2;
                    continue;
                }
                if colour[v] == 2 {
                    continue;
                }
                if colour[v] == 1 {
                    continue;
                }
                colour[v] = 1;
                stack.push((v, true));
                for &w in &edges[v] {
                    match colour[w] {
                        0 => stack.push((w, false)),
                        1 => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Restrict to the sub-complex spanned by `keep`; every boundary chain of
    /// a kept generator must be supported in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<GenId>) -> Result<DirComplex> {
        let mut out = DirComplex::new();
        for (dim, level) in self.basis.iter().enumerate() {
            for (id, bnd) in level {
                if !keep.contains(id) {
                    continue;
                }
                match bnd {
                    None => out.add_gen0(id.clone())?,
                    Some(b) => {
                        for ch in [&b.src, &b.tgt] {
                            if let Some(g) = ch.support().find(|g| !keep.contains(g)) {
                                return Err(Error::Precondition(format!(
                                    "sub-complex not boundary-closed: `{id}` references `{g}`"
                                )));
                            }
                        }
                        out.add_gen(id.clone(), dim, b.src.clone(), b.tgt.clone())?;
                    }
                }
            }
        }
        for (id, (s, t)) in &self.attachments {
            if keep.contains(id) {
                out.attachments.insert(id.clone(), (s.clone(), t.clone()));
            }
        }
        Ok(out)
    }

    /// Rename every basis element through an injective map.
    pub fn relabel(&self, f: &impl Fn(&GenId) -> GenId) -> Result<DirComplex> {
        let mut out = DirComplex::new();
        let map_chain = |c: &Chain| Chain::from_entries(c.dim(), c.iter().map(|(g, k)| (f(g), k)));
        for (dim, level) in self.basis.iter().enumerate() {
            for (id, bnd) in level {
                match bnd {
                    None => out.add_gen0(f(id))?,
                    Some(b) => out.add_gen(f(id), dim, map_chain(&b.src), map_chain(&b.tgt))?,
                }
            }
        }
        for (id, (s, t)) in &self.attachments {
            out.attachments.insert(f(id), (s.relabel(f), t.relabel(f)));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygraph::globe_complex;

    #[test]
    fn globe_d2_validates() {
        let c = globe_complex(2);
        assert!(c.validate().ok());
        assert!(c.is_strongly_loopfree());
        assert_eq!(c.gen_counts(), vec![2, 2, 1]);
    }

    #[test]
    fn empty_complex_validates() {
        let c = DirComplex::new();
        assert!(c.validate().ok());
        assert!(c.is_strongly_loopfree());
    }

    #[test]
    fn broken_dd_is_reported() {
        // one 2-generator whose boundaries do not share their own boundary
        let mut c = DirComplex::new();
        for n in ["p", "q", "r"] {
            c.add_gen0(GenId::name(n)).unwrap();
        }
        c.add_gen(
            GenId::name("f"),
            1,
            Chain::unit(0, GenId::name("p")),
            Chain::unit(0, GenId::name("q")),
        )
        .unwrap();
        c.add_gen(
            GenId::name("g"),
            1,
            Chain::unit(0, GenId::name("p")),
            Chain::unit(0, GenId::name("r")),
        )
        .unwrap();
        c.add_gen(
            GenId::name("s"),
            2,
            Chain::unit(1, GenId::name("f")),
            Chain::unit(1, GenId::name("g")),
        )
        .unwrap();
        let report = c.validate();
        assert!(!report.ok());
        assert!(report.violations.iter().any(|v| v.contains("∂∂")));
    }

    #[test]
    fn directed_cycle_fails_loopfree_test() {
        // an endo-arrow: its source and target share the basis element
        let mut c = DirComplex::new();
        c.add_gen0(GenId::name("x")).unwrap();
        c.add_gen(
            GenId::name("f"),
            1,
            Chain::unit(0, GenId::name("x")),
            Chain::unit(0, GenId::name("x")),
        )
        .unwrap();
        assert!(c.validate().ok());
        assert!(!c.is_strongly_loopfree());
    }
}
