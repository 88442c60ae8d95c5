//! Polygraph presentations, standard shapes, morphisms, and the colimit forms
//! used everywhere else: coproducts, cell attachments along sphere maps, and
//! collapse of a 1-generator.
//!
//! A polygraph is a validated `DirComplex` viewed as a presentation. Complexes
//! with a strongly loop-free unital basis ("Steiner grade") enjoy full cell
//! arithmetic; presentations outside that fragment (cells attached onto
//! identities, quotients with loops) remain constructible but refuse the
//! operations that rely on canonical forms.

use std::collections::{BTreeMap, BTreeSet};

use crate::cell::{atom, atom_from_pair, is_loopfree_unital, CellTable};
use crate::chain::Chain;
use crate::complex::{DirComplex, GenId};
use crate::error::{Error, Result};

/// The standard globe complex `D_n`.
pub fn globe_complex(n: usize) -> DirComplex {
    let mut c = DirComplex::new();
    let gen = |k: usize, sign: &str| -> GenId {
        if k == n {
            GenId::name(format!("e{n}"))
        } else {
            GenId::name(format!("e{k}{sign}"))
        }
    };
    if n == 0 {
        c.add_gen0(GenId::name("e0")).unwrap();
        return c;
    }
    c.add_gen0(gen(0, "-")).unwrap();
    c.add_gen0(gen(0, "+")).unwrap();
    for k in 1..=n {
        let src = Chain::unit(k - 1, gen(k - 1, "-"));
        let tgt = Chain::unit(k - 1, gen(k - 1, "+"));
        if k == n {
            c.add_gen(gen(n, ""), k, src, tgt).unwrap();
        } else {
            c.add_gen(gen(k, "-"), k, src.clone(), tgt.clone()).unwrap();
            c.add_gen(gen(k, "+"), k, src, tgt).unwrap();
        }
    }
    c
}

/// The boundary sphere `∂D_n`; `∂D_0` is empty.
pub fn sphere_complex(n: usize) -> DirComplex {
    if n == 0 {
        return DirComplex::new();
    }
    let full = globe_complex(n);
    let keep: BTreeSet<GenId> = full
        .all_gens()
        .filter(|(d, _)| *d < n)
        .map(|(_, g)| g.clone())
        .collect();
    full.restrict(&keep).unwrap()
}

/// A presentation by generators: a validated directed complex plus a label.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygraph {
    complex: DirComplex,
    name: String,
    steiner: bool,
}

impl Polygraph {
    /// Wrap a complex; fails when the `DirComplex` invariants are violated.
    /// Strong loop-freeness and unitality are checked eagerly and cached.
    pub fn new(name: impl Into<String>, complex: DirComplex) -> Result<Polygraph> {
        let report = complex.validate();
        if !report.ok() {
            return Err(Error::InvalidComplex(report.violations.join("; ")));
        }
        let steiner = is_loopfree_unital(&complex);
        Ok(Polygraph { complex, name: name.into(), steiner })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn complex(&self) -> &DirComplex {
        &self.complex
    }

    /// True when canonical cell arithmetic is available.
    pub fn is_steiner(&self) -> bool {
        self.steiner
    }

    pub fn require_steiner(&self, context: &str) -> Result<()> {
        if self.steiner {
            Ok(())
        } else {
            Err(Error::NotSteiner(format!("{context} on `{}`", self.name)))
        }
    }

    pub fn gen_counts(&self) -> Vec<usize> {
        self.complex.gen_counts()
    }

    pub fn max_dim(&self) -> usize {
        self.complex.max_dim()
    }

    pub fn atom(&self, id: &GenId) -> Result<CellTable> {
        atom(&self.complex, id)
    }

    /// Standard globe.
    pub fn globe(n: usize) -> Polygraph {
        Polygraph::new(format!("D{n}"), globe_complex(n)).unwrap()
    }

    /// Standard sphere.
    pub fn sphere(n: usize) -> Polygraph {
        Polygraph::new(format!("bD{n}"), sphere_complex(n)).unwrap()
    }

    pub fn empty() -> Polygraph {
        Polygraph::new("empty", DirComplex::new()).unwrap()
    }

    pub fn point() -> Polygraph {
        Polygraph::globe(0)
    }

    /// Linear path with `n` arrows `a0, …, a{n-1}` on objects `p0, …, pn`.
    pub fn path(n: usize) -> Polygraph {
        let mut c = DirComplex::new();
        for i in 0..=n {
            c.add_gen0(GenId::name(format!("p{i}"))).unwrap();
        }
        for i in 0..n {
            c.add_gen(
                GenId::name(format!("a{i}")),
                1,
                Chain::unit(0, GenId::name(format!("p{i}"))),
                Chain::unit(0, GenId::name(format!("p{}", i + 1))),
            )
            .unwrap();
        }
        Polygraph::new(format!("path{n}"), c).unwrap()
    }

    /// n-fold suspension.
    pub fn suspend(&self, n: usize) -> Polygraph {
        let mut p = self.clone();
        for _ in 0..n {
            let complex = crate::join::suspension_complex(&p.complex);
            p = Polygraph::new(format!("S({})", p.name), complex).expect("suspension preserves validity");
        }
        p
    }

    /// Disjoint union with namespaced identifiers.
    pub fn coproduct(ps: &[Polygraph]) -> Polygraph {
        let mut c = DirComplex::new();
        for (i, p) in ps.iter().enumerate() {
            let tag = i.to_string();
            let relabeled = p.complex.relabel(&|g| GenId::tag(tag.clone(), g.clone())).unwrap();
            for (dim, level) in (0..=relabeled.max_dim()).map(|d| (d, relabeled.gens_of_dim(d).cloned().collect::<Vec<_>>())) {
                for g in level {
                    if dim == 0 {
                        c.add_gen0(g).unwrap();
                    } else {
                        let src = relabeled.boundary_neg(&g).unwrap().clone();
                        let tgt = relabeled.boundary_pos(&g).unwrap().clone();
                        c.add_gen(g.clone(), dim, src, tgt).unwrap();
                    }
                }
            }
            for (g, (s, t)) in relabeled.attachments() {
                c.set_attachment(g, s.clone(), t.clone()).unwrap();
            }
        }
        Polygraph::new("coproduct", c).unwrap()
    }

    /// Attach one fresh generator per listed (source, target) cell pair. The
    /// fresh generator's atom boundary is exactly the given pair.
    pub fn attach_cells(&self, cells: &[(GenId, CellTable, CellTable)]) -> Result<Polygraph> {
        let mut complex = self.complex.clone();
        for (name, src, tgt) in cells {
            if complex.contains(name) {
                return Err(Error::Precondition(format!("duplicate generator `{name}`")));
            }
            src.validate(&self.complex)?;
            tgt.validate(&self.complex)?;
            if src.dim() != tgt.dim() {
                return Err(Error::DimensionMismatch { expected: src.dim(), got: tgt.dim() });
            }
            let dim = src.dim() + 1;
            // parallelism and table assembly checked here
            let cell = atom_from_pair(dim, name, src, tgt)?;
            complex.add_gen(name.clone(), dim, src.top().clone(), tgt.top().clone())?;
            let split = crate::cell::split_atom(&complex, name);
            let canonical = match split {
                Ok(a) if a == cell && a.validate(&complex).is_ok() => true,
                _ => false,
            };
            if !canonical {
                complex.set_attachment(name, src.clone(), tgt.clone())?;
            }
        }
        Polygraph::new(self.name.clone(), complex)
    }

    /// Attach along sphere morphisms; each map picks the parallel cell pair.
    pub fn pushout_attach(&self, maps: &[(GenId, PolyMorphism)]) -> Result<Polygraph> {
        let mut cells = Vec::new();
        for (name, f) in maps {
            f.check()?;
            if f.target.complex != self.complex {
                return Err(Error::InvalidMorphism("boundary map does not land in the base".into()));
            }
            let n = f.source.max_dim() + 1;
            if f.source.complex != sphere_complex(n) {
                return Err(Error::InvalidMorphism("attachment domain is not a sphere".into()));
            }
            let lo = GenId::name(format!("e{}-", n - 1));
            let hi = GenId::name(format!("e{}+", n - 1));
            let src = f.assignment[&lo].clone();
            let tgt = f.assignment[&hi].clone();
            cells.push((name.clone(), src, tgt));
        }
        self.attach_cells(&cells)
    }

    /// Quotient by a 1-generator between distinct objects: merge its
    /// endpoints, delete the generator, substitute through every boundary.
    pub fn collapse_generator(&self, g: &GenId) -> Result<(Polygraph, PolyMorphism)> {
        if self.complex.dim_of(g) != Some(1) {
            return Err(Error::Precondition(format!("`{g}` is not a 1-generator")));
        }
        let src = self.complex.boundary_neg(g)?.clone();
        let tgt = self.complex.boundary_pos(g)?.clone();
        let (a, b) = match (single_unit(&src), single_unit(&tgt)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Precondition(format!("`{g}` has a composite boundary"))),
        };
        if a == b {
            return Err(Error::Precondition(format!("`{g}` is an endo-arrow; collapse refused")));
        }
        let subst = |c: &Chain| -> Chain {
            c.map_basis(c.dim(), |id| {
                if id == g {
                    None
                } else if *id == b {
                    Some(Chain::unit(0, a.clone()))
                } else {
                    Some(Chain::unit(c.dim(), id.clone()))
                }
            })
        };
        let mut out = DirComplex::new();
        for (dim, id) in self.complex.all_gens() {
            if id == g || *id == b {
                continue;
            }
            if dim == 0 {
                out.add_gen0(id.clone())?;
            } else {
                out.add_gen(
                    id.clone(),
                    dim,
                    subst(self.complex.boundary_neg(id)?),
                    subst(self.complex.boundary_pos(id)?),
                )?;
            }
        }
        for (id, (s, t)) in self.complex.attachments() {
            if id != g {
                out.set_attachment(id, s.map_chains(&subst), t.map_chains(&subst))?;
            }
        }
        let quotient = Polygraph::new(format!("{}/{g}", self.name), out)?;
        let mut assignment = BTreeMap::new();
        for (_, id) in self.complex.all_gens() {
            let image = if id == g {
                CellTable::object(a.clone()).identity()
            } else if *id == b {
                CellTable::object(a.clone())
            } else {
                atom(&self.complex, id)?.map_chains(&subst)
            };
            assignment.insert(id.clone(), image);
        }
        let morphism = PolyMorphism { source: self.clone(), target: quotient.clone(), assignment };
        Ok((quotient, morphism))
    }
}

fn single_unit(c: &Chain) -> Option<GenId> {
    let mut it = c.iter();
    match (it.next(), it.next()) {
        (Some((g, 1)), None) => Some(g.clone()),
        _ => None,
    }
}

/// The inclusion `i_n : ∂D_n → D_n`.
pub fn sphere_inclusion(n: usize) -> PolyMorphism {
    let sphere = Polygraph::sphere(n);
    let globe = Polygraph::globe(n);
    let assignment = sphere
        .complex()
        .all_gens()
        .map(|(_, g)| (g.clone(), atom(globe.complex(), g).unwrap()))
        .collect();
    PolyMorphism { source: sphere, target: globe, assignment }
}

/// A morphism of free ∞-categories, given by its values on generators.
/// Degenerate images (identities of lower cells) are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMorphism {
    pub source: Polygraph,
    pub target: Polygraph,
    pub assignment: BTreeMap<GenId, CellTable>,
}

impl PolyMorphism {
    pub fn new(
        source: Polygraph,
        target: Polygraph,
        assignment: BTreeMap<GenId, CellTable>,
    ) -> Result<PolyMorphism> {
        let f = PolyMorphism { source, target, assignment };
        f.check()?;
        Ok(f)
    }

    pub fn identity(p: &Polygraph) -> PolyMorphism {
        let assignment = p
            .complex()
            .all_gens()
            .map(|(_, g)| (g.clone(), atom(p.complex(), g).unwrap()))
            .collect();
        PolyMorphism { source: p.clone(), target: p.clone(), assignment }
    }

    /// Boundary compatibility, generator by generator: the linear transport of
    /// each generator's atom must reproduce the assigned cell at every level.
    pub fn check(&self) -> Result<()> {
        for (dim, g) in self.source.complex().all_gens() {
            let img = self
                .assignment
                .get(g)
                .ok_or_else(|| Error::InvalidMorphism(format!("no image for generator `{g}`")))?;
            if img.dim() != dim {
                return Err(Error::InvalidMorphism(format!("image of `{g}` has wrong dimension")));
            }
            img.validate(self.target.complex())
                .map_err(|e| Error::InvalidMorphism(format!("image of `{g}` invalid: {e}")))?;
            let a = atom(self.source.complex(), g)?;
            let mapped = a.map_chains(&|c| self.chain_image(c));
            if &mapped != img {
                return Err(Error::BoundaryMismatch { context: format!("generator `{g}`") });
            }
        }
        Ok(())
    }

    /// Linear extension of the assignment to chains.
    pub fn chain_image(&self, c: &Chain) -> Chain {
        c.map_basis(c.dim(), |g| self.assignment.get(g).map(|cell| cell.top().clone()))
    }

    /// Functorial action on canonical cells.
    pub fn apply(&self, x: &CellTable) -> Result<CellTable> {
        x.validate(self.source.complex())?;
        let img = x.map_chains(&|c| self.chain_image(c));
        img.validate(self.target.complex())?;
        Ok(img)
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, other: &PolyMorphism) -> Result<PolyMorphism> {
        if self.target.complex() != other.source.complex() {
            return Err(Error::InvalidMorphism("composition domains do not match".into()));
        }
        let assignment = self
            .assignment
            .iter()
            .map(|(g, cell)| Ok((g.clone(), other.apply(cell)?)))
            .collect::<Result<_>>()?;
        Ok(PolyMorphism { source: self.source.clone(), target: other.target.clone(), assignment })
    }

    /// True when every generator maps to a generator's atom.
    pub fn is_polygraphic(&self) -> bool {
        self.assignment.values().all(|cell| {
            cell.top().iter().count() == 1 && cell.top().iter().all(|(_, k)| k == 1) && {
                let (g, _) = cell.top().iter().next().unwrap();
                atom(self.target.complex(), g).map(|a| &a == cell).unwrap_or(false)
            }
        })
    }

    /// True when the morphism is the identity-on-name inclusion of a
    /// sub-polygraph.
    pub fn is_inclusion(&self) -> bool {
        self.source.complex().all_gens().all(|(_, g)| {
            self.assignment
                .get(g)
                .map(|cell| atom(self.target.complex(), g).map(|a| &a == cell).unwrap_or(false))
                .unwrap_or(false)
        })
    }
}

/// How an enumerated cell first arose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellKind {
    Atom(GenId),
    Identity(usize),
    Composite(usize, usize, usize),
}

/// Exhaustive tabulation of the cells of a free ∞-category up to a dimension,
/// with one construction witness per cell.
#[derive(Debug, Clone)]
pub struct Tabulation {
    pub cells: Vec<Vec<CellTable>>,
    pub kinds: Vec<Vec<CellKind>>,
    index: BTreeMap<CellTable, (usize, usize)>,
}

impl Tabulation {
    pub fn index_of(&self, cell: &CellTable) -> Option<(usize, usize)> {
        self.index.get(cell).copied()
    }

    pub fn cell(&self, dim: usize, idx: usize) -> &CellTable {
        &self.cells[dim][idx]
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, |v| v.len())
    }

    pub fn total(&self) -> usize {
        self.cells.iter().map(|v| v.len()).sum()
    }
}

impl Polygraph {
    /// Enumerate every cell of the free ∞-category up to `max_dim`. Errors
    /// with `BudgetExhausted` when more than `budget` cells appear.
    pub fn enumerate_cells(&self, max_dim: usize, budget: usize) -> Result<Tabulation> {
        let (tab, complete) = self.tabulate(max_dim, budget)?;
        if complete {
            Ok(tab)
        } else {
            Err(Error::BudgetExhausted { budget, context: "cell enumeration".into() })
        }
    }

    /// Enumerate cells up to `max_dim`, stopping at the budget; the flag
    /// reports whether the tabulation is complete.
    pub fn tabulate(&self, max_dim: usize, budget: usize) -> Result<(Tabulation, bool)> {
        self.require_steiner("cell enumeration")?;
        let mut tab = Tabulation { cells: Vec::new(), kinds: Vec::new(), index: BTreeMap::new() };
        let push = |tab: &mut Tabulation, d: usize, cell: CellTable, kind: CellKind| -> Option<bool> {
            if tab.index.contains_key(&cell) {
                return Some(false);
            }
            if tab.total() >= budget {
                return None;
            }
            tab.index.insert(cell.clone(), (d, tab.cells[d].len()));
            tab.cells[d].push(cell);
            tab.kinds[d].push(kind);
            Some(true)
        };
        for d in 0..=max_dim {
            tab.cells.push(Vec::new());
            tab.kinds.push(Vec::new());
            if d > 0 {
                for i in 0..tab.cells[d - 1].len() {
                    let id = tab.cells[d - 1][i].identity();
                    if push(&mut tab, d, id, CellKind::Identity(i)).is_none() {
                        return Ok((tab, false));
                    }
                }
            }
            for g in self.complex.gens_of_dim(d).cloned().collect::<Vec<_>>() {
                let a = atom(&self.complex, &g)?;
                if push(&mut tab, d, a, CellKind::Atom(g)).is_none() {
                    return Ok((tab, false));
                }
            }
            // close this dimension under all compositions
            let mut frontier: Vec<usize> = (0..tab.cells[d].len()).collect();
            while !frontier.is_empty() {
                let mut fresh = Vec::new();
                let total = tab.cells[d].len();
                for i in 0..total {
                    for j in 0..total {
                        if !frontier.contains(&i) && !frontier.contains(&j) {
                            continue;
                        }
                        for k in 0..d {
                            let z = {
                                let x = &tab.cells[d][i];
                                let y = &tab.cells[d][j];
                                x.compose(y, k).ok()
                            };
                            if let Some(z) = z {
                                match push(&mut tab, d, z, CellKind::Composite(i, k, j)) {
                                    None => return Ok((tab, false)),
                                    Some(true) => fresh.push(tab.cells[d].len() - 1),
                                    Some(false) => {}
                                }
                            }
                        }
                    }
                }
                frontier = fresh;
            }
        }
        Ok((tab, true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> GenId {
        GenId::name(s)
    }

    #[test]
    fn globe_and_sphere_counts() {
        assert_eq!(Polygraph::globe(2).gen_counts(), vec![2, 2, 1]);
        assert_eq!(Polygraph::sphere(2).gen_counts(), vec![2, 2]);
        assert!(Polygraph::sphere(0).complex().is_empty());
    }

    #[test]
    fn sphere_inclusion_checks() {
        let i2 = sphere_inclusion(2);
        i2.check().unwrap();
        assert!(i2.is_inclusion());
    }

    #[test]
    fn suspension_of_arrow_is_two_globe() {
        let d1 = Polygraph::globe(1);
        let s = d1.suspend(1);
        assert_eq!(s.gen_counts(), vec![2, 2, 1]);
        assert!(s.is_steiner());
        // suspension of the empty polygraph has only the two poles
        let e = Polygraph::empty().suspend(1);
        assert_eq!(e.gen_counts(), vec![2]);
    }

    #[test]
    fn coproduct_of_points_and_empty() {
        let two = Polygraph::coproduct(&[Polygraph::point(), Polygraph::point()]);
        assert_eq!(two.gen_counts(), vec![2]);
        let none = Polygraph::coproduct(&[]);
        assert!(none.complex().is_empty());
    }

    #[test]
    fn identity_morphism_applies_as_id() {
        let d2 = Polygraph::globe(2);
        let f = PolyMorphism::identity(&d2);
        f.check().unwrap();
        let x = d2.atom(&n("e2")).unwrap();
        assert_eq!(f.apply(&x).unwrap(), x);
        assert!(f.is_polygraphic());
    }

    #[test]
    fn degenerate_image_morphism_is_valid() {
        // D_1 -> D_0 sending the arrow to the identity of the point
        let d1 = Polygraph::globe(1);
        let d0 = Polygraph::point();
        let pt = CellTable::object(n("e0"));
        let mut assignment = BTreeMap::new();
        assignment.insert(n("e0-"), pt.clone());
        assignment.insert(n("e0+"), pt.clone());
        assignment.insert(n("e1"), pt.identity());
        let f = PolyMorphism::new(d1, d0, assignment).unwrap();
        assert!(!f.is_polygraphic());
        assert!(f.apply(&f.source.atom(&n("e1")).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn attach_and_remove_recovers_base() {
        // attach a 2-cell to the parallel pair in the 1-sphere
        let base = Polygraph::sphere(2);
        let u = base.atom(&n("e1-")).unwrap();
        let v = base.atom(&n("e1+")).unwrap();
        let bigger = base.attach_cells(&[(n("cell"), u, v)]).unwrap();
        assert_eq!(bigger.gen_counts(), vec![2, 2, 1]);
        assert!(bigger.is_steiner());
        let keep: BTreeSet<GenId> = base.complex().all_gens().map(|(_, g)| g.clone()).collect();
        let back = bigger.complex().restrict(&keep).unwrap();
        assert_eq!(&back, base.complex());
    }

    #[test]
    fn attach_nothing_is_base() {
        let base = Polygraph::globe(1);
        let same = base.attach_cells(&[]).unwrap();
        assert_eq!(same.complex(), base.complex());
    }

    #[test]
    fn collapse_globe_arrow_gives_point() {
        let d1 = Polygraph::globe(1);
        let (q, f) = d1.collapse_generator(&n("e1")).unwrap();
        assert_eq!(q.gen_counts(), vec![1]);
        f.check().unwrap();
        assert!(f.assignment[&n("e1")].is_identity());
    }

    #[test]
    fn collapse_endo_refused() {
        // build a presentation-grade polygraph with an endo-arrow via attach
        let pt = Polygraph::point();
        let o = CellTable::object(n("e0"));
        let loopy = pt.attach_cells(&[(n("f"), o.clone(), o)]).unwrap();
        assert!(!loopy.is_steiner());
        assert!(loopy.collapse_generator(&n("f")).is_err());
    }

    #[test]
    fn enumerate_cells_of_interval() {
        let d1 = Polygraph::globe(1);
        let tab = d1.enumerate_cells(2, 100).unwrap();
        assert_eq!(tab.count(0), 2);
        assert_eq!(tab.count(1), 3); // two identities and the arrow
        assert_eq!(tab.count(2), 3); // identities only
    }
}
