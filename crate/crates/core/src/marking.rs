//! Markings and their closure operator.
//!
//! A marking is generated by a dimension threshold m together with generator
//! seeds and (occasionally) cell seeds. The closed marking always contains
//! every identity, every arrow of dimension above m, and all composites of
//! marked arrows. Membership is decided exactly when the dimension's seeds
//! are generators (support inclusion); with cell seeds the decision combines
//! an ℕ-span necessary test on top chains with a bounded witness search, and
//! `Unknown` is a first-class answer on budget exhaustion.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use crate::cell::CellTable;
use crate::chain::{Chain, Coeff};
use crate::complex::GenId;
use crate::error::{Error, Result};
use crate::polygraph::Polygraph;

/// Threshold dimension m ∈ ℕ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MarkLevel {
    Finite(usize),
    Infinite,
}

impl MarkLevel {
    /// Is dimension `dim` strictly above the threshold?
    pub fn above(&self, dim: usize) -> bool {
        match self {
            MarkLevel::Finite(m) => dim > *m,
            MarkLevel::Infinite => false,
        }
    }
}

impl fmt::Display for MarkLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkLevel::Finite(m) => write!(f, "{m}"),
            MarkLevel::Infinite => write!(f, "inf"),
        }
    }
}

/// Seed presentation of a closed marking.
#[derive(Debug, Clone, PartialEq)]
pub struct Marking {
    pub m: MarkLevel,
    pub gen_seeds: BTreeSet<GenId>,
    pub cell_seeds: Vec<CellTable>,
}

impl Marking {
    pub fn flat(m: MarkLevel) -> Marking {
        Marking { m, gen_seeds: BTreeSet::new(), cell_seeds: Vec::new() }
    }

    pub fn with_gens(m: MarkLevel, gens: impl IntoIterator<Item = GenId>) -> Marking {
        Marking { m, gen_seeds: gens.into_iter().collect(), cell_seeds: Vec::new() }
    }
}

/// Positive reason a cell is marked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Marked {
    AboveLevel,
    IdentityCell,
    SeedSupport,
    Composite(String),
}

impl fmt::Display for Marked {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Marked::AboveLevel => write!(f, "dimension above threshold"),
            Marked::IdentityCell => write!(f, "identity cell"),
            Marked::SeedSupport => write!(f, "support inside marked generators"),
            Marked::Composite(w) => write!(f, "composite witness: {w}"),
        }
    }
}

/// Three-way membership answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkResult {
    Marked(Marked),
    Unmarked(String),
    Unknown,
}

impl MarkResult {
    pub fn is_marked(&self) -> bool {
        matches!(self, MarkResult::Marked(_))
    }

    pub fn is_unmarked(&self) -> bool {
        matches!(self, MarkResult::Unmarked(_))
    }
}

/// An m-marked free ∞-category: a polygraph with a seed-generated marking.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedCat {
    pub base: Polygraph,
    pub marking: Marking,
}

impl MarkedCat {
    pub fn new(base: Polygraph, marking: Marking) -> Result<MarkedCat> {
        for g in &marking.gen_seeds {
            match base.complex().dim_of(g) {
                None => return Err(Error::UnknownGenerator(g.clone())),
                Some(0) => {
                    return Err(Error::Precondition(format!("seed `{g}` has dimension 0")));
                }
                _ => {}
            }
        }
        for cell in &marking.cell_seeds {
            cell.validate(base.complex())?;
            if cell.dim() == 0 {
                return Err(Error::Precondition("cell seeds must have dimension ≥ 1".into()));
            }
        }
        Ok(MarkedCat { base, marking })
    }

    /// Only-identities marking.
    pub fn flat(base: Polygraph, m: MarkLevel) -> MarkedCat {
        MarkedCat { base, marking: Marking::flat(m) }
    }

    /// Every generator of dimension ≥ 1 seeded.
    pub fn sharp(base: Polygraph, m: MarkLevel) -> MarkedCat {
        let gens = base
            .complex()
            .all_gens()
            .filter(|(d, _)| *d >= 1)
            .map(|(_, g)| g.clone())
            .collect();
        MarkedCat { base, marking: Marking { m, gen_seeds: gens, cell_seeds: Vec::new() } }
    }

    pub fn m(&self) -> MarkLevel {
        self.marking.m
    }

    /// Generators of dimension `d` that are effectively marked (seeded or
    /// above the threshold).
    pub fn marked_gens(&self, d: usize) -> BTreeSet<GenId> {
        if d == 0 {
            return BTreeSet::new();
        }
        if self.marking.m.above(d) {
            return self.base.complex().gens_of_dim(d).cloned().collect();
        }
        self.base
            .complex()
            .gens_of_dim(d)
            .filter(|g| self.marking.gen_seeds.contains(*g))
            .cloned()
            .collect()
    }

    fn cell_seeds_of_dim(&self, d: usize) -> Vec<&CellTable> {
        self.marking.cell_seeds.iter().filter(|c| c.dim() == d).collect()
    }

    /// Exact three-way membership decision for the closed marking.
    pub fn closure_contains(&self, x: &CellTable, budget: usize) -> Result<MarkResult> {
        x.validate(self.base.complex())?;
        let n = x.dim();
        if n == 0 {
            return Err(Error::Precondition("markings concern arrows of dimension ≥ 1".into()));
        }
        if self.marking.m.above(n) {
            return Ok(MarkResult::Marked(Marked::AboveLevel));
        }
        if x.top().is_zero() {
            return Ok(MarkResult::Marked(Marked::IdentityCell));
        }
        let marked = self.marked_gens(n);
        let support: BTreeSet<GenId> = x.top().support().cloned().collect();
        if support.iter().all(|g| marked.contains(g)) {
            return Ok(MarkResult::Marked(Marked::SeedSupport));
        }
        let seeds = self.cell_seeds_of_dim(n);
        if seeds.is_empty() {
            let culprit = support.iter().find(|g| !marked.contains(*g)).unwrap();
            return Ok(MarkResult::Unmarked(format!(
                "generator `{culprit}` appears but is not marked"
            )));
        }
        // necessary condition: the top chain lies in the ℕ-span of seed tops
        // and marked-generator units
        let seed_tops: Vec<&Chain> = seeds.iter().map(|c| c.top()).collect();
        if !nat_span_member(x.top(), &seed_tops, &marked) {
            return Ok(MarkResult::Unmarked(
                "top chain outside the ℕ-span of seed and marked-generator chains".into(),
            ));
        }
        self.witness_search(x, budget)
    }

    /// Bounded breadth-first search for a composite of marked cells equal to
    /// `x`. Complete relative to the budget: fixpoint without discovery (with
    /// a complete lower-cell table) certifies Unmarked.
    fn witness_search(&self, x: &CellTable, budget: usize) -> Result<MarkResult> {
        let n = x.dim();
        let (tab, complete) = self.base.tabulate(n - 1, budget)?;
        let mut exprs: BTreeMap<CellTable, String> = BTreeMap::new();
        let mut queue: Vec<CellTable> = Vec::new();
        let push = |cell: CellTable, expr: String, exprs: &mut BTreeMap<CellTable, String>, queue: &mut Vec<CellTable>| {
            if cell.top().le(x.top()) && !exprs.contains_key(&cell) {
                exprs.insert(cell.clone(), expr);
                queue.push(cell);
            }
        };
        for (i, cell) in tab.cells[n - 1].iter().enumerate() {
            push(cell.identity(), format!("id(c{}_{i})", n - 1), &mut exprs, &mut queue);
        }
        for g in self.marked_gens(n) {
            push(self.base.atom(&g)?, format!("{g}"), &mut exprs, &mut queue);
        }
        for (i, seed) in self.cell_seeds_of_dim(n).iter().enumerate() {
            push((*seed).clone(), format!("seed{i}"), &mut exprs, &mut queue);
        }
        if let Some(w) = exprs.get(x) {
            return Ok(MarkResult::Marked(Marked::Composite(w.clone())));
        }
        let mut frontier: Vec<CellTable> = exprs.keys().cloned().collect();
        while !frontier.is_empty() {
            if exprs.len() > budget {
                return Ok(MarkResult::Unknown);
            }
            let all: Vec<CellTable> = exprs.keys().cloned().collect();
            let mut fresh = Vec::new();
            for a in &all {
                for b in &frontier {
                    for (lhs, rhs) in [(a, b), (b, a)] {
                        for k in 0..n {
                            if let Ok(z) = lhs.compose(rhs, k) {
                                if z.top().le(x.top()) && !exprs.contains_key(&z) {
                                    let expr = format!(
                                        "({}) #{k} ({})",
                                        exprs[lhs], exprs[rhs]
                                    );
                                    exprs.insert(z.clone(), expr);
                                    fresh.push(z.clone());
                                    if &z == x {
                                        return Ok(MarkResult::Marked(Marked::Composite(
                                            exprs[x].clone(),
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            frontier = fresh;
        }
        if complete {
            Ok(MarkResult::Unmarked("no composite of marked cells reaches the cell".into()))
        } else {
            Ok(MarkResult::Unknown)
        }
    }
}

/// Flat marking constructor.
pub fn flat(p: &Polygraph, m: MarkLevel) -> MarkedCat {
    MarkedCat::flat(p.clone(), m)
}

/// Sharp marking constructor.
pub fn sharp(p: &Polygraph, m: MarkLevel) -> MarkedCat {
    MarkedCat::sharp(p.clone(), m)
}

/// Does `target` lie in the ℕ-span of the seed chains together with unit
/// chains of the marked generators?
fn nat_span_member(target: &Chain, seeds: &[&Chain], marked: &BTreeSet<GenId>) -> bool {
    fn rec(rest: &Chain, seeds: &[&Chain], marked: &BTreeSet<GenId>) -> bool {
        match seeds.split_first() {
            None => rest.support().all(|g| marked.contains(g)),
            Some((s, tail)) => {
                let max: Coeff = rest
                    .iter()
                    .filter(|(g, _)| s.coeff(g) > 0)
                    .map(|(g, k)| k / s.coeff(g))
                    .min()
                    .unwrap_or(0);
                for k in 0..=max {
                    let r = rest.sub(&s.scale(k));
                    if r.is_nonneg() && rec(&r, tail, marked) {
                        return true;
                    }
                }
                false
            }
        }
    }
    rec(target, seeds, marked)
}

/// Outcome of comparing two markings on the same base.
#[derive(Debug, Clone, PartialEq)]
pub enum MarkingCmp {
    Equal,
    Differ(CellTable),
    Unknown,
}

/// Compare the closures of two markings on a common base. Exact when both
/// markings are generator-generated; with cell seeds the comparison
/// enumerates cells within the budget and reports `Unknown` if the
/// enumeration is cut short without finding a separating cell.
pub fn marking_eq(a: &Marking, b: &Marking, base: &Polygraph, budget: usize) -> Result<MarkingCmp> {
    let ca = MarkedCat::new(base.clone(), a.clone())?;
    let cb = MarkedCat::new(base.clone(), b.clone())?;
    if a.cell_seeds.is_empty() && b.cell_seeds.is_empty() {
        for d in 1..=base.max_dim() {
            let ma = ca.marked_gens(d);
            let mb = cb.marked_gens(d);
            if ma != mb {
                let g = ma.symmetric_difference(&mb).next().unwrap();
                return Ok(MarkingCmp::Differ(base.atom(g)?));
            }
        }
        return Ok(MarkingCmp::Equal);
    }
    let max_dim = base.max_dim().max(
        a.cell_seeds.iter().chain(&b.cell_seeds).map(|c| c.dim()).max().unwrap_or(0),
    );
    let (tab, complete) = base.tabulate(max_dim, budget)?;
    let mut unknown = false;
    for d in 1..=max_dim {
        for cell in &tab.cells[d] {
            let ra = ca.closure_contains(cell, budget)?;
            let rb = cb.closure_contains(cell, budget)?;
            match (&ra, &rb) {
                (MarkResult::Marked(_), MarkResult::Unmarked(_))
                | (MarkResult::Unmarked(_), MarkResult::Marked(_)) => {
                    return Ok(MarkingCmp::Differ(cell.clone()))
                }
                (MarkResult::Unknown, _) | (_, MarkResult::Unknown) => unknown = true,
                _ => {}
            }
        }
    }
    if complete && !unknown {
        Ok(MarkingCmp::Equal)
    } else {
        Ok(MarkingCmp::Unknown)
    }
}

/// The colimit forms markings push through.
pub enum MarkedDiagram {
    /// Disjoint union.
    Coproduct(Vec<MarkedCat>),
    /// Cell attachments; each fresh generator may arrive marked (a pushout of
    /// the marked-globe cofibration) or unmarked.
    Attach { base: MarkedCat, cells: Vec<(GenId, CellTable, CellTable, bool)> },
    /// Marking-only pushout: force the listed generators marked.
    MarkGens { base: MarkedCat, gens: Vec<GenId> },
    /// Collapse of a 1-generator.
    Collapse { base: MarkedCat, gen: GenId },
}

/// Colimit of m-marked categories: underlying colimit with the union of the
/// pushed-forward seeds.
pub fn marked_colimit(diagram: MarkedDiagram) -> Result<MarkedCat> {
    match diagram {
        MarkedDiagram::Coproduct(parts) => {
            if let Some(first) = parts.first() {
                let m = first.m();
                if parts.iter().any(|p| p.m() != m) {
                    return Err(Error::MarkLevelMismatch);
                }
            }
            let base = Polygraph::coproduct(&parts.iter().map(|p| p.base.clone()).collect::<Vec<_>>());
            let m = parts.first().map_or(MarkLevel::Infinite, |p| p.m());
            let mut marking = Marking::flat(m);
            for (i, part) in parts.iter().enumerate() {
                let tag = i.to_string();
                for g in &part.marking.gen_seeds {
                    marking.gen_seeds.insert(GenId::tag(tag.clone(), g.clone()));
                }
                for c in &part.marking.cell_seeds {
                    marking.cell_seeds.push(c.relabel(&|g| GenId::tag(tag.clone(), g.clone())));
                }
            }
            MarkedCat::new(base, marking)
        }
        MarkedDiagram::Attach { base, cells } => {
            let plain: Vec<(GenId, CellTable, CellTable)> =
                cells.iter().map(|(g, s, t, _)| (g.clone(), s.clone(), t.clone())).collect();
            let bigger = base.base.attach_cells(&plain)?;
            let mut marking = base.marking.clone();
            for (g, _, _, marked) in cells {
                if marked {
                    marking.gen_seeds.insert(g);
                }
            }
            MarkedCat::new(bigger, marking)
        }
        MarkedDiagram::MarkGens { base, gens } => {
            let mut marking = base.marking.clone();
            for g in gens {
                if base.base.complex().dim_of(&g).unwrap_or(0) == 0 {
                    return Err(Error::Precondition(format!("cannot mark `{g}`")));
                }
                marking.gen_seeds.insert(g);
            }
            MarkedCat::new(base.base, marking)
        }
        MarkedDiagram::Collapse { base, gen } => {
            let (q, f) = base.base.collapse_generator(&gen)?;
            let mut marking = Marking::flat(base.m());
            for g in &base.marking.gen_seeds {
                if g != &gen {
                    marking.gen_seeds.insert(g.clone());
                }
            }
            for c in &base.marking.cell_seeds {
                let img = f.apply(c)?;
                if !img.is_identity() {
                    marking.cell_seeds.push(img);
                }
            }
            MarkedCat::new(q, marking)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> GenId {
        GenId::name(s)
    }

    const B: usize = 10_000;

    #[test]
    fn flat_interval_arrow_unmarked() {
        let c = flat(&Polygraph::globe(1), MarkLevel::Infinite);
        let e1 = c.base.atom(&n("e1")).unwrap();
        assert!(c.closure_contains(&e1, B).unwrap().is_unmarked());
    }

    #[test]
    fn sharp_interval_arrow_marked() {
        let c = sharp(&Polygraph::globe(1), MarkLevel::Infinite);
        let e1 = c.base.atom(&n("e1")).unwrap();
        assert!(c.closure_contains(&e1, B).unwrap().is_marked());
    }

    #[test]
    fn above_threshold_marked() {
        let c = flat(&Polygraph::globe(2), MarkLevel::Finite(1));
        let e2 = c.base.atom(&n("e2")).unwrap();
        assert_eq!(c.closure_contains(&e2, B).unwrap(), MarkResult::Marked(Marked::AboveLevel));
    }

    #[test]
    fn identities_always_marked() {
        let c = flat(&Polygraph::globe(1), MarkLevel::Infinite);
        let idc = c.base.atom(&n("e1")).unwrap().identity();
        assert_eq!(c.closure_contains(&idc, B).unwrap(), MarkResult::Marked(Marked::IdentityCell));
    }

    #[test]
    fn composite_of_marked_is_marked() {
        let p = Polygraph::path(2);
        let c = MarkedCat::new(p.clone(), Marking::with_gens(MarkLevel::Infinite, [n("a0"), n("a1")]))
            .unwrap();
        let fg = p.atom(&n("a0")).unwrap().compose(&p.atom(&n("a1")).unwrap(), 0).unwrap();
        assert!(c.closure_contains(&fg, B).unwrap().is_marked());
        // and with only one factor marked it is not
        let c1 = MarkedCat::new(p.clone(), Marking::with_gens(MarkLevel::Infinite, [n("a0")])).unwrap();
        assert!(c1.closure_contains(&fg, B).unwrap().is_unmarked());
    }

    #[test]
    fn cell_seed_witness_search_finds_seed_composites() {
        // path of three arrows; seeds are the cells a0#a1 and a1#a2
        let p = Polygraph::path(3);
        let a = |i: usize| p.atom(&n(&format!("a{i}"))).unwrap();
        let s01 = a(0).compose(&a(1), 0).unwrap();
        let s12 = a(1).compose(&a(2), 0).unwrap();
        let c = MarkedCat::new(
            p.clone(),
            Marking { m: MarkLevel::Infinite, gen_seeds: BTreeSet::new(), cell_seeds: vec![s01.clone(), s12] },
        )
        .unwrap();
        // the seed itself is found as a composite witness
        assert!(c.closure_contains(&s01, B).unwrap().is_marked());
        // a0#a1#a2 has top chain outside the ℕ-span of the seeds
        let all = s01.compose(&a(2), 0).unwrap();
        let r = c.closure_contains(&all, B).unwrap();
        assert!(r.is_unmarked(), "{r:?}");
        // a bare generator is not marked
        assert!(c.closure_contains(&a(0), B).unwrap().is_unmarked());
    }

    #[test]
    fn marking_eq_exact_and_differ() {
        let d1 = Polygraph::globe(1);
        let none = Marking::flat(MarkLevel::Infinite);
        let some = Marking::with_gens(MarkLevel::Infinite, [n("e1")]);
        match marking_eq(&some, &none, &d1, B).unwrap() {
            MarkingCmp::Differ(cell) => assert_eq!(cell, d1.atom(&n("e1")).unwrap()),
            other => panic!("expected Differ, got {other:?}"),
        }
        assert_eq!(marking_eq(&none, &none.clone(), &d1, B).unwrap(), MarkingCmp::Equal);
    }

    #[test]
    fn closure_operator_laws_on_seed_sets() {
        // extensive, monotone, idempotent, via marking_eq on the square
        let base = crate::monoidal::tensor_polygraph(&Polygraph::globe(1), &Polygraph::globe(1)).unwrap();
        let g: Vec<GenId> = base.complex().gens_of_dim(1).cloned().collect();
        let m1 = Marking::with_gens(MarkLevel::Infinite, [g[0].clone()]);
        let m2 = Marking::with_gens(MarkLevel::Infinite, [g[0].clone(), g[1].clone()]);
        // idempotence: seeds versus seeds ∪ {an already-marked composite's gens}
        assert_eq!(marking_eq(&m1, &m1.clone(), &base, B).unwrap(), MarkingCmp::Equal);
        // monotonicity shows as Differ on the bigger seed set's extra generator
        match marking_eq(&m1, &m2, &base, B).unwrap() {
            MarkingCmp::Differ(_) => {}
            other => panic!("expected Differ, got {other:?}"),
        }
    }

    #[test]
    fn marked_colimit_coproduct_of_flats_is_flat() {
        let a = flat(&Polygraph::globe(1), MarkLevel::Infinite);
        let b = flat(&Polygraph::globe(1), MarkLevel::Infinite);
        let c = marked_colimit(MarkedDiagram::Coproduct(vec![a, b])).unwrap();
        assert!(c.marking.gen_seeds.is_empty());
        assert_eq!(c.base.gen_counts(), vec![4, 2]);
    }
}
