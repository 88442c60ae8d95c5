//! Named maps and objects: generating cofibrations, pushout products,
//! generating anodynes, the hemisphere retract, equations and saturations,
//! the Uni gadgets, the 2-out-of-6 comparison maps, and the counterexample
//! polygraphs at their finite stages.

use std::collections::{BTreeMap, BTreeSet};

use crate::cell::CellTable;
use crate::complex::GenId;
use crate::error::{Error, Result};
use crate::join::suspend_cell;
use crate::marking::{marked_colimit, MarkLevel, MarkResult, MarkedCat, MarkedDiagram, Marking};
use crate::monoidal::{pseudo_tensor, tensor_polygraph, CaseReport};
use crate::polygraph::{sphere_inclusion, PolyMorphism, Polygraph};

const BUDGET: usize = 20_000;

/// A morphism of marked categories: marking-preserving on top of the
/// underlying morphism of free categories.
#[derive(Debug, Clone)]
pub struct MarkedMap {
    pub source: MarkedCat,
    pub target: MarkedCat,
    pub underlying: PolyMorphism,
}

impl MarkedMap {
    pub fn new(source: MarkedCat, target: MarkedCat, underlying: PolyMorphism) -> Result<MarkedMap> {
        let map = MarkedMap { source, target, underlying };
        map.check(BUDGET)?;
        Ok(map)
    }

    /// Underlying morphism validity plus marking preservation: every marked
    /// seed of the source lands on a marked cell of the target.
    pub fn check(&self, budget: usize) -> Result<()> {
        if self.source.m() != self.target.m() {
            return Err(Error::MarkLevelMismatch);
        }
        self.underlying.check()?;
        for d in 1..=self.source.base.max_dim() {
            for g in self.source.marked_gens(d) {
                let img = self.underlying.apply(&self.source.base.atom(&g)?)?;
                if img.is_identity() {
                    continue;
                }
                match self.target.closure_contains(&img, budget)? {
                    MarkResult::Marked(_) => {}
                    MarkResult::Unmarked(c) => {
                        return Err(Error::InvalidMorphism(format!(
                            "marked `{g}` maps to an unmarked cell ({c})"
                        )))
                    }
                    MarkResult::Unknown => {
                        return Err(Error::BudgetExhausted {
                            budget,
                            context: format!("marking preservation at `{g}`"),
                        })
                    }
                }
            }
        }
        for seed in &self.source.marking.cell_seeds {
            let img = self.underlying.apply(seed)?;
            if img.is_identity() {
                continue;
            }
            if let MarkResult::Unmarked(c) = self.target.closure_contains(&img, budget)? {
                return Err(Error::InvalidMorphism(format!("marked cell seed maps to unmarked ({c})")));
            }
        }
        Ok(())
    }

    /// Gen-to-gen image table for polygraphic injective maps.
    fn gen_map(&self) -> Result<BTreeMap<GenId, GenId>> {
        let mut out = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (_, g) in self.source.base.complex().all_gens() {
            let cell = &self.underlying.assignment[g];
            let top: Vec<_> = cell.top().iter().collect();
            let image = match top.as_slice() {
                [(h, 1)] if self.target.base.atom(h)? == *cell => (*h).clone(),
                _ => {
                    return Err(Error::InvalidMorphism(format!(
                        "`{g}` does not map to a generator atom"
                    )))
                }
            };
            if !seen.insert(image.clone()) {
                return Err(Error::InvalidMorphism("generator images are not injective".into()));
            }
            out.insert(g.clone(), image);
        }
        Ok(out)
    }
}

/// The marked interval: the 1-globe with its arrow marked.
pub fn interval(m: MarkLevel) -> MarkedCat {
    MarkedCat::sharp(Polygraph::globe(1), m)
}

/// Endpoint inclusion `j₊ : D_0 → I` at the marked end's positive pole.
pub fn j_plus(m: MarkLevel) -> MarkedMap {
    let src = MarkedCat::flat(Polygraph::point(), m);
    let tgt = interval(m);
    let mut assignment = BTreeMap::new();
    assignment.insert(GenId::name("e0"), tgt.base.atom(&GenId::name("e0+")).unwrap());
    let underlying = PolyMorphism { source: src.base.clone(), target: tgt.base.clone(), assignment };
    MarkedMap::new(src, tgt, underlying).unwrap()
}

/// Generating cofibration kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CofKind {
    /// `i_n : ∂D_n → D_n`, flat.
    Ia,
    /// `D_n → (D_n, {e_n})`, the marking change.
    Im,
}

/// Build a generating cofibration.
pub fn gen_cofibration(kind: CofKind, n: usize, m: MarkLevel) -> MarkedMap {
    match kind {
        CofKind::Ia => {
            let f = sphere_inclusion(n);
            let src = MarkedCat::flat(f.source.clone(), m);
            let tgt = MarkedCat::flat(f.target.clone(), m);
            MarkedMap::new(src, tgt, f).unwrap()
        }
        CofKind::Im => {
            let globe = Polygraph::globe(n);
            let src = MarkedCat::flat(globe.clone(), m);
            let marking = if n == 0 {
                Marking::flat(m)
            } else {
                Marking::with_gens(m, [GenId::name(format!("e{n}"))])
            };
            let tgt = MarkedCat::new(globe.clone(), marking).unwrap();
            MarkedMap::new(src, tgt, PolyMorphism::identity(&globe)).unwrap()
        }
    }
}

/// Which tensor marking a pushout product uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorMode {
    Lax,
    Pseudo,
}

fn mode_tensor(mode: TensorMode, a: &MarkedCat, b: &MarkedCat) -> Result<MarkedCat> {
    match mode {
        TensorMode::Lax => crate::monoidal::lax_tensor(a, b),
        TensorMode::Pseudo => pseudo_tensor(a, b),
    }
}

/// Pushout product (corner map) of two polygraphic injective marked maps:
/// `B⊗C ∪_{A⊗C} A⊗D → B⊗D` with the chosen marking mode on each tensor.
pub fn pushout_product(f: &MarkedMap, g: &MarkedMap, mode: TensorMode) -> Result<MarkedMap> {
    if f.source.m() != g.source.m() {
        return Err(Error::MarkLevelMismatch);
    }
    let fmap = f.gen_map()?;
    let gmap = g.gen_map()?;
    let target = mode_tensor(mode, &f.target, &g.target)?;
    // basis of the corner domain inside B⊗D
    let mut keep: BTreeSet<GenId> = BTreeSet::new();
    for (_, x) in f.target.base.complex().all_gens() {
        for (_, c) in g.source.base.complex().all_gens() {
            keep.insert(GenId::tensor(x.clone(), gmap[c].clone()));
        }
    }
    for (_, a) in f.source.base.complex().all_gens() {
        for (_, y) in g.target.base.complex().all_gens() {
            keep.insert(GenId::tensor(fmap[a].clone(), y.clone()));
        }
    }
    let sub = target.base.complex().restrict(&keep)?;
    let sub_poly = Polygraph::new(format!("corner({})", target.base.name()), sub)?;
    // pushed-forward markings of B⊗C and A⊗D
    let bc = mode_tensor(mode, &f.target, &g.source)?;
    let ad = mode_tensor(mode, &f.source, &g.target)?;
    let mut seeds: BTreeSet<GenId> = BTreeSet::new();
    for s in &bc.marking.gen_seeds {
        if let GenId::Tensor(x, c) = s {
            seeds.insert(GenId::tensor((**x).clone(), gmap[&**c].clone()));
        }
    }
    for s in &ad.marking.gen_seeds {
        if let GenId::Tensor(a, y) = s {
            seeds.insert(GenId::tensor(fmap[&**a].clone(), (**y).clone()));
        }
    }
    let src = MarkedCat::new(sub_poly.clone(), Marking { m: target.m(), gen_seeds: seeds, cell_seeds: Vec::new() })?;
    let assignment = sub_poly
        .complex()
        .all_gens()
        .map(|(_, id)| Ok((id.clone(), target.base.atom(id)?)))
        .collect::<Result<_>>()?;
    let underlying = PolyMorphism { source: sub_poly, target: target.base.clone(), assignment };
    MarkedMap::new(src, target, underlying)
}

/// Anodyne generator kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnodyneKind {
    Eq,
    Sat,
}

/// Generating anodyne map `j₊ ⊠̂ i_n` (Eq) or `j₊ ⊠̂ s_n` (Sat).
pub fn anodyne_gen(n: usize, kind: AnodyneKind, m: MarkLevel) -> Result<MarkedMap> {
    let j = j_plus(m);
    let i = match kind {
        AnodyneKind::Eq => gen_cofibration(CofKind::Ia, n, m),
        AnodyneKind::Sat => gen_cofibration(CofKind::Im, n, m),
    };
    pushout_product(&j, &i, TensorMode::Pseudo)
}

/// The hemisphere retract: `i : (D_{n+1},{e_{n+1}}) → I ⊠ D_n^♭` sending the
/// top cell to `a⊗e_n`, the projection `p` back, and the verification report
/// (morphism checks, `p∘i = id`, and both sub-polygraph compatibilities).
pub fn hemisphere_retract(n: usize, m: MarkLevel) -> Result<(MarkedMap, MarkedMap, Vec<CaseReport>)> {
    let mut report = Vec::new();
    let ipd = pseudo_tensor(&interval(m), &MarkedCat::flat(Polygraph::globe(n), m))?;
    let globe = Polygraph::globe(n + 1);
    let dplus = MarkedCat::new(
        globe.clone(),
        Marking::with_gens(m, [GenId::name(format!("e{}", n + 1))]),
    )?;
    let a = GenId::name("e1");
    let en = GenId::name(format!("e{n}"));
    let top_image = ipd.base.atom(&GenId::tensor(a.clone(), en.clone()))?;

    // i: determined by e_{n+1} ↦ a ⊗ e_n
    let mut i_assign = BTreeMap::new();
    i_assign.insert(GenId::name(format!("e{}", n + 1)), top_image.clone());
    for k in 0..=n {
        let (lo, hi) = globe_gen_names(n + 1, k);
        i_assign.insert(lo, top_image.source(k)?);
        i_assign.insert(hi, top_image.target(k)?);
    }
    let i_underlying = PolyMorphism { source: globe.clone(), target: ipd.base.clone(), assignment: i_assign };
    let i_check = i_underlying.check();
    report.push(CaseReport {
        name: format!("hemisphere {n}: i is a morphism"),
        pass: i_check.is_ok(),
        detail: i_check.as_ref().err().map(|e| e.to_string()).unwrap_or_else(|| "ok".into()),
    });
    let i = MarkedMap::new(dplus.clone(), ipd.clone(), i_underlying)?;

    // p: the explicit projection
    let mut p_assign = BTreeMap::new();
    for (_, id) in ipd.base.complex().all_gens() {
        let image = match id {
            GenId::Tensor(l, r) => {
                let rname = format!("{r}");
                let k = ipd.base.complex().dim_of(id).unwrap();
                match format!("{l}").as_str() {
                    "e0-" | "e0+" => {
                        if rname == format!("e{n}") {
                            let sign = if format!("{l}") == "e0-" { "-" } else { "+" };
                            globe.atom(&GenId::name(format!("e{n}{sign}")))?
                        } else {
                            globe.atom(&GenId::Name(rname.clone()))?
                        }
                    }
                    "e1" => {
                        if rname == format!("e{n}") {
                            globe.atom(&GenId::name(format!("e{}", n + 1)))?
                        } else {
                            globe.atom(&GenId::Name(rname.clone()))?.identity().pad_to(k)
                        }
                    }
                    other => return Err(Error::Precondition(format!("unexpected factor {other}"))),
                }
            }
            other => return Err(Error::Precondition(format!("unexpected generator {other}"))),
        };
        p_assign.insert(id.clone(), image);
    }
    let p_underlying = PolyMorphism { source: ipd.base.clone(), target: globe.clone(), assignment: p_assign };
    let p_check = p_underlying.check();
    report.push(CaseReport {
        name: format!("hemisphere {n}: p is a morphism"),
        pass: p_check.is_ok(),
        detail: p_check.as_ref().err().map(|e| e.to_string()).unwrap_or_else(|| "ok".into()),
    });
    let p = MarkedMap::new(ipd.clone(), dplus.clone(), p_underlying)?;

    // p ∘ i = identity
    let composite = i.underlying.then(&p.underlying)?;
    let identity = PolyMorphism::identity(&globe);
    let retr = composite.assignment == identity.assignment;
    report.push(CaseReport {
        name: format!("hemisphere {n}: p∘i = id"),
        pass: retr,
        detail: if retr { "ok".into() } else { "composite differs from the identity".into() },
    });

    // sub-polygraph compatibility with the corner domains
    let corner_missing: BTreeSet<GenId> = BTreeSet::from([
        GenId::tensor(GenId::name("e0-"), en.clone()),
        GenId::tensor(a.clone(), en.clone()),
    ]);
    let globe_missing: BTreeSet<GenId> = BTreeSet::from([
        GenId::name(format!("e{}", n + 1)),
        GenId::name(format!("e{n}-")),
    ]);
    let mut i_compat = true;
    for (_, g) in globe.complex().all_gens() {
        if globe_missing.contains(g) {
            continue;
        }
        let img = &i.underlying.assignment[g];
        for d in 0..=img.dim() {
            if img.support(d)?.iter().any(|h| corner_missing.contains(h)) {
                i_compat = false;
            }
        }
    }
    report.push(CaseReport {
        name: format!("hemisphere {n}: i restricts to the corner domain"),
        pass: i_compat,
        detail: if i_compat { "ok".into() } else { "image leaves the sub-polygraph".into() },
    });
    let mut p_compat = true;
    for (_, g) in ipd.base.complex().all_gens() {
        if corner_missing.contains(g) {
            continue;
        }
        let img = &p.underlying.assignment[g];
        for d in 0..=img.dim() {
            if img.support(d)?.iter().any(|h| globe_missing.contains(h)) {
                p_compat = false;
            }
        }
    }
    report.push(CaseReport {
        name: format!("hemisphere {n}: p restricts to the hemisphere image"),
        pass: p_compat,
        detail: if p_compat { "ok".into() } else { "image leaves the sub-polygraph".into() },
    });

    Ok((i, p, report))
}

fn globe_gen_names(n: usize, k: usize) -> (GenId, GenId) {
    if k == n {
        (GenId::name(format!("e{n}")), GenId::name(format!("e{n}")))
    } else {
        (GenId::name(format!("e{k}-")), GenId::name(format!("e{k}+")))
    }
}

/// Which side of an equation carries the whiskered decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A special marked polygraph with designated arrows x, y and the stored
/// whisker decomposition, mechanically verified at construction.
#[derive(Debug, Clone)]
pub struct EquationShape {
    pub carrier: MarkedCat,
    pub x: GenId,
    pub y: GenId,
    pub side: Side,
    pub saturation: bool,
    /// `(l_i, r_i)` for i = 1..n; the decomposed boundary is
    /// `l_n #_{n-1} ( … (l_1 #_0 x #_0 r_1) … ) #_{n-1} r_n`.
    pub whiskers: Vec<(CellTable, CellTable)>,
}

impl EquationShape {
    /// Verify conditions (1)–(5) of the equation/saturation definition.
    pub fn verify(&self) -> Result<()> {
        let c = &self.carrier;
        let nx = c
            .base
            .complex()
            .dim_of(&self.x)
            .ok_or_else(|| Error::UnknownGenerator(self.x.clone()))?;
        let ny = c
            .base
            .complex()
            .dim_of(&self.y)
            .ok_or_else(|| Error::UnknownGenerator(self.y.clone()))?;
        if ny != nx + 1 {
            return Err(Error::Precondition("y must live one dimension above x".into()));
        }
        if c.base.complex().gens_of_dim(ny).count() != 1 || c.base.max_dim() > ny {
            return Err(Error::Precondition("y must be the unique top generator".into()));
        }
        let budget = BUDGET;
        let y_atom = c.base.atom(&self.y)?;
        if !c.closure_contains(&y_atom, budget)?.is_marked() {
            return Err(Error::Precondition("y must be marked".into()));
        }
        let x_atom = c.base.atom(&self.x)?;
        let x_marked = c.closure_contains(&x_atom, budget)?.is_marked();
        if self.saturation {
            if !x_marked {
                return Err(Error::Precondition("a saturation needs x marked".into()));
            }
            let other = match self.side {
                Side::Left => y_atom.target(nx)?,
                Side::Right => y_atom.source(nx)?,
            };
            if !c.closure_contains(&other, budget)?.is_marked() {
                return Err(Error::Precondition(
                    "a saturation needs the non-decomposed boundary of y marked".into(),
                ));
            }
        } else if !c.m().above(nx) && x_marked {
            return Err(Error::Precondition("x must be unmarked".into()));
        }
        // decomposition check
        let decomposed = match self.side {
            Side::Left => y_atom.source(nx)?,
            Side::Right => y_atom.target(nx)?,
        };
        let built = self.whisker_composite(&x_atom)?;
        if built != decomposed {
            return Err(Error::BoundaryMismatch { context: "whisker decomposition".into() });
        }
        if self.whiskers.len() != nx {
            return Err(Error::Precondition("need one whisker pair per dimension".into()));
        }
        for (i, (l, r)) in self.whiskers.iter().enumerate() {
            for (side, cell) in [("l", l), ("r", r)] {
                if cell.dim() != i + 1 {
                    return Err(Error::DimensionMismatch { expected: i + 1, got: cell.dim() });
                }
                if !cell.is_identity() && !c.closure_contains(cell, budget)?.is_marked() {
                    return Err(Error::Precondition(format!("whisker {side}{} must be marked", i + 1)));
                }
            }
        }
        if let Some((ln, rn)) = self.whiskers.last() {
            for cell in [ln, rn] {
                if cell.support(nx)?.contains(&self.x) {
                    return Err(Error::Precondition("top whiskers must not contain x".into()));
                }
            }
        }
        // x appears exactly once in the decomposed boundary, not at all in the other
        if decomposed.top().coeff(&self.x) != 1 {
            return Err(Error::Precondition("x must appear exactly once".into()));
        }
        let other = match self.side {
            Side::Left => y_atom.target(nx)?,
            Side::Right => y_atom.source(nx)?,
        };
        if other.support(nx)?.contains(&self.x) {
            return Err(Error::Precondition("x must not appear on the other side of y".into()));
        }
        Ok(())
    }

    /// The stored decomposition with `core` in place of x; whiskers pad up as
    /// needed, so `core` may sit one dimension above x.
    pub fn whisker_composite(&self, core: &CellTable) -> Result<CellTable> {
        let mut acc = core.clone();
        for (i, (l, r)) in self.whiskers.iter().enumerate() {
            acc = l.compose(&acc, i)?.compose(r, i)?;
        }
        Ok(acc)
    }

    /// The sub-polygraph `ΛP`: everything except x and y.
    pub fn lambda(&self) -> Result<MarkedCat> {
        let keep: BTreeSet<GenId> = self
            .carrier
            .base
            .complex()
            .all_gens()
            .map(|(_, g)| g.clone())
            .filter(|g| g != &self.x && g != &self.y)
            .collect();
        let sub = self.carrier.base.complex().restrict(&keep)?;
        let poly = Polygraph::new(format!("L({})", self.carrier.base.name()), sub)?;
        let marking = Marking {
            m: self.carrier.m(),
            gen_seeds: self
                .carrier
                .marking
                .gen_seeds
                .iter()
                .filter(|g| keep.contains(*g))
                .cloned()
                .collect(),
            cell_seeds: Vec::new(),
        };
        MarkedCat::new(poly, marking)
    }

    fn dim_x(&self) -> usize {
        self.carrier.base.complex().dim_of(&self.x).unwrap()
    }
}

/// Suspend an equation shape: carrier, designated arrows and whiskers all
/// move one dimension up, with fresh pole whiskers at the bottom.
fn suspend_shape(p: &EquationShape) -> Result<EquationShape> {
    let base = p.carrier.base.suspend(1);
    let marking = Marking {
        m: p.carrier.m(),
        gen_seeds: p.carrier.marking.gen_seeds.iter().map(|g| GenId::susp(g.clone())).collect(),
        cell_seeds: p.carrier.marking.cell_seeds.iter().map(suspend_cell).collect(),
    };
    let carrier = MarkedCat::new(base, marking)?;
    let mut whiskers = vec![(
        CellTable::object(GenId::Pole(false)).identity(),
        CellTable::object(GenId::Pole(true)).identity(),
    )];
    for (l, r) in &p.whiskers {
        whiskers.push((suspend_cell(l), suspend_cell(r)));
    }
    let shape = EquationShape {
        carrier,
        x: GenId::susp(p.x.clone()),
        y: GenId::susp(p.y.clone()),
        side: p.side,
        saturation: p.saturation,
        whiskers,
    };
    shape.verify()?;
    Ok(shape)
}

/// Division equation kinds (the composite `a #_{k-1} x` or `x #_{k-1} a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqKind {
    /// `y : (a #_{k-1} x) ⇒ b`, a marked.
    LeftDiv { k: usize, n: usize },
    /// `y : (x #_{k-1} a) ⇒ b`, a marked.
    RightDiv { k: usize, n: usize },
    /// The cylinder equation `j₊ ⊠̂ i_n` seen as an equation.
    Cyl { n: usize },
}

/// Build a named equation (or saturation) shape.
pub fn equation(kind: EqKind, saturation: bool, m: MarkLevel) -> Result<EquationShape> {
    match kind {
        EqKind::LeftDiv { k, n } => division(k, n, m, saturation, Side::Left),
        EqKind::RightDiv { k, n } => division(k, n, m, saturation, Side::Right),
        EqKind::Cyl { n } => cylinder(n, m, saturation),
    }
}

fn division(k: usize, n: usize, m: MarkLevel, saturation: bool, side: Side) -> Result<EquationShape> {
    if k < 1 || k > n {
        return Err(Error::ParameterRange(format!("division needs 1 ≤ k ≤ n, got ({k},{n})")));
    }
    if n != k {
        return Err(Error::ParameterRange(format!(
            "division shapes with n > k whisker `a` into both boundaries of b, which has no \
             strongly loop-free presentation; only n = k is representable (got ({k},{n}))"
        )));
    }
    // base case (1,1), then suspend k−1 times
    let mut c = crate::complex::DirComplex::new();
    let name = |s: &str| GenId::name(s);
    for o in ["p", "q", "r"] {
        c.add_gen0(name(o))?;
    }
    let unit = |s: &str| crate::chain::Chain::unit(0, name(s));
    match side {
        Side::Left => {
            c.add_gen(name("a"), 1, unit("p"), unit("q"))?;
            c.add_gen(name("x"), 1, unit("q"), unit("r"))?;
        }
        Side::Right => {
            c.add_gen(name("x"), 1, unit("p"), unit("q"))?;
            c.add_gen(name("a"), 1, unit("q"), unit("r"))?;
        }
    }
    c.add_gen(name("b"), 1, unit("p"), unit("r"))?;
    let src = crate::chain::Chain::from_entries(1, [(name("a"), 1), (name("x"), 1)]);
    let tgt = crate::chain::Chain::unit(1, name("b"));
    c.add_gen(name("y"), 2, src, tgt)?;
    let poly = Polygraph::new(format!("{side:?}Div(1,1)"), c)?;
    let mut seeds = BTreeSet::from([name("a"), name("y")]);
    if saturation {
        seeds.insert(name("x"));
        seeds.insert(name("b"));
    }
    let carrier = MarkedCat::new(poly.clone(), Marking { m, gen_seeds: seeds, cell_seeds: Vec::new() })?;
    let whiskers = match side {
        Side::Left => vec![(poly.atom(&name("a"))?, CellTable::object(name("r")).identity())],
        Side::Right => vec![(CellTable::object(name("p")).identity(), poly.atom(&name("a"))?)],
    };
    let mut shape = EquationShape {
        carrier,
        x: name("x"),
        y: name("y"),
        // both divisions decompose the source of y: they are left equations
        side: Side::Left,
        saturation,
        whiskers,
    };
    shape.verify()?;
    for _ in 1..k {
        shape = suspend_shape(&shape)?;
    }
    Ok(shape)
}

fn cylinder(n: usize, m: MarkLevel, saturation: bool) -> Result<EquationShape> {
    let kind = if saturation { AnodyneKind::Sat } else { AnodyneKind::Eq };
    let map = anodyne_gen(n, kind, m)?;
    let carrier = map.target.clone();
    let a = GenId::name("e1");
    let en = GenId::name(format!("e{n}"));
    let x = GenId::tensor(GenId::name("e0-"), en.clone());
    let y = GenId::tensor(a.clone(), en.clone());
    // r_i = a ⊗ e⁺_{i-1}; l_i = identity of the running source
    let x_atom = carrier.base.atom(&x)?;
    let mut whiskers = Vec::new();
    let mut acc = x_atom;
    for i in 1..=n {
        let lower = if i == n && n >= 1 && i - 1 == n {
            unreachable!()
        } else {
            GenId::name(format!("e{}+", i - 1))
        };
        let r = carrier.base.atom(&GenId::tensor(a.clone(), lower))?;
        let l = acc.source(i - 1)?.identity();
        acc = l.compose(&acc, i - 1)?.compose(&r, i - 1)?;
        whiskers.push((l, r));
    }
    let shape = EquationShape { carrier, x, y, side: Side::Left, saturation, whiskers };
    shape.verify()?;
    Ok(shape)
}

/// `Uni(P)`: both solution copies glued over ΛP, plus a marked comparison
/// arrow z between the two x's. Returns the inclusion of `P ∐_{ΛP} P`.
pub fn uni(p: &EquationShape) -> Result<MarkedMap> {
    let (double, _, _) = double_over_lambda(p)?;
    let x_cell = double.base.atom(&p.x)?;
    let x2_cell = double.base.atom(&primed(&p.x))?;
    let target = marked_colimit(MarkedDiagram::Attach {
        base: double.clone(),
        cells: vec![(GenId::name("z"), x_cell, x2_cell, true)],
    })?;
    inclusion_map(&double, &target)
}

/// `Uni^coh(P)`: `Uni(P)` plus the coherence cell comparing the substituted
/// composite against the second solution.
pub fn uni_coh(p: &EquationShape) -> Result<MarkedMap> {
    let base_map = uni(p)?;
    let uni_cat = base_map.target.clone();
    let n = p.dim_x();
    let z_atom = uni_cat.base.atom(&GenId::name("z"))?;
    let y_atom = uni_cat.base.atom(&p.y)?;
    let y2_atom = uni_cat.base.atom(&primed(&p.y))?;
    let (w_src, w_tgt) = match p.side {
        Side::Left => {
            let s_sub = p.whisker_composite(&z_atom)?;
            (s_sub.compose(&y2_atom, n)?, y_atom)
        }
        Side::Right => {
            let t_sub = p.whisker_composite(&z_atom)?;
            (y_atom.compose(&t_sub, n)?, y2_atom)
        }
    };
    let target = marked_colimit(MarkedDiagram::Attach {
        base: uni_cat,
        cells: vec![(GenId::name("w"), w_src, w_tgt, false)],
    })?;
    inclusion_map(&base_map.source, &target)
}

fn primed(g: &GenId) -> GenId {
    GenId::tag("c2", g.clone())
}

/// `P ∐_{ΛP} P`: the carrier with a second copy of x and y.
fn double_over_lambda(p: &EquationShape) -> Result<(MarkedCat, GenId, GenId)> {
    let c = p.carrier.base.complex();
    let nx = p.dim_x();
    let mut out = c.clone();
    let x2 = primed(&p.x);
    let y2 = primed(&p.y);
    out.add_gen(
        x2.clone(),
        nx,
        c.boundary_neg(&p.x)?.clone(),
        c.boundary_pos(&p.x)?.clone(),
    )?;
    let subst = |ch: &crate::chain::Chain| {
        ch.map_basis(ch.dim(), |g| {
            if g == &p.x {
                Some(crate::chain::Chain::unit(ch.dim(), x2.clone()))
            } else {
                Some(crate::chain::Chain::unit(ch.dim(), g.clone()))
            }
        })
    };
    out.add_gen(
        y2.clone(),
        nx + 1,
        subst(c.boundary_neg(&p.y)?),
        subst(c.boundary_pos(&p.y)?),
    )?;
    let poly = Polygraph::new(format!("{}+L+{}", p.carrier.base.name(), p.carrier.base.name()), out)?;
    let mut seeds = p.carrier.marking.gen_seeds.clone();
    if seeds.contains(&p.x) {
        seeds.insert(x2.clone());
    }
    if seeds.contains(&p.y) {
        seeds.insert(y2.clone());
    }
    let cat = MarkedCat::new(poly, Marking { m: p.carrier.m(), gen_seeds: seeds, cell_seeds: Vec::new() })?;
    Ok((cat, x2, y2))
}

fn inclusion_map(source: &MarkedCat, target: &MarkedCat) -> Result<MarkedMap> {
    let assignment = source
        .base
        .complex()
        .all_gens()
        .map(|(_, g)| Ok((g.clone(), target.base.atom(g)?)))
        .collect::<Result<_>>()?;
    let underlying = PolyMorphism {
        source: source.base.clone(),
        target: target.base.clone(),
        assignment,
    };
    MarkedMap::new(source.clone(), target.clone(), underlying)
}

/// The 2-out-of-6 comparison map `s_n` on three composable n-arrows: identity
/// on the polygraph, from the marking generated by the cells f#g and g#h to
/// the marking generated by the generators f, g, h.
pub fn two_out_of_six_map(n: usize, m: MarkLevel) -> Result<MarkedMap> {
    if n == 0 {
        return Err(Error::ParameterRange("s_n needs n ≥ 1".into()));
    }
    let poly = triple_composable(n)?;
    let f = poly.atom(&GenId::name("f"))?;
    let g = poly.atom(&GenId::name("g"))?;
    let h = poly.atom(&GenId::name("h"))?;
    let source = MarkedCat::new(
        poly.clone(),
        Marking {
            m,
            gen_seeds: BTreeSet::new(),
            cell_seeds: vec![f.compose(&g, n - 1)?, g.compose(&h, n - 1)?],
        },
    )?;
    let target = MarkedCat::new(
        poly.clone(),
        Marking::with_gens(m, [GenId::name("f"), GenId::name("g"), GenId::name("h")]),
    )?;
    MarkedMap::new(source, target, PolyMorphism::identity(&poly))
}

/// `D_n ∐_{D_{n-1}} D_n ∐_{D_{n-1}} D_n`: three composable n-generators
/// f, g, h over a shared globular frame.
pub fn triple_composable(n: usize) -> Result<Polygraph> {
    let mut c = crate::complex::DirComplex::new();
    let frame = |k: usize, s: &str| GenId::name(format!("e{k}{s}"));
    if n == 1 {
        for i in 0..4 {
            c.add_gen0(GenId::name(format!("a{i}")))?;
        }
    } else {
        c.add_gen0(frame(0, "-"))?;
        c.add_gen0(frame(0, "+"))?;
        for k in 1..=n - 2 {
            let src = crate::chain::Chain::unit(k - 1, frame(k - 1, "-"));
            let tgt = crate::chain::Chain::unit(k - 1, frame(k - 1, "+"));
            c.add_gen(frame(k, "-"), k, src.clone(), tgt.clone())?;
            c.add_gen(frame(k, "+"), k, src, tgt)?;
        }
        let src = crate::chain::Chain::unit(n - 2, frame(n - 2, "-"));
        let tgt = crate::chain::Chain::unit(n - 2, frame(n - 2, "+"));
        for i in 0..4 {
            c.add_gen(GenId::name(format!("a{i}")), n - 1, src.clone(), tgt.clone())?;
        }
    }
    let arrow = |i: usize| crate::chain::Chain::unit(n - 1, GenId::name(format!("a{i}")));
    c.add_gen(GenId::name("f"), n, arrow(0), arrow(1))?;
    c.add_gen(GenId::name("g"), n, arrow(1), arrow(2))?;
    c.add_gen(GenId::name("h"), n, arrow(2), arrow(3))?;
    Polygraph::new(format!("X{n}"), c)
}

/// Counterexample stage selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    E(usize),
    P(usize),
    C(usize),
    D(usize),
}

/// Finite stages of the §-counterexample polygraphs. `P` is bounded at 1 and
/// `C`/`D` at 2; later stages are infinite and refused.
pub fn counterexample(stage: Stage) -> Result<Polygraph> {
    match stage {
        Stage::E(n) => {
            if n == 0 {
                return Err(Error::ParameterRange("E stages start at 1".into()));
            }
            Ok(e_one()?.suspend(n - 1))
        }
        Stage::P(0) => Ok(Polygraph::globe(1)),
        Stage::P(1) => p_one(),
        Stage::P(k) => Err(Error::ParameterRange(format!("P_{k} is infinite; only stages ≤ 1 are built"))),
        Stage::C(n) if n <= 2 => c_stage(n),
        Stage::C(n) => Err(Error::ParameterRange(format!("C_{n} exceeds the finite stages (≤ 2)"))),
        Stage::D(n) if n <= 2 => {
            let c = c_stage(n)?;
            let (d, _) = c.collapse_generator(&GenId::name("e1"))?;
            Ok(d)
        }
        Stage::D(n) => Err(Error::ParameterRange(format!("D_{n} exceeds the finite stages (≤ 2)"))),
    }
}

/// The 2-polygraph freely inverting f on both sides: objects a, b; arrows
/// u, v : b → a and f : a → b; 2-cells α : 𝕀_b ⇒ u#f and β : 𝕀_a ⇒ f#v.
fn e_one() -> Result<Polygraph> {
    let mut c = crate::complex::DirComplex::new();
    let name = |s: &str| GenId::name(s);
    c.add_gen0(name("a"))?;
    c.add_gen0(name("b"))?;
    let unit = |s: &str| crate::chain::Chain::unit(0, name(s));
    c.add_gen(name("u"), 1, unit("b"), unit("a"))?;
    c.add_gen(name("f"), 1, unit("a"), unit("b"))?;
    c.add_gen(name("v"), 1, unit("b"), unit("a"))?;
    let base = Polygraph::new("E1", c)?;
    let u = base.atom(&name("u"))?;
    let f = base.atom(&name("f"))?;
    let v = base.atom(&name("v"))?;
    let ib = CellTable::object(name("b")).identity();
    let ia = CellTable::object(name("a")).identity();
    let with_two = base.attach_cells(&[
        (name("alpha"), ib, u.compose(&f, 0)?),
        (name("beta"), ia, f.compose(&v, 0)?),
    ])?;
    Polygraph::new("E1", with_two.complex().clone())
}

/// P_1: one E_1 gluing per 1-arrow of the free category on D_1.
fn p_one() -> Result<Polygraph> {
    let base = Polygraph::globe(1);
    let tab = base.enumerate_cells(1, 100)?;
    let mut current = base;
    for (i, w) in tab.cells[1].iter().enumerate() {
        current = glue_e1(&current, w, &format!("att{i}"))?;
    }
    Ok(current)
}

/// Pushout of E_1 ← D_1 → base along the arrow `w`; fresh generators are
/// namespaced by `tag`.
fn glue_e1(base: &Polygraph, w: &CellTable, tag: &str) -> Result<Polygraph> {
    let t = |s: &str| GenId::tag(tag, GenId::name(s));
    let src_obj = w.source(0)?;
    let tgt_obj = w.target(0)?;
    let one = base.attach_cells(&[
        (t("u"), tgt_obj.clone(), src_obj.clone()),
        (t("v"), tgt_obj.clone(), src_obj.clone()),
    ])?;
    let u = one.atom(&t("u"))?;
    let v = one.atom(&t("v"))?;
    let w_in_one = w.clone();
    one.attach_cells(&[
        (t("alpha"), tgt_obj.identity(), u.compose(&w_in_one, 0)?),
        (t("beta"), src_obj.identity(), w_in_one.compose(&v, 0)?),
    ])
}

/// C_n: the spine arrow with every P_k, k < n, glued along its spine.
fn c_stage(n: usize) -> Result<Polygraph> {
    let mut out = Polygraph::globe(1);
    for k in 0..n {
        let pk = counterexample(Stage::P(k))?;
        // P_k contains D_1 as the spine with matching generator names; glue
        // the rest on, namespaced per stage
        let tag = format!("p{k}");
        let spine: BTreeSet<GenId> =
            [GenId::name("e0-"), GenId::name("e0+"), GenId::name("e1")].into_iter().collect();
        let relabel = |g: &GenId| {
            if spine.contains(g) {
                g.clone()
            } else {
                GenId::tag(tag.clone(), g.clone())
            }
        };
        let pk_re = pk.complex().relabel(&relabel)?;
        let mut merged = out.complex().clone();
        for (dim, g) in pk_re.all_gens() {
            if merged.contains(g) {
                continue;
            }
            if dim == 0 {
                merged.add_gen0(g.clone())?;
            } else {
                merged.add_gen(
                    g.clone(),
                    dim,
                    pk_re.boundary_neg(g)?.clone(),
                    pk_re.boundary_pos(g)?.clone(),
                )?;
            }
        }
        for (g, (s, t)) in pk_re.attachments() {
            merged.set_attachment(g, s.clone(), t.clone())?;
        }
        out = Polygraph::new(format!("C{n}"), merged)?;
    }
    Ok(Polygraph::new(format!("C{n}"), out.complex().clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const M: MarkLevel = MarkLevel::Infinite;

    fn n(s: &str) -> GenId {
        GenId::name(s)
    }

    #[test]
    fn generating_cofibrations() {
        let ia0 = gen_cofibration(CofKind::Ia, 0, M);
        assert!(ia0.source.base.complex().is_empty());
        assert_eq!(ia0.target.base.gen_counts(), vec![1]);
        let im1 = gen_cofibration(CofKind::Im, 1, M);
        assert!(im1.source.marking.gen_seeds.is_empty());
        assert!(im1.target.marking.gen_seeds.contains(&n("e1")));
        let ia2 = gen_cofibration(CofKind::Ia, 2, M);
        assert!(ia2.source.marking.gen_seeds.is_empty());
        assert!(ia2.target.marking.gen_seeds.is_empty());
    }

    #[test]
    fn anodyne_eq_source_misses_two_generators() {
        let map = anodyne_gen(1, AnodyneKind::Eq, M).unwrap();
        let total = map.target.base.gen_counts().iter().sum::<usize>();
        let dom = map.source.base.gen_counts().iter().sum::<usize>();
        assert_eq!(total - dom, 2);
        let missing_x = GenId::tensor(n("e0-"), n("e1"));
        let missing_y = GenId::tensor(n("e1"), n("e1"));
        assert!(!map.source.base.complex().contains(&missing_x));
        assert!(!map.source.base.complex().contains(&missing_y));
        assert!(map.target.base.complex().contains(&missing_x));
        assert!(map.target.base.complex().contains(&missing_y));
    }

    #[test]
    fn anodyne_eq_n0_is_point_into_interval() {
        let map = anodyne_gen(0, AnodyneKind::Eq, M).unwrap();
        assert_eq!(map.source.base.gen_counts(), vec![1]);
        assert_eq!(map.target.base.gen_counts(), vec![2, 1]);
    }

    #[test]
    fn anodyne_sat_marks_x_in_target() {
        let map = anodyne_gen(1, AnodyneKind::Sat, M).unwrap();
        let x = GenId::tensor(n("e0-"), n("e1"));
        assert!(!map.source.marking.gen_seeds.contains(&x));
        assert!(map.target.marking.gen_seeds.contains(&x));
        // underlying polygraphs agree
        assert_eq!(map.source.base.complex(), map.target.base.complex());
    }

    #[test]
    fn im_pushout_product_is_base_iso() {
        let im = gen_cofibration(CofKind::Im, 1, M);
        let ia = gen_cofibration(CofKind::Ia, 1, M);
        let pp = pushout_product(&im, &ia, TensorMode::Pseudo).unwrap();
        assert_eq!(pp.source.base.complex(), pp.target.base.complex());
    }

    #[test]
    fn ia_ia_pushout_product_attaches_square_cell() {
        let ia = gen_cofibration(CofKind::Ia, 1, M);
        let pp = pushout_product(&ia, &ia, TensorMode::Pseudo).unwrap();
        // domain is the square boundary, codomain the square with marked cell
        assert_eq!(pp.source.base.gen_counts(), vec![4, 4]);
        assert_eq!(pp.target.base.gen_counts(), vec![4, 4, 1]);
        let top = GenId::tensor(n("e1"), n("e1"));
        assert!(pp.target.marking.gen_seeds.contains(&top));
    }

    #[test]
    fn hemisphere_low_dimensions() {
        for n in 0..=2usize {
            let (_, _, report) = hemisphere_retract(n, M).unwrap();
            for case in &report {
                assert!(case.pass, "{}: {}", case.name, case.detail);
            }
        }
    }

    #[test]
    fn divisions_verify_and_reject_out_of_range() {
        let l = equation(EqKind::LeftDiv { k: 1, n: 1 }, false, M).unwrap();
        assert_eq!(l.carrier.base.gen_counts(), vec![3, 3, 1]);
        let r = equation(EqKind::RightDiv { k: 2, n: 2 }, false, M).unwrap();
        assert_eq!(r.carrier.base.gen_counts(), vec![2, 3, 3, 1]);
        assert!(matches!(
            equation(EqKind::LeftDiv { k: 1, n: 2 }, false, M),
            Err(Error::ParameterRange(_))
        ));
        assert!(matches!(
            equation(EqKind::LeftDiv { k: 0, n: 1 }, false, M),
            Err(Error::ParameterRange(_))
        ));
    }

    #[test]
    fn cylinder_equation_decomposes() {
        for n in 0..=2usize {
            let c = equation(EqKind::Cyl { n }, false, M).unwrap();
            assert_eq!(c.whiskers.len(), n);
        }
        let s = equation(EqKind::Cyl { n: 1 }, true, M).unwrap();
        assert!(s.saturation);
    }

    #[test]
    fn uni_of_cyl0_counts() {
        let c = equation(EqKind::Cyl { n: 0 }, false, M).unwrap();
        let u = uni(&c).unwrap();
        // ΛP has one object; Uni adds the two copies of x and one marked z
        assert_eq!(u.target.base.gen_counts(), vec![3, 3]);
        assert!(u.target.marking.gen_seeds.contains(&n("z")));
        let lambda = c.lambda().unwrap();
        assert_eq!(lambda.base.gen_counts(), vec![1]);
    }

    #[test]
    fn uni_of_left_division_marks_z() {
        let l = equation(EqKind::LeftDiv { k: 1, n: 1 }, false, M).unwrap();
        let u = uni(&l).unwrap();
        assert!(u.target.marking.gen_seeds.contains(&n("z")));
        // two solutions: x and its primed copy
        assert!(u.target.base.complex().contains(&n("x")));
        assert!(u.target.base.complex().contains(&GenId::tag("c2", n("x"))));
        let coh = uni_coh(&l).unwrap();
        assert!(coh.target.base.complex().contains(&n("w")));
        // uni and uni_coh agree on the double
        assert_eq!(u.source.base.complex(), coh.source.base.complex());
    }

    #[test]
    fn s1_map_shapes() {
        let s = two_out_of_six_map(1, M).unwrap();
        assert_eq!(s.source.base.gen_counts(), vec![4, 3]);
        assert_eq!(s.source.marking.cell_seeds.len(), 2);
        assert!(s.target.marking.gen_seeds.contains(&n("f")));
        // the triple composite is not in the closure of {f#g, g#h}
        let fgh = s
            .source
            .base
            .atom(&n("f"))
            .unwrap()
            .compose(&s.source.base.atom(&n("g")).unwrap(), 0)
            .unwrap()
            .compose(&s.source.base.atom(&n("h")).unwrap(), 0)
            .unwrap();
        let r = s.source.closure_contains(&fgh, 10_000).unwrap();
        assert!(r.is_unmarked(), "{r:?}");
        // while f#g itself is marked
        let fg = s
            .source
            .base
            .atom(&n("f"))
            .unwrap()
            .compose(&s.source.base.atom(&n("g")).unwrap(), 0)
            .unwrap();
        assert!(s.source.closure_contains(&fg, 10_000).unwrap().is_marked());
    }

    #[test]
    fn counterexample_stages() {
        let e1 = counterexample(Stage::E(1)).unwrap();
        assert_eq!(e1.gen_counts(), vec![2, 3, 2]);
        assert!(!e1.is_steiner());
        let e2 = counterexample(Stage::E(2)).unwrap();
        assert_eq!(e2.gen_counts(), vec![2, 2, 3, 2]);
        let p1 = counterexample(Stage::P(1)).unwrap();
        assert_eq!(p1.gen_counts(), vec![2, 7, 6]);
        assert!(matches!(counterexample(Stage::P(2)), Err(Error::ParameterRange(_))));
        let c2 = counterexample(Stage::C(2)).unwrap();
        assert_eq!(c2.gen_counts(), vec![2, 7, 6]);
        let d2 = counterexample(Stage::D(2)).unwrap();
        assert_eq!(d2.gen_counts(), vec![1, 6, 6]);
        // collapsing the C-stage spine is exactly the D-stage
        let (collapsed, _) = c2.collapse_generator(&n("e1")).unwrap();
        assert_eq!(collapsed.complex(), d2.complex());
        // the degenerate stages
        assert_eq!(counterexample(Stage::C(0)).unwrap().gen_counts(), vec![2, 1]);
        assert_eq!(counterexample(Stage::D(0)).unwrap().gen_counts(), vec![1]);
    }
}
