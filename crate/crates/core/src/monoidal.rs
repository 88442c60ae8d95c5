//! Lax and pseudo Gray tensor products of marked categories, the marked join,
//! and the associativity/unit self-test.
//!
//! Both tensors share the underlying Gray tensor complex and differ only in
//! the marking: the lax marking seeds every pair with a marked factor, the
//! pseudo marking additionally seeds every pair of two positive-dimensional
//! generators. Markings are computed at generator level; the saturation
//! compatibility making that exact is enforced by the closure-oracle tests
//! rather than assumed.

use std::collections::BTreeSet;

use crate::complex::GenId;
use crate::error::{Error, Result};
use crate::join::join_complex;
use crate::marking::{marking_eq, MarkLevel, MarkedCat, Marking, MarkingCmp};
use crate::polygraph::Polygraph;
use crate::tensor::tensor_complex;

/// Tensor of polygraphs (underlying complexes).
pub fn tensor_polygraph(a: &Polygraph, b: &Polygraph) -> Result<Polygraph> {
    let c = tensor_complex(a.complex(), b.complex())?;
    Polygraph::new(format!("({})x({})", a.name(), b.name()), c)
}

/// Join of polygraphs (underlying complexes).
pub fn join_polygraph(a: &Polygraph, b: &Polygraph) -> Result<Polygraph> {
    let c = join_complex(a.complex(), b.complex())?;
    Polygraph::new(format!("({})*({})", a.name(), b.name()), c)
}

fn marked_gens_all(c: &MarkedCat) -> BTreeSet<GenId> {
    let mut out = BTreeSet::new();
    for d in 1..=c.base.max_dim() {
        out.extend(c.marked_gens(d));
    }
    out
}

fn tensor_seeds(a: &MarkedCat, b: &MarkedCat, pseudo: bool) -> BTreeSet<GenId> {
    let ma = marked_gens_all(a);
    let mb = marked_gens_all(b);
    let mut seeds = BTreeSet::new();
    for (p, x) in a.base.complex().all_gens() {
        for (q, y) in b.base.complex().all_gens() {
            let marked = ma.contains(x) || mb.contains(y) || (pseudo && p > 0 && q > 0);
            if marked {
                seeds.insert(GenId::tensor(x.clone(), y.clone()));
            }
        }
    }
    seeds
}

/// Lax Gray tensor: a pair is marked when either factor is.
pub fn lax_tensor(a: &MarkedCat, b: &MarkedCat) -> Result<MarkedCat> {
    if a.m() != b.m() {
        return Err(Error::MarkLevelMismatch);
    }
    let base = tensor_polygraph(&a.base, &b.base)?;
    let marking = Marking { m: a.m(), gen_seeds: tensor_seeds(a, b, false), cell_seeds: Vec::new() };
    MarkedCat::new(base, marking)
}

/// Pseudo Gray tensor: the lax seeds plus every pair of positive dimensions.
pub fn pseudo_tensor(a: &MarkedCat, b: &MarkedCat) -> Result<MarkedCat> {
    if a.m() != b.m() {
        return Err(Error::MarkLevelMismatch);
    }
    let base = tensor_polygraph(&a.base, &b.base)?;
    let marking = Marking { m: a.m(), gen_seeds: tensor_seeds(a, b, true), cell_seeds: Vec::new() };
    MarkedCat::new(base, marking)
}

/// Marked join: part generators keep their markings, and a joined generator
/// is marked whenever either factor is.
pub fn marked_join(a: &MarkedCat, b: &MarkedCat) -> Result<MarkedCat> {
    if a.m() != b.m() {
        return Err(Error::MarkLevelMismatch);
    }
    let base = join_polygraph(&a.base, &b.base)?;
    let collision = a
        .base
        .complex()
        .all_gens()
        .any(|(_, g)| b.base.complex().contains(g));
    let (lift_l, lift_r): (Box<dyn Fn(&GenId) -> GenId>, Box<dyn Fn(&GenId) -> GenId>) = if collision {
        (
            Box::new(|g: &GenId| GenId::tag("jl", g.clone())),
            Box::new(|g: &GenId| GenId::tag("jr", g.clone())),
        )
    } else {
        (Box::new(|g: &GenId| g.clone()), Box::new(|g: &GenId| g.clone()))
    };
    let ma = marked_gens_all(a);
    let mb = marked_gens_all(b);
    let mut seeds: BTreeSet<GenId> = ma.iter().map(|g| lift_l(g)).collect();
    seeds.extend(mb.iter().map(|g| lift_r(g)));
    for (_, x) in a.base.complex().all_gens() {
        for (_, y) in b.base.complex().all_gens() {
            if ma.contains(x) || mb.contains(y) {
                seeds.insert(GenId::join(lift_l(x), lift_r(y)));
            }
        }
    }
    MarkedCat::new(base, Marking { m: a.m(), gen_seeds: seeds, cell_seeds: Vec::new() })
}

/// One self-test case outcome.
#[derive(Debug, Clone)]
pub struct CaseReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn reassociate(id: &GenId) -> GenId {
    match id {
        GenId::Tensor(ab, c) => match &**ab {
            GenId::Tensor(a, b) => {
                GenId::tensor((**a).clone(), GenId::tensor((**b).clone(), (**c).clone()))
            }
            _ => id.clone(),
        },
        _ => id.clone(),
    }
}

fn strip_unit_left(id: &GenId) -> GenId {
    match id {
        GenId::Tensor(_, b) => (**b).clone(),
        _ => id.clone(),
    }
}

fn strip_unit_right(id: &GenId) -> GenId {
    match id {
        GenId::Tensor(a, _) => (**a).clone(),
        _ => id.clone(),
    }
}

/// Run the monoidal-law self-test: both bracketings of ⋉ and ⊠ over the globe
/// corpus (dimensions ≤ 2, flat/sharp/singleton markings) and the unit laws.
pub fn assoc_unit_selftest() -> Vec<CaseReport> {
    let mut reports = Vec::new();
    let variants = marked_globe_corpus(MarkLevel::Infinite);
    let modes: [(&str, fn(&MarkedCat, &MarkedCat) -> Result<MarkedCat>); 2] =
        [("lax", lax_tensor), ("pseudo", pseudo_tensor)];
    for (mode_name, tensor) in modes {
        for (na, a) in &variants {
            for (nb, b) in &variants {
                for (nc, c) in &variants {
                    let name = format!("{mode_name} assoc {na},{nb},{nc}");
                    let outcome = (|| -> Result<MarkingCmp> {
                        let left = tensor(&tensor(a, b)?, c)?;
                        let right = tensor(a, &tensor(b, c)?)?;
                        let transported = Marking {
                            m: left.marking.m,
                            gen_seeds: left.marking.gen_seeds.iter().map(reassociate).collect(),
                            cell_seeds: Vec::new(),
                        };
                        marking_eq(&transported, &right.marking, &right.base, 10_000)
                    })();
                    push_case(&mut reports, name, outcome);
                }
            }
        }
        // unit laws on each corpus member
        let unit = MarkedCat::flat(Polygraph::point(), MarkLevel::Infinite);
        for (na, a) in &variants {
            let left_name = format!("{mode_name} unit D0x{na}");
            let outcome = (|| -> Result<MarkingCmp> {
                let t = tensor(&unit, a)?;
                let transported = Marking {
                    m: t.marking.m,
                    gen_seeds: t.marking.gen_seeds.iter().map(strip_unit_left).collect(),
                    cell_seeds: Vec::new(),
                };
                marking_eq(&transported, &a.marking, &a.base, 10_000)
            })();
            push_case(&mut reports, left_name, outcome);
            let right_name = format!("{mode_name} unit {na}xD0");
            let outcome = (|| -> Result<MarkingCmp> {
                let t = tensor(a, &unit)?;
                let transported = Marking {
                    m: t.marking.m,
                    gen_seeds: t.marking.gen_seeds.iter().map(strip_unit_right).collect(),
                    cell_seeds: Vec::new(),
                };
                marking_eq(&transported, &a.marking, &a.base, 10_000)
            })();
            push_case(&mut reports, right_name, outcome);
        }
    }
    reports
}

fn push_case(reports: &mut Vec<CaseReport>, name: String, outcome: Result<MarkingCmp>) {
    let (pass, detail) = match outcome {
        Ok(MarkingCmp::Equal) => (true, "Equal".to_string()),
        Ok(MarkingCmp::Differ(cell)) => (false, format!("Differ at {}", cell.top())),
        Ok(MarkingCmp::Unknown) => (false, "Unknown".to_string()),
        Err(e) => (false, format!("error: {e}")),
    };
    reports.push(CaseReport { name, pass, detail });
}

/// Globe corpus with flat, sharp and singleton-seed markings.
pub fn marked_globe_corpus(m: MarkLevel) -> Vec<(String, MarkedCat)> {
    let mut out = Vec::new();
    for n in 0..=2usize {
        let p = Polygraph::globe(n);
        out.push((format!("D{n}flat"), MarkedCat::flat(p.clone(), m)));
        if n >= 1 {
            out.push((format!("D{n}sharp"), MarkedCat::sharp(p.clone(), m)));
            let seed = GenId::name(format!("e{n}"));
            out.push((
                format!("D{n}top"),
                MarkedCat::new(p, Marking::with_gens(m, [seed])).unwrap(),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marking::{flat, sharp};

    fn n(s: &str) -> GenId {
        GenId::name(s)
    }

    fn square_top() -> GenId {
        GenId::tensor(n("e1"), n("e1"))
    }

    #[test]
    fn lax_square_is_flat() {
        let d1 = Polygraph::globe(1);
        let t = lax_tensor(&flat(&d1, MarkLevel::Infinite), &flat(&d1, MarkLevel::Infinite)).unwrap();
        assert!(t.marking.gen_seeds.is_empty());
        assert_eq!(t.base.gen_counts(), vec![4, 4, 1]);
    }

    #[test]
    fn pseudo_square_marks_only_the_two_cell() {
        let d1 = Polygraph::globe(1);
        let t = pseudo_tensor(&flat(&d1, MarkLevel::Infinite), &flat(&d1, MarkLevel::Infinite)).unwrap();
        assert_eq!(t.marking.gen_seeds, BTreeSet::from([square_top()]));
    }

    #[test]
    fn sharp_interval_makes_lax_and_pseudo_agree() {
        let i = sharp(&Polygraph::globe(1), MarkLevel::Infinite);
        for nglobe in 0..=2usize {
            let x = flat(&Polygraph::globe(nglobe), MarkLevel::Infinite);
            let l = lax_tensor(&i, &x).unwrap();
            let p = pseudo_tensor(&i, &x).unwrap();
            assert_eq!(
                marking_eq(&l.marking, &p.marking, &l.base, 10_000).unwrap(),
                MarkingCmp::Equal,
                "I x D{nglobe}"
            );
        }
    }

    #[test]
    fn unit_keeps_marking() {
        let x = sharp(&Polygraph::globe(2), MarkLevel::Infinite);
        let pt = flat(&Polygraph::point(), MarkLevel::Infinite);
        let t = lax_tensor(&pt, &x).unwrap();
        let transported: BTreeSet<GenId> = t.marking.gen_seeds.iter().map(strip_unit_left).collect();
        assert_eq!(transported, x.marking.gen_seeds);
    }

    #[test]
    fn pseudo_contains_lax() {
        let a = sharp(&Polygraph::globe(1), MarkLevel::Infinite);
        let b = flat(&Polygraph::globe(2), MarkLevel::Infinite);
        let l = lax_tensor(&a, &b).unwrap();
        let p = pseudo_tensor(&a, &b).unwrap();
        assert!(l.marking.gen_seeds.is_subset(&p.marking.gen_seeds));
    }

    #[test]
    fn pseudo_flat_square_of_two_globe_marks_bidegrees() {
        let d1 = flat(&Polygraph::globe(1), MarkLevel::Infinite);
        let d2 = flat(&Polygraph::globe(2), MarkLevel::Infinite);
        let t = pseudo_tensor(&d1, &d2).unwrap();
        for g in &t.marking.gen_seeds {
            match g {
                GenId::Tensor(a, b) => {
                    assert_eq!(**a, n("e1"));
                    assert_ne!(format!("{b}"), "e0-");
                    assert_ne!(format!("{b}"), "e0+");
                }
                other => panic!("unexpected seed {other}"),
            }
        }
        assert_eq!(t.marking.gen_seeds.len(), 3); // e1 x {e1-, e1+, e2}
    }

    #[test]
    fn marked_join_of_points_is_flat_arrow() {
        let pt = flat(&Polygraph::point(), MarkLevel::Infinite);
        let j = marked_join(&pt, &pt).unwrap();
        assert!(j.marking.gen_seeds.is_empty());
        assert_eq!(j.base.gen_counts(), vec![2, 1]);
    }

    #[test]
    fn join_of_flats_has_no_marked_seeds() {
        let a = flat(&Polygraph::globe(1), MarkLevel::Infinite);
        let j = marked_join(&a, &a).unwrap();
        assert!(j.marking.gen_seeds.is_empty());
    }

    #[test]
    fn empty_join_is_unit() {
        let x = sharp(&Polygraph::globe(1), MarkLevel::Infinite);
        let e = flat(&Polygraph::empty(), MarkLevel::Infinite);
        let j = marked_join(&e, &x).unwrap();
        assert_eq!(j.marking.gen_seeds, x.marking.gen_seeds);
        assert_eq!(j.base.complex(), x.base.complex());
    }
}
