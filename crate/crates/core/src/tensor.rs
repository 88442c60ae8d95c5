//! Gray tensor product of directed complexes.
//!
//! Basis elements in dimension d are pairs (x, y) with dim x + dim y = d; the
//! boundary follows the graded Leibniz rule, the first factor's parity
//! deciding which boundary of the second lands on which side:
//! `∂(x⊗y) = ∂x⊗y + (−1)^{dim x} x⊗∂y`.

use crate::chain::Chain;
use crate::complex::{DirComplex, GenId};
use crate::error::{Error, Result};

fn chain_tensor_gen(c: &Chain, y: &GenId, ydim: usize) -> Chain {
    Chain::from_entries(c.dim() + ydim, c.iter().map(|(x, k)| (GenId::tensor(x.clone(), y.clone()), k)))
}

fn gen_tensor_chain(x: &GenId, xdim: usize, c: &Chain) -> Chain {
    Chain::from_entries(xdim + c.dim(), c.iter().map(|(y, k)| (GenId::tensor(x.clone(), y.clone()), k)))
}

/// Tensor of two strongly loop-free unital complexes. The result is again
/// strongly loop-free unital; callers relying on that revalidate via
/// `Polygraph::new`.
pub fn tensor_complex(a: &DirComplex, b: &DirComplex) -> Result<DirComplex> {
    for (side, c) in [("left", a), ("right", b)] {
        if !crate::cell::is_loopfree_unital(c) {
            return Err(Error::NotSteiner(format!("{side} tensor factor")));
        }
    }
    let mut out = DirComplex::new();
    let mut pairs: Vec<(usize, GenId, usize, GenId)> = Vec::new();
    for (p, x) in a.all_gens() {
        for (q, y) in b.all_gens() {
            pairs.push((p, x.clone(), q, y.clone()));
        }
    }
    pairs.sort_by_key(|(p, _, q, _)| p + q);
    for (p, x, q, y) in pairs {
        let id = GenId::tensor(x.clone(), y.clone());
        let d = p + q;
        if d == 0 {
            out.add_gen0(id)?;
            continue;
        }
        let mut src = Chain::zero(d - 1);
        let mut tgt = Chain::zero(d - 1);
        if p >= 1 {
            src = src.add(&chain_tensor_gen(a.boundary_neg(&x)?, &y, q));
            tgt = tgt.add(&chain_tensor_gen(a.boundary_pos(&x)?, &y, q));
        }
        if q >= 1 {
            let (to_src, to_tgt) = if p % 2 == 0 {
                (b.boundary_neg(&y)?, b.boundary_pos(&y)?)
            } else {
                (b.boundary_pos(&y)?, b.boundary_neg(&y)?)
            };
            src = src.add(&gen_tensor_chain(&x, p, to_src));
            tgt = tgt.add(&gen_tensor_chain(&x, p, to_tgt));
        }
        out.add_gen(id, d, src, tgt)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::{atom, is_loopfree_unital};
    use crate::polygraph::globe_complex;

    fn t(a: &str, b: &str) -> GenId {
        GenId::tensor(GenId::name(a), GenId::name(b))
    }

    #[test]
    fn square_counts_and_boundaries() {
        let c = tensor_complex(&globe_complex(1), &globe_complex(1)).unwrap();
        assert_eq!(c.gen_counts(), vec![4, 4, 1]);
        assert!(c.validate().ok());
        assert!(is_loopfree_unital(&c));
        let top = atom(&c, &t("e1", "e1")).unwrap();
        let src = Chain::from_entries(1, [(t("e0-", "e1"), 1), (t("e1", "e0+"), 1)]);
        let tgt = Chain::from_entries(1, [(t("e1", "e0-"), 1), (t("e0+", "e1"), 1)]);
        assert_eq!(top.neg(1), &src);
        assert_eq!(top.pos(1), &tgt);
    }

    #[test]
    fn point_is_a_unit() {
        let x = tensor_complex(&globe_complex(0), &globe_complex(2)).unwrap();
        let back = x.relabel(&|g| match g {
            GenId::Tensor(_, b) => (**b).clone(),
            other => other.clone(),
        });
        assert_eq!(back.unwrap(), globe_complex(2));
    }

    #[test]
    fn counts_are_convolutions() {
        let c = tensor_complex(&globe_complex(1), &globe_complex(2)).unwrap();
        assert_eq!(c.gen_counts(), vec![4, 6, 4, 1]);
        let g = tensor_complex(&globe_complex(2), &globe_complex(2)).unwrap();
        assert_eq!(g.gen_counts(), vec![4, 8, 8, 4, 1]);
    }

    #[test]
    fn refuses_non_steiner_factor() {
        let mut bad = DirComplex::new();
        bad.add_gen0(GenId::name("x")).unwrap();
        bad.add_gen(
            GenId::name("f"),
            1,
            Chain::unit(0, GenId::name("x")),
            Chain::unit(0, GenId::name("x")),
        )
        .unwrap();
        assert!(tensor_complex(&bad, &globe_complex(1)).is_err());
    }
}
