//! Exact arithmetic layer: prime fields, grevlex monomials, sparse
//! homogeneous polynomials and formal derivatives.
//!
//! Everything here is immutable after construction and freely shareable
//! across threads.

mod field;
mod monomial;
mod poly;

pub use field::PrimeField;
pub use monomial::{monomials_of_degree, Monomial, MAX_VARS};
pub use poly::{jacobian, parse_polynomial, Polynomial, Ring, Term};

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly(ring: Ring, maxdeg: u32) -> impl Strategy<Value = Polynomial> {
        let n = ring.nvars();
        prop::collection::vec(
            (
                0i64..ring.modulus() as i64,
                prop::collection::vec(0u8..=3, n).prop_map(move |e| Monomial::from_exps(&e)),
            ),
            0..8,
        )
        .prop_map(move |ts| {
            ring.from_terms(ts.into_iter().filter(|(_, m)| m.degree() <= maxdeg))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(fg in (Just(Ring::new(101, 3).unwrap())).prop_flat_map(|r| {
            (arb_poly(r, 6), arb_poly(r, 6), arb_poly(r, 6))
        })) {
            let (f, g, h) = fg;
            // commutativity and associativity
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
            prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
            prop_assert_eq!(
                f.mul(&g).unwrap().mul(&h).unwrap(),
                f.mul(&g.mul(&h).unwrap()).unwrap()
            );
            // distributivity
            prop_assert_eq!(
                f.mul(&g.add(&h).unwrap()).unwrap(),
                f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
            );
        }

        #[test]
        fn leibniz_rule(fg in (Just(Ring::new(101, 3).unwrap())).prop_flat_map(|r| {
            (arb_poly(r, 5), arb_poly(r, 5), 0usize..3)
        })) {
            let (f, g, i) = fg;
            let lhs = f.mul(&g).unwrap().partial_derivative(i).unwrap();
            let rhs = f
                .mul(&g.partial_derivative(i).unwrap())
                .unwrap()
                .add(&g.mul(&f.partial_derivative(i).unwrap()).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn parse_roundtrip(f in (Just(Ring::new(101, 4).unwrap())).prop_flat_map(|r| arb_poly(r, 6))) {
            let r = *f.ring();
            let back = parse_polynomial(&r, &f.to_string()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
