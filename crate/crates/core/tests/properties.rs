use hgmk3::ffield::FieldSpec;
use hgmk3::rat::{fmt_q, parse_q, Q};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::sync::OnceLock;

fn fields() -> &'static [FieldSpec] {
    static F: OnceLock<Vec<FieldSpec>> = OnceLock::new();
    F.get_or_init(|| [7, 25, 27, 49, 121, 343].iter().map(|&q| FieldSpec::of_order(q).unwrap()).collect())
}

proptest! {
    #[test]
    fn field_axioms(k in 0usize..6, a in 0u64..1_000_000, b in 0u64..1_000_000, c in 0u64..1_000_000) {
        let f = &fields()[k];
        let q = f.q();
        let (a, b, c) = (f.from_index(a % q), f.from_index(b % q), f.from_index(c % q));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), f.one());
            prop_assert_eq!(f.pow(a, q as i64 - 1), f.one());
            let sq = f.mul(a, a);
            prop_assert!(f.is_square(sq));
            let r = f.sqrt(sq).unwrap();
            prop_assert_eq!(f.mul(r, r), sq);
            prop_assert_eq!(f.chi(sq), 1);
        }
    }

    #[test]
    fn rationals_roundtrip(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
        let r = Q::new(BigInt::from(n), BigInt::from(d));
        prop_assert_eq!(parse_q(&fmt_q(&r)).unwrap(), r);
    }

    #[test]
    fn reduction_is_a_homomorphism(n1 in -500i64..500, d1 in 1i64..50, n2 in -500i64..500, d2 in 1i64..50) {
        let f = &fields()[3];
        let r1 = Q::new(BigInt::from(n1), BigInt::from(d1));
        let r2 = Q::new(BigInt::from(n2), BigInt::from(d2));
        if let (Some(a), Some(b)) = (f.from_q(&r1), f.from_q(&r2)) {
            prop_assert_eq!(f.from_q(&(&r1 * &r2)).unwrap(), f.mul(a, b));
            prop_assert_eq!(f.from_q(&(&r1 + &r2)).unwrap(), f.add(a, b));
        }
    }
}
