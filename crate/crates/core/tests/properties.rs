use gbent::arith;
use gbent::classify::{real_prefactor_expected, row_decomp, spectral_form, RowDecomp, Unit};
use gbent::{
    wht_naive, wht_pary_fast, BigInt, ComponentTuple, Cyc, Cyc64, GBFunction, PAryFunction,
};
use proptest::prelude::*;

const MODULI: [u64; 8] = [4, 12, 20, 28, 36, 60, 84, 108];

fn cyc_in(m: u64) -> impl Strategy<Value = Cyc> {
    prop::collection::vec(-50i64..50, 0..(m as usize + 5))
        .prop_map(move |c| Cyc::from_poly(m, c.into_iter().map(BigInt::from).collect()))
}

fn cyc_pair() -> impl Strategy<Value = (Cyc, Cyc)> {
    prop::sample::select(MODULI.to_vec()).prop_flat_map(|m| (cyc_in(m), cyc_in(m)))
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7])
}

fn pary(p: u64, n: u32) -> impl Strategy<Value = PAryFunction> {
    prop::collection::vec(0..p, arith::pow(p, n) as usize)
        .prop_map(move |t| PAryFunction::new(p, n, t).unwrap())
}

fn gb(p: u64, n: u32, q: u64) -> impl Strategy<Value = GBFunction> {
    prop::collection::vec(0..q, arith::pow(p, n) as usize)
        .prop_map(move |t| GBFunction::new(p, n, q, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_is_an_involutive_automorphism((a, b) in cyc_pair()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.norm_sq(), a.norm_sq().conj());
    }

    #[test]
    fn ring_axioms((a, b) in cyc_pair(), t in -200i64..200) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        let m = a.modulus();
        prop_assert_eq!(a.mul_root(t), &a * &Cyc::root(m, t));
        prop_assert_eq!(a.mul_root(t).mul_root(-t), a);
    }

    #[test]
    fn promotion_is_a_ring_embedding((a, b) in cyc_pair(), d in 1u64..4) {
        let to = a.modulus() * d;
        let (pa, pb) = (a.promote(to).unwrap(), b.promote(to).unwrap());
        prop_assert_eq!((&a * &b).promote(to).unwrap(), &pa * &pb);
        prop_assert_eq!((&a + &b).promote(to).unwrap(), &pa + &pb);
        prop_assert_eq!(a.conj().promote(to).unwrap(), pa.conj());
        let t = 7i64;
        prop_assert_eq!(Cyc::root(a.modulus(), t).promote(to).unwrap(), Cyc::root(to, t * d as i64));
    }

    #[test]
    fn coefficients_reduce_like_root_sums(m in prop::sample::select(MODULI.to_vec()), c in prop::collection::vec(-9i64..9, 0..120)) {
        let direct = Cyc::from_poly(m, c.iter().copied().map(BigInt::from).collect());
        let summed = c.iter().enumerate().fold(Cyc::zero(m), |acc, (i, &ci)| {
            acc + Cyc::root(m, i as i64).scalar_mul(&BigInt::from(ci))
        });
        prop_assert_eq!(direct, summed);
    }

    #[test]
    fn text_form_round_trips((a, _) in cyc_pair()) {
        let text = a.to_string();
        let back: Cyc = text.parse().unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn fixed_width_agrees_with_bigint((a, b) in cyc_pair()) {
        let (sa, sb): (Cyc64, Cyc64) = (a.cast(), b.cast());
        prop_assert_eq!((&sa * &sb).cast::<BigInt>(), &a * &b);
    }

    #[test]
    fn fast_transform_matches_direct(p in prime(), n in 1u32..4, seed in any::<u64>()) {
        let len = arith::pow(p, n) as usize;
        let table: Vec<u64> = (0..len as u64).map(|i| (i.wrapping_mul(seed | 1) >> 7) % p).collect();
        let g = PAryFunction::new(p, n, table).unwrap();
        prop_assert_eq!(wht_pary_fast::<BigInt>(&g), wht_naive::<BigInt>(&g.to_gb()));
    }

    #[test]
    fn digits_then_compose_is_identity(f in gb(3, 2, 27)) {
        let t = f.digits().unwrap();
        prop_assert_eq!(t.compose(), f);
    }

    #[test]
    fn combinations_are_linear(f0 in pary(3, 2), f1 in pary(3, 2), f2 in pary(3, 2), a in prop::collection::vec(0u64..3, 2)) {
        let t = ComponentTuple::new(27, vec![f0.clone(), f1.clone(), f2.clone()]).unwrap();
        let g = t.combine(&a).unwrap();
        for x in 0..9 {
            let want = (f0.table()[x] + a[0] * f1.table()[x] + a[1] * f2.table()[x]) % 3;
            prop_assert_eq!(g.table()[x], want);
        }
    }

    #[test]
    fn parseval_on_random_functions(q in prop::sample::select(vec![3u64, 6, 9, 15, 21, 27]), f_seed in any::<u64>()) {
        let table: Vec<u64> = (0..9u64).map(|i| (f_seed >> (i * 5)) % q).collect();
        let f = GBFunction::new(3, 2, q, table).unwrap();
        prop_assert!(wht_naive::<BigInt>(&f).parseval_holds());
    }

    #[test]
    fn row_decomposition_round_trips(
        p in prime(),
        levels in 1u32..3,
        n in 1u32..4,
        j_seed in any::<u64>(),
        alpha_idx in 0usize..4,
    ) {
        let levels = if p == 7 { 1 } else { levels };
        let v: Vec<u64> = (0..levels).map(|i| (j_seed >> (8 * i)) % p).collect();
        let d = RowDecomp {
            alpha: Unit::ALL[alpha_idx],
            j: (j_seed >> 40) % p,
            r: arith::from_digits_le(&v, p),
            v,
        };
        let vec: Vec<Cyc> = d.reconstruct(p, n, 4 * p).unwrap();
        prop_assert_eq!(row_decomp(&vec, p, n).unwrap(), Some(d));
    }

    #[test]
    fn prefactor_parity_on_quadratics(p in prime(), a in 1u64..7, b in 0u64..7, c in 0u64..7) {
        let a = a % p;
        prop_assume!(a != 0);
        let f = GBFunction::from_fn(p, 1, p, |x| (a * x[0] * x[0] + b * x[0] + c) % p).unwrap();
        let forms = spectral_form::<BigInt>(&f).unwrap();
        let real = real_prefactor_expected(p, 1);
        prop_assert!(forms.iter().all(|s| s.map(|s| s.alpha.is_real()) == Some(real)));
    }
}
