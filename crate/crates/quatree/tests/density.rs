//! Density-construction certification: random SL2(Q_3) targets known to
//! six digits are approximated by exact-norm-1 rational quaternions whose
//! splits agree to four digits and which act identically on ball(3).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quatree::exact::rat;
use quatree::mat2::Mat2;
use quatree::quat::QuaternionAlgebra;
use quatree::split::{approximate_in_g, approximate_torus, SplitContext};
use quatree::tree::{act_padic, act_rational, Ball, Vertex};

/// Random SL2(Q) matrix with 3-integral entries, built from elementary
/// factors so the determinant is exactly 1.
fn random_sl2(rng: &mut ChaCha8Rng) -> Mat2<BigRational> {
    let mut g = Mat2::<BigRational>::identity();
    for _ in 0..4 {
        let t = BigRational::new(
            BigInt::from(rng.gen_range(-9i64..=9)),
            BigInt::from([1i64, 2, 4, 5][rng.gen_range(0..4)]),
        );
        let e = if rng.gen_bool(0.5) {
            Mat2::new(rat(1), t, rat(0), rat(1))
        } else {
            Mat2::new(rat(1), rat(0), t, rat(1))
        };
        g = g.mul(&e);
    }
    g
}

#[test]
fn twenty_targets_known_mod_3_pow_6() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let alg = QuaternionAlgebra::new(rat(-2), rat(-5)).unwrap();
    let ctx = SplitContext::new(&alg, 3, 12).unwrap();
    let ball = Ball::enumerate(&Vertex::base(3), 3);
    let mut done = 0;
    while done < 20 {
        let m = random_sl2(&mut rng);
        // The approximation only ever sees the target mod 3^6.
        let target = m.embed(3, 6);
        let q = match approximate_in_g(&ctx, &target, 4) {
            Ok(q) => q,
            Err(e) => panic!("approximation failed for {m}: {e}"),
        };
        assert_eq!(alg.norm(&q), BigRational::one(), "norm must be exactly 1");
        let resplit = ctx.split(&q);
        assert!(
            resplit.eq_mod(&target, 4).unwrap(),
            "split does not match target mod 3^4"
        );
        // Identical action on ball(3), vertex by vertex, against the exact
        // matrix the target was sampled from.
        for v in &ball.vertices {
            assert_eq!(
                act_padic(&resplit, v).unwrap(),
                act_rational(&m, v).unwrap(),
                "action diverges at {v} for target {m}"
            );
        }
        done += 1;
    }
}

#[test]
fn torus_targets_across_valuations() {
    let alg = QuaternionAlgebra::new(rat(-2), rat(-5)).unwrap();
    for (num, den) in [(1i64, 3i64), (3, 1), (9, 1), (2, 1), (5, 3), (1, 9)] {
        let lambda = BigRational::new(BigInt::from(num), BigInt::from(den));
        let (q, ctx) =
            quatree::split::approximate_torus_rational(&alg, 3, &lambda, 5).unwrap();
        assert_eq!(alg.norm(&q), BigRational::one());
        let m = ctx.split(&q);
        let lam = quatree::padic::Padic::from_rational(&lambda, 3, ctx.precision());
        assert!(m.a.eq_mod(&lam, 5).unwrap());
        assert!(m.d.eq_mod(&lam.inv().unwrap(), 5).unwrap());
        assert!(m.b.is_zero_mod(5).unwrap());
        assert!(m.c.is_zero_mod(5).unwrap());
    }
}

#[test]
fn torus_identity_branch_threshold() {
    let alg = QuaternionAlgebra::new(rat(-2), rat(-5)).unwrap();
    let ctx = SplitContext::new(&alg, 3, 12).unwrap();
    // lambda = 1 + 3^7 is 1 to 4 digits: the identity is returned.
    let lambda = quatree::padic::Padic::from_rational(
        &(rat(1) + BigRational::from(BigInt::from(3)).pow(7)),
        3,
        12,
    );
    assert_eq!(approximate_torus(&ctx, &lambda, 4).unwrap(), alg.one());
    // But at 9 digits it is not 1 anymore and gets a genuine approximation.
    let q = approximate_torus(&ctx, &lambda, 9).unwrap();
    assert_ne!(q, alg.one());
    assert_eq!(alg.norm(&q), BigRational::one());
}
