//! Randomized agreement between the Gröbner side and independent routes.

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rees_core::gbasis::GroebnerBasis;
use rees_core::hilbert::{dubreil_identity_check, h1_series, hilbert_series};
use rees_core::oracle::{kernel_dimensions, rank_hilbert_upto};
use rees_core::rees::{rees_ideal, ReesSetup};
use rees_core::syzmatrix::monomial_basis;
use rees_core::{Field, Poly, Ring};

const P: u32 = 32003;

fn random_form(ring: &Arc<Ring>, deg: u32, rng: &mut ChaCha8Rng, density: f64) -> Poly {
    let mut p = Poly::zero(ring);
    for m in monomial_basis(ring, deg) {
        if rng.gen_bool(density) {
            let c = ring.field().from_i64(rng.gen_range(-50..=50));
            p = &p + &m.scale(&c);
        }
    }
    p
}

/// `d+1` random forms of degree `n` whose first `d` form a regular sequence
/// and which are minimally generated.
fn random_aci(seed: u64, d: usize, n: u32) -> (Arc<Ring>, Vec<Poly>) {
    let ring = Ring::polynomial(d, Field::Prime(P));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let gens: Vec<Poly> = (0..=d).map(|_| random_form(&ring, n, &mut rng, 0.6)).collect();
        if ReesSetup::new(&ring, &gens, None).is_ok() {
            return (ring, gens);
        }
    }
}

#[test]
fn dubreil_identity_on_random_ternary_cubics() {
    for seed in 0..20 {
        let (ring, gens) = random_aci(seed, 3, 3);
        let setup = ReesSetup::new(&ring, &gens, None).unwrap();
        let j = setup.j();
        assert!(dubreil_identity_check(&ring, &j, setup.a(), 3).unwrap(), "seed {seed}");
        let h1 = h1_series(&ring, &j, setup.a()).unwrap();
        let mut quotient = hilbert_series(&ring, &gens).unwrap().coeffs;
        quotient.reverse();
        assert_eq!(h1.coeffs, quotient, "seed {seed}");
    }
}

#[test]
fn dubreil_identity_on_random_quaternary_quadrics() {
    for seed in 0..5 {
        let (ring, gens) = random_aci(100 + seed, 4, 2);
        let setup = ReesSetup::new(&ring, &gens, None).unwrap();
        assert!(dubreil_identity_check(&ring, &setup.j(), setup.a(), 2).unwrap(), "seed {seed}");
    }
}

#[test]
fn oracle_matches_rees_pieces_on_random_ternary_quadrics() {
    for seed in 0..5 {
        let (ring, gens) = random_aci(200 + seed, 3, 2);
        let setup = ReesSetup::new(&ring, &gens, None).unwrap();
        let rees = rees_ideal(&setup).unwrap();
        for b in 0..=3 {
            let dims = kernel_dimensions(&gens, 6, b).unwrap();
            for (a, &dim) in dims.iter().enumerate() {
                assert_eq!(dim as usize, rees.piece_dimension(a as u32, b), "seed {seed}, ({a},{b})");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_hilbert_matches_series(seed in any::<u64>(), k in 1usize..5, deg in 1u32..4) {
        let ring = Ring::polynomial(3, Field::Prime(P));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Poly> = (0..k)
            .map(|_| random_form(&ring, deg + rng.gen_range(0..2), &mut rng, 0.5))
            .filter(|g| !g.is_zero())
            .collect();
        prop_assume!(!gens.is_empty());
        let series = hilbert_series(&ring, &gens);
        // Non-artinian ideals have no finite series; compare a window instead.
        let ranks = rank_hilbert_upto(&gens, 7).unwrap();
        match series {
            Ok(s) => {
                for (t, r) in ranks.iter().enumerate() {
                    prop_assert_eq!(*r, s.at(t as i64));
                }
            }
            Err(_) => prop_assert!(ranks.iter().any(|&r| r > 0)),
        }
    }

    #[test]
    fn groebner_membership_of_combinations(seed in any::<u64>()) {
        let ring = Ring::polynomial(3, Field::Prime(P));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Poly> = (0..3).map(|_| random_form(&ring, 2, &mut rng, 0.7)).collect();
        let gb = GroebnerBasis::new(&ring, &gens).unwrap();
        prop_assert!(gb.verify());
        let mut combo = Poly::zero(&ring);
        for g in &gens {
            combo = &combo + &(g * &random_form(&ring, 1, &mut rng, 0.7));
        }
        prop_assert!(gb.contains(&combo));
        let cert = gb.certificate(&combo);
        prop_assert!(cert.verify());
        prop_assert!(cert.remainder.is_zero());
    }
}
