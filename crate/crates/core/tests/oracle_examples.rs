use rees_core::fixtures::fixture;
use rees_core::oracle::{rank_hilbert, truncated_kernel, Caps};
use rees_core::parse_poly;
use rees_core::rees::ReesSetup;

fn setup(name: &str) -> ReesSetup {
    let l = fixture(name).unwrap().load().unwrap();
    let red = l.spec.reduction0();
    ReesSetup::new(&l.ring, &l.gens, red.as_deref()).unwrap()
}

#[test]
fn binary_kernel_in_bidegree_2_1_is_spanned_by_f() {
    let s = setup("binary");
    let k = truncated_kernel(&s, 2, 1, Caps::default()).unwrap();
    assert_eq!(k.dimension, 1);
    let f = parse_poly("x^2*T1 + x*y*T2 + y^2*T3", &s.rees_ring).unwrap();
    assert_eq!(k.basis[0].monic(), f.monic());
    assert_eq!(truncated_kernel(&s, 0, 0, Caps::default()).unwrap().dimension, 0);
}

#[test]
fn kernel_basis_vanishes_on_the_generators() {
    let s = setup("ternary-quadrics");
    let images: Vec<_> = (0..s.rees_ring.nvars())
        .map(|i| {
            if i < s.d {
                rees_core::Poly::var(&s.ring, i)
            } else {
                s.gens[i - s.d].clone()
            }
        })
        .collect();
    for (a, b) in [(1, 1), (2, 2), (0, 4), (3, 2)] {
        let k = truncated_kernel(&s, a, b, Caps::default()).unwrap();
        assert_eq!(k.basis.len(), k.dimension);
        for p in &k.basis {
            assert!(p.substitute(&images).unwrap().is_zero());
        }
    }
}

#[test]
fn quaternary_cubics_quotient_in_degree_5() {
    let s = setup("quaternary-cubics");
    assert_eq!(rank_hilbert(&s.gens, 5).unwrap(), 7);
    assert_eq!(rank_hilbert(&s.gens, 7).unwrap(), 0);
}
