use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sscurve::budget::Budget;
use sscurve::classify::{check_curve_witness, curves_isomorphic, scaling_orbit};
use sscurve::field::{make_field, FieldElem};
use sscurve::linops::LinPoly;

#[test]
fn reflexive_and_symmetric_on_random_inputs() {
    let budget = Budget::default();
    let f = make_field(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let h = rng.gen_range(1..=3);
        let mut coeffs: Vec<FieldElem> = (0..h).map(|_| f.elem(rng.gen_range(0..4)).unwrap()).collect();
        coeffs.push(f.elem(rng.gen_range(1..4)).unwrap());
        let r = LinPoly::new(f, coeffs.clone()).unwrap();
        let w = curves_isomorphic(&r, &r, &budget).unwrap().expect("reflexive");
        assert!(check_curve_witness(&r, &r, &w).unwrap());
        // perturb one lower coefficient
        let i = rng.gen_range(0..h);
        coeffs[i] = f.elem(rng.gen_range(0..4)).unwrap();
        let r2 = LinPoly::new(f, coeffs).unwrap();
        let there = curves_isomorphic(&r, &r2, &budget).unwrap();
        let back = curves_isomorphic(&r2, &r, &budget).unwrap();
        assert_eq!(there.is_some(), back.is_some());
        if let Some(w) = there {
            assert!(check_curve_witness(&r, &r2, &w).unwrap());
        }
    }
}

#[test]
fn scaling_orbit_is_isomorphic() {
    let budget = Budget::default();
    let f = make_field(3).unwrap();
    let r = LinPoly::new(f, vec![FieldElem::ONE, FieldElem::ZERO, f.generator()]).unwrap();
    for c in 1..8 {
        let r2 = scaling_orbit(&r, f.elem(c).unwrap()).unwrap();
        let w = curves_isomorphic(&r, &r2, &budget).unwrap().expect("orbit element");
        assert!(check_curve_witness(&r, &r2, &w).unwrap());
    }
}
