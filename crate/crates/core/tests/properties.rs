use emergent_core::algebra::{
    check_idempotent, check_left_division, check_one_parameter_law, check_trivial_at_neutral,
    probe_scales, self_distributivity_residual,
};
use emergent_core::groupoid::deformed_dif_residual;
use emergent_core::models::{
    heisenberg_exp, heisenberg_log, heisenberg_mul, integer_phi_power, NetOrientation,
    NonMorphismModel,
};
use emergent_core::sampling::sample_ball;
use emergent_core::{op, Arrow, ModelId, ModelSpec, Point, ScaleElement};
use proptest::prelude::*;

fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quasigroup_axioms_hold_on_every_model(idx in 0usize..7, seed in any::<u64>()) {
        let id = ModelId::ALL[idx];
        let m = ModelSpec::new(id).build().unwrap();
        let radius = m.locality().unwrap_or(1.0).min(1.0) * 0.5;
        let sample = sample_ball(m.as_ref(), &m.base_point(), radius, 12, seed).unwrap();
        let tol = 1e-9;
        prop_assert!(check_trivial_at_neutral(m.as_ref(), &sample, tol).unwrap().pass);
        let scales: Vec<_> = probe_scales(m.scale_kind())
            .into_iter()
            .filter(|e| m.locality().is_none() || m.contraction(e) <= 1.0)
            .collect();
        for e in &scales {
            prop_assert!(check_idempotent(m.as_ref(), e, &sample, tol).unwrap().pass, "{id} {e:?}");
            prop_assert!(check_left_division(m.as_ref(), e, &sample, tol).unwrap().pass, "{id} {e:?}");
            for mu in &scales {
                let r = check_one_parameter_law(m.as_ref(), e, mu, &sample, tol).unwrap();
                prop_assert!(r.pass, "{id} {e:?} {mu:?}: {}", r.max_residual);
            }
        }
    }

    #[test]
    fn heisenberg_law_is_associative(p in coords(3), q in coords(3), r in coords(3)) {
        let (p, q, r) = (Point::from(p), Point::from(q), Point::from(r));
        let left = heisenberg_mul(&heisenberg_mul(&p, &q), &r);
        let right = heisenberg_mul(&p, &heisenberg_mul(&q, &r));
        prop_assert!(left.gap(&right) <= 1e-15);
    }

    #[test]
    fn heisenberg_log_inverts_exp(v in coords(3)) {
        let back = heisenberg_log(&heisenberg_exp(&v));
        prop_assert!(v.iter().zip(back).all(|(a, b)| (a - b).abs() <= 1e-12));
    }

    #[test]
    fn phi_powers_invert(v in coords(2), n in -4i64..=4) {
        let m = NonMorphismModel::new(NetOrientation::Contracting);
        let p = Point::from(v);
        let back = integer_phi_power(&m, -n, &integer_phi_power(&m, n, &p));
        prop_assert!(back.gap(&p) <= 1e-9);
    }

    #[test]
    fn triangular_deformation_is_self_distributive(
        x in coords(2), y in coords(2), z in coords(2), n in -2i64..=2,
    ) {
        // The map is conjugate to a linear one, so the identity survives.
        let m = NonMorphismModel::new(NetOrientation::Contracting);
        let (x, y, z) = (Point::from(x), Point::from(y), Point::from(z));
        let r = self_distributivity_residual(&m, &ScaleElement::integer(n), &x, &y, &z).unwrap();
        prop_assert!(r <= 1e-12);
    }

    #[test]
    fn sphere_dilations_stay_on_the_sphere(seed in any::<u64>(), e in 0.01..1.0f64) {
        let m = ModelSpec::new(ModelId::Sphere).build().unwrap();
        let s = sample_ball(m.as_ref(), &m.base_point(), 0.5, 2, seed).unwrap();
        let p = op(m.as_ref(), &ScaleElement::positive(e).unwrap(), &s[0], &s[1]).unwrap();
        prop_assert!((p.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn deformed_difference_satisfies_its_relation(
        idx in 0usize..7, seed in any::<u64>(), k in 0usize..5,
    ) {
        let m = ModelSpec::new(ModelId::ALL[idx]).build().unwrap();
        let radius = m.locality().unwrap_or(1.0).min(1.0) * 0.5;
        let s = sample_ball(m.as_ref(), &m.base_point(), radius, 3, seed).unwrap();
        let e = probe_scales(m.scale_kind())[k % 3];
        let g = Arrow::new(s[1].clone(), s[0].clone());
        let h = Arrow::new(s[2].clone(), s[0].clone());
        prop_assert!(deformed_dif_residual(m.as_ref(), &e, &g, &h).unwrap() <= 1e-9);
    }

    #[test]
    fn scale_inverse_cancels(a in 0.01..100.0f64, n in -50i64..50) {
        let e = ScaleElement::positive(a).unwrap();
        let one = e.compose(&e.invert()).unwrap();
        prop_assert!((one.closeness() - 1.0).abs() <= 1e-15);
        let k = ScaleElement::integer(n);
        prop_assert!(k.compose(&k.invert()).unwrap().is_neutral());
    }
}
