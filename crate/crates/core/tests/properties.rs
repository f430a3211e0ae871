use proptest::prelude::*;

use qps_core::forms::{Form, PolarKind};
use qps_core::gf::{Elem, FieldTable};
use qps_core::pg::{gauss1, PointSet, ProjSpace};
use qps_core::spectra;
use qps_core::surgery;

const ORDERS: [usize; 10] = [2, 3, 4, 5, 7, 8, 9, 16, 27, 32];

fn field_and_elems() -> impl Strategy<Value = (usize, Elem, Elem, Elem)> {
    prop::sample::select(&ORDERS[..]).prop_flat_map(|q| {
        let e = 0..q as Elem;
        (Just(q), e.clone(), e.clone(), e)
    })
}

fn space_and_subset() -> impl Strategy<Value = (usize, usize, Vec<bool>)> {
    prop::sample::select(vec![(2usize, 2usize), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2)]).prop_flat_map(|(m, q)| {
        let n = gauss1(q, m as u32 + 1);
        (Just(m), Just(q), prop::collection::vec(any::<bool>(), n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms((q, a, b, c) in field_and_elems()) {
        let f = FieldTable::new(q).unwrap();
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, q as u64 - 1), 1);
        }
    }

    #[test]
    fn points_round_trip_through_scaling(
        (m, q) in prop::sample::select(vec![(2usize, 4usize), (3, 3), (4, 2), (2, 9)]),
        seed in any::<u64>(),
        k in 1usize..32,
    ) {
        let space = ProjSpace::of(m, q).unwrap();
        let f = space.field();
        let mut v: Vec<Elem> = (0..=m).map(|i| ((seed >> (5 * i)) % q as u64) as Elem).collect();
        if v.iter().all(|&x| x == 0) {
            v[m] = 1;
        }
        let scalar = (k % (q - 1)) as Elem + 1;
        let scaled: Vec<Elem> = v.iter().map(|&x| f.mul(x, scalar)).collect();
        let i = space.normalize_point(&v).unwrap();
        prop_assert_eq!(space.normalize_point(&scaled).unwrap(), i);
        prop_assert_eq!(space.normalize_point(space.point(i)).unwrap(), i);
    }

    #[test]
    fn counting_identities_hold_for_any_set((m, q, mask) in space_and_subset()) {
        let space = ProjSpace::of(m, q).unwrap();
        let s = PointSet::from_indices(space.num_points(), mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i));
        let sp = spectra::spectrum(&space, &s);
        prop_assert!(spectra::counting_identities_hold(&space, &sp, s.count() as u64));
        prop_assert_eq!(sp.histogram.values().sum::<u64>() as usize, space.num_points());
    }

    #[test]
    fn switching_only_touches_the_hyperplane((m, q, mask) in space_and_subset(), h_seed in any::<usize>()) {
        let space = ProjSpace::of(m, q).unwrap();
        let s = PointSet::from_indices(space.num_points(), mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i));
        let pi = h_seed % space.num_points();
        let plane = space.hyperplane_points(pi);
        let removed = s.intersection(&plane);
        let added = plane.difference(&s);
        let (out, rec) = surgery::switch(&space, &s, pi, &removed, &added).unwrap();
        prop_assert_eq!(out.difference(&plane), s.difference(&plane));
        prop_assert_eq!(out.intersection(&plane), added.clone());
        prop_assert_eq!(rec.apply(&s), out);
        let (same, _) = surgery::switch(&space, &s, pi, &space.empty_set(), &space.empty_set()).unwrap();
        prop_assert_eq!(same, s);
    }

    #[test]
    fn lines_have_q_plus_one_points(
        (m, q) in prop::sample::select(vec![(2usize, 5usize), (3, 4), (4, 3)]),
        a in any::<usize>(),
        b in any::<usize>(),
    ) {
        let space = ProjSpace::of(m, q).unwrap();
        let (a, b) = (a % space.num_points(), b % space.num_points());
        prop_assume!(a != b);
        let line = space.line_points(a, b);
        prop_assert_eq!(line.len(), q + 1);
        prop_assert!(line.contains(&a) && line.contains(&b));
    }

    #[test]
    fn pivots_stay_quasi_polar(
        kind in prop::sample::select(vec![(0u8, 4usize, 2usize), (0, 4, 3), (1, 5, 2), (2, 5, 2), (3, 3, 4)]),
        which in 0usize..3,
        hyp in any::<usize>(),
    ) {
        let k = match kind.0 {
            0 => PolarKind::parabolic(kind.1, kind.2),
            1 => PolarKind::hyperbolic(kind.1, kind.2),
            2 => PolarKind::elliptic(kind.1, kind.2),
            _ => PolarKind::hermitian(kind.1, kind.2),
        }.unwrap();
        let space = ProjSpace::of(k.m, k.q).unwrap();
        let s = Form::canonical(k, &space).unwrap().point_set(&space);
        let singular = spectra::singular_hyperplanes(&space, &s, k).unwrap();
        let pi = singular[hyp % singular.len()];
        let dec = surgery::cone_decomposition(&space, &s, pi).unwrap();
        let variants = surgery::base_variants(&space, &dec.carrier, &dec.base, None, 3).unwrap();
        let (out, _) = surgery::pivot(&space, &s, k, pi, &variants[which]).unwrap();
        prop_assert!(spectra::classify(&space, &out, k).unwrap().quasi_polar);
        prop_assert_eq!(out.count(), s.count());
    }

    #[test]
    fn collineation_images_keep_the_spectrum(
        (m, q) in prop::sample::select(vec![(2usize, 4usize), (3, 3), (4, 2)]),
        idx in 0usize..6,
    ) {
        let space = ProjSpace::of(m, q).unwrap();
        let k = if m % 2 == 0 { PolarKind::parabolic(m, q) } else { PolarKind::elliptic(m, q) }.unwrap();
        let s = Form::canonical(k, &space).unwrap().point_set(&space);
        let images = surgery::collineation_images(&space, &s, None, 6);
        let img = &images[idx % images.len()];
        prop_assert_eq!(spectra::spectrum(&space, img).histogram, spectra::spectrum(&space, &s).histogram);
        prop_assert!(spectra::is_classical_like(&space, img, k).unwrap());
    }
}
