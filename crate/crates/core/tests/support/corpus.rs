//! A mixed corpus of point sets in even-dimensional spaces: canonical
//! parabolic quadrics, surgery outputs, collineation images, other ovals,
//! and seeded random perturbations.

use qps_core::census;
use qps_core::forms::{Form, PointClass, PolarKind};
use qps_core::pg::{PointSet, ProjSpace};
use qps_core::spectra::{self, HyperplaneType};
use qps_core::surgery;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Group {
    pub space: ProjSpace,
    pub sets: Vec<(String, PointSet)>,
}

fn perturb(space: &ProjSpace, s: &PointSet, k: usize, rng: &mut ChaCha8Rng) -> PointSet {
    let mut inside = s.to_indices();
    let mut outside = s.complement().to_indices();
    inside.shuffle(rng);
    outside.shuffle(rng);
    let mut out = s.clone();
    for &p in inside.iter().take(k) {
        out.remove(p);
    }
    for &p in outside.iter().take(k) {
        out.insert(p);
    }
    debug_assert_eq!(out.universe(), space.num_points());
    out
}

fn random_set(space: &ProjSpace, size: usize, rng: &mut ChaCha8Rng) -> PointSet {
    let mut all: Vec<usize> = (0..space.num_points()).collect();
    all.shuffle(rng);
    PointSet::from_indices(space.num_points(), all.into_iter().take(size))
}

fn group(m: usize, q: usize, seed: u64) -> Group {
    let space = ProjSpace::of(m, q).unwrap();
    let kind = PolarKind::parabolic(m, q).unwrap();
    let form = Form::canonical(kind, &space).unwrap();
    let s = form.point_set(&space);
    let mut sets = vec![("canonical".to_string(), s.clone())];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for (i, img) in surgery::collineation_images(&space, &s, None, 4).into_iter().enumerate() {
        sets.push((format!("image-{i}"), img));
    }
    let singular = spectra::singular_hyperplanes(&space, &s, kind).unwrap();
    if m >= 4 {
        let pi = singular[0];
        let dec = surgery::cone_decomposition(&space, &s, pi).unwrap();
        for (i, b) in surgery::base_variants(&space, &dec.carrier, &dec.base, None, 3).unwrap().iter().enumerate() {
            sets.push((format!("pivot-{i}"), surgery::pivot(&space, &s, kind, pi, b).unwrap().0));
        }
        if q % 2 == 0 {
            sets.push(("cone-swap".into(), surgery::cone_swap(&space, &s, pi).unwrap().0));
            let nu = form.nucleus_point(&space).unwrap();
            let through = *singular.iter().find(|&&h| space.incident(h, nu)).unwrap();
            sets.push(("shifted-nucleus".into(), surgery::shifted_nucleus_pivot(&space, &s, through).unwrap().0));
        }
    }
    if m == 4 && q == 2 {
        let res = census::nucleus_pivot_census(&space).unwrap();
        for (label, ws) in &res.witnesses {
            for (i, w) in ws.iter().take(5).enumerate() {
                sets.push((format!("q2-switch-{label}-{i}"), w.clone()));
            }
        }
    }
    if m == 4 && q == 3 {
        let prof = spectra::profile(kind);
        let sizes = space.section_sizes(&s);
        for t in [HyperplaneType::EllipticType, HyperplaneType::HyperbolicType] {
            let xi = (0..space.num_points()).find(|&h| prof.type_of(sizes[h] as u64) == t).unwrap();
            let sub = surgery::tangent_subspace(&space, &form, xi).unwrap();
            for class in [PointClass::Internal, PointClass::External] {
                let (out, _) = surgery::class_switch_q3(&space, &form, xi, &sub, class).unwrap();
                sets.push((format!("q3-switch-{}-{class:?}", t.label()), out));
            }
        }
    }
    if m == 2 && q <= 5 {
        for (i, o) in census::enumerate_ovals(&space).unwrap().into_iter().take(12).enumerate() {
            sets.push((format!("oval-{i}"), o));
        }
    }
    if m == 2 && q % 2 == 0 {
        let sizes = space.section_sizes(&s);
        let tangent = (0..space.num_points()).find(|&h| sizes[h] == 1).unwrap();
        sets.push(("oval-swap".into(), surgery::oval_nucleus_swap(&space, &s, tangent).unwrap().0));
    }
    let base: Vec<PointSet> = sets.iter().map(|(_, x)| x.clone()).take(4).collect();
    for (i, b) in base.iter().enumerate() {
        for k in 1..=3 {
            sets.push((format!("perturbed-{i}-{k}"), perturb(&space, b, k, &mut rng)));
        }
    }
    for i in 0..3 {
        sets.push((format!("random-{i}"), random_set(&space, s.count(), &mut rng)));
    }
    sets.push(("empty".into(), space.empty_set()));
    Group { space, sets }
}

/// The full corpus, built deterministically.
pub fn build() -> Vec<Group> {
    [(2, 2), (2, 3), (2, 4), (2, 5), (2, 7), (2, 8), (4, 2), (4, 3), (4, 4), (6, 2)]
        .into_iter()
        .enumerate()
        .map(|(i, (m, q))| group(m, q, 0x5eed + i as u64))
        .collect()
}

pub struct Tally {
    pub sets: usize,
    pub violations: Vec<String>,
    /// Sets with (b′) but not (a).
    pub b_prime_without_a: usize,
}

/// Evaluates every implication between the nucleus conditions over the corpus.
pub fn check(groups: &[Group]) -> Tally {
    let mut tally = Tally { sets: 0, violations: Vec::new(), b_prime_without_a: 0 };
    for g in groups {
        let n = g.space.dim() / 2;
        for (label, s) in &g.sets {
            tally.sets += 1;
            let r = spectra::nucleus_conditions(&g.space, s).unwrap();
            if r.b_prime && !r.a {
                tally.b_prime_without_a += 1;
            }
            for (name, ok) in r.implications(g.space.q(), n, s.count() as u64) {
                if !ok {
                    tally.violations.push(format!("PG({},{}) {label}: {name}", g.space.dim(), g.space.q()));
                }
            }
        }
    }
    tally
}
