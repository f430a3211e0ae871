//! Hyperplane-intersection spectra and what they certify.
//!
//! A set is quasi-polar of a given kind when every hyperplane meets it in
//! one of the sizes a classical polar space of that kind exhibits.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{Family, PolarKind};
use crate::pg::{gauss1, PointSet, ProjSpace};

fn pow(q: u64, k: u32) -> u64 {
    q.pow(k)
}

/// `|Q(2n,q)| = (q^{2n} − 1)/(q − 1)`.
pub fn parabolic_size(q: u64, n: u32) -> u64 {
    (pow(q, 2 * n) - 1) / (q - 1)
}

/// `|Q^ε(2N+1,q)| = (q^{N+1} − ε)(q^N + ε)/(q − 1)`.
pub fn q_eps_size(q: u64, big_n: u32, eps: i64) -> u64 {
    let a = pow(q, big_n + 1) as i64 - eps;
    let b = pow(q, big_n) as i64 + eps;
    (a * b) as u64 / (q - 1)
}

/// `|H(k,q)|` for `k ≥ −1`, with `q` a square.
pub fn hermitian_size(q: u64, k: i32) -> u64 {
    let r = (q as f64).sqrt().round() as i64;
    let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
    let rk = if k >= 0 { r.pow(k as u32) } else { 0 };
    let a = r * rk + sign;
    let b = rk - sign;
    if k < 0 {
        return 0;
    }
    (a * b) as u64 / (q - 1)
}

/// Number of points of the classical polar space of `family` in PG(m,q).
pub fn classical_size(family: Family, m: usize, q: usize) -> u64 {
    let q = q as u64;
    match family {
        Family::Parabolic => parabolic_size(q, m as u32 / 2),
        Family::Hyperbolic => q_eps_size(q, (m as u32 - 1) / 2, 1),
        Family::Elliptic => q_eps_size(q, (m as u32 - 1) / 2, -1),
        Family::Hermitian => hermitian_size(q, m as i32),
    }
}

/// How a hyperplane meets a polar space, read off from the section size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HyperplaneType {
    Singular,
    EllipticType,
    HyperbolicType,
    NonSingular,
    Inadmissible,
}

impl HyperplaneType {
    pub fn label(self) -> &'static str {
        match self {
            HyperplaneType::Singular => "singular",
            HyperplaneType::EllipticType => "elliptic-type",
            HyperplaneType::HyperbolicType => "hyperbolic-type",
            HyperplaneType::NonSingular => "non-singular",
            HyperplaneType::Inadmissible => "inadmissible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumProfile {
    pub kind: PolarKind,
    /// Admissible section sizes, ascending, with the type each one signals.
    pub sizes: Vec<(u64, HyperplaneType)>,
    /// Hyperplanes per size for the classical space, aligned with `sizes`.
    pub expected_counts: Vec<u64>,
    pub cardinality: u64,
    pub cardinality_forced: bool,
}

impl SpectrumProfile {
    pub fn type_of(&self, size: u64) -> HyperplaneType {
        self.sizes
            .iter()
            .find(|(s, _)| *s == size)
            .map_or(HyperplaneType::Inadmissible, |&(_, t)| t)
    }

    pub fn size_of(&self, t: HyperplaneType) -> Option<u64> {
        self.sizes.iter().find(|(_, x)| *x == t).map(|&(s, _)| s)
    }

    pub fn singular_size(&self) -> u64 {
        self.size_of(HyperplaneType::Singular).expect("every profile has a singular size")
    }
}

/// Hyperplane counts: through nothing, through a point, through two points.
fn hyperplane_counts(q: u64, m: u32) -> [i128; 3] {
    [
        gauss1(q as usize, m + 1) as i128,
        gauss1(q as usize, m) as i128,
        if m >= 1 { gauss1(q as usize, m - 1) as i128 } else { 0 },
    ]
}

/// Solves `Σ αᵢ uᵢ^(k) = rhs_k` for the first `sizes.len()` moment equations.
fn solve_counts(sizes: &[u64], card: u64, q: u64, m: u32) -> Vec<u64> {
    let [h0, h1, h2] = hyperplane_counts(q, m);
    let s = card as i128;
    let rhs = [h0, s * h1, s * (s - 1) * h2];
    let k = sizes.len();
    let mut a: Vec<Vec<Ratio<i128>>> = (0..k)
        .map(|row| {
            let mut r: Vec<Ratio<i128>> = sizes
                .iter()
                .map(|&u| {
                    let u = u as i128;
                    Ratio::from_integer(match row {
                        0 => 1,
                        1 => u,
                        _ => u * (u - 1),
                    })
                })
                .collect();
            r.push(Ratio::from_integer(rhs[row]));
            r
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&r| a[r][c] != Ratio::from_integer(0)).expect("distinct sizes");
        a.swap(c, p);
        let pivot = a[c][c];
        for x in a[c].iter_mut() {
            *x /= pivot;
        }
        for r in 0..k {
            if r != c {
                let f = a[r][c];
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            let v = row[k];
            assert!(v.is_integer() && *v.numer() >= 0, "non-integral hyperplane count {v}");
            *v.numer() as u64
        })
        .collect()
}

/// The section sizes, counts and cardinality of the classical space.
pub fn profile(kind: PolarKind) -> SpectrumProfile {
    let q = kind.q as u64;
    let m = kind.m as u32;
    let mut sizes: Vec<(u64, HyperplaneType)> = match kind.family {
        Family::Parabolic => {
            let n = m / 2;
            vec![
                (q_eps_size(q, n - 1, -1), HyperplaneType::EllipticType),
                (q * parabolic_size(q, n - 1) + 1, HyperplaneType::Singular),
                (q_eps_size(q, n - 1, 1), HyperplaneType::HyperbolicType),
            ]
        }
        Family::Hyperbolic | Family::Elliptic => {
            let big_n = (m - 1) / 2;
            let eps = if kind.family == Family::Hyperbolic { 1 } else { -1 };
            let cone_base = if big_n == 0 { 0 } else { q_eps_size(q, big_n - 1, eps) };
            vec![
                (parabolic_size(q, big_n), HyperplaneType::NonSingular),
                (q * cone_base + 1, HyperplaneType::Singular),
            ]
        }
        Family::Hermitian => vec![
            (hermitian_size(q, m as i32 - 1), HyperplaneType::NonSingular),
            (q * hermitian_size(q, m as i32 - 2) + 1, HyperplaneType::Singular),
        ],
    };
    sizes.sort();
    let cardinality = classical_size(kind.family, kind.m, kind.q);
    let raw: Vec<u64> = sizes.iter().map(|&(s, _)| s).collect();
    let expected_counts = if kind.family == Family::Elliptic && m == 1 {
        // Q⁻(1,q) is empty: every point of the line misses it.
        raw.iter().map(|&s| if s == 0 { q + 1 } else { 0 }).collect()
    } else {
        solve_counts(&raw, cardinality, q, m)
    };
    SpectrumProfile {
        kind,
        sizes,
        expected_counts,
        cardinality,
        cardinality_forced: kind.family != Family::Parabolic,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub histogram: BTreeMap<u64, u64>,
    pub per_hyperplane: Vec<u32>,
}

/// Section sizes of `s` with every hyperplane.
pub fn spectrum(space: &ProjSpace, s: &PointSet) -> Spectrum {
    let per_hyperplane = space.section_sizes(s);
    let mut histogram = BTreeMap::new();
    for &x in &per_hyperplane {
        *histogram.entry(x as u64).or_insert(0) += 1;
    }
    Spectrum { histogram, per_hyperplane }
}

/// Whether a histogram satisfies the three standard double-counting identities.
pub fn counting_identities_hold(space: &ProjSpace, sp: &Spectrum, set_size: u64) -> bool {
    let [h0, h1, h2] = hyperplane_counts(space.q() as u64, space.dim() as u32);
    let s = set_size as i128;
    let (mut m0, mut m1, mut m2) = (0i128, 0i128, 0i128);
    for (&u, &a) in &sp.histogram {
        let (u, a) = (u as i128, a as i128);
        m0 += a;
        m1 += a * u;
        m2 += a * u * (u - 1);
    }
    m0 == h0 && m1 == s * h1 && m2 == s * (s - 1) * h2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exceptional {
    /// The q+1 points of a line, quasi-elliptic in PG(3,q).
    Line,
    /// A Baer subplane, quasi-Hermitian in PG(2,q).
    BaerSubplane,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub quasi_polar: bool,
    pub hyperplane_types: Vec<HyperplaneType>,
    pub exceptional: Option<Exceptional>,
}

impl Classification {
    pub fn type_counts(&self) -> BTreeMap<HyperplaneType, u64> {
        let mut out = BTreeMap::new();
        for &t in &self.hyperplane_types {
            *out.entry(t).or_insert(0) += 1;
        }
        out
    }
}

/// Checks every hyperplane section size against the profile of `kind`.
///
/// On a projective line the section sizes say nothing, so there the
/// classical cardinality is required as well.
pub fn classify(space: &ProjSpace, s: &PointSet, kind: PolarKind) -> Result<Classification> {
    kind.check_space(space)?;
    let prof = profile(kind);
    let sizes = space.section_sizes(s);
    Ok(classify_sizes(&prof, &sizes, s.count() as u64))
}

pub(crate) fn classify_sizes(prof: &SpectrumProfile, sizes: &[u32], count: u64) -> Classification {
    let hyperplane_types: Vec<HyperplaneType> = sizes.iter().map(|&x| prof.type_of(x as u64)).collect();
    let mut quasi_polar = hyperplane_types.iter().all(|&t| t != HyperplaneType::Inadmissible);
    let kind = prof.kind;
    if kind.m == 1 && count != prof.cardinality {
        quasi_polar = false;
    }
    let q = kind.q as u64;
    let exceptional = match kind.family {
        _ if !quasi_polar || count == prof.cardinality => None,
        Family::Elliptic if kind.m == 3 && count == q + 1 => Some(Exceptional::Line),
        Family::Hermitian if kind.m == 2 => {
            let r = (q as f64).sqrt().round() as u64;
            (count == q + r + 1).then_some(Exceptional::BaerSubplane)
        }
        _ => None,
    };
    Classification { quasi_polar, hyperplane_types, exceptional }
}

/// Whether `s` is quasi-polar of `kind` and has the classical cardinality.
pub fn is_classical_like(space: &ProjSpace, s: &PointSet, kind: PolarKind) -> Result<bool> {
    Ok(classify(space, s, kind)?.quasi_polar && s.count() as u64 == profile(kind).cardinality)
}

/// The roots in |S| of the quadratic obtained from the three counting
/// equations with two section sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CardinalityRoots {
    pub root_classical: u64,
    /// The second root as an exact fraction `(numerator, denominator)`.
    pub root_other: (i128, i128),
    /// Whether the second root is a positive integer.
    pub integral: bool,
}

impl CardinalityRoots {
    pub fn other_integer(&self) -> Option<u64> {
        self.integral.then_some((self.root_other.0 / self.root_other.1) as u64)
    }
}

pub fn cardinality_roots(kind: PolarKind) -> Result<CardinalityRoots> {
    if kind.family == Family::Parabolic {
        return Err(Error::IncompatibleKind("cardinality roots need two section sizes".into()));
    }
    let prof = profile(kind);
    let [h0, h1, h2] = hyperplane_counts(kind.q as u64, kind.m as u32);
    let u = prof.sizes[0].0 as i128;
    let v = prof.sizes[1].0 as i128;
    // h2·S² − (h2 + h1(u+v−1))·S + h0·u·v = 0
    let sum = Ratio::new(h2 + h1 * (u + v - 1), h2);
    let classical = prof.cardinality as i128;
    let other = sum - Ratio::from_integer(classical);
    debug_assert_eq!(other * Ratio::from_integer(classical), Ratio::new(h0 * u * v, h2));
    Ok(CardinalityRoots {
        root_classical: prof.cardinality,
        root_other: (*other.numer(), *other.denom()),
        integral: other.is_integer() && *other.numer() > 0,
    })
}

/// Hyperplanes meeting `s` in the singular size of `kind`.
pub fn singular_hyperplanes(space: &ProjSpace, s: &PointSet, kind: PolarKind) -> Result<Vec<usize>> {
    let c = classify(space, s, kind)?;
    if !c.quasi_polar {
        return Err(Error::NotQuasiPolar);
    }
    Ok(c.hyperplane_types
        .iter()
        .enumerate()
        .filter(|(_, &t)| t == HyperplaneType::Singular)
        .map(|(h, _)| h)
        .collect())
}

/// The nucleus predicates for a set in PG(2n,q).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub a: bool,
    pub b: bool,
    pub b_prime: bool,
    pub c: bool,
    pub c_prime: bool,
    pub d: bool,
    pub d_prime: bool,
    pub nucleus_candidate: Option<usize>,
    pub singular_count: u64,
}

impl ConditionReport {
    /// Every implication the theory guarantees, as `(name, holds)` pairs.
    pub fn implications(&self, q: usize, n: usize, size: u64) -> Vec<(&'static str, bool)> {
        let classical = parabolic_size(q as u64, n as u32);
        let ab = self.a && self.b_prime;
        vec![
            ("b&c=>b'", !(self.b && self.c) || self.b_prime),
            ("a&b'&d=>b&c", !(ab && self.d) || (self.b && self.c)),
            ("a&b'&c=>b&d'", !(ab && self.c) || (self.b && self.d_prime)),
            ("a&b'&c'<=>a&b&c", (ab && self.c_prime) == (self.a && self.b && self.c)),
            ("b'&d'=>classical size", !(self.b_prime && self.d_prime) || size == classical),
            ("b'&d'=>q even", !(self.b_prime && self.d_prime) || q % 2 == 0),
            ("a&b'=>singular count", !ab || self.singular_count == classical),
            ("d'=>d", !self.d_prime || self.d),
        ]
    }
}

fn common_points(space: &ProjSpace, rows: &[PointSet], hyperplanes: impl Iterator<Item = usize>) -> PointSet {
    let mut acc = space.all_points();
    for h in hyperplanes {
        acc.intersect_with(&rows[h]);
    }
    acc
}

/// Whether every line through `n` meets `s` in exactly one point.
pub fn is_line_nucleus(space: &ProjSpace, s: &PointSet, n: usize) -> bool {
    if s.contains(n) || s.count() != gauss1(space.q(), space.dim() as u32) {
        return false;
    }
    let mut seen = std::collections::HashSet::with_capacity(s.count());
    s.iter().all(|x| seen.insert(space.direction_from(n, x)))
}

fn line_nuclei(space: &ProjSpace, s: &PointSet) -> Vec<usize> {
    if s.count() != gauss1(space.q(), space.dim() as u32) {
        return Vec::new();
    }
    (0..space.num_points())
        .into_par_iter()
        .filter(|&n| is_line_nucleus(space, s, n))
        .collect()
}

/// Evaluates conditions (a), (b), (b′), (c), (c′), (d), (d′).
pub fn nucleus_conditions(space: &ProjSpace, s: &PointSet) -> Result<ConditionReport> {
    if space.dim() % 2 != 0 {
        return Err(Error::IncompatibleKind("nucleus conditions need even dimension".into()));
    }
    let prof = profile(PolarKind::parabolic(space.dim(), space.q())?);
    let rows = space.incidence()?;
    let sizes = space.section_sizes(s);
    let outside = s.complement();
    let u_sing = prof.singular_size();
    let a = s.count() as u64 == prof.cardinality;
    let b_prime = sizes.iter().all(|&x| prof.type_of(x as u64) != HyperplaneType::Inadmissible);
    let singular: Vec<usize> = (0..sizes.len()).filter(|&h| sizes[h] as u64 == u_sing).collect();
    let singular_count = singular.len() as u64;

    let non_singular_sizes = |x: u32| {
        matches!(prof.type_of(x as u64), HyperplaneType::EllipticType | HyperplaneType::HyperbolicType)
    };
    let bad = (0..sizes.len()).filter(|&h| !non_singular_sizes(sizes[h]));
    let b_points = common_points(space, rows, bad).intersection(&outside);
    let b = !b_points.is_empty();

    let d_points = if singular.is_empty() {
        space.empty_set()
    } else {
        common_points(space, rows, singular.iter().copied()).intersection(&outside)
    };
    let d = !d_points.is_empty();
    let d_prime = d && singular_count as usize == gauss1(space.q(), space.dim() as u32);

    let c_points = line_nuclei(space, s);
    let c = !c_points.is_empty();

    let pencils = space.pencils()?;
    let is_singular = |h: u32| sizes[h as usize] as u64 == u_sing;
    let c_prime = pencils.par_iter().all(|hs| hs.iter().any(|&h| is_singular(h)));

    let nucleus_candidate = c_points.first().copied().or_else(|| if d_prime { d_points.first() } else { None });
    Ok(ConditionReport { a, b, b_prime, c, c_prime, d, d_prime, nucleus_candidate, singular_count })
}

/// The unique point off `s` all of whose lines meet `s` exactly once.
pub fn find_line_nucleus(space: &ProjSpace, s: &PointSet) -> Option<usize> {
    match line_nuclei(space, s).as_slice() {
        [n] => Some(*n),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Form;

    fn kind(f: Family, m: usize, q: usize) -> PolarKind {
        PolarKind::new(f, m, q).unwrap()
    }

    fn canonical(k: PolarKind) -> (ProjSpace, PointSet) {
        let s = ProjSpace::of(k.m, k.q).unwrap();
        let pts = Form::canonical(k, &s).unwrap().point_set(&s);
        (s, pts)
    }

    #[test]
    fn cardinality_formulas() {
        assert_eq!(parabolic_size(2, 2), 15);
        assert_eq!(q_eps_size(2, 1, -1), 5);
        assert_eq!(q_eps_size(2, 1, 1), 9);
        assert_eq!(q_eps_size(2, 2, 1), 35);
        assert_eq!(q_eps_size(2, 2, -1), 27);
        assert_eq!(q_eps_size(3, 0, 1), 2);
        assert_eq!(q_eps_size(3, 0, -1), 0);
        assert_eq!(hermitian_size(4, 2), 9);
        assert_eq!(hermitian_size(4, 3), 45);
        assert_eq!(hermitian_size(4, 1), 3);
        assert_eq!(hermitian_size(9, 2), 28);
        assert_eq!(hermitian_size(4, 0), 0);
        assert_eq!(hermitian_size(4, -1), 0);
    }

    #[test]
    fn frozen_profiles() {
        let p = profile(kind(Family::Parabolic, 4, 2));
        assert_eq!(p.sizes.iter().map(|x| x.0).collect::<Vec<_>>(), vec![5, 7, 9]);
        assert_eq!(p.expected_counts, vec![6, 15, 10]);
        assert_eq!(p.cardinality, 15);
        assert!(!p.cardinality_forced);
        let e = profile(kind(Family::Elliptic, 3, 2));
        assert_eq!(e.sizes, vec![(1, HyperplaneType::Singular), (3, HyperplaneType::NonSingular)]);
        assert_eq!(e.expected_counts, vec![5, 10]);
        assert_eq!(e.cardinality, 5);
        let h = profile(kind(Family::Hermitian, 2, 4));
        assert_eq!(h.sizes.iter().map(|x| x.0).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(h.expected_counts, vec![9, 12]);
        assert_eq!(h.cardinality, 9);
    }

    #[test]
    fn profile_invariants() {
        for f in Family::ALL {
            for m in 1..=7 {
                for q in [2, 3, 4, 5, 7, 8, 9] {
                    let Ok(k) = PolarKind::new(f, m, q) else { continue };
                    let p = profile(k);
                    let total: u64 = p.expected_counts.iter().sum();
                    assert_eq!(total as usize, gauss1(q, m as u32 + 1), "{k}");
                    if f != Family::Parabolic && m >= 3 {
                        let lower = profile(PolarKind::new(f, m - 2, q).unwrap());
                        let gap = p.sizes[1].0 - p.sizes[0].0;
                        let lower_gap = lower.sizes[1].0 - lower.sizes[0].0;
                        assert_eq!(gap, q as u64 * lower_gap, "{k}");
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_spectra_match_profiles() {
        for k in [
            kind(Family::Parabolic, 2, 4),
            kind(Family::Parabolic, 4, 3),
            kind(Family::Hyperbolic, 3, 3),
            kind(Family::Elliptic, 5, 2),
            kind(Family::Hermitian, 3, 4),
            kind(Family::Hyperbolic, 1, 5),
            kind(Family::Elliptic, 1, 5),
            kind(Family::Hermitian, 1, 9),
        ] {
            let (s, pts) = canonical(k);
            let sp = spectrum(&s, &pts);
            let p = profile(k);
            for ((size, _), count) in p.sizes.iter().zip(&p.expected_counts) {
                assert_eq!(sp.histogram.get(size).copied().unwrap_or(0), *count, "{k} size {size}");
            }
            assert!(counting_identities_hold(&s, &sp, pts.count() as u64));
            assert!(classify(&s, &pts, k).unwrap().quasi_polar);
        }
    }

    #[test]
    fn spectrum_examples() {
        let (s, q32) = canonical(kind(Family::Hyperbolic, 3, 2));
        assert_eq!(spectrum(&s, &q32).histogram, BTreeMap::from([(3, 6), (5, 9)]));
        let p2 = ProjSpace::of(2, 2).unwrap();
        assert_eq!(spectrum(&p2, &p2.empty_set()).histogram, BTreeMap::from([(0, 7)]));
        assert_eq!(spectrum(&p2, &p2.all_points()).histogram, BTreeMap::from([(3, 7)]));
    }

    #[test]
    fn exceptional_tags() {
        let s = ProjSpace::of(3, 3).unwrap();
        let line = s.line_through(0, 7).unwrap();
        let c = classify(&s, &line, kind(Family::Elliptic, 3, 3)).unwrap();
        assert!(c.quasi_polar);
        assert_eq!(c.exceptional, Some(Exceptional::Line));

        let p = ProjSpace::of(2, 4).unwrap();
        let baer = PointSet::from_indices(
            p.num_points(),
            (0..p.num_points()).filter(|&i| p.point(i).iter().all(|&x| x < 2)),
        );
        assert_eq!(baer.count(), 7);
        let c = classify(&p, &baer, kind(Family::Hermitian, 2, 4)).unwrap();
        assert!(c.quasi_polar);
        assert_eq!(c.exceptional, Some(Exceptional::BaerSubplane));
    }

    #[test]
    fn projective_lines_need_the_classical_size() {
        let s = ProjSpace::of(1, 4).unwrap();
        let k = kind(Family::Hermitian, 1, 4);
        for mask in 0u64..32 {
            let set = PointSet::from_mask(5, mask);
            assert_eq!(classify(&s, &set, k).unwrap().quasi_polar, set.count() == 3);
        }
    }

    #[test]
    fn roots_examples() {
        for q in [2, 3, 4, 5] {
            let r = cardinality_roots(kind(Family::Elliptic, 3, q)).unwrap();
            assert_eq!(r.other_integer(), Some(q as u64 + 1));
        }
        for q in [4, 9] {
            let r = cardinality_roots(kind(Family::Hermitian, 2, q)).unwrap();
            let sq = (q as f64).sqrt() as u64;
            assert_eq!(r.other_integer(), Some(q as u64 + sq + 1));
        }
        for n in 1..=3 {
            assert!(!cardinality_roots(kind(Family::Hyperbolic, 2 * n + 1, 3)).unwrap().integral);
        }
        assert!(cardinality_roots(kind(Family::Parabolic, 4, 3)).is_err());
    }

    #[test]
    fn singular_hyperplane_examples() {
        let k = kind(Family::Parabolic, 4, 2);
        let (s, pts) = canonical(k);
        assert_eq!(singular_hyperplanes(&s, &pts, k).unwrap().len(), 15);
        let k = kind(Family::Hyperbolic, 3, 2);
        let (s, pts) = canonical(k);
        assert_eq!(singular_hyperplanes(&s, &pts, k).unwrap().len(), 9);
        let k = kind(Family::Parabolic, 4, 3);
        let (s, pts) = canonical(k);
        assert_eq!(singular_hyperplanes(&s, &pts, k).unwrap().len(), 40);
        assert_eq!(singular_hyperplanes(&s, &s.empty_set(), k), Err(Error::NotQuasiPolar));
    }

    #[test]
    fn conditions_on_classical_quadrics() {
        let (s, pts) = canonical(kind(Family::Parabolic, 4, 2));
        let r = nucleus_conditions(&s, &pts).unwrap();
        assert!(r.a && r.b && r.b_prime && r.c && r.c_prime && r.d && r.d_prime);
        assert_eq!(s.point(r.nucleus_candidate.unwrap()), &[1, 0, 0, 0, 0]);
        assert_eq!(r.singular_count, 15);

        let (s, pts) = canonical(kind(Family::Parabolic, 4, 3));
        let r = nucleus_conditions(&s, &pts).unwrap();
        assert!(r.a && r.b_prime);
        assert!(!r.c_prime);
        assert!(!r.b && !r.c && !r.d && !r.d_prime);
        assert_eq!(find_line_nucleus(&s, &pts), None);

        let empty = s.empty_set();
        let r = nucleus_conditions(&s, &empty).unwrap();
        assert!(!(r.a || r.b || r.b_prime || r.c || r.c_prime || r.d || r.d_prime));
    }

    #[test]
    fn line_nucleus_examples() {
        let (s, conic) = canonical(kind(Family::Parabolic, 2, 4));
        let n = find_line_nucleus(&s, &conic).unwrap();
        assert_eq!(s.point(n), &[1, 0, 0]);
        let (s, q44) = canonical(kind(Family::Parabolic, 4, 4));
        assert_eq!(s.point(find_line_nucleus(&s, &q44).unwrap()), &[1, 0, 0, 0, 0]);
    }
}
