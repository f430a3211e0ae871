//! Switching and pivoting constructions.
//!
//! Each operation returns the new set together with a [`SurgeryRecord`].
//! None of them checks that the output is quasi-polar; run
//! [`crate::spectra::classify`] on the result for that.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{self, Family, Form, PointClass, PolarKind};
use crate::gf::Elem;
use crate::linalg;
use crate::pg::{Flat, PointSet, ProjSpace, SubGeometry};
use crate::spectra::{self, profile, HyperplaneType};

/// A flat recorded by name with its RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedFlat {
    pub name: String,
    pub basis: Vec<Vec<Elem>>,
}

/// What a surgery removed and added, and the geometry it used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryRecord {
    pub construction: String,
    /// Dual coordinates of the switching hyperplane.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperplane: Option<Vec<Elem>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<Vec<Elem>>,
    pub flats: Vec<NamedFlat>,
    pub removed: PointSet,
    pub added: PointSet,
}

impl SurgeryRecord {
    fn new(construction: &str, removed: PointSet, added: PointSet) -> Self {
        SurgeryRecord {
            construction: construction.to_string(),
            hyperplane: None,
            vertex: None,
            flats: Vec::new(),
            removed,
            added,
        }
    }

    fn hyperplane(mut self, space: &ProjSpace, h: usize) -> Self {
        self.hyperplane = Some(space.point(h).to_vec());
        self
    }

    fn vertex(mut self, space: &ProjSpace, p: usize) -> Self {
        self.vertex = Some(space.point(p).to_vec());
        self
    }

    fn flat(mut self, name: &str, f: &Flat) -> Self {
        self.flats.push(NamedFlat { name: name.to_string(), basis: f.basis().to_vec() });
        self
    }

    /// `(s \ removed) ∪ added`.
    pub fn apply(&self, s: &PointSet) -> PointSet {
        s.difference(&self.removed).union(&self.added)
    }
}

/// Replaces `removed` by `added` inside the hyperplane `pi`.
pub fn switch(
    space: &ProjSpace,
    s: &PointSet,
    pi: usize,
    removed: &PointSet,
    added: &PointSet,
) -> Result<(PointSet, SurgeryRecord)> {
    if !removed.is_subset(s) {
        return Err(Error::RemovedNotInSet);
    }
    let plane = space.hyperplane_points(pi);
    if !removed.is_subset(&plane) || !added.is_subset(&plane) {
        return Err(Error::SetsNotInHyperplane);
    }
    if !removed.is_disjoint(added) {
        return Err(Error::RemovedAddedOverlap);
    }
    let rec = SurgeryRecord::new("switch", removed.clone(), added.clone()).hyperplane(space, pi);
    Ok((rec.apply(s), rec))
}

/// A singular section `P·C` split into its vertex and a base in a carrier
/// hyperplane of the section's hyperplane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDecomposition {
    pub hyperplane: usize,
    pub vertex: usize,
    pub carrier: Flat,
    pub base: PointSet,
}

/// The least hyperplane of `pi`, in the coordinates of `pi`, missing the
/// vertex and `avoid` and containing `through`.
fn carrier_in(space: &ProjSpace, pi: usize, vertex: usize, avoid: &[usize], through: &[usize]) -> Result<Flat> {
    let sub = SubGeometry::new(space, &Flat::hyperplane(space, pi))?;
    let v = sub.from_ambient(vertex).ok_or(Error::NoConeDecomposition)?;
    let avoid: Vec<usize> = avoid.iter().filter_map(|&a| sub.from_ambient(a)).collect();
    let through: Vec<usize> = through
        .iter()
        .map(|&t| sub.from_ambient(t).ok_or(Error::NoConeDecomposition))
        .collect::<Result<_>>()?;
    let local = &sub.space;
    (0..local.num_points())
        .find(|&h| {
            !local.incident(h, v)
                && avoid.iter().all(|&a| !local.incident(h, a))
                && through.iter().all(|&t| local.incident(h, t))
        })
        .map(|h| sub.lift_flat(space, &Flat::hyperplane(local, h)))
        .ok_or(Error::NoConeDecomposition)
}

fn decompose(space: &ProjSpace, s: &PointSet, pi: usize, avoid: &[usize], through: &[usize]) -> Result<ConeDecomposition> {
    if space.dim() < 2 {
        return Err(Error::NoConeDecomposition);
    }
    let section = s.intersection(&space.hyperplane_points(pi));
    let vertices: Vec<usize> = forms::cone_vertices(space, &section)
        .into_iter()
        .filter(|&v| section.contains(v))
        .collect();
    let [vertex] = vertices[..] else {
        return Err(Error::NoConeDecomposition);
    };
    let carrier = carrier_in(space, pi, vertex, avoid, through)?;
    let base = section.intersection(&carrier.points(space));
    if forms::point_cone(space, vertex, &base) != section {
        return Err(Error::NoConeDecomposition);
    }
    Ok(ConeDecomposition { hyperplane: pi, vertex, carrier, base })
}

/// Splits `s ∩ pi` as a cone over a base in the least carrier avoiding the vertex.
pub fn cone_decomposition(space: &ProjSpace, s: &PointSet, pi: usize) -> Result<ConeDecomposition> {
    decompose(space, s, pi, &[], &[])
}

fn singular_decomposition(
    space: &ProjSpace,
    s: &PointSet,
    kind: PolarKind,
    pi: usize,
    avoid: &[usize],
    through: &[usize],
) -> Result<ConeDecomposition> {
    kind.check_space(space)?;
    let size = s.intersection_count(&space.hyperplane_points(pi)) as u64;
    if profile(kind).type_of(size) != HyperplaneType::Singular {
        return Err(Error::NotSingular);
    }
    decompose(space, s, pi, avoid, through)
}

/// Whether `base` is a quasi-polar space of the cone-base kind of `kind`,
/// with classical size, inside `carrier`.
pub fn is_valid_base(space: &ProjSpace, carrier: &Flat, base: &PointSet, kind: PolarKind) -> Result<bool> {
    if !base.is_subset(&carrier.points(space)) {
        return Ok(false);
    }
    if carrier.dim() == 0 {
        return Ok(base.is_empty());
    }
    let sub = SubGeometry::new(space, carrier)?;
    spectra::is_classical_like(&sub.space, &sub.restrict(base), kind.base_kind()?)
}

fn pivot_with(
    space: &ProjSpace,
    s: &PointSet,
    kind: PolarKind,
    dec: &ConeDecomposition,
    new_base: &PointSet,
    name: &str,
) -> Result<(PointSet, SurgeryRecord)> {
    if !is_valid_base(space, &dec.carrier, new_base, kind)? {
        return Err(Error::BaseWrongType);
    }
    let removed = forms::point_cone(space, dec.vertex, &dec.base);
    let added = forms::point_cone(space, dec.vertex, new_base);
    let rec = SurgeryRecord::new(name, removed, added)
        .hyperplane(space, dec.hyperplane)
        .vertex(space, dec.vertex)
        .flat("carrier", &dec.carrier);
    Ok((rec.apply(s), rec))
}

/// Replaces the base of the singular section `s ∩ pi` by `new_base`.
///
/// `new_base` must lie in the carrier reported by [`cone_decomposition`].
pub fn pivot(
    space: &ProjSpace,
    s: &PointSet,
    kind: PolarKind,
    pi: usize,
    new_base: &PointSet,
) -> Result<(PointSet, SurgeryRecord)> {
    let dec = singular_decomposition(space, s, kind, pi, &[], &[])?;
    pivot_with(space, s, kind, &dec, new_base, "pivot")
}

fn unit(w: usize, j: usize) -> Vec<Elem> {
    (0..w).map(|i| (i == j) as Elem).collect()
}

/// Elementary matrices acting on rows `k..w`: transvections, swaps and scalings.
fn elementary_generators(q: usize, w: usize, k: usize) -> Vec<Vec<Vec<Elem>>> {
    let mut out = Vec::new();
    for i in k..w {
        for j in (0..w).filter(|&j| j != i) {
            for a in 1..q {
                let mut e = linalg::identity(w);
                e[i][j] = a as Elem;
                out.push(e);
            }
        }
    }
    for i in k..w {
        for j in i + 1..w {
            let mut e = linalg::identity(w);
            e.swap(i, j);
            out.push(e);
        }
    }
    for i in k..w {
        for a in 2..q {
            let mut e = linalg::identity(w);
            e[i][i] = a as Elem;
            out.push(e);
        }
    }
    out
}

/// Distinct images of `set`, other than `set`, under collineations of
/// `space` fixing `fixed` pointwise, in a fixed deterministic order.
///
/// Single elementary matrices come first, then products of two.
pub fn collineation_images(space: &ProjSpace, set: &PointSet, fixed: Option<&Flat>, limit: usize) -> Vec<PointSet> {
    let f = space.field();
    let w = space.dim() + 1;
    let mut basis: Vec<Vec<Elem>> = fixed.map_or_else(Vec::new, |fl| fl.basis().to_vec());
    let k = basis.len();
    for j in 0..w {
        let mut trial = basis.clone();
        trial.push(unit(w, j));
        if linalg::rank(f, &trial) == trial.len() {
            basis = trial;
        }
    }
    let inverse = linalg::invert(f, &basis).expect("a basis is invertible");
    let image = |e: &[Vec<Elem>]| {
        let m = linalg::mat_mul(f, &linalg::mat_mul(f, &inverse, e), &basis);
        PointSet::from_indices(
            space.num_points(),
            set.iter().map(|p| space.normalize_point(&linalg::vec_mat(f, space.point(p), &m)).expect("invertible")),
        )
    };
    let gens = elementary_generators(space.q(), w, k);
    let mut seen = BTreeSet::from([set.clone()]);
    let mut out = Vec::new();
    let mut push = |img: PointSet, out: &mut Vec<PointSet>| {
        if seen.insert(img.clone()) {
            out.push(img);
        }
        out.len() >= limit
    };
    for e in &gens {
        if push(image(e), &mut out) {
            return out;
        }
    }
    for a in &gens {
        for b in &gens {
            if push(image(&linalg::mat_mul(f, a, b)), &mut out) {
                return out;
            }
        }
    }
    out
}

/// Alternative bases in `carrier`: images of `base` under collineations of
/// the carrier fixing `fixed` pointwise.
pub fn base_variants(
    space: &ProjSpace,
    carrier: &Flat,
    base: &PointSet,
    fixed: Option<&Flat>,
    limit: usize,
) -> Result<Vec<PointSet>> {
    if carrier.dim() == 0 || limit == 0 {
        return Ok(Vec::new());
    }
    let sub = SubGeometry::new(space, carrier)?;
    let fixed = fixed.map(|fl| sub.restrict_flat(space, fl)).transpose()?;
    Ok(collineation_images(&sub.space, &sub.restrict(base), fixed.as_ref(), limit)
        .iter()
        .map(|x| sub.lift(x))
        .collect())
}

/// A maximal subspace all of whose points lie in `s`, built greedily from
/// the lowest-index points, or `None` if it falls short of `dim`.
pub fn greedy_subspace(space: &ProjSpace, s: &PointSet, dim: usize) -> Option<Flat> {
    let mut cur: Option<Flat> = None;
    for x in s.iter() {
        let cand = match &cur {
            None => Flat::span(space, &[x]).expect("a point spans"),
            Some(c) if c.contains_point(space, x) => continue,
            Some(c) => c.join_point(space, x),
        };
        if cand.points(space).is_subset(s) {
            let reached = cand.dim() == dim;
            cur = Some(cand);
            if reached {
                break;
            }
        }
    }
    cur.filter(|c| c.dim() == dim)
}

fn parabolic_even(space: &ProjSpace) -> Result<PolarKind> {
    if space.q() % 2 != 0 {
        return Err(Error::NotEvenQ);
    }
    if space.dim() < 4 || space.dim() % 2 != 0 {
        return Err(Error::IncompatibleKind(format!("{space:?} is not PG(2n,q) with n ≥ 2")));
    }
    PolarKind::parabolic(space.dim(), space.q())
}

fn nucleus_of(space: &ProjSpace, s: &PointSet) -> Result<usize> {
    spectra::find_line_nucleus(space, s).ok_or_else(|| Error::NotApplicable("the set has no nucleus".into()))
}

/// Swaps the cone over a generator of the base for a cone with vertex the
/// nucleus over a disjoint flat of the tangent space.
///
/// With `P` the vertex and `N` the nucleus, the section `P·C` becomes
/// `(P·C \ P·ν_P) ∪ N·ν_N`. The carrier of `C` avoids both `P` and `N`.
pub fn cone_swap(space: &ProjSpace, s: &PointSet, pi: usize) -> Result<(PointSet, SurgeryRecord)> {
    let kind = parabolic_even(space)?;
    let n = space.dim() / 2;
    let nucleus = nucleus_of(space, s)?;
    let dec = singular_decomposition(space, s, kind, pi, &[nucleus], &[])?;
    let p = dec.vertex;
    let nu_p = greedy_subspace(space, &dec.base, n - 2).ok_or(Error::NoDisjointFlat)?;
    let nu_p_points = nu_p.points(space);

    let carrier_points = dec.carrier.points(space);
    let tangent = carrier_points
        .difference(&dec.base)
        .iter()
        .map(|x| nu_p.join_point(space, x))
        .find(|t| t.points(space).intersection(&dec.base) == nu_p_points)
        .ok_or(Error::NoDisjointFlat)?;

    let pn = Flat::span(space, &[p, nucleus])?;
    let foot = pn.meet(space, &dec.carrier).ok_or(Error::NoDisjointFlat)?;
    let removed = forms::point_cone(space, p, &nu_p_points);
    let kept = s.intersection(&space.hyperplane_points(pi)).difference(&removed);

    let sub = SubGeometry::new(space, &tangent)?;
    let (nu_n, added) = (0..sub.space.num_points())
        .map(|h| sub.lift_flat(space, &Flat::hyperplane(&sub.space, h)))
        .filter(|f| *f != nu_p && !f.contains_flat(space, &foot))
        .map(|f| {
            let cone = forms::point_cone(space, nucleus, &f.points(space));
            (f, cone)
        })
        .find(|(_, cone)| cone.is_disjoint(&kept))
        .ok_or(Error::NoDisjointFlat)?;

    let rec = SurgeryRecord::new("cone-swap", removed, added)
        .hyperplane(space, pi)
        .vertex(space, p)
        .flat("carrier", &dec.carrier)
        .flat("nu_p", &nu_p)
        .flat("nu_n", &nu_n)
        .flat("tangent", &tangent);
    Ok((rec.apply(s), rec))
}

/// Pivots with a carrier through the nucleus `N`, using a base whose own
/// nucleus differs from `N`.
pub fn shifted_nucleus_pivot(space: &ProjSpace, s: &PointSet, pi: usize) -> Result<(PointSet, SurgeryRecord)> {
    let kind = parabolic_even(space)?;
    let nucleus = nucleus_of(space, s)?;
    let dec = singular_decomposition(space, s, kind, pi, &[], &[nucleus])?;
    let sub = SubGeometry::new(space, &dec.carrier)?;
    let new_base = collineation_images(&sub.space, &sub.restrict(&dec.base), None, usize::MAX)
        .into_iter()
        .find(|img| spectra::find_line_nucleus(&sub.space, img).map(|x| sub.to_ambient(x)) != Some(nucleus))
        .map(|img| sub.lift(&img))
        .ok_or_else(|| Error::NotApplicable("no base with a different nucleus".into()))?;
    let (out, rec) = pivot_with(space, s, kind, &dec, &new_base, "shifted-nucleus")?;
    Ok((out, rec))
}

/// One cone `R·C_R` of a repeated pivot, with the axis `ξ ∩ carrier` that
/// admissible replacements must respect.
#[derive(Debug, Clone)]
pub struct PivotSlot {
    pub point: usize,
    pub hyperplane: usize,
    pub carrier: Flat,
    pub base: PointSet,
    pub axis: Option<Flat>,
}

/// `ξ = p^⊥ ∩ r^⊥` and the cone decomposition of `R^⊥` for every `R` on `pr`.
pub fn repeated_pivot_slots(space: &ProjSpace, form: &Form, p: usize, r: usize) -> Result<(Flat, Vec<PivotSlot>)> {
    let s = form.point_set(space);
    if p == r || !s.contains(p) || !s.contains(r) {
        return Err(Error::NotCollinear);
    }
    let line = space.line_through(p, r)?;
    if !line.is_subset(&s) {
        return Err(Error::NotCollinear);
    }
    let xi = Flat::hyperplane(space, form.perp(space, p)?)
        .meet(space, &Flat::hyperplane(space, form.perp(space, r)?))
        .ok_or(Error::NotCollinear)?;
    let slots = line
        .iter()
        .map(|pt| {
            let h = form.perp(space, pt)?;
            let dec = singular_decomposition(space, &s, form.kind(), h, &[], &[])?;
            debug_assert_eq!(dec.vertex, pt);
            Ok(PivotSlot {
                point: pt,
                hyperplane: h,
                axis: xi.meet(space, &dec.carrier),
                carrier: dec.carrier,
                base: dec.base,
            })
        })
        .collect::<Result<_>>()?;
    Ok((xi, slots))
}

/// `∪_{R ∈ pr} R·C′_R`, with `C′_R = choices[R]` where given and the
/// original base elsewhere.
pub fn repeated_pivot(
    space: &ProjSpace,
    form: &Form,
    p: usize,
    r: usize,
    choices: &BTreeMap<usize, PointSet>,
) -> Result<(PointSet, SurgeryRecord)> {
    let s = form.point_set(space);
    let (xi, slots) = repeated_pivot_slots(space, form, p, r)?;
    if let Some(&stray) = choices.keys().find(|k| !slots.iter().any(|sl| sl.point == **k)) {
        return Err(Error::NotApplicable(format!("point {stray} is not on the pivot line")));
    }
    let xi_points = xi.points(space);
    let mut out = space.empty_set();
    for slot in &slots {
        let base = choices.get(&slot.point).unwrap_or(&slot.base);
        if !is_valid_base(space, &slot.carrier, base, form.kind())? {
            return Err(Error::BaseWrongType);
        }
        let cone = forms::point_cone(space, slot.point, base);
        let expected = s.intersection(&space.hyperplane_points(slot.hyperplane)).intersection(&xi_points);
        if cone.intersection(&xi_points) != expected {
            return Err(Error::ConstraintViolated(slot.point));
        }
        out.union_with(&cone);
    }
    let rec = SurgeryRecord::new("repeated-pivot", s.difference(&out), out.difference(&s))
        .vertex(space, p)
        .flat("line", &Flat::span(space, &[p, r])?)
        .flat("xi", &xi);
    Ok((out, rec))
}

/// For `Q⁺(2n+1,2)`: removes the symmetric difference of the two
/// generators through an `(n−1)`-flat of a generator.
pub fn affine_switch(space: &ProjSpace, s: &PointSet) -> Result<(PointSet, SurgeryRecord)> {
    let m = space.dim();
    if space.q() != 2 || m < 3 || m % 2 == 0 {
        return Err(Error::NotQ2Hyperbolic);
    }
    let kind = PolarKind::hyperbolic(m, 2)?;
    if !spectra::is_classical_like(space, s, kind)? {
        return Err(Error::NotQ2Hyperbolic);
    }
    let n = (m - 1) / 2;
    let generator = greedy_subspace(space, s, n).ok_or(Error::NotQ2Hyperbolic)?;
    let nu = Flat::from_vectors(space, &generator.basis()[..n])?;
    let through: BTreeSet<Flat> = s
        .iter()
        .filter(|&x| !nu.contains_point(space, x))
        .map(|x| nu.join_point(space, x))
        .filter(|g| g.points(space).is_subset(s))
        .collect();
    let Ok([g1, g2]) = <[Flat; 2]>::try_from(through.into_iter().collect::<Vec<_>>()) else {
        return Err(Error::NotQ2Hyperbolic);
    };
    let removed = g1.points(space).symmetric_difference(&g2.points(space));
    let span = g1.join(space, &g2);
    let pi = span.hyperplanes_containing(space)[0];
    let rec = SurgeryRecord::new("affine-switch", removed, space.empty_set())
        .hyperplane(space, pi)
        .flat("nu", &nu)
        .flat("generator_a", &g1)
        .flat("generator_b", &g2);
    Ok((rec.apply(s), rec))
}

/// The polar kind a non-singular section of a parabolic set has, from its size.
fn nonsingular_section_kind(space: &ProjSpace, s: &PointSet, pi: usize) -> Result<PolarKind> {
    let kind = PolarKind::parabolic(space.dim(), space.q())?;
    let size = s.intersection_count(&space.hyperplane_points(pi)) as u64;
    match profile(kind).type_of(size) {
        HyperplaneType::EllipticType => PolarKind::elliptic(space.dim() - 1, space.q()),
        HyperplaneType::HyperbolicType => PolarKind::hyperbolic(space.dim() - 1, space.q()),
        HyperplaneType::Singular => Err(Error::SingularHyperplane),
        _ => Err(Error::NotQuasiPolar),
    }
}

/// For `Q(2n,2)`: replaces the section in a non-singular hyperplane by
/// another quasi-quadric of the same type.
pub fn nonsingular_switch_q2(
    space: &ProjSpace,
    s: &PointSet,
    pi: usize,
    new_section: &PointSet,
) -> Result<(PointSet, SurgeryRecord)> {
    if space.q() != 2 {
        return Err(Error::NotQ2);
    }
    let section_kind = nonsingular_section_kind(space, s, pi)?;
    let plane = Flat::hyperplane(space, pi);
    if !new_section.is_subset(&plane.points(space)) {
        return Err(Error::SectionWrongType);
    }
    let sub = SubGeometry::new(space, &plane)?;
    if !spectra::is_classical_like(&sub.space, &sub.restrict(new_section), section_kind)? {
        return Err(Error::SectionWrongType);
    }
    let removed = s.intersection(&plane.points(space));
    let rec = SurgeryRecord::new("q2-switch", removed, new_section.clone()).hyperplane(space, pi);
    Ok((rec.apply(s), rec))
}

/// A tangent hyperplane of the section `s ∩ xi` inside `xi`: `xi ∩ P^⊥` for
/// the least point `P` of the section.
pub fn tangent_subspace(space: &ProjSpace, form: &Form, xi: usize) -> Result<Flat> {
    let s = form.point_set(space);
    let p = s
        .intersection(&space.hyperplane_points(xi))
        .first()
        .ok_or_else(|| Error::BadHyperplanes("the hyperplane misses the quadric".into()))?;
    Flat::hyperplane(space, xi)
        .meet(space, &Flat::hyperplane(space, form.perp(space, p)?))
        .ok_or_else(|| Error::BadHyperplanes("tangent hyperplane coincides with the section".into()))
}

/// For `Q(2n,3)`: replaces the points of the quadric in `xi \ pi_sub` by
/// the internal points there.
pub fn internal_switch_q3(space: &ProjSpace, form: &Form, xi: usize, pi_sub: &Flat) -> Result<(PointSet, SurgeryRecord)> {
    class_switch_q3(space, form, xi, pi_sub, PointClass::Internal)
}

/// As [`internal_switch_q3`], with the replacement points drawn from
/// `class` (internal or external).
///
/// Only the class of the pole of `xi` gives a quasi-quadric: internal
/// points for an elliptic `xi`, external points for a hyperbolic one.
pub fn class_switch_q3(
    space: &ProjSpace,
    form: &Form,
    xi: usize,
    pi_sub: &Flat,
    class: PointClass,
) -> Result<(PointSet, SurgeryRecord)> {
    if space.q() != 3 {
        return Err(Error::NotQ3);
    }
    if form.kind().family != Family::Parabolic {
        return Err(Error::IncompatibleKind(format!("{} is not parabolic", form.kind())));
    }
    let s = form.point_set(space);
    let section_kind = match nonsingular_section_kind(space, &s, xi) {
        Ok(k) => k,
        Err(_) => return Err(Error::BadHyperplanes("xi must meet the quadric non-singularly".into())),
    };
    let xi_flat = Flat::hyperplane(space, xi);
    if pi_sub.dim() + 2 != space.dim() || !xi_flat.contains_flat(space, pi_sub) {
        return Err(Error::BadHyperplanes("pi must be a hyperplane of xi".into()));
    }
    let pi_points = pi_sub.points(space);
    let cut = s.intersection_count(&pi_points) as u64;
    if profile(section_kind).type_of(cut) != HyperplaneType::Singular {
        return Err(Error::BadHyperplanes("pi must be singular within xi".into()));
    }
    let internal = form.internal_points(space)?;
    let pool = match class {
        PointClass::Internal => internal,
        PointClass::External => space.all_points().difference(&s).difference(&internal),
        _ => return Err(Error::NotApplicable(format!("replacement by {class:?} points"))),
    };
    let region = xi_flat.points(space).difference(&pi_points);
    let removed = s.intersection(&region);
    let added = pool.intersection(&region);
    let name = match class {
        PointClass::Internal => "q3-switch",
        _ => "q3-switch-external",
    };
    let rec = SurgeryRecord::new(name, removed, added)
        .hyperplane(space, xi)
        .flat("pi", pi_sub);
    Ok((rec.apply(&s), rec))
}

/// Whether `s` is a `(q+1)`-set of a plane meeting every line in at most two points.
pub fn is_oval(space: &ProjSpace, s: &PointSet) -> bool {
    space.dim() == 2 && s.count() == space.q() + 1 && space.section_sizes(s).iter().all(|&x| x <= 2)
}

/// For an oval in `PG(2,q)`, `q` even: swaps the tangency point on
/// `tangent` for the nucleus.
pub fn oval_nucleus_swap(space: &ProjSpace, s: &PointSet, tangent: usize) -> Result<(PointSet, SurgeryRecord)> {
    if space.q() % 2 != 0 {
        return Err(Error::NotEvenQ);
    }
    if !is_oval(space, s) {
        return Err(Error::NotOval);
    }
    let on_line = s.intersection(&space.hyperplane_points(tangent));
    let [p] = on_line.to_indices()[..] else {
        return Err(Error::NotTangent);
    };
    let nucleus = spectra::find_line_nucleus(space, s).ok_or(Error::NotOval)?;
    let rec = SurgeryRecord::new(
        "oval-swap",
        PointSet::from_indices(space.num_points(), [p]),
        PointSet::from_indices(space.num_points(), [nucleus]),
    )
    .hyperplane(space, tangent);
    Ok((rec.apply(s), rec))
}

/// Two points of `s` whose line meets `s` in exactly `k` points.
pub fn find_k_secant(space: &ProjSpace, s: &PointSet, k: usize) -> Option<(usize, usize)> {
    let pts = s.to_indices();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let on = space.line_points(a, b).iter().filter(|&&x| s.contains(x)).count();
            if on == k {
                return Some((a, b));
            }
        }
    }
    None
}

/// Whether `section` is a cone `V·B` with `V ∈ section` and `B` a classical-size
/// quasi-polar space of the base kind of `kind` in some carrier.
pub fn is_cone_over_quasi_polar(space: &ProjSpace, section: &PointSet, pi: usize, kind: PolarKind) -> Result<bool> {
    let candidates: Vec<usize> = forms::cone_vertices(space, section)
        .into_iter()
        .filter(|&v| section.contains(v))
        .collect();
    for v in candidates {
        let Ok(carrier) = carrier_in(space, pi, v, &[], &[]) else { continue };
        let base = section.intersection(&carrier.points(space));
        if forms::point_cone(space, v, &base) == *section && is_valid_base(space, &carrier, &base, kind)? {
            return Ok(true);
        }
    }
    Ok(false)
}
