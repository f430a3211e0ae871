//! Exhaustive enumerations over small spaces.
//!
//! Every census walks its candidates in a fixed order and merges parallel
//! results in that order, so the output does not depend on the thread count.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{self, Family, Form, PolarKind};
use crate::gf::Elem;
use crate::pg::{Flat, PointSet, ProjSpace, SubGeometry};
use crate::spectra::{self, classical_size, profile, HyperplaneType};
use crate::surgery;

/// Largest number of coefficient vectors a form enumeration will walk.
pub const MAX_FORMS: u64 = 1 << 22;

/// Witnesses kept per breakdown label.
pub const MAX_WITNESSES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpaceParams {
    pub m: usize,
    pub q: usize,
}

impl SpaceParams {
    fn of(space: &ProjSpace) -> Self {
        SpaceParams { m: space.dim(), q: space.q() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusResult {
    pub name: String,
    pub space: SpaceParams,
    pub total_candidates: u64,
    pub breakdown: BTreeMap<String, u64>,
    /// Named yes/no checks made along the way.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub checks: BTreeMap<String, bool>,
    /// Up to [`MAX_WITNESSES`] sets per breakdown label, in candidate order.
    pub witnesses: BTreeMap<String, Vec<PointSet>>,
    #[serde(skip)]
    pub runtime_ms: u128,
}

impl CensusResult {
    fn new(name: &str, space: &ProjSpace) -> Self {
        CensusResult {
            name: name.to_string(),
            space: SpaceParams::of(space),
            total_candidates: 0,
            breakdown: BTreeMap::new(),
            checks: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            runtime_ms: 0,
        }
    }

    fn record(&mut self, label: &str, witness: Option<&PointSet>) {
        *self.breakdown.entry(label.to_string()).or_insert(0) += 1;
        if let Some(w) = witness {
            let list = self.witnesses.entry(label.to_string()).or_default();
            if list.len() < MAX_WITNESSES {
                list.push(w.clone());
            }
        }
    }

    fn finish(mut self, start: Instant) -> Self {
        self.runtime_ms = start.elapsed().as_millis();
        self
    }

    pub fn count(&self, label: &str) -> u64 {
        self.breakdown.get(label).copied().unwrap_or(0)
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.get(name).copied()
    }
}

/// All point sets of non-degenerate forms of `kind` in `space`, sorted and
/// without repeats.
///
/// Walks every coefficient vector, so it is limited to [`MAX_FORMS`]
/// candidates.
pub fn enumerate_quadrics(space: &ProjSpace, kind: PolarKind) -> Result<Vec<PointSet>> {
    kind.check_space(space)?;
    let sets = match kind.family {
        Family::Hermitian => enumerate_hermitian(space, kind)?,
        _ => enumerate_quadratic(space, kind)?,
    };
    let unique: BTreeSet<PointSet> = sets.into_iter().collect();
    Ok(unique.into_iter().collect())
}

/// [`enumerate_quadrics`] as a census with one label, the family name.
pub fn quadrics_census(space: &ProjSpace, kind: PolarKind) -> Result<CensusResult> {
    let start = Instant::now();
    let sets = enumerate_quadrics(space, kind)?;
    let mut res = CensusResult::new("quadrics", space);
    res.total_candidates = sets.len() as u64;
    for s in &sets {
        res.record(kind.family.name(), Some(s));
    }
    Ok(res.finish(start))
}

fn too_large(what: &str, count: Option<u64>) -> Error {
    match count {
        Some(c) => Error::SpaceTooLarge(format!("{c} {what} exceed the limit of {MAX_FORMS}")),
        None => Error::SpaceTooLarge(format!("{what} overflow")),
    }
}

fn enumerate_quadratic(space: &ProjSpace, kind: PolarKind) -> Result<Vec<PointSet>> {
    let f = space.field();
    let q = space.q() as u64;
    let w = space.dim() + 1;
    let monos: Vec<(usize, usize)> = (0..w).flat_map(|i| (i..w).map(move |j| (i, j))).collect();
    let total = q.checked_pow(monos.len() as u32);
    let total = total.filter(|&t| t <= MAX_FORMS).ok_or_else(|| too_large("coefficient vectors", total))?;
    let target = classical_size(kind.family, kind.m, kind.q) as usize;
    let table: Vec<Vec<Elem>> = (0..space.num_points())
        .map(|p| {
            let x = space.point(p);
            monos.iter().map(|&(i, j)| f.mul(x[i], x[j])).collect()
        })
        .collect();
    let found: Vec<Option<PointSet>> = (1..total)
        .into_par_iter()
        .map(|code| {
            let mut c = vec![0 as Elem; monos.len()];
            let mut t = code;
            for slot in c.iter_mut().rev() {
                *slot = (t % q) as Elem;
                t /= q;
            }
            if c.iter().find(|&&x| x != 0) != Some(&1) {
                return None;
            }
            let mut set = space.empty_set();
            let mut zeros = 0;
            for (p, row) in table.iter().enumerate() {
                let v = row.iter().zip(&c).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                if v == 0 {
                    zeros += 1;
                    if zeros > target {
                        return None;
                    }
                    set.insert(p);
                }
            }
            if zeros != target {
                return None;
            }
            let mut coeffs = vec![vec![0; w]; w];
            for (&(i, j), &x) in monos.iter().zip(&c) {
                coeffs[i][j] = x;
            }
            forms::quadratic_is_nondegenerate(f, &coeffs).then_some(set)
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

fn enumerate_hermitian(space: &ProjSpace, kind: PolarKind) -> Result<Vec<PointSet>> {
    let f = space.field();
    let q = space.q() as u64;
    let w = space.dim() + 1;
    let fixed: Vec<Elem> = f.elements().filter(|&a| f.conj_unchecked(a) == a).collect();
    let upper: Vec<(usize, usize)> = (0..w).flat_map(|i| (i + 1..w).map(move |j| (i, j))).collect();
    let total = (fixed.len() as u64)
        .checked_pow(w as u32)
        .and_then(|d| q.checked_pow(upper.len() as u32).and_then(|u| d.checked_mul(u)));
    let total = total.filter(|&t| t <= MAX_FORMS).ok_or_else(|| too_large("Hermitian matrices", total))?;
    let target = classical_size(kind.family, kind.m, kind.q) as usize;
    let found: Vec<Option<PointSet>> = (1..total)
        .into_par_iter()
        .map(|code| {
            let mut t = code;
            let mut a = vec![vec![0 as Elem; w]; w];
            for &(i, j) in upper.iter().rev() {
                a[i][j] = (t % q) as Elem;
                a[j][i] = f.conj_unchecked(a[i][j]);
                t /= q;
            }
            for i in (0..w).rev() {
                a[i][i] = fixed[(t % fixed.len() as u64) as usize];
                t /= fixed.len() as u64;
            }
            let form = Form::hermitian(kind, space, a).ok()?;
            let set = space_zeros(space, &form);
            (set.count() == target).then_some(set)
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

fn space_zeros(space: &ProjSpace, form: &Form) -> PointSet {
    let f = space.field();
    PointSet::from_indices(
        space.num_points(),
        (0..space.num_points()).filter(|&p| form.evaluate(f, space.point(p)) == 0),
    )
}

/// Kind of the section of a classical space of `kind` by a non-singular
/// hyperplane of type `t`.
pub fn nonsingular_section_kind(kind: PolarKind, t: HyperplaneType) -> Result<PolarKind> {
    let (m, q) = (kind.m - 1, kind.q);
    match (kind.family, t) {
        (Family::Parabolic, HyperplaneType::EllipticType) => PolarKind::elliptic(m, q),
        (Family::Parabolic, HyperplaneType::HyperbolicType) => PolarKind::hyperbolic(m, q),
        (Family::Hyperbolic | Family::Elliptic, HyperplaneType::NonSingular) => PolarKind::parabolic(m, q),
        (Family::Hermitian, HyperplaneType::NonSingular) => PolarKind::hermitian(m, q),
        _ => Err(Error::SingularHyperplane),
    }
}

/// Replaces the section of `s` by `pi` with every same-type classical
/// section of `pi` and classifies the results.
///
/// Labels: `identity`, `quasi-polar`, `not-quasi-polar`.
pub fn nonsingular_switch_census(space: &ProjSpace, s: &PointSet, kind: PolarKind, pi: usize) -> Result<CensusResult> {
    let start = Instant::now();
    kind.check_space(space)?;
    let cut = s.intersection_count(&space.hyperplane_points(pi)) as u64;
    let section_kind = nonsingular_section_kind(kind, profile(kind).type_of(cut))?;
    let plane = Flat::hyperplane(space, pi);
    let sub = SubGeometry::new(space, &plane)?;
    let current = s.intersection(&plane.points(space));
    let kept = s.difference(&current);
    let candidates = enumerate_quadrics(&sub.space, section_kind)?;
    let labelled: Vec<(&str, PointSet)> = candidates
        .par_iter()
        .map(|c| {
            let section = sub.lift(c);
            if section == current {
                return Ok(("identity", section));
            }
            let out = kept.union(&section);
            let qp = spectra::classify(space, &out, kind)?.quasi_polar;
            Ok((if qp { "quasi-polar" } else { "not-quasi-polar" }, section))
        })
        .collect::<Result<_>>()?;
    let mut res = CensusResult::new("nonsingular-switch", space);
    res.total_candidates = labelled.len() as u64;
    for (label, section) in &labelled {
        res.record(label, Some(section));
    }
    res.checks.insert("only-identity".into(), res.count("quasi-polar") == 0);
    Ok(res.finish(start))
}

fn check_q2_parabolic(space: &ProjSpace) -> Result<PolarKind> {
    if space.q() != 2 || space.dim() % 2 != 0 {
        return Err(Error::NotQ2);
    }
    PolarKind::parabolic(space.dim(), 2)
}

/// For `Q(2n,2)` and one non-singular hyperplane `pi`: switches the
/// section for every quasi-quadric of the same type and records whether
/// the result keeps a nucleus.
///
/// Labels are `<type>/nucleus`, `<type>/no-nucleus` and
/// `<type>/not-quasi-polar`.
pub fn nucleus_pivot_census_at(space: &ProjSpace, pi: usize) -> Result<CensusResult> {
    let start = Instant::now();
    let kind = check_q2_parabolic(space)?;
    let s = Form::canonical(kind, space)?.point_set(space);
    let t = profile(kind).type_of(s.intersection_count(&space.hyperplane_points(pi)) as u64);
    let section_kind = nonsingular_section_kind(kind, t)?;
    let sub = SubGeometry::new(space, &Flat::hyperplane(space, pi))?;
    let candidates = enumerate_quadrics(&sub.space, section_kind)?;
    let labelled: Vec<(String, PointSet)> = candidates
        .par_iter()
        .map(|c| {
            let (out, _) = surgery::nonsingular_switch_q2(space, &s, pi, &sub.lift(c))?;
            let tail = if !spectra::classify(space, &out, kind)?.quasi_polar {
                "not-quasi-polar"
            } else if spectra::find_line_nucleus(space, &out).is_some() {
                "nucleus"
            } else {
                "no-nucleus"
            };
            Ok((format!("{}/{tail}", section_kind.family.name()), out))
        })
        .collect::<Result<_>>()?;
    let mut res = CensusResult::new("nucleus-pivot", space);
    res.total_candidates = labelled.len() as u64;
    for (label, out) in &labelled {
        res.record(label, Some(out));
    }
    Ok(res.finish(start))
}

/// Non-singular hyperplanes of the canonical `Q(2n,2)`, least index first,
/// with their section types.
fn nonsingular_hyperplanes(space: &ProjSpace, kind: PolarKind) -> Result<Vec<(usize, HyperplaneType)>> {
    let s = Form::canonical(kind, space)?.point_set(space);
    let prof = profile(kind);
    Ok(space
        .section_sizes(&s)
        .iter()
        .enumerate()
        .map(|(h, &x)| (h, prof.type_of(x as u64)))
        .filter(|&(_, t)| matches!(t, HyperplaneType::EllipticType | HyperplaneType::HyperbolicType))
        .collect())
}

/// [`nucleus_pivot_census_at`] for the least non-singular hyperplane of
/// each type, merged.
pub fn nucleus_pivot_census(space: &ProjSpace) -> Result<CensusResult> {
    let start = Instant::now();
    let kind = check_q2_parabolic(space)?;
    let hyps = nonsingular_hyperplanes(space, kind)?;
    let mut res = CensusResult::new("nucleus-pivot", space);
    for t in [HyperplaneType::HyperbolicType, HyperplaneType::EllipticType] {
        let Some(&(h, _)) = hyps.iter().find(|&&(_, ht)| ht == t) else { continue };
        let part = nucleus_pivot_census_at(space, h)?;
        res.total_candidates += part.total_candidates;
        res.breakdown.extend(part.breakdown);
        res.witnesses.extend(part.witnesses);
    }
    Ok(res.finish(start))
}

/// Whether [`nucleus_pivot_census_at`] gives the same breakdown for every
/// non-singular hyperplane of a given type.
pub fn nucleus_pivot_independent(space: &ProjSpace) -> Result<bool> {
    let kind = check_q2_parabolic(space)?;
    let hyps = nonsingular_hyperplanes(space, kind)?;
    let parts: Vec<(HyperplaneType, BTreeMap<String, u64>)> = hyps
        .iter()
        .map(|&(h, t)| Ok((t, nucleus_pivot_census_at(space, h)?.breakdown)))
        .collect::<Result<_>>()?;
    let mut seen: HashMap<HyperplaneType, &BTreeMap<String, u64>> = HashMap::new();
    for (t, b) in &parts {
        if *seen.entry(*t).or_insert(b) != b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Next integer with the same number of set bits.
fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// All `k`-subsets of `0..n` as bitmasks, in colex order.
pub fn combinations(n: u32, k: u32) -> Vec<u64> {
    assert!(n < 64);
    if k == 0 {
        return vec![0];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut x = (1u64 << k) - 1;
    while x < 1u64 << n {
        out.push(x);
        x = next_combination(x);
    }
    out
}

fn no_three_collinear(space: &ProjSpace, pts: &[usize]) -> bool {
    for (i, &a) in pts.iter().enumerate() {
        for (j, &b) in pts.iter().enumerate().skip(i + 1) {
            let line = space.line_points(a, b);
            if pts[j + 1..].iter().any(|c| line.contains(c)) {
                return false;
            }
        }
    }
    true
}

/// The `k`-arcs among `points`, each as a sorted index list.
fn arcs_in(space: &ProjSpace, points: &[usize], k: usize) -> Vec<Vec<usize>> {
    combinations(points.len() as u32, k as u32)
        .into_iter()
        .map(|mask| (0..points.len()).filter(|i| mask >> i & 1 == 1).map(|i| points[i]).collect::<Vec<_>>())
        .filter(|pts| no_three_collinear(space, pts))
        .collect()
}

/// The four shapes of a singular section of a parabolic quasi-quadric in
/// `PG(4,q)`, built directly inside the hyperplane `local`, with `p` the
/// vertex and `n` the nucleus.
///
/// Returns each set with the shape labels that produce it.
pub fn singular_section_shapes(local: &ProjSpace, p: usize, n: usize) -> Result<BTreeMap<PointSet, BTreeSet<&'static str>>> {
    if local.dim() != 3 {
        return Err(Error::NotApplicable("shapes are listed for hyperplanes of PG(4,q)".into()));
    }
    let q = local.q();
    let mu = (0..local.num_points())
        .find(|&h| !local.incident(h, p) && !local.incident(h, n))
        .expect("some plane avoids two points");
    let mu_points: Vec<usize> = local.hyperplane_points(mu).iter().collect();
    let ovals = arcs_in(local, &mu_points, q + 1);
    let arcs = arcs_in(local, &mu_points, q);
    let pn = local.line_through(p, n)?;
    let lines_through = |c: usize| -> BTreeSet<PointSet> {
        (0..local.num_points())
            .filter(|&x| !pn.contains(x))
            .map(|x| local.line_through(c, x).expect("distinct points"))
            .collect()
    };
    let mut out: BTreeMap<PointSet, BTreeSet<&'static str>> = BTreeMap::new();
    let idx = |v: &[usize]| PointSet::from_indices(local.num_points(), v.iter().copied());
    for o in &ovals {
        out.entry(forms::point_cone(local, p, &idx(o))).or_default().insert("cone-p");
        out.entry(forms::point_cone(local, n, &idx(o))).or_default().insert("cone-n");
    }
    for (centre, other, label) in [(p, n, "truncated-p-line-n"), (n, p, "truncated-n-line-p")] {
        let lines = lines_through(other);
        for a in &arcs {
            let mut truncated = forms::point_cone(local, centre, &idx(a));
            truncated.remove(centre);
            for l in lines.iter().filter(|l| l.is_disjoint(&truncated)) {
                out.entry(truncated.union(l)).or_default().insert(label);
            }
        }
    }
    Ok(out)
}

/// The shapes among [`singular_section_shapes`] equal to `t`; empty when
/// `t` has none of them.
pub fn q4_shape_classify(local: &ProjSpace, t: &PointSet, p: usize, n: usize) -> Result<BTreeSet<&'static str>> {
    Ok(singular_section_shapes(local, p, n)?.remove(t).unwrap_or_default())
}

/// The line structure of a singular section of `Q(4,q)` with vertex `p`
/// and nucleus `n`: `PN` is inside or meets the set only in `P` or `N`,
/// exactly one of them in the latter case, and every other point lies on
/// a line through `P` or `N` whose other points (bar the centre) all
/// belong to the set.
pub fn is_conelike(space: &ProjSpace, t: &PointSet, p: usize, n: usize) -> bool {
    let pn = space.line_points(p, n);
    let full = pn.iter().all(|&x| t.contains(x));
    if !full {
        if t.contains(p) == t.contains(n) {
            return false;
        }
        if pn.iter().any(|&x| x != p && x != n && t.contains(x)) {
            return false;
        }
    }
    let rest_ok = |c: usize, x: usize| space.line_points(c, x).iter().all(|&y| y == c || t.contains(y));
    t.iter().filter(|x| !pn.contains(x)).all(|x| rest_ok(p, x) || rest_ok(n, x))
}

/// Whether every hyperplane of `local` through `p` or `n` meets `t` in a
/// number of points allowed for a section of a parabolic quasi-quadric.
fn planes_through_ok(local: &ProjSpace, t: &PointSet, p: usize, n: usize, allowed: &[u64]) -> bool {
    let sizes = local.section_sizes(t);
    (0..local.num_points())
        .filter(|&h| local.incident(h, p) || local.incident(h, n))
        .all(|h| allowed.contains(&(sizes[h] as u64)))
}

/// For `Q(4,2)`: every replacement of the section in the least singular
/// hyperplane by a set of the same size, classified.
///
/// Survivors are labelled by the directly built shape they equal
/// (`cone-p`, `cone-n`, `truncated-p-line-n`, `truncated-n-line-p`, joined
/// with `+` when a set has several shapes, or `unmatched`). Non-survivors are `not-quasi-polar`.
pub fn singular_switch_census(space: &ProjSpace) -> Result<CensusResult> {
    let start = Instant::now();
    let kind = check_q2_parabolic(space)?;
    if space.dim() != 4 {
        return Err(Error::NotApplicable("the singular switch census runs in PG(4,2)".into()));
    }
    let form = Form::canonical(kind, space)?;
    let s = form.point_set(space);
    let pi = *spectra::singular_hyperplanes(space, &s, kind)?.first().ok_or(Error::NotSingular)?;
    let dec = surgery::cone_decomposition(space, &s, pi)?;
    let nucleus = form.nucleus_point(space)?;
    let plane = Flat::hyperplane(space, pi);
    let sub = SubGeometry::new(space, &plane)?;
    let local = &sub.space;
    let (p, n) = (
        sub.from_ambient(dec.vertex).ok_or(Error::NoConeDecomposition)?,
        sub.from_ambient(nucleus).ok_or(Error::NoConeDecomposition)?,
    );
    let current = s.intersection(&plane.points(space));
    let kept = s.difference(&current);
    let shapes = singular_section_shapes(local, p, n)?;
    let q = space.q() as u64;
    let allowed = [1, q + 1, 2 * q + 1];

    struct Row {
        section: PointSet,
        survivor: bool,
        conelike: bool,
        planes_ok: bool,
        cone: bool,
    }
    let masks = combinations(local.num_points() as u32, current.count() as u32);
    let rows: Vec<Row> = masks
        .par_iter()
        .map(|&mask| {
            let t = PointSet::from_mask(local.num_points(), mask);
            let section = sub.lift(&t);
            let survivor = spectra::classify(space, &kept.union(&section), kind)?.quasi_polar;
            let cone = survivor && surgery::is_cone_over_quasi_polar(space, &section, pi, kind)?;
            Ok(Row {
                conelike: is_conelike(local, &t, p, n),
                planes_ok: planes_through_ok(local, &t, p, n, &allowed),
                section,
                survivor,
                cone,
            })
        })
        .collect::<Result<_>>()?;

    let mut res = CensusResult::new("singular-switch", space);
    res.total_candidates = rows.len() as u64;
    let mut survivors = BTreeSet::new();
    for r in &rows {
        if !r.survivor {
            res.record("not-quasi-polar", None);
            continue;
        }
        let label = match shapes.get(&sub.restrict(&r.section)) {
            Some(labels) => labels.iter().copied().collect::<Vec<_>>().join("+"),
            None => "unmatched".to_string(),
        };
        res.record(&label, Some(&r.section));
        survivors.insert(sub.restrict(&r.section));
    }
    let constructed: BTreeSet<PointSet> = shapes.keys().cloned().collect();
    let checks = [
        ("survivors-equal-shapes", survivors == constructed),
        ("shapes-distinct", shapes.values().all(|l| l.len() == 1)),
        ("survivors-conelike", rows.iter().all(|r| !r.survivor || r.conelike)),
        ("conelike-with-planes-iff-survivor", rows.iter().all(|r| (r.conelike && r.planes_ok) == r.survivor)),
        ("every-survivor-is-a-cone", rows.iter().all(|r| !r.survivor || r.cone)),
    ];
    for (name, ok) in checks {
        res.checks.insert(name.into(), ok);
    }
    Ok(res.finish(start))
}

/// Types of the `q+1` hyperplanes through a codimension-2 flat, with
/// respect to the polar space of `form`.
pub fn classical_distribution(space: &ProjSpace, form: &Form, flat: &Flat) -> Result<BTreeMap<HyperplaneType, u64>> {
    if flat.dim() + 2 != space.dim() {
        return Err(Error::NotApplicable("the flat must have codimension 2".into()));
    }
    let s = form.point_set(space);
    let prof = profile(form.kind());
    let mut out = BTreeMap::new();
    for h in flat.hyperplanes_containing(space) {
        let t = prof.type_of(s.intersection_count(&space.hyperplane_points(h)) as u64);
        *out.entry(t).or_insert(0) += 1;
    }
    Ok(out)
}

fn distribution_label(d: &BTreeMap<HyperplaneType, u64>) -> String {
    d.iter().map(|(t, c)| format!("{}={c}", t.label())).collect::<Vec<_>>().join(",")
}

/// Groups every codimension-2 flat by the shape of its section (size, the
/// line spectrum of the section inside the flat, and incidence with the
/// nucleus when there is one) and records the hyperplane-type
/// distribution of each.
///
/// Labels are `<case> -> <distribution>`; the check
/// `case-determines-distribution` says whether each case has one
/// distribution.
pub fn classical_distribution_census(space: &ProjSpace, form: &Form) -> Result<CensusResult> {
    let start = Instant::now();
    form.kind().check_space(space)?;
    let s = form.point_set(space);
    let nucleus = form.nucleus_point(space).ok();
    let flats = space.flats_of_codim(2)?;
    let rows: Vec<(String, String)> = flats
        .par_iter()
        .map(|flat| {
            let sub = SubGeometry::new(space, flat)?;
            let section = sub.restrict(&s);
            let spec = spectra::spectrum(&sub.space, &section);
            let hist: Vec<String> = spec.histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            let mut case = format!("size={} lines=[{}]", section.count(), hist.join(" "));
            if let Some(nu) = nucleus {
                case.push_str(if flat.contains_point(space, nu) { " nucleus=in" } else { " nucleus=out" });
            }
            let dist = distribution_label(&classical_distribution(space, form, flat)?);
            Ok((case, dist))
        })
        .collect::<Result<_>>()?;
    let mut res = CensusResult::new("classical-distribution", space);
    res.total_candidates = rows.len() as u64;
    let mut per_case: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (case, dist) in &rows {
        res.record(&format!("{case} -> {dist}"), None);
        per_case.entry(case).or_default().insert(dist);
    }
    res.checks.insert("case-determines-distribution".into(), per_case.values().all(|d| d.len() == 1));
    Ok(res.finish(start))
}

/// Number of lines through `p` meeting the quadric of `form` in exactly two
/// points. Needs a parabolic form over a field of even order and a point
/// off the quadric other than the nucleus.
pub fn two_secant_count(space: &ProjSpace, form: &Form, p: usize) -> Result<u64> {
    let nucleus = form.nucleus_point(space)?;
    if form.is_zero_at(space, p) {
        return Err(Error::PointOnQuadric);
    }
    if p == nucleus {
        return Err(Error::PointIsNucleus);
    }
    let s = form.point_set(space);
    let mut per_line: HashMap<usize, u32> = HashMap::new();
    for x in s.iter() {
        *per_line.entry(space.direction_from(p, x)).or_default() += 1;
    }
    Ok(per_line.values().filter(|&&c| c == 2).count() as u64)
}

/// [`two_secant_count`] for every eligible point, grouped by count.
pub fn two_secant_census(space: &ProjSpace, form: &Form) -> Result<CensusResult> {
    let start = Instant::now();
    let nucleus = form.nucleus_point(space)?;
    let s = form.point_set(space);
    let points: Vec<usize> = (0..space.num_points()).filter(|&p| p != nucleus && !s.contains(p)).collect();
    let counts: Vec<u64> = points.par_iter().map(|&p| two_secant_count(space, form, p)).collect::<Result<_>>()?;
    let mut res = CensusResult::new("two-secants", space);
    res.total_candidates = counts.len() as u64;
    for (&p, &c) in points.iter().zip(&counts) {
        res.record(&format!("2-secants={c}"), Some(&PointSet::from_indices(space.num_points(), [p])));
    }
    Ok(res.finish(start))
}

/// All ovals of `PG(2,q)`, sorted.
pub fn enumerate_ovals(space: &ProjSpace) -> Result<Vec<PointSet>> {
    if space.dim() != 2 {
        return Err(Error::NotApplicable("ovals live in a plane".into()));
    }
    if space.q() > 5 {
        return Err(Error::SpaceTooLarge(format!("oval enumeration in PG(2,{})", space.q())));
    }
    let k = space.q() + 1;
    let n = space.num_points();
    // Collinear triples as a lookup: third[a][b] holds the points of line ab.
    let lines: Vec<Vec<Vec<usize>>> =
        (0..n).map(|a| (0..n).map(|b| if a == b { Vec::new() } else { space.line_points(a, b) }).collect()).collect();
    fn extend(lines: &[Vec<Vec<usize>>], chosen: &mut Vec<usize>, from: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == k {
            out.push(chosen.clone());
            return;
        }
        let n = lines.len();
        for c in from..n {
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(i, &a)| chosen[i + 1..].iter().all(|&b| !lines[a][b].contains(&c)));
            if ok {
                chosen.push(c);
                extend(lines, chosen, c + 1, k, out);
                chosen.pop();
            }
        }
    }
    let found: Vec<Vec<Vec<usize>>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            extend(&lines, &mut vec![first], first + 1, k, &mut out);
            out
        })
        .collect();
    Ok(found.into_iter().flatten().map(|v| PointSet::from_indices(n, v)).collect())
}

/// Every non-identity switch of every oval of `PG(2,q)` along every line,
/// labelled by the kind of result.
///
/// Labels: `not-oval`; `external-swap` (a point of a secant replaced by a
/// point of that secant lying on two tangents); `nucleus-swap` (the
/// tangency point of a tangent replaced by the nucleus); `other-oval`.
pub fn oval_switch_census(space: &ProjSpace) -> Result<CensusResult> {
    let start = Instant::now();
    let ovals = enumerate_ovals(space)?;
    let n = space.num_points();
    let rows: Vec<Vec<(&'static str, PointSet)>> = ovals
        .par_iter()
        .map(|o| {
            let sizes = space.section_sizes(o);
            let tangents_through =
                |x: usize| space.hyperplanes_through(x).iter().filter(|&h| sizes[h] == 1).count();
            let nucleus = spectra::find_line_nucleus(space, o);
            let mut out = Vec::new();
            for line in 0..n {
                let pts = space.hyperplane_points(line);
                let on: Vec<usize> = o.intersection(&pts).iter().collect();
                let off: Vec<usize> = pts.difference(o).iter().collect();
                for rm in 0u64..1 << on.len() {
                    for ad in 0u64..1 << off.len() {
                        if rm == 0 && ad == 0 {
                            continue;
                        }
                        let removed = PointSet::from_indices(n, (0..on.len()).filter(|i| rm >> i & 1 == 1).map(|i| on[i]));
                        let added = PointSet::from_indices(n, (0..off.len()).filter(|i| ad >> i & 1 == 1).map(|i| off[i]));
                        let result = o.difference(&removed).union(&added);
                        let label = if !surgery::is_oval(space, &result) {
                            "not-oval"
                        } else {
                            let single = |s: &PointSet| (s.count() == 1).then(|| s.first().expect("one point"));
                            match (on.len(), single(&removed), single(&added)) {
                                (2, Some(_), Some(a)) if tangents_through(a) == 2 => "external-swap",
                                (1, Some(_), Some(a)) if Some(a) == nucleus => "nucleus-swap",
                                _ => "other-oval",
                            }
                        };
                        out.push((label, result));
                    }
                }
            }
            out
        })
        .collect();
    let mut res = CensusResult::new("oval-switch", space);
    for (label, set) in rows.iter().flatten() {
        res.total_candidates += 1;
        let witness = (*label != "not-oval").then_some(set);
        res.record(label, witness);
    }
    Ok(res.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(m: usize, q: usize) -> ProjSpace {
        ProjSpace::of(m, q).unwrap()
    }

    #[test]
    fn combinations_are_colex_and_complete() {
        let c = combinations(5, 2);
        assert_eq!(c, vec![0b00011, 0b00101, 0b00110, 0b01001, 0b01010, 0b01100, 0b10001, 0b10010, 0b10100, 0b11000]);
        assert_eq!(combinations(15, 7).len(), 6435);
        assert_eq!(combinations(4, 0), vec![0]);
    }

    #[test]
    fn quadric_counts_in_small_spaces() {
        let s22 = space(2, 2);
        assert_eq!(enumerate_quadrics(&s22, PolarKind::parabolic(2, 2).unwrap()).unwrap().len(), 28);
        let s32 = space(3, 2);
        assert_eq!(enumerate_quadrics(&s32, PolarKind::hyperbolic(3, 2).unwrap()).unwrap().len(), 280);
        assert_eq!(enumerate_quadrics(&s32, PolarKind::elliptic(3, 2).unwrap()).unwrap().len(), 168);
        let s23 = space(2, 3);
        assert_eq!(enumerate_quadrics(&s23, PolarKind::parabolic(2, 3).unwrap()).unwrap().len(), 234);
        let s24 = space(2, 4);
        assert_eq!(enumerate_quadrics(&s24, PolarKind::hermitian(2, 4).unwrap()).unwrap().len(), 280);
    }

    #[test]
    fn enumeration_refuses_large_spaces() {
        let s = space(4, 3);
        assert!(matches!(
            enumerate_quadrics(&s, PolarKind::parabolic(4, 3).unwrap()),
            Err(Error::SpaceTooLarge(_))
        ));
    }

    #[test]
    fn ovals_of_small_planes() {
        assert_eq!(enumerate_ovals(&space(2, 2)).unwrap().len(), 28);
        assert_eq!(enumerate_ovals(&space(2, 3)).unwrap().len(), 234);
        assert_eq!(enumerate_ovals(&space(2, 4)).unwrap().len(), 1008);
    }

    #[test]
    fn nucleus_pivot_counts() {
        let s = space(4, 2);
        let res = nucleus_pivot_census(&s).unwrap();
        assert_eq!(res.total_candidates, 448);
        assert_eq!(res.count("hyperbolic/no-nucleus"), 270);
        assert_eq!(res.count("hyperbolic/nucleus"), 10);
        assert_eq!(res.count("elliptic/no-nucleus"), 162);
        assert_eq!(res.count("elliptic/nucleus"), 6);
        assert!(nucleus_pivot_independent(&s).unwrap());
    }

    #[test]
    fn singular_switch_matches_the_shapes() {
        let res = singular_switch_census(&space(4, 2)).unwrap();
        assert_eq!(res.total_candidates, 6435);
        assert_eq!(res.check("survivors-equal-shapes"), Some(true));
        assert_eq!(res.check("survivors-conelike"), Some(true));
        assert_eq!(res.check("conelike-with-planes-iff-survivor"), Some(true));
        assert_eq!(res.count("unmatched"), 0);
        assert_eq!(res.count("not-quasi-polar"), 6331);
        // Over GF(2) a truncated line has two points, so some shapes coincide.
        assert_eq!(res.check("shapes-distinct"), Some(false));
        assert_eq!(res.count("cone-n+truncated-p-line-n"), 12);
        assert_eq!(res.count("cone-p+truncated-n-line-p"), 12);
        assert_eq!(res.check("every-survivor-is-a-cone"), Some(true));
        let original = &res.witnesses["cone-p"];
        assert!(!original.is_empty());
    }

    #[test]
    fn shape_classify_names_the_original_section() {
        let s = space(4, 2);
        let kind = PolarKind::parabolic(4, 2).unwrap();
        let form = Form::canonical(kind, &s).unwrap();
        let q = form.point_set(&s);
        let pi = spectra::singular_hyperplanes(&s, &q, kind).unwrap()[0];
        let dec = surgery::cone_decomposition(&s, &q, pi).unwrap();
        let sub = SubGeometry::new(&s, &Flat::hyperplane(&s, pi)).unwrap();
        let p = sub.from_ambient(dec.vertex).unwrap();
        let n = sub.from_ambient(form.nucleus_point(&s).unwrap()).unwrap();
        let labels = q4_shape_classify(&sub.space, &sub.restrict(&q), p, n).unwrap();
        assert_eq!(labels.into_iter().collect::<Vec<_>>(), vec!["cone-p"]);
        assert!(q4_shape_classify(&sub.space, &sub.space.empty_set(), p, n).unwrap().is_empty());
    }

    #[test]
    fn two_secants_in_q42() {
        let s = space(4, 2);
        let form = Form::canonical(PolarKind::parabolic(4, 2).unwrap(), &s).unwrap();
        let res = two_secant_census(&s, &form).unwrap();
        assert_eq!(res.total_candidates, 15);
        let q = form.point_set(&s);
        assert_eq!(two_secant_count(&s, &form, q.first().unwrap()), Err(Error::PointOnQuadric));
        let nu = form.nucleus_point(&s).unwrap();
        assert_eq!(two_secant_count(&s, &form, nu), Err(Error::PointIsNucleus));
    }

    #[test]
    fn oval_switches_in_pg23_are_external_swaps() {
        let res = oval_switch_census(&space(2, 3)).unwrap();
        assert_eq!(res.count("other-oval"), 0);
        assert_eq!(res.count("nucleus-swap"), 0);
        assert_eq!(res.count("external-swap"), 234 * 6 * 2);
    }

    #[test]
    fn oval_switches_in_pg24_are_nucleus_swaps() {
        let res = oval_switch_census(&space(2, 4)).unwrap();
        assert_eq!(res.count("other-oval"), 0);
        assert_eq!(res.count("nucleus-swap"), 1008 * 5);
    }

    #[test]
    fn nonsingular_switch_only_identity_for_q3() {
        let s = space(3, 3);
        for kind in [PolarKind::hyperbolic(3, 3).unwrap(), PolarKind::elliptic(3, 3).unwrap()] {
            let q = Form::canonical(kind, &s).unwrap().point_set(&s);
            let prof = profile(kind);
            let pi = s
                .section_sizes(&q)
                .iter()
                .position(|&x| prof.type_of(x as u64) == HyperplaneType::NonSingular)
                .unwrap();
            let res = nonsingular_switch_census(&s, &q, kind, pi).unwrap();
            assert_eq!(res.total_candidates, 234);
            assert_eq!(res.count("identity"), 1);
            assert_eq!(res.check("only-identity"), Some(true));
        }
    }

    #[test]
    fn distributions_in_q44() {
        let s = space(4, 4);
        let form = Form::canonical(PolarKind::parabolic(4, 4).unwrap(), &s).unwrap();
        let res = classical_distribution_census(&s, &form).unwrap();
        assert_eq!(res.total_candidates, 5797);
        assert_eq!(res.check("case-determines-distribution"), Some(true));
    }
}
