//! Quadratic and Hermitian forms, the classical polar spaces they define,
//! polarity, nuclei, cones, and point classes.
//!
//! Canonical coordinates (our own choice):
//!
//! * parabolic `Q(2n,q)`: `x₀² + x₁x₂ + … + x_{2n−1}x_{2n}`
//! * hyperbolic `Q⁺(2n+1,q)`: `x₀x₁ + … + x_{2n}x_{2n+1}`
//! * elliptic `Q⁻(2n+1,q)`: `x₀² + x₀x₁ + a·x₁² + x₂x₃ + …`, with `a` the
//!   least element for which `t² + t + a` is irreducible
//! * Hermitian `H(m,q)`: `Σ xᵢ^(√q+1)`

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldTable};
use crate::linalg;
use crate::pg::{Flat, PointSet, ProjSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Parabolic,
    Hyperbolic,
    Elliptic,
    Hermitian,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Parabolic, Family::Hyperbolic, Family::Elliptic, Family::Hermitian];

    pub fn name(self) -> &'static str {
        match self {
            Family::Parabolic => "parabolic",
            Family::Hyperbolic => "hyperbolic",
            Family::Elliptic => "elliptic",
            Family::Hermitian => "hermitian",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::IncompatibleKind(format!("unknown family {s:?}")))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A family of classical polar space in a given PG(m,q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PolarKind {
    pub family: Family,
    pub m: usize,
    pub q: usize,
}

impl PolarKind {
    pub fn new(family: Family, m: usize, q: usize) -> Result<Self> {
        let ok = match family {
            Family::Parabolic => m % 2 == 0 && m >= 2,
            Family::Hyperbolic | Family::Elliptic => m % 2 == 1,
            Family::Hermitian => m >= 1 && crate::gf::prime_power(q).is_some_and(|(_, e)| e % 2 == 0),
        };
        if !ok {
            return Err(Error::IncompatibleKind(format!("{family} in PG({m},{q})")));
        }
        Ok(PolarKind { family, m, q })
    }

    pub fn parabolic(m: usize, q: usize) -> Result<Self> {
        Self::new(Family::Parabolic, m, q)
    }

    pub fn hyperbolic(m: usize, q: usize) -> Result<Self> {
        Self::new(Family::Hyperbolic, m, q)
    }

    pub fn elliptic(m: usize, q: usize) -> Result<Self> {
        Self::new(Family::Elliptic, m, q)
    }

    pub fn hermitian(m: usize, q: usize) -> Result<Self> {
        Self::new(Family::Hermitian, m, q)
    }

    /// The same family two dimensions lower, as carried by cone bases.
    pub fn base_kind(&self) -> Result<Self> {
        if self.m < 3 {
            return Err(Error::IncompatibleKind(format!("{self} has no cone base of dimension ≥ 1")));
        }
        Self::new(self.family, self.m - 2, self.q)
    }

    pub fn check_space(&self, space: &ProjSpace) -> Result<()> {
        if space.dim() != self.m || space.q() != self.q {
            return Err(Error::IncompatibleKind(format!("{self} used in {space:?}")));
        }
        Ok(())
    }
}

impl fmt::Display for PolarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} PG({},{})", self.family, self.m, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointClass {
    On,
    Internal,
    External,
    Nucleus,
}

/// A non-degenerate quadratic or Hermitian form.
///
/// Quadratic forms keep coefficients `c[i][j]` for `i ≤ j` and zeros below
/// the diagonal; Hermitian forms keep a matrix equal to its conjugate
/// transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    kind: PolarKind,
    matrix: Vec<Vec<Elem>>,
}

pub fn quadratic_value(f: &FieldTable, c: &[Vec<Elem>], x: &[Elem]) -> Elem {
    let mut acc = 0;
    for (i, row) in c.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        let mut inner = 0;
        for j in i..row.len() {
            if row[j] != 0 {
                inner = f.add(inner, f.mul(row[j], x[j]));
            }
        }
        acc = f.add(acc, f.mul(x[i], inner));
    }
    acc
}

fn hermitian_value(f: &FieldTable, a: &[Vec<Elem>], x: &[Elem], y: &[Elem]) -> Elem {
    let mut acc = 0;
    for (i, row) in a.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        let mut inner = 0;
        for (j, &aij) in row.iter().enumerate() {
            if aij != 0 && y[j] != 0 {
                inner = f.add(inner, f.mul(aij, f.conj_unchecked(y[j])));
            }
        }
        acc = f.add(acc, f.mul(x[i], inner));
    }
    acc
}

/// Gram matrix of the polarization `B(x,y) = Q(x+y) − Q(x) − Q(y)`.
pub fn gram_matrix(f: &FieldTable, c: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = c.len();
    let mut g = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            if i == j {
                g[i][i] = f.add(c[i][i], c[i][i]);
            } else {
                g[i][j] = f.add(g[i][j], c[i][j]);
                g[j][i] = f.add(g[j][i], c[i][j]);
            }
        }
    }
    g
}

/// Whether the quadratic form with coefficients `c` is non-singular.
pub fn quadratic_is_nondegenerate(f: &FieldTable, c: &[Vec<Elem>]) -> bool {
    let g = gram_matrix(f, c);
    let rad = linalg::null_space(f, &g, c.len());
    match rad.len() {
        0 => true,
        1 => f.characteristic() == 2 && quadratic_value(f, c, &rad[0]) != 0,
        _ => false,
    }
}

pub(crate) fn hermitian_is_nondegenerate(f: &FieldTable, a: &[Vec<Elem>]) -> bool {
    linalg::null_space(f, a, a.len()).is_empty()
}

/// Least `a` with `t² + t + a` irreducible.
pub fn elliptic_constant(f: &FieldTable) -> Elem {
    f.elements().find(|&a| f.is_irreducible_artin(a)).expect("every finite field has one")
}

impl Form {
    /// The canonical form of `kind` listed in the module docs.
    pub fn canonical(kind: PolarKind, space: &ProjSpace) -> Result<Form> {
        kind.check_space(space)?;
        let f = space.field();
        let n = kind.m + 1;
        let mut c = vec![vec![0; n]; n];
        match kind.family {
            Family::Parabolic => {
                c[0][0] = 1;
                for i in (1..n).step_by(2) {
                    c[i][i + 1] = 1;
                }
            }
            Family::Hyperbolic => {
                for i in (0..n).step_by(2) {
                    c[i][i + 1] = 1;
                }
            }
            Family::Elliptic => {
                c[0][0] = 1;
                c[0][1] = 1;
                c[1][1] = elliptic_constant(f);
                for i in (2..n).step_by(2) {
                    c[i][i + 1] = 1;
                }
            }
            Family::Hermitian => {
                c = linalg::identity(n);
            }
        }
        Ok(Form { kind, matrix: c })
    }

    /// A quadratic form given by upper-triangular coefficients.
    pub fn quadratic(kind: PolarKind, space: &ProjSpace, coeffs: Vec<Vec<Elem>>) -> Result<Form> {
        kind.check_space(space)?;
        if kind.family == Family::Hermitian {
            return Err(Error::IncompatibleKind("hermitian kind for a quadratic form".into()));
        }
        let n = kind.m + 1;
        if coeffs.len() != n || coeffs.iter().enumerate().any(|(i, r)| r.len() != n || r[..i].iter().any(|&x| x != 0)) {
            return Err(Error::NotApplicable("coefficients must be upper triangular".into()));
        }
        if !quadratic_is_nondegenerate(space.field(), &coeffs) {
            return Err(Error::DegenerateForm);
        }
        Ok(Form { kind, matrix: coeffs })
    }

    /// A Hermitian form given by its matrix.
    pub fn hermitian(kind: PolarKind, space: &ProjSpace, matrix: Vec<Vec<Elem>>) -> Result<Form> {
        kind.check_space(space)?;
        if kind.family != Family::Hermitian {
            return Err(Error::IncompatibleKind("quadratic kind for a Hermitian form".into()));
        }
        let f = space.field();
        let n = kind.m + 1;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::NotApplicable("matrix has the wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if matrix[i][j] != f.conj_unchecked(matrix[j][i]) {
                    return Err(Error::NotApplicable("matrix is not Hermitian".into()));
                }
            }
        }
        if !hermitian_is_nondegenerate(f, &matrix) {
            return Err(Error::DegenerateForm);
        }
        Ok(Form { kind, matrix })
    }

    pub fn kind(&self) -> PolarKind {
        self.kind
    }

    pub fn matrix(&self) -> &[Vec<Elem>] {
        &self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.kind.family == Family::Hermitian
    }

    pub fn evaluate(&self, f: &FieldTable, x: &[Elem]) -> Elem {
        if self.is_hermitian() {
            hermitian_value(f, &self.matrix, x, x)
        } else {
            quadratic_value(f, &self.matrix, x)
        }
    }

    /// The associated (conjugate-)bilinear map.
    pub fn bilinear(&self, f: &FieldTable, x: &[Elem], y: &[Elem]) -> Elem {
        if self.is_hermitian() {
            hermitian_value(f, &self.matrix, x, y)
        } else {
            linalg::dot(f, x, &linalg::vec_mat(f, y, &gram_matrix(f, &self.matrix)))
        }
    }

    pub fn is_zero_at(&self, space: &ProjSpace, p: usize) -> bool {
        self.evaluate(space.field(), space.point(p)) == 0
    }

    /// The projective zeros of the form.
    pub fn point_set(&self, space: &ProjSpace) -> PointSet {
        let members: Vec<usize> = (0..space.num_points())
            .into_par_iter()
            .filter(|&p| self.is_zero_at(space, p))
            .collect();
        PointSet::from_indices(space.num_points(), members)
    }

    /// Dual coordinates of `{y : B(p,y) = 0}`, or `None` when that is everything.
    fn perp_vector(&self, space: &ProjSpace, p: usize) -> Option<Vec<Elem>> {
        let f = space.field();
        let x = space.point(p);
        let v: Vec<Elem> = if self.is_hermitian() {
            linalg::vec_mat(f, x, &self.matrix).into_iter().map(|e| f.conj_unchecked(e)).collect()
        } else {
            linalg::vec_mat(f, x, &gram_matrix(f, &self.matrix))
        };
        v.iter().any(|&e| e != 0).then_some(v)
    }

    /// The hyperplane `p^⊥`.
    pub fn perp(&self, space: &ProjSpace, p: usize) -> Result<usize> {
        match self.perp_vector(space, p) {
            Some(v) => Ok(space.normalize_point(&v)?),
            None if self.nucleus_point(space) == Ok(p) => Err(Error::NucleusHasNoPerp),
            None => Err(Error::DegenerateForm),
        }
    }

    /// The radical point of the bilinear map of a parabolic form in even
    /// characteristic.
    pub fn nucleus_point(&self, space: &ProjSpace) -> Result<usize> {
        if self.kind.family != Family::Parabolic || space.q() % 2 != 0 {
            return Err(Error::NotParabolicEven);
        }
        let f = space.field();
        let rad = linalg::null_space(f, &gram_matrix(f, &self.matrix), self.kind.m + 1);
        match rad.as_slice() {
            [v] => space.normalize_point(v),
            _ => Err(Error::DegenerateForm),
        }
    }

    /// Classifies `p` relative to the polar space of this form.
    pub fn point_class(&self, space: &ProjSpace, p: usize) -> Result<PointClass> {
        if self.is_zero_at(space, p) {
            return Ok(PointClass::On);
        }
        if self.kind.family != Family::Parabolic {
            return Err(Error::NotApplicable(format!("point classes off a {} space", self.kind.family)));
        }
        if space.q() % 2 == 0 {
            return if self.nucleus_point(space)? == p {
                Ok(PointClass::Nucleus)
            } else {
                Err(Error::NotApplicable("internal/external points need odd q".into()))
            };
        }
        let h = self.perp(space, p)?;
        let meets = space.hyperplane_points(h).iter().filter(|&x| self.is_zero_at(space, x)).count();
        let n = self.kind.m as u32 / 2;
        let q = space.q() as u64;
        if meets as u64 == crate::spectra::q_eps_size(q, n - 1, -1) {
            Ok(PointClass::Internal)
        } else {
            Ok(PointClass::External)
        }
    }

    /// All internal points of a parabolic quadric over a field of odd order.
    pub fn internal_points(&self, space: &ProjSpace) -> Result<PointSet> {
        if self.kind.family != Family::Parabolic || space.q() % 2 == 0 {
            return Err(Error::NotApplicable("internal points need a parabolic quadric with odd q".into()));
        }
        let quadric = self.point_set(space);
        let sizes = space.section_sizes(&quadric);
        let n = self.kind.m as u32 / 2;
        let elliptic = crate::spectra::q_eps_size(space.q() as u64, n - 1, -1);
        let members: Vec<usize> = (0..space.num_points())
            .filter(|&p| !quadric.contains(p))
            .filter(|&p| {
                let h = self.perp(space, p).expect("non-degenerate for odd q");
                sizes[h] as u64 == elliptic
            })
            .collect();
        Ok(PointSet::from_indices(space.num_points(), members))
    }
}

/// A cone with a point or line vertex over a base lying in a carrier flat.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    pub vertex: Flat,
    pub base: PointSet,
    pub carrier: Flat,
}

/// The union of the spans of the vertex with each base point.
pub fn cone(space: &ProjSpace, spec: &ConeSpec) -> Result<PointSet> {
    if spec.vertex.meet(space, &spec.carrier).is_some() {
        return Err(Error::VertexMeetsBase);
    }
    if !spec.base.is_subset(&spec.carrier.points(space)) {
        return Err(Error::NotApplicable("cone base leaves its carrier".into()));
    }
    let mut out = spec.vertex.points(space);
    for b in spec.base.iter() {
        out.union_with(&spec.vertex.join_point(space, b).points(space));
    }
    Ok(out)
}

/// `P·C`: the union of the lines joining `p` to the points of `base`, plus `p`.
pub fn point_cone(space: &ProjSpace, p: usize, base: &PointSet) -> PointSet {
    let mut out = space.empty_set();
    out.insert(p);
    for b in base.iter().filter(|&b| b != p) {
        for x in space.line_points(p, b) {
            out.insert(x);
        }
    }
    out
}

/// Points `V` such that, for every `x ∈ s \ {V}`, the line `Vx` minus `V`
/// lies in `s`.
pub fn cone_vertices(space: &ProjSpace, s: &PointSet) -> Vec<usize> {
    let q = space.q();
    let members: Vec<usize> = s.iter().collect();
    (0..space.num_points())
        .into_par_iter()
        .filter(|&v| {
            let mut per_line: HashMap<usize, usize> = HashMap::new();
            for &x in &members {
                if x != v {
                    *per_line.entry(space.direction_from(v, x)).or_default() += 1;
                }
            }
            per_line.values().all(|&c| c == q)
        })
        .collect()
}

/// Recovers a non-degenerate quadratic form whose zero set is exactly `s`.
pub fn recover_quadratic(space: &ProjSpace, s: &PointSet) -> Option<Form> {
    let f = space.field();
    let n = space.dim() + 1;
    let monomials: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let rows: Vec<Vec<Elem>> = s
        .iter()
        .map(|p| {
            let x = space.point(p);
            monomials.iter().map(|&(i, j)| f.mul(x[i], x[j])).collect()
        })
        .collect();
    let ns = if rows.is_empty() {
        return None;
    } else {
        linalg::null_space(f, &rows, monomials.len())
    };
    let [v] = ns.as_slice() else { return None };
    let mut c = vec![vec![0; n]; n];
    for (&(i, j), &coef) in monomials.iter().zip(v) {
        c[i][j] = coef;
    }
    let family = if space.dim() % 2 == 0 {
        Family::Parabolic
    } else if s.count() as u64 == crate::spectra::classical_size(Family::Hyperbolic, space.dim(), space.q()) {
        Family::Hyperbolic
    } else {
        Family::Elliptic
    };
    let kind = PolarKind::new(family, space.dim(), space.q()).ok()?;
    let form = Form::quadratic(kind, space, c).ok()?;
    (form.point_set(space) == *s).then_some(form)
}

/// Recovers a non-degenerate Hermitian form whose zero set is exactly `s`.
pub fn recover_hermitian(space: &ProjSpace, s: &PointSet) -> Option<Form> {
    let f = space.field();
    f.sqrt_order()?;
    let n = space.dim() + 1;
    // Unknowns: diagonal a_ii, then a_ij and b_ij (standing for conj(a_ij)) for i < j.
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let width = n + 2 * pairs.len();
    let rows: Vec<Vec<Elem>> = s
        .iter()
        .map(|p| {
            let x = space.point(p);
            let cx: Vec<Elem> = x.iter().map(|&e| f.conj_unchecked(e)).collect();
            let mut row: Vec<Elem> = (0..n).map(|i| f.mul(x[i], cx[i])).collect();
            for &(i, j) in &pairs {
                row.push(f.mul(x[i], cx[j]));
            }
            for &(i, j) in &pairs {
                row.push(f.mul(cx[i], x[j]));
            }
            row
        })
        .collect();
    if rows.is_empty() {
        return None;
    }
    let ns = linalg::null_space(f, &rows, width);
    let [v] = ns.as_slice() else { return None };
    let scale = f.recip(*v[..n].iter().find(|&&e| e != 0)?);
    let v: Vec<Elem> = v.iter().map(|&e| f.mul(e, scale)).collect();
    let mut a = vec![vec![0; n]; n];
    for i in 0..n {
        a[i][i] = v[i];
    }
    for (k, &(i, j)) in pairs.iter().enumerate() {
        a[i][j] = v[n + k];
        a[j][i] = v[n + pairs.len() + k];
    }
    let kind = PolarKind::hermitian(space.dim(), space.q()).ok()?;
    let form = Form::hermitian(kind, space, a).ok()?;
    (form.point_set(space) == *s).then_some(form)
}

/// Recovers the form of a classical polar space of the given family.
pub fn recover_form(space: &ProjSpace, family: Family, s: &PointSet) -> Option<Form> {
    let form = match family {
        Family::Hermitian => recover_hermitian(space, s),
        _ => recover_quadratic(space, s),
    }?;
    (form.kind().family == family).then_some(form)
}
