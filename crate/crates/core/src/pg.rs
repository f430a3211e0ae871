//! Points, hyperplanes, flats and incidence in PG(m,q).
//!
//! Points are nonzero vectors scaled so that the first nonzero coordinate
//! is 1, indexed in lexicographic order of their coordinates. Hyperplanes
//! are dual vectors under the same normalization and share the index
//! scheme, so the incidence matrix is symmetric.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldTable};
use crate::linalg;
pub use crate::pointset::PointSet;

pub const MAX_POINTS: usize = 1_000_000;
/// Largest space for which the dense incidence matrix is materialized.
pub const MAX_INCIDENCE_POINTS: usize = 1 << 15;
pub const MAX_CODIM2_FLATS: usize = 2_000_000;

/// `(q^k − 1)/(q − 1)`, the number of points of PG(k−1,q).
pub fn gauss1(q: usize, k: u32) -> usize {
    (q.pow(k) - 1) / (q - 1)
}

/// The Gaussian binomial coefficient `[n choose k]_q`.
pub fn gaussian_binomial(q: usize, n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

pub struct ProjSpace {
    m: usize,
    field: Arc<FieldTable>,
    n: usize,
    coords: Vec<Elem>,
    incidence: OnceLock<Vec<PointSet>>,
    pencils: OnceLock<Vec<Vec<u32>>>,
}

impl std::fmt::Debug for ProjSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG({},{})", self.m, self.field.order())
    }
}

impl ProjSpace {
    pub fn new(m: usize, field: Arc<FieldTable>) -> Result<Self> {
        if m == 0 {
            return Err(Error::NotApplicable("projective dimension must be at least 1".into()));
        }
        let q = field.order();
        let n = (q as u128).checked_pow(m as u32 + 1).map(|x| (x - 1) / (q as u128 - 1));
        let n = match n {
            Some(n) if n <= MAX_POINTS as u128 => n as usize,
            _ => return Err(Error::SpaceTooLarge(format!("PG({m},{q}) has more than {MAX_POINTS} points"))),
        };
        let width = m + 1;
        let mut coords = Vec::with_capacity(n * width);
        for lead in (0..=m).rev() {
            let tail = m - lead;
            for t in 0..q.pow(tail as u32) {
                let mut v = vec![0; width];
                v[lead] = 1;
                let mut x = t;
                for i in (lead + 1..=m).rev() {
                    v[i] = (x % q) as Elem;
                    x /= q;
                }
                coords.extend_from_slice(&v);
            }
        }
        debug_assert_eq!(coords.len(), n * width);
        Ok(ProjSpace {
            m,
            field,
            n,
            coords,
            incidence: OnceLock::new(),
            pencils: OnceLock::new(),
        })
    }

    /// Shorthand for building the field and the space together.
    pub fn of(m: usize, q: usize) -> Result<Self> {
        Self::new(m, Arc::new(FieldTable::new(q)?))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.field.order()
    }

    #[inline]
    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<FieldTable> {
        self.field.clone()
    }

    /// Number of points, which is also the number of hyperplanes.
    #[inline]
    pub fn num_points(&self) -> usize {
        self.n
    }

    /// Normalized coordinates of point (or hyperplane) `i`.
    #[inline]
    pub fn point(&self, i: usize) -> &[Elem] {
        let w = self.m + 1;
        &self.coords[i * w..(i + 1) * w]
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::new(self.n)
    }

    pub fn all_points(&self) -> PointSet {
        PointSet::full(self.n)
    }

    fn check_vector(&self, v: &[Elem]) -> Result<()> {
        if v.len() != self.m + 1 {
            return Err(Error::BadLength { expected: self.m + 1, got: v.len() });
        }
        if let Some(&bad) = v.iter().find(|&&x| x as usize >= self.q()) {
            return Err(Error::BadElement(bad as usize));
        }
        Ok(())
    }

    /// Index of the point spanned by `v`.
    pub fn normalize_point(&self, v: &[Elem]) -> Result<usize> {
        self.check_vector(v)?;
        self.index_of(v).ok_or(Error::ZeroVector)
    }

    /// Index of the 1-space spanned by a nonzero, well-formed vector.
    #[inline]
    pub(crate) fn index_of(&self, v: &[Elem]) -> Option<usize> {
        let q = self.q();
        let lead = v.iter().position(|&x| x != 0)?;
        let s = self.field.recip(v[lead]);
        let mut idx = 0usize;
        for &x in &v[lead + 1..] {
            idx = idx * q + self.field.mul(x, s) as usize;
        }
        Some(idx + gauss1(q, (self.m - lead) as u32))
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        linalg::dot(&self.field, a, b)
    }

    /// Whether point `p` lies on hyperplane `h`.
    pub fn incident(&self, h: usize, p: usize) -> bool {
        self.dot(self.point(h), self.point(p)) == 0
    }

    /// Dense incidence rows: row `h` holds the points of hyperplane `h`.
    pub fn incidence(&self) -> Result<&[PointSet]> {
        if self.n > MAX_INCIDENCE_POINTS {
            return Err(Error::SpaceTooLarge(format!(
                "{self:?} exceeds the incidence-matrix guard of {MAX_INCIDENCE_POINTS} points"
            )));
        }
        Ok(self.incidence.get_or_init(|| {
            (0..self.n)
                .into_par_iter()
                .map(|h| PointSet::from_indices(self.n, (0..self.n).filter(|&p| self.incident(h, p))))
                .collect()
        }))
    }

    /// Points of hyperplane `h`.
    pub fn hyperplane_points(&self, h: usize) -> PointSet {
        match self.incidence() {
            Ok(rows) => rows[h].clone(),
            Err(_) => PointSet::from_indices(self.n, (0..self.n).filter(|&p| self.incident(h, p))),
        }
    }

    /// Hyperplanes through point `p`, as a set of hyperplane indices.
    pub fn hyperplanes_through(&self, p: usize) -> PointSet {
        self.hyperplane_points(p)
    }

    /// `|h ∩ s|` for every hyperplane `h`, in index order.
    pub fn section_sizes(&self, s: &PointSet) -> Vec<u32> {
        match self.incidence() {
            Ok(rows) => rows.par_iter().map(|r| r.intersection_count(s) as u32).collect(),
            Err(_) => {
                let members: Vec<usize> = s.iter().collect();
                (0..self.n)
                    .into_par_iter()
                    .map(|h| members.iter().filter(|&&p| self.incident(h, p)).count() as u32)
                    .collect()
            }
        }
    }

    /// Indices on the line through two distinct points, ascending.
    pub fn line_points(&self, p: usize, r: usize) -> Vec<usize> {
        let f = &*self.field;
        let (a, b) = (self.point(p), self.point(r));
        let mut out: Vec<usize> = std::iter::once(p)
            .chain(f.elements().map(|l| {
                let v: Vec<Elem> = a.iter().zip(b).map(|(&x, &y)| f.add(f.mul(l, x), y)).collect();
                self.index_of(&v).expect("distinct points span a line")
            }))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn line_through(&self, p: usize, r: usize) -> Result<PointSet> {
        if p == r {
            return Err(Error::SamePoint);
        }
        Ok(PointSet::from_indices(self.n, self.line_points(p, r)))
    }

    /// Index of the line through `centre` and `x` among lines through
    /// `centre`, encoded as the index of a normalized direction vector.
    pub(crate) fn direction_from(&self, centre: usize, x: usize) -> usize {
        let f = &*self.field;
        let c = self.point(centre);
        let k = c.iter().position(|&v| v != 0).unwrap();
        let xv = self.point(x);
        let t = xv[k];
        let v: Vec<Elem> = xv.iter().zip(c).map(|(&a, &b)| f.sub(a, f.mul(t, b))).collect();
        self.index_of(&v).expect("x differs from centre")
    }

    /// Hyperplane lists of every codimension-2 flat, in the order of
    /// `flats_of_codim(2)`.
    pub fn pencils(&self) -> Result<&[Vec<u32>]> {
        let count = gaussian_binomial(self.q(), self.m as u32 + 1, 2);
        if count > MAX_CODIM2_FLATS as u128 {
            return Err(Error::SpaceTooLarge(format!("{self:?} has {count} codimension-2 flats")));
        }
        Ok(self.pencils.get_or_init(|| {
            self.dual_line_bases()
                .iter()
                .map(|rows| {
                    let mut hs: Vec<u32> = Flat { basis: rows.clone() }
                        .point_indices(self)
                        .into_iter()
                        .map(|h| h as u32)
                        .collect();
                    hs.sort_unstable();
                    hs
                })
                .collect()
        }))
    }

    /// RREF bases of all 2-dimensional subspaces of the dual vector space.
    fn dual_line_bases(&self) -> Vec<Vec<Vec<Elem>>> {
        let w = self.m + 1;
        let q = self.q();
        let mut out = Vec::new();
        for i in 0..w {
            for j in i + 1..w {
                let slots: Vec<(usize, usize)> = (i + 1..w)
                    .filter(|&c| c != j)
                    .map(|c| (0, c))
                    .chain((j + 1..w).map(|c| (1, c)))
                    .collect();
                for mut t in 0..q.pow(slots.len() as u32) {
                    let mut rows = vec![vec![0; w], vec![0; w]];
                    rows[0][i] = 1;
                    rows[1][j] = 1;
                    for &(r, c) in slots.iter().rev() {
                        rows[r][c] = (t % q) as Elem;
                        t /= q;
                    }
                    out.push(rows);
                }
            }
        }
        out
    }

    /// All flats of codimension `c ∈ {1, 2}`; hyperplanes come in index order.
    pub fn flats_of_codim(&self, c: usize) -> Result<Vec<Flat>> {
        match c {
            1 => Ok((0..self.n).map(|h| Flat::hyperplane(self, h)).collect()),
            2 => {
                let count = gaussian_binomial(self.q(), self.m as u32 + 1, 2);
                if count > MAX_CODIM2_FLATS as u128 {
                    return Err(Error::SpaceTooLarge(format!("{self:?} has {count} codimension-2 flats")));
                }
                Ok(self
                    .dual_line_bases()
                    .iter()
                    .map(|rows| Flat::from_equations(self, rows))
                    .collect())
            }
            _ => Err(Error::NotApplicable(format!("codimension {c} enumeration"))),
        }
    }
}

/// A projective subspace, stored by the RREF basis of its vector space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    basis: Vec<Vec<Elem>>,
}

impl Flat {
    pub fn from_vectors(space: &ProjSpace, vectors: &[Vec<Elem>]) -> Result<Self> {
        for v in vectors {
            space.check_vector(v)?;
        }
        let (basis, _) = linalg::rref(space.field(), vectors);
        if basis.is_empty() {
            return Err(Error::ZeroVector);
        }
        Ok(Flat { basis })
    }

    /// The span of the given points.
    pub fn span(space: &ProjSpace, points: &[usize]) -> Result<Self> {
        let vs: Vec<Vec<Elem>> = points.iter().map(|&p| space.point(p).to_vec()).collect();
        Self::from_vectors(space, &vs)
    }

    /// The common zeros of the given dual vectors.
    pub fn from_equations(space: &ProjSpace, eqs: &[Vec<Elem>]) -> Self {
        Flat {
            basis: linalg::rref(space.field(), &linalg::null_space(space.field(), eqs, space.dim() + 1)).0,
        }
    }

    pub fn hyperplane(space: &ProjSpace, h: usize) -> Self {
        Self::from_equations(space, &[space.point(h).to_vec()])
    }

    pub fn whole(space: &ProjSpace) -> Self {
        Flat { basis: linalg::identity(space.dim() + 1) }
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    /// Dual vectors cutting out this flat.
    pub fn equations(&self, space: &ProjSpace) -> Vec<Vec<Elem>> {
        linalg::null_space(space.field(), &self.basis, space.dim() + 1)
    }

    pub fn contains_vector(&self, space: &ProjSpace, v: &[Elem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        linalg::rank(space.field(), &rows) == self.basis.len()
    }

    pub fn contains_point(&self, space: &ProjSpace, p: usize) -> bool {
        self.contains_vector(space, space.point(p))
    }

    pub fn contains_flat(&self, space: &ProjSpace, other: &Flat) -> bool {
        other.basis.iter().all(|v| self.contains_vector(space, v))
    }

    fn point_indices(&self, space: &ProjSpace) -> Vec<usize> {
        let f = space.field();
        let k = self.basis.len();
        let w = space.dim() + 1;
        let q = f.order();
        let mut out = Vec::with_capacity(gauss1(q, k as u32));
        for lead in 0..k {
            for t in 0..q.pow((k - lead - 1) as u32) {
                let mut c = vec![0; k];
                c[lead] = 1;
                let mut x = t;
                for i in (lead + 1..k).rev() {
                    c[i] = (x % q) as Elem;
                    x /= q;
                }
                let v = linalg::combine(f, &c, &self.basis, w);
                out.push(space.index_of(&v).expect("independent basis"));
            }
        }
        out
    }

    pub fn points(&self, space: &ProjSpace) -> PointSet {
        PointSet::from_indices(space.num_points(), self.point_indices(space))
    }

    pub fn join(&self, space: &ProjSpace, other: &Flat) -> Flat {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Flat { basis: linalg::rref(space.field(), &rows).0 }
    }

    pub fn join_point(&self, space: &ProjSpace, p: usize) -> Flat {
        let mut rows = self.basis.clone();
        rows.push(space.point(p).to_vec());
        Flat { basis: linalg::rref(space.field(), &rows).0 }
    }

    /// Intersection, or `None` when it is empty.
    pub fn meet(&self, space: &ProjSpace, other: &Flat) -> Option<Flat> {
        let mut eqs = self.equations(space);
        eqs.extend(other.equations(space));
        let basis = linalg::rref(space.field(), &linalg::null_space(space.field(), &eqs, space.dim() + 1)).0;
        (!basis.is_empty()).then_some(Flat { basis })
    }

    /// Hyperplanes containing this flat, ascending by index.
    pub fn hyperplanes_containing(&self, space: &ProjSpace) -> Vec<usize> {
        let eqs = self.equations(space);
        if eqs.is_empty() {
            return Vec::new();
        }
        let mut hs = Flat { basis: linalg::rref(space.field(), &eqs).0 }.point_indices(space);
        hs.sort_unstable();
        hs
    }
}

/// A flat coordinatized as a projective space of its own dimension.
pub struct SubGeometry {
    pub flat: Flat,
    pub space: ProjSpace,
    to_ambient: Vec<usize>,
    from_ambient: HashMap<usize, usize>,
    ambient_points: usize,
}

impl SubGeometry {
    pub fn new(ambient: &ProjSpace, flat: &Flat) -> Result<Self> {
        let space = ProjSpace::new(flat.dim(), ambient.field_arc())?;
        let w = ambient.dim() + 1;
        let to_ambient: Vec<usize> = (0..space.num_points())
            .map(|i| {
                let v = linalg::combine(ambient.field(), space.point(i), flat.basis(), w);
                ambient.index_of(&v).expect("independent basis")
            })
            .collect();
        let from_ambient = to_ambient.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        Ok(SubGeometry {
            flat: flat.clone(),
            space,
            to_ambient,
            from_ambient,
            ambient_points: ambient.num_points(),
        })
    }

    pub fn to_ambient(&self, i: usize) -> usize {
        self.to_ambient[i]
    }

    pub fn from_ambient(&self, p: usize) -> Option<usize> {
        self.from_ambient.get(&p).copied()
    }

    /// The part of an ambient set lying in the flat, in sub-coordinates.
    pub fn restrict(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(
            self.space.num_points(),
            self.to_ambient.iter().enumerate().filter(|(_, &a)| s.contains(a)).map(|(i, _)| i),
        )
    }

    /// An ambient set from a set in sub-coordinates.
    pub fn lift(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(self.ambient_points, s.iter().map(|i| self.to_ambient[i]))
    }

    /// A flat of the sub-geometry, expressed in ambient coordinates.
    pub fn lift_flat(&self, ambient: &ProjSpace, f: &Flat) -> Flat {
        let w = ambient.dim() + 1;
        let vs: Vec<Vec<Elem>> = f
            .basis()
            .iter()
            .map(|c| linalg::combine(ambient.field(), c, self.flat.basis(), w))
            .collect();
        Flat::from_vectors(ambient, &vs).expect("independent basis")
    }

    /// A sub-flat given in ambient terms, re-expressed in sub-coordinates.
    pub fn restrict_flat(&self, ambient: &ProjSpace, f: &Flat) -> Result<Flat> {
        let pts: Vec<usize> = f
            .points(ambient)
            .iter()
            .map(|p| self.from_ambient(p).ok_or(Error::NotApplicable("flat leaves the sub-geometry".into())))
            .collect::<Result<_>>()?;
        Flat::span(&self.space, &pts)
    }
}
