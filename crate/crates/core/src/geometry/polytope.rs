use crate::error::{ensure_dim, Error, Result};
use crate::geometry::point::{dominates_unchecked, Point};
use crate::scalar::{Scalar, FEASIBILITY_TOL, ORTHOGONALITY_TOL};

/// Indices (into `points`) of the frontier: members not strictly dominated by any other
/// member. Exact duplicates collapse onto their first occurrence; output keeps input order.
pub fn frontier_indices<T: Scalar>(points: &[Point<T>]) -> Result<Vec<usize>> {
    let first = points.first().ok_or(Error::EmptyVertexSet)?;
    let dim = first.dim();
    for p in points {
        ensure_dim(dim, p.dim())?;
    }
    let mut keep = Vec::new();
    'outer: for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            if (j < i && y == x) || dominates_unchecked(y.coords(), x.coords()) {
                continue 'outer;
            }
        }
        keep.push(i);
    }
    Ok(keep)
}

pub fn frontier<T: Scalar>(points: &[Point<T>]) -> Result<Vec<Point<T>>> {
    Ok(frontier_indices(points)?.into_iter().map(|i| points[i].clone()).collect())
}

/// The H-description `{x | a^T x <= b, x >= 0}` a polytope was generated from.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexForm<T> {
    pub a: Point<T>,
    pub b: T,
}

impl<T: Scalar> SimplexForm<T> {
    pub fn new(a: Point<T>, b: T) -> Result<Self> {
        if let Some(i) = a.coords().iter().position(|&ai| ai <= T::zero()) {
            return Err(Error::param(format!("simplex weight a[{i}] must be positive")));
        }
        if !(b > T::zero()) || !b.is_finite() {
            return Err(Error::param("simplex budget b must be positive"));
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn contains(&self, x: &Point<T>) -> bool {
        self.a.dot(x) <= self.b + T::lit(FEASIBILITY_TOL)
    }
}

/// `P = conv(E)` for a finite vertex set `E` of the non-negative orthant.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolytope<T> {
    vertices: Vec<Point<T>>,
    dim: usize,
    radius_bound: T,
    frontier: Vec<usize>,
    h_form: Option<SimplexForm<T>>,
}

impl<T: Scalar> VPolytope<T> {
    pub fn new(vertices: Vec<Point<T>>) -> Result<Self> {
        let frontier = frontier_indices(&vertices)?;
        let dim = vertices[0].dim();
        let radius_bound = vertices.iter().map(Point::norm).fold(T::zero(), T::max);
        Ok(Self { vertices, dim, radius_bound, frontier, h_form: None })
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `D`: the largest Euclidean norm over the vertices, hence over all of `conv(E)`.
    pub fn radius_bound(&self) -> T {
        self.radius_bound
    }

    /// Indices into [`Self::vertices`] of the frontier vertices.
    pub fn frontier_indices(&self) -> &[usize] {
        &self.frontier
    }

    pub fn frontier(&self) -> impl Iterator<Item = &Point<T>> + '_ {
        self.frontier.iter().map(move |&i| &self.vertices[i])
    }

    pub fn h_form(&self) -> Option<&SimplexForm<T>> {
        self.h_form.as_ref()
    }

    /// Polytope spanned by a subset of the vertices (given by index, in the given order).
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let vertices = indices
            .iter()
            .map(|&i| {
                self.vertices.get(i).cloned().ok_or_else(|| Error::param(format!("vertex index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices)
    }
}

/// Vertices of `{x | a^T x <= b, x >= 0}`: the origin followed by `(b / a_i) χ_i`.
pub fn simplex_vertices<T: Scalar>(a: &Point<T>, b: T) -> Result<VPolytope<T>> {
    let form = SimplexForm::new(a.clone(), b)?;
    let n = a.dim();
    let mut vertices = Vec::with_capacity(n + 1);
    vertices.push(Point::zeros(n));
    for i in 0..n {
        vertices.push(Point::zeros(n).with_increment(i, b / a[i]));
    }
    let mut poly = VPolytope::new(vertices)?;
    poly.h_form = Some(form);
    Ok(poly)
}

/// The lattice generators `ε = Frontier(E) / l`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepSet<T> {
    pub steps: Vec<Point<T>>,
    pub l: usize,
    /// For each step, the index in `E` of the frontier vertex it was scaled from.
    pub source_indices: Vec<usize>,
}

impl<T: Scalar> StepSet<T> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

pub fn step_set<T: Scalar>(poly: &VPolytope<T>, l: usize) -> Result<StepSet<T>> {
    if l == 0 {
        return Err(Error::param("step count l must be at least 1"));
    }
    let lt = T::from_usize_lossy(l);
    let steps = poly.frontier().map(|v| Point::from_raw(v.coords().iter().map(|&c| c / lt).collect())).collect();
    Ok(StepSet { steps, l, source_indices: poly.frontier_indices().to_vec() })
}

pub fn is_orthogonal_step_set<T: Scalar>(steps: &StepSet<T>) -> bool {
    let tol = T::lit(ORTHOGONALITY_TOL);
    let s = &steps.steps;
    (0..s.len()).all(|i| (i + 1..s.len()).all(|j| s[i].dot(&s[j]) <= tol))
}

/// Optional upper box `0 <= x <= c`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxConstraint<T> {
    upper: Option<Point<T>>,
}

impl<T: Scalar> Default for BoxConstraint<T> {
    fn default() -> Self {
        Self::none()
    }
}

impl<T: Scalar> BoxConstraint<T> {
    pub fn none() -> Self {
        Self { upper: None }
    }

    pub fn upper(c: Point<T>) -> Result<Self> {
        if c.coords().iter().any(|&ci| ci <= T::zero()) {
            return Err(Error::param("box upper bound must be positive in every coordinate"));
        }
        Ok(Self { upper: Some(c) })
    }

    pub fn is_present(&self) -> bool {
        self.upper.is_some()
    }

    pub fn bound(&self) -> Option<&Point<T>> {
        self.upper.as_ref()
    }
}

pub fn within_box<T: Scalar>(x: &Point<T>, c: &BoxConstraint<T>) -> Result<bool> {
    match &c.upper {
        None => Ok(true),
        Some(upper) => {
            ensure_dim(upper.dim(), x.dim())?;
            let tol = T::lit(FEASIBILITY_TOL);
            Ok(x.coords().iter().zip(upper.coords()).all(|(&xi, &ci)| xi <= ci + tol))
        }
    }
}
