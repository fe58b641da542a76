//! Apartment segments, hyperbolic axes, and reflection checks.
//!
//! Everything is ball-relative: full apartments are infinite, so the tree
//! layer only ever sees geodesic segments. The standard apartment segment is
//! the path through the diagonal lattice classes (a, 0).

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::tree::{distance, Ball, Vertex, VertexAction};

/// An ordered geodesic path of alternating-type vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApartmentSegment {
    vertices: Vec<Vertex>,
}

impl ApartmentSegment {
    /// Validates adjacency of consecutive vertices and the geodesic
    /// condition (no backtracking).
    pub fn from_path(vertices: Vec<Vertex>) -> Result<ApartmentSegment> {
        if vertices.is_empty() {
            return Err(Error::BadInput("empty apartment segment".into()));
        }
        for w in vertices.windows(2) {
            if distance(&w[0], &w[1]) != 1 {
                return Err(Error::BadInput(format!(
                    "segment vertices {} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        let n = vertices.len();
        if distance(&vertices[0], &vertices[n - 1]) as usize != n - 1 {
            return Err(Error::BadInput("segment path backtracks".into()));
        }
        Ok(ApartmentSegment { vertices })
    }

    /// The standard apartment within radius r: vertices (a, 0), a in
    /// [-r, r].
    pub fn sigma0(p: u64, r: u32) -> ApartmentSegment {
        let r = r as i64;
        ApartmentSegment {
            vertices: (-r..=r).map(|a| Vertex::on_sigma0(p, a)).collect(),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.vertices.contains(v)
    }

    pub fn position(&self, v: &Vertex) -> Option<usize> {
        self.vertices.iter().position(|u| u == v)
    }

    /// Image under a matrix action, vertexwise.
    pub fn apply<A: VertexAction>(&self, g: &A) -> Result<ApartmentSegment> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| g.apply(v))
            .collect::<Result<Vec<_>>>()?;
        ApartmentSegment::from_path(vertices)
    }
}

/// The translation behaviour of `g` on a segment: `Some(s)` when g shifts
/// every vertex with in-segment image by the constant index offset s != 0
/// and displaces every vertex by |s|.
pub fn translation_shift<A: VertexAction>(g: &A, seg: &ApartmentSegment) -> Result<Option<i64>> {
    let mut shift: Option<i64> = None;
    for (i, v) in seg.vertices().iter().enumerate() {
        let gv = g.apply(v)?;
        if let Some(j) = seg.position(&gv) {
            let s = j as i64 - i as i64;
            match shift {
                None => shift = Some(s),
                Some(prev) if prev != s => return Ok(None),
                _ => {}
            }
        }
    }
    let Some(s) = shift else { return Ok(None) };
    if s == 0 {
        return Ok(None);
    }
    // Displacement consistency for every vertex, including those whose
    // image leaves the segment.
    for v in seg.vertices() {
        if distance(v, &g.apply(v)?) != s.unsigned_abs() {
            return Ok(None);
        }
    }
    Ok(Some(s))
}

/// Reflection check: g maps the segment onto itself with reversed
/// orientation (so the center vertex of the odd-length segment is fixed).
/// Type preservation comes from the valuation-0 determinant required by the
/// action itself.
pub fn is_reflection_on<A: VertexAction>(g: &A, seg: &ApartmentSegment) -> Result<bool> {
    let n = seg.len();
    for (i, v) in seg.vertices().iter().enumerate() {
        if g.apply(v)? != seg.vertices()[n - 1 - i] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Locate a reflection that need not be centered on the segment: returns the
/// fixed index c such that g maps index i to 2c - i whenever both are in
/// range, requiring at least one fixed vertex inside.
pub fn reflection_center<A: VertexAction>(
    g: &A,
    seg: &ApartmentSegment,
) -> Result<Option<usize>> {
    let mut center: Option<i64> = None;
    let mut any_in_range = false;
    for (i, v) in seg.vertices().iter().enumerate() {
        let gv = g.apply(v)?;
        if let Some(j) = seg.position(&gv) {
            any_in_range = true;
            let two_c = i as i64 + j as i64;
            match center {
                None => center = Some(two_c),
                Some(prev) if prev != two_c => return Ok(None),
                _ => {}
            }
        }
    }
    if !any_in_range {
        return Ok(None);
    }
    let two_c = center.unwrap();
    if two_c % 2 != 0 {
        // An edge-midpoint reflection; not type-preserving, cannot happen
        // for valuation-0 determinants.
        return Ok(None);
    }
    let c = two_c / 2;
    if c < 0 || c as usize >= seg.len() {
        return Ok(None);
    }
    // The center really is fixed.
    if g.apply(&seg.vertices()[c as usize])? != seg.vertices()[c as usize] {
        return Ok(None);
    }
    Ok(Some(c as usize))
}

/// The axis of a hyperbolic matrix within a ball: the displacement-
/// minimizing vertex set, ordered as a path, together with the (even)
/// translation length.
pub fn axis<A: VertexAction>(g: &A, ball: &Ball) -> Result<(ApartmentSegment, u64)> {
    let mut displacement = Vec::with_capacity(ball.vertex_count());
    for v in &ball.vertices {
        displacement.push(distance(v, &g.apply(v)?));
    }
    let min = *displacement.iter().min().expect("nonempty ball");
    if min == 0 {
        return Err(Error::NotHyperbolic(
            "minimum displacement on the ball is 0 (elliptic element)".into(),
        ));
    }
    let on_axis: Vec<Vertex> = ball
        .vertices
        .iter()
        .zip(&displacement)
        .filter(|(_, &d)| d == min)
        .map(|(v, _)| v.clone())
        .collect();
    if on_axis.len() < 2 {
        return Err(Error::NotHyperbolic(
            "displacement-minimizing set is a single vertex; the ball is too small or the axis misses it".into(),
        ));
    }
    // Order the set as a path by walking from an endpoint (a vertex with a
    // single neighbor inside the set).
    let degree = |v: &Vertex| -> usize {
        on_axis.iter().filter(|u| distance(u, v) == 1).count()
    };
    let endpoints: Vec<&Vertex> = on_axis.iter().filter(|v| degree(v) == 1).collect();
    if endpoints.len() != 2 {
        return Err(Error::NotHyperbolic(
            "displacement-minimizing set is not a path; the ball truncates the axis inconsistently".into(),
        ));
    }
    let mut ordered = vec![endpoints
        .into_iter()
        .min_by_key(|v| (*v).clone())
        .unwrap()
        .clone()];
    while ordered.len() < on_axis.len() {
        let last = ordered.last().unwrap();
        let next = on_axis
            .iter()
            .find(|v| distance(v, last) == 1 && !ordered.contains(v))
            .ok_or_else(|| Error::NotHyperbolic("axis set is not connected in the ball".into()))?;
        ordered.push(next.clone());
    }
    let seg = ApartmentSegment::from_path(ordered)
        .map_err(|_| Error::NotHyperbolic("axis set does not form a geodesic".into()))?;
    // g must translate the path by the minimum displacement.
    match translation_shift(g, &seg)? {
        Some(s) if s.unsigned_abs() == min => Ok((seg, min)),
        _ => Err(Error::NotHyperbolic(
            "candidate axis is not translated consistently; enlarge the ball".into(),
        )),
    }
}

/// Convenience: the diagonal-translate matrix diag(lambda, 1/lambda).
pub fn diagonal_matrix(lambda: &BigRational) -> Mat2<BigRational> {
    Mat2::new(
        lambda.clone(),
        BigRational::from_integer(0.into()),
        BigRational::from_integer(0.into()),
        lambda.recip(),
    )
}
