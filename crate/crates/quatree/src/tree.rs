//! The Bruhat-Tits tree of SL2(Qp): homothety classes of Z_p-lattices in
//! Qp^2, their canonical forms, the tree metric, the matrix action, and
//! finite balls.
//!
//! A vertex is the class of the lattice with column basis [[p^a, c], [0, 1]]
//! where c is reduced mod p^a. The digits of c may sit at negative exponents
//! (classes below the standard apartment), so c is stored as a pair
//! (c_val, c_unit) meaning c = c_unit * p^c_val with p not dividing c_unit.
//! The canonical form is unique per class, which makes vertex equality a
//! plain structural comparison.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, pk, vp};
use crate::mat2::Mat2;
use crate::padic::Padic;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    p: u64,
    a: i64,
    /// c = c_unit * p^c_val, 0 <= c < p^a, p does not divide c_unit;
    /// c_unit = 0 encodes c = 0 (with c_val = 0).
    c_val: i64,
    c_unit: BigInt,
}

impl Vertex {
    pub fn base(p: u64) -> Vertex {
        Vertex::on_sigma0(p, 0)
    }

    /// The standard-apartment vertex (a, 0).
    pub fn on_sigma0(p: u64, a: i64) -> Vertex {
        Vertex {
            p,
            a,
            c_val: 0,
            c_unit: BigInt::zero(),
        }
    }

    /// Canonical vertex with the given `a` and c reduced mod p^a.
    pub fn new_reduced(p: u64, a: i64, c: &BigRational) -> Vertex {
        match vp(c, p) {
            None => Vertex::on_sigma0(p, a),
            Some(v) if v >= a => Vertex::on_sigma0(p, a),
            Some(v) => {
                let width = u32::try_from(a - v).expect("digit window fits u32");
                let unit = exact::residue(&exact::unit_part(c, p), p, width);
                debug_assert!(!unit.is_zero());
                Vertex {
                    p,
                    a,
                    c_val: v,
                    c_unit: unit,
                }
            }
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn c_rational(&self) -> BigRational {
        if self.c_unit.is_zero() {
            return BigRational::zero();
        }
        let u = BigRational::from(self.c_unit.clone());
        let pb = BigRational::from(BigInt::from(self.p));
        if self.c_val >= 0 {
            u * pb.pow(self.c_val as i32)
        } else {
            u / pb.pow((-self.c_val) as i32)
        }
    }

    /// Type of a vertex: a mod 2 (preserved by determinant-valuation-0
    /// matrices).
    pub fn vertex_type(&self) -> u8 {
        self.a.rem_euclid(2) as u8
    }

    /// Column basis [[p^a, c], [0, 1]] of the canonical lattice
    /// representative.
    pub fn matrix(&self) -> Mat2<BigRational> {
        Mat2::new(
            power_rational(self.p, self.a),
            self.c_rational(),
            BigRational::zero(),
            BigRational::one(),
        )
    }

    /// The p + 1 adjacent lattice classes: p classes one level down the
    /// standard filtration, (a+1, c + d p^a), and one up, (a-1, c mod
    /// p^(a-1)).
    pub fn neighbors(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.p as usize + 1);
        let pa = power_rational(self.p, self.a);
        for d in 0..self.p {
            let c = self.c_rational() + BigRational::from(BigInt::from(d)) * &pa;
            out.push(Vertex::new_reduced(self.p, self.a + 1, &c));
        }
        out.push(Vertex::new_reduced(self.p, self.a - 1, &self.c_rational()));
        out
    }

    /// Base-p digit string of c (lowest exponent last), with a point when
    /// digits sit at negative exponents.
    pub fn label(&self) -> String {
        if self.c_unit.is_zero() {
            return format!("({}, 0)", self.a);
        }
        let p = BigInt::from(self.p);
        let width = (self.a - self.c_val) as usize;
        let mut digits = Vec::with_capacity(width);
        let mut u = self.c_unit.clone();
        for _ in 0..width {
            let (q, r) = u.div_rem(&p);
            digits.push(r.to_string());
            u = q;
        }
        // digits[i] is the coefficient of p^(c_val + i).
        let top = self.a - 1; // highest stored exponent
        let digit_at = |e: i64| -> &str {
            if e < self.c_val || e > top {
                "0"
            } else {
                &digits[(e - self.c_val) as usize]
            }
        };
        let mut s = String::new();
        for e in (0..=top.max(0)).rev() {
            s.push_str(digit_at(e));
        }
        if self.c_val < 0 {
            s.push('.');
            for e in (self.c_val..0).rev() {
                s.push_str(digit_at(e));
            }
        }
        format!("({}, {})", self.a, s)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn power_rational(p: u64, e: i64) -> BigRational {
    let pb = BigRational::from(BigInt::from(p));
    pb.pow(e as i32)
}

/// Tree distance: |difference of elementary-divisor valuations| of
/// M_u^-1 M_v, evaluated in closed form on canonical representatives.
pub fn distance(u: &Vertex, v: &Vertex) -> u64 {
    assert_eq!(u.p, v.p, "vertices from different trees");
    let ashift = v.a - u.a;
    let dc = v.c_rational() - u.c_rational();
    let vc = vp(&dc, u.p);
    let mut m = 0i64.min(ashift);
    if let Some(vc) = vc {
        m = m.min(vc - u.a);
    }
    (ashift - 2 * m) as u64
}

/// Canonical vertex of the lattice spanned by the columns of an invertible
/// rational matrix: column-reduce over Z_p, scale to the normal form, and
/// reduce c.
pub fn vertex_from_rational_matrix(m: &Mat2<BigRational>, p: u64) -> Result<Vertex> {
    if m.det().is_zero() {
        return Err(Error::InvalidMatrix("lattice basis must be invertible".into()));
    }
    // Pivot on the bottom-row entry of smaller valuation.
    let (c1, c2) = ((&m.a, &m.c), (&m.b, &m.d));
    let v21 = vp(c1.1, p);
    let v22 = vp(c2.1, p);
    let swap = match (v21, v22) {
        (None, None) => unreachable!("zero bottom row contradicts invertibility"),
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a < b,
    };
    let ((x1, x2), (w1, w2)) = if swap { (c2, c1) } else { (c1, c2) };
    // Clear the bottom of the first column: col1 -= (x2/w2) col2.
    let factor = x2 / w2;
    let top = x1 - &factor * w1;
    debug_assert!(!top.is_zero(), "cleared column cannot vanish");
    let s = vp(&top, p).unwrap();
    let t = vp(w2, p).unwrap();
    let a = s - t;
    let c = w1 / w2; // includes the homothety scaling by p^-t
    Ok(Vertex::new_reduced(p, a, &c))
}

/// Same normal form for a p-adic matrix; errors when the stored digits
/// cannot decide a pivot or fill in the c digits.
pub fn vertex_from_padic_matrix(m: &Mat2<Padic>) -> Result<Vertex> {
    let p = m.prime();
    let pick = |za: &Padic, zb: &Padic| -> Result<bool> {
        // Returns true when the second column must be the pivot.
        match (za.val(), zb.val()) {
            (None, None) => Err(Error::InsufficientPrecision(
                "bottom row is zero to precision".into(),
            )),
            (Some(va), None) => {
                if zb.known_to() > va {
                    Ok(false)
                } else {
                    Err(Error::InsufficientPrecision("cannot order pivots".into()))
                }
            }
            (None, Some(vb)) => {
                if za.known_to() > vb {
                    Ok(true)
                } else {
                    Err(Error::InsufficientPrecision("cannot order pivots".into()))
                }
            }
            (Some(va), Some(vb)) => Ok(vb <= va),
        }
    };
    let second_is_pivot = pick(&m.c, &m.d)?;
    let ((x1, x2), (w1, w2)) = if second_is_pivot {
        ((&m.a, &m.c), (&m.b, &m.d))
    } else {
        ((&m.b, &m.d), (&m.a, &m.c))
    };
    let factor = x2.div(w2)?;
    let top = x1 - &(&factor * w1);
    let s = top.val().ok_or_else(|| {
        Error::InsufficientPrecision("pivot column vanishes to precision".into())
    })?;
    let t = w2.val().expect("pivot is a unit");
    let a = s - t;
    let c = w1.div(w2)?;
    // The digits of c must be known mod p^a.
    if c.known_to() < a {
        return Err(Error::InsufficientPrecision(format!(
            "c known to O(p^{}), need mod p^{a}",
            c.known_to()
        )));
    }
    match c.val() {
        None => Ok(Vertex::on_sigma0(p, a)),
        Some(v) if v >= a => Ok(Vertex {
            p,
            a,
            c_val: 0,
            c_unit: BigInt::zero(),
        }),
        Some(v) => {
            let width = u32::try_from(a - v).unwrap();
            let unit = c.unit_digits().unwrap().mod_floor(&pk(p, width));
            Ok(Vertex {
                p,
                a,
                c_val: v,
                c_unit: unit,
            })
        }
    }
}

fn check_unit_det_rational(g: &Mat2<BigRational>, p: u64) -> Result<()> {
    let det = g.det();
    if det.is_zero() {
        return Err(Error::InvalidMatrix("singular matrix cannot act".into()));
    }
    if vp(&det, p) != Some(0) {
        return Err(Error::InvalidMatrix(format!(
            "determinant must have valuation 0, got {:?}",
            vp(&det, p)
        )));
    }
    Ok(())
}

/// Action of a rational matrix with determinant of valuation 0 on a vertex:
/// exact, no precision involved.
pub fn act_rational(g: &Mat2<BigRational>, v: &Vertex) -> Result<Vertex> {
    check_unit_det_rational(g, v.p)?;
    vertex_from_rational_matrix(&g.mul(&v.matrix()), v.p)
}

/// Action of a p-adic matrix; the vertex representative is embedded at the
/// matrix's precision.
pub fn act_padic(g: &Mat2<Padic>, v: &Vertex) -> Result<Vertex> {
    let det = g.det();
    match det.val() {
        Some(0) => {}
        Some(v) => {
            return Err(Error::InvalidMatrix(format!(
                "determinant must have valuation 0, got {v}"
            )))
        }
        None => {
            return Err(Error::InsufficientPrecision(
                "determinant is zero to precision".into(),
            ))
        }
    }
    let p = g.prime();
    let prec_needed = g
        .entries()
        .iter()
        .map(|e| e.known_to())
        .max()
        .unwrap_or(4)
        .max(1) as u32
        + v.a.unsigned_abs() as u32
        + 4;
    let mv = v.matrix().embed(p, prec_needed);
    vertex_from_padic_matrix(&g.mul(&mv))
}

/// Either kind of acting matrix; lets tree-level code stay agnostic.
pub trait VertexAction {
    fn apply(&self, v: &Vertex) -> Result<Vertex>;
}

impl VertexAction for Mat2<BigRational> {
    fn apply(&self, v: &Vertex) -> Result<Vertex> {
        act_rational(self, v)
    }
}

impl VertexAction for Mat2<Padic> {
    fn apply(&self, v: &Vertex) -> Result<Vertex> {
        act_padic(self, v)
    }
}

/// An edge of the tree: one endpoint of each type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chamber {
    v0: Vertex,
    v1: Vertex,
}

impl Chamber {
    pub fn new(u: Vertex, v: Vertex) -> Result<Chamber> {
        if distance(&u, &v) != 1 {
            return Err(Error::BadInput("chamber endpoints must be adjacent".into()));
        }
        let (v0, v1) = if u.vertex_type() == 0 { (u, v) } else { (v, u) };
        debug_assert_eq!(v0.vertex_type(), 0);
        debug_assert_eq!(v1.vertex_type(), 1);
        Ok(Chamber { v0, v1 })
    }

    /// The fundamental chamber {(0,0), (1,0)}.
    pub fn fundamental(p: u64) -> Chamber {
        Chamber {
            v0: Vertex::base(p),
            v1: Vertex::on_sigma0(p, 1),
        }
    }

    pub fn type0(&self) -> &Vertex {
        &self.v0
    }

    pub fn type1(&self) -> &Vertex {
        &self.v1
    }

    pub fn endpoint(&self, t: u8) -> &Vertex {
        if t == 0 {
            &self.v0
        } else {
            &self.v1
        }
    }

    pub fn apply<A: VertexAction>(&self, g: &A) -> Result<Chamber> {
        Chamber::new(g.apply(&self.v0)?, g.apply(&self.v1)?)
    }
}

impl fmt::Display for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.v0, self.v1)
    }
}

/// A BFS-enumerated ball around a base vertex, with adjacency restricted to
/// the ball. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Ball {
    pub p: u64,
    pub base: Vertex,
    pub radius: u32,
    pub vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    pub adj: Vec<Vec<usize>>,
    pub dist_from_base: Vec<u32>,
}

impl Ball {
    pub fn enumerate(base: &Vertex, radius: u32) -> Ball {
        let p = base.p;
        let mut vertices = vec![base.clone()];
        let mut index = HashMap::from([(base.clone(), 0usize)]);
        let mut dist = vec![0u32];
        let mut frontier = vec![0usize];
        for layer in 1..=radius {
            let mut next = Vec::new();
            for &i in &frontier {
                for n in vertices[i].neighbors() {
                    if !index.contains_key(&n) {
                        index.insert(n.clone(), vertices.len());
                        vertices.push(n);
                        dist.push(layer);
                        next.push(vertices.len() - 1);
                    }
                }
            }
            frontier = next;
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        for (i, v) in vertices.iter().enumerate() {
            for n in v.neighbors() {
                if let Some(&j) = index.get(&n) {
                    adj[i].push(j);
                }
            }
        }
        Ball {
            p,
            base: base.clone(),
            radius,
            vertices,
            index,
            adj,
            dist_from_base: dist,
        }
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.index.contains_key(v)
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// All edges with both endpoints inside the ball, sorted for
    /// deterministic reports.
    pub fn chambers(&self) -> Vec<Chamber> {
        let mut out = Vec::new();
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    out.push(
                        Chamber::new(self.vertices[i].clone(), self.vertices[j].clone())
                            .expect("adjacency implies a chamber"),
                    );
                }
            }
        }
        out.sort();
        out
    }

    /// DOT export with type-colored vertices and an optional orbit coloring.
    pub fn to_dot(&self, orbit_of: Option<&HashMap<Vertex, usize>>) -> String {
        let palette = [
            "lightblue", "lightsalmon", "palegreen", "plum", "khaki", "lightpink", "aquamarine",
            "wheat",
        ];
        let mut s = String::from("graph ball {\n  node [style=filled];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let color = match orbit_of.and_then(|m| m.get(v)) {
                Some(&o) => palette[o % palette.len()],
                None => {
                    if v.vertex_type() == 0 {
                        "lightblue"
                    } else {
                        "lightyellow"
                    }
                }
            };
            s.push_str(&format!(
                "  v{} [label=\"{}\", fillcolor={}];\n",
                i,
                v.label(),
                color
            ));
        }
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    s.push_str(&format!("  v{i} -- v{j};\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// 1 + (p+1)(p^r - 1)/(p - 1), the vertex count of a radius-r ball.
pub fn ball_vertex_count(p: u64, r: u32) -> u64 {
    if r == 0 {
        return 1;
    }
    1 + (p + 1) * (p.pow(r) - 1) / (p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn canonical_form_basics() {
        let m = Mat2::<BigRational>::identity();
        assert_eq!(vertex_from_rational_matrix(&m, 3).unwrap(), Vertex::base(3));
        let d = Mat2::new(rat(3), rat(0), rat(0), rat(1));
        assert_eq!(
            vertex_from_rational_matrix(&d, 3).unwrap(),
            Vertex::on_sigma0(3, 1)
        );
        // Homothety invariance: scaling the basis does not move the class.
        let scaled = Mat2::new(rat(9), rat(0), rat(0), rat(9));
        assert_eq!(
            vertex_from_rational_matrix(&scaled, 3).unwrap(),
            Vertex::base(3)
        );
    }

    #[test]
    fn canonical_form_independent_of_basis() {
        // [[1, 1], [0, 3]] spans the same lattice as [[3, 1], [0, 1]]
        // after column operations; both must canonicalize identically.
        let m1 = Mat2::new(rat(1), rat(1), rat(0), rat(3));
        let m2 = Mat2::new(rat(1), rat(4), rat(0), rat(3));
        let v1 = vertex_from_rational_matrix(&m1, 3).unwrap();
        let v2 = vertex_from_rational_matrix(&m2, 3).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(distance(&v1, &Vertex::base(3)), 1);
    }

    #[test]
    fn distance_examples() {
        let b = Vertex::base(3);
        assert_eq!(distance(&b, &b), 0);
        for n in -4i64..=4 {
            assert_eq!(distance(&b, &Vertex::on_sigma0(3, n)), n.unsigned_abs());
        }
        let v = Vertex::new_reduced(3, 1, &rat(1));
        assert_eq!(distance(&b, &v), 1);
        let w = Vertex::new_reduced(3, 1, &rat(0));
        assert_eq!(distance(&v, &w), 2);
        // Distance parity matches type difference.
        assert_eq!(distance(&b, &v) % 2, 1);
    }

    #[test]
    fn neighbors_of_base_p3() {
        let b = Vertex::base(3);
        let nb = b.neighbors();
        assert_eq!(nb.len(), 4);
        let expect = [
            Vertex::new_reduced(3, 1, &rat(0)),
            Vertex::new_reduced(3, 1, &rat(1)),
            Vertex::new_reduced(3, 1, &rat(2)),
            Vertex::on_sigma0(3, -1),
        ];
        for e in &expect {
            assert!(nb.contains(e), "missing {e}");
        }
        for n in &nb {
            assert_eq!(distance(&b, n), 1);
            assert_eq!(n.vertex_type(), 1);
        }
    }

    #[test]
    fn neighbor_relation_is_symmetric_on_ball() {
        for p in [3u64, 5] {
            let ball = Ball::enumerate(&Vertex::base(p), 4);
            for (i, v) in ball.vertices.iter().enumerate() {
                for n in v.neighbors() {
                    if let Some(j) = ball.index_of(&n) {
                        assert!(
                            ball.vertices[j].neighbors().contains(v),
                            "asymmetric edge {v} -- {n} (p={p}, i={i})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ball_counts() {
        assert_eq!(Ball::enumerate(&Vertex::base(3), 0).vertex_count(), 1);
        let b = Ball::enumerate(&Vertex::base(3), 2);
        assert_eq!(b.vertex_count(), 17); // 1 + 4 * (9 - 1) / 2
        assert_eq!(ball_vertex_count(3, 2), 17);
        for p in [3u64, 5] {
            for r in 0..=3 {
                assert_eq!(
                    Ball::enumerate(&Vertex::base(p), r).vertex_count() as u64,
                    ball_vertex_count(p, r)
                );
            }
        }
        // Chambers of a tree ball: vertex count - 1.
        assert_eq!(b.chambers().len(), 16);
    }

    #[test]
    fn distance_matches_bfs_on_ball() {
        let ball = Ball::enumerate(&Vertex::base(3), 4);
        // BFS oracle from every vertex, restricted to ball adjacency, checks
        // the closed-form distance (only for pairs whose geodesic stays in
        // the ball: guaranteed when d(base,u) + d(base,v) <= radius... use
        // the ball's own distances from base for the guard).
        let n = ball.vertex_count();
        for s in 0..n {
            let mut dist = vec![u32::MAX; n];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for &j in &ball.adj[i] {
                    if dist[j] == u32::MAX {
                        dist[j] = dist[i] + 1;
                        queue.push_back(j);
                    }
                }
            }
            for t in 0..n {
                // Geodesics between ball vertices stay inside the ball, so
                // the restricted BFS is exact for every pair.
                let exact = distance(&ball.vertices[s], &ball.vertices[t]);
                assert_eq!(dist[t] as u64, exact, "s={s} t={t}");
            }
        }
    }

    #[test]
    fn action_examples() {
        let b = Vertex::base(3);
        let id = Mat2::<BigRational>::identity();
        assert_eq!(act_rational(&id, &b).unwrap(), b);

        // diag(1/3, 3) translates the standard apartment by 2 v_p(lambda).
        let t = Mat2::new(ratio(1, 3), rat(0), rat(0), rat(3));
        for a in -2i64..=2 {
            assert_eq!(
                act_rational(&t, &Vertex::on_sigma0(3, a)).unwrap(),
                Vertex::on_sigma0(3, a - 2)
            );
        }

        // [[0,-1],[1,0]] reverses the standard apartment around the base.
        let w = Mat2::parse("0,-1;1,0").unwrap();
        for a in -3i64..=3 {
            assert_eq!(
                act_rational(&w, &Vertex::on_sigma0(3, a)).unwrap(),
                Vertex::on_sigma0(3, -a)
            );
        }
    }

    #[test]
    fn action_is_isometric_and_composes() {
        let g = Mat2::parse("2,3;1,2").unwrap();
        let h = Mat2::parse("1,1;0,1").unwrap();
        let ball = Ball::enumerate(&Vertex::base(5), 3);
        let gh = g.mul(&h);
        for u in ball.vertices.iter().take(30) {
            for v in ball.vertices.iter().take(10) {
                assert_eq!(
                    distance(
                        &act_rational(&g, u).unwrap(),
                        &act_rational(&g, v).unwrap()
                    ),
                    distance(u, v)
                );
            }
            assert_eq!(
                act_rational(&gh, u).unwrap(),
                act_rational(&g, &act_rational(&h, u).unwrap()).unwrap()
            );
            // Type preservation for valuation-0 determinants.
            assert_eq!(
                act_rational(&g, u).unwrap().vertex_type(),
                u.vertex_type()
            );
        }
    }

    #[test]
    fn action_rejects_bad_determinants() {
        let b = Vertex::base(3);
        let m = Mat2::new(rat(3), rat(0), rat(0), rat(1));
        assert!(act_rational(&m, &b).is_err()); // det valuation 1
        let z = Mat2::new(rat(1), rat(1), rat(1), rat(1));
        assert!(act_rational(&z, &b).is_err()); // singular
    }

    #[test]
    fn padic_action_agrees_with_rational() {
        let g = Mat2::parse("2,3;1,2").unwrap();
        let gp = g.embed(3, 12);
        let ball = Ball::enumerate(&Vertex::base(3), 3);
        for v in &ball.vertices {
            assert_eq!(
                act_padic(&gp, v).unwrap(),
                act_rational(&g, v).unwrap(),
                "diverged at {v}"
            );
        }
    }

    #[test]
    fn padic_action_low_precision_errors() {
        // Acting deep with one digit of precision must fail loudly.
        let g = Mat2::parse("2,3;1,2").unwrap().embed(3, 1);
        let deep = Vertex::on_sigma0(3, 5);
        assert!(matches!(
            act_padic(&g, &deep),
            Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn congruence_action_guard() {
        // Matrices agreeing mod p^(r+2) act identically on ball(r).
        let p = 3u64;
        let r = 3u32;
        let g = Mat2::parse("2,3;1,2").unwrap();
        let eps = power_rational(p, (r + 2) as i64);
        let perturbations = [
            Mat2::new(rat(1), rat(2), rat(1), rat(-1)),
            Mat2::new(rat(0), rat(1), rat(2), rat(1)),
        ];
        let ball = Ball::enumerate(&Vertex::base(p), r);
        for e in &perturbations {
            let h = Mat2::new(
                &g.a + &(&eps * &e.a),
                &g.b + &(&eps * &e.b),
                &g.c + &(&eps * &e.c),
                &g.d + &(&eps * &e.d),
            );
            assert_eq!(vp(&h.det(), p), Some(0));
            for v in &ball.vertices {
                assert_eq!(
                    act_rational(&g, v).unwrap(),
                    act_rational(&h, v).unwrap(),
                    "guard violated at {v}"
                );
            }
        }
    }

    #[test]
    fn chamber_construction() {
        let c = Chamber::fundamental(3);
        assert_eq!(c.type0(), &Vertex::base(3));
        assert_eq!(c.type1(), &Vertex::on_sigma0(3, 1));
        assert!(Chamber::new(Vertex::base(3), Vertex::on_sigma0(3, 2)).is_err());
        // Unordered: either construction order gives the same chamber.
        let c2 = Chamber::new(Vertex::on_sigma0(3, 1), Vertex::base(3)).unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn vertex_labels() {
        assert_eq!(Vertex::base(3).label(), "(0, 0)");
        assert_eq!(Vertex::new_reduced(3, 2, &rat(4)).label(), "(2, 11)");
        assert_eq!(Vertex::new_reduced(3, 0, &ratio(1, 3)).label(), "(0, 0.1)");
        assert_eq!(Vertex::new_reduced(3, 2, &rat(3)).label(), "(2, 10)");
    }

    #[test]
    fn dot_export_contains_all_vertices() {
        let ball = Ball::enumerate(&Vertex::base(3), 1);
        let dot = ball.to_dot(None);
        assert!(dot.starts_with("graph ball {"));
        assert_eq!(dot.matches("label=").count(), 4 + 1);
        assert_eq!(dot.matches(" -- ").count(), 4);
    }
}
