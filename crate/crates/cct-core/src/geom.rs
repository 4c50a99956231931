//! Exact linear algebra and spherical-geometry predicates.
//!
//! Everything here is generic over [`Scalar`], so the same code certifies
//! properties exactly over [`crate::FieldElement`] or [`crate::Rational`]
//! and evaluates numerically over [`crate::BigFloat`]. Points are plain
//! coordinate vectors; a point of the 3-sphere is a length-4 vector and its
//! homogenization appends a trailing 1.

use crate::scalar::Scalar;
use std::cmp::Ordering;
use thiserror::Error;

pub type Point<S> = Vec<S>;

// ---------------------------------------------------------------------------
// Vector arithmetic
// ---------------------------------------------------------------------------

pub fn vec_add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_scale<S: Scalar>(c: &S, a: &[S]) -> Vec<S> {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

pub fn vec_neg<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn is_zero_vec<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Appends a homogeneous 1.
pub fn homogenize<S: Scalar>(p: &[S]) -> Vec<S> {
    let mut v = p.to_vec();
    v.push(S::one());
    v
}

/// Scales so the last coordinate becomes 1 (it must be nonzero).
pub fn normalize_last<S: Scalar>(p: &[S]) -> Vec<S> {
    let last = p.last().expect("empty point");
    assert!(last.sign() != 0, "normalize_last with zero last coordinate");
    p.iter().map(|x| x.clone() / last.clone()).collect()
}

// ---------------------------------------------------------------------------
// Gaussian elimination
// ---------------------------------------------------------------------------

/// Reduced row echelon form with the rank. Pivots pick the entry of largest
/// absolute value in the column, which is harmless for exact scalars (the
/// RREF is unique) and improves stability for approximate ones.
pub fn rref<S: Scalar>(mut m: Vec<Vec<S>>) -> (Vec<Vec<S>>, usize) {
    let nrows = m.len();
    if nrows == 0 {
        return (m, 0);
    }
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..nrows)
            .filter(|&i| m[i][col].sign() != 0)
            .max_by(|&i, &j| m[i][col].abs_cmp(&m[j][col]));
        let Some(pivot) = pivot else { continue };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for x in m[rank].iter_mut() {
            *x = x.clone() / p.clone();
        }
        for i in 0..nrows {
            if i != rank && m[i][col].sign() != 0 {
                let f = m[i][col].clone();
                for c in 0..ncols {
                    let delta = f.clone() * m[rank][c].clone();
                    m[i][c] = m[i][c].clone() - delta;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    m.truncate(rank);
    (m, rank)
}

pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    rref(rows.to_vec()).1
}

/// A basis of the right kernel {x : M·x = 0}.
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let (r, rank) = rref(rows.to_vec());
    let mut pivot_col_of_row = Vec::with_capacity(rank);
    for row in &r {
        let col = row.iter().position(|x| x.sign() != 0).expect("zero row in RREF");
        pivot_col_of_row.push(col);
    }
    let pivot_cols: std::collections::BTreeSet<usize> = pivot_col_of_row.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![S::zero(); ncols];
        v[free] = S::one();
        for (row, &pc) in r.iter().zip(&pivot_col_of_row) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// One solution of M·x = b if the system is consistent (free variables 0).
pub fn solve<S: Scalar>(rows: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    assert_eq!(rows.len(), b.len());
    let ncols = rows.first().map_or(0, Vec::len);
    let aug: Vec<Vec<S>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let (r, _) = rref(aug);
    let mut x = vec![S::zero(); ncols];
    for row in &r {
        let pc = row.iter().position(|v| v.sign() != 0)?;
        if pc == ncols {
            return None; // row (0 … 0 | 1): inconsistent
        }
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

pub fn det<S: Scalar>(m: &[Vec<S>]) -> S {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of non-square matrix");
    let mut a = m.to_vec();
    let mut result = S::one();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&i| a[i][col].sign() != 0)
            .max_by(|&i, &j| a[i][col].abs_cmp(&a[j][col]));
        let Some(pivot) = pivot else { return S::zero() };
        if pivot != col {
            a.swap(col, pivot);
            result = -result;
        }
        let p = a[col][col].clone();
        result = result * p.clone();
        for i in col + 1..n {
            if a[i][col].sign() != 0 {
                let f = a[i][col].clone() / p.clone();
                for c in col..n {
                    let delta = f.clone() * a[col][c].clone();
                    a[i][c] = a[i][c].clone() - delta;
                }
            }
        }
    }
    result
}

// ---------------------------------------------------------------------------
// Linear subspaces
// ---------------------------------------------------------------------------

/// A linear subspace of R^n, stored as a canonical reduced-echelon basis so
/// equal subspaces compare equal componentwise.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSubspace<S: Scalar> {
    basis: Vec<Vec<S>>,
    ambient: usize,
}

impl<S: Scalar> LinearSubspace<S> {
    pub fn span(points: &[Vec<S>]) -> Self {
        let ambient = points.first().map_or(0, Vec::len);
        assert!(points.iter().all(|p| p.len() == ambient));
        let (basis, _) = rref(points.to_vec());
        Self { basis, ambient }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn contains(&self, p: &[S]) -> bool {
        assert_eq!(p.len(), self.ambient);
        let mut rows = self.basis.clone();
        rows.push(p.to_vec());
        rref(rows).1 == self.dim()
    }

    /// The orthogonal complement under the standard inner product.
    pub fn orthocomplement(&self) -> Self {
        let basis = if self.basis.is_empty() {
            (0..self.ambient)
                .map(|i| {
                    let mut v = vec![S::zero(); self.ambient];
                    v[i] = S::one();
                    v
                })
                .collect()
        } else {
            nullspace(&self.basis, self.ambient)
        };
        Self::span(&basis)
    }

    /// Subspace intersection, via (A ∩ B) = (A^⊥ + B^⊥)^⊥.
    pub fn meet(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let mut normals = self.orthocomplement().basis.clone();
        normals.extend(other.orthocomplement().basis.clone());
        LinearSubspace::span(&normals).orthocomplement()
    }

    /// For a one-dimensional subspace: a representative spanning vector.
    pub fn line_representative(&self) -> Option<&[S]> {
        if self.dim() == 1 {
            Some(&self.basis[0])
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Exact convex-hull membership (phase-1 simplex, Bland's rule)
// ---------------------------------------------------------------------------

/// Whether `target` lies in the convex hull of `gens`, decided by a phase-1
/// simplex method. With an exact scalar this is a decision procedure; Bland's
/// rule guarantees termination.
pub fn in_convex_hull<S: Scalar>(target: &[S], gens: &[Vec<S>]) -> bool {
    nonneg_solution_exists(target, gens, true)
}

/// Whether `target` lies in the conic (nonnegative) hull of the generators:
/// ∃ λ ≥ 0 with Σ λ_i·gens_i = target. The zero vector is in every nonempty
/// cone.
pub fn in_conic_hull<S: Scalar>(target: &[S], gens: &[Vec<S>]) -> bool {
    nonneg_solution_exists(target, gens, false)
}

/// Phase-1 simplex feasibility for Σ λ_i·gens_i = target, λ ≥ 0, optionally
/// with the affine constraint Σ λ_i = 1.
fn nonneg_solution_exists<S: Scalar>(target: &[S], gens: &[Vec<S>], affine: bool) -> bool {
    if gens.is_empty() {
        return false;
    }
    let d = target.len();
    assert!(gens.iter().all(|g| g.len() == d));
    let n = gens.len();
    let m = d + usize::from(affine); // coordinate constraints (+ Σλ = 1)

    // Tableau rows: constraints Σ λ_i g_i = target (and Σ λ_i = 1), with rhs
    // made nonnegative; artificial variables n..n+m complete an initial basis.
    let mut tab: Vec<Vec<S>> = Vec::with_capacity(m);
    for r in 0..m {
        let mut row: Vec<S> = Vec::with_capacity(n + m + 1);
        for g in gens {
            row.push(if r < d { g[r].clone() } else { S::one() });
        }
        for a in 0..m {
            row.push(if a == r { S::one() } else { S::zero() });
        }
        row.push(if r < d { target[r].clone() } else { S::one() });
        if row[n + m].sign() < 0 {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        tab.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Reduced costs for the phase-1 objective (minimize the sum of
        // artificial variables): r_j = c_j − Σ_i c_{basis i} · T[i][j].
        let mut entering = None;
        'cols: for j in 0..n + m {
            if basis.contains(&j) {
                continue;
            }
            let mut zj = S::zero();
            for (i, &bi) in basis.iter().enumerate() {
                if bi >= n {
                    zj = zj + tab[i][j].clone();
                }
            }
            let cj = if j >= n { S::one() } else { S::zero() };
            if (cj - zj).sign() < 0 {
                entering = Some(j);
                break 'cols;
            }
        }
        let Some(j) = entering else { break };

        // Ratio test with Bland's tie-break on the leaving variable index.
        let mut leave: Option<(usize, S)> = None;
        for i in 0..m {
            if tab[i][j].sign() > 0 {
                let ratio = tab[i][n + m].clone() / tab[i][j].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => match ratio.clone().sub_cmp(lr) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => basis[i] < basis[*li],
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((li, _)) = leave else {
            // Unbounded phase-1 cannot happen (objective bounded below by 0).
            unreachable!("phase-1 simplex reported an unbounded direction")
        };

        // Pivot on (li, j).
        let p = tab[li][j].clone();
        for x in tab[li].iter_mut() {
            *x = x.clone() / p.clone();
        }
        for i in 0..m {
            if i != li && tab[i][j].sign() != 0 {
                let f = tab[i][j].clone();
                for c in 0..=n + m {
                    let delta = f.clone() * tab[li][c].clone();
                    tab[i][c] = tab[i][c].clone() - delta;
                }
            }
        }
        basis[li] = j;
    }

    // Feasible iff every artificial variable has value zero at the optimum.
    basis
        .iter()
        .enumerate()
        .all(|(i, &b)| b < n || tab[i][n + m].sign() == 0)
}

/// Comparison helper used by the simplex ratio test.
trait SubCmp<S> {
    fn sub_cmp(self, other: &S) -> Ordering;
}

impl<S: Scalar> SubCmp<S> for S {
    fn sub_cmp(self, other: &S) -> Ordering {
        match (self - other.clone()).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

// ---------------------------------------------------------------------------
// Torus projections: predicates on the two coordinate pairs
// ---------------------------------------------------------------------------

/// One of the two coordinate 2-planes of R⁴ that carry the torus projections:
/// `P0` projects to coordinates (x₁,x₂), `P2` to (x₃,x₄).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proj {
    P0,
    P2,
}

impl Proj {
    pub fn pair<'a, S>(self, p: &'a [S]) -> (&'a S, &'a S) {
        match self {
            Proj::P0 => (&p[0], &p[1]),
            Proj::P2 => (&p[2], &p[3]),
        }
    }

    pub fn other(self) -> Proj {
        match self {
            Proj::P0 => Proj::P2,
            Proj::P2 => Proj::P0,
        }
    }
}

/// Cross product of the chosen coordinate pairs.
pub fn cross2<S: Scalar>(pi: Proj, x: &[S], y: &[S]) -> S {
    let (x1, x2) = pi.pair(x);
    let (y1, y2) = pi.pair(y);
    x1.clone() * y2.clone() - x2.clone() * y1.clone()
}

/// Dot product of the chosen coordinate pairs.
pub fn dot2<S: Scalar>(pi: Proj, x: &[S], y: &[S]) -> S {
    let (x1, x2) = pi.pair(x);
    let (y1, y2) = pi.pair(y);
    x1.clone() * y1.clone() + x2.clone() * y2.clone()
}

/// Whether the pair projection of `p` is defined, i.e. the pair is nonzero.
pub fn proj_defined<S: Scalar>(pi: Proj, p: &[S]) -> bool {
    let (a, b) = pi.pair(p);
    a.sign() != 0 || b.sign() != 0
}

/// Equality of the projected points on the circle: parallel and same
/// direction.
pub fn proj_equal<S: Scalar>(pi: Proj, x: &[S], y: &[S]) -> bool {
    cross2(pi, x, y).is_zero() && dot2(pi, x, y).sign() > 0
}

/// Whether the projection of `x` lies strictly inside the short arc from the
/// projection of `a` to the projection of `b`. The three sign conditions
/// together are exactly interiority: each is necessary, and jointly they are
/// sufficient.
pub fn proj_in_open_arc<S: Scalar>(pi: Proj, x: &[S], a: &[S], b: &[S]) -> bool {
    let cr = |u: &[S], v: &[S]| cross2(pi, u, v);
    (cr(x, a) * cr(x, b)).sign() < 0
        && (cr(b, a) * cr(b, x)).sign() > 0
        && (cr(a, b) * cr(a, x)).sign() > 0
}

/// Whether the projection of `m` is the midpoint of the short arc between
/// the projections of `a` and `b`: equal angles to both endpoints (compared
/// by squared cosines with positive dot products) and strictly between them.
pub fn proj_is_arc_midpoint<S: Scalar>(pi: Proj, m: &[S], a: &[S], b: &[S]) -> bool {
    let da = dot2(pi, a, m);
    let db = dot2(pi, b, m);
    if da.sign() <= 0 || db.sign() <= 0 {
        return false;
    }
    let na = dot2(pi, a, a);
    let nb = dot2(pi, b, b);
    // cos∠(a,m) = cos∠(b,m): ⟨a,m⟩²·|b|² = ⟨b,m⟩²·|a|².
    let lhs = da.clone() * da * nb;
    let rhs = db.clone() * db * na;
    if lhs != rhs {
        return false;
    }
    // Strictly between: a and b on opposite sides of the ray through m.
    (cross2(pi, a, m) * cross2(pi, b, m)).sign() < 0
}

/// Whether the Euclidean face spanned by `verts` meets the coordinate
/// 2-plane on which the projection `pi` vanishes. Projecting each vertex to
/// its `pi` pair, the face meets that plane iff the planar hull of the pairs
/// contains the origin.
pub fn face_meets_polar_plane<S: Scalar>(pi: Proj, verts: &[Vec<S>]) -> bool {
    let pairs: Vec<Vec<S>> = verts
        .iter()
        .map(|v| {
            let (a, b) = pi.pair(v);
            vec![a.clone(), b.clone()]
        })
        .collect();
    in_convex_hull(&[S::zero(), S::zero()], &pairs)
}

/// The torus parameter λ(p) = 2(x₃²+x₄²)/|x|² of a point of R⁴ (so λ = 1 on
/// the central Clifford torus, λ < 1 nearer the (x₁,x₂) circle).
pub fn clifford_lambda<S: Scalar>(p: &[S]) -> S {
    assert!(p.len() >= 4);
    let sq = |x: &S| x.clone() * x.clone();
    let back = sq(&p[2]) + sq(&p[3]);
    let total = sq(&p[0]) + sq(&p[1]) + back.clone();
    (S::from_int(2) * back) / total
}

/// Sign of ⟨u', w'⟩ where u', w' are the components of u, w orthogonal to m,
/// computed without division as ⟨u,w⟩⟨m,m⟩ − ⟨u,m⟩⟨w,m⟩.
pub fn projected_inner_sign<S: Scalar>(u: &[S], w: &[S], m: &[S]) -> i8 {
    let val = dot(u, w) * dot(m, m) - dot(u, m) * dot(w, m);
    val.sign()
}

/// Degenerate inputs to the spherical predicates.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("point is proportional to the pole ±e_last")]
    PoleProjection,
    #[error("anchor has a vanishing projection pair")]
    DegenerateAnchor,
    #[error("tangent undefined: direction proportional to the base point")]
    DegenerateTangent,
}

/// Whether two vectors are linearly dependent (all 2×2 minors vanish).
pub fn proportional<S: Scalar>(u: &[S], v: &[S]) -> bool {
    assert_eq!(u.len(), v.len());
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let minor = u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone();
            if minor.sign() != 0 {
                return false;
            }
        }
    }
    true
}

/// Whether two nonzero vectors span the same ray (positive multiples).
pub fn same_ray<S: Scalar>(u: &[S], v: &[S]) -> bool {
    proportional(u, v) && dot(u, v).sign() > 0
}

/// A closed hemisphere {x : ⟨normal, x⟩ ≥ 0} of the ambient sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hemisphere<S: Scalar> {
    normal: Vec<S>,
}

impl<S: Scalar> Hemisphere<S> {
    pub fn new(normal: Vec<S>) -> Self {
        assert!(!is_zero_vec(&normal), "hemisphere normal must be nonzero");
        Self { normal }
    }

    pub fn normal(&self) -> &[S] {
        &self.normal
    }

    /// Sign of ⟨normal, x⟩: +1 inside the open hemisphere, 0 on the boundary
    /// sphere, −1 outside.
    pub fn side(&self, x: &[S]) -> i8 {
        side(self, x)
    }
}

/// Sign of ⟨normal, x⟩ — which side of the hemisphere boundary `x` is on.
pub fn side<S: Scalar>(h: &Hemisphere<S>, x: &[S]) -> i8 {
    dot(h.normal(), x).sign()
}

/// Central projection from S^d ∖ {±e_{d+1}} to the equator S^{d−1}: drops the
/// last coordinate, returning an unnormalized ray representative.
pub fn project_equator<S: Scalar>(x: &[S]) -> Result<Vec<S>, GeomError> {
    let head = &x[..x.len() - 1];
    if is_zero_vec(head) {
        Err(GeomError::PoleProjection)
    } else {
        Ok(head.to_vec())
    }
}

/// Side of the fiber-span hyperplane π_i^sp(anchor) that `x` lies on, as the
/// sign of the pair cross-product: for `pi = P2` this is
/// sign(anchor₄·x₃ − anchor₃·x₄), for `P0` sign(anchor₂·x₁ − anchor₁·x₂).
/// Zero means x ∈ π_i^sp(anchor).
pub fn fiber_side<S: Scalar>(pi: Proj, anchor: &[S], x: &[S]) -> Result<i8, GeomError> {
    if !proj_defined(pi, anchor) {
        return Err(GeomError::DegenerateAnchor);
    }
    Ok(cross2(pi, x, anchor).sign())
}

/// π_i(x) = π_i(y) with the preconditions of the circle projections checked.
pub fn pi_equal<S: Scalar>(pi: Proj, x: &[S], y: &[S]) -> Result<bool, GeomError> {
    if !proj_defined(pi, x) || !proj_defined(pi, y) {
        return Err(GeomError::DegenerateAnchor);
    }
    Ok(proj_equal(pi, x, y))
}

/// ⟨u,w⟩ − ⟨u,m⟩⟨w,m⟩/⟨m,m⟩: the inner product of the components of u and w
/// orthogonal to m. Its sign is the sign of the cosine of the angle at m
/// between the segments [m,u] and [m,w]; all three arguments may be
/// unnormalized ray representatives.
pub fn projected_inner<S: Scalar>(m: &[S], u: &[S], w: &[S]) -> Result<S, GeomError> {
    let mm = dot(m, m);
    assert!(mm.sign() > 0, "m must be nonzero");
    if proportional(u, m) || proportional(w, m) {
        return Err(GeomError::DegenerateTangent);
    }
    let um = dot(u, m);
    let wm = dot(w, m);
    Ok(dot(u, w) - um * wm / mm)
}
