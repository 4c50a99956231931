//! Ideality certification: transversal windows, slope witnesses, and
//! orientation towards the inner circle.
//!
//! All metric conditions live on the equator 3-sphere; a complex in S⁴ is
//! certified through its control complex. A three-layer window is
//! transversal when every quad stays clear of the two coordinate circles,
//! the circle projections of every degree-three vertex star are aligned the
//! right way, and the torus projection π₁ is injective on the window's
//! vertices. An ideal complex additionally has obtuse slope witnesses at the
//! top layer and strictly decreasing seed parameters λ.

use rayon::prelude::*;

use crate::cct::{Ambient, CctError, SymmetricCct, VKey};
use crate::geom::{self, Point, Proj};
use crate::scalar::{BigFloat, Scalar};

/// The vertex class of layer `layer` with rotation exponent `e`.
pub(crate) fn key_at(layer: usize, e: u32) -> VKey {
    let e = (e % 12) as i64;
    VKey::from_lattice(0, -e, layer as i64 + e)
}

/// The labelled second neighbourhood of a degree-three vertex of a window:
/// `center` sits on the near boundary layer, its neighbours u, q, r on the
/// middle layer, and the far corners t, s, p two layers away, so that the
/// three quads of the star are {center,u,t,q}, {center,u,s,r} and
/// {center,q,p,r}.
pub(crate) struct Star {
    pub(crate) center: VKey,
    pub(crate) u: VKey,
    pub(crate) q: VKey,
    pub(crate) r: VKey,
    pub(crate) t: VKey,
    pub(crate) s: VKey,
    pub(crate) p: VKey,
}

/// The star of the bottom-layer vertex (lo, j), pointing up.
pub(crate) fn up_star(lo: usize, j: u32) -> Star {
    Star {
        center: key_at(lo, j),
        u: key_at(lo + 1, j),
        q: key_at(lo + 1, j + 7),
        r: key_at(lo + 1, j + 11),
        t: key_at(lo + 2, j + 7),
        s: key_at(lo + 2, j + 11),
        p: key_at(lo + 2, j + 6),
    }
}

/// The star of the top-layer vertex (lo+2, j), pointing down.
fn down_star(lo: usize, j: u32) -> Star {
    Star {
        center: key_at(lo + 2, j),
        u: key_at(lo + 1, j),
        q: key_at(lo + 1, j + 5),
        r: key_at(lo + 1, j + 1),
        t: key_at(lo, j + 5),
        s: key_at(lo, j + 1),
        p: key_at(lo, j + 6),
    }
}

/// Alignment of one three-layer window, reported condition by condition
/// (each flag is the conjunction over all twelve vertex stars of the
/// window's near boundary layer):
///
/// * `cond_a` — no quad of the window meets either coordinate circle;
/// * `cond_b` — fibers group: π₂ identifies s with r, p with the center and
///   u, and t with q;
/// * `cond_c` — bases group: π₀ identifies t with s and q with r;
/// * `cond_d` — π₂(p) is the midpoint of the arc from π₂(s) to π₂(t);
/// * `cond_e` — π₀ of the center, s and r lie inside the arc [π₀(u), π₀(p)];
/// * `cond_f` — π₀ of s and of the center lie inside the arc [π₀(u), π₀(r)];
/// * `cond_g` — π₀(r) lies inside both arcs [π₀(center), π₀(p)] and
///   [π₀(s), π₀(p)].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentReport {
    pub window: usize,
    pub cond_a: bool,
    pub cond_b: bool,
    pub cond_c: bool,
    pub cond_d: bool,
    pub cond_e: bool,
    pub cond_f: bool,
    pub cond_g: bool,
}

impl AlignmentReport {
    pub fn all_pass(&self) -> bool {
        self.cond_a
            && self.cond_b
            && self.cond_c
            && self.cond_d
            && self.cond_e
            && self.cond_f
            && self.cond_g
    }
}

fn quad_avoids_circles<S: Scalar>(t: &SymmetricCct<S>, quad: &crate::cct::Quad) -> bool {
    let pts: Vec<Vec<S>> = t.quad_points(quad).into_iter().cloned().collect();
    !geom::face_meets_polar_plane(Proj::P0, &pts)
        && !geom::face_meets_polar_plane(Proj::P2, &pts)
}

/// Evaluates the alignment conditions of the window [window, window+2] of an
/// equator complex, one report flag per condition. Projection degeneracies
/// count as failures of the condition that needs them.
pub fn check_alignment<S: Scalar>(
    t: &SymmetricCct<S>,
    window: usize,
) -> Result<AlignmentReport, CctError> {
    if t.ambient() != Ambient::S3Eq {
        return Err(CctError::WrongAmbient {
            expected: Ambient::S3Eq,
            got: t.ambient(),
        });
    }
    if window + 2 > t.width() {
        return Err(CctError::MissingLayers {
            width: t.width(),
            lo: window,
            hi: window + 2,
        });
    }

    let cond_a = t
        .abstract_cct()
        .quads_within(window, window + 2)
        .iter()
        .all(|q| quad_avoids_circles(t, q));

    let pe = |pi: Proj, a: &VKey, b: &VKey| {
        geom::pi_equal(pi, t.vertex(a), t.vertex(b)).unwrap_or(false)
    };
    let arc = |pi: Proj, x: &VKey, a: &VKey, b: &VKey| {
        geom::proj_in_open_arc(pi, t.vertex(x), t.vertex(a), t.vertex(b))
    };

    let mut report = AlignmentReport {
        window,
        cond_a,
        cond_b: true,
        cond_c: true,
        cond_d: true,
        cond_e: true,
        cond_f: true,
        cond_g: true,
    };
    for j in 0..12 {
        let st = up_star(window, j);
        let (v, u, q, r, s, tt, p) = (&st.center, &st.u, &st.q, &st.r, &st.s, &st.t, &st.p);
        report.cond_b &=
            pe(Proj::P2, s, r) && pe(Proj::P2, p, v) && pe(Proj::P2, v, u) && pe(Proj::P2, tt, q);
        report.cond_c &= pe(Proj::P0, tt, s) && pe(Proj::P0, q, r);
        report.cond_d &=
            geom::proj_is_arc_midpoint(Proj::P2, t.vertex(p), t.vertex(s), t.vertex(tt));
        report.cond_e &=
            arc(Proj::P0, v, u, p) && arc(Proj::P0, s, u, p) && arc(Proj::P0, r, u, p);
        report.cond_f &= arc(Proj::P0, s, u, r) && arc(Proj::P0, v, u, r);
        report.cond_g &= arc(Proj::P0, r, v, p) && arc(Proj::P0, r, s, p);
    }
    Ok(report)
}

/// The injectivity conditions at one vertex star; returns the label of the
/// first failing condition.
fn star_conditions<S: Scalar>(t: &SymmetricCct<S>, st: &Star) -> Result<(), char> {
    let pe = |pi: Proj, a: &VKey, b: &VKey| {
        geom::pi_equal(pi, t.vertex(a), t.vertex(b)).unwrap_or(false)
    };
    let arc = |pi: Proj, x: &VKey, a: &VKey, b: &VKey| {
        geom::proj_in_open_arc(pi, t.vertex(x), t.vertex(a), t.vertex(b))
    };
    let (v, u, q, r, s, tt, p) = (&st.center, &st.u, &st.q, &st.r, &st.s, &st.t, &st.p);
    if !(pe(Proj::P2, s, r) && pe(Proj::P2, p, v) && pe(Proj::P2, v, u) && pe(Proj::P2, tt, q)) {
        return Err('b');
    }
    if !(pe(Proj::P0, tt, s) && pe(Proj::P0, q, r)) {
        return Err('c');
    }
    if !geom::proj_in_open_arc(Proj::P2, t.vertex(p), t.vertex(s), t.vertex(tt)) {
        return Err('d');
    }
    if !(arc(Proj::P0, v, u, p) && arc(Proj::P0, r, u, p)) {
        return Err('e');
    }
    if !arc(Proj::P0, s, u, r) {
        return Err('f');
    }
    Ok(())
}

/// Certifies transversality of the window [lo, lo+2] of an equator complex:
/// every quad avoids both circles, the star conditions hold at all twelve
/// up- and down-stars, and π₁ is injective on the window's 36 vertices.
fn check_transversal_window<S: Scalar>(t: &SymmetricCct<S>, lo: usize) -> Result<(), CctError> {
    for quad in t.abstract_cct().quads_within(lo, lo + 2) {
        if !quad_avoids_circles(t, &quad) {
            return Err(CctError::TransversalityFailure {
                window: lo,
                vertex: quad.corner,
                condition: 'a',
            });
        }
    }
    for j in 0..12 {
        for star in [up_star(lo, j), down_star(lo, j)] {
            if let Err(condition) = star_conditions(t, &star) {
                return Err(CctError::TransversalityFailure {
                    window: lo,
                    vertex: star.center,
                    condition,
                });
            }
        }
    }
    let keys: Vec<VKey> = (lo..=lo + 2).flat_map(VKey::layer_classes).collect();
    for i in 0..keys.len() {
        for j in i + 1..keys.len() {
            let (x, y) = (t.vertex(&keys[i]), t.vertex(&keys[j]));
            if geom::pi_equal(Proj::P0, x, y).unwrap_or(false)
                && geom::pi_equal(Proj::P2, x, y).unwrap_or(false)
            {
                return Err(CctError::Pi1Collision {
                    window: lo,
                    a: keys[i],
                    b: keys[j],
                });
            }
        }
    }
    Ok(())
}

/// The sign of one slope test at the top boundary of an equator complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeWitness {
    pub exponent: u32,
    pub sign: i8,
}

/// The slope data at top-layer exponent `j`: the arc midpoint direction
/// m = s + ρ⁸s of the two fiber-related top vertices, the middle vertex u of
/// the length-two path joining them, and the base direction w of m.
fn slope_data<S: Scalar>(t: &SymmetricCct<S>, j: u32) -> (Point<S>, Point<S>, Point<S>) {
    let k = t.width();
    let s = t.orbit_point(k, j);
    let m = geom::vec_add(s, t.orbit_point(k, j + 8));
    let u = t.orbit_point(k - 1, j + 1).clone();
    let mut w = vec![S::zero(); m.len()];
    w[0] = m[0].clone();
    w[1] = m[1].clone();
    (m, u, w)
}

/// Computes the twelve slope signs at the top boundary: negative means the
/// angle at m between the arcs towards the base circle and towards u is
/// obtuse.
pub fn slope_witnesses<S: Scalar>(t: &SymmetricCct<S>) -> Result<Vec<SlopeWitness>, CctError> {
    if t.ambient() != Ambient::S3Eq {
        return Err(CctError::WrongAmbient {
            expected: Ambient::S3Eq,
            got: t.ambient(),
        });
    }
    assert!(t.width() >= 1, "slope needs two layers");
    (0..12u32)
        .map(|j| {
            let (m, u, w) = slope_data(t, j);
            let val = geom::projected_inner(&m, &u, &w)
                .map_err(|_| CctError::DegenerateTangent(j))?;
            Ok(SlopeWitness {
                exponent: j,
                sign: val.sign(),
            })
        })
        .collect()
}

/// A successful ideality certification. For widths below 2 the metric
/// conditions are vacuous and only the symmetry conditions are checked
/// (`windows_transversal` is 0, the witness list is empty and `oriented`
/// is false to record that the orientation check did not run).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealityCertificate {
    pub width: usize,
    pub symmetric: bool,
    pub windows_transversal: usize,
    pub slope_witnesses: Vec<SlopeWitness>,
    pub oriented: bool,
}

/// Certifies that a symmetric CCT is ideal: symmetric, transversal in every
/// three-layer window of its control complex, slope-obtuse at the top
/// boundary, and oriented towards the inner circle (strictly decreasing λ at
/// the top seed pair). Complexes in S⁴ are certified through their control
/// complex; the certification is invariant under rotating or reflecting all
/// seeds by a global symmetry.
pub fn check_ideal<S: Scalar>(t: &SymmetricCct<S>) -> Result<IdealityCertificate, CctError> {
    t.check_symmetric()?;
    let eq_store;
    let eq = match t.ambient() {
        Ambient::S4 => {
            eq_store = t.control_cct()?;
            &eq_store
        }
        Ambient::S3Eq => t,
    };
    let width = eq.width();
    if width < 2 {
        return Ok(IdealityCertificate {
            width,
            symmetric: true,
            windows_transversal: 0,
            slope_witnesses: Vec::new(),
            oriented: false,
        });
    }
    (1..width)
        .into_par_iter()
        .try_for_each(|i| check_transversal_window(eq, i - 1))?;
    let witnesses = slope_witnesses(eq)?;
    for w in &witnesses {
        if w.sign >= 0 {
            return Err(CctError::SlopeNotObtuse {
                exponent: w.exponent,
                sign: w.sign,
            });
        }
    }
    let lam_top = geom::clifford_lambda(eq.chain_seed(width));
    let lam_prev = geom::clifford_lambda(eq.chain_seed(width - 1));
    if (lam_prev - lam_top).sign() != 1 {
        return Err(CctError::NotOriented { top: width });
    }
    Ok(IdealityCertificate {
        width,
        symmetric: true,
        windows_transversal: width - 1,
        slope_witnesses: witnesses,
        oriented: true,
    })
}

/// One step of the slope monotonicity harness: the certified witnesses and
/// the dyadic slope angle α at exponent 0 of the top boundary.
#[derive(Debug, Clone)]
pub struct SlopeStep {
    pub width: usize,
    pub witnesses: Vec<SlopeWitness>,
    pub alpha: BigFloat,
}

/// The slope angle at exponent 0 of the top boundary of an equator complex,
/// computed at `prec` fractional bits.
fn slope_angle<S: Scalar>(eq: &SymmetricCct<S>, prec: u32) -> BigFloat {
    let (m, u, w) = slope_data(eq, 0);
    let bf = |p: &Point<S>| -> Vec<BigFloat> { p.iter().map(|x| x.to_bigfloat(prec)).collect() };
    let (m, u, w) = (bf(&m), bf(&u), bf(&w));
    let mm = geom::dot(&m, &m);
    let tangent = |x: &[BigFloat]| -> Vec<BigFloat> {
        let c = geom::dot(x, &m) / mm.clone();
        x.iter()
            .zip(&m)
            .map(|(xi, mi)| xi.clone() - c.clone() * mi.clone())
            .collect()
    };
    let tu = tangent(&u);
    let tw = tangent(&w);
    let cosine =
        geom::dot(&tu, &tw) / (geom::dot(&tu, &tu).sqrt() * geom::dot(&tw, &tw).sqrt());
    cosine.acos()
}

/// Extends an ideal complex `steps` times, re-certifying ideality after
/// every step, and reports the slope witnesses and angles along the way
/// (including the input complex). The slope angles of the canonical
/// complexes increase towards π monotonically.
pub fn slope_monotone_harness<S: Scalar>(
    t: &SymmetricCct<S>,
    steps: usize,
    prec: u32,
) -> Result<Vec<SlopeStep>, crate::extend::ExtendError> {
    let record = |t: &SymmetricCct<S>| -> Result<SlopeStep, crate::extend::ExtendError> {
        check_ideal(t)?;
        let eq_store;
        let eq = match t.ambient() {
            Ambient::S4 => {
                eq_store = t.control_cct()?;
                &eq_store
            }
            Ambient::S3Eq => t,
        };
        Ok(SlopeStep {
            width: t.width(),
            witnesses: slope_witnesses(eq)?,
            alpha: slope_angle(eq, prec),
        })
    };
    let mut out = Vec::with_capacity(steps + 1);
    let mut cur = t.clone();
    out.push(record(&cur)?);
    for _ in 0..steps {
        cur = crate::extend::elementary_extension_opt(&cur, Some(false))?;
        out.push(record(&cur)?);
    }
    Ok(out)
}
