//! Convex-position certificates for cross-bedding cubical tori.
//!
//! A complex is in convex position when every facet admits a closed
//! hemisphere containing the facet in its boundary sphere and every other
//! vertex strictly in the interior.  This module provides
//!
//! * the brute-force certificate over all facets ([`check_convex_position`]),
//!   with an optional orbit shortcut that computes one hyperplane per layer
//!   and propagates it by the rotation action;
//! * the local variant that certifies every vertex star in isolation
//!   ([`check_local_convex_position`]);
//! * the width-3 local-to-global criterion, which verifies the local
//!   hypothesis (edge-connected neighbours of each facet inside its
//!   hemisphere) and the global conclusion separately, together with the
//!   dihedral-angle diagnostics on the boundary-layer stars of the control
//!   complex ([`check_width3_criterion`]);
//! * the two-part hypothesis checker for wide complexes — local convex
//!   position everywhere plus convex position of the two fattened
//!   boundaries — cross-checked against the brute certificate
//!   ([`check_avh_hypotheses`]).
//!
//! All tests are exact sign evaluations; ties count as failures, never as
//! passes.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::cct::abstract_complex::{Cube, VKey};
use crate::cct::ideal::{key_at, up_star, Star};
use crate::cct::{build_symmetric, Ambient, CctError, SymmetricCct};
use crate::geom::{self, Hemisphere, LinearSubspace, Point};
use crate::scalar::Scalar;

/// Failures of convex-position certification.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConvexError {
    #[error("complex of width {got} has too few layers (width ≥ {need} required)")]
    WidthTooSmall { got: usize, need: usize },
    #[error("the local criterion requires width exactly 3, got {0}")]
    WrongWidth(usize),
    #[error("facet candidate spans only rank {rank}; no unique hyperplane")]
    RankDeficient { rank: usize },
    #[error("the candidate vertices span the ambient space; no common hyperplane")]
    NotCoplanar,
    #[error("the orientation reference lies on a facet hyperplane")]
    DegenerateReference,
    #[error("vertex {vertex:?} is not strictly inside the hemisphere of facet {facet:?}")]
    NotInConvexPosition { facet: VKey, vertex: VKey },
    #[error("the star of vertex {vertex:?} is not in convex position")]
    NotLocallyConvex { vertex: VKey },
    #[error("local hypothesis fails: neighbour {vertex:?} of facet {facet:?} is not strictly inside")]
    LocalHypothesisFails { facet: VKey, vertex: VKey },
    #[error("global conclusion fails: vertex {vertex:?} escapes the hemisphere of facet {facet:?}")]
    GlobalConclusionFails { facet: VKey, vertex: VKey },
    #[error("fattened boundary on layers [{lo}, {hi}]: {source}")]
    FatteningNotConvex {
        lo: usize,
        hi: usize,
        #[source]
        source: Box<ConvexError>,
    },
    #[error(transparent)]
    Cct(#[from] CctError),
}

/// Which procedure produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMode {
    Brute,
    LocalCriterion,
    AvhHypotheses,
}

/// One facet's supporting hemisphere with the verified vertex signs
/// (0 on the facet itself, −1 strictly inside for everything tested).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetWitness<S: Scalar> {
    pub facet: Cube,
    pub hemisphere: Hemisphere<S>,
    pub signs: Vec<(VKey, i8)>,
}

/// A verified convex-position certificate: one witness per facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexityCertificate<S: Scalar> {
    pub mode: CertMode,
    pub facets: Vec<FacetWitness<S>>,
}

/// The certificate of one vertex star: every facet of the star is exposed
/// within the star by a hemisphere through its own hyperplane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCertificate<S: Scalar> {
    pub center: VKey,
    pub facets: Vec<FacetWitness<S>>,
}

/// Local convex position, star by star.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalReport<S: Scalar> {
    pub stars: Vec<StarCertificate<S>>,
}

/// Diagnostics of one boundary-layer vertex star in the control complex:
/// whether the star is in convex position, and whether the tangent direction
/// of the arc towards the first coordinate circle lies in the convex hull of
/// the link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DihedralWitness {
    pub vertex: VKey,
    pub star_convex: bool,
    pub tangent_in_link: bool,
}

/// Outcome of the width-3 criterion: the local hypothesis certificate, the
/// global conclusion certificate over the same hemispheres, and the
/// dihedral-angle diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Width3Report<S: Scalar> {
    pub local: ConvexityCertificate<S>,
    pub global: ConvexityCertificate<S>,
    pub dihedral: Vec<DihedralWitness>,
}

/// Outcome of the manifold-with-boundary hypothesis check.  The certificates
/// of the two fattenings are expressed in the coordinates of the restricted
/// complexes (layers re-counted from 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvhReport<S: Scalar> {
    pub local: LocalReport<S>,
    pub bottom_fattening: ConvexityCertificate<S>,
    pub top_fattening: ConvexityCertificate<S>,
    pub conclusion: ConvexityCertificate<S>,
}

fn ensure_s4<S: Scalar>(t: &SymmetricCct<S>) -> Result<(), ConvexError> {
    if t.ambient() != Ambient::S4 {
        return Err(ConvexError::Cct(CctError::WrongAmbient {
            expected: Ambient::S4,
            got: t.ambient(),
        }));
    }
    Ok(())
}

/// The exact sum of all vertices — the canonical interior reference
/// direction.  It is fixed by the whole symmetry group, so orientations
/// chosen against it are preserved under the orbit shortcut.
fn vertex_sum<S: Scalar>(t: &SymmetricCct<S>) -> Point<S> {
    let mut sum = vec![S::zero(); t.coords()];
    for (_, p) in t.vertices() {
        sum = geom::vec_add(&sum, p);
    }
    sum
}

/// The canonical normal direction of the hyperplane spanned by `points`:
/// the reduced-echelon representative of the 1-dimensional orthogonal
/// complement.  Errors if the span is not a hyperplane.
fn spanning_normal<S: Scalar>(points: &[&Point<S>]) -> Result<Vec<S>, ConvexError> {
    let rows: Vec<Vec<S>> = points.iter().map(|p| (*p).clone()).collect();
    let span = LinearSubspace::span(&rows);
    if span.dim() == span.ambient_dim() {
        return Err(ConvexError::NotCoplanar);
    }
    if span.dim() + 1 < span.ambient_dim() {
        return Err(ConvexError::RankDeficient { rank: span.dim() });
    }
    Ok(span.orthocomplement().basis()[0].clone())
}

/// The supporting hemisphere candidate of one geometric facet, oriented so
/// that the reference interior point gets strictly negative side (the stored
/// normal is then the outer normal).
pub fn facet_hyperplane<S: Scalar>(
    points: &[&Point<S>],
    reference: &[S],
) -> Result<Hemisphere<S>, ConvexError> {
    let h = Hemisphere::new(spanning_normal(points)?);
    match h.side(reference) {
        -1 => Ok(h),
        1 => Ok(Hemisphere::new(geom::vec_neg(h.normal()))),
        _ => Err(ConvexError::DegenerateReference),
    }
}

/// Evaluates one oriented facet hemisphere against a vertex list: facet
/// vertices must lie on the boundary, all others strictly inside.
fn facet_witness<S: Scalar>(
    cube: Cube,
    hemisphere: Hemisphere<S>,
    verts: &[(VKey, &Point<S>)],
) -> Result<FacetWitness<S>, ConvexError> {
    let facet_keys: BTreeSet<VKey> = cube.vertices().into_iter().collect();
    let mut signs = Vec::with_capacity(verts.len());
    for (key, p) in verts {
        let s = hemisphere.side(p);
        let want_zero = facet_keys.contains(key);
        if (want_zero && s != 0) || (!want_zero && s != -1) {
            return Err(ConvexError::NotInConvexPosition {
                facet: cube.corner,
                vertex: *key,
            });
        }
        signs.push((*key, s));
    }
    Ok(FacetWitness {
        facet: cube,
        hemisphere,
        signs,
    })
}

/// Brute-force convex position: every facet's hemisphere contains every
/// non-facet vertex strictly.
pub fn check_convex_position<S: Scalar>(
    t: &SymmetricCct<S>,
) -> Result<ConvexityCertificate<S>, ConvexError> {
    check_convex_position_opt(t, false)
}

/// As [`check_convex_position`].  With `orbit_shortcut` the hyperplane is
/// computed once per layer (at rotation exponent 0) and propagated along the
/// rotation orbit; every vertex sign is still verified for every facet, and
/// the resulting certificate is identical to the full enumeration.
pub fn check_convex_position_opt<S: Scalar>(
    t: &SymmetricCct<S>,
    orbit_shortcut: bool,
) -> Result<ConvexityCertificate<S>, ConvexError> {
    ensure_s4(t)?;
    if t.width() < 3 {
        return Err(ConvexError::WidthTooSmall {
            got: t.width(),
            need: 3,
        });
    }
    let reference = vertex_sum(t);
    let verts: Vec<(VKey, &Point<S>)> = t.vertices().collect();
    let cubes: Vec<Cube> = t.abstract_cct().cubes().collect();

    let facets: Result<Vec<FacetWitness<S>>, ConvexError> = if orbit_shortcut {
        let mut base: BTreeMap<usize, Hemisphere<S>> = BTreeMap::new();
        for cube in &cubes {
            let layer = cube.corner.layer;
            if let std::collections::btree_map::Entry::Vacant(e) = base.entry(layer) {
                let c0 = Cube {
                    corner: key_at(layer, 0),
                };
                e.insert(facet_hyperplane(&t.cube_points(&c0), &reference)?);
            }
        }
        cubes
            .par_iter()
            .map(|cube| {
                let j = cube.corner.rho_exponent();
                let mapped = t.rho_power(j).apply(base[&cube.corner.layer].normal());
                let canonical = LinearSubspace::span(&[mapped]).basis()[0].clone();
                let h = Hemisphere::new(canonical);
                let h = match h.side(&reference) {
                    -1 => h,
                    1 => Hemisphere::new(geom::vec_neg(h.normal())),
                    _ => return Err(ConvexError::DegenerateReference),
                };
                facet_witness(*cube, h, &verts)
            })
            .collect()
    } else {
        cubes
            .par_iter()
            .map(|cube| {
                let h = facet_hyperplane(&t.cube_points(cube), &reference)?;
                facet_witness(*cube, h, &verts)
            })
            .collect()
    };
    Ok(ConvexityCertificate {
        mode: CertMode::Brute,
        facets: facets?,
    })
}

/// Certifies one facet within a restricted vertex set (a star): the
/// hemisphere through the facet must put every other listed vertex strictly
/// on one common side.  The witness is normalized to the interior-negative
/// orientation.
fn expose_within<S: Scalar>(
    t: &SymmetricCct<S>,
    cube: &Cube,
    scope: &BTreeSet<VKey>,
    blame: VKey,
) -> Result<FacetWitness<S>, ConvexError> {
    let facet_keys: BTreeSet<VKey> = cube.vertices().into_iter().collect();
    let h = Hemisphere::new(spanning_normal(&t.cube_points(cube))?);
    let mut pos = 0usize;
    let mut neg = 0usize;
    let mut raw: Vec<(VKey, i8)> = Vec::with_capacity(scope.len());
    for key in scope {
        let s = h.side(t.vertex(key));
        if facet_keys.contains(key) {
            if s != 0 {
                return Err(ConvexError::NotLocallyConvex { vertex: blame });
            }
        } else {
            match s {
                1 => pos += 1,
                -1 => neg += 1,
                _ => return Err(ConvexError::NotLocallyConvex { vertex: blame }),
            }
        }
        raw.push((*key, s));
    }
    if pos > 0 && neg > 0 {
        return Err(ConvexError::NotLocallyConvex { vertex: blame });
    }
    if pos > 0 {
        Ok(FacetWitness {
            facet: *cube,
            hemisphere: Hemisphere::new(geom::vec_neg(h.normal())),
            signs: raw.iter().map(|(k, s)| (*k, -s)).collect(),
        })
    } else {
        Ok(FacetWitness {
            facet: *cube,
            hemisphere: h,
            signs: raw,
        })
    }
}

/// Local convex position: for every vertex, the star of facets around it is
/// in convex position (each facet exposed within the star by its own
/// hyperplane, testing star vertices only).
pub fn check_local_convex_position<S: Scalar>(
    t: &SymmetricCct<S>,
) -> Result<LocalReport<S>, ConvexError> {
    ensure_s4(t)?;
    if t.width() < 3 {
        return Err(ConvexError::WidthTooSmall {
            got: t.width(),
            need: 3,
        });
    }
    let mut stars: BTreeMap<VKey, Vec<Cube>> = BTreeMap::new();
    for cube in t.abstract_cct().cubes() {
        for v in cube.vertices() {
            stars.entry(v).or_default().push(cube);
        }
    }
    let entries: Vec<(&VKey, &Vec<Cube>)> = stars.iter().collect();
    let certs: Result<Vec<StarCertificate<S>>, ConvexError> = entries
        .par_iter()
        .map(|(center, cubes)| {
            let scope: BTreeSet<VKey> = cubes.iter().flat_map(|c| c.vertices()).collect();
            let facets: Result<Vec<FacetWitness<S>>, ConvexError> = cubes
                .iter()
                .map(|cube| expose_within(t, cube, &scope, **center))
                .collect();
            Ok(StarCertificate {
                center: **center,
                facets: facets?,
            })
        })
        .collect();
    Ok(LocalReport { stars: certs? })
}

/// Convex position of the three-quad star of a boundary-layer vertex in the
/// control complex (part of the dihedral diagnostics).
fn star_in_convex_position<S: Scalar>(c: &SymmetricCct<S>, star: &Star) -> bool {
    let quads: [[VKey; 4]; 3] = [
        [star.center, star.u, star.t, star.q],
        [star.center, star.u, star.s, star.r],
        [star.center, star.q, star.p, star.r],
    ];
    let all = [
        star.center,
        star.u,
        star.q,
        star.r,
        star.t,
        star.s,
        star.p,
    ];
    for quad in &quads {
        let rows: Vec<Vec<S>> = quad.iter().map(|k| c.vertex(k).clone()).collect();
        let span = LinearSubspace::span(&rows);
        if span.dim() + 1 != span.ambient_dim() {
            return false;
        }
        let h = Hemisphere::new(span.orthocomplement().basis()[0].clone());
        let mut pos = 0usize;
        let mut neg = 0usize;
        for key in all.iter().filter(|k| !quad.contains(k)) {
            match h.side(c.vertex(key)) {
                1 => pos += 1,
                -1 => neg += 1,
                _ => return false,
            }
        }
        if pos > 0 && neg > 0 {
            return false;
        }
    }
    true
}

/// The width-3 local-to-global criterion.
///
/// Preconditions: ambient S⁴ and width exactly 3.  The input is assumed
/// ideal; ideality is certified upstream and deliberately not re-verified
/// here, so that corrupted complexes exercise the failure paths.
///
/// The check runs three stages:
/// 1. **local hypothesis** — for every facet, the layer-1 vertices outside
///    the facet but edge-connected to it lie strictly inside the facet's
///    hemisphere (orientation chosen by those very vertices);
/// 2. **global conclusion** — the same hemispheres contain *all* non-facet
///    vertices strictly;
/// 3. **dihedral diagnostics** — in the control complex, for each vertex v
///    of layer 1, the star over the last three layers is in convex position
///    and the tangent of the arc from v towards the first coordinate circle
///    lies in the convex hull of the link of v.
pub fn check_width3_criterion<S: Scalar>(
    t: &SymmetricCct<S>,
) -> Result<Width3Report<S>, ConvexError> {
    ensure_s4(t)?;
    if t.width() != 3 {
        return Err(ConvexError::WrongWidth(t.width()));
    }
    let abs = t.abstract_cct();
    let mut adjacent: BTreeMap<VKey, BTreeSet<VKey>> = BTreeMap::new();
    for e in abs.edges() {
        let (a, b) = (e.tail, e.head());
        adjacent.entry(a).or_default().insert(b);
        adjacent.entry(b).or_default().insert(a);
    }
    let verts: Vec<(VKey, &Point<S>)> = t.vertices().collect();
    let cubes: Vec<Cube> = abs.cubes().collect();

    let mut local_facets = Vec::with_capacity(cubes.len());
    let mut global_facets = Vec::with_capacity(cubes.len());
    for cube in &cubes {
        let facet_keys: BTreeSet<VKey> = cube.vertices().into_iter().collect();
        let mut tested: BTreeSet<VKey> = BTreeSet::new();
        for fk in &facet_keys {
            for nb in &adjacent[fk] {
                if nb.layer == 1 && !facet_keys.contains(nb) {
                    tested.insert(*nb);
                }
            }
        }
        let mut h = Hemisphere::new(spanning_normal(&t.cube_points(cube))?);
        // Orient by the tested neighbours themselves: the hypothesis asserts
        // a hemisphere with all of them strictly inside exists.
        let anchor = *tested
            .iter()
            .next()
            .expect("every facet has edge-connected layer-1 neighbours");
        if h.side(t.vertex(&anchor)) > 0 {
            h = Hemisphere::new(geom::vec_neg(h.normal()));
        }
        let mut lsigns: Vec<(VKey, i8)> = Vec::new();
        for key in &facet_keys {
            lsigns.push((*key, h.side(t.vertex(key))));
        }
        for key in &tested {
            let s = h.side(t.vertex(key));
            if s != -1 {
                return Err(ConvexError::LocalHypothesisFails {
                    facet: cube.corner,
                    vertex: *key,
                });
            }
            lsigns.push((*key, s));
        }
        let mut gsigns: Vec<(VKey, i8)> = Vec::with_capacity(verts.len());
        for (key, p) in &verts {
            let s = h.side(p);
            if !facet_keys.contains(key) && s != -1 {
                return Err(ConvexError::GlobalConclusionFails {
                    facet: cube.corner,
                    vertex: *key,
                });
            }
            gsigns.push((*key, s));
        }
        local_facets.push(FacetWitness {
            facet: *cube,
            hemisphere: h.clone(),
            signs: lsigns,
        });
        global_facets.push(FacetWitness {
            facet: *cube,
            hemisphere: h,
            signs: gsigns,
        });
    }

    let control = t.control_cct()?;
    let mut dihedral = Vec::with_capacity(12);
    for j in 0..12u32 {
        let star = up_star(1, j);
        let v = control.vertex(&star.center);
        let mut pi0 = vec![S::zero(); 4];
        pi0[0] = v[0].clone();
        pi0[1] = v[1].clone();
        if geom::is_zero_vec(&pi0) {
            return Err(ConvexError::Cct(CctError::DegenerateAnchor(star.center)));
        }
        let vv = geom::dot(v, v);
        let tangent_at_v = |w: &[S]| -> Vec<S> {
            geom::vec_sub(&geom::vec_scale(&vv, w), &geom::vec_scale(&geom::dot(w, v), v))
        };
        let t_dir = tangent_at_v(&pi0);
        if geom::is_zero_vec(&t_dir) {
            return Err(ConvexError::Cct(CctError::DegenerateTangent(j)));
        }
        let gens: Vec<Vec<S>> = [star.u, star.q, star.r]
            .iter()
            .map(|k| tangent_at_v(control.vertex(k)))
            .collect();
        dihedral.push(DihedralWitness {
            vertex: star.center,
            star_convex: star_in_convex_position(&control, &star),
            tangent_in_link: geom::in_conic_hull(&t_dir, &gens),
        });
    }

    Ok(Width3Report {
        local: ConvexityCertificate {
            mode: CertMode::LocalCriterion,
            facets: local_facets,
        },
        global: ConvexityCertificate {
            mode: CertMode::Brute,
            facets: global_facets,
        },
        dihedral,
    })
}

/// The subcomplex induced by the layers `lo..=hi`, rebuilt as a standalone
/// symmetric CCT on the same seeds (layers re-counted from 0).
fn restriction<S: Scalar>(
    t: &SymmetricCct<S>,
    lo: usize,
    hi: usize,
) -> Result<SymmetricCct<S>, ConvexError> {
    assert!(lo <= hi && hi <= t.width());
    Ok(build_symmetric(
        t.seeds()[lo..=hi].to_vec(),
        t.ambient(),
        t.rho().clone(),
    )?)
}

/// Hypotheses of the local-to-global theorem for manifolds with boundary:
/// the complex is in locally convex position everywhere, and both fattened
/// boundaries (the subcomplexes of facets meeting a boundary component in a
/// quad, spanning layers [0,3] and [k−3,k]) are in convex position.  The
/// implied global conclusion is cross-checked against the brute certificate.
pub fn check_avh_hypotheses<S: Scalar>(t: &SymmetricCct<S>) -> Result<AvhReport<S>, ConvexError> {
    ensure_s4(t)?;
    let k = t.width();
    if k < 5 {
        return Err(ConvexError::WidthTooSmall { got: k, need: 5 });
    }
    let local = check_local_convex_position(t)?;
    let bottom_fattening = check_convex_position(&restriction(t, 0, 3)?).map_err(|e| {
        ConvexError::FatteningNotConvex {
            lo: 0,
            hi: 3,
            source: Box::new(e),
        }
    })?;
    let top_fattening = check_convex_position(&restriction(t, k - 3, k)?).map_err(|e| {
        ConvexError::FatteningNotConvex {
            lo: k - 3,
            hi: k,
            source: Box::new(e),
        }
    })?;
    let conclusion = check_convex_position(t)?;
    Ok(AvhReport {
        local,
        bottom_fattening,
        top_fattening,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cct::group;
    use crate::cct::symmetric::ct_s_1;
    use crate::extend::{ct_q, ct_s, extend_to};
    use crate::geom::same_ray;
    use crate::scalar::FieldElement;
    use num_traits::{One, Zero};

    /// (p + q√2)/r as a field element.
    fn fe(p: i64, q: i64, r: i64) -> FieldElement {
        FieldElement::from_ints(p, q, 0, 0) / FieldElement::from_int(r)
    }

    fn corrupt_seed<S: Scalar>(t: &SymmetricCct<S>, layer: usize) -> SymmetricCct<S> {
        let mut seeds = t.seeds().to_vec();
        seeds[layer] = geom::vec_neg(&seeds[layer]);
        build_symmetric(seeds, t.ambient(), t.rho().clone()).unwrap()
    }

    #[test]
    fn the_reference_direction_is_the_pole() {
        let t = ct_s(3).unwrap();
        let sum = vertex_sum(&t);
        let expected = vec![
            FieldElement::zero(),
            FieldElement::zero(),
            FieldElement::zero(),
            FieldElement::zero(),
            FieldElement::from_int(48),
        ];
        assert_eq!(sum, expected);
    }

    #[test]
    fn outer_normal_at_the_first_seed_matches() {
        let t = ct_s(3).unwrap();
        let facet = Cube {
            corner: key_at(0, 0),
        };
        let h = facet_hyperplane(&t.cube_points(&facet), &vertex_sum(&t)).unwrap();
        let expected = vec![
            fe(7, 5, 1),
            fe(-8, -5, 1),
            fe(2, 0, 1),
            fe(0, 0, 1),
            fe(-9, -5, 1),
        ];
        assert!(same_ray(h.normal(), &expected));
    }

    #[test]
    fn perturbed_cubes_are_rejected() {
        let t = ct_s(3).unwrap();
        let facet = Cube {
            corner: key_at(0, 0),
        };
        let reference = vertex_sum(&t);
        let mut points: Vec<Point<FieldElement>> =
            t.cube_points(&facet).into_iter().cloned().collect();
        points[7][0] = points[7][0].clone() + FieldElement::one();
        let borrowed: Vec<&Point<FieldElement>> = points.iter().collect();
        assert_eq!(
            facet_hyperplane(&borrowed, &reference),
            Err(ConvexError::NotCoplanar)
        );

        let flat: Vec<Point<FieldElement>> = vec![t.cube_points(&facet)[0].clone(); 8];
        let borrowed: Vec<&Point<FieldElement>> = flat.iter().collect();
        assert_eq!(
            facet_hyperplane(&borrowed, &reference),
            Err(ConvexError::RankDeficient { rank: 1 })
        );
    }

    #[test]
    fn facet_hyperplanes_are_orbit_covariant() {
        let t = ct_s(3).unwrap();
        let reference = vertex_sum(&t);
        let base = facet_hyperplane(
            &t.cube_points(&Cube {
                corner: key_at(0, 0),
            }),
            &reference,
        )
        .unwrap();
        for j in 0..12u32 {
            let rotated = facet_hyperplane(
                &t.cube_points(&Cube {
                    corner: key_at(0, j),
                }),
                &reference,
            )
            .unwrap();
            let mapped = t.rho_power(j).apply(base.normal());
            assert!(same_ray(rotated.normal(), &mapped));
        }
    }

    #[test]
    fn the_width_three_complex_is_in_convex_position() {
        let t = ct_s(3).unwrap();
        let cert = check_convex_position(&t).unwrap();
        assert_eq!(cert.mode, CertMode::Brute);
        assert_eq!(cert.facets.len(), 12);
        for witness in &cert.facets {
            assert_eq!(witness.signs.len(), 48);
            assert_eq!(witness.signs.iter().filter(|(_, s)| *s == 0).count(), 8);
            assert_eq!(witness.signs.iter().filter(|(_, s)| *s == -1).count(), 40);
        }
    }

    #[test]
    fn width_too_small_is_rejected() {
        let t = ct_s(2).unwrap();
        assert_eq!(
            check_convex_position(&t).unwrap_err(),
            ConvexError::WidthTooSmall { got: 2, need: 3 }
        );
    }

    #[test]
    fn antipode_corruption_is_detected() {
        let t = ct_s(3).unwrap();
        let bad = corrupt_seed(&t, 3);
        assert!(matches!(
            check_convex_position(&bad).unwrap_err(),
            ConvexError::NotInConvexPosition { .. }
        ));
        assert!(matches!(
            check_local_convex_position(&bad).unwrap_err(),
            ConvexError::NotLocallyConvex { .. }
        ));
        // A top-layer antipode leaves every facet hyperplane unchanged, so
        // the layer-1 local hypothesis still holds; only the global
        // conclusion fails.  The complex is not ideal, so this does not
        // contradict the criterion.
        assert!(matches!(
            check_width3_criterion(&bad).unwrap_err(),
            ConvexError::GlobalConclusionFails { .. }
        ));
    }

    #[test]
    fn layer_one_corruption_is_detected() {
        let t = ct_s(3).unwrap();
        let bad = corrupt_seed(&t, 1);
        // Antipoding a whole orbit flips the three edge-connected witnesses
        // of each facet coherently, so the (orientation-free) local
        // hypothesis still holds; the global conclusion catches it.
        assert!(matches!(
            check_width3_criterion(&bad).unwrap_err(),
            ConvexError::GlobalConclusionFails { .. }
        ));
        assert!(matches!(
            check_local_convex_position(&bad).unwrap_err(),
            ConvexError::NotLocallyConvex { .. }
        ));
    }

    #[test]
    fn sliding_the_middle_layer_breaks_the_local_hypothesis() {
        let t = ct_s(3).unwrap();
        // Seeds keeping every cube coplanar form the intersection W of three
        // rotated copies of the facet hyperplane (one per layer-1 vertex of
        // the cube).  Sliding the layer-1 seed inside W moves its orbit
        // relative to the unchanged hyperplanes, so the edge-connected trio
        // can straddle them — the genuinely local failure mode.
        let n0 = spanning_normal(&t.cube_points(&Cube {
            corner: key_at(0, 0),
        }))
        .unwrap();
        let rows = vec![
            n0.clone(),
            t.rho_power(5).apply(&n0),
            t.rho_power(1).apply(&n0),
        ];
        let w = geom::nullspace(&rows, 5);
        assert!(w.len() >= 2);
        let mut found = false;
        'search: for a in -3i64..=3 {
            for b in -3i64..=3 {
                let candidate: Point<FieldElement> = (0..5)
                    .map(|i| {
                        FieldElement::from_int(a) * w[0][i].clone()
                            + FieldElement::from_int(b) * w[1][i].clone()
                    })
                    .collect();
                let mut seeds = t.seeds().to_vec();
                seeds[1] = candidate;
                let Ok(bad) = build_symmetric(seeds, t.ambient(), t.rho().clone()) else {
                    continue;
                };
                if matches!(
                    check_width3_criterion(&bad),
                    Err(ConvexError::LocalHypothesisFails { .. })
                ) {
                    found = true;
                    break 'search;
                }
            }
        }
        assert!(
            found,
            "no coplanarity-preserving slide broke the local hypothesis"
        );
    }

    #[test]
    fn width_three_criterion_passes_on_the_standard_complex() {
        let t = ct_s(3).unwrap();
        let report = check_width3_criterion(&t).unwrap();
        assert_eq!(report.local.facets.len(), 12);
        assert_eq!(report.global.facets.len(), 12);
        for witness in &report.local.facets {
            // 8 facet vertices on the hyperplane, exactly 3 edge-connected
            // layer-1 neighbours strictly inside.
            assert_eq!(witness.signs.len(), 11);
            assert_eq!(witness.signs.iter().filter(|(_, s)| *s == 0).count(), 8);
            assert_eq!(witness.signs.iter().filter(|(_, s)| *s == -1).count(), 3);
        }
        assert_eq!(report.dihedral.len(), 12);
        for d in &report.dihedral {
            assert!(d.star_convex, "star at {:?} not convex", d.vertex);
            assert!(d.tangent_in_link, "tangent at {:?} leaves link", d.vertex);
        }
        // The locally chosen orientations agree with the global reference.
        let reference = vertex_sum(&t);
        for witness in &report.local.facets {
            assert_eq!(witness.hemisphere.side(&reference), -1);
        }
    }

    #[test]
    fn width_three_criterion_passes_on_the_rational_complex() {
        let t = ct_q(3).unwrap();
        let report = check_width3_criterion(&t).unwrap();
        for d in &report.dihedral {
            assert!(d.star_convex && d.tangent_in_link);
        }
        check_convex_position(&t).unwrap();
    }

    #[test]
    fn wrong_width_is_rejected_by_the_criterion() {
        let t = ct_s(4).unwrap();
        assert_eq!(
            check_width3_criterion(&t).unwrap_err(),
            ConvexError::WrongWidth(4)
        );
    }

    #[test]
    fn convex_position_holds_through_width_eleven() {
        let full = extend_to(&ct_s_1(), 11, Some(false)).unwrap();
        for n in 3..12 {
            let t = full.restrict(n);
            let cert = check_convex_position(&t).unwrap();
            assert_eq!(cert.facets.len(), 12 * (n - 2));
            check_local_convex_position(&t).unwrap();
            let top = build_symmetric(
                t.seeds()[n - 3..=n].to_vec(),
                t.ambient(),
                t.rho().clone(),
            )
            .unwrap();
            let report = check_width3_criterion(&top).unwrap();
            for d in &report.dihedral {
                assert!(d.star_convex && d.tangent_in_link);
            }
        }
    }

    #[test]
    fn orbit_shortcut_matches_full_enumeration() {
        let t = extend_to(&ct_s_1(), 5, Some(false)).unwrap();
        let full = check_convex_position_opt(&t, false).unwrap();
        let short = check_convex_position_opt(&t, true).unwrap();
        assert_eq!(full, short);
    }

    #[test]
    fn certificates_are_invariant_under_the_symmetry_action() {
        let t = ct_s(3).unwrap();
        let reflect = group::reflect_e4::<FieldElement>(5);
        let transform = |t: &SymmetricCct<FieldElement>| {
            let seeds = t
                .seeds()
                .iter()
                .map(|s| reflect.apply(&t.rho_power(3).apply(s)))
                .collect();
            build_symmetric(seeds, t.ambient(), t.rho().clone()).unwrap()
        };
        check_convex_position(&transform(&t)).unwrap();
        check_local_convex_position(&transform(&t)).unwrap();
        let bad = corrupt_seed(&t, 3);
        assert!(matches!(
            check_convex_position(&transform(&bad)).unwrap_err(),
            ConvexError::NotInConvexPosition { .. }
        ));
    }

    #[test]
    fn avh_hypotheses_hold_and_match_the_brute_certificate() {
        for n in [5usize, 6] {
            let t = extend_to(&ct_s_1(), n, Some(false)).unwrap();
            let report = check_avh_hypotheses(&t).unwrap();
            assert_eq!(report.bottom_fattening.facets.len(), 12);
            assert_eq!(report.top_fattening.facets.len(), 12);
            let brute = check_convex_position(&t).unwrap();
            assert_eq!(report.conclusion, brute);
        }
    }

    #[test]
    fn width_four_fails_the_manifold_guard() {
        let t = ct_s(4).unwrap();
        assert_eq!(
            check_avh_hypotheses(&t).unwrap_err(),
            ConvexError::WidthTooSmall { got: 4, need: 5 }
        );
    }
}
