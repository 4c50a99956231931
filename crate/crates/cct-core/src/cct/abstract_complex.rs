//! The combinatorial quotient complex underlying every CCT.
//!
//! Vertices are classes of lattice points (x,y,z) ∈ Z³ with 0 ≤ x+y+z ≤ k
//! under the rank-2 translation lattice generated by (3,−3,0) and (−2,−2,4).
//! Both generators preserve the layer ℓ = x+y+z, z mod 4 and (x−y) mod 6, and
//! those three values form a complete invariant, giving exactly 12 classes
//! per layer. Faces are the unit-cube faces of the tiling, enumerated from
//! their minimal corners.

use std::fmt;

/// The three ascending edge directions of the cube tiling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn delta(self) -> (i64, i64, i64) {
        match self {
            Axis::X => (1, 0, 0),
            Axis::Y => (0, 1, 0),
            Axis::Z => (0, 0, 1),
        }
    }
}

/// Canonical key of a vertex class: (layer, z mod 4, (x−y) mod 6).
///
/// Valid keys satisfy the parity constraint d6 ≡ layer + z4 (mod 2), because
/// x−y and x+y = layer−z always have equal parity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VKey {
    pub layer: usize,
    pub z4: u8,
    pub d6: u8,
}

impl fmt::Debug for VKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v({},{},{})", self.layer, self.z4, self.d6)
    }
}

impl VKey {
    pub fn from_lattice(x: i64, y: i64, z: i64) -> Self {
        let layer = x + y + z;
        assert!(layer >= 0, "lattice point below layer 0");
        Self {
            layer: layer as usize,
            z4: z.rem_euclid(4) as u8,
            d6: (x - y).rem_euclid(6) as u8,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.z4 < 4 && self.d6 < 6 && (self.d6 as usize + self.layer + self.z4 as usize) % 2 == 0
    }

    /// A concrete lattice representative of the class.
    pub fn representative(&self) -> (i64, i64, i64) {
        let z = self.z4 as i64;
        let s = self.layer as i64 - z; // x + y
        let d = self.d6 as i64; // x − y, same parity as s for valid keys
        debug_assert_eq!((s - d).rem_euclid(2), 0, "invalid key parity");
        ((s + d) / 2, (s - d) / 2, z)
    }

    /// The exponent e with vertex = ρ^e · seed_layer, namely (7x−y) mod 12.
    /// Well-defined: both lattice generators change 7x−y by multiples of 12.
    pub fn rho_exponent(&self) -> u32 {
        let (x, y, _) = self.representative();
        (7 * x - y).rem_euclid(12) as u32
    }

    /// The upper neighbor one step along the axis.
    pub fn step(&self, axis: Axis) -> VKey {
        let (x, y, z) = self.representative();
        let (dx, dy, dz) = axis.delta();
        VKey::from_lattice(x + dx, y + dy, z + dz)
    }

    /// All 12 classes of one layer, in canonical order.
    pub fn layer_classes(layer: usize) -> Vec<VKey> {
        let mut out = Vec::with_capacity(12);
        for z4 in 0..4u8 {
            for d6 in 0..6u8 {
                let key = VKey { layer, z4, d6 };
                if key.is_valid() {
                    out.push(key);
                }
            }
        }
        debug_assert_eq!(out.len(), 12);
        out
    }
}

/// An edge, identified by its lower vertex and direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: VKey,
    pub axis: Axis,
}

impl Edge {
    pub fn head(&self) -> VKey {
        self.tail.step(self.axis)
    }
}

/// A quadrilateral, identified by its minimal corner and the two spanning
/// axes. `vertices` lists the corners in cyclic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quad {
    pub corner: VKey,
    pub axes: (Axis, Axis),
}

impl Quad {
    pub fn vertices(&self) -> [VKey; 4] {
        let (a, b) = self.axes;
        let v = self.corner;
        [v, v.step(a), v.step(a).step(b), v.step(b)]
    }
}

/// A 3-cube, identified by its minimal corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cube {
    pub corner: VKey,
}

impl Cube {
    /// The 8 corners, grouped by how many unit steps they are above the
    /// minimal corner (1,3,3,1 vertices in 4 consecutive layers).
    pub fn vertices(&self) -> [VKey; 8] {
        let v = self.corner;
        [
            v,
            v.step(Axis::X),
            v.step(Axis::Y),
            v.step(Axis::Z),
            v.step(Axis::X).step(Axis::Y),
            v.step(Axis::X).step(Axis::Z),
            v.step(Axis::Y).step(Axis::Z),
            v.step(Axis::X).step(Axis::Y).step(Axis::Z),
        ]
    }

    /// The six quadrilateral faces of the cube.
    pub fn faces(&self) -> [Quad; 6] {
        let v = self.corner;
        let pairs = [
            (Axis::X, Axis::Y, Axis::Z),
            (Axis::X, Axis::Z, Axis::Y),
            (Axis::Y, Axis::Z, Axis::X),
        ];
        let mut out = Vec::with_capacity(6);
        for (a, b, other) in pairs {
            out.push(Quad { corner: v, axes: (a, b) });
            out.push(Quad {
                corner: v.step(other),
                axes: (a, b),
            });
        }
        out.try_into().unwrap()
    }
}

/// The abstract CCT of width k: the quotient complex restricted to layers
/// 0..=k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractCct {
    width: usize,
}

impl AbstractCct {
    pub fn new(width: usize) -> Self {
        Self { width }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn vertices(&self) -> impl Iterator<Item = VKey> + '_ {
        (0..=self.width).flat_map(VKey::layer_classes)
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.width)
            .flat_map(VKey::layer_classes)
            .flat_map(|tail| Axis::ALL.into_iter().map(move |axis| Edge { tail, axis }))
    }

    pub fn quads(&self) -> impl Iterator<Item = Quad> + '_ {
        let top = self.width.saturating_sub(1);
        (0..top).flat_map(VKey::layer_classes).flat_map(|corner| {
            [
                (Axis::X, Axis::Y),
                (Axis::X, Axis::Z),
                (Axis::Y, Axis::Z),
            ]
            .into_iter()
            .map(move |axes| Quad { corner, axes })
        })
    }

    pub fn cubes(&self) -> impl Iterator<Item = Cube> + '_ {
        let top = self.width.saturating_sub(2);
        (0..top)
            .flat_map(VKey::layer_classes)
            .map(|corner| Cube { corner })
    }

    /// Quads whose vertices all lie in layers lo..=hi.
    pub fn quads_within(&self, lo: usize, hi: usize) -> Vec<Quad> {
        self.quads()
            .filter(|q| q.vertices().iter().all(|v| v.layer >= lo && v.layer <= hi))
            .collect()
    }

    pub fn f_vector(&self) -> (usize, usize, usize, usize) {
        let k = self.width;
        (
            12 * (k + 1),
            36 * k,
            36 * k.saturating_sub(1),
            12 * k.saturating_sub(2),
        )
    }
}
