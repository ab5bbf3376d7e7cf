//! The infinite dihedral model: reflections t(n) of the real line across
//! integer points, the median-reflection triple reduction, and the
//! projection onto the finite dihedral systems.
//!
//! Conventions: t(n) reflects ℝ across x = n, and t(b)^{t(a)} = t(2a − b).
//! Under the surjection onto I2(m), t(n) maps to the reflection with line
//! index n mod m, and Hurwitz moves commute with the projection.

use crate::hurwitz::{HurwitzMove, MoveTrace};
use crate::rootsys::Line;

/// The conjugate t(b)^{t(a)} = t(a)·t(b)·t(a) = t(2a − b): reflecting the
/// point b across the point a.
pub fn conj(a: i64, b: i64) -> i64 {
    2 * a - b
}

/// An ordered triple of affine reflections (t(a), t(b), t(c)), stored as
/// their fixed points.
pub type Triple = [i64; 3];

/// The length max − min of the interval spanned by the triple.
pub fn spread(t: &Triple) -> i64 {
    t.iter().max().unwrap() - t.iter().min().unwrap()
}

/// An element of the infinite dihedral group as an affine isometry
/// x ↦ ±x + shift of the real line.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AffineIsometry {
    pub flip: bool,
    pub shift: i64,
}

impl AffineIsometry {
    pub const IDENTITY: AffineIsometry = AffineIsometry { flip: false, shift: 0 };

    /// The reflection t(n): x ↦ 2n − x.
    pub fn reflection(n: i64) -> AffineIsometry {
        AffineIsometry { flip: true, shift: 2 * n }
    }

    /// Composition `self ∘ first` (apply `first`, then `self`).
    pub fn after(self, first: AffineIsometry) -> AffineIsometry {
        let shift = if self.flip { self.shift - first.shift } else { self.shift + first.shift };
        AffineIsometry { flip: self.flip ^ first.flip, shift }
    }
}

/// Product t(a)·t(b)·t(c), rightmost factor applied first.
pub fn triple_product(t: &Triple) -> AffineIsometry {
    AffineIsometry::reflection(t[0])
        .after(AffineIsometry::reflection(t[1]))
        .after(AffineIsometry::reflection(t[2]))
}

/// Hurwitz move on a triple of affine reflections. Pair index 0 acts on
/// positions (0,1), pair index 1 on positions (1,2).
pub fn apply_move(t: &Triple, mv: HurwitzMove) -> Triple {
    let mut out = *t;
    let p = mv.pair();
    let (u, v) = (t[p], t[p + 1]);
    if mv.is_inverse() {
        // (u, v) ↦ (v^{t(u)}, u)
        out[p] = conj(u, v);
        out[p + 1] = u;
    } else {
        // (u, v) ↦ (v, u^{t(v)})
        out[p] = v;
        out[p + 1] = conj(v, u);
    }
    out
}

/// Reduces a triple to one with two equal entries by reflecting across the
/// median. At most one initial normalization step (which may enlarge the
/// spread) brings the entries into sorted position order; every later move
/// strictly shrinks the spread.
pub fn reduce_triple(start: Triple) -> (Triple, MoveTrace) {
    let mut cur = start;
    let mut trace: MoveTrace = Vec::new();
    loop {
        let [x, y, z] = cur;
        if x == y || y == z || x == z {
            return (cur, trace);
        }
        let mv = if (y < x) != (y < z) {
            // Median in the middle position: reflect the nearer endpoint
            // across it (the new spread is the farther gap).
            if (y - x).abs() <= (z - y).abs() {
                HurwitzMove::sigma(0)
            } else {
                HurwitzMove::sigma_inv(1)
            }
        } else if (z < x) != (z < y) {
            // Median in the last position: one normalization step reflecting
            // the middle entry across the first sorts the triple.
            HurwitzMove::sigma_inv(0)
        } else {
            // Median in the first position: mirror image of the above.
            HurwitzMove::sigma(1)
        };
        cur = apply_move(&cur, mv);
        trace.push(mv);
    }
}

/// The projection W∞ ↠ W(I2(m)) on reflections: t(n) ↦ the reflection with
/// line index n mod m in the angle model.
pub fn project_line(n: i64, m: usize) -> Line {
    n.rem_euclid(m as i64) as Line
}
