//! Finite root systems with exact coordinates, and their reflection groups
//! acting as permutations of the roots.
//!
//! Coordinate models: the crystallographic types A, B, C, D, E, F carry
//! integer (or half-integer) coordinates over ℚ; H3 and H4 carry coordinates
//! over ℚ(√5). The dihedral types I2(m) use an angle-index model (roots are
//! the 2m classes k·(π/m)); for m ∈ {3, 4, 6} a crystallographic coordinate
//! model is attached alongside and kept aligned with the angle indices.
//!
//! Root indexing: positive roots get indices `0..N`, sorted lexicographically
//! by coordinate vector (numeric comparison); index `i + N` is the negative
//! of index `i`. "Positive" means the first nonzero coordinate is positive
//! (a generic dominance functional). The attached dihedral coordinates are
//! instead sign-normalized by the angular sweep that aligns them.
//!
//! Internally coordinates are scaled by a per-type factor so every entry is
//! `x + y√5` with machine integers `x, y`; all hot-path linear algebra runs
//! fraction-free on those. Public accessors undo the scaling exactly.

use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::scalar::{ExactScalar, QuadraticScalar, Rational};
use crate::{Error, Result};

use num_bigint::BigInt;

pub type RootIdx = u16;
pub type Line = u16;

/// Type tag of a finite irreducible reflection group.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GroupType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(usize),
}

impl GroupType {
    pub fn rank(&self) -> usize {
        match self {
            GroupType::A(n) | GroupType::B(n) | GroupType::C(n) | GroupType::D(n) => *n,
            GroupType::E6 => 6,
            GroupType::E7 => 7,
            GroupType::E8 => 8,
            GroupType::F4 => 4,
            GroupType::H3 => 3,
            GroupType::H4 => 4,
            GroupType::I2(_) => 2,
        }
    }

    /// Order of the reflection group (classical formulas).
    pub fn group_order(&self) -> u64 {
        fn fact(n: usize) -> u64 {
            (1..=n as u64).product()
        }
        match self {
            GroupType::A(n) => fact(n + 1),
            GroupType::B(n) | GroupType::C(n) => (1u64 << n) * fact(*n),
            GroupType::D(n) => (1u64 << (n - 1)) * fact(*n),
            GroupType::E6 => 51_840,
            GroupType::E7 => 2_903_040,
            GroupType::E8 => 696_729_600,
            GroupType::F4 => 1_152,
            GroupType::H3 => 120,
            GroupType::H4 => 14_400,
            GroupType::I2(m) => 2 * *m as u64,
        }
    }

    /// Coxeter number h = |Φ| / rank.
    pub fn coxeter_number(&self) -> usize {
        match self {
            GroupType::A(n) => n + 1,
            GroupType::B(n) | GroupType::C(n) => 2 * n,
            GroupType::D(n) => 2 * (n - 1),
            GroupType::E6 => 12,
            GroupType::E7 => 18,
            GroupType::E8 => 30,
            GroupType::F4 => 12,
            GroupType::H3 => 10,
            GroupType::H4 => 30,
            GroupType::I2(m) => *m,
        }
    }

    pub fn parse(s: &str) -> Result<GroupType> {
        let s = s.trim();
        let bad = || Error::Input(format!("unknown group type {s:?}"));
        let t = match s {
            "E6" | "e6" => GroupType::E6,
            "E7" | "e7" => GroupType::E7,
            "E8" | "e8" => GroupType::E8,
            "F4" | "f4" => GroupType::F4,
            "H3" | "h3" => GroupType::H3,
            "H4" | "h4" => GroupType::H4,
            "G2" | "g2" => GroupType::I2(6),
            _ => {
                if let Some(m) = s.strip_prefix("I2:").or_else(|| s.strip_prefix("i2:")) {
                    GroupType::I2(m.parse().map_err(|_| bad())?)
                } else if s.len() >= 2 {
                    let (head, tail) = s.split_at(1);
                    let n: usize = tail.parse().map_err(|_| bad())?;
                    match head {
                        "A" | "a" => GroupType::A(n),
                        "B" | "b" => GroupType::B(n),
                        "C" | "c" => GroupType::C(n),
                        "D" | "d" => GroupType::D(n),
                        _ => return Err(bad()),
                    }
                } else {
                    return Err(bad());
                }
            }
        };
        Ok(t)
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::A(n) => write!(f, "A{n}"),
            GroupType::B(n) => write!(f, "B{n}"),
            GroupType::C(n) => write!(f, "C{n}"),
            GroupType::D(n) => write!(f, "D{n}"),
            GroupType::E6 => write!(f, "E6"),
            GroupType::E7 => write!(f, "E7"),
            GroupType::E8 => write!(f, "E8"),
            GroupType::F4 => write!(f, "F4"),
            GroupType::H3 => write!(f, "H3"),
            GroupType::H4 => write!(f, "H4"),
            GroupType::I2(m) => write!(f, "I2:{m}"),
        }
    }
}

/// Scaled coordinate entry `x + y√5`, machine sized. All products go through
/// i128 and assert the result fits; the rank ≤ 9 matrices handled here keep
/// every intermediate far below the bound.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub(crate) struct Qa {
    pub x: i64,
    pub y: i64,
}

fn narrow(v: i128) -> i64 {
    i64::try_from(v).expect("scaled-coordinate arithmetic overflowed i64")
}

impl Qa {
    pub const ZERO: Qa = Qa { x: 0, y: 0 };

    pub fn int(x: i64) -> Qa {
        Qa { x, y: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn add(self, o: Qa) -> Qa {
        Qa { x: self.x + o.x, y: self.y + o.y }
    }

    pub fn sub(self, o: Qa) -> Qa {
        Qa { x: self.x - o.x, y: self.y - o.y }
    }

    pub fn neg(self) -> Qa {
        Qa { x: -self.x, y: -self.y }
    }

    pub fn mul(self, o: Qa) -> Qa {
        let x = self.x as i128 * o.x as i128 + 5 * self.y as i128 * o.y as i128;
        let y = self.x as i128 * o.y as i128 + self.y as i128 * o.x as i128;
        Qa { x: narrow(x), y: narrow(y) }
    }

    pub fn sign(self) -> i32 {
        let (sx, sy) = (self.x.signum() as i32, self.y.signum() as i32);
        match (sx, sy) {
            (0, 0) => 0,
            (a, b) if a >= 0 && b >= 0 => 1,
            (a, b) if a <= 0 && b <= 0 => -1,
            _ => {
                // Signs differ: compare x² against 5y².
                let lhs = self.x as i128 * self.x as i128;
                let rhs = 5 * self.y as i128 * self.y as i128;
                if lhs > rhs {
                    sx
                } else {
                    sy
                }
            }
        }
    }

    /// Exact division by another nonzero `Qa`; panics if not divisible
    /// (callers rely on Bareiss/Cartan exactness, so failure is a bug).
    pub fn exact_div(self, d: Qa) -> Qa {
        assert!(!d.is_zero(), "division by zero in scaled coordinates");
        // self / d = self·conj(d) / N(d) with N(d) = x² − 5y².
        let num = self.mul(Qa { x: d.x, y: -d.y });
        let n = d.x as i128 * d.x as i128 - 5 * d.y as i128 * d.y as i128;
        assert!(n != 0, "zero norm for nonzero ℤ[√5] element");
        let (qx, qy) = (num.x as i128, num.y as i128);
        assert!(qx % n == 0 && qy % n == 0, "inexact division in scaled coordinates");
        Qa { x: narrow(qx / n), y: narrow(qy / n) }
    }

    /// Numeric comparison (total order on real values).
    pub fn cmp_num(self, o: Qa) -> std::cmp::Ordering {
        self.sub(o).sign().cmp(&0)
    }

    /// Exact value divided by `scale`, tagged per `quad`.
    pub fn to_exact(self, scale: i64, quad: bool) -> ExactScalar {
        let rx = Rational::new(BigInt::from(self.x), BigInt::from(scale));
        if quad {
            let ry = Rational::new(BigInt::from(self.y), BigInt::from(scale));
            ExactScalar::Quad(QuadraticScalar::new(rx, ry))
        } else {
            assert!(self.y == 0, "√5 component in a rational-tagged system");
            ExactScalar::Rat(rx)
        }
    }
}

pub(crate) fn qa_dot(a: &[Qa], b: &[Qa]) -> Qa {
    let mut acc = Qa::ZERO;
    for (u, v) in a.iter().zip(b) {
        acc = acc.add(u.mul(*v));
    }
    acc
}

/// Incremental fraction-free row echelon (Bareiss) over ℤ[√5], with stack
/// discipline so backtracking searches can push and pop candidate rows.
pub(crate) struct IncrementalRank {
    rows: Vec<(Vec<Qa>, usize)>,
    pivots: Vec<Qa>,
}

impl IncrementalRank {
    pub fn new() -> Self {
        IncrementalRank { rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pushes a row if it is independent of the current span; returns whether
    /// the rank grew. Dependent rows are not stored.
    pub fn try_push(&mut self, row: &[Qa]) -> bool {
        let mut v = row.to_vec();
        for (k, (r, c)) in self.rows.iter().enumerate() {
            let prev = if k == 0 { Qa::int(1) } else { self.pivots[k - 1] };
            let p = self.pivots[k];
            let vc = v[*c];
            for j in 0..v.len() {
                let t = p.mul(v[j]).sub(vc.mul(r[j]));
                v[j] = t.exact_div(prev);
            }
        }
        match v.iter().position(|e| !e.is_zero()) {
            None => false,
            Some(c) => {
                self.pivots.push(v[c]);
                self.rows.push((v, c));
                true
            }
        }
    }

    pub fn pop(&mut self) {
        self.rows.pop();
        self.pivots.pop();
    }
}

pub(crate) fn qa_rank<R: AsRef<[Qa]>>(rows: &[R]) -> usize {
    let mut e = IncrementalRank::new();
    for r in rows {
        e.try_push(r.as_ref());
    }
    e.rank()
}

/// A group element represented by its permutation of all `2N` root indices;
/// the permutation commutes with negation by construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub(crate) perm: Vec<RootIdx>,
}

impl GroupElement {
    pub fn identity(rs: &RootSystem) -> GroupElement {
        GroupElement { perm: (0..2 * rs.n_pos() as u16).collect() }
    }

    pub fn apply(&self, r: RootIdx) -> RootIdx {
        self.perm[r as usize]
    }

    /// Image of a line (positive-root index) under the element.
    pub fn apply_line(&self, rs: &RootSystem, l: Line) -> Line {
        rs.line_of(self.perm[l as usize])
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    pub fn inverse(&self) -> GroupElement {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p as usize] = i as RootIdx;
        }
        GroupElement { perm: inv }
    }

    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = compose(self, &acc);
            k += 1;
            assert!(k <= 1_000_000, "element order runaway");
        }
        k
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({} roots)", self.perm.len())
    }
}

/// Composition `g ∘ h`: first apply `h`, then `g`.
pub fn compose(g: &GroupElement, h: &GroupElement) -> GroupElement {
    let perm = h.perm.iter().map(|&i| g.perm[i as usize]).collect();
    GroupElement { perm }
}

enum Model {
    Coords {
        /// Scaled coordinates of all 2N roots.
        small: Vec<Vec<Qa>>,
        scale: i64,
        /// True if scalars carry the ℚ(√5) tag.
        quad: bool,
        dim: usize,
    },
    /// Angle-index model for I2(m): root k sits at angle kπ/m, k ∈ 0..2m.
    /// For m ∈ {3,4,6} exact coordinates are attached, aligned so that
    /// index k of the coordinate list is the root at angle index k.
    Angle { m: usize, aligned: Option<Box<Model>> },
}

pub struct RootSystem {
    pub type_tag: GroupType,
    model: Model,
    n_pos: usize,
    rank: usize,
    simple: Vec<Line>,
    /// Reflection permutation per line.
    perms: Vec<Vec<RootIdx>>,
    /// Sign of ⟨root_i, root_j⟩ for positive i, j (flattened N×N).
    gram_sign_pos: Vec<i8>,
    /// Conjugacy classes of reflections, as a partition of lines.
    classes: Vec<Vec<Line>>,
    class_of: Vec<u16>,
}

impl RootSystem {
    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn simple_lines(&self) -> &[Line] {
        &self.simple
    }

    pub fn classes(&self) -> &[Vec<Line>] {
        &self.classes
    }

    pub fn class_of(&self, l: Line) -> u16 {
        self.class_of[l as usize]
    }

    pub fn negate(&self, r: RootIdx) -> RootIdx {
        let n = self.n_pos as RootIdx;
        if r < n {
            r + n
        } else {
            r - n
        }
    }

    pub fn line_of(&self, r: RootIdx) -> Line {
        let n = self.n_pos as RootIdx;
        if r < n {
            r
        } else {
            r - n
        }
    }

    pub fn root_sign(&self, r: RootIdx) -> i32 {
        if (r as usize) < self.n_pos {
            1
        } else {
            -1
        }
    }

    /// Image of root `r` under the reflection in `line`.
    pub fn reflect(&self, line: Line, r: RootIdx) -> RootIdx {
        self.perms[line as usize][r as usize]
    }

    pub fn as_element(&self, line: Line) -> GroupElement {
        GroupElement { perm: self.perms[line as usize].clone() }
    }

    /// Product `t_0 t_1 ⋯ t_k` of reflections, rightmost applied first.
    pub fn product_of_lines(&self, lines: &[Line]) -> GroupElement {
        let mut acc = GroupElement::identity(self);
        for &l in lines {
            acc = compose(&acc, &self.as_element(l));
        }
        acc
    }

    /// Coxeter element for an ordering of the simple system: the product of
    /// the simple reflections in the given order of positions.
    pub fn coxeter_element(&self, ordering: &[usize]) -> Result<GroupElement> {
        let r = self.simple.len();
        let mut seen = vec![false; r];
        if ordering.len() != r {
            return Err(Error::Input(format!("ordering must list all {r} simple positions")));
        }
        for &i in ordering {
            if i >= r || seen[i] {
                return Err(Error::Input("ordering is not a permutation".into()));
            }
            seen[i] = true;
        }
        let lines: Vec<Line> = ordering.iter().map(|&i| self.simple[i]).collect();
        Ok(self.product_of_lines(&lines))
    }

    fn coords_model(&self) -> Option<(&Vec<Vec<Qa>>, i64, bool, usize)> {
        match &self.model {
            Model::Coords { small, scale, quad, dim } => Some((small, *scale, *quad, *dim)),
            Model::Angle { aligned, .. } => match aligned.as_deref() {
                Some(Model::Coords { small, scale, quad, dim }) => {
                    Some((small, *scale, *quad, *dim))
                }
                _ => None,
            },
        }
    }

    /// Exact (unscaled) coordinates of a root; `None` in the angle model
    /// without attached coordinates.
    pub fn root_coords(&self, r: RootIdx) -> Option<Vec<ExactScalar>> {
        let (small, scale, quad, _) = self.coords_model()?;
        Some(small[r as usize].iter().map(|q| q.to_exact(scale, quad)).collect())
    }

    pub fn has_coords(&self) -> bool {
        self.coords_model().is_some()
    }

    pub fn ambient_dim(&self) -> Option<usize> {
        self.coords_model().map(|(_, _, _, d)| d)
    }

    pub(crate) fn small_coords(&self, r: RootIdx) -> Option<&[Qa]> {
        self.coords_model().map(|(small, _, _, _)| small[r as usize].as_slice())
    }

    fn require_coords(&self) -> Result<(&Vec<Vec<Qa>>, i64, bool, usize)> {
        self.coords_model().ok_or_else(|| {
            Error::NoCoordinates(format!(
                "no exact coordinates in the angle model of {}",
                self.type_tag
            ))
        })
    }

    /// Exact inner product ⟨root_i, root_j⟩ for arbitrary (signed) indices.
    pub fn gram(&self, i: RootIdx, j: RootIdx) -> Result<ExactScalar> {
        let (small, scale, quad, _) = self.require_coords()?;
        let g = qa_dot(&small[i as usize], &small[j as usize]);
        Ok(g.to_exact(scale * scale, quad))
    }

    /// Sign of ⟨root_i, root_j⟩ for arbitrary (signed) indices; available in
    /// every model (the angle model uses the integer sector argument).
    pub fn gram_sign(&self, i: RootIdx, j: RootIdx) -> i32 {
        let s = self.root_sign(i) * self.root_sign(j);
        let (li, lj) = (self.line_of(i) as usize, self.line_of(j) as usize);
        s * self.gram_sign_pos[li * self.n_pos + lj] as i32
    }

    /// `2⟨root_i, root_j⟩ / ⟨root_j, root_j⟩` as an exact scalar (the
    /// coefficient in the reflection formula), for signed indices.
    pub fn cartan(&self, i: RootIdx, j: RootIdx) -> Result<ExactScalar> {
        let (small, _, quad, _) = self.require_coords()?;
        let num = qa_dot(&small[i as usize], &small[j as usize]).mul(Qa::int(2));
        let den = qa_dot(&small[j as usize], &small[j as usize]);
        num.to_exact(1, quad).checked_div(&den.to_exact(1, quad))
    }

    /// Smallest set of lines containing `start` and closed under applying the
    /// reflections of the set to each other: the positive system of the
    /// reflection subgroup generated by `start`.
    pub fn subsystem_closure(&self, start: &[Line]) -> Vec<Line> {
        let mut in_set = vec![false; self.n_pos];
        let mut members: Vec<Line> = Vec::new();
        for &l in start {
            if !in_set[l as usize] {
                in_set[l as usize] = true;
                members.push(l);
            }
        }
        loop {
            let mut added = Vec::new();
            for &a in &members {
                for &b in &members {
                    let img = self.line_of(self.reflect(a, b));
                    if !in_set[img as usize] {
                        in_set[img as usize] = true;
                        added.push(img);
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            members.extend(added);
        }
        members.sort_unstable();
        members
    }

    /// The angle-model parameter m, if this is a dihedral system.
    pub fn angle_m(&self) -> Option<usize> {
        match &self.model {
            Model::Angle { m, .. } => Some(*m),
            _ => None,
        }
    }
}

/// Builds the root system for a type tag. The crystallographic realization
/// is used whenever one exists; H3/H4 are built over ℚ(√5); I2(m) uses the
/// angle model, with exact coordinates attached for m ∈ {3, 4, 6}.
pub fn build(t: GroupType) -> Result<RootSystem> {
    validate_rank(t)?;
    match t {
        GroupType::I2(m) => build_angle(t, m),
        _ => build_coords(t),
    }
}

fn validate_rank(t: GroupType) -> Result<()> {
    let bad = |family: &'static str, rank: usize| Err(Error::InvalidRank { family, rank });
    match t {
        GroupType::A(n) if n < 1 => bad("A", n),
        GroupType::B(n) if n < 2 => bad("B", n),
        GroupType::C(n) if n < 2 => bad("C", n),
        GroupType::D(n) if n < 3 => bad("D", n),
        GroupType::I2(m) if m < 3 => bad("I2", m),
        GroupType::A(n) | GroupType::B(n) | GroupType::C(n) | GroupType::D(n) if n > 9 => {
            Err(Error::Input(format!("rank {n} exceeds the supported maximum of 9")))
        }
        _ => Ok(()),
    }
}

/// Explicit (scaled) coordinate listing per type. Returns all 2N vectors,
/// plus (dim, scale, quad-tag).
fn raw_roots(t: GroupType) -> (Vec<Vec<Qa>>, usize, i64, bool) {
    let mut out: Vec<Vec<Qa>> = Vec::new();
    let mut push_pm = |v: Vec<Qa>| {
        out.push(v.iter().map(|q| q.neg()).collect());
        out.push(v);
    };
    let e = |dim: usize, i: usize, c: i64| -> Vec<Qa> {
        let mut v = vec![Qa::ZERO; dim];
        v[i] = Qa::int(c);
        v
    };
    let e2 = |dim: usize, i: usize, ci: i64, j: usize, cj: i64| -> Vec<Qa> {
        let mut v = vec![Qa::ZERO; dim];
        v[i] = Qa::int(ci);
        v[j] = Qa::int(cj);
        v
    };
    match t {
        GroupType::A(n) => {
            let dim = n + 1;
            for i in 0..dim {
                for j in (i + 1)..dim {
                    push_pm(e2(dim, i, 1, j, -1));
                }
            }
            (out, dim, 1, false)
        }
        GroupType::B(n) | GroupType::C(n) | GroupType::D(n) => {
            let dim = n;
            for i in 0..dim {
                for j in (i + 1)..dim {
                    push_pm(e2(dim, i, 1, j, 1));
                    push_pm(e2(dim, i, 1, j, -1));
                }
            }
            match t {
                GroupType::B(_) => (0..dim).for_each(|i| push_pm(e(dim, i, 1))),
                GroupType::C(_) => (0..dim).for_each(|i| push_pm(e(dim, i, 2))),
                _ => {}
            }
            (out, dim, 1, false)
        }
        GroupType::E8 | GroupType::E7 | GroupType::E6 => {
            // Scale 2: ±2e_i ± 2e_j together with (±1)^8, evenly many minus.
            let dim = 8;
            for i in 0..dim {
                for j in (i + 1)..dim {
                    push_pm(e2(dim, i, 2, j, 2));
                    push_pm(e2(dim, i, 2, j, -2));
                }
            }
            for mask in 0u32..256 {
                if mask.count_ones() % 2 == 0 {
                    let v: Vec<Qa> =
                        (0..8).map(|i| Qa::int(if mask >> i & 1 == 1 { -1 } else { 1 })).collect();
                    out.push(v);
                }
            }
            if t != GroupType::E8 {
                // Keep only roots in the span of the leading simple roots of
                // the standard E8 base: the first 7 span E7, the first 6 E6.
                let base: Vec<Vec<Qa>> = [
                    vec![1i64, -1, -1, -1, -1, -1, -1, 1],
                    vec![2, 2, 0, 0, 0, 0, 0, 0],
                    vec![-2, 2, 0, 0, 0, 0, 0, 0],
                    vec![0, -2, 2, 0, 0, 0, 0, 0],
                    vec![0, 0, -2, 2, 0, 0, 0, 0],
                    vec![0, 0, 0, -2, 2, 0, 0, 0],
                    vec![0, 0, 0, 0, -2, 2, 0, 0],
                ]
                .iter()
                .map(|v| v.iter().map(|&x| Qa::int(x)).collect())
                .collect();
                let keep = if t == GroupType::E7 { 7 } else { 6 };
                let base = base[..keep].to_vec();
                assert_eq!(qa_rank(&base), keep);
                out.retain(|r| {
                    let mut rows = base.clone();
                    rows.push(r.clone());
                    qa_rank(&rows) == keep
                });
            }
            (out, dim, 2, false)
        }
        GroupType::F4 => {
            // Scale 2: ±2e_i, ±2e_i ± 2e_j, (±1, ±1, ±1, ±1).
            let dim = 4;
            for i in 0..dim {
                push_pm(e(dim, i, 2));
                for j in (i + 1)..dim {
                    push_pm(e2(dim, i, 2, j, 2));
                    push_pm(e2(dim, i, 2, j, -2));
                }
            }
            for mask in 0u32..16 {
                let v: Vec<Qa> =
                    (0..4).map(|i| Qa::int(if mask >> i & 1 == 1 { -1 } else { 1 })).collect();
                out.push(v);
            }
            (out, dim, 2, false)
        }
        GroupType::H3 | GroupType::H4 => {
            // Scale 4 of the unit icosahedral roots; 2φ = 1+√5, 2φ⁻¹ = −1+√5.
            let two_phi = Qa { x: 1, y: 1 };
            let two_phi_inv = Qa { x: -1, y: 1 };
            let two = Qa::int(2);
            if t == GroupType::H3 {
                let dim = 3;
                for i in 0..dim {
                    push_pm(e(dim, i, 4));
                }
                // Cyclic (even) permutations of (±2, ±2φ, ±2φ⁻¹).
                let base = [two, two_phi, two_phi_inv];
                for rot in 0..3usize {
                    for mask in 0u32..8 {
                        let mut v = vec![Qa::ZERO; 3];
                        for (k, item) in base.iter().enumerate() {
                            let val = if mask >> k & 1 == 1 { item.neg() } else { *item };
                            v[(k + rot) % 3] = val;
                        }
                        out.push(v);
                    }
                }
                (out, dim, 4, true)
            } else {
                let dim = 4;
                for i in 0..dim {
                    push_pm(e(dim, i, 4));
                }
                for mask in 0u32..16 {
                    let v: Vec<Qa> =
                        (0..4).map(|i| if mask >> i & 1 == 1 { two.neg() } else { two }).collect();
                    out.push(v);
                }
                // Even permutations of (±2, ±2φ, ±2φ⁻¹, 0).
                let base = [two, two_phi, two_phi_inv, Qa::ZERO];
                for perm in even_permutations(4) {
                    for mask in 0u32..8 {
                        let mut v = vec![Qa::ZERO; 4];
                        for k in 0..4 {
                            let val =
                                if k < 3 && mask >> k & 1 == 1 { base[k].neg() } else { base[k] };
                            v[perm[k]] = val;
                        }
                        out.push(v);
                    }
                }
                (out, dim, 4, true)
            }
        }
        GroupType::I2(3) => {
            let dim = 3;
            push_pm(e2(dim, 0, 1, 1, -1));
            push_pm(e2(dim, 1, 1, 2, -1));
            push_pm(e2(dim, 0, 1, 2, -1));
            (out, dim, 1, false)
        }
        GroupType::I2(4) => {
            let dim = 2;
            push_pm(e(dim, 0, 2));
            push_pm(e(dim, 1, 2));
            push_pm(e2(dim, 0, 1, 1, 1));
            push_pm(e2(dim, 0, 1, 1, -1));
            (out, dim, 1, false)
        }
        GroupType::I2(6) => {
            let dim = 3;
            // Short ±(e_i − e_j) pattern plus long ±(2, −1, −1) pattern.
            push_pm(e2(dim, 0, 1, 1, -1));
            push_pm(e2(dim, 1, 1, 2, -1));
            push_pm(e2(dim, 0, 1, 2, -1));
            for l in [[2i64, -1, -1], [-1, 2, -1], [-1, -1, 2]] {
                push_pm(l.iter().map(|&x| Qa::int(x)).collect());
            }
            (out, dim, 1, false)
        }
        GroupType::I2(_) => unreachable!("general I2 uses the angle model"),
    }
}

fn even_permutations(n: usize) -> Vec<Vec<usize>> {
    // Brute force; only used for tiny n.
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            let mut inv = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if cur[i] > cur[j] {
                        inv += 1;
                    }
                }
            }
            if inv % 2 == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn lex_positive(v: &[Qa]) -> bool {
    for q in v {
        match q.sign() {
            0 => continue,
            s => return s > 0,
        }
    }
    false
}

fn lex_cmp(a: &[Qa], b: &[Qa]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp_num(*y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

struct CoordData {
    small: Vec<Vec<Qa>>,
    dim: usize,
    n_pos: usize,
    index: HashMap<Vec<Qa>, RootIdx>,
}

/// Orders and indexes a deduplicated full root list: positives first (sorted
/// lexicographically), negatives aligned at `i + N`.
fn index_roots(all: Vec<Vec<Qa>>, dim: usize) -> Result<CoordData> {
    let set: HashSet<Vec<Qa>> = all.iter().cloned().collect();
    if set.len() != all.len() {
        return Err(Error::Internal("duplicate roots in construction".into()));
    }
    let mut pos: Vec<Vec<Qa>> = all.iter().filter(|v| lex_positive(v)).cloned().collect();
    pos.sort_by(|a, b| lex_cmp(a, b));
    let n_pos = pos.len();
    if n_pos * 2 != all.len() {
        return Err(Error::Internal("roots do not split into ± pairs".into()));
    }
    let mut small = pos;
    for i in 0..n_pos {
        let neg: Vec<Qa> = small[i].iter().map(|q| q.neg()).collect();
        if !set.contains(&neg) {
            return Err(Error::Internal("missing negative root".into()));
        }
        small.push(neg);
    }
    let mut index = HashMap::new();
    for (i, v) in small.iter().enumerate() {
        index.insert(v.clone(), i as RootIdx);
    }
    Ok(CoordData { small, dim, n_pos, index })
}

/// Reflection of vector `v` in root `a`: `v − (2⟨v,a⟩/⟨a,a⟩)·a`, computed
/// fraction-free (the divisions are exact for root systems).
fn reflect_vec(v: &[Qa], a: &[Qa]) -> Vec<Qa> {
    let num = qa_dot(v, a).mul(Qa::int(2));
    let den = qa_dot(a, a);
    v.iter().zip(a).map(|(x, ai)| x.sub(num.mul(*ai).exact_div(den))).collect()
}

fn build_perms(data: &CoordData) -> Result<Vec<Vec<RootIdx>>> {
    let total = 2 * data.n_pos;
    let mut perms = Vec::with_capacity(data.n_pos);
    for l in 0..data.n_pos {
        let a = data.small[l].clone();
        let mut p = Vec::with_capacity(total);
        for r in 0..total {
            let img = reflect_vec(&data.small[r], &a);
            match data.index.get(&img) {
                Some(&i) => p.push(i),
                None => {
                    return Err(Error::Internal(format!(
                        "reflection image of root {r} in line {l} is not a root"
                    )))
                }
            }
        }
        perms.push(p);
    }
    Ok(perms)
}

/// Simple roots: a positive root is simple iff its reflection permutes the
/// other positive roots (sends only its own line negative). This holds in
/// the non-crystallographic cases too, unlike the sum-of-two-positives test.
fn find_simples(n_pos: usize, perms: &[Vec<RootIdx>]) -> Vec<Line> {
    let mut simples = Vec::new();
    for l in 0..n_pos {
        let negated =
            (0..n_pos).filter(|&r| perms[l][r] as usize >= n_pos).count();
        if negated == 1 {
            simples.push(l as Line);
        }
    }
    simples
}

fn union_find_classes(
    n_pos: usize,
    simple: &[Line],
    perms: &[Vec<RootIdx>],
) -> (Vec<Vec<Line>>, Vec<u16>) {
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut parent: Vec<usize> = (0..n_pos).collect();
    for l in 0..n_pos {
        for &s in simple {
            let img = perms[s as usize][l] as usize;
            let img_line = if img < n_pos { img } else { img - n_pos };
            let (a, b) = (find(&mut parent, l), find(&mut parent, img_line));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: HashMap<usize, Vec<Line>> = HashMap::new();
    for l in 0..n_pos {
        let root = find(&mut parent, l);
        groups.entry(root).or_default().push(l as Line);
    }
    let mut classes: Vec<Vec<Line>> = groups.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    let mut class_of = vec![0u16; n_pos];
    for (ci, c) in classes.iter().enumerate() {
        for &l in c {
            class_of[l as usize] = ci as u16;
        }
    }
    (classes, class_of)
}

fn build_gram_signs(data: &CoordData) -> Vec<i8> {
    let n = data.n_pos;
    let mut sign = vec![0i8; n * n];
    for i in 0..n {
        for j in 0..n {
            sign[i * n + j] = qa_dot(&data.small[i], &data.small[j]).sign() as i8;
        }
    }
    sign
}

fn validate_coords(t: GroupType, data: &CoordData, simple: &[Line]) -> Result<()> {
    let n = data.n_pos;
    // No two positive roots parallel (Φ ∩ ℝα = {±α}).
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (&data.small[i], &data.small[j]);
            let parallel =
                (0..data.dim).all(|p| (0..data.dim).all(|q| a[p].mul(b[q]) == a[q].mul(b[p])));
            if parallel {
                return Err(Error::Internal(format!("parallel positive roots {i}, {j}")));
            }
        }
    }
    // Simple roots: pairwise non-acute and a basis of the span.
    for (ai, &a) in simple.iter().enumerate() {
        for &b in &simple[ai + 1..] {
            if qa_dot(&data.small[a as usize], &data.small[b as usize]).sign() > 0 {
                return Err(Error::Internal("acute pair of simple roots".into()));
            }
        }
    }
    let span_rank = qa_rank(&data.small[..n]);
    let simple_rows: Vec<Vec<Qa>> =
        simple.iter().map(|&l| data.small[l as usize].clone()).collect();
    if simple.len() != span_rank || qa_rank(&simple_rows) != span_rank {
        return Err(Error::Internal("simple roots do not form a basis".into()));
    }
    if span_rank != t.rank() {
        return Err(Error::Internal(format!("rank mismatch for {t}: computed {span_rank}")));
    }
    // Crystallographic integrality for the ℚ-tagged types: 2⟨α,β⟩/⟨β,β⟩ ∈ ℤ.
    if !matches!(t, GroupType::H3 | GroupType::H4) {
        for i in 0..n {
            for j in 0..n {
                let num = qa_dot(&data.small[i], &data.small[j]).mul(Qa::int(2));
                let den = qa_dot(&data.small[j], &data.small[j]);
                assert!(num.y == 0 && den.y == 0);
                if num.x % den.x != 0 {
                    return Err(Error::Internal(format!(
                        "non-integral Cartan number between positive roots {i}, {j}"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn build_coords(t: GroupType) -> Result<RootSystem> {
    let (all, dim, scale, quad) = raw_roots(t);
    let data = index_roots(all, dim)?;
    let perms = build_perms(&data)?;
    let simple = find_simples(data.n_pos, &perms);
    validate_coords(t, &data, &simple)?;
    let gram_sign_pos = build_gram_signs(&data);
    let (classes, class_of) = union_find_classes(data.n_pos, &simple, &perms);
    let rank = simple.len();
    Ok(RootSystem {
        type_tag: t,
        n_pos: data.n_pos,
        rank,
        simple,
        perms,
        gram_sign_pos,
        classes,
        class_of,
        model: Model::Coords { small: data.small, scale, quad, dim },
    })
}

/// Angle model for I2(m): sign of ⟨u_k, u_j⟩ from the integer angle
/// difference, reflections by the index formula `k ↦ 2j + m − k (mod 2m)`.
fn build_angle(t: GroupType, m: usize) -> Result<RootSystem> {
    let n = m;
    let total = 2 * m;
    let mut perms = Vec::with_capacity(n);
    for j in 0..n {
        let p: Vec<RootIdx> =
            (0..total).map(|k| ((2 * j + m + total - k) % total) as RootIdx).collect();
        perms.push(p);
    }
    let mut gram_sign_pos = vec![0i8; n * n];
    for k in 0..n {
        for j in 0..n {
            gram_sign_pos[k * n + j] = angle_cos_sign(k as i64 - j as i64, m) as i8;
        }
    }
    // Simple lines 0 and m−1 bound a chamber.
    let simple = vec![0 as Line, (m - 1) as Line];
    let classes = if m % 2 == 1 {
        vec![(0..n as Line).collect::<Vec<_>>()]
    } else {
        vec![
            (0..n as Line).step_by(2).collect::<Vec<_>>(),
            (1..n as Line).step_by(2).collect::<Vec<_>>(),
        ]
    };
    let mut class_of = vec![0u16; n];
    for (ci, c) in classes.iter().enumerate() {
        for &l in c {
            class_of[l as usize] = ci as u16;
        }
    }
    let aligned = if matches!(m, 3 | 4 | 6) {
        Some(Box::new(build_aligned_dihedral_coords(t, m, &perms)?))
    } else {
        None
    };
    Ok(RootSystem {
        type_tag: t,
        n_pos: n,
        rank: 2,
        simple,
        perms,
        gram_sign_pos,
        classes,
        class_of,
        model: Model::Angle { m, aligned },
    })
}

/// Sign of cos(dπ/m) for integer d.
fn angle_cos_sign(d: i64, m: usize) -> i32 {
    let m = m as i64;
    let e = d.rem_euclid(2 * m);
    let e = e.min(2 * m - e); // now 0 ≤ e ≤ m
    match (2 * e).cmp(&m) {
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => -1,
    }
}

/// Builds the exact coordinate companion for I2(m), m ∈ {3,4,6}, ordered so
/// that coordinate root k sits at angle index k, and validates the full
/// dihedral multiplication table against the angle-model permutations.
fn build_aligned_dihedral_coords(
    t: GroupType,
    m: usize,
    angle_perms: &[Vec<RootIdx>],
) -> Result<Model> {
    let (all, dim, scale, quad) = raw_roots(t);
    let data = index_roots(all, dim)?;
    if data.n_pos != m {
        return Err(Error::Internal("dihedral coordinate count mismatch".into()));
    }
    let order = angular_order(&data)?;
    // Reindex: aligned[k] = coordinates of the root at angle index k, with
    // the sign normalization of the angular sweep (upper half plane).
    let mut small = vec![Vec::new(); 2 * m];
    for (k, (line, flip)) in order.iter().enumerate() {
        let v = data.small[*line as usize].clone();
        let v: Vec<Qa> = if *flip { v.iter().map(|q| q.neg()).collect() } else { v };
        small[k + m] = v.iter().map(|q| q.neg()).collect();
        small[k] = v;
    }
    // The coordinate reflection of every root in every line must land on the
    // angle-model image.
    for a in 0..m {
        for r in 0..2 * m {
            let img = reflect_vec(&small[r], &small[a]);
            if small[angle_perms[a][r] as usize] != img {
                return Err(Error::Internal(
                    "aligned dihedral coordinates disagree with the angle model".into(),
                ));
            }
        }
    }
    Ok(Model::Coords { small, scale, quad, dim })
}

/// Sorts the positive lines of a rank-2 coordinate system by angle in [0, π),
/// returning (line, flipped) pairs; `flipped` marks that the negative root is
/// the upper-half-plane representative.
fn angular_order(data: &CoordData) -> Result<Vec<(Line, bool)>> {
    // Planar coordinates x = ⟨v, u⟩, y = ⟨v, w_perp⟩ against the first root
    // u and the perpendicular part of a second root w. The axes are not
    // equally scaled, but that distortion is monotone on (0, π), and only the
    // angular order matters here.
    let u = data.small[0].clone();
    let uu = qa_dot(&u, &u);
    let mut w_idx = None;
    for l in 1..data.n_pos {
        if qa_rank(&[u.clone(), data.small[l].clone()]) == 2 {
            w_idx = Some(l);
            break;
        }
    }
    let w = data.small[w_idx.ok_or_else(|| Error::Internal("rank-2 system is degenerate".into()))?]
        .clone();
    let uw = qa_dot(&u, &w);
    let mut planar: Vec<(Line, bool, Qa, Qa)> = Vec::new();
    for l in 0..data.n_pos {
        let v = &data.small[l];
        let x = qa_dot(v, &u);
        // ⟨v, w_perp⟩ with w_perp = |u|²·w − ⟨u,w⟩·u.
        let y = qa_dot(v, &w).mul(uu).sub(x.mul(uw));
        let ysign = y.sign();
        let flip = ysign < 0 || (ysign == 0 && x.sign() < 0);
        if flip {
            planar.push((l as Line, true, x.neg(), y.neg()));
        } else {
            planar.push((l as Line, false, x, y));
        }
    }
    // cross(v1, v2) > 0 means angle(v1) < angle(v2) within [0, π).
    planar.sort_by(|a, b| {
        let cross = a.2.mul(b.3).sub(a.3.mul(b.2));
        0.cmp(&cross.sign())
    });
    Ok(planar.into_iter().map(|(l, f, _, _)| (l, f)).collect())
}

/// JSON dump of a root system: tag, coordinates, simple lines, classes.
#[derive(Serialize)]
pub struct RootSystemDump {
    pub type_tag: String,
    pub rank: usize,
    pub positive_count: usize,
    pub root_count: usize,
    /// Coordinates of all roots, positives (index order) then their
    /// negatives; absent for the pure angle model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<Vec<ExactScalar>>>,
    /// Angle-model parameter when there are no coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle_m: Option<usize>,
    pub simple: Vec<Line>,
    pub classes: Vec<Vec<Line>>,
}

pub fn dump(rs: &RootSystem) -> RootSystemDump {
    let roots = if rs.has_coords() {
        Some((0..2 * rs.n_pos() as RootIdx).map(|i| rs.root_coords(i).unwrap()).collect())
    } else {
        None
    };
    RootSystemDump {
        type_tag: rs.type_tag.to_string(),
        rank: rs.rank(),
        positive_count: rs.n_pos(),
        root_count: 2 * rs.n_pos(),
        roots,
        angle_m: if rs.has_coords() { None } else { rs.angle_m() },
        simple: rs.simple_lines().to_vec(),
        classes: rs.classes().to_vec(),
    }
}

/// Order of the product of two reflections (Coxeter diagram label).
pub fn pair_order(rs: &RootSystem, a: Line, b: Line) -> usize {
    compose(&rs.as_element(a), &rs.as_element(b)).order()
}
