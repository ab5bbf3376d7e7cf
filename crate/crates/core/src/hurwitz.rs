//! The Hurwitz action on reflection factorizations, its lift to
//! m-dependences of roots, and the rewriting machinery built on both:
//! reflection length, orbit closures, weight reduction, and the
//! standard-form algorithm.
//!
//! A factorization is a tuple of lines (positive-root indices); the group
//! element it factors is `product_of_lines`, which applies the rightmost
//! factor first.  Move indices are 0-based throughout: the move at pair `i`
//! touches positions `i` and `i + 1`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::circuits::{self, scalar_like};
use crate::dihedral;
use crate::rootsys::{compose, GroupElement, Line, RootIdx, RootSystem};
use crate::scalar::ExactScalar;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Moves

/// One Hurwitz move, encoded as a signed index for cheap serialization:
/// value `+(i+1)` is the braid move at pair `i`, value `-(i+1)` its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct HurwitzMove(pub i32);

impl HurwitzMove {
    pub fn sigma(pair: usize) -> HurwitzMove {
        HurwitzMove(pair as i32 + 1)
    }

    pub fn sigma_inv(pair: usize) -> HurwitzMove {
        HurwitzMove(-(pair as i32 + 1))
    }

    /// 0-based pair index the move acts on.
    pub fn pair(self) -> usize {
        self.0.unsigned_abs() as usize - 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> HurwitzMove {
        HurwitzMove(-self.0)
    }
}

/// A replayable certificate: moves are applied left to right.
pub type MoveTrace = Vec<HurwitzMove>;

fn shifted(mv: HurwitzMove, offset: usize) -> HurwitzMove {
    let p = mv.pair() + offset;
    if mv.is_inverse() {
        HurwitzMove::sigma_inv(p)
    } else {
        HurwitzMove::sigma(p)
    }
}

/// Conjugate: the line of s_by(α_arg).
fn conj_line(rs: &RootSystem, by: Line, arg: Line) -> Line {
    rs.line_of(rs.reflect(by, arg as RootIdx))
}

/// Applies one move to a factorization.  The braid move sends
/// (tᵢ, tᵢ₊₁) to (tᵢ₊₁, tᵢ₊₁tᵢtᵢ₊₁); its inverse sends it to (tᵢtᵢ₊₁tᵢ, tᵢ).
/// The product is preserved either way.
pub fn apply_move(rs: &RootSystem, f: &[Line], mv: HurwitzMove) -> Result<Vec<Line>> {
    let p = mv.pair();
    if p + 1 >= f.len() {
        return Err(Error::Input(format!(
            "move at pair {p} out of range for a factorization of length {}",
            f.len()
        )));
    }
    let mut out = f.to_vec();
    let (a, b) = (f[p], f[p + 1]);
    if mv.is_inverse() {
        out[p] = conj_line(rs, a, b);
        out[p + 1] = a;
    } else {
        out[p] = b;
        out[p + 1] = conj_line(rs, b, a);
    }
    Ok(out)
}

/// Braid move at pair `i` (0-based).
pub fn sigma(rs: &RootSystem, f: &[Line], i: usize) -> Result<Vec<Line>> {
    apply_move(rs, f, HurwitzMove::sigma(i))
}

/// Inverse braid move at pair `i` (0-based).
pub fn sigma_inv(rs: &RootSystem, f: &[Line], i: usize) -> Result<Vec<Line>> {
    apply_move(rs, f, HurwitzMove::sigma_inv(i))
}

pub fn apply_trace(rs: &RootSystem, f: &[Line], trace: &[HurwitzMove]) -> Result<Vec<Line>> {
    let mut cur = f.to_vec();
    for &mv in trace {
        cur = apply_move(rs, &cur, mv)?;
    }
    Ok(cur)
}

/// Sorted multiset of reflection-class ids, a Hurwitz invariant.
pub fn class_multiset(rs: &RootSystem, f: &[Line]) -> Vec<u16> {
    let mut ms: Vec<u16> = f.iter().map(|&l| rs.class_of(l)).collect();
    ms.sort_unstable();
    ms
}

// ---------------------------------------------------------------------------
// Reflection length

/// Minimal number of reflections whose product is `w`, computed as the rank
/// of the displacement rows α − w(α) over the simple roots.  Rank-2 systems
/// without coordinates fall back on the order-of-motion pattern: identity,
/// reflection, rotation.
pub fn reflection_length(rs: &RootSystem, w: &GroupElement) -> usize {
    if w.is_identity() {
        return 0;
    }
    if rs.angle_m().is_some() {
        for l in 0..rs.n_pos() as Line {
            if &rs.as_element(l) == w {
                return 1;
            }
        }
        return 2;
    }
    let dim = rs.ambient_dim().expect("coordinate systems carry an ambient dimension");
    let rows: Vec<Vec<crate::rootsys::Qa>> = rs
        .simple_lines()
        .iter()
        .map(|&s| {
            let a = rs.small_coords(s as RootIdx).expect("simple root has coordinates");
            let img = rs
                .small_coords(w.apply(s as RootIdx))
                .expect("image root has coordinates");
            (0..dim).map(|k| a[k].sub(img[k])).collect()
        })
        .collect();
    crate::rootsys::qa_rank(&rows)
}

/// Word length of every group element over the full reflection set, by
/// breadth-first search.  Exponential in rank; intended as an independent
/// cross-check for small groups.
pub fn length_table_bfs(rs: &RootSystem) -> HashMap<GroupElement, usize> {
    let id = GroupElement::identity(rs);
    let mut dist = HashMap::new();
    dist.insert(id.clone(), 0usize);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        for l in 0..rs.n_pos() as Line {
            let h = compose(&rs.as_element(l), &g);
            if !dist.contains_key(&h) {
                dist.insert(h.clone(), d + 1);
                queue.push_back(h);
            }
        }
    }
    dist
}

// ---------------------------------------------------------------------------
// Orbits

/// A Hurwitz orbit computed by breadth-first closure.  `elements[0]` is the
/// seed; `trace_to(i)` replays from the seed to `elements[i]`.
pub struct Orbit {
    pub elements: Vec<Vec<Line>>,
    pub complete: bool,
    parents: Vec<Option<(usize, HurwitzMove)>>,
    index: HashMap<Vec<Line>, usize>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, f: &[Line]) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn trace_to(&self, mut idx: usize) -> MoveTrace {
        let mut rev = MoveTrace::new();
        while let Some((parent, mv)) = self.parents[idx] {
            rev.push(mv);
            idx = parent;
        }
        rev.reverse();
        rev
    }
}

/// Closes a factorization under both braid moves at every pair.  Stops after
/// `budget` stored elements and reports the truncation via `complete`.
pub fn hurwitz_orbit(rs: &RootSystem, f: &[Line], budget: usize) -> Result<Orbit> {
    let mut orbit = Orbit {
        elements: vec![f.to_vec()],
        complete: true,
        parents: vec![None],
        index: HashMap::from([(f.to_vec(), 0usize)]),
    };
    let mut queue = VecDeque::from([0usize]);
    'bfs: while let Some(j) = queue.pop_front() {
        let pairs = orbit.elements[j].len().saturating_sub(1);
        for p in 0..pairs {
            for mv in [HurwitzMove::sigma(p), HurwitzMove::sigma_inv(p)] {
                let g = apply_move(rs, &orbit.elements[j], mv)?;
                if orbit.index.contains_key(&g) {
                    continue;
                }
                if orbit.elements.len() >= budget {
                    orbit.complete = false;
                    break 'bfs;
                }
                let k = orbit.elements.len();
                orbit.index.insert(g.clone(), k);
                orbit.elements.push(g);
                orbit.parents.push(Some((j, mv)));
                queue.push_back(k);
            }
        }
    }
    Ok(orbit)
}

/// Moves the factors at the given (strictly increasing) positions to the
/// front, in order and unchanged; displaced factors are conjugated rightward.
/// For the k-th selected position p this applies the braid moves at pairs
/// p−1, p−2, …, k.
pub fn move_to_prefix(
    rs: &RootSystem,
    f: &[Line],
    positions: &[usize],
) -> Result<(Vec<Line>, MoveTrace)> {
    for pair in positions.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::Input("positions must be strictly increasing".into()));
        }
    }
    if let Some(&last) = positions.last() {
        if last >= f.len() {
            return Err(Error::Input(format!(
                "position {last} out of range for length {}",
                f.len()
            )));
        }
    }
    let mut cur = f.to_vec();
    let mut trace = MoveTrace::new();
    for (k, &p) in positions.iter().enumerate() {
        for j in (k..p).rev() {
            let mv = HurwitzMove::sigma(j);
            cur = apply_move(rs, &cur, mv)?;
            trace.push(mv);
        }
    }
    Ok((cur, trace))
}

// ---------------------------------------------------------------------------
// m-dependences and lifted moves

/// A linear dependence Σ cᵢ·αᵢ = 0 carried as an ordered tuple of roots
/// (signed indices) with exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct MDependence {
    pub roots: Vec<RootIdx>,
    pub coeffs: Vec<ExactScalar>,
}

impl MDependence {
    pub fn new(roots: Vec<RootIdx>, coeffs: Vec<ExactScalar>) -> Result<MDependence> {
        if roots.len() != coeffs.len() {
            return Err(Error::Input("roots and coefficients must have equal length".into()));
        }
        Ok(MDependence { roots, coeffs })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn lines(&self, rs: &RootSystem) -> Vec<Line> {
        self.roots.iter().map(|&r| rs.line_of(r)).collect()
    }

    /// Σ |cᵢ|, the quantity every reduction step strictly decreases.
    pub fn weight(&self) -> ExactScalar {
        let mut acc = scalar_like(0, self.coeffs.first().expect("nonempty dependence"));
        for c in &self.coeffs {
            acc = &acc + &c.abs();
        }
        acc
    }

    /// Checks Σ cᵢ·αᵢ = 0 in exact coordinates.
    pub fn is_valid(&self, rs: &RootSystem) -> Result<bool> {
        if self.roots.is_empty() {
            return Ok(true);
        }
        let dim = rs
            .ambient_dim()
            .ok_or_else(|| Error::NoCoordinates(rs.type_tag.to_string()))?;
        let zero = scalar_like(0, &self.coeffs[0]);
        let mut sum = vec![zero; dim];
        for (r, c) in self.roots.iter().zip(&self.coeffs) {
            let coords = rs
                .root_coords(*r)
                .ok_or_else(|| Error::NoCoordinates(rs.type_tag.to_string()))?;
            for k in 0..dim {
                sum[k] = &sum[k] + &(c * &coords[k]);
            }
        }
        Ok(sum.iter().all(|v| v.is_zero()))
    }
}

fn check_pair(d: &MDependence, i: usize) -> Result<()> {
    if i + 1 >= d.len() {
        return Err(Error::Input(format!(
            "lifted move at pair {i} out of range for a dependence of length {}",
            d.len()
        )));
    }
    Ok(())
}

/// Lifted braid move: (αᵢ, αᵢ₊₁; cᵢ, cᵢ₊₁) becomes
/// (αᵢ₊₁, s_{αᵢ₊₁}(αᵢ); cᵢ₊₁ + χ·cᵢ, cᵢ) with χ = 2⟨αᵢ, αᵢ₊₁⟩ / |αᵢ₊₁|².
pub fn lifted_sigma(rs: &RootSystem, d: &MDependence, i: usize) -> Result<MDependence> {
    check_pair(d, i)?;
    let (a, b) = (d.roots[i], d.roots[i + 1]);
    let chi = rs.cartan(a, b)?;
    let mut out = d.clone();
    out.roots[i] = b;
    out.roots[i + 1] = rs.reflect(rs.line_of(b), a);
    out.coeffs[i] = &d.coeffs[i + 1] + &(&chi * &d.coeffs[i]);
    out.coeffs[i + 1] = d.coeffs[i].clone();
    Ok(out)
}

/// Inverse lifted braid move: (αᵢ, αᵢ₊₁; cᵢ, cᵢ₊₁) becomes
/// (s_{αᵢ}(αᵢ₊₁), αᵢ; cᵢ₊₁, cᵢ + χ′·cᵢ₊₁) with χ′ = 2⟨αᵢ₊₁, αᵢ⟩ / |αᵢ|².
pub fn lifted_sigma_inv(rs: &RootSystem, d: &MDependence, i: usize) -> Result<MDependence> {
    check_pair(d, i)?;
    let (a, b) = (d.roots[i], d.roots[i + 1]);
    let chi = rs.cartan(b, a)?;
    let mut out = d.clone();
    out.roots[i] = rs.reflect(rs.line_of(a), b);
    out.roots[i + 1] = a;
    out.coeffs[i] = d.coeffs[i + 1].clone();
    out.coeffs[i + 1] = &d.coeffs[i] + &(&chi * &d.coeffs[i + 1]);
    Ok(out)
}

/// Sign-change involution: negates the i-th root and coefficient.
pub fn epsilon(rs: &RootSystem, d: &MDependence, i: usize) -> Result<MDependence> {
    if i >= d.len() {
        return Err(Error::Input(format!(
            "sign change at {i} out of range for a dependence of length {}",
            d.len()
        )));
    }
    let mut out = d.clone();
    out.roots[i] = rs.negate(d.roots[i]);
    out.coeffs[i] = -d.coeffs[i].clone();
    Ok(out)
}

pub fn lifted_apply_move(rs: &RootSystem, d: &MDependence, mv: HurwitzMove) -> Result<MDependence> {
    if mv.is_inverse() {
        lifted_sigma_inv(rs, d, mv.pair())
    } else {
        lifted_sigma(rs, d, mv.pair())
    }
}

pub fn lifted_apply_trace(
    rs: &RootSystem,
    d: &MDependence,
    trace: &[HurwitzMove],
) -> Result<MDependence> {
    let mut cur = d.clone();
    for &mv in trace {
        cur = lifted_apply_move(rs, &cur, mv)?;
    }
    Ok(cur)
}

/// Sign of ⟨cₚ·αₚ, c_q·α_q⟩: positive means acute, negative obtuse.
fn entry_pair_sign(rs: &RootSystem, d: &MDependence, p: usize, q: usize) -> i32 {
    d.coeffs[p].sign() * d.coeffs[q].sign() * rs.gram_sign(d.roots[p], d.roots[q])
}

/// Breadth-first closure of a dependence under both lifted braid moves.
/// Returns (visited count, completed) and stops at `budget` elements.
pub fn lifted_orbit(rs: &RootSystem, d: &MDependence, budget: usize) -> Result<(usize, bool)> {
    let mut seen: HashSet<MDependence> = HashSet::from([d.clone()]);
    let mut queue = VecDeque::from([d.clone()]);
    while let Some(x) = queue.pop_front() {
        for i in 0..x.len().saturating_sub(1) {
            for inv in [false, true] {
                let y = if inv {
                    lifted_sigma_inv(rs, &x, i)?
                } else {
                    lifted_sigma(rs, &x, i)?
                };
                if !seen.contains(&y) {
                    if seen.len() >= budget {
                        return Ok((seen.len(), false));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
    }
    Ok((seen.len(), true))
}

// ---------------------------------------------------------------------------
// Weight reduction

/// Two-sided acuteness split: `true` marks the entries acutely connected to
/// entry 0 (connectivity through strictly acute pairs of signed entries).
fn acute_component_of_first(rs: &RootSystem, d: &MDependence) -> Vec<bool> {
    let m = d.len();
    let mut side = vec![false; m];
    side[0] = true;
    let mut stack = vec![0usize];
    while let Some(p) = stack.pop() {
        for q in 0..m {
            if !side[q] && entry_pair_sign(rs, d, p, q) > 0 {
                side[q] = true;
                stack.push(q);
            }
        }
    }
    side
}

fn lower_at(
    rs: &RootSystem,
    d: &MDependence,
    i: usize,
    mut trace: MoveTrace,
) -> Result<(MDependence, MoveTrace)> {
    let w0 = d.weight();
    let up = lifted_sigma(rs, d, i)?;
    if up.weight() < w0 {
        trace.push(HurwitzMove::sigma(i));
        return Ok((up, trace));
    }
    let down = lifted_sigma_inv(rs, d, i)?;
    if down.weight() < w0 {
        trace.push(HurwitzMove::sigma_inv(i));
        return Ok((down, trace));
    }
    Err(Error::Internal(
        "an obtuse adjacent pair failed to lower the weight".into(),
    ))
}

/// One strict weight reduction on a dependence supported on a circuit with
/// all coefficients nonzero and at least three entries.  Strategy: take the
/// leftmost adjacent strictly obtuse pair if one exists; otherwise bubble the
/// acuteness component of entry 0 rightward past the rest (orthogonal swaps
/// commute for free) until the first obtuse adjacency appears, then apply
/// whichever lifted move strictly lowers the weight.
pub fn reduce_weight_step(rs: &RootSystem, d: &MDependence) -> Result<(MDependence, MoveTrace)> {
    let m = d.len();
    if m < 3 {
        return Err(Error::Input("weight reduction needs at least three entries".into()));
    }
    if d.coeffs.iter().any(|c| c.is_zero()) {
        return Err(Error::Input("weight reduction requires nonzero coefficients".into()));
    }
    for i in 0..m - 1 {
        if entry_pair_sign(rs, d, i, i + 1) < 0 {
            return lower_at(rs, d, i, MoveTrace::new());
        }
    }
    let side = acute_component_of_first(rs, d);
    if side.iter().all(|&s| s) {
        return Err(Error::Internal(
            "acutely connected support in a circuit dependence".into(),
        ));
    }
    // Name the sides so that some obtuse cross pair is an inversion for the
    // sort that sends `back` entries to the end; the bubble must then meet an
    // obtuse adjacency before it finishes.
    let mut back = None;
    'scan: for p in 0..m {
        for q in p + 1..m {
            if side[p] != side[q] && entry_pair_sign(rs, d, p, q) < 0 {
                back = Some(side[p]);
                break 'scan;
            }
        }
    }
    let Some(back) = back else {
        return Err(Error::Internal(
            "no obtuse pair across the acuteness split of a circuit".into(),
        ));
    };
    let mut cur = d.clone();
    let mut tags = side;
    let mut trace = MoveTrace::new();
    for _ in 0..m * m + 2 {
        let Some(k) = (0..m - 1).find(|&k| tags[k] == back && tags[k + 1] != back) else {
            return Err(Error::Internal(
                "commutation schedule finished without an obtuse adjacency".into(),
            ));
        };
        match entry_pair_sign(rs, &cur, k, k + 1) {
            0 => {
                cur = lifted_sigma(rs, &cur, k)?;
                tags.swap(k, k + 1);
                trace.push(HurwitzMove::sigma(k));
            }
            s if s < 0 => return lower_at(rs, &cur, k, trace),
            _ => {
                return Err(Error::Internal(
                    "acute pair across the acuteness split".into(),
                ))
            }
        }
    }
    Err(Error::Internal("commutation schedule failed to terminate".into()))
}

// ---------------------------------------------------------------------------
// Main reduction step and standard form

fn first_equal_pair(f: &[Line]) -> Option<(usize, usize)> {
    for p in 0..f.len() {
        for q in p + 1..f.len() {
            if f[p] == f[q] {
                return Some((p, q));
            }
        }
    }
    None
}

/// Greedy left-to-right pruning of `candidates` (tuple positions) down to an
/// inclusion-minimal dependent subset, i.e. a circuit of lines.
fn extract_dependent_positions(
    rs: &RootSystem,
    f: &[Line],
    candidates: &[usize],
) -> Result<Vec<usize>> {
    let dependent = |pos: &[usize]| -> Result<bool> {
        let roots: Vec<RootIdx> = pos.iter().map(|&p| f[p] as RootIdx).collect();
        match circuits::find_dependence(rs, &roots) {
            Ok(None) => Ok(false),
            Ok(Some(_)) => Ok(true),
            Err(Error::NotCircuit { .. }) => Ok(true),
            Err(e) => Err(e),
        }
    };
    let mut pos = candidates.to_vec();
    if !dependent(&pos)? {
        return Err(Error::Independent);
    }
    let mut i = 0;
    while i < pos.len() {
        let mut trial = pos.clone();
        trial.remove(i);
        if dependent(&trial)? {
            pos = trial;
        } else {
            i += 1;
        }
    }
    Ok(pos)
}

/// Rewrites a non-reduced factorization, inside its Hurwitz orbit, so that
/// the first two factors are equal.  Returns the rewritten tuple, the trace,
/// and the short prefix length (always 2).
///
/// Rank-2 angle systems route through the infinite dihedral cover: the
/// leading triple is reduced there and the trace replayed.  Coordinate
/// systems extract a circuit of factors, pull it to the front, and drive the
/// lifted weight reduction until a coefficient vanishes; the surviving
/// entries shrink strictly, so the outer loop terminates.
pub fn main_lemma_step(rs: &RootSystem, f: &[Line]) -> Result<(Vec<Line>, MoveTrace, usize)> {
    let m = f.len();
    let w = rs.product_of_lines(f);
    let l = reflection_length(rs, &w);
    if l >= m {
        return Err(Error::Input(format!(
            "factorization is already reduced: length {l} with {m} factors"
        )));
    }
    if m == 2 {
        if f[0] == f[1] {
            return Ok((f.to_vec(), MoveTrace::new(), 2));
        }
        return Err(Error::Internal(
            "a non-reduced pair must consist of equal reflections".into(),
        ));
    }
    let mut cur = f.to_vec();
    let mut trace = MoveTrace::new();
    // Positions known to carry a dependent set, once a coefficient vanished.
    let mut window: Option<Vec<usize>> = None;
    loop {
        if let Some((p, q)) = first_equal_pair(&cur) {
            let (nf, tr) = move_to_prefix(rs, &cur, &[p, q])?;
            trace.extend(tr);
            debug_assert_eq!(nf[0], nf[1]);
            return Ok((nf, trace, 2));
        }
        if rs.angle_m().is_some() {
            let triple = [cur[0] as i64, cur[1] as i64, cur[2] as i64];
            let (_, tr) = dihedral::reduce_triple(triple);
            for mv in tr {
                cur = apply_move(rs, &cur, mv)?;
                trace.push(mv);
            }
            continue;
        }
        let all: Vec<usize> = (0..cur.len()).collect();
        let pos = extract_dependent_positions(rs, &cur, window.as_deref().unwrap_or(&all))?;
        let m1 = pos.len();
        let (nf, tr) = move_to_prefix(rs, &cur, &pos)?;
        cur = nf;
        trace.extend(tr);
        let coeffs = match circuits::find_dependence(rs, &cur[..m1])? {
            Some(c) => c,
            None => return Err(Error::Internal("extracted subset lost its dependence".into())),
        };
        let mut dep = MDependence {
            roots: cur[..m1].iter().map(|&l| l as RootIdx).collect(),
            coeffs,
        };
        let mut guard = 0usize;
        loop {
            if dep.coeffs.iter().any(|c| c.is_zero()) {
                let keep: Vec<usize> =
                    (0..dep.len()).filter(|&i| !dep.coeffs[i].is_zero()).collect();
                if keep.len() == 2 {
                    let (nf, tr) = move_to_prefix(rs, &cur, &keep)?;
                    trace.extend(tr);
                    debug_assert_eq!(nf[0], nf[1]);
                    return Ok((nf, trace, 2));
                }
                window = Some(keep);
                break;
            }
            let (nd, tr) = reduce_weight_step(rs, &dep)?;
            for &mv in &tr {
                cur = apply_move(rs, &cur, mv)?;
            }
            trace.extend(tr);
            dep = nd;
            debug_assert!((0..dep.len()).all(|i| rs.line_of(dep.roots[i]) == cur[i]));
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::Internal("weight reduction exceeded its safety bound".into()));
            }
        }
    }
}

/// Rewrites a factorization into standard form: (m − ℓ)/2 leading equal
/// pairs followed by a shortest factorization of the product, where ℓ is the
/// product's reflection length.  The trace replays the input to the output.
pub fn standard_form(rs: &RootSystem, f: &[Line]) -> Result<(Vec<Line>, MoveTrace)> {
    let m = f.len();
    let w = rs.product_of_lines(f);
    let l = reflection_length(rs, &w);
    if m < l || (m - l) % 2 != 0 {
        return Err(Error::Input(format!(
            "no factorization of a length-{l} element has {m} reflection factors"
        )));
    }
    let mut cur = f.to_vec();
    let mut trace = MoveTrace::new();
    let mut offset = 0usize;
    while m - offset > l {
        let (sub, tr, _) = main_lemma_step(rs, &cur[offset..])?;
        for mv in tr {
            trace.push(shifted(mv, offset));
        }
        cur.truncate(offset);
        cur.extend_from_slice(&sub);
        offset += 2;
    }
    Ok((cur, trace))
}

// ---------------------------------------------------------------------------
// Quasi-Coxeter elements and theorem verification

/// True when some shortest reflection factorization of `w` has a factor set
/// whose root subsystem closure is the whole system (i.e. the factors
/// generate the group).
pub fn is_quasi_coxeter(rs: &RootSystem, w: &GroupElement) -> bool {
    let l = reflection_length(rs, w);
    if l == 0 {
        return false;
    }
    fn dfs(rs: &RootSystem, rem: &GroupElement, depth: usize, chosen: &mut Vec<Line>) -> bool {
        if depth == 0 {
            return rs.subsystem_closure(chosen).len() == rs.n_pos();
        }
        for t in 0..rs.n_pos() as Line {
            let rest = compose(&rs.as_element(t), rem);
            if reflection_length(rs, &rest) == depth - 1 {
                chosen.push(t);
                if dfs(rs, &rest, depth - 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    dfs(rs, w, l, &mut Vec::new())
}

fn enumerate_rec(
    rs: &RootSystem,
    rem: &GroupElement,
    depth: usize,
    prefix: &mut Vec<Line>,
    out: &mut Vec<Vec<Line>>,
    visited: &mut usize,
    budget: usize,
) -> Result<()> {
    *visited += 1;
    if *visited > budget {
        return Err(Error::BudgetExceeded { visited: *visited, budget });
    }
    if depth == 0 {
        if rem.is_identity() {
            out.push(prefix.clone());
        }
        return Ok(());
    }
    for t in 0..rs.n_pos() as Line {
        let rest = compose(&rs.as_element(t), rem);
        let lr = reflection_length(rs, &rest);
        if lr + 1 <= depth && (depth - 1 - lr) % 2 == 0 {
            prefix.push(t);
            enumerate_rec(rs, &rest, depth - 1, prefix, out, visited, budget)?;
            prefix.pop();
        }
    }
    Ok(())
}

/// All length-`m` reflection factorizations of `c`, in lexicographic order.
pub fn enumerate_factorizations(
    rs: &RootSystem,
    c: &GroupElement,
    m: usize,
    budget: usize,
) -> Result<Vec<Vec<Line>>> {
    let mut out = Vec::new();
    let mut visited = 0usize;
    enumerate_rec(rs, c, m, &mut Vec::new(), &mut out, &mut visited, budget)?;
    Ok(out)
}

#[derive(Serialize, Debug, Clone)]
pub struct OrbitReport {
    pub size: usize,
    pub multiset: Vec<u16>,
    pub witness: Vec<Line>,
}

#[derive(Serialize, Debug, Clone)]
pub struct TheoremReport {
    pub orbits: Vec<OrbitReport>,
    pub total_factorizations: usize,
    pub agreement: bool,
}

/// Enumerates every length-`m` factorization of `c`, partitions them into
/// Hurwitz orbits, and checks that this partition coincides with the
/// partition by class multiset.
pub fn verify_theorem(
    rs: &RootSystem,
    c: &GroupElement,
    m: usize,
    budget: usize,
) -> Result<TheoremReport> {
    if m == 0 {
        return Err(Error::Input("factorization length must be positive".into()));
    }
    let facs = enumerate_factorizations(rs, c, m, budget)?;
    let index: HashMap<&[Line], usize> =
        facs.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let mut orbit_of = vec![usize::MAX; facs.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..facs.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let oid = orbits.len();
        orbit_of[start] = oid;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(j) = queue.pop_front() {
            for p in 0..m.saturating_sub(1) {
                for mv in [HurwitzMove::sigma(p), HurwitzMove::sigma_inv(p)] {
                    let g = apply_move(rs, &facs[j], mv)?;
                    let &k = index.get(g.as_slice()).ok_or_else(|| {
                        Error::Internal("a move left the enumerated factorization set".into())
                    })?;
                    if orbit_of[k] == usize::MAX {
                        orbit_of[k] = oid;
                        members.push(k);
                        queue.push_back(k);
                    }
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    let mut agreement = true;
    let mut reports: Vec<OrbitReport> = Vec::new();
    for members in &orbits {
        let witness = facs[members[0]].clone();
        let multiset = class_multiset(rs, &witness);
        if members.iter().any(|&j| class_multiset(rs, &facs[j]) != multiset) {
            agreement = false;
        }
        reports.push(OrbitReport { size: members.len(), multiset, witness });
    }
    let mut seen_multisets: HashSet<Vec<u16>> = HashSet::new();
    for r in &reports {
        if !seen_multisets.insert(r.multiset.clone()) {
            agreement = false;
        }
    }
    reports.sort_by(|a, b| (&a.multiset, &a.witness).cmp(&(&b.multiset, &b.witness)));
    Ok(TheoremReport {
        orbits: reports,
        total_factorizations: facs.len(),
        agreement,
    })
}

// ---------------------------------------------------------------------------
// Counting shortest factorizations

fn count_rec(rs: &RootSystem, rem: &GroupElement, depth: usize) -> u64 {
    if depth == 0 {
        return 1;
    }
    let mut total = 0;
    for t in 0..rs.n_pos() as Line {
        let rest = compose(&rs.as_element(t), rem);
        if reflection_length(rs, &rest) == depth - 1 {
            total += count_rec(rs, &rest, depth - 1);
        }
    }
    total
}

/// Number of shortest reflection factorizations of `w`.
pub fn count_shortest_factorizations(rs: &RootSystem, w: &GroupElement) -> u64 {
    count_rec(rs, w, reflection_length(rs, w))
}

/// hⁿ·n!/|W|: the count of shortest reflection factorizations of any
/// Coxeter element.
pub fn coxeter_factorization_count(rs: &RootSystem) -> u64 {
    let t = rs.type_tag;
    let n = t.rank() as u32;
    let h = t.coxeter_number() as u128;
    let fact: u128 = (1..=n as u128).product();
    u64::try_from(h.pow(n) * fact / t.group_order() as u128)
        .expect("factorization count fits in u64")
}

/// A shortest factorization of `c` whose first factor is the given line,
/// if one exists.
pub fn shortest_factorization_starting_with(
    rs: &RootSystem,
    c: &GroupElement,
    first: Line,
) -> Option<Vec<Line>> {
    let l = reflection_length(rs, c);
    if l == 0 {
        return None;
    }
    let mut rem = compose(&rs.as_element(first), c);
    if reflection_length(rs, &rem) != l - 1 {
        return None;
    }
    let mut out = vec![first];
    for depth in (0..l - 1).rev() {
        let t = (0..rs.n_pos() as Line).find(|&t| {
            reflection_length(rs, &compose(&rs.as_element(t), &rem)) == depth
        })?;
        rem = compose(&rs.as_element(t), &rem);
        out.push(t);
    }
    debug_assert!(rem.is_identity());
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build, GroupType};
    use crate::scalar::ExactScalar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sys(name: &str) -> RootSystem {
        build(GroupType::parse(name).unwrap()).unwrap()
    }

    fn line_by_coords(rs: &RootSystem, v: &[i64]) -> Line {
        for l in 0..rs.n_pos() as Line {
            let c = rs.root_coords(l as RootIdx).unwrap();
            let hit = c.len() == v.len()
                && c.iter().zip(v).all(|(x, &y)| (x - &scalar_like(y, x)).is_zero());
            if hit {
                return l;
            }
        }
        panic!("no line with coordinates {v:?}");
    }

    fn random_lines(rs: &RootSystem, m: usize, rng: &mut ChaCha8Rng) -> Vec<Line> {
        (0..m).map(|_| rng.gen_range(0..rs.n_pos()) as Line).collect()
    }

    fn random_full_circuit_dependence(rs: &RootSystem, rng: &mut ChaCha8Rng) -> MDependence {
        let circs = circuits::all_circuits(rs, rs.rank() + 1).unwrap();
        let full: Vec<_> = circs
            .into_iter()
            .filter(|c| circuits::is_full(rs, &c.members))
            .collect();
        assert!(!full.is_empty());
        let c = &full[rng.gen_range(0..full.len())];
        let mut d = MDependence {
            roots: c.members.iter().map(|&l| l as RootIdx).collect(),
            coeffs: c.coeffs.clone(),
        };
        for _ in 0..rng.gen_range(0..4) {
            let i = rng.gen_range(0..d.len());
            d = epsilon(rs, &d, i).unwrap();
        }
        for _ in 0..rng.gen_range(0..4) {
            let i = rng.gen_range(0..d.len() - 1);
            let nd = if rng.gen_bool(0.5) {
                lifted_sigma(rs, &d, i).unwrap()
            } else {
                lifted_sigma_inv(rs, &d, i).unwrap()
            };
            if nd.coeffs.iter().all(|c| !c.is_zero()) {
                d = nd;
            }
        }
        assert!(d.is_valid(rs).unwrap());
        d
    }

    #[test]
    fn sigma_conjugates_second_factor_into_first_slot() {
        let rs = sys("A2");
        let a = line_by_coords(&rs, &[1, -1, 0]);
        let b = line_by_coords(&rs, &[0, 1, -1]);
        let ab = line_by_coords(&rs, &[1, 0, -1]);
        let out = sigma(&rs, &[a, b], 0).unwrap();
        assert_eq!(out, vec![b, ab]);
    }

    #[test]
    fn sigma_swaps_orthogonal_factors_unchanged() {
        let rs = sys("B2");
        let a = line_by_coords(&rs, &[1, -1]);
        let b = line_by_coords(&rs, &[1, 1]);
        assert_eq!(sigma(&rs, &[a, b], 0).unwrap(), vec![b, a]);
        assert_eq!(sigma_inv(&rs, &[a, b], 0).unwrap(), vec![b, a]);
    }

    #[test]
    fn sigma_then_inverse_is_identity() {
        let rs = sys("B3");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let f = random_lines(&rs, 4, &mut rng);
            for p in 0..3 {
                let back = sigma_inv(&rs, &sigma(&rs, &f, p).unwrap(), p).unwrap();
                assert_eq!(back, f);
                let forth = sigma(&rs, &sigma_inv(&rs, &f, p).unwrap(), p).unwrap();
                assert_eq!(forth, f);
            }
        }
    }

    #[test]
    fn braid_relations_hold_on_factorizations() {
        let rs = sys("B3");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let f = random_lines(&rs, 5, &mut rng);
            for i in 0..3 {
                let lhs = apply_trace(
                    &rs,
                    &f,
                    &[HurwitzMove::sigma(i), HurwitzMove::sigma(i + 1), HurwitzMove::sigma(i)],
                )
                .unwrap();
                let rhs = apply_trace(
                    &rs,
                    &f,
                    &[HurwitzMove::sigma(i + 1), HurwitzMove::sigma(i), HurwitzMove::sigma(i + 1)],
                )
                .unwrap();
                assert_eq!(lhs, rhs);
            }
            let lhs = apply_trace(&rs, &f, &[HurwitzMove::sigma(0), HurwitzMove::sigma(2)]).unwrap();
            let rhs = apply_trace(&rs, &f, &[HurwitzMove::sigma(2), HurwitzMove::sigma(0)]).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn moves_preserve_product_and_class_multiset() {
        let rs = sys("A3");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let f = random_lines(&rs, 5, &mut rng);
            let w = rs.product_of_lines(&f);
            let ms = class_multiset(&rs, &f);
            let mut cur = f.clone();
            for _ in 0..6 {
                let p = rng.gen_range(0..4);
                let mv = if rng.gen_bool(0.5) {
                    HurwitzMove::sigma(p)
                } else {
                    HurwitzMove::sigma_inv(p)
                };
                cur = apply_move(&rs, &cur, mv).unwrap();
            }
            assert_eq!(rs.product_of_lines(&cur), w);
            assert_eq!(class_multiset(&rs, &cur), ms);
        }
    }

    #[test]
    fn reflection_length_basic_values() {
        for name in ["A3", "B3", "D4", "H3", "F4"] {
            let rs = sys(name);
            assert_eq!(reflection_length(&rs, &GroupElement::identity(&rs)), 0);
            for l in 0..rs.n_pos() as Line {
                assert_eq!(reflection_length(&rs, &rs.as_element(l)), 1, "{name} line {l}");
            }
            let order: Vec<usize> = (0..rs.rank()).collect();
            let c = rs.coxeter_element(&order).unwrap();
            assert_eq!(reflection_length(&rs, &c), rs.rank(), "{name} Coxeter element");
        }
    }

    #[test]
    fn reflection_length_matches_bfs_word_length() {
        for name in ["A3", "B3", "H3", "I2:3", "I2:4", "I2:5", "I2:6", "I2:7", "I2:8"] {
            let rs = sys(name);
            let table = length_table_bfs(&rs);
            assert_eq!(table.len() as u64, rs.type_tag.group_order());
            for (g, &d) in &table {
                assert_eq!(reflection_length(&rs, g), d, "{name}");
            }
        }
    }

    #[test]
    fn coxeter_orbit_in_a2_is_all_three_shortest_factorizations() {
        let rs = sys("A2");
        let c = rs.coxeter_element(&[0, 1]).unwrap();
        let facs = enumerate_factorizations(&rs, &c, 2, 10_000).unwrap();
        assert_eq!(facs.len(), 3);
        let orbit = hurwitz_orbit(&rs, &facs[0], 10_000).unwrap();
        assert!(orbit.complete);
        assert_eq!(orbit.len(), 3);
        for f in &facs {
            assert!(orbit.position(f).is_some());
        }
    }

    #[test]
    fn coxeter_orbit_in_b2_mixes_class_orders() {
        let rs = sys("B2");
        let c = rs.coxeter_element(&[0, 1]).unwrap();
        let facs = enumerate_factorizations(&rs, &c, 2, 10_000).unwrap();
        let orbit = hurwitz_orbit(&rs, &facs[0], 10_000).unwrap();
        assert!(orbit.complete);
        let patterns: HashSet<(u16, u16)> = orbit
            .elements
            .iter()
            .map(|f| (rs.class_of(f[0]), rs.class_of(f[1])))
            .collect();
        let classes: HashSet<u16> = patterns.iter().map(|&(a, _)| a).collect();
        assert_eq!(classes.len(), 2, "both classes appear in first position");
        for &(a, b) in &patterns {
            assert!(patterns.contains(&(b, a)));
        }
    }

    #[test]
    fn length_four_factorizations_of_a2_coxeter_form_one_orbit() {
        let rs = sys("A2");
        let c = rs.coxeter_element(&[0, 1]).unwrap();
        let facs = enumerate_factorizations(&rs, &c, 4, 1_000_000).unwrap();
        assert!(!facs.is_empty());
        let orbit = hurwitz_orbit(&rs, &facs[0], 1_000_000).unwrap();
        assert!(orbit.complete);
        assert_eq!(orbit.len(), facs.len());
    }

    #[test]
    fn orbit_traces_replay_to_their_elements() {
        let rs = sys("B2");
        let c = rs.coxeter_element(&[0, 1]).unwrap();
        let facs = enumerate_factorizations(&rs, &c, 4, 1_000_000).unwrap();
        let orbit = hurwitz_orbit(&rs, &facs[0], 1_000_000).unwrap();
        assert!(orbit.complete);
        for (i, el) in orbit.elements.iter().enumerate() {
            let replay = apply_trace(&rs, &orbit.elements[0], &orbit.trace_to(i)).unwrap();
            assert_eq!(&replay, el);
        }
    }

    #[test]
    fn orbit_budget_truncates_and_reports() {
        let rs = sys("A2");
        let c = rs.coxeter_element(&[0, 1]).unwrap();
        let facs = enumerate_factorizations(&rs, &c, 4, 1_000_000).unwrap();
        let orbit = hurwitz_orbit(&rs, &facs[0], 2).unwrap();
        assert!(!orbit.complete);
        assert_eq!(orbit.len(), 2);
    }

    #[test]
    fn move_to_prefix_identity_and_single_position() {
        let rs = sys("A3");
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let f = random_lines(&rs, 5, &mut rng);
        let (same, tr) = move_to_prefix(&rs, &f, &[0, 1, 2]).unwrap();
        assert_eq!(same, f);
        assert!(tr.is_empty());

        let (moved, tr) = move_to_prefix(&rs, &f, &[4]).unwrap();
        assert_eq!(tr.len(), 4);
        assert_eq!(moved[0], f[4]);
        assert_eq!(rs.product_of_lines(&moved), rs.product_of_lines(&f));
        assert_eq!(class_multiset(&rs, &moved), class_multiset(&rs, &f));
        assert_eq!(apply_trace(&rs, &f, &tr).unwrap(), moved);
    }

    #[test]
    fn move_to_prefix_keeps_selected_factors_in_order() {
        let rs = sys("B3");
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let f = random_lines(&rs, 5, &mut rng);
            let (out, tr) = move_to_prefix(&rs, &f, &[1, 3]).unwrap();
            assert_eq!(out[0], f[1]);
            assert_eq!(out[1], f[3]);
            assert_eq!(apply_trace(&rs, &f, &tr).unwrap(), out);
            assert_eq!(rs.product_of_lines(&out), rs.product_of_lines(&f));
        }
    }

    fn int(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    #[test]
    fn lifted_sigma_vanishes_a_coefficient_in_the_triangle() {
        let rs = sys("A2");
        let a = line_by_coords(&rs, &[1, -1, 0]);
        let b = line_by_coords(&rs, &[0, 1, -1]);
        let ab = line_by_coords(&rs, &[1, 0, -1]);
        let d = MDependence::new(
            vec![a as RootIdx, b as RootIdx, ab as RootIdx],
            vec![int(1), int(1), int(-1)],
        )
        .unwrap();
        assert!(d.is_valid(&rs).unwrap());
        assert_eq!(d.weight(), int(3));

        let out = lifted_sigma(&rs, &d, 0).unwrap();
        assert_eq!(out.roots, vec![b as RootIdx, ab as RootIdx, ab as RootIdx]);
        assert_eq!(out.coeffs, vec![int(0), int(1), int(-1)]);
        assert!(out.is_valid(&rs).unwrap());
        assert_eq!(out.weight(), int(2));
    }

    #[test]
    fn lifted_moves_are_mutually_inverse_and_preserve_validity() {
        for name in ["A3", "C3", "H3"] {
            let rs = sys(name);
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            for _ in 0..25 {
                let d = random_full_circuit_dependence(&rs, &mut rng);
                for i in 0..d.len() - 1 {
                    let there = lifted_sigma(&rs, &d, i).unwrap();
                    assert!(there.is_valid(&rs).unwrap());
                    let back = lifted_sigma_inv(&rs, &there, i).unwrap();
                    assert_eq!(back, d, "{name}");
                }
            }
        }
    }

    #[test]
    fn lifted_braid_relations_hold() {
        let rs = sys("A3");
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..25 {
            let d = random_full_circuit_dependence(&rs, &mut rng);
            if d.len() < 3 {
                continue;
            }
            for i in 0..d.len() - 2 {
                let lhs = lifted_apply_trace(
                    &rs,
                    &d,
                    &[HurwitzMove::sigma(i), HurwitzMove::sigma(i + 1), HurwitzMove::sigma(i)],
                )
                .unwrap();
                let rhs = lifted_apply_trace(
                    &rs,
                    &d,
                    &[HurwitzMove::sigma(i + 1), HurwitzMove::sigma(i), HurwitzMove::sigma(i + 1)],
                )
                .unwrap();
                assert_eq!(lhs, rhs);
            }
            if d.len() >= 4 {
                let lhs =
                    lifted_apply_trace(&rs, &d, &[HurwitzMove::sigma(0), HurwitzMove::sigma(2)])
                        .unwrap();
                let rhs =
                    lifted_apply_trace(&rs, &d, &[HurwitzMove::sigma(2), HurwitzMove::sigma(0)])
                        .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn epsilon_commutes_into_the_shifted_slot() {
        let rs = sys("C3");
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for _ in 0..25 {
            let d = random_full_circuit_dependence(&rs, &mut rng);
            for i in 0..d.len() - 1 {
                let lhs = lifted_sigma(&rs, &epsilon(&rs, &d, i).unwrap(), i).unwrap();
                let rhs = epsilon(&rs, &lifted_sigma(&rs, &d, i).unwrap(), i + 1).unwrap();
                assert_eq!(lhs, rhs);
            }
            let w = d.weight();
            for i in 0..d.len() {
                let e = epsilon(&rs, &d, i).unwrap();
                assert_eq!(e.weight(), w);
                assert!(e.is_valid(&rs).unwrap());
                assert_eq!(epsilon(&rs, &e, i).unwrap(), d);
            }
        }
    }

    #[test]
    fn adjacent_pair_trichotomy_governs_weight_changes() {
        for name in ["A3", "C3", "D4", "H3"] {
            let rs = sys(name);
            let mut rng = ChaCha8Rng::seed_from_u64(31);
            for _ in 0..40 {
                let d = random_full_circuit_dependence(&rs, &mut rng);
                let w = d.weight();
                for i in 0..d.len() - 1 {
                    let s = entry_pair_sign(&rs, &d, i, i + 1);
                    let up = lifted_sigma(&rs, &d, i).unwrap().weight();
                    let down = lifted_sigma_inv(&rs, &d, i).unwrap().weight();
                    match s.cmp(&0) {
                        std::cmp::Ordering::Equal => {
                            assert_eq!(up, w, "{name}: orthogonal pairs keep the weight");
                            assert_eq!(down, w, "{name}");
                        }
                        std::cmp::Ordering::Greater => {
                            assert!(up > w && down > w, "{name}: acute pairs raise both ways");
                        }
                        std::cmp::Ordering::Less => {
                            assert!(
                                up < w || down < w,
                                "{name}: an obtuse pair lowers at least one way"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reduce_weight_step_strictly_lowers_and_terminates() {
        for name in ["A3", "C3", "D4", "H3"] {
            let rs = sys(name);
            let mut rng = ChaCha8Rng::seed_from_u64(37);
            for _ in 0..20 {
                let mut d = random_full_circuit_dependence(&rs, &mut rng);
                let mut rounds = 0;
                while d.coeffs.iter().all(|c| !c.is_zero()) {
                    let w0 = d.weight();
                    let (nd, tr) = reduce_weight_step(&rs, &d).unwrap();
                    assert!(nd.weight() < w0, "{name}: strict decrease");
                    assert_eq!(lifted_apply_trace(&rs, &d, &tr).unwrap(), nd);
                    assert!(nd.is_valid(&rs).unwrap());
                    d = nd;
                    rounds += 1;
                    assert!(rounds < 10_000, "{name}: reduction must halt");
                }
            }
        }
    }

    #[test]
    fn reduce_weight_step_on_the_triangle_vanishes_immediately() {
        let rs = sys("A2");
        let a = line_by_coords(&rs, &[1, -1, 0]);
        let b = line_by_coords(&rs, &[0, 1, -1]);
        let ab = line_by_coords(&rs, &[1, 0, -1]);
        let d = MDependence::new(
            vec![a as RootIdx, b as RootIdx, ab as RootIdx],
            vec![int(1), int(1), int(-1)],
        )
        .unwrap();
        let (out, _) = reduce_weight_step(&rs, &d).unwrap();
        assert_eq!(out.weight(), int(2));
        assert!(out.coeffs.iter().any(|c| c.is_zero()));
    }

    #[test]
    fn main_lemma_step_on_equal_leading_factors_returns_immediately() {
        let rs = sys("A3");
        let f = vec![2 as Line, 2, 4];
        let (out, tr, k) = main_lemma_step(&rs, &f).unwrap();
        assert_eq!(k, 2);
        assert!(tr.is_empty());
        assert_eq!(out, f);
    }

    #[test]
    fn main_lemma_step_reduces_the_a2_triangle() {
        let rs = sys("A2");
        let a = line_by_coords(&rs, &[1, -1, 0]);
        let b = line_by_coords(&rs, &[0, 1, -1]);
        let ab = line_by_coords(&rs, &[1, 0, -1]);
        let f = vec![a, b, ab];
        let (out, tr, k) = main_lemma_step(&rs, &f).unwrap();
        assert_eq!(k, 2);
        assert_eq!(out[0], out[1]);
        assert_eq!(apply_trace(&rs, &f, &tr).unwrap(), out);
        assert_eq!(rs.product_of_lines(&out), rs.product_of_lines(&f));
    }

    #[test]
    fn main_lemma_step_rejects_reduced_input() {
        let rs = sys("A3");
        let f: Vec<Line> = rs.simple_lines().to_vec();
        assert!(matches!(main_lemma_step(&rs, &f), Err(Error::Input(_))));
    }

    #[test]
    fn main_lemma_step_handles_angle_systems() {
        for name in ["I2:4", "I2:5", "I2:6", "I2:7", "I2:8"] {
            let rs = sys(name);
            let f: Vec<Line> = vec![0, 2, 1];
            let (out, tr, k) = main_lemma_step(&rs, &f).unwrap();
            assert_eq!(k, 2, "{name}");
            assert_eq!(out[0], out[1], "{name}");
            assert_eq!(apply_trace(&rs, &f, &tr).unwrap(), out, "{name}");
            assert_eq!(rs.product_of_lines(&out), rs.product_of_lines(&f), "{name}");
        }
        let rs = sys("I2:5");
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let mut f = random_lines(&rs, 5, &mut rng);
            while reflection_length(&rs, &rs.product_of_lines(&f)) >= f.len() {
                f = random_lines(&rs, 5, &mut rng);
            }
            let (out, tr, k) = main_lemma_step(&rs, &f).unwrap();
            assert_eq!(k, 2);
            assert_eq!(out[0], out[1]);
            assert_eq!(apply_trace(&rs, &f, &tr).unwrap(), out);
        }
    }

    #[test]
    fn main_lemma_step_over_random_higher_rank_inputs() {
        for name in ["A3", "B3", "D4", "H3", "H4"] {
            let rs = sys(name);
            let rounds = if name == "H4" { 3 } else { 25 };
            let mut rng = ChaCha8Rng::seed_from_u64(43);
            for _ in 0..rounds {
                let f = random_lines(&rs, rs.rank() + 1, &mut rng);
                let (out, tr, k) = main_lemma_step(&rs, &f).unwrap();
                assert_eq!(k, 2, "{name}");
                assert_eq!(out[0], out[1], "{name}");
                assert_eq!(apply_trace(&rs, &f, &tr).unwrap(), out, "{name}");
                assert_eq!(rs.product_of_lines(&out), rs.product_of_lines(&f), "{name}");
            }
        }
    }

    #[test]
    fn standard_form_of_the_alternating_braid_word() {
        let rs = sys("A2");
        let s = rs.simple_lines().to_vec();
        let f = vec![s[0], s[1], s[0], s[1], s[0], s[1]];
        assert!(rs.product_of_lines(&f).is_identity());
        let (out, tr) = standard_form(&rs, &f).unwrap();
        assert_eq!(out.len(), 6);
        for k in [0, 2, 4] {
            assert_eq!(out[k], out[k + 1], "pair at {k}");
        }
        assert_eq!(apply_trace(&rs, &f, &tr).unwrap(), out);
    }

    #[test]
    fn standard_form_leaves_shortest_factorizations_alone() {
        let rs = sys("A3");
        let f: Vec<Line> = rs.simple_lines().to_vec();
        let (out, tr) = standard_form(&rs, &f).unwrap();
        assert_eq!(out, f);
        assert!(tr.is_empty());
    }

    #[test]
    fn standard_form_shape_and_replay_over_random_inputs() {
        for name in ["A3", "B3", "H3"] {
            let rs = sys(name);
            let mut rng = ChaCha8Rng::seed_from_u64(47);
            for _ in 0..30 {
                let m = rng.gen_range(1..=rs.rank() + 4);
                let f = random_lines(&rs, m, &mut rng);
                let w = rs.product_of_lines(&f);
                let l = reflection_length(&rs, &w);
                let (out, tr) = standard_form(&rs, &f).unwrap();
                assert_eq!(out.len(), m, "{name}");
                for k in (0..m - l).step_by(2) {
                    assert_eq!(out[k], out[k + 1], "{name}: leading pair at {k}");
                }
                let suffix = &out[m - l..];
                assert_eq!(
                    reflection_length(&rs, &rs.product_of_lines(suffix)),
                    l,
                    "{name}: suffix is a shortest factorization"
                );
                assert_eq!(rs.product_of_lines(&out), w, "{name}");
                assert_eq!(apply_trace(&rs, &f, &tr).unwrap(), out, "{name}");
            }
        }
    }

    #[test]
    fn quasi_coxeter_detection() {
        for name in ["A3", "B3", "D4"] {
            let rs = sys(name);
            let order: Vec<usize> = (0..rs.rank()).collect();
            let c = rs.coxeter_element(&order).unwrap();
            assert!(is_quasi_coxeter(&rs, &c), "{name}: Coxeter elements qualify");
            assert!(!is_quasi_coxeter(&rs, &GroupElement::identity(&rs)), "{name}");
        }
        // -id in D4 factors only through four pairwise orthogonal reflections,
        // which never close up to the full system.
        let rs = sys("D4");
        let lines = [
            line_by_coords(&rs, &[1, -1, 0, 0]),
            line_by_coords(&rs, &[1, 1, 0, 0]),
            line_by_coords(&rs, &[0, 0, 1, -1]),
            line_by_coords(&rs, &[0, 0, 1, 1]),
        ];
        let minus_id = rs.product_of_lines(&lines);
        assert_eq!(reflection_length(&rs, &minus_id), 4);
        assert!(!is_quasi_coxeter(&rs, &minus_id));
    }

    #[test]
    fn theorem_report_for_a2_lengths_two_and_four() {
        let rs = sys("A2");
        let c = rs.coxeter_element(&[0, 1]).unwrap();
        for m in [2usize, 4] {
            let report = verify_theorem(&rs, &c, m, 10_000_000).unwrap();
            assert!(report.agreement);
            assert_eq!(report.orbits.len(), 1, "single class, single orbit at m={m}");
            assert_eq!(report.orbits[0].size, report.total_factorizations);
        }
    }

    #[test]
    fn theorem_report_for_b2_length_four_splits_by_multiset() {
        let rs = sys("B2");
        let c = rs.coxeter_element(&[0, 1]).unwrap();
        let report = verify_theorem(&rs, &c, 4, 10_000_000).unwrap();
        assert!(report.agreement);
        assert_eq!(report.orbits.len(), 2);
        let mut counts: Vec<Vec<usize>> = report
            .orbits
            .iter()
            .map(|o| {
                let mut per_class = vec![0usize; rs.classes().len()];
                for &cl in &o.multiset {
                    per_class[cl as usize] += 1;
                }
                per_class
            })
            .collect();
        counts.sort();
        assert_eq!(counts, vec![vec![1, 3], vec![3, 1]]);
    }

    #[test]
    fn theorem_report_for_h3_shortest_is_one_orbit_of_fifty() {
        let rs = sys("H3");
        let c = rs.coxeter_element(&[0, 1, 2]).unwrap();
        let report = verify_theorem(&rs, &c, 3, 10_000_000).unwrap();
        assert!(report.agreement);
        assert_eq!(report.orbits.len(), 1);
        assert_eq!(report.total_factorizations, 50);
    }

    #[test]
    fn theorem_enumeration_respects_budget() {
        let rs = sys("B2");
        let c = rs.coxeter_element(&[0, 1]).unwrap();
        assert!(matches!(
            verify_theorem(&rs, &c, 4, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn shortest_factorizations_share_one_class_multiset() {
        for name in ["B2", "B3", "F4", "I2:4", "I2:6"] {
            let rs = sys(name);
            let order: Vec<usize> = (0..rs.rank()).collect();
            let c = rs.coxeter_element(&order).unwrap();
            let facs =
                enumerate_factorizations(&rs, &c, rs.rank(), 50_000_000).unwrap();
            assert_eq!(facs.len() as u64, coxeter_factorization_count(&rs), "{name}");
            let ms = class_multiset(&rs, &facs[0]);
            for f in &facs {
                assert_eq!(class_multiset(&rs, f), ms, "{name}");
            }
        }
    }

    #[test]
    fn every_reflection_starts_a_shortest_factorization() {
        for name in ["A3", "B3"] {
            let rs = sys(name);
            let order: Vec<usize> = (0..rs.rank()).collect();
            let c = rs.coxeter_element(&order).unwrap();
            for t in 0..rs.n_pos() as Line {
                let f = shortest_factorization_starting_with(&rs, &c, t);
                let f = f.unwrap_or_else(|| panic!("{name}: line {t} must start one"));
                assert_eq!(f[0], t);
                assert_eq!(f.len(), rs.rank());
                assert_eq!(rs.product_of_lines(&f), c);
            }
        }
    }

    #[test]
    fn shortest_factorization_counts_match_the_closed_form() {
        for name in ["A2", "B2", "A3", "B3", "D4", "H3", "I2:5", "I2:7"] {
            let rs = sys(name);
            let order: Vec<usize> = (0..rs.rank()).collect();
            let c = rs.coxeter_element(&order).unwrap();
            assert_eq!(
                count_shortest_factorizations(&rs, &c),
                coxeter_factorization_count(&rs),
                "{name}"
            );
        }
    }

    #[test]
    fn lifted_orbits_stay_finite_in_h3() {
        let rs = sys("H3");
        let circs = circuits::all_circuits(&rs, 4).unwrap();
        let full: Vec<_> = circs
            .into_iter()
            .filter(|c| circuits::is_full(&rs, &c.members))
            .collect();
        assert!(!full.is_empty());
        let mut checked = 0;
        for c in full.iter().take(3) {
            let d = MDependence {
                roots: c.members.iter().map(|&l| l as RootIdx).collect(),
                coeffs: c.coeffs.clone(),
            };
            let (size, complete) = lifted_orbit(&rs, &d, 400_000).unwrap();
            assert!(complete, "closure must be finite, got at least {size}");
            assert!(size >= 1);
            checked += 1;
        }
        assert_eq!(checked, 3);
    }

    #[test]
    fn apply_move_rejects_out_of_range_pairs() {
        let rs = sys("A2");
        assert!(matches!(
            apply_move(&rs, &[0, 1], HurwitzMove::sigma(1)),
            Err(Error::Input(_))
        ));
    }
}
