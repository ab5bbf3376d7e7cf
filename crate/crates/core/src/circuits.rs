//! Circuits of roots: minimal linear dependences, their acuteness and
//! obtuseness graphs, and the signed-graph model of the classical types
//! with its C(n;i,j) canonical forms.
//!
//! A circuit is a minimally dependent set: the kernel of the coordinate
//! matrix is one-dimensional and its support is the whole set. The
//! dependence is normalized so the first member (in index order) has
//! coefficient +1.

use serde::Serialize;
use std::collections::HashMap;

use crate::rootsys::{GroupType, Line, Qa, RootIdx, RootSystem};
use crate::scalar::ExactScalar;
use crate::{Error, Result};

/// Integer literal in the field tag of `like`.
pub(crate) fn scalar_like(v: i64, like: &ExactScalar) -> ExactScalar {
    match like {
        ExactScalar::Rat(_) => ExactScalar::from_int(v),
        ExactScalar::Quad(_) => ExactScalar::quad_int(v, 0),
    }
}

fn same_tag(a: &ExactScalar, b: &ExactScalar) -> bool {
    matches!(
        (a, b),
        (ExactScalar::Rat(_), ExactScalar::Rat(_)) | (ExactScalar::Quad(_), ExactScalar::Quad(_))
    )
}

/// Exact kernel of the column matrix of `vectors`.
///
/// Returns `None` when the vectors are independent, the normalized kernel
/// vector when the kernel is one-dimensional (entries may be zero when a
/// proper subset is dependent), and `Error::NotCircuit` when the kernel has
/// dimension two or more.
pub fn find_dependence_vectors(vectors: &[Vec<ExactScalar>]) -> Result<Option<Vec<ExactScalar>>> {
    let m = vectors.len();
    if m == 0 {
        return Ok(None);
    }
    let dim = vectors[0].len();
    let probe = &vectors[0][0];
    for v in vectors {
        if v.len() != dim {
            return Err(Error::Input("vectors of unequal dimension".into()));
        }
        for x in v {
            if !same_tag(x, probe) {
                return Err(Error::MixedField("dependence over mixed scalar fields"));
            }
        }
    }
    // Row-reduce the dim × m matrix whose columns are the vectors.
    let mut mat: Vec<Vec<ExactScalar>> =
        (0..dim).map(|r| (0..m).map(|c| vectors[c][r].clone()).collect()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row = 0;
    for col in 0..m {
        let Some(pr) = (row..dim).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, pr);
        let p = mat[row][col].clone();
        for x in mat[row].iter_mut() {
            *x = x.checked_div(&p)?;
        }
        for r in 0..dim {
            if r != row && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c2 in 0..m {
                    let sub = &mat[row][c2] * &f;
                    mat[r][c2] = &mat[r][c2] - &sub;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == dim {
            break;
        }
    }
    let rank = pivots.len();
    match m - rank {
        0 => Ok(None),
        1 => {
            let is_pivot: Vec<bool> = {
                let mut v = vec![false; m];
                for &(_, c) in &pivots {
                    v[c] = true;
                }
                v
            };
            let free = (0..m).find(|&c| !is_pivot[c]).unwrap();
            let mut coeffs = vec![scalar_like(0, probe); m];
            coeffs[free] = scalar_like(1, probe);
            for &(r, c) in &pivots {
                coeffs[c] = -mat[r][free].clone();
            }
            // Normalize: first nonzero coefficient becomes +1.
            let lead = coeffs.iter().find(|c| !c.is_zero()).unwrap().clone();
            for c in coeffs.iter_mut() {
                *c = c.checked_div(&lead)?;
            }
            Ok(Some(coeffs))
        }
        k => Err(Error::NotCircuit { kernel_dim: k }),
    }
}

/// Kernel computation on (signed) root indices of a coordinate-backed system.
pub fn find_dependence(rs: &RootSystem, roots: &[RootIdx]) -> Result<Option<Vec<ExactScalar>>> {
    let vectors: Result<Vec<Vec<ExactScalar>>> = roots
        .iter()
        .map(|&r| {
            rs.root_coords(r).ok_or_else(|| {
                Error::NoCoordinates(format!("no coordinates in {} for dependences", rs.type_tag))
            })
        })
        .collect();
    find_dependence_vectors(&vectors?)
}

/// A circuit: minimally dependent set of lines with its normalized
/// dependence (first member has coefficient +1).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Circuit {
    pub members: Vec<Line>,
    pub coeffs: Vec<ExactScalar>,
}

/// True if the distinct lines form a circuit (dependent, every proper
/// subset independent).
pub fn is_circuit(rs: &RootSystem, lines: &[Line]) -> Result<bool> {
    match find_dependence(rs, lines) {
        Ok(None) => Ok(false),
        Ok(Some(coeffs)) => Ok(coeffs.iter().all(|c| !c.is_zero())),
        Err(Error::NotCircuit { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The unique circuit inside an independent set plus one extra root.
///
/// Input lines must be distinct (parallel roots are excluded by the root
/// system axiom); returns `Error::Independent` when the set is independent.
pub fn unique_circuit_in(rs: &RootSystem, lines: &[Line]) -> Result<Circuit> {
    let mut sorted: Vec<Line> = lines.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Input("repeated line in circuit search".into()));
    }
    let coeffs = match find_dependence(rs, &sorted)? {
        None => return Err(Error::Independent),
        Some(c) => c,
    };
    let mut members = Vec::new();
    let mut support = Vec::new();
    for (l, c) in sorted.iter().zip(coeffs) {
        if !c.is_zero() {
            members.push(*l);
            support.push(c);
        }
    }
    // Renormalize on the support (its first coefficient may differ when the
    // original leading entries vanished).
    let lead = support[0].clone();
    for c in support.iter_mut() {
        *c = c.checked_div(&lead)?;
    }
    Ok(Circuit { members, coeffs: support })
}

/// Exhaustive circuit enumeration over line subsets of size ≤ `max_size`.
pub fn all_circuits(rs: &RootSystem, max_size: usize) -> Result<Vec<Circuit>> {
    let n = rs.n_pos();
    let cap = max_size.min(rs.rank() + 1);
    let mut out = Vec::new();
    let mut subset: Vec<Line> = Vec::new();
    fn rec(
        rs: &RootSystem,
        n: usize,
        k: usize,
        start: usize,
        subset: &mut Vec<Line>,
        out: &mut Vec<Circuit>,
    ) -> Result<()> {
        if subset.len() == k {
            match find_dependence(rs, subset) {
                Ok(Some(coeffs)) if coeffs.iter().all(|c| !c.is_zero()) => {
                    out.push(Circuit { members: subset.clone(), coeffs });
                }
                Ok(_) => {}
                Err(Error::NotCircuit { .. }) => {}
                Err(e) => return Err(e),
            }
            return Ok(());
        }
        for l in start..n {
            subset.push(l as Line);
            rec(rs, n, k, l + 1, subset, out)?;
            subset.pop();
        }
        Ok(())
    }
    for k in 2..=cap {
        rec(rs, n, k, 0, &mut subset, &mut out)?;
    }
    Ok(out)
}

/// Acuteness-obtuseness graph of a weighted tuple: vertices are tuple
/// positions; `{i,j}` is acute iff ⟨cᵢαᵢ, cⱼαⱼ⟩ > 0 and obtuse iff < 0
/// (remaining pairs orthogonal).
#[derive(Clone, Debug, Serialize)]
pub struct AcutenessGraph {
    pub m: usize,
    pub acute: Vec<(usize, usize)>,
    pub obtuse: Vec<(usize, usize)>,
}

/// Builds the graph from (signed root index, coefficient sign) pairs; signs
/// must be ±1. Works in every model, including the bare angle model.
pub fn acuteness_graph_signed(rs: &RootSystem, entries: &[(RootIdx, i32)]) -> Result<AcutenessGraph> {
    if entries.iter().any(|&(_, s)| s == 0) {
        return Err(Error::Input("zero coefficient in acuteness graph".into()));
    }
    let m = entries.len();
    let mut acute = Vec::new();
    let mut obtuse = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let (ri, si) = entries[i];
            let (rj, sj) = entries[j];
            match si * sj * rs.gram_sign(ri, rj) {
                s if s > 0 => acute.push((i, j)),
                s if s < 0 => obtuse.push((i, j)),
                _ => {}
            }
        }
    }
    Ok(AcutenessGraph { m, acute, obtuse })
}

pub fn circuit_acuteness(rs: &RootSystem, c: &Circuit) -> Result<AcutenessGraph> {
    let entries: Vec<(RootIdx, i32)> =
        c.members.iter().zip(&c.coeffs).map(|(&l, c)| (l, c.sign())).collect();
    acuteness_graph_signed(rs, &entries)
}

/// Graph from raw vectors and exact coefficients (no root system needed).
pub fn acuteness_graph_vectors(
    vectors: &[Vec<ExactScalar>],
    coeffs: &[ExactScalar],
) -> Result<AcutenessGraph> {
    if coeffs.iter().any(|c| c.is_zero()) {
        return Err(Error::Input("zero coefficient in acuteness graph".into()));
    }
    let m = vectors.len();
    let mut acute = Vec::new();
    let mut obtuse = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let mut dot = scalar_like(0, &coeffs[i]);
            for (a, b) in vectors[i].iter().zip(&vectors[j]) {
                dot = &dot + &(a * b);
            }
            match coeffs[i].sign() * coeffs[j].sign() * dot.sign() {
                s if s > 0 => acute.push((i, j)),
                s if s < 0 => obtuse.push((i, j)),
                _ => {}
            }
        }
    }
    Ok(AcutenessGraph { m, acute, obtuse })
}

/// Any three distinct lines of a dihedral system form a circuit; sorted by
/// angle index, the dependence signs are (+, −, +) because the middle line
/// lies inside the cone of the outer two.
pub fn i2_triple_entries(rs: &RootSystem, triple: &[Line; 3]) -> Result<Vec<(RootIdx, i32)>> {
    let m = rs
        .angle_m()
        .ok_or_else(|| Error::Input("dihedral triple requires an I2 system".into()))?;
    let mut t = *triple;
    t.sort_unstable();
    if t[0] == t[1] || t[1] == t[2] || (t[2] as usize) >= m {
        return Err(Error::Input("need three distinct lines".into()));
    }
    Ok(vec![(t[0], 1), (t[1], -1), (t[2], 1)])
}

fn components(m: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for &(a, b) in edges {
        let (x, y) = (find(&mut parent, a), find(&mut parent, b));
        if x != y {
            parent[x] = y;
        }
    }
    let mut roots: Vec<usize> = (0..m).map(|i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Connectivity of the acute edge set alone.
pub fn gamma_disconnected(g: &AcutenessGraph) -> bool {
    components(g.m, &g.acute) > 1
}

/// Connectivity of the obtuse edge set alone.
pub fn obtuse_connected(g: &AcutenessGraph) -> bool {
    components(g.m, &g.obtuse) == 1
}

/// DOT rendering: solid edges acute, dashed obtuse.
pub fn to_dot(g: &AcutenessGraph, labels: &[String]) -> String {
    let mut s = String::from("graph acuteness {\n");
    for (i, l) in labels.iter().enumerate() {
        s.push_str(&format!("  v{i} [label=\"{l}\"];\n"));
    }
    for &(a, b) in &g.acute {
        s.push_str(&format!("  v{a} -- v{b};\n"));
    }
    for &(a, b) in &g.obtuse {
        s.push_str(&format!("  v{a} -- v{b} [style=dashed];\n"));
    }
    s.push_str("}\n");
    s
}

/// True iff the reflections of the lines generate the whole group.
pub fn is_full(rs: &RootSystem, members: &[Line]) -> bool {
    rs.subsystem_closure(members).len() == rs.n_pos()
}

/// DOT atlas: one graph block per circuit, vertices labelled by coefficient
/// and root coordinates (or line index without coordinates).
pub fn atlas_dot(rs: &RootSystem, items: &[Circuit]) -> Result<String> {
    let mut out = String::new();
    for (i, c) in items.iter().enumerate() {
        let graph = circuit_acuteness(rs, c)?;
        out.push_str(&format!("graph c{i} {{\n  label=\"circuit {i}\";\n"));
        for (v, (&l, coeff)) in c.members.iter().zip(&c.coeffs).enumerate() {
            let root = match rs.root_coords(l as RootIdx) {
                Some(coords) => coords
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                None => format!("line {l}"),
            };
            out.push_str(&format!("  v{v} [label=\"{coeff} ({root})\"];\n"));
        }
        for &(a, b) in &graph.acute {
            out.push_str(&format!("  v{a} -- v{b};\n"));
        }
        for &(a, b) in &graph.obtuse {
            out.push_str(&format!("  v{a} -- v{b} [style=dashed];\n"));
        }
        out.push_str("}\n");
    }
    Ok(out)
}

// --- Signed graphs for the classical types -------------------------------

/// Edge of a signed graph on vertices 0..n: plus/minus links and minus
/// self-loops (the only kind arising from roots).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, PartialOrd, Ord)]
pub enum SgEdge {
    Link { u: usize, v: usize, minus: bool },
    Loop { v: usize },
}

impl SgEdge {
    pub fn link(a: usize, b: usize, minus: bool) -> SgEdge {
        SgEdge::Link { u: a.min(b), v: a.max(b), minus }
    }

    fn endpoints(&self) -> (usize, usize) {
        match *self {
            SgEdge::Link { u, v, .. } => (u, v),
            SgEdge::Loop { v } => (v, v),
        }
    }

    fn minus_count(&self) -> usize {
        match *self {
            SgEdge::Link { minus, .. } => usize::from(minus),
            SgEdge::Loop { .. } => 1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SignedGraph {
    pub n: usize,
    pub edges: Vec<SgEdge>,
}

impl SignedGraph {
    pub fn sorted_edges(&self) -> Vec<SgEdge> {
        let mut e = self.edges.clone();
        e.sort();
        e
    }

    fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            let (u, v) = e.endpoints();
            d[u] += 1;
            d[v] += 1; // a loop contributes 2 to its vertex
        }
        d
    }
}

/// Dictionary: ±(e_i − e_j) ↦ plus link, ±(e_i + e_j) ↦ minus link,
/// ±e_i / ±2e_i ↦ minus self-loop. Requires type B, C or D.
pub fn to_signed_graph(rs: &RootSystem, lines: &[Line]) -> Result<SignedGraph> {
    let n = match rs.type_tag {
        GroupType::B(n) | GroupType::C(n) | GroupType::D(n) => n,
        t => return Err(Error::NotClassicalType(t.to_string())),
    };
    let mut edges = Vec::with_capacity(lines.len());
    for &l in lines {
        let v = rs.small_coords(l).expect("classical types always carry coordinates");
        let support: Vec<(usize, i64)> =
            v.iter().enumerate().filter(|(_, q)| !q.is_zero()).map(|(i, q)| (i, q.x)).collect();
        let edge = match support.as_slice() {
            [(i, a), (j, b)] if a.abs() == 1 && b.abs() == 1 => {
                SgEdge::link(*i, *j, a.signum() == b.signum())
            }
            [(i, a)] if a.abs() == 1 || a.abs() == 2 => SgEdge::Loop { v: *i },
            _ => {
                return Err(Error::Internal(format!(
                    "root {l} of {} is not a signed-graph edge",
                    rs.type_tag
                )))
            }
        };
        edges.push(edge);
    }
    Ok(SignedGraph { n, edges })
}

/// Inverse dictionary: edges back to lines of the given classical system.
pub fn from_signed_graph(rs: &RootSystem, sg: &SignedGraph) -> Result<Vec<Line>> {
    let (n, loop_coeff) = match rs.type_tag {
        GroupType::B(n) => (n, 1i64),
        GroupType::C(n) => (n, 2),
        GroupType::D(n) => (n, 0),
        t => return Err(Error::NotClassicalType(t.to_string())),
    };
    if sg.n > n {
        return Err(Error::Input("signed graph has more vertices than the rank".into()));
    }
    let mut out = Vec::with_capacity(sg.edges.len());
    for e in &sg.edges {
        let mut coords = vec![Qa::ZERO; n];
        match *e {
            SgEdge::Link { u, v, minus } => {
                coords[u] = Qa::int(1);
                coords[v] = Qa::int(if minus { 1 } else { -1 });
            }
            SgEdge::Loop { v } => {
                if loop_coeff == 0 {
                    return Err(Error::NotClassicalType(
                        "self-loops have no roots in type D".into(),
                    ));
                }
                coords[v] = Qa::int(loop_coeff);
            }
        }
        let line = (0..rs.n_pos() as RootIdx)
            .find(|&l| rs.small_coords(l).unwrap() == coords.as_slice())
            .ok_or_else(|| Error::Input(format!("edge {e:?} is not a root of {}", rs.type_tag)))?;
        out.push(line);
    }
    Ok(out)
}

/// Switching at a vertex: toggles the sign of every non-loop incident edge.
pub fn switch(sg: &SignedGraph, k: usize) -> SignedGraph {
    let edges = sg
        .edges
        .iter()
        .map(|e| match *e {
            SgEdge::Link { u, v, minus } if u == k || v == k => {
                SgEdge::Link { u, v, minus: !minus }
            }
            other => other,
        })
        .collect();
    SignedGraph { n: sg.n, edges }
}

/// Image under a signed permutation: relabel by `perm` (old → new), then
/// switch at every flipped vertex.
pub fn apply_signed_perm(sg: &SignedGraph, perm: &[usize], flips: &[bool]) -> SignedGraph {
    let mut out = SignedGraph {
        n: sg.n,
        edges: sg
            .edges
            .iter()
            .map(|e| match *e {
                SgEdge::Link { u, v, minus } => SgEdge::link(perm[u], perm[v], minus),
                SgEdge::Loop { v } => SgEdge::Loop { v: perm[v] },
            })
            .collect(),
    };
    for (v, &f) in flips.iter().enumerate() {
        if f {
            out = switch(&out, v);
        }
    }
    out
}

/// All simple cycles (connected 2-regular edge subsets; a self-loop is a
/// 1-cycle, a pair of parallel links a 2-cycle). Exponential scan, bounded
/// to the small graphs handled here.
fn simple_cycles(sg: &SignedGraph) -> Vec<Vec<usize>> {
    let e = sg.edges.len();
    assert!(e <= 20, "cycle scan limited to small graphs");
    let mut cycles = Vec::new();
    'subsets: for mask in 1u32..(1 << e) {
        let idxs: Vec<usize> = (0..e).filter(|&i| mask >> i & 1 == 1).collect();
        let mut deg = vec![0usize; sg.n];
        for &i in &idxs {
            let (u, v) = sg.edges[i].endpoints();
            deg[u] += 1;
            deg[v] += 1;
        }
        for d in &deg {
            if *d != 0 && *d != 2 {
                continue 'subsets;
            }
        }
        // 2-regular; connected?
        let verts: Vec<usize> = (0..sg.n).filter(|&v| deg[v] > 0).collect();
        let mut parent: Vec<usize> = (0..sg.n).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            let mut i = i;
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for &i in &idxs {
            let (u, v) = sg.edges[i].endpoints();
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
            }
        }
        let comp0 = find(&mut parent, verts[0]);
        if verts.iter().all(|&v| find(&mut parent, v) == comp0) {
            cycles.push(idxs);
        }
    }
    cycles
}

fn cycle_unbalanced(sg: &SignedGraph, cycle: &[usize]) -> bool {
    cycle.iter().map(|&i| sg.edges[i].minus_count()).sum::<usize>() % 2 == 1
}

/// Structural circuit test: a balanced cycle, or two edge-disjoint
/// unbalanced cycles sharing one vertex or joined by a path.
pub fn zaslavsky_is_circuit(sg: &SignedGraph) -> bool {
    let e = sg.edges.len();
    if e == 0 {
        return false;
    }
    let deg = sg.degrees();
    let verts: Vec<usize> = (0..sg.n).filter(|&v| deg[v] > 0).collect();
    let v = verts.len();
    // Connectivity over the support.
    let mut parent: Vec<usize> = (0..sg.n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for edge in &sg.edges {
        let (a, b) = edge.endpoints();
        let (x, y) = (find(&mut parent, a), find(&mut parent, b));
        if x != y {
            parent[x] = y;
        }
    }
    let c0 = find(&mut parent, verts[0]);
    if !verts.iter().all(|&w| find(&mut parent, w) == c0) {
        return false;
    }
    if verts.iter().any(|&w| deg[w] < 2) {
        return false;
    }
    if e == v {
        // Single cycle; a circuit iff balanced.
        if verts.iter().any(|&w| deg[w] != 2) {
            return false;
        }
        return sg.edges.iter().map(|e| e.minus_count()).sum::<usize>() % 2 == 0;
    }
    if e == v + 1 {
        // Cycle space has dimension 2: a theta graph carries three simple
        // cycles (and always a balanced one), the two handcuff shapes
        // exactly two.
        let cycles = simple_cycles(sg);
        return cycles.len() == 2
            && cycle_unbalanced(sg, &cycles[0])
            && cycle_unbalanced(sg, &cycles[1]);
    }
    false
}

/// Parity of the minus edges lying in the unique perfect matching of the
/// underlying graph (self-loops never participate in matchings).
pub fn matching_parity(sg: &SignedGraph) -> Result<u8> {
    let deg = sg.degrees();
    let verts: Vec<usize> = (0..sg.n).filter(|&v| deg[v] > 0).collect();
    let links: Vec<(usize, usize, bool)> = sg
        .edges
        .iter()
        .filter_map(|e| match *e {
            SgEdge::Link { u, v, minus } => Some((u, v, minus)),
            SgEdge::Loop { .. } => None,
        })
        .collect();
    fn search(
        verts: &[usize],
        links: &[(usize, usize, bool)],
        matched: &mut Vec<bool>,
        minus_in: usize,
        found: &mut Vec<usize>,
    ) {
        if found.len() >= 2 {
            return;
        }
        let Some(&u) = verts.iter().find(|&&v| !matched[v]) else {
            found.push(minus_in % 2);
            return;
        };
        for &(a, b, minus) in links {
            let w = if a == u && !matched[b] {
                b
            } else if b == u && !matched[a] {
                a
            } else {
                continue;
            };
            if w == u {
                continue;
            }
            matched[u] = true;
            matched[w] = true;
            search(verts, links, matched, minus_in + usize::from(minus), found);
            matched[u] = false;
            matched[w] = false;
        }
    }
    let mut matched = vec![false; sg.n];
    let mut found = Vec::new();
    search(&verts, &links, &mut matched, 0, &mut found);
    match found.len() {
        0 => Err(Error::NoPerfectMatching),
        1 => Ok(found[0] as u8),
        _ => Err(Error::MatchingNotUnique),
    }
}

/// The standard circuit C(n;i,j): two unbalanced cycles of sizes i and j
/// joined by a path, one minus edge per cycle placed at the junction. In
/// type C the size-1 "cycles" are minus self-loops (i = 1 required).
pub fn canonical_circuit_graph(type_c: bool, n: usize, i: usize, j: usize) -> Result<SignedGraph> {
    let ok = if type_c { i == 1 && (1..=n).contains(&j) } else { 2 <= i && i <= j && i + j <= n + 1 };
    if !ok || j > n || i > j {
        return Err(Error::Input(format!("no canonical circuit ({i},{j}) at rank {n}")));
    }
    let mut edges = Vec::new();
    // First cycle on vertices 0..i, junction at i−1.
    if i == 1 {
        edges.push(SgEdge::Loop { v: 0 });
    } else {
        for k in 0..(i - 1) {
            edges.push(SgEdge::link(k, k + 1, false));
        }
        edges.push(SgEdge::link(0, i - 1, true));
    }
    // Path from i−1 to n−j.
    for k in (i - 1)..(n - j) {
        edges.push(SgEdge::link(k, k + 1, false));
    }
    // Second cycle on vertices n−j..n, junction at n−j.
    if j == 1 {
        edges.push(SgEdge::Loop { v: n - 1 });
    } else {
        for k in (n - j)..(n - 1) {
            edges.push(SgEdge::link(k, k + 1, false));
        }
        edges.push(SgEdge::link(n - j, n - 1, true));
    }
    Ok(SignedGraph { n, edges })
}

/// Canonical parameters of a full classical circuit: the cycle sizes
/// (i ≤ j), plus the matching parity in the split case of type D (n even,
/// both sizes odd).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CanonicalForm {
    pub i: usize,
    pub j: usize,
    pub pi: Option<u8>,
}

pub fn classical_canonical_form(rs: &RootSystem, members: &[Line]) -> Result<CanonicalForm> {
    let (type_c, n) = match rs.type_tag {
        GroupType::D(n) => (false, n),
        GroupType::B(n) | GroupType::C(n) => (true, n),
        t => return Err(Error::NotClassicalType(t.to_string())),
    };
    if !is_circuit(rs, members)? {
        return Err(Error::Input("not a circuit".into()));
    }
    if !is_full(rs, members) {
        return Err(Error::Input("circuit is not full in its root system".into()));
    }
    let sg = to_signed_graph(rs, members)?;
    let cycles = simple_cycles(&sg);
    if cycles.len() != 2 || !cycle_unbalanced(&sg, &cycles[0]) || !cycle_unbalanced(&sg, &cycles[1])
    {
        return Err(Error::Internal("full circuit without two unbalanced cycles".into()));
    }
    let (ca, cb) = if cycles[0].len() <= cycles[1].len() {
        (&cycles[0], &cycles[1])
    } else {
        (&cycles[1], &cycles[0])
    };
    let (i, j) = (ca.len(), cb.len());
    let pi = if !type_c && n % 2 == 0 && i % 2 == 1 && j % 2 == 1 {
        Some(matching_parity(&sg)?)
    } else {
        None
    };
    // Execute the normalization: relabel onto the canonical vertex layout,
    // then switch minus edges into canonical position; the result must be
    // exactly C(n;i,j).
    let relabel = build_relabeling(&sg, ca, cb, i, j, n)?;
    let relabeled = apply_signed_perm(&sg, &relabel, &vec![false; n]);
    let canon = canonical_circuit_graph(type_c, n, i, j)?;
    let switched = normalize_signs_to(&relabeled, &canon)?;
    if switched.sorted_edges() != canon.sorted_edges() {
        return Err(Error::Internal("switching normalization failed".into()));
    }
    Ok(CanonicalForm { i, j, pi })
}

/// Relabeling old → new mapping the circuit onto the canonical layout:
/// first cycle ending at its junction (label i−1), path interior next,
/// second cycle starting at its junction (label n−j).
fn build_relabeling(
    sg: &SignedGraph,
    ca: &[usize],
    cb: &[usize],
    i: usize,
    j: usize,
    n: usize,
) -> Result<Vec<usize>> {
    let deg = sg.degrees();
    let cycle_walk = |cycle: &[usize]| -> Result<Vec<usize>> {
        // Vertices of the cycle in walk order starting at its junction (the
        // unique vertex of whole-graph degree ≥ 3).
        let mut verts: Vec<usize> = Vec::new();
        for &e in cycle {
            let (u, v) = sg.edges[e].endpoints();
            for w in [u, v] {
                if !verts.contains(&w) {
                    verts.push(w);
                }
            }
        }
        let junctions: Vec<usize> = verts.iter().copied().filter(|&v| deg[v] >= 3).collect();
        if junctions.len() != 1 {
            return Err(Error::Internal("cycle junction is not unique".into()));
        }
        let start = junctions[0];
        if verts.len() == 1 {
            return Ok(vec![start]);
        }
        let mut walk = vec![start];
        let mut used = vec![false; cycle.len()];
        let mut cur = start;
        loop {
            let mut next = None;
            for (k, &e) in cycle.iter().enumerate() {
                if used[k] {
                    continue;
                }
                let (u, v) = sg.edges[e].endpoints();
                if u == cur || v == cur {
                    used[k] = true;
                    next = Some(if u == cur { v } else { u });
                    break;
                }
            }
            match next {
                Some(w) if w == start => break,
                Some(w) => {
                    walk.push(w);
                    cur = w;
                }
                None => break,
            }
        }
        if walk.len() != verts.len() {
            return Err(Error::Internal("cycle walk incomplete".into()));
        }
        Ok(walk)
    };
    let walk_a = cycle_walk(ca)?;
    let walk_b = cycle_walk(cb)?;
    let j_a = walk_a[0];
    let j_b = walk_b[0];
    // Path between the junctions: edges in neither cycle.
    let in_cycle: Vec<bool> = {
        let mut v = vec![false; sg.edges.len()];
        for &e in ca.iter().chain(cb) {
            v[e] = true;
        }
        v
    };
    let mut path_verts = vec![j_a];
    let mut cur = j_a;
    let mut used = vec![false; sg.edges.len()];
    while cur != j_b {
        let mut advanced = false;
        for (k, e) in sg.edges.iter().enumerate() {
            if in_cycle[k] || used[k] {
                continue;
            }
            let (u, v) = e.endpoints();
            if u == cur || v == cur {
                used[k] = true;
                cur = if u == cur { v } else { u };
                path_verts.push(cur);
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Err(Error::Internal("junction path walk failed".into()));
        }
    }
    // Assemble: cycle A reversed walk gets labels i−1, i−2, ..., 0; the path
    // interior i, ..., n−j−1; cycle B walk n−j, ..., n−1.
    let mut relabel = vec![usize::MAX; sg.n];
    for (k, &v) in walk_a.iter().enumerate() {
        relabel[v] = i - 1 - k;
    }
    for (k, &v) in path_verts.iter().enumerate() {
        let label = i - 1 + k;
        if relabel[v] != usize::MAX && relabel[v] != label {
            return Err(Error::Internal("relabeling clash on the junction path".into()));
        }
        relabel[v] = label;
    }
    for (k, &v) in walk_b.iter().enumerate() {
        let label = n - j + k;
        if relabel[v] != usize::MAX && relabel[v] != label {
            return Err(Error::Internal("relabeling clash on the second cycle".into()));
        }
        relabel[v] = label;
    }
    if relabel.iter().any(|&l| l == usize::MAX) {
        return Err(Error::Internal("full circuit does not cover every vertex".into()));
    }
    Ok(relabel)
}

/// Finds a switching set carrying `sg` onto the sign pattern of `target`
/// (same underlying graph) and applies it. The set is determined by a
/// potential propagated over a spanning tree; parallel pairs are free.
fn normalize_signs_to(sg: &SignedGraph, target: &SignedGraph) -> Result<SignedGraph> {
    let mut pair_count: HashMap<(usize, usize), usize> = HashMap::new();
    for e in &sg.edges {
        if let SgEdge::Link { u, v, .. } = *e {
            *pair_count.entry((u, v)).or_insert(0) += 1;
        }
    }
    let target_sign = |u: usize, v: usize| -> Option<bool> {
        target.edges.iter().find_map(|e| match *e {
            SgEdge::Link { u: a, v: b, minus } if a == u && b == v => Some(minus),
            _ => None,
        })
    };
    // Potential by BFS over a link spanning tree.
    let mut p: Vec<i32> = vec![0; sg.n];
    let adj: Vec<(usize, usize, bool)> = sg
        .edges
        .iter()
        .filter_map(|e| match *e {
            SgEdge::Link { u, v, minus } => Some((u, v, minus)),
            _ => None,
        })
        .collect();
    for start in 0..sg.n {
        if p[start] != 0 {
            continue;
        }
        p[start] = 1;
        let mut queue = vec![start];
        while let Some(u) = queue.pop() {
            for &(a, b, minus) in &adj {
                let w = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if p[w] != 0 {
                    continue;
                }
                let (x, y) = (a.min(b), a.max(b));
                let free = pair_count[&(x, y)] > 1;
                let sigma = if minus { -1 } else { 1 };
                let tgt = if free {
                    sigma // parallel pairs match under any potential
                } else {
                    match target_sign(x, y) {
                        Some(m) => {
                            if m {
                                -1
                            } else {
                                1
                            }
                        }
                        None => return Err(Error::Internal("underlying graphs differ".into())),
                    }
                };
                p[w] = p[u] * sigma * tgt;
                queue.push(w);
            }
        }
    }
    let mut out = sg.clone();
    for v in 0..sg.n {
        if p[v] < 0 {
            out = switch(&out, v);
        }
    }
    Ok(out)
}
