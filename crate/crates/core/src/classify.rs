//! Orbit classification pipeline: representatives for the group orbits of
//! bases of positive roots, spanning-circuit orbits built from them, the
//! acuteness sweep over the resulting representatives, and a self-contained
//! survey for the rank-2 angle systems.
//!
//! Canonical form of a line set = the lexicographically minimal sorted set
//! in its orbit.  The default pipeline enumerates all bases in lex order and
//! claims whole orbits as they are first touched, so the first unclaimed set
//! is automatically canonical.  The streaming variant instead tests each
//! candidate for lex-minimality with an early-aborting orbit walk, keeping
//! memory bounded by a single orbit; it checkpoints progress for resumption.

use std::collections::{HashSet, VecDeque};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{self, Circuit};
use crate::rootsys::{IncrementalRank, Line, RootIdx, RootSystem};
use crate::scalar::ExactScalar;
use crate::{Error, Result};

/// Largest group order the in-memory sweep accepts; larger types must use
/// the streaming enumeration.
pub const SWEEP_ORDER_LIMIT: u64 = 500_000;

// ---------------------------------------------------------------------------
// Set orbits under the group action on lines

fn pack(set: &[Line]) -> u64 {
    debug_assert!(set.len() <= 8);
    let mut key = 0u64;
    for &l in set {
        debug_assert!(l < 127);
        key = (key << 7) | (l as u64 + 1);
    }
    key
}

fn set_image(rs: &RootSystem, simple: Line, set: &[Line]) -> Vec<Line> {
    let mut out: Vec<Line> = set
        .iter()
        .map(|&l| rs.line_of(rs.reflect(simple, l as RootIdx)))
        .collect();
    out.sort_unstable();
    out
}

/// Full orbit of a sorted line set under the simple reflections.
/// Returns the lex-minimal member, the orbit size, and every member's key.
fn orbit_of_set(rs: &RootSystem, start: &[Line]) -> (Vec<Line>, u64, Vec<u64>) {
    let mut min = start.to_vec();
    let mut seen: HashSet<u64> = HashSet::from([pack(start)]);
    let mut keys = vec![pack(start)];
    let mut queue = VecDeque::from([start.to_vec()]);
    while let Some(s) = queue.pop_front() {
        for &g in rs.simple_lines() {
            let img = set_image(rs, g, &s);
            let k = pack(&img);
            if seen.insert(k) {
                keys.push(k);
                if img < min {
                    min.clone_from(&img);
                }
                queue.push_back(img);
            }
        }
    }
    (min, keys.len() as u64, keys)
}

/// Canonical (lex-minimal) image of a line set under the group action.
pub fn canonical_set(rs: &RootSystem, set: &[Line]) -> Vec<Line> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    orbit_of_set(rs, &sorted).0
}

/// Early-aborting lex-minimality test: `Some(orbit size)` iff `start` is the
/// minimal member of its orbit; aborts as soon as a smaller member appears.
fn lexmin_orbit_size(rs: &RootSystem, start: &[Line]) -> Option<u64> {
    let mut seen: HashSet<u64> = HashSet::from([pack(start)]);
    let mut queue = VecDeque::from([start.to_vec()]);
    while let Some(s) = queue.pop_front() {
        for &g in rs.simple_lines() {
            let img = set_image(rs, g, &s);
            if img.as_slice() < start {
                return None;
            }
            if seen.insert(pack(&img)) {
                queue.push_back(img);
            }
        }
    }
    Some(seen.len() as u64)
}

// ---------------------------------------------------------------------------
// Basis enumeration

/// Depth-first enumeration of independent `size`-subsets of lines in lex
/// order, visiting only subsets strictly greater than `after` when set.
/// The visitor returns `false` to stop the walk early.
fn basis_dfs(
    rs: &RootSystem,
    size: usize,
    acc: &mut Vec<Line>,
    rank: &mut IncrementalRank,
    after: Option<&[Line]>,
    tight: bool,
    visit: &mut dyn FnMut(&[Line]) -> Result<bool>,
) -> Result<bool> {
    if acc.len() == size {
        if tight {
            return Ok(true);
        }
        return visit(acc);
    }
    let d = acc.len();
    let n_pos = rs.n_pos() as Line;
    let lo = if tight {
        after.expect("tight implies a bound")[d]
    } else {
        acc.last().map_or(0, |&l| l + 1)
    };
    let hi = n_pos - (size - d) as Line;
    for l in lo..=hi {
        let row = rs
            .small_coords(l as RootIdx)
            .expect("coordinate system required")
            .to_vec();
        if !rank.try_push(&row) {
            continue;
        }
        acc.push(l);
        let still_tight = tight && l == after.expect("tight implies a bound")[d];
        let go_on = basis_dfs(rs, size, acc, rank, after, still_tight, visit)?;
        acc.pop();
        rank.pop();
        if !go_on {
            return Ok(false);
        }
    }
    Ok(true)
}

fn for_each_basis_after(
    rs: &RootSystem,
    after: Option<&[Line]>,
    visit: &mut dyn FnMut(&[Line]) -> Result<bool>,
) -> Result<()> {
    if rs.ambient_dim().is_none() {
        return Err(Error::NoCoordinates(rs.type_tag.to_string()));
    }
    let mut acc = Vec::with_capacity(rs.rank());
    let mut rank = IncrementalRank::new();
    basis_dfs(rs, rs.rank(), &mut acc, &mut rank, after, after.is_some(), visit)?;
    Ok(())
}

/// One orbit of line sets: the canonical representative with its orbit and
/// stabilizer sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRep {
    pub members: Vec<Line>,
    pub orbit_size: u64,
    pub stabilizer_size: u64,
}

fn stabilizer_of(rs: &RootSystem, orbit_size: u64) -> u64 {
    let order = rs.type_tag.group_order();
    assert!(
        orbit_size > 0 && order % orbit_size == 0,
        "orbit size must divide the group order"
    );
    order / orbit_size
}

/// Orbit representatives for all bases of positive roots (independent
/// rank-sized line sets), by the in-memory claiming sweep.
pub fn enumerate_basis_orbits(rs: &RootSystem) -> Result<Vec<OrbitRep>> {
    let order = rs.type_tag.group_order();
    if order > SWEEP_ORDER_LIMIT {
        return Err(Error::BudgetExceeded {
            visited: order as usize,
            budget: SWEEP_ORDER_LIMIT as usize,
        });
    }
    let mut claimed: HashSet<u64> = HashSet::new();
    let mut reps: Vec<OrbitRep> = Vec::new();
    let mut total = 0u64;
    for_each_basis_after(rs, None, &mut |basis| {
        total += 1;
        if claimed.contains(&pack(basis)) {
            return Ok(true);
        }
        let (min, orbit_size, keys) = orbit_of_set(rs, basis);
        debug_assert_eq!(min, basis, "first unclaimed basis is canonical");
        claimed.extend(keys);
        reps.push(OrbitRep {
            members: basis.to_vec(),
            orbit_size,
            stabilizer_size: stabilizer_of(rs, orbit_size),
        });
        Ok(true)
    })?;
    let claimed_total: u64 = reps.iter().map(|r| r.orbit_size).sum();
    if claimed_total != total {
        return Err(Error::Internal(format!(
            "claimed {claimed_total} bases but enumerated {total}"
        )));
    }
    Ok(reps)
}

// ---------------------------------------------------------------------------
// Streaming enumeration with checkpoints

#[derive(Serialize, Deserialize)]
struct StreamState {
    type_tag: String,
    last: Option<Vec<Line>>,
    processed: u64,
    complete: bool,
    reps: Vec<OrbitRep>,
}

#[derive(Debug)]
pub struct StreamOutcome {
    pub reps: Vec<OrbitRep>,
    pub processed: u64,
    pub complete: bool,
}

fn load_state(rs: &RootSystem, path: &Path) -> Result<Option<StreamState>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path)?;
    let state: StreamState = serde_json::from_str(&text)?;
    if state.type_tag != rs.type_tag.to_string() {
        return Err(Error::Input(format!(
            "checkpoint is for type {}, not {}",
            state.type_tag, rs.type_tag
        )));
    }
    Ok(Some(state))
}

fn save_state(path: &Path, state: &StreamState) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let text = serde_json::to_string(state)?;
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Memory-bounded orbit enumeration for very large groups: candidates are
/// tested for lex-minimality independently (in parallel within each chunk of
/// `chunk` bases), so nothing global is kept.  Progress is checkpointed to
/// `state_path` after every chunk; a later call resumes from the checkpoint.
/// `max_chunks` limits one invocation (useful for scheduled partial runs).
pub fn enumerate_basis_orbits_streaming(
    rs: &RootSystem,
    state_path: Option<&Path>,
    chunk: usize,
    max_chunks: Option<usize>,
) -> Result<StreamOutcome> {
    if chunk == 0 {
        return Err(Error::Input("chunk size must be positive".into()));
    }
    let mut state = match state_path {
        Some(p) => load_state(rs, p)?.unwrap_or(StreamState {
            type_tag: rs.type_tag.to_string(),
            last: None,
            processed: 0,
            complete: false,
            reps: Vec::new(),
        }),
        None => StreamState {
            type_tag: rs.type_tag.to_string(),
            last: None,
            processed: 0,
            complete: false,
            reps: Vec::new(),
        },
    };
    let mut chunks_done = 0usize;
    while !state.complete {
        if let Some(mx) = max_chunks {
            if chunks_done >= mx {
                break;
            }
        }
        let mut batch: Vec<Vec<Line>> = Vec::with_capacity(chunk);
        for_each_basis_after(rs, state.last.as_deref(), &mut |basis| {
            batch.push(basis.to_vec());
            Ok(batch.len() < chunk)
        })?;
        if batch.is_empty() {
            state.complete = true;
        } else {
            let found: Vec<(Vec<Line>, Option<u64>)> = batch
                .par_iter()
                .map(|b| (b.clone(), lexmin_orbit_size(rs, b)))
                .collect();
            for (members, hit) in found {
                if let Some(orbit_size) = hit {
                    state.reps.push(OrbitRep {
                        members,
                        orbit_size,
                        stabilizer_size: stabilizer_of(rs, orbit_size),
                    });
                }
            }
            state.processed += batch.len() as u64;
            state.last = Some(batch.last().expect("nonempty batch").clone());
            if batch.len() < chunk {
                state.complete = true;
            }
        }
        if let Some(p) = state_path {
            save_state(p, &state)?;
        }
        chunks_done += 1;
    }
    Ok(StreamOutcome {
        reps: state.reps,
        processed: state.processed,
        complete: state.complete,
    })
}

// ---------------------------------------------------------------------------
// Circuit orbits

/// One orbit of spanning circuits: canonical member set, its dependence
/// coefficients, orbit data, and acuteness statistics.
#[derive(Clone, Debug, Serialize)]
pub struct CircuitOrbitRep {
    pub members: Vec<Line>,
    pub coeffs: Vec<ExactScalar>,
    pub orbit_size: u64,
    pub stabilizer_size: u64,
    /// True when the member reflections generate the whole group.
    pub full: bool,
    pub acute_edges: usize,
    pub obtuse_edges: usize,
}

/// Orbit representatives of spanning circuits (size rank + 1), obtained by
/// adding one extra line to each basis orbit representative and keeping the
/// unique circuit this creates whenever it still spans.  Non-spanning
/// circuits are skipped: they live in proper subsystems.
pub fn enumerate_circuit_orbits(
    rs: &RootSystem,
    basis_reps: &[OrbitRep],
) -> Result<Vec<CircuitOrbitRep>> {
    let n = rs.rank();
    let mut claimed: HashSet<u64> = HashSet::new();
    let mut reps: Vec<CircuitOrbitRep> = Vec::new();
    for basis in basis_reps {
        for extra in 0..rs.n_pos() as Line {
            if basis.members.contains(&extra) {
                continue;
            }
            let mut pool = basis.members.clone();
            pool.push(extra);
            pool.sort_unstable();
            let circuit = circuits::unique_circuit_in(rs, &pool)?;
            if circuit.members.len() != n + 1 {
                continue;
            }
            if claimed.contains(&pack(&circuit.members)) {
                continue;
            }
            let (min, orbit_size, keys) = orbit_of_set(rs, &circuit.members);
            claimed.extend(keys);
            let canon = circuits::unique_circuit_in(rs, &min)?;
            let graph = circuits::circuit_acuteness(rs, &canon)?;
            reps.push(CircuitOrbitRep {
                full: circuits::is_full(rs, &canon.members),
                acute_edges: graph.acute.len(),
                obtuse_edges: graph.obtuse.len(),
                members: canon.members,
                coeffs: canon.coeffs,
                orbit_size,
                stabilizer_size: stabilizer_of(rs, orbit_size),
            });
        }
    }
    reps.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(reps)
}

// ---------------------------------------------------------------------------
// Acuteness sweep

#[derive(Debug, Serialize)]
pub struct AcutenessSurvey {
    pub reps_checked: usize,
    /// (acute edge count, representatives with that count), ascending.
    pub edge_histogram: Vec<(usize, usize)>,
    /// Among representatives with at least four acute edges.
    pub isolated_vertex_reps: usize,
    pub triangle_plus_edge_reps: usize,
}

fn acute_components(m: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut sizes = vec![0usize; m];
    for v in 0..m {
        let r = find(&mut parent, v);
        sizes[r] += 1;
    }
    let mut out: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
    out.sort_unstable();
    out
}

/// Checks every representative's acuteness graph for disconnectedness and
/// tabulates edge counts and the shapes occurring at four or more edges.
/// A connected graph aborts the sweep: it would contradict the property the
/// whole pipeline rests on, so it must surface loudly.
pub fn verify_acuteness_lemma(
    rs: &RootSystem,
    reps: &[CircuitOrbitRep],
) -> Result<AcutenessSurvey> {
    let mut histogram: std::collections::BTreeMap<usize, usize> = Default::default();
    let mut isolated = 0usize;
    let mut triangle_edge = 0usize;
    for rep in reps {
        let circuit = Circuit { members: rep.members.clone(), coeffs: rep.coeffs.clone() };
        let graph = circuits::circuit_acuteness(rs, &circuit)?;
        if !circuits::gamma_disconnected(&graph) {
            return Err(Error::Internal(format!(
                "connected acuteness graph on circuit {:?}",
                rep.members
            )));
        }
        let e = graph.acute.len();
        *histogram.entry(e).or_insert(0) += 1;
        if e >= 4 {
            let mut degree = vec![0usize; graph.m];
            for &(a, b) in &graph.acute {
                degree[a] += 1;
                degree[b] += 1;
            }
            if degree.contains(&0) {
                isolated += 1;
            } else {
                let comps = acute_components(graph.m, &graph.acute);
                if comps == vec![2, 3] && e == 4 {
                    triangle_edge += 1;
                }
            }
        }
    }
    Ok(AcutenessSurvey {
        reps_checked: reps.len(),
        edge_histogram: histogram.into_iter().collect(),
        isolated_vertex_reps: isolated,
        triangle_plus_edge_reps: triangle_edge,
    })
}

/// Exhaustive sweep over every circuit (any rank) of at most rank+1 lines:
/// asserts each acuteness graph is disconnected and returns the number of
/// circuits checked.
pub fn exhaustive_circuit_sweep(rs: &RootSystem) -> Result<usize> {
    let all = circuits::all_circuits(rs, rs.rank() + 1)?;
    for c in &all {
        let graph = circuits::circuit_acuteness(rs, c)?;
        if !circuits::gamma_disconnected(&graph) {
            return Err(Error::Internal(format!(
                "connected acuteness graph on circuit {:?}",
                c.members
            )));
        }
    }
    Ok(all.len())
}

// ---------------------------------------------------------------------------
// Full report

#[derive(Debug, Serialize)]
pub struct ClassificationReport {
    pub type_tag: String,
    pub basis_orbit_count: usize,
    pub total_bases: u64,
    pub spanning_circuit_orbit_count: usize,
    pub full_circuit_orbit_count: usize,
    pub basis_orbits: Vec<OrbitRep>,
    pub circuit_orbits: Vec<CircuitOrbitRep>,
}

pub fn classification_report(rs: &RootSystem) -> Result<ClassificationReport> {
    let basis_orbits = enumerate_basis_orbits(rs)?;
    let circuit_orbits = enumerate_circuit_orbits(rs, &basis_orbits)?;
    Ok(ClassificationReport {
        type_tag: rs.type_tag.to_string(),
        basis_orbit_count: basis_orbits.len(),
        total_bases: basis_orbits.iter().map(|r| r.orbit_size).sum(),
        spanning_circuit_orbit_count: circuit_orbits.len(),
        full_circuit_orbit_count: circuit_orbits.iter().filter(|r| r.full).count(),
        basis_orbits,
        circuit_orbits,
    })
}

/// One JSON object per circuit orbit representative.
pub fn report_jsonl(report: &ClassificationReport) -> String {
    let mut out = String::new();
    for rep in &report.circuit_orbits {
        out.push_str(&serde_json::to_string(rep).expect("serializable report row"));
        out.push('\n');
    }
    out
}

/// DOT atlas over the circuit orbit representatives: solid acute edges,
/// dashed obtuse ones, vertices labelled by coefficient and root.
pub fn atlas_dot(rs: &RootSystem, report: &ClassificationReport) -> Result<String> {
    let items: Vec<Circuit> = report
        .circuit_orbits
        .iter()
        .map(|rep| Circuit { members: rep.members.clone(), coeffs: rep.coeffs.clone() })
        .collect();
    circuits::atlas_dot(rs, &items)
}

// ---------------------------------------------------------------------------
// Rank-2 angle systems

#[derive(Clone, Debug, Serialize)]
pub struct TripleOrbitRep {
    pub members: [Line; 3],
    /// Sector measures between the signed entries, in units of π/m; they
    /// always sum to 2m.
    pub angle_triple: [usize; 3],
    pub orbit_size: u64,
    pub full: bool,
    pub gamma_disconnected: bool,
}

#[derive(Debug, Serialize)]
pub struct TripleSurvey {
    pub m: usize,
    pub total_triples: u64,
    pub orbits: Vec<TripleOrbitRep>,
}

fn angle_triple(rs: &RootSystem, triple: &[Line; 3]) -> Result<[usize; 3]> {
    let m = rs.angle_m().expect("angle system");
    let entries = circuits::i2_triple_entries(rs, triple)?;
    let marks: Vec<usize> = entries
        .iter()
        .map(|&(r, sign)| {
            let l = rs.line_of(r) as usize;
            if sign < 0 {
                l + m
            } else {
                l
            }
        })
        .collect();
    let sector = |a: usize, b: usize| -> usize {
        let d = a.abs_diff(b);
        d.min(2 * m - d)
    };
    Ok([
        sector(marks[0], marks[1]),
        sector(marks[0], marks[2]),
        sector(marks[1], marks[2]),
    ])
}

/// Classifies all triples of distinct lines of a rank-2 angle system up to
/// the group action: every such triple is a circuit.
pub fn i2_triple_survey(rs: &RootSystem) -> Result<TripleSurvey> {
    let m = rs
        .angle_m()
        .ok_or_else(|| Error::Input("triple survey applies to angle systems".into()))?;
    let n = rs.n_pos() as Line;
    let mut claimed: HashSet<u64> = HashSet::new();
    let mut orbits = Vec::new();
    let mut total = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                total += 1;
                let set = [a, b, c];
                if claimed.contains(&pack(&set)) {
                    continue;
                }
                let (min, orbit_size, keys) = orbit_of_set(rs, &set);
                claimed.extend(keys);
                let members = [min[0], min[1], min[2]];
                let entries = circuits::i2_triple_entries(rs, &members)?;
                let graph = circuits::acuteness_graph_signed(rs, &entries)?;
                let closure = rs.subsystem_closure(&members);
                orbits.push(TripleOrbitRep {
                    members,
                    angle_triple: angle_triple(rs, &members)?,
                    orbit_size,
                    full: closure.len() == rs.n_pos(),
                    gamma_disconnected: circuits::gamma_disconnected(&graph),
                });
            }
        }
    }
    let claimed_total: u64 = orbits.iter().map(|o| o.orbit_size).sum();
    if claimed_total != total {
        return Err(Error::Internal(format!(
            "claimed {claimed_total} triples but enumerated {total}"
        )));
    }
    orbits.sort_by(|x, y| x.members.cmp(&y.members));
    Ok(TripleSurvey { m, total_triples: total, orbits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build, GroupType};
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sys(name: &str) -> RootSystem {
        build(GroupType::parse(name).unwrap()).unwrap()
    }

    #[test]
    fn h3_orbit_counts_and_totals() {
        let rs = sys("H3");
        let report = classification_report(&rs).unwrap();
        assert_eq!(report.basis_orbit_count, 11);
        assert_eq!(report.total_bases, 385);
        assert_eq!(report.full_circuit_orbit_count, 15);
        assert_eq!(report.spanning_circuit_orbit_count, 15);
        let survey = verify_acuteness_lemma(&rs, &report.circuit_orbits).unwrap();
        assert_eq!(survey.reps_checked, 15);
    }

    #[test]
    fn f4_orbit_counts() {
        let rs = sys("F4");
        let report = classification_report(&rs).unwrap();
        assert_eq!(report.basis_orbit_count, 35);
        assert_eq!(report.total_bases, 7560);
        assert_eq!(report.full_circuit_orbit_count, 22);
        verify_acuteness_lemma(&rs, &report.circuit_orbits).unwrap();
    }

    #[test]
    fn e6_orbit_counts() {
        let rs = sys("E6");
        let report = classification_report(&rs).unwrap();
        assert_eq!(report.basis_orbit_count, 39);
        assert_eq!(report.total_bases, 846720);
        assert_eq!(report.full_circuit_orbit_count, 17);
        verify_acuteness_lemma(&rs, &report.circuit_orbits).unwrap();
    }

    #[test]
    fn h4_orbit_counts_and_shape_statistics() {
        let rs = sys("H4");
        let report = classification_report(&rs).unwrap();
        assert_eq!(report.basis_orbit_count, 96);
        assert_eq!(report.total_bases, 398475);
        assert_eq!(report.spanning_circuit_orbit_count, 419);
        assert_eq!(report.full_circuit_orbit_count, 416);
        let survey = verify_acuteness_lemma(&rs, &report.circuit_orbits).unwrap();
        let by_count: std::collections::BTreeMap<usize, usize> =
            survey.edge_histogram.iter().copied().collect();
        assert_eq!(by_count.get(&4), Some(&21));
        assert_eq!(by_count.get(&5), Some(&2));
        assert_eq!(by_count.get(&6), Some(&2));
        assert!(by_count.keys().all(|&e| e <= 6));
        assert_eq!(survey.isolated_vertex_reps, 10);
        assert_eq!(survey.triangle_plus_edge_reps, 15);
    }

    #[test]
    fn a_series_has_one_edgeless_full_circuit_orbit() {
        for name in ["A3", "A4"] {
            let rs = sys(name);
            let report = classification_report(&rs).unwrap();
            let full: Vec<_> = report.circuit_orbits.iter().filter(|r| r.full).collect();
            assert_eq!(full.len(), 1, "{name}");
            assert_eq!(full[0].acute_edges, 0, "{name}");
            assert_eq!(full[0].members.len(), rs.rank() + 1, "{name}");
        }
    }

    #[test]
    fn d_series_matches_handcuff_parameter_counts() {
        for (name, expect) in [("D4", 2usize), ("D5", 4)] {
            let rs = sys(name);
            let report = classification_report(&rs).unwrap();
            assert_eq!(report.full_circuit_orbit_count, expect, "{name}");
            for rep in report.circuit_orbits.iter().filter(|r| r.full) {
                let form = circuits::classical_canonical_form(&rs, &rep.members).unwrap();
                assert!(2 <= form.i && form.i <= form.j && form.i + form.j <= rs.rank() + 1);
            }
        }
    }

    #[test]
    fn d6_split_pair_is_distinguished_by_matching_parity() {
        let rs = sys("D6");
        let report = classification_report(&rs).unwrap();
        assert_eq!(report.full_circuit_orbit_count, 7);
        let mut forms: Vec<(usize, usize, Option<u8>)> = report
            .circuit_orbits
            .iter()
            .filter(|r| r.full)
            .map(|r| {
                let f = circuits::classical_canonical_form(&rs, &r.members).unwrap();
                (f.i, f.j, f.pi)
            })
            .collect();
        forms.sort();
        let pair: Vec<_> = forms.iter().filter(|f| f.0 == 3 && f.1 == 3).collect();
        assert_eq!(pair.len(), 2, "the odd-odd parameters split into two orbits");
        assert_ne!(pair[0].2, pair[1].2);
        assert_eq!(
            forms.iter().map(|f| (f.0, f.1)).collect::<HashSet<_>>(),
            HashSet::from([(2, 2), (2, 3), (2, 4), (2, 5), (3, 3), (3, 4)])
        );
    }

    #[test]
    fn c_series_matches_loop_parameter_counts() {
        for (name, expect) in [("C3", 3usize), ("C4", 4)] {
            let rs = sys(name);
            let report = classification_report(&rs).unwrap();
            assert_eq!(report.full_circuit_orbit_count, expect, "{name}");
            let mut js: Vec<usize> = report
                .circuit_orbits
                .iter()
                .filter(|r| r.full)
                .map(|r| {
                    let f = circuits::classical_canonical_form(&rs, &r.members).unwrap();
                    assert_eq!(f.i, 1, "{name}");
                    f.j
                })
                .collect();
            js.sort_unstable();
            assert_eq!(js, (1..=rs.rank()).collect::<Vec<_>>(), "{name}");
        }
    }

    #[test]
    fn b_and_c_orbit_counts_agree_under_length_swap() {
        for (b, c) in [("B3", "C3"), ("B4", "C4")] {
            let rb = classification_report(&sys(b)).unwrap();
            let rc = classification_report(&sys(c)).unwrap();
            assert_eq!(rb.basis_orbit_count, rc.basis_orbit_count);
            assert_eq!(rb.full_circuit_orbit_count, rc.full_circuit_orbit_count);
            assert_eq!(rb.spanning_circuit_orbit_count, rc.spanning_circuit_orbit_count);
        }
    }

    #[test]
    fn orbit_stabilizer_product_and_canonical_idempotence() {
        for name in ["H3", "F4", "D4"] {
            let rs = sys(name);
            let report = classification_report(&rs).unwrap();
            let order = rs.type_tag.group_order();
            for rep in &report.basis_orbits {
                assert_eq!(rep.orbit_size * rep.stabilizer_size, order, "{name}");
                assert_eq!(canonical_set(&rs, &rep.members), rep.members, "{name}");
            }
            for rep in &report.circuit_orbits {
                assert_eq!(rep.orbit_size * rep.stabilizer_size, order, "{name}");
                assert_eq!(canonical_set(&rs, &rep.members), rep.members, "{name}");
            }
        }
    }

    #[test]
    fn random_conjugates_share_the_canonical_form() {
        let rs = sys("H3");
        let report = classification_report(&rs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for rep in &report.circuit_orbits {
            for _ in 0..10 {
                let mut set = rep.members.clone();
                for _ in 0..rng.gen_range(1..20) {
                    let g = rs.simple_lines()[rng.gen_range(0..rs.rank())];
                    set = set_image(&rs, g, &set);
                }
                assert_eq!(canonical_set(&rs, &set), rep.members);
            }
        }
    }

    #[test]
    fn streaming_enumeration_matches_the_sweep() {
        for name in ["A3", "B3", "H3"] {
            let rs = sys(name);
            let sweep = enumerate_basis_orbits(&rs).unwrap();
            let stream = enumerate_basis_orbits_streaming(&rs, None, 64, None).unwrap();
            assert!(stream.complete, "{name}");
            assert_eq!(stream.reps, sweep, "{name}");
            assert_eq!(
                stream.processed,
                sweep.iter().map(|r| r.orbit_size).sum::<u64>(),
                "{name}"
            );
        }
    }

    #[test]
    fn streaming_checkpoint_resumes_where_it_stopped() {
        let rs = sys("B3");
        let sweep = enumerate_basis_orbits(&rs).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b3.ckpt.json");
        let first = enumerate_basis_orbits_streaming(&rs, Some(&path), 7, Some(2)).unwrap();
        assert!(!first.complete);
        assert_eq!(first.processed, 14);
        let resumed = enumerate_basis_orbits_streaming(&rs, Some(&path), 7, None).unwrap();
        assert!(resumed.complete);
        assert_eq!(resumed.reps, sweep);
    }

    #[test]
    fn exhaustive_sweeps_stay_disconnected_in_small_types() {
        for (name, at_least) in [("A3", 1usize), ("C3", 1), ("D4", 1)] {
            let count = exhaustive_circuit_sweep(&sys(name)).unwrap();
            assert!(count >= at_least, "{name}: found {count} circuits");
        }
    }

    #[test]
    fn triple_survey_properties_for_all_small_angles() {
        for m in 3..=8usize {
            let rs = sys(&format!("I2:{m}"));
            let survey = i2_triple_survey(&rs).unwrap();
            let n = m as u64;
            assert_eq!(survey.total_triples, n * (n - 1) * (n - 2) / 6, "m={m}");
            let mut multisets: HashSet<[usize; 3]> = HashSet::new();
            for orbit in &survey.orbits {
                assert!(orbit.gamma_disconnected, "m={m}");
                let mut t = orbit.angle_triple;
                t.sort_unstable();
                assert_eq!(t.iter().sum::<usize>(), 2 * m, "m={m}");
                assert!(t.iter().all(|&a| 1 <= a && a <= m - 1), "m={m}");
                multisets.insert(t);
                let [a, b, c] = orbit.members;
                let g = (b - a).gcd(&(c - a)).gcd(&(m as Line));
                assert_eq!(orbit.full, g == 1, "m={m}: fullness is the gcd rule");
            }
            let expected = if m % 2 == 1 {
                multisets.len()
            } else {
                2 * multisets.len()
            };
            assert_eq!(survey.orbits.len(), expected, "m={m}");
        }
    }

    #[test]
    fn survey_and_coordinate_pipeline_agree_where_both_apply() {
        for m in [3usize, 4, 6] {
            let rs = sys(&format!("I2:{m}"));
            let survey = i2_triple_survey(&rs).unwrap();
            let report = classification_report(&rs).unwrap();
            assert_eq!(report.spanning_circuit_orbit_count, survey.orbits.len(), "m={m}");
            assert_eq!(
                report.circuit_orbits.iter().filter(|r| r.full).count(),
                survey.orbits.iter().filter(|o| o.full).count(),
                "m={m}"
            );
        }
    }

    #[test]
    fn report_artifacts_serialize_and_parse() {
        let rs = sys("H3");
        let report = classification_report(&rs).unwrap();
        let jsonl = report_jsonl(&report);
        assert_eq!(jsonl.lines().count(), 15);
        for line in jsonl.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("members").is_some());
            assert!(v.get("coeffs").is_some());
        }
        let dot = atlas_dot(&rs, &report).unwrap();
        assert_eq!(dot.matches("graph c").count(), 15);
    }

    #[test]
    fn sweep_refuses_groups_beyond_its_memory_envelope() {
        let rs = sys("E7");
        assert!(matches!(
            enumerate_basis_orbits(&rs),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
