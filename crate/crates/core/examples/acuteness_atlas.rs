//! Sweep the acuteness graphs of circuit orbit representatives and emit a
//! DOT atlas: for genuine root-system circuits the acute part is always
//! disconnected, unlike for general vector configurations.

use root_circuits::circuits::{acuteness_graph_vectors, gamma_disconnected};
use root_circuits::classify::{atlas_dot, classification_report, verify_acuteness_lemma};
use root_circuits::rootsys::{build, GroupType};
use root_circuits::scalar::ExactScalar;

fn main() {
    let rs = build(GroupType::parse("F4").unwrap()).unwrap();
    let report = classification_report(&rs).unwrap();
    let survey = verify_acuteness_lemma(&rs, &report.circuit_orbits).unwrap();

    println!(
        "F4: {} circuit orbit representatives, all acuteness graphs disconnected",
        survey.reps_checked
    );
    println!("acute edge histogram:");
    for (edges, count) in &survey.edge_histogram {
        println!("  {edges} edges: {count} orbits");
    }

    let path = std::env::temp_dir().join("F4_atlas.dot");
    std::fs::write(&path, atlas_dot(&rs, &report).unwrap()).unwrap();
    println!("atlas written to {}", path.display());

    // Negative control: a dependent quadruple that is NOT drawn from a root
    // system can have a connected acuteness graph.
    let int = |v: [i64; 3]| -> Vec<ExactScalar> {
        v.into_iter().map(ExactScalar::from_int).collect()
    };
    let vectors = vec![
        int([-6, -3, 0]),
        int([-1, 1, 0]),
        int([1, 2, 2]),
        int([6, 0, -2]),
    ];
    let coeffs = vec![ExactScalar::from_int(1); 4];
    let graph = acuteness_graph_vectors(&vectors, &coeffs).unwrap();
    println!(
        "\ngeneral-position quadruple: acute edges {:?}, disconnected: {}",
        graph.acute,
        gamma_disconnected(&graph)
    );
    assert!(!gamma_disconnected(&graph));
}
