//! Classical-type roots as signed graph edges: circuits become connected
//! subgraphs whose cycles obey a balance rule, switching acts like negating
//! a coordinate, and the matching parity separates split orbits in D(n).

use root_circuits::circuits::{
    canonical_circuit_graph, find_dependence, from_signed_graph, matching_parity, switch,
    to_signed_graph, zaslavsky_is_circuit,
};
use root_circuits::classify::classification_report;
use root_circuits::rootsys::{build, GroupType};

fn main() {
    let rs = build(GroupType::parse("D4").unwrap()).unwrap();
    let report = classification_report(&rs).unwrap();

    println!("D4 full-circuit representatives as signed graphs:");
    for rep in report.circuit_orbits.iter().filter(|r| r.full) {
        let sg = to_signed_graph(&rs, &rep.members).unwrap();
        println!("  lines {:?} -> {:?}", rep.members, sg.sorted_edges());

        // Two independent circuit tests must agree: the combinatorial one on
        // the signed graph and the linear-algebra one on the coordinates.
        assert!(zaslavsky_is_circuit(&sg));
        let roots: Vec<u16> = rep.members.clone();
        assert!(find_dependence(&rs, &roots).unwrap().is_some());

        // Switching at any vertex gives the graph of another root set with
        // the same circuit property.
        let switched = switch(&sg, 0);
        assert!(zaslavsky_is_circuit(&switched));
        let switched_lines = from_signed_graph(&rs, &switched).unwrap();
        assert!(find_dependence(&rs, &switched_lines).unwrap().is_some());
    }

    // The two D6 orbits with parameters (3,3) share a canonical graph shape
    // but differ in the parity of the minus edges on the perfect matching.
    let rs6 = build(GroupType::parse("D6").unwrap()).unwrap();
    let shape = canonical_circuit_graph(false, 6, 3, 3).unwrap();
    let base_lines = from_signed_graph(&rs6, &shape).unwrap();
    println!("\nC(6;3,3) canonical shape: {:?}", shape.sorted_edges());
    println!("as D6 lines: {:?}", base_lines);
    println!("matching parity: {}", matching_parity(&shape).unwrap());

    let flipped = switch(&shape, 0);
    println!("after switching vertex 0, parity: {}", matching_parity(&flipped).unwrap());
}
