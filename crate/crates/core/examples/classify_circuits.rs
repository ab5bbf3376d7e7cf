//! Classify bases and spanning circuits of positive roots up to the group
//! action, reproducing the orbit-count table for the desk-scale types.

use root_circuits::classify::classification_report;
use root_circuits::rootsys::{build, GroupType};

fn main() {
    println!("{:<6} {:>7} {:>12} {:>10} {:>6}", "type", "bases", "total bases", "spanning", "full");
    for name in ["A3", "B3", "C3", "D4", "H3", "F4", "D5", "E6"] {
        let rs = build(GroupType::parse(name).unwrap()).unwrap();
        let r = classification_report(&rs).unwrap();
        println!(
            "{:<6} {:>7} {:>12} {:>10} {:>6}",
            name,
            r.basis_orbit_count,
            r.total_bases,
            r.spanning_circuit_orbit_count,
            r.full_circuit_orbit_count
        );
    }

    // Every orbit obeys |orbit| * |stabilizer| = |W|, and each representative
    // is the lexicographic minimum of its orbit.
    let rs = build(GroupType::parse("H3").unwrap()).unwrap();
    let r = classification_report(&rs).unwrap();
    println!("\nH3 circuit orbits (members are 0-based lines):");
    for rep in &r.circuit_orbits {
        println!(
            "  {:?} orbit {} stabilizer {} acute {} obtuse {}{}",
            rep.members,
            rep.orbit_size,
            rep.stabilizer_size,
            rep.acute_edges,
            rep.obtuse_edges,
            if rep.full { "" } else { "  (not full)" }
        );
    }
}
