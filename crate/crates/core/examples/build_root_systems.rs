//! Build root systems, inspect their roots, and check the classical
//! numerology: root counts, Coxeter numbers, pair orders.

use root_circuits::rootsys::{build, pair_order, GroupType};

fn main() {
    for name in ["A3", "B3", "D4", "F4", "H3", "E6", "I2:7"] {
        let t = GroupType::parse(name).unwrap();
        let rs = build(t).unwrap();
        println!(
            "{name}: rank {}, {} positive roots, |W| = {}, h = {}",
            rs.rank(),
            rs.n_pos(),
            t.group_order(),
            t.coxeter_number(),
        );
    }

    let rs = build(GroupType::parse("B3").unwrap()).unwrap();
    println!("\nB3 positive roots:");
    for l in 0..rs.n_pos() as u16 {
        let coords = rs.root_coords(l).unwrap();
        let text: Vec<String> = coords.iter().map(|x| x.to_string()).collect();
        println!("  line {l}: ({})", text.join(", "));
    }

    // Diagram labels recovered from the geometry: the order of s_a s_b.
    println!("\nB3 simple pair orders:");
    let simple = rs.simple_lines().to_vec();
    for i in 0..simple.len() {
        for j in i + 1..simple.len() {
            println!(
                "  m({}, {}) = {}",
                simple[i],
                simple[j],
                pair_order(&rs, simple[i], simple[j])
            );
        }
    }

    // A Coxeter element has order h regardless of the chosen ordering.
    let c = rs.coxeter_element(&[0, 1, 2]).unwrap();
    let c_rev = rs.coxeter_element(&[2, 1, 0]).unwrap();
    println!("\nCoxeter element order: {} (reversed order: {})", c.order(), c_rev.order());
}
