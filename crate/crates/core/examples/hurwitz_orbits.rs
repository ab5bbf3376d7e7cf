//! Walk Hurwitz orbits of reflection factorizations: braid moves conjugate
//! adjacent factors while preserving the product.

use root_circuits::hurwitz::{
    apply_trace, class_multiset, coxeter_factorization_count, hurwitz_orbit, sigma,
};
use root_circuits::rootsys::{build, GroupType};

fn main() {
    let rs = build(GroupType::parse("B2").unwrap()).unwrap();

    // One braid move on a shortest factorization of the Coxeter element.
    let start = vec![0u16, 1];
    let moved = sigma(&rs, &start, 0).unwrap();
    println!("sigma_1 [1 2] = [{} {}] (1-based)", moved[0] + 1, moved[1] + 1);
    assert_eq!(
        rs.product_of_lines(&start).order(),
        rs.product_of_lines(&moved).order()
    );

    // The full orbit of the shortest factorizations is a single one whose
    // size matches the closed-form count h^n n! / |W|.
    let orbit = hurwitz_orbit(&rs, &start, 1 << 20).unwrap();
    println!(
        "B2 shortest-factorization orbit: {} elements (closed form {})",
        orbit.len(),
        coxeter_factorization_count(&rs)
    );
    for f in &orbit.elements {
        println!("  [{} {}] classes {:?}", f[0] + 1, f[1] + 1, class_multiset(&rs, f));
    }

    // Every orbit member is reachable by a recorded move trace.
    let target = orbit.len() - 1;
    let trace = orbit.trace_to(target);
    let replayed = apply_trace(&rs, &start, &trace).unwrap();
    assert_eq!(replayed, orbit.elements[target]);
    println!(
        "replayed member {target} through {} moves: [{} {}]",
        trace.len(),
        replayed[0] + 1,
        replayed[1] + 1
    );

    // Longer factorizations can mix class patterns inside one orbit.
    let long = vec![0u16, 0, 1, 1];
    let orbit = hurwitz_orbit(&rs, &long, 1 << 20).unwrap();
    println!("\nB2 length-4 orbit of [1 1 2 2]: {} elements", orbit.len());
}
