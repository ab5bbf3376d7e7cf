//! Reduce reflection triples in the infinite dihedral group, where every
//! reflection is t(n): x -> 2n - x and Hurwitz moves act on integer triples.

use root_circuits::dihedral::{apply_move, project_line, reduce_triple, spread, Triple};
use root_circuits::hurwitz;
use root_circuits::rootsys::{build, GroupType};

fn main() {
    // The worked reduction of (3, 7, 5): each step conjugates a neighbor
    // pair, shrinking the spread until two entries agree.
    let start: Triple = [3, 7, 5];
    let (end, trace) = reduce_triple(start);
    let mut cur = start;
    println!("({}, {}, {})  spread {}", cur[0], cur[1], cur[2], spread(&cur));
    for &mv in &trace {
        cur = apply_move(&cur, mv);
        println!("({}, {}, {})  spread {}", cur[0], cur[1], cur[2], spread(&cur));
    }
    assert_eq!(cur, end);
    assert!(end[0] == end[1] || end[1] == end[2] || end[0] == end[2]);

    // The same trace is valid downstairs in any finite dihedral quotient:
    // reducing t(n) to the line n mod m commutes with every move.
    let rs = build(GroupType::parse("I2:5").unwrap()).unwrap();
    let m = 5;
    let downstairs: Vec<u16> = start.iter().map(|&n| project_line(n, m)).collect();
    let replayed = hurwitz::apply_trace(&rs, &downstairs, &trace).unwrap();
    let expected: Vec<u16> = end.iter().map(|&n| project_line(n, m)).collect();
    assert_eq!(replayed, expected);
    println!("\nprojected to I2(5): {:?} reduces to {:?} by the same moves", downstairs, expected);

    // Termination is not special to the worked example.
    let mut longest = (0usize, [0i64; 3]);
    for a in -6..=6 {
        for b in -6..=6 {
            for c in -6..=6 {
                let (_, t) = reduce_triple([a, b, c]);
                if t.len() > longest.0 {
                    longest = (t.len(), [a, b, c]);
                }
            }
        }
    }
    println!("slowest triple in [-6,6]^3: {:?} needs {} moves", longest.1, longest.0);
}
