//! Check that Hurwitz orbits of fixed-length factorizations of a Coxeter
//! element are classified exactly by their multisets of conjugacy classes.

use root_circuits::hurwitz::verify_theorem;
use root_circuits::rootsys::{build, GroupType};

fn main() {
    for (name, lengths) in [("A2", vec![2, 4]), ("B2", vec![2, 4, 6]), ("I2:5", vec![2, 4])] {
        let rs = build(GroupType::parse(name).unwrap()).unwrap();
        let order: Vec<usize> = (0..rs.rank()).collect();
        let c = rs.coxeter_element(&order).unwrap();
        for m in lengths {
            let report = verify_theorem(&rs, &c, m, 10_000_000).unwrap();
            println!(
                "{name} length {m}: {} factorizations in {} orbit(s)",
                report.total_factorizations,
                report.orbits.len()
            );
            for (i, orbit) in report.orbits.iter().enumerate() {
                println!(
                    "  orbit {i}: size {:>5}, class multiset {:?}",
                    orbit.size, orbit.multiset
                );
            }
            assert!(report.agreement, "orbit partition must match class partition");
        }
        println!();
    }
    println!("all partitions agree");
}
