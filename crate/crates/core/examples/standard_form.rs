//! Rewrite reflection factorizations into standard form: a prefix of equal
//! pairs followed by a shortest factorization of the product, reached only
//! through Hurwitz moves.

use root_circuits::hurwitz::{apply_trace, reflection_length, standard_form};
use root_circuits::rootsys::{build, GroupType, Line};

fn show(f: &[Line]) -> String {
    f.iter().map(|&l| (l + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn main() {
    let rs = build(GroupType::parse("A3").unwrap()).unwrap();

    // A palindrome word multiplying to the identity: nothing here is an
    // adjacent equal pair, so real rewriting has to happen.
    let s = rs.simple_lines().to_vec();
    let f: Vec<Line> = vec![s[0], s[1], s[2], s[2], s[1], s[0]];
    let product = rs.product_of_lines(&f);
    let ell = reflection_length(&rs, &product);
    println!("input : [{}]", show(&f));
    println!("product has reflection length {ell}");

    let (form, trace) = standard_form(&rs, &f).unwrap();
    println!("output: [{}]", show(&form));
    let pairs = (form.len() - ell) / 2;
    println!("shape : {pairs} equal pairs + {ell} factors");
    assert!(form[..2 * pairs].chunks(2).all(|w| w[0] == w[1]));

    // The trace is a complete certificate: replaying it on the input gives
    // exactly the output, and the product never changed along the way.
    let replayed = apply_trace(&rs, &f, &trace).unwrap();
    assert_eq!(replayed, form);
    assert_eq!(rs.product_of_lines(&form), product);
    println!("trace : {} moves, replay matches", trace.len());

    // The suffix is itself a shortest factorization of the product.
    let suffix = &form[2 * pairs..];
    assert_eq!(rs.product_of_lines(suffix), product);
    assert_eq!(suffix.len(), ell);
    println!("suffix: [{}]", show(suffix));
}
