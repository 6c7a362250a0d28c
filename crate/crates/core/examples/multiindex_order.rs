//! Graded ordering of exponents and the monomial basis built on it.
use lejadiff::multiindex::{enumerate, rank, space_dimension, MonomialBasis};
use lejadiff::MultiIndex;

fn main() {
    let dim = 3;
    let degree = 3;
    println!("{} monomials of degree <= {degree} in {dim} variables", space_dimension(dim, degree));
    for alpha in enumerate(dim, degree).iter().skip(10) {
        println!("  {alpha:>9}  rank {}", rank(alpha));
    }

    let alpha: MultiIndex = "(2,0,1)".parse().unwrap();
    println!("successor of {alpha} is {}", alpha.successor());

    let basis = MonomialBasis::new(2, 2);
    let z = [0.5, -2.0];
    for (a, v) in basis.indices().iter().zip(basis.evaluate(&z)) {
        println!("  z^{a} = {v}");
    }
}
