//! Fixtures shared by the benchmarks in `benches/`.

use lebesgue_core::lebesgue2d::CardinalEvaluator;
use lebesgue_core::nodes1d::{Family1D, NodeSet1D};
use lebesgue_core::nodes2d::Family2D;

pub fn nodes(family: Family1D, n: usize) -> NodeSet1D {
    family.generate(n).expect("classical family")
}

pub fn evaluator(family: Family2D, n: usize) -> CardinalEvaluator {
    CardinalEvaluator::new(&family.generate(n).expect("unisolvent family")).expect("factorizes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(nodes(Family1D::Chebyshev2, 4).len(), 5);
        assert_eq!(evaluator(Family2D::Padua, 3).len(), 10);
    }
}
