//! Exact bounded-horizon evaluation of weighted power sums.

use super::Property;
use crate::exact::rational::Rational;
use crate::exact::QMatrix;
use crate::reductions::WeightedMatrixSet;
use num_traits::Signed;

/// An entry violating the property at index `n`; `entry` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub n: u64,
    pub entry: (usize, usize),
    pub value: Rational,
}

/// `Σ w_i A_iⁿ` for `n = 1, 2, …`.
pub struct PowerSums<'a> {
    set: &'a WeightedMatrixSet,
    powers: Vec<QMatrix>,
    n: u64,
}

impl<'a> PowerSums<'a> {
    pub fn new(set: &'a WeightedMatrixSet) -> PowerSums<'a> {
        PowerSums { set, powers: Vec::new(), n: 0 }
    }
}

impl Iterator for PowerSums<'_> {
    type Item = (u64, QMatrix);

    fn next(&mut self) -> Option<(u64, QMatrix)> {
        self.n += 1;
        if self.powers.is_empty() {
            self.powers = self.set.pairs().iter().map(|(_, a)| a.clone()).collect();
        } else {
            for (p, (_, a)) in self.powers.iter_mut().zip(self.set.pairs()) {
                *p = p.mul(a);
            }
        }
        let k = self.set.dim();
        let mut total = QMatrix::zero(k, k);
        for (p, (w, _)) in self.powers.iter().zip(self.set.pairs()) {
            total = total.add(&p.scale(w)).expect("same dimension");
        }
        Some((self.n, total))
    }
}

pub(crate) fn violates(v: &Rational, prop: Property) -> bool {
    match prop {
        Property::NonNegative => v.is_negative(),
        Property::Positive => !v.is_positive(),
    }
}

fn first_bad_entry(m: &QMatrix, n: u64, prop: Property) -> Option<Violation> {
    for p in 0..m.rows() {
        for q in 0..m.cols() {
            let v = m.get(p, q);
            if violates(v, prop) {
                return Some(Violation { n, entry: (p + 1, q + 1), value: v.clone() });
            }
        }
    }
    None
}

/// The first `n ≤ horizon` at which some entry violates the property.
pub fn simulate_prefix(set: &WeightedMatrixSet, horizon: u64, prop: Property) -> Option<Violation> {
    PowerSums::new(set)
        .take(horizon as usize)
        .find_map(|(n, m)| first_bad_entry(&m, n, prop))
}

/// The first violating entry at every `n ≤ horizon` that has one.
pub fn violations(set: &WeightedMatrixSet, horizon: u64, prop: Property) -> Vec<Violation> {
    PowerSums::new(set)
        .take(horizon as usize)
        .filter_map(|(n, m)| first_bad_entry(&m, n, prop))
        .collect()
}

/// Every `n ≤ horizon` at which some entry violates the property.
pub fn violation_indices(set: &WeightedMatrixSet, horizon: u64, prop: Property) -> Vec<u64> {
    violations(set, horizon, prop).into_iter().map(|v| v.n).collect()
}

/// The violating entry at exactly index `n`, if any.
pub fn violation_at(set: &WeightedMatrixSet, n: u64, prop: Property) -> Option<Violation> {
    assert!(n >= 1);
    let m = set.weighted_power_sum(n).expect("n ≥ 1");
    first_bad_entry(&m, n, prop)
}

/// Value of entry `(p, q)` (1-based) at index `n`.
pub fn entry_value(set: &WeightedMatrixSet, n: u64, entry: (usize, usize)) -> Rational {
    let m = set.weighted_power_sum(n).expect("n ≥ 1");
    m.get(entry.0 - 1, entry.1 - 1).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::lrs::Lrs;
    use crate::reductions::unnlrs_to_ennsom;

    fn paper_lrs() -> Lrs {
        Lrs::from_ints(&[2, -1], &[-1, 0]).unwrap()
    }

    #[test]
    fn identity_prefix() {
        let set = WeightedMatrixSet::from_ints(&[(1, QMatrix::identity(2))]).unwrap();
        assert_eq!(simulate_prefix(&set, 50, Property::NonNegative), None);
        let v = simulate_prefix(&set, 50, Property::Positive).unwrap();
        assert_eq!(v, Violation { n: 1, entry: (1, 2), value: rat(0) });
    }

    #[test]
    fn generator_matrix_always_violates() {
        let set = WeightedMatrixSet::from_ints(&[(1, paper_lrs().generator_matrix())]).unwrap();
        assert_eq!(violation_indices(&set, 100, Property::NonNegative), (1..=100).collect::<Vec<_>>());
    }

    #[test]
    fn reduction_violates_only_first() {
        let set = unnlrs_to_ennsom(&paper_lrs());
        assert_eq!(violation_indices(&set, 50, Property::NonNegative), vec![1]);
        let v = violation_at(&set, 1, Property::NonNegative).unwrap();
        assert_eq!(v.value, rat(-1));
        assert_eq!(entry_value(&set, 1, v.entry), rat(-1));
    }
}
