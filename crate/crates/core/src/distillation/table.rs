//! Tabulated error models for the entanglement distillation units.
//!
//! Input-error terms are reproduced independently by
//! [`enumerate_unit_model`](super::oracle::enumerate_unit_model); the
//! Clifford (`p`) coefficients depend on circuit scheduling details and are
//! carried here as constants.

use super::poly::{monomial, Polynomial, Var};
use super::{UnitErrorModel, UnitKind};

use Var::{Px, Py, Pz, P};

fn poly(terms: &[(f64, &[(Var, u8)])]) -> Polynomial {
    Polynomial::from_terms(terms.iter().map(|(c, m)| (*c, monomial(m))))
}

/// Rejection and X/Y/Z output polynomials for `kind`.
pub fn tabulated_model(kind: UnitKind) -> UnitErrorModel {
    match kind {
        // Clifford terms for the Y and Z outputs are both +1.7p.
        UnitKind::FiveQubitPerfect => UnitErrorModel {
            rejection: poly(&[
                (5.0, &[(Pz, 1)]),
                (5.0, &[(Py, 1)]),
                (5.0, &[(Px, 1)]),
                (6.5, &[(P, 1)]),
            ]),
            out_x: poly(&[(5.0, &[(Px, 1), (Pz, 2)]), (5.0, &[(Px, 1), (Py, 2)]), (3.1, &[(P, 1)])]),
            out_y: poly(&[(5.0, &[(Py, 1), (Pz, 2)]), (5.0, &[(Py, 1), (Px, 2)]), (1.7, &[(P, 1)])]),
            out_z: poly(&[(5.0, &[(Pz, 1), (Py, 2)]), (5.0, &[(Pz, 1), (Px, 2)]), (1.7, &[(P, 1)])]),
        },
        UnitKind::RepetitionX => UnitErrorModel {
            rejection: poly(&[
                (2.0, &[(Pz, 1)]),
                (2.0, &[(Py, 1)]),
                (2.0, &[(Px, 1), (Pz, 1)]),
                (2.0, &[(Px, 1), (Py, 1)]),
                (2.4, &[(P, 1)]),
            ]),
            out_x: poly(&[(2.0, &[(Px, 1)]), (0.8, &[(P, 1)])]),
            out_y: poly(&[(2.0, &[(Py, 1), (Pz, 1)]), (0.8, &[(P, 1)])]),
            out_z: poly(&[(1.0, &[(Py, 2)]), (1.0, &[(Pz, 2)]), (0.8, &[(P, 1)])]),
        },
        UnitKind::RepetitionY => UnitErrorModel {
            rejection: poly(&[
                (2.0, &[(Pz, 1)]),
                (2.0, &[(Px, 1)]),
                (2.0, &[(Py, 1), (Px, 1)]),
                (2.0, &[(Py, 1), (Pz, 1)]),
                (2.4, &[(P, 1)]),
            ]),
            out_x: poly(&[(2.0, &[(Px, 1), (Pz, 1)]), (0.8, &[(P, 1)])]),
            out_y: poly(&[(2.0, &[(Py, 1)]), (0.8, &[(P, 1)])]),
            out_z: poly(&[(1.0, &[(Px, 2)]), (1.0, &[(Pz, 2)]), (0.8, &[(P, 1)])]),
        },
        UnitKind::RepetitionZ => UnitErrorModel {
            rejection: poly(&[
                (2.0, &[(Px, 1)]),
                (2.0, &[(Py, 1)]),
                (2.0, &[(Px, 1), (Pz, 1)]),
                (2.0, &[(Py, 1), (Pz, 1)]),
                (2.4, &[(P, 1)]),
            ]),
            out_x: poly(&[(1.0, &[(Py, 2)]), (1.0, &[(Px, 2)]), (0.8, &[(P, 1)])]),
            out_y: poly(&[(2.0, &[(Py, 1), (Px, 1)]), (0.8, &[(P, 1)])]),
            out_z: poly(&[(2.0, &[(Pz, 1)]), (0.8, &[(P, 1)])]),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_vanishes_at_zero() {
        for kind in UnitKind::ALL {
            let model = tabulated_model(kind);
            for poly in model.polynomials() {
                assert_eq!(poly.evaluate([0.0; 4]), 0.0);
                assert!(!poly.has_negative_coefficient());
            }
        }
    }

    #[test]
    fn clifford_coefficients() {
        let five = tabulated_model(UnitKind::FiveQubitPerfect);
        let p = monomial(&[(P, 1)]);
        assert_eq!(five.rejection.coefficient(p), 6.5);
        assert_eq!(five.out_x.coefficient(p), 3.1);
        assert_eq!(five.out_y.coefficient(p), 1.7);
        assert_eq!(five.out_z.coefficient(p), 1.7);
        let rep = tabulated_model(UnitKind::RepetitionY);
        assert_eq!(rep.rejection.coefficient(p), 2.4);
        assert_eq!(rep.out_z.coefficient(p), 0.8);
    }
}
