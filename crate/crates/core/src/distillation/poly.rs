//! Sparse multivariate polynomials in `(P_X, P_Y, P_Z, p)`.

use std::collections::BTreeMap;
use std::fmt;

/// Variables of an error polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Px,
    Py,
    Pz,
    /// Clifford (gate) error rate of the level executing the unit.
    P,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Px, Var::Py, Var::Pz, Var::P];

    fn index(self) -> usize {
        self as usize
    }

    fn symbol(self) -> &'static str {
        match self {
            Var::Px => "Px",
            Var::Py => "Py",
            Var::Pz => "Pz",
            Var::P => "p",
        }
    }
}

/// Exponents of `(P_X, P_Y, P_Z, p)` in one monomial.
pub type Exponents = [u8; 4];

/// A polynomial with non-negative coefficients stored term by term.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Exponents, f64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I: IntoIterator<Item = (f64, Exponents)>>(terms: I) -> Self {
        let mut poly = Self::zero();
        for (coefficient, exponents) in terms {
            poly.add_term(coefficient, exponents);
        }
        poly
    }

    pub fn add_term(&mut self, coefficient: f64, exponents: Exponents) {
        if coefficient == 0.0 {
            return;
        }
        let entry = self.terms.entry(exponents).or_insert(0.0);
        *entry += coefficient;
        if *entry == 0.0 {
            self.terms.remove(&exponents);
        }
    }

    pub fn add(&mut self, other: &Polynomial) {
        for (exponents, coefficient) in &other.terms {
            self.add_term(*coefficient, *exponents);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (f64, Exponents)> + '_ {
        self.terms.iter().map(|(e, c)| (*c, *e))
    }

    pub fn coefficient(&self, exponents: Exponents) -> f64 {
        self.terms.get(&exponents).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree of the highest monomial (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(total_degree).max().unwrap_or(0)
    }

    /// Lowest total degree over all monomials (0 for the zero polynomial).
    pub fn min_degree(&self) -> u32 {
        self.terms.keys().map(total_degree).min().unwrap_or(0)
    }

    pub fn evaluate(&self, values: [f64; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(exponents, coefficient)| {
                exponents
                    .iter()
                    .zip(values)
                    .fold(*coefficient, |acc, (&k, v)| acc * v.powi(i32::from(k)))
            })
            .sum()
    }

    /// Terms not involving the Clifford error rate `p`.
    pub fn input_part(&self) -> Polynomial {
        self.filter(|e| e[Var::P.index()] == 0)
    }

    /// Terms involving the Clifford error rate `p`.
    pub fn clifford_part(&self) -> Polynomial {
        self.filter(|e| e[Var::P.index()] > 0)
    }

    /// Drops every monomial of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Polynomial {
        self.filter(|e| total_degree(e) <= max_degree)
    }

    /// Renames variables: variable `v` becomes `mapping[v]`.
    pub fn substitute(&self, mapping: [Var; 4]) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(e, c)| {
            let mut renamed = [0u8; 4];
            for v in Var::ALL {
                renamed[mapping[v.index()].index()] += e[v.index()];
            }
            (*c, renamed)
        }))
    }

    pub fn has_negative_coefficient(&self) -> bool {
        self.terms.values().any(|c| *c < 0.0)
    }

    fn filter(&self, keep: impl Fn(&Exponents) -> bool) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }
}

fn total_degree(e: &Exponents) -> u32 {
    e.iter().map(|&k| u32::from(k)).sum()
}

/// Monomial helper: `monomial(&[(Var::Px, 1), (Var::Pz, 2)])`.
pub fn monomial(powers: &[(Var, u8)]) -> Exponents {
    let mut e = [0u8; 4];
    for (v, k) in powers {
        e[v.index()] += k;
    }
    e
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest degree first, then lexicographic, so output is stable.
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|a, b| total_degree(a.0).cmp(&total_degree(b.0)).then(b.0.cmp(a.0)));
        for (i, (exponents, coefficient)) in ordered.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for v in Var::ALL {
                match exponents[v.index()] {
                    0 => {}
                    1 => factors.push(v.symbol().to_string()),
                    k => factors.push(format!("{}^{}", v.symbol(), k)),
                }
            }
            if factors.is_empty() {
                write!(f, "{coefficient}")?;
            } else if *coefficient == 1.0 {
                write!(f, "{}", factors.join("·"))?;
            } else {
                write!(f, "{}·{}", coefficient, factors.join("·"))?;
            }
        }
        Ok(())
    }
}
