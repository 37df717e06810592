//! Exact rational linear programming: a dense two-phase simplex with Bland's
//! rule, dual certificates, and helpers for rational vectors.

mod simplex;

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use simplex::{solve, solve_counting};

pub type Rational = BigRational;

/// Always `p/q`, including `q = 1`.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or an integer `p`. Rejects a zero denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

/// `coeffs · t = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// Optimise `objective · t` subject to equality rows and `t >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub columns: usize,
    pub rows: Vec<Constraint>,
    pub objective: Vec<Rational>,
    pub sense: Sense,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        LpProblem {
            columns: objective.len(),
            rows: Vec::new(),
            objective,
            sense,
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.columns, "row length");
        self.rows.push(Constraint { coeffs, rhs });
    }

    /// Same constraints, opposite sense.
    pub fn flipped(&self) -> Self {
        LpProblem {
            sense: match self.sense {
                Sense::Max => Sense::Min,
                Sense::Min => Sense::Max,
            },
            ..self.clone()
        }
    }

    /// Plain-text equation listing, for external cross-checks.
    pub fn listing(&self) -> String {
        let term_list = |coeffs: &[Rational]| {
            let terms: Vec<String> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| format!("{} t{}", fmt_rational(c), j))
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        let mut out = String::new();
        let sense = match self.sense {
            Sense::Max => "maximize",
            Sense::Min => "minimize",
        };
        let _ = writeln!(out, "{sense} {}", term_list(&self.objective));
        for (i, r) in self.rows.iter().enumerate() {
            let _ = writeln!(out, "r{i}: {} = {}", term_list(&r.coeffs), fmt_rational(&r.rhs));
        }
        let _ = writeln!(out, "t >= 0 ({} columns)", self.columns);
        out
    }
}

/// An optimal basic solution with a dual certificate: `duals` is feasible for
/// the dual problem (`Aᵀy >= c` when maximising, `<= c` when minimising) and
/// `b · y` equals `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub vertex: Vec<Rational>,
    pub basis: Vec<usize>,
    pub duals: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// Re-verifies a claimed optimum from scratch: primal feasibility, the
/// objective value, basic support, and the dual certificate.
pub fn check_solution(p: &LpProblem, s: &LpSolution) -> bool {
    if s.vertex.len() != p.columns || s.duals.len() != p.rows.len() {
        return false;
    }
    if s.vertex.iter().any(Signed::is_negative) {
        return false;
    }
    if p.rows.iter().any(|r| dot(&r.coeffs, &s.vertex) != r.rhs) {
        return false;
    }
    if dot(&p.objective, &s.vertex) != s.value {
        return false;
    }
    if s.basis.iter().any(|&j| j >= p.columns)
        || (0..p.columns).any(|j| !s.vertex[j].is_zero() && !s.basis.contains(&j))
    {
        return false;
    }
    let dual_value: Rational = p.rows.iter().zip(&s.duals).map(|(r, y)| &r.rhs * y).sum();
    if dual_value != s.value {
        return false;
    }
    (0..p.columns).all(|j| {
        let aty: Rational = p.rows.iter().zip(&s.duals).map(|(r, y)| &r.coeffs[j] * y).sum();
        match p.sense {
            Sense::Max => aty >= p.objective[j],
            Sense::Min => aty <= p.objective[j],
        }
    })
}

/// Multiplies by the least common multiple of the denominators. With
/// `reduce`, also divides out the gcd of the resulting entries.
pub fn scale_to_integer(v: &[Rational], reduce: bool) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    if reduce {
        let g = out.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in &mut out {
                *x /= &g;
            }
        }
    }
    out
}
