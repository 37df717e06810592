//! The rational cone of block vectors, the Area, χ and τ functionals on it,
//! and the extremal curvatures obtained by linear programming.

mod reconstruct;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::blocks::{
    enumerate_vertex_blocks, induced_edge_block, opposite_edge_block, BlockCatalogue, BlockError,
    EdgeBlock,
};
use crate::complex::{BranchedComplex, ComplexError, LinkPredicate, MapError};
use crate::lp::{check_solution, fmt_rational, int, scale_to_integer, solve_counting, LpOutcome, LpProblem, Rational, Sense};
use crate::origami::OrigamiError;
use crate::serre_graph::Edge;

pub use reconstruct::{reconstruct, Realization};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Origami(#[from] OrigamiError),
    #[error("vector is not an integer point of the cone")]
    NotInCone,
    #[error("gluing over edge {0} is unbalanced")]
    GluingMismatch(Edge),
    #[error("reconstruction failed verification: {0}")]
    VerificationFailed(String),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("solver output failed its certificate check")]
    UncertifiedSolution,
}

/// A rational or one of the two infinite sentinels. Never used in
/// arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extended {
    Finite(Rational),
    PosInf,
    NegInf,
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(r) => f.write_str(&fmt_rational(r)),
            Extended::PosInf => f.write_str("+inf"),
            Extended::NegInf => f.write_str("-inf"),
        }
    }
}

/// One gluing equation: for the nonempty edge block `block` over `edge`
/// (the representative `e0 < ē0`), `+1` per class inducing it over `e0`
/// and `−1` per class inducing its opposite over `ē0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingRow {
    pub edge: Edge,
    pub block: EdgeBlock,
    pub coeffs: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct ConeSystem {
    pub pred: LinkPredicate,
    pub catalogue: BlockCatalogue,
    pub rows: Vec<GluingRow>,
    pub area: Vec<Rational>,
    pub chi: Vec<Rational>,
    pub tau: Vec<Rational>,
}

pub fn area_functional(x: &BranchedComplex, cat: &BlockCatalogue) -> Vec<Rational> {
    cat.blocks.iter().map(|b| b.area_coefficient(x)).collect()
}

pub fn chi_functional(x: &BranchedComplex, cat: &BlockCatalogue) -> Vec<Rational> {
    cat.blocks.iter().map(|b| b.chi_coefficient(x)).collect()
}

/// Enumerates `𝒱(X)` for `pred` and assembles the gluing rows and the
/// functionals. Rows are indexed by the nonempty edge blocks that actually
/// arise; rows that vanish identically are dropped.
pub fn build_cone(x: &BranchedComplex, pred: &LinkPredicate, budget: u64) -> Result<ConeSystem, PipelineError> {
    let catalogue = enumerate_vertex_blocks(x, pred, budget)?;
    let gamma = x.skeleton();
    let n = catalogue.len();
    let mut rows: BTreeMap<(Edge, EdgeBlock), Vec<i64>> = BTreeMap::new();
    for (j, b) in catalogue.blocks.iter().enumerate() {
        for &e in gamma.link(b.base()) {
            let g = induced_edge_block(x, b, e)?;
            if g.is_empty() {
                continue;
            }
            let (key, sign) = if e < gamma.inv(e) {
                ((e, g), 1)
            } else {
                ((gamma.inv(e), opposite_edge_block(x, &g)), -1)
            };
            rows.entry(key).or_insert_with(|| vec![0; n])[j] += sign;
        }
    }
    let rows = rows
        .into_iter()
        .filter(|(_, c)| c.iter().any(|&v| v != 0))
        .map(|((edge, block), coeffs)| GluingRow { edge, block, coeffs })
        .collect();
    let area = area_functional(x, &catalogue);
    let chi = chi_functional(x, &catalogue);
    let tau = area.iter().zip(&chi).map(|(a, c)| a + c).collect();
    Ok(ConeSystem {
        pred: pred.clone(),
        catalogue,
        rows,
        area,
        chi,
        tau,
    })
}

fn eval(row: &[Rational], t: &[Rational]) -> Rational {
    row.iter().zip(t).map(|(a, b)| a * b).sum()
}

impl ConeSystem {
    pub fn dimension(&self) -> usize {
        self.catalogue.len()
    }

    /// Nonnegative and satisfies every gluing row.
    pub fn contains(&self, t: &[Rational]) -> bool {
        t.len() == self.dimension()
            && t.iter().all(|v| !v.is_negative())
            && self
                .rows
                .iter()
                .all(|r| r.coeffs.iter().zip(t).map(|(&c, v)| int(c) * v).sum::<Rational>().is_zero())
    }

    pub fn contains_integer(&self, t: &[u64]) -> bool {
        t.len() == self.dimension()
            && self.rows.iter().all(|r| {
                r.coeffs.iter().zip(t).map(|(&c, &v)| i128::from(c) * i128::from(v)).sum::<i128>() == 0
            })
    }

    pub fn area_of(&self, t: &[Rational]) -> Rational {
        eval(&self.area, t)
    }

    pub fn chi_of(&self, t: &[Rational]) -> Rational {
        eval(&self.chi, t)
    }

    pub fn tau_of(&self, t: &[Rational]) -> Rational {
        eval(&self.tau, t)
    }

    /// `τ(t)/Area(t)`, undefined at zero area.
    pub fn kappa_of(&self, t: &[Rational]) -> Option<Rational> {
        let area = self.area_of(t);
        (!area.is_zero()).then(|| self.tau_of(t) / area)
    }

    /// Optimise `τ` over the cone slice `Area = 1`.
    pub fn linear_program(&self, sense: Sense) -> LpProblem {
        let mut p = LpProblem::new(sense, self.tau.clone());
        for r in &self.rows {
            p.add_row(r.coeffs.iter().map(|&c| int(c)).collect(), Rational::zero());
        }
        p.add_row(self.area.clone(), int(1));
        p
    }

    /// Every nonzero integer point with coordinate sum at most `bound`.
    pub fn integer_points(&self, bound: u64) -> Vec<Vec<u64>> {
        fn rec(cone: &ConeSystem, i: usize, left: u64, t: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if i == t.len() {
                if t.iter().any(|&v| v > 0) && cone.contains_integer(t) {
                    out.push(t.clone());
                }
                return;
            }
            for v in 0..=left {
                t[i] = v;
                rec(cone, i + 1, left - v, t, out);
            }
            t[i] = 0;
        }
        let mut out = Vec::new();
        rec(self, 0, bound, &mut vec![0; self.dimension()], &mut out);
        out
    }
}

pub fn to_rationals(t: &[u64]) -> Vec<Rational> {
    t.iter().map(|&v| Rational::from_integer(v.into())).collect()
}

/// Result of optimising curvature over one predicate class.
#[derive(Clone, Debug)]
pub struct ExtremumReport {
    pub label: String,
    pub sense: Sense,
    pub value: Extended,
    /// Optimal vertex of the slice `Area = 1`.
    pub vector: Option<Vec<Rational>>,
    /// Its primitive integer multiple.
    pub integer: Option<Vec<u64>>,
    pub realizer: Option<Realization>,
    pub blocks: usize,
    pub rows: usize,
    pub pivots: usize,
}

/// Solves for the extremal curvature over `cone` and reconstructs a
/// realizer at the optimum. An empty feasible set gives `−∞` for the
/// maximum and `+∞` for the minimum.
pub fn extremize_cone(
    x: &BranchedComplex,
    cone: &ConeSystem,
    sense: Sense,
    label: &str,
) -> Result<ExtremumReport, PipelineError> {
    x.require_positive_areas()?;
    let p = cone.linear_program(sense);
    let (outcome, pivots) = solve_counting(&p);
    let mut report = ExtremumReport {
        label: label.to_string(),
        sense,
        value: match sense {
            Sense::Max => Extended::NegInf,
            Sense::Min => Extended::PosInf,
        },
        vector: None,
        integer: None,
        realizer: None,
        blocks: cone.dimension(),
        rows: cone.rows.len(),
        pivots,
    };
    let sol = match outcome {
        LpOutcome::Infeasible => return Ok(report),
        LpOutcome::Unbounded => return Err(PipelineError::Unbounded),
        LpOutcome::Optimal(sol) => sol,
    };
    if !check_solution(&p, &sol) {
        return Err(PipelineError::UncertifiedSolution);
    }
    let integer: Vec<u64> = scale_to_integer(&sol.vertex, true)
        .iter()
        .map(|v: &BigInt| v.to_u64().ok_or(PipelineError::NotInCone))
        .collect::<Result<_, _>>()?;
    let realizer = reconstruct(x, cone, &integer)?;
    if realizer.kappa() != Some(sol.value.clone()) {
        return Err(PipelineError::VerificationFailed(format!(
            "realizer curvature differs from the optimum {}",
            fmt_rational(&sol.value)
        )));
    }
    report.value = Extended::Finite(sol.value.clone());
    report.vector = Some(sol.vertex);
    report.integer = Some(integer);
    report.realizer = Some(realizer);
    Ok(report)
}

pub fn extremize(
    x: &BranchedComplex,
    pred: &LinkPredicate,
    sense: Sense,
    budget: u64,
) -> Result<ExtremumReport, PipelineError> {
    let cone = build_cone(x, pred, budget)?;
    let label = format!(
        "{}{}",
        pred.name(),
        match sense {
            Sense::Max => "+",
            Sense::Min => "-",
        }
    );
    extremize_cone(x, &cone, sense, &label)
}

/// `ρ±` over visibly irreducible complexes and `σ±` over surfaces.
#[derive(Clone, Debug)]
pub struct Invariants {
    pub rho_plus: ExtremumReport,
    pub rho_minus: ExtremumReport,
    pub sigma_plus: ExtremumReport,
    pub sigma_minus: ExtremumReport,
}

pub fn invariants(x: &BranchedComplex, budget: u64) -> Result<Invariants, PipelineError> {
    let irr = build_cone(x, &LinkPredicate::Irreducible, budget)?;
    let surf = build_cone(x, &LinkPredicate::Surface, budget)?;
    Ok(Invariants {
        rho_plus: extremize_cone(x, &irr, Sense::Max, "rho+")?,
        rho_minus: extremize_cone(x, &irr, Sense::Min, "rho-")?,
        sigma_plus: extremize_cone(x, &surf, Sense::Max, "sigma+")?,
        sigma_minus: extremize_cone(x, &surf, Sense::Min, "sigma-")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{phi_map, DEFAULT_BUDGET};
    use crate::complex::fixtures::{projective_plane, torus};
    use crate::complex::{covering_map, BranchedMap};
    use crate::lp::ratio;
    use crate::origami::Origami;

    fn value(r: &ExtremumReport) -> Extended {
        r.value.clone()
    }

    #[test]
    fn torus_invariants_vanish() {
        let inv = invariants(&torus(), DEFAULT_BUDGET).unwrap();
        for r in [&inv.rho_plus, &inv.rho_minus, &inv.sigma_plus, &inv.sigma_minus] {
            assert_eq!(value(r), Extended::Finite(int(0)), "{}", r.label);
            assert_eq!(r.integer, Some(vec![1]));
        }
    }

    #[test]
    fn torus_functionals() {
        let x = torus();
        let cone = build_cone(&x, &LinkPredicate::Surface, DEFAULT_BUDGET).unwrap();
        assert_eq!(cone.area, vec![int(1)]);
        assert_eq!(cone.chi, vec![int(-1)]);
        assert!(cone.rows.is_empty());
        assert!(cone.contains(&[int(1)]));
        assert_eq!(cone.integer_points(4).len(), 4);
    }

    #[test]
    fn projective_plane_has_curvature_one() {
        let inv = invariants(&projective_plane(), DEFAULT_BUDGET).unwrap();
        assert_eq!(value(&inv.rho_minus), Extended::Finite(int(1)));
        assert_eq!(value(&inv.sigma_plus), Extended::Finite(int(1)));
    }

    #[test]
    fn empty_class_gives_sentinels() {
        let x = BranchedComplex::from_presentation(&['a', 'b'], &["ab"]).unwrap();
        let inv = invariants(&x, DEFAULT_BUDGET).unwrap();
        assert_eq!(inv.rho_plus.value, Extended::NegInf);
        assert_eq!(inv.rho_minus.value, Extended::PosInf);
        assert_eq!(inv.sigma_plus.value.to_string(), "-inf");
        assert_eq!(inv.sigma_minus.value.to_string(), "+inf");
    }

    #[test]
    fn formula_instances() {
        // a face of area 2 and length 3, met once by a block's link edges
        let x = BranchedComplex::from_presentation(&['a', 'b', 'c'], &["abc"])
            .unwrap()
            .with_areas(vec![int(2)])
            .unwrap();
        let pred = LinkPredicate::custom("any", crate::complex::is_suitable).unwrap();
        let cone = build_cone(&x, &pred, DEFAULT_BUDGET).unwrap();
        for (b, a) in cone.catalogue.blocks.iter().zip(&cone.area) {
            assert_eq!(a, &(int(b.ends().count() as i64) * ratio(1, 3)));
        }
    }

    #[test]
    fn phi_satisfies_functionals_on_covers() {
        let x = torus();
        let pred = LinkPredicate::Surface;
        let cone = build_cone(&x, &pred, DEFAULT_BUDGET).unwrap();
        for perms in [
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![1, 2, 0], vec![0, 2, 1]],
            vec![vec![0, 1, 2], vec![2, 0, 1]],
        ] {
            let phi: BranchedMap = covering_map(&x, perms[0].len(), &perms).unwrap();
            let o = Origami::trivial(phi.domain().skeleton());
            let t = to_rationals(&phi_map(&cone.catalogue, &pred, &phi, &o).unwrap());
            let c = phi.domain().curvature();
            assert_eq!(cone.area_of(&t), c.area);
            assert_eq!(cone.chi_of(&t), int(c.chi));
            assert!(cone.contains(&t));
        }
    }
}
