//! Proper decompositions `L = D + F` of Lie derivations, together with the
//! restriction and extension machinery for locally finite windows and the
//! seeded lemma audit.

mod audit;
mod window;

pub use audit::{lemma_audit_suite, AuditReport, LemmaResult};
pub use window::{
    diagonal_constancy_audit, locality_check, DiagonalReport, DiagonalSample, ExtendedOperator,
    Window,
};

use serde::{Deserialize, Serialize};

use crate::algebra::IncidenceFunction;
use crate::error::{BasisPair, Error, Result};
use crate::operators::{LinearOperator, OperatorJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationFlags {
    pub d_is_derivation: bool,
    pub f_is_central_valued: bool,
    pub f_kills_commutators: bool,
    pub sum_equals_input: bool,
}

impl VerificationFlags {
    pub fn all(&self) -> bool {
        self.d_is_derivation
            && self.f_is_central_valued
            && self.f_kills_commutators
            && self.sum_equals_input
    }
}

/// `L = D + F` with every flag computed from the parts, never assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub derivation_part: LinearOperator,
    pub central_part: LinearOperator,
    pub verified: VerificationFlags,
    /// First basis pair where `D` breaks the Leibniz rule.
    pub derivation_witness: Option<BasisPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub derivation_part: OperatorJson,
    pub central_part: OperatorJson,
    pub verified: VerificationFlags,
    pub derivation_witness: Option<[[String; 2]; 2]>,
}

impl Decomposition {
    fn verify(
        input: &LinearOperator,
        derivation_part: LinearOperator,
        central_part: LinearOperator,
    ) -> Self {
        let derivation_witness = derivation_part.derivation_violation();
        let f_is_central_valued = central_part.columns().all(|(_, col)| col.is_central());
        let f_kills_commutators = kills_commutators(&central_part);
        let sum_equals_input = &derivation_part + &central_part == *input;
        Decomposition {
            derivation_part,
            central_part,
            verified: VerificationFlags {
                d_is_derivation: derivation_witness.is_none(),
                f_is_central_valued,
                f_kills_commutators,
                sum_equals_input,
            },
            derivation_witness,
        }
    }

    pub fn to_json(&self) -> DecompositionJson {
        let p = self.derivation_part.preorder();
        let label = |(x, y): (usize, usize)| [p.label(x).to_string(), p.label(y).to_string()];
        DecompositionJson {
            derivation_part: self.derivation_part.to_json(),
            central_part: self.central_part.to_json(),
            verified: self.verified,
            derivation_witness: self.derivation_witness.map(|(a, b)| [label(a), label(b)]),
        }
    }
}

/// `F([e_ij, e_kl]) = 0` for every pair of basis elements.
fn kills_commutators(f: &LinearOperator) -> bool {
    let p = f.preorder();
    let ring = f.ring();
    let pairs: Vec<(usize, usize)> = p.pairs().collect();
    pairs.iter().all(|&(i, j)| {
        pairs.iter().all(|&(k, l)| {
            let a = IncidenceFunction::basis_element(p, ring, i, j).expect("basis pair");
            let b = IncidenceFunction::basis_element(p, ring, k, l).expect("basis pair");
            let bracket = a.lie_bracket(&b).expect("same algebra");
            f.apply(&bracket).expect("same algebra").is_zero()
        })
    })
}

fn require_connected_lie(l: &LinearOperator) -> Result<()> {
    if !l.preorder().is_connected() {
        return Err(Error::Disconnected);
    }
    match l.lie_violation() {
        Some(w) => Err(Error::NotLieDerivation(w)),
        None => Ok(()),
    }
}

/// Splits a Lie derivation by its coefficients:
///
/// `D(e_ii) = Σ_{x<i} C^{ii}_{xi} e_xi + Σ_{y>i} C^{ii}_{iy} e_iy`,
/// `D(e_ij) = Σ_{x<i} C^{ii}_{xi} e_xj + C^{ij}_{ij} e_ij + Σ_{y>j} C^{jj}_{jy} e_iy`
/// for `i < j`, and `F = L - D`, which sends `e_ii` to `C^{ii}_{ii} δ` and the
/// other basis elements to zero.
pub fn decompose_by_coefficients(l: &LinearOperator) -> Result<Decomposition> {
    if !l.ring().is_two_torsion_free() {
        return Err(Error::TwoTorsion(l.ring().to_string()));
    }
    require_connected_lie(l)?;
    let p = l.preorder();
    let n = p.len();
    let d = LinearOperator::from_fn(p, l.ring(), |i, j| {
        if i == j {
            let mut col = IncidenceFunction::zero(p, l.ring());
            for x in (0..n).filter(|&x| p.lt(x, i)) {
                col.add_at(x, i, &l.coefficient(i, i, x, i));
            }
            for y in (0..n).filter(|&y| p.lt(i, y)) {
                col.add_at(i, y, &l.coefficient(i, i, i, y));
            }
            col
        } else {
            l.template_column(i, j)
        }
    });
    let f = l - &d;
    Ok(Decomposition::verify(l, d, f))
}

/// Splits a Lie derivation by diagonals: `R(f) = L(f)_d`, `D = L - R`.
///
/// The flags are reported honestly; on preorders with 2-cycles `D` need not
/// be a derivation.
pub fn decompose_by_diagonal(l: &LinearOperator) -> Result<Decomposition> {
    require_connected_lie(l)?;
    let r = LinearOperator::from_fn(l.preorder(), l.ring(), |i, j| {
        l.column(i, j).diagonal_part()
    });
    let d = l - &r;
    Ok(Decomposition::verify(l, d, r))
}
