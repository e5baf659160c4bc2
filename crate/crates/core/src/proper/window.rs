use std::sync::Arc;

use crate::algebra::IncidenceFunction;
use crate::error::{Error, Result};
use crate::operators::LinearOperator;
use crate::preorder::Preorder;
use crate::ring::RingElement;

/// A finite window onto a locally finite preorder (for example `0..n` inside
/// the natural numbers). Queries are exact only on the designated interior,
/// which must be closed under intervals of the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    preorder: Arc<Preorder>,
    interior: Vec<bool>,
}

impl Window {
    pub fn new(preorder: &Arc<Preorder>, interior: &[usize]) -> Result<Self> {
        let n = preorder.len();
        let mut mask = vec![false; n];
        for &x in interior {
            if x >= n {
                return Err(Error::Format(format!("interior index {x} out of range")));
            }
            mask[x] = true;
        }
        for x in (0..n).filter(|&x| mask[x]) {
            for y in (0..n).filter(|&y| mask[y] && preorder.leq(x, y)) {
                if preorder.interval(x, y)?.into_iter().any(|z| !mask[z]) {
                    return Err(Error::OutsideInterior(
                        preorder.label(x).to_string(),
                        preorder.label(y).to_string(),
                    ));
                }
            }
        }
        Ok(Window {
            preorder: Arc::clone(preorder),
            interior: mask,
        })
    }

    /// Entire preorder as interior.
    pub fn whole(preorder: &Arc<Preorder>) -> Self {
        Window {
            preorder: Arc::clone(preorder),
            interior: vec![true; preorder.len()],
        }
    }

    /// The initial segment `0 < 1 < ... < len - 1` of the natural numbers.
    pub fn nat_chain(len: usize) -> Self {
        let labels: Vec<String> = (0..len).map(|i| i.to_string()).collect();
        Self::whole(&Arc::new(
            Preorder::chain(&labels).expect("distinct labels"),
        ))
    }

    pub fn preorder(&self) -> &Arc<Preorder> {
        &self.preorder
    }

    pub fn in_interior(&self, x: usize) -> bool {
        self.interior.get(x).copied().unwrap_or(false)
    }

    fn require_pair(&self, x: usize, y: usize) -> Result<()> {
        if !(self.in_interior(x) && self.in_interior(y)) {
            return Err(Error::OutsideInterior(
                self.preorder
                    .label(x.min(self.preorder.len() - 1))
                    .to_string(),
                self.preorder
                    .label(y.min(self.preorder.len() - 1))
                    .to_string(),
            ));
        }
        self.preorder.require_leq(x, y)
    }

    pub fn extend(&self, op: &LinearOperator) -> Result<ExtendedOperator> {
        if op.preorder().as_ref() != self.preorder.as_ref() {
            return Err(Error::Mismatch);
        }
        Ok(ExtendedOperator {
            op: op.clone(),
            window: self.clone(),
        })
    }
}

/// `L̂(f)(x, y) = L(f|_x^y)(x, y)`, evaluated on demand for interior pairs.
#[derive(Debug, Clone)]
pub struct ExtendedOperator {
    op: LinearOperator,
    window: Window,
}

impl ExtendedOperator {
    /// `f` is given pointwise; it is only read on pairs inside `[x, y]`.
    pub fn evaluate<F>(&self, f: F, x: usize, y: usize) -> Result<RingElement>
    where
        F: Fn(usize, usize) -> RingElement,
    {
        self.window.require_pair(x, y)?;
        let p = &self.window.preorder;
        let iv = p.interval(x, y)?;
        let entries: Vec<_> = iv
            .iter()
            .flat_map(|&u| {
                iv.iter()
                    .filter(move |&&v| p.leq(u, v))
                    .map(move |&v| (u, v))
            })
            .map(|(u, v)| ((u, v), f(u, v)))
            .collect();
        let restricted = IncidenceFunction::from_entries(p, self.op.ring(), entries)?;
        Ok(self.op.apply(&restricted)?.get(x, y))
    }

    pub fn evaluate_function(
        &self,
        f: &IncidenceFunction,
        x: usize,
        y: usize,
    ) -> Result<RingElement> {
        if f.preorder().as_ref() != self.window.preorder.as_ref() || f.ring() != self.op.ring() {
            return Err(Error::Mismatch);
        }
        self.evaluate(|u, v| f.get(u, v), x, y)
    }

    /// `L̂` as an operator on the incidence algebra of the interior.
    pub fn interior_operator(&self) -> Result<LinearOperator> {
        let p = &self.window.preorder;
        let keep: Vec<usize> = (0..p.len())
            .filter(|&x| self.window.in_interior(x))
            .collect();
        let sub = Arc::new(p.induced(&keep)?);
        let ring = self.op.ring();
        let mut columns = Vec::new();
        for (a, b) in sub.pairs() {
            let (u, v) = (keep[a], keep[b]);
            let mut entries = Vec::new();
            for (x, y) in sub.pairs() {
                let value = self.evaluate(
                    |s, t| {
                        if (s, t) == (u, v) {
                            ring.one()
                        } else {
                            ring.zero()
                        }
                    },
                    keep[x],
                    keep[y],
                )?;
                entries.push(((x, y), value));
            }
            columns.push((
                (a, b),
                IncidenceFunction::from_entries(&sub, ring, entries)?,
            ));
        }
        LinearOperator::from_columns(&sub, ring, columns)
    }
}

/// `L(f)(x, y) = L(f|_x^y)(x, y)`. Diagonal pairs are accepted only for
/// derivations.
pub fn locality_check(
    l: &LinearOperator,
    f: &IncidenceFunction,
    x: usize,
    y: usize,
) -> Result<bool> {
    l.preorder().require_leq(x, y)?;
    if x == y && !l.is_derivation() {
        return Err(Error::DiagonalLocality);
    }
    Ok(l.apply(f)?.get(x, y) == l.apply(&f.restrict(x, y)?)?.get(x, y))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalSample {
    /// `L(f)(x, x)` for each element `x`, in element order.
    pub values: Vec<RingElement>,
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalReport {
    pub samples: Vec<DiagonalSample>,
    pub all_constant: bool,
}

/// Records `x ↦ L(f)(x, x)` for each sample and whether it is constant.
/// Non-constancy is reported, not raised.
pub fn diagonal_constancy_audit(
    l: &LinearOperator,
    sample: &[IncidenceFunction],
) -> Result<DiagonalReport> {
    let p = l.preorder();
    if !p.is_connected() {
        return Err(Error::Disconnected);
    }
    let samples = sample
        .iter()
        .map(|f| {
            let image = l.apply(f)?;
            let values: Vec<RingElement> = (0..p.len()).map(|x| image.get(x, x)).collect();
            let constant = values.windows(2).all(|w| w[0] == w[1]);
            Ok(DiagonalSample { values, constant })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_constant = samples.iter().all(|s| s.constant);
    Ok(DiagonalReport {
        samples,
        all_constant,
    })
}
