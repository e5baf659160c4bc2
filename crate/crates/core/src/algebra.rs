//! Finitely supported elements of the incidence algebra of a finite preorder.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preorder::Preorder;
use crate::ring::{RingElement, RingSpec};

/// A function on comparable pairs `x <= y`, stored sparsely without zeros,
/// so structural equality is equality of functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceFunction {
    preorder: Arc<Preorder>,
    ring: RingSpec,
    entries: BTreeMap<(usize, usize), RingElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub from: String,
    pub to: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ElementJson {
    #[serde(default)]
    pub entries: Vec<EntryJson>,
}

impl IncidenceFunction {
    pub fn zero(preorder: &Arc<Preorder>, ring: RingSpec) -> Self {
        IncidenceFunction {
            preorder: Arc::clone(preorder),
            ring,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a function from `(pair, value)` entries. Repeated pairs are summed.
    pub fn from_entries<I>(preorder: &Arc<Preorder>, ring: RingSpec, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), RingElement)>,
    {
        let mut f = Self::zero(preorder, ring);
        for ((x, y), value) in entries {
            preorder.require_leq(x, y)?;
            if !ring.contains(&value) {
                return Err(Error::Mismatch);
            }
            f.add_at(x, y, &value);
        }
        Ok(f)
    }

    /// The standard basis element `e_xy`.
    pub fn basis_element(
        preorder: &Arc<Preorder>,
        ring: RingSpec,
        x: usize,
        y: usize,
    ) -> Result<Self> {
        preorder.require_leq(x, y)?;
        let mut f = Self::zero(preorder, ring);
        f.entries.insert((x, y), ring.one());
        Ok(f)
    }

    /// The convolution identity `δ`.
    pub fn delta(preorder: &Arc<Preorder>, ring: RingSpec) -> Self {
        Self::from_pairs(preorder, ring, (0..preorder.len()).map(|x| (x, x)))
    }

    pub fn zeta(preorder: &Arc<Preorder>, ring: RingSpec) -> Self {
        Self::from_pairs(preorder, ring, preorder.pairs())
    }

    /// Convolution inverse of `ζ`; defined on posets only.
    pub fn mobius(preorder: &Arc<Preorder>, ring: RingSpec) -> Result<Self> {
        if let Some((x, y)) = preorder.antisymmetry_violation() {
            return Err(Error::NotAPoset(
                preorder.label(x).to_string(),
                preorder.label(y).to_string(),
            ));
        }
        let n = preorder.len();
        // Number of elements strictly below: a linear extension key.
        let depth: Vec<usize> = (0..n)
            .map(|y| (0..n).filter(|&z| preorder.lt(z, y)).count())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&y| (depth[y], y));

        let mut mu = Self::zero(preorder, ring);
        for x in 0..n {
            mu.entries.insert((x, x), ring.one());
            for &y in order.iter().filter(|&&y| preorder.lt(x, y)) {
                // (μζ)(x, y) = Σ_{x <= z <= y} μ(x, z) = 0
                let mut sum = ring.zero();
                for z in (0..n).filter(|&z| preorder.leq(x, z) && preorder.lt(z, y)) {
                    sum = &sum + &mu.get(x, z);
                }
                mu.set(x, y, -sum);
            }
        }
        Ok(mu)
    }

    /// `δ_i = Σ_{x in X_i} e_xx`, one per connected component.
    pub fn component_idempotents(preorder: &Arc<Preorder>, ring: RingSpec) -> Vec<Self> {
        preorder
            .connected_components()
            .into_iter()
            .map(|comp| Self::from_pairs(preorder, ring, comp.into_iter().map(|x| (x, x))))
            .collect()
    }

    fn from_pairs(
        preorder: &Arc<Preorder>,
        ring: RingSpec,
        pairs: impl Iterator<Item = (usize, usize)>,
    ) -> Self {
        let one = ring.one();
        IncidenceFunction {
            preorder: Arc::clone(preorder),
            ring,
            entries: pairs.map(|p| (p, one.clone())).collect(),
        }
    }

    pub fn preorder(&self) -> &Arc<Preorder> {
        &self.preorder
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    /// `f(x, y)`; zero off the support, including when `x` is not below `y`.
    pub fn get(&self, x: usize, y: usize) -> RingElement {
        self.entries
            .get(&(x, y))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Nonzero entries in lexicographic pair order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &RingElement)> + '_ {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn set(&mut self, x: usize, y: usize, value: RingElement) {
        debug_assert!(self.preorder.leq(x, y));
        if value.is_zero() {
            self.entries.remove(&(x, y));
        } else {
            self.entries.insert((x, y), value);
        }
    }

    pub(crate) fn add_at(&mut self, x: usize, y: usize, value: &RingElement) {
        let sum = &self.get(x, y) + value;
        self.set(x, y, sum);
    }

    pub fn same_context(&self, other: &Self) -> bool {
        self.ring == other.ring
            && (Arc::ptr_eq(&self.preorder, &other.preorder) || self.preorder == other.preorder)
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::Mismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let mut out = self.clone();
        for ((x, y), v) in other.entries() {
            out.add_at(x, y, v);
        }
        Ok(out)
    }

    pub fn scale(&self, r: &RingElement) -> Self {
        let mut out = Self::zero(&self.preorder, self.ring);
        for ((x, y), v) in self.entries() {
            out.set(x, y, r * v);
        }
        out
    }

    /// `(fg)(x, y) = Σ_{x <= z <= y} f(x, z) g(z, y)`.
    pub fn convolve(&self, g: &Self) -> Result<Self> {
        self.check_context(g)?;
        let mut out = Self::zero(&self.preorder, self.ring);
        for (&(x, z), a) in &self.entries {
            for (&(_, y), b) in g.entries.range((z, 0)..=(z, usize::MAX)) {
                out.add_at(x, y, &(a * b));
            }
        }
        Ok(out)
    }

    /// `[f, g] = fg - gf`.
    pub fn lie_bracket(&self, g: &Self) -> Result<Self> {
        Ok(&self.convolve(g)? - &g.convolve(self)?)
    }

    /// `f ∘ g = fg + gf`.
    pub fn jordan_product(&self, g: &Self) -> Result<Self> {
        Ok(&self.convolve(g)? + &g.convolve(self)?)
    }

    /// Truncation `f|_x^y = Σ_{x <= u <= v <= y} f(u, v) e_uv`.
    pub fn restrict(&self, x: usize, y: usize) -> Result<Self> {
        self.preorder.require_leq(x, y)?;
        let p = &self.preorder;
        let mut out = Self::zero(p, self.ring);
        out.entries = self
            .entries
            .iter()
            .filter(|(&(u, v), _)| p.leq(x, u) && p.leq(v, y))
            .map(|(&k, val)| (k, val.clone()))
            .collect();
        Ok(out)
    }

    /// `f_d`: keeps only the values at `(x, x)`.
    pub fn diagonal_part(&self) -> Self {
        let mut out = Self::zero(&self.preorder, self.ring);
        out.entries = self
            .entries
            .iter()
            .filter(|(&(u, v), _)| u == v)
            .map(|(&k, val)| (k, val.clone()))
            .collect();
        out
    }

    /// Whether `f` commutes with every standard basis element.
    pub fn is_central(&self) -> bool {
        self.preorder.pairs().all(|(x, y)| {
            let e = Self::basis_element(&self.preorder, self.ring, x, y).expect("comparable pair");
            (self * &e) == (&e * self)
        })
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            entries: self
                .entries()
                .map(|((x, y), v)| EntryJson {
                    from: self.preorder.label(x).to_string(),
                    to: self.preorder.label(y).to_string(),
                    value: v.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(preorder: &Arc<Preorder>, ring: RingSpec, json: &ElementJson) -> Result<Self> {
        let entries = json
            .entries
            .iter()
            .map(|e| {
                Ok((
                    (preorder.index_of(&e.from)?, preorder.index_of(&e.to)?),
                    ring.parse_element(&e.value)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(preorder, ring, entries)
    }
}

impl fmt::Display for IncidenceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, ((x, y), v)) in self.entries().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(
                f,
                "{v}·e[{},{}]",
                self.preorder.label(x),
                self.preorder.label(y)
            )?;
        }
        Ok(())
    }
}

// Operator forms panic on mismatched preorders or rings; the `try_*` and
// named methods report the mismatch instead.

impl Add for &IncidenceFunction {
    type Output = IncidenceFunction;

    fn add(self, rhs: &IncidenceFunction) -> IncidenceFunction {
        self.try_add(rhs)
            .expect("adding incidence functions of different algebras")
    }
}

impl Neg for &IncidenceFunction {
    type Output = IncidenceFunction;

    fn neg(self) -> IncidenceFunction {
        self.scale(&-self.ring.one())
    }
}

impl Sub for &IncidenceFunction {
    type Output = IncidenceFunction;

    fn sub(self, rhs: &IncidenceFunction) -> IncidenceFunction {
        self + &(-rhs)
    }
}

impl Mul for &IncidenceFunction {
    type Output = IncidenceFunction;

    fn mul(self, rhs: &IncidenceFunction) -> IncidenceFunction {
        self.convolve(rhs)
            .expect("multiplying incidence functions of different algebras")
    }
}
