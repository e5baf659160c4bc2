//! Linear operators on the span of the standard basis, stored column-wise:
//! column `(i, j)` is the image `L(e_ij)`, and the coefficient `C^{ij}_{xy}`
//! is `L(e_ij)(x, y)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{ElementJson, IncidenceFunction};
use crate::error::{BasisPair, Error, Result};
use crate::preorder::Preorder;
use crate::ring::{RingElement, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOperator {
    preorder: Arc<Preorder>,
    ring: RingSpec,
    /// Zero columns are not stored.
    columns: BTreeMap<(usize, usize), IncidenceFunction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnJson {
    pub i: String,
    pub j: String,
    pub image: ElementJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OperatorJson {
    #[serde(default)]
    pub columns: Vec<ColumnJson>,
}

/// A coefficient of a column that no structural template can produce, or
/// that differs from the value the template forces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuralViolation {
    pub column: (usize, usize),
    pub position: (usize, usize),
}

/// Relation families on the coefficients of an operator in structural form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFamily {
    /// `C^{ii}_{ij} + C^{jj}_{ij} = 0` for `i < j`.
    OppositeIdempotents,
    /// `C^{ij}_{ij} + C^{jk}_{jk} = C^{ik}_{ik}` for `i < j < k`, `i != k`.
    Additivity,
    /// `C^{ij}_{ij} + C^{ji}_{ji} = 0` for `i < j < i`.
    CycleAntisymmetry,
    /// `C^{ii}_{ii} = C^{ii}_{xx}` for all `x`.
    ConstantDiagonal,
    /// `C^{ii}_{ii} = C^{jj}_{jj}` for `i < j < i`.
    CycleDiagonal,
}

impl fmt::Display for ConstraintFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintFamily::OppositeIdempotents => "C_ij^ii + C_ij^jj = 0",
            ConstraintFamily::Additivity => "C_ij^ij + C_jk^jk = C_ik^ik",
            ConstraintFamily::CycleAntisymmetry => "C_ij^ij + C_ji^ji = 0",
            ConstraintFamily::ConstantDiagonal => "C_ii^ii = C_xx^ii",
            ConstraintFamily::CycleDiagonal => "C_ii^ii = C_jj^jj",
        })
    }
}

/// The first violated relation, with its element indices
/// (`[i, j]`, `[i, j, k]` or `[i, x]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintViolation {
    pub family: ConstraintFamily,
    pub indices: Vec<usize>,
}

impl LinearOperator {
    pub fn zero(preorder: &Arc<Preorder>, ring: RingSpec) -> Self {
        LinearOperator {
            preorder: Arc::clone(preorder),
            ring,
            columns: BTreeMap::new(),
        }
    }

    pub fn identity(preorder: &Arc<Preorder>, ring: RingSpec) -> Self {
        Self::from_fn(preorder, ring, |i, j| {
            IncidenceFunction::basis_element(preorder, ring, i, j).expect("comparable pair")
        })
    }

    pub fn from_columns<I>(preorder: &Arc<Preorder>, ring: RingSpec, columns: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), IncidenceFunction)>,
    {
        let mut op = Self::zero(preorder, ring);
        for ((i, j), image) in columns {
            preorder.require_leq(i, j)?;
            if image.ring() != ring || image.preorder().as_ref() != preorder.as_ref() {
                return Err(Error::Mismatch);
            }
            let merged = &op.column(i, j) + &image;
            op.set_column(i, j, merged);
        }
        Ok(op)
    }

    /// Builds an operator from its value on each basis element.
    pub fn from_fn(
        preorder: &Arc<Preorder>,
        ring: RingSpec,
        mut image: impl FnMut(usize, usize) -> IncidenceFunction,
    ) -> Self {
        let mut op = Self::zero(preorder, ring);
        for (i, j) in preorder.pairs() {
            let col = image(i, j);
            op.set_column(i, j, col);
        }
        op
    }

    /// `ad_g`: `f ↦ [g, f]`.
    pub fn inner_derivation(g: &IncidenceFunction) -> Self {
        let p = g.preorder();
        Self::from_fn(p, g.ring(), |i, j| {
            let e = IncidenceFunction::basis_element(p, g.ring(), i, j).expect("comparable pair");
            g.lie_bracket(&e).expect("same algebra")
        })
    }

    pub fn preorder(&self) -> &Arc<Preorder> {
        &self.preorder
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    fn set_column(&mut self, i: usize, j: usize, image: IncidenceFunction) {
        if image.is_zero() {
            self.columns.remove(&(i, j));
        } else {
            self.columns.insert((i, j), image);
        }
    }

    /// `L(e_ij)`; zero for omitted columns and for `i` not below `j`.
    pub fn column(&self, i: usize, j: usize) -> IncidenceFunction {
        self.columns
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| IncidenceFunction::zero(&self.preorder, self.ring))
    }

    /// Nonzero columns in lexicographic order.
    pub fn columns(&self) -> impl Iterator<Item = ((usize, usize), &IncidenceFunction)> + '_ {
        self.columns.iter().map(|(&k, v)| (k, v))
    }

    /// `C^{ij}_{xy}`, zero whenever `x` is not below `y`.
    pub fn coefficient(&self, i: usize, j: usize, x: usize, y: usize) -> RingElement {
        match self.columns.get(&(i, j)) {
            Some(col) => col.get(x, y),
            None => self.ring.zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn same_context(&self, other: &Self) -> bool {
        self.ring == other.ring
            && (Arc::ptr_eq(&self.preorder, &other.preorder) || self.preorder == other.preorder)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if !self.same_context(other) {
            return Err(Error::Mismatch);
        }
        let mut out = self.clone();
        for ((i, j), col) in other.columns() {
            let sum = &out.column(i, j) + col;
            out.set_column(i, j, sum);
        }
        Ok(out)
    }

    pub fn scale(&self, r: &RingElement) -> Self {
        let mut out = Self::zero(&self.preorder, self.ring);
        for ((i, j), col) in self.columns() {
            out.set_column(i, j, col.scale(r));
        }
        out
    }

    /// `Σ_{supp f} f(i, j) L(e_ij)`.
    pub fn apply(&self, f: &IncidenceFunction) -> Result<IncidenceFunction> {
        if f.ring() != self.ring || f.preorder().as_ref() != self.preorder.as_ref() {
            return Err(Error::Mismatch);
        }
        let mut out = IncidenceFunction::zero(&self.preorder, self.ring);
        for ((i, j), v) in f.entries() {
            if let Some(col) = self.columns.get(&(i, j)) {
                for ((x, y), c) in col.entries() {
                    out.add_at(x, y, &(v * c));
                }
            }
        }
        Ok(out)
    }

    fn basis(&self, i: usize, j: usize) -> IncidenceFunction {
        IncidenceFunction::basis_element(&self.preorder, self.ring, i, j).expect("comparable pair")
    }

    /// Ordered basis pairs in lexicographic order.
    fn basis_pairs(&self) -> Vec<BasisPair> {
        let pairs: Vec<(usize, usize)> = self.preorder.pairs().collect();
        pairs
            .iter()
            .flat_map(|&a| pairs.iter().map(move |&b| (a, b)))
            .collect()
    }

    /// First basis pair `(e_ij, e_kl)` where `L(e_ij e_kl) = L(e_ij) e_kl + e_ij L(e_kl)` fails.
    pub fn derivation_violation(&self) -> Option<BasisPair> {
        self.basis_pairs().into_iter().find(|&((i, j), (k, l))| {
            let lhs = if j == k {
                self.column(i, l)
            } else {
                IncidenceFunction::zero(&self.preorder, self.ring)
            };
            let (a, b) = (self.basis(i, j), self.basis(k, l));
            let rhs = &(&self.column(i, j) * &b) + &(&a * &self.column(k, l));
            lhs != rhs
        })
    }

    pub fn is_derivation(&self) -> bool {
        self.derivation_violation().is_none()
    }

    /// First basis pair where `L([a, b]) = [L(a), b] + [a, L(b)]` fails.
    pub fn lie_violation(&self) -> Option<BasisPair> {
        self.basis_pairs().into_iter().find(|&((i, j), (k, l))| {
            // [e_ij, e_kl] = δ_jk e_il - δ_li e_kj
            let mut lhs = IncidenceFunction::zero(&self.preorder, self.ring);
            if j == k {
                lhs = &lhs + &self.column(i, l);
            }
            if l == i {
                lhs = &lhs - &self.column(k, j);
            }
            let (a, b) = (self.basis(i, j), self.basis(k, l));
            let (la, lb) = (self.column(i, j), self.column(k, l));
            let rhs = &(&(&la * &b) - &(&b * &la)) + &(&(&a * &lb) - &(&lb * &a));
            lhs != rhs
        })
    }

    pub fn is_lie_derivation(&self) -> bool {
        self.lie_violation().is_none()
    }

    fn require_connected(&self) -> Result<()> {
        if self.preorder.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// The column that the structural templates force, given the
    /// coefficients they read (diagonal columns for `i < j`, the column itself
    /// for `i = j`).
    pub(crate) fn template_column(&self, i: usize, j: usize) -> IncidenceFunction {
        let p = &self.preorder;
        let n = p.len();
        let mut t = IncidenceFunction::zero(p, self.ring);
        if i == j {
            // Σ_{x<i} C^{ii}_{xi} e_xi + Σ_x C^{ii}_{xx} e_xx + Σ_{y>i} C^{ii}_{iy} e_iy
            for x in (0..n).filter(|&x| p.lt(x, i)) {
                t.add_at(x, i, &self.coefficient(i, i, x, i));
            }
            for x in 0..n {
                t.add_at(x, x, &self.coefficient(i, i, x, x));
            }
            for y in (0..n).filter(|&y| p.lt(i, y)) {
                t.add_at(i, y, &self.coefficient(i, i, i, y));
            }
        } else {
            // Σ_{x<i} C^{ii}_{xi} e_xj + C^{ij}_{ij} e_ij + Σ_{y>j} C^{jj}_{jy} e_iy
            for x in (0..n).filter(|&x| p.lt(x, i)) {
                t.add_at(x, j, &self.coefficient(i, i, x, i));
            }
            t.add_at(i, j, &self.coefficient(i, j, i, j));
            for y in (0..n).filter(|&y| p.lt(j, y)) {
                t.add_at(i, y, &self.coefficient(j, j, j, y));
            }
        }
        t
    }

    /// First column/position where `L` departs from the structural templates.
    /// Index ranges are taken literally, so on preorders with cycles a
    /// template term such as `e_xj` with `x = j` lands on the diagonal.
    pub fn structural_violation(&self) -> Result<Option<StructuralViolation>> {
        self.require_connected()?;
        for (i, j) in self.preorder.pairs() {
            let actual = self.column(i, j);
            let expected = self.template_column(i, j);
            if actual != expected {
                let diff = &actual - &expected;
                let position = diff
                    .entries()
                    .next()
                    .map(|(pos, _)| pos)
                    .expect("nonzero difference");
                return Ok(Some(StructuralViolation {
                    column: (i, j),
                    position,
                }));
            }
        }
        Ok(None)
    }

    pub fn matches_structural_form(&self) -> Result<bool> {
        Ok(self.structural_violation()?.is_none())
    }

    /// First violated coefficient relation, checked family by family in
    /// declaration order and lexicographically within each family.
    pub fn constraint_violation(&self) -> Result<Option<ConstraintViolation>> {
        if let Some(v) = self.structural_violation()? {
            return Err(Error::NotStructural {
                column: v.column,
                position: v.position,
            });
        }
        let p = &self.preorder;
        let n = p.len();
        let c = |i, j, x, y| self.coefficient(i, j, x, y);
        let fail = |family, indices: Vec<usize>| Ok(Some(ConstraintViolation { family, indices }));

        for (i, j) in p.strict_pairs() {
            if !(&c(i, i, i, j) + &c(j, j, i, j)).is_zero() {
                return fail(ConstraintFamily::OppositeIdempotents, vec![i, j]);
            }
        }
        for (i, j) in p.strict_pairs() {
            for k in (0..n).filter(|&k| p.lt(j, k) && k != i) {
                if &c(i, j, i, j) + &c(j, k, j, k) != c(i, k, i, k) {
                    return fail(ConstraintFamily::Additivity, vec![i, j, k]);
                }
            }
        }
        for (i, j) in p.strict_pairs().filter(|&(i, j)| p.leq(j, i)) {
            if !(&c(i, j, i, j) + &c(j, i, j, i)).is_zero() {
                return fail(ConstraintFamily::CycleAntisymmetry, vec![i, j]);
            }
        }
        for i in 0..n {
            for x in 0..n {
                if c(i, i, i, i) != c(i, i, x, x) {
                    return fail(ConstraintFamily::ConstantDiagonal, vec![i, x]);
                }
            }
        }
        for (i, j) in p.strict_pairs().filter(|&(i, j)| p.leq(j, i)) {
            if c(i, i, i, i) != c(j, j, j, j) {
                return fail(ConstraintFamily::CycleDiagonal, vec![i, j]);
            }
        }
        Ok(None)
    }

    pub fn satisfies_constraints(&self) -> Result<bool> {
        Ok(self.constraint_violation()?.is_none())
    }

    /// `L^op` on the dual preorder: `L^op(e^op_ij)(x, y) = C^{ji}_{yx}`.
    pub fn transport_to_dual(&self) -> LinearOperator {
        let dual = Arc::new(self.preorder.dual());
        let mut out = Self::zero(&dual, self.ring);
        for ((j, i), col) in self.columns() {
            let transposed = col.entries().map(|((y, x), v)| ((x, y), v.clone()));
            let image = IncidenceFunction::from_entries(&dual, self.ring, transposed)
                .expect("transposed pairs are comparable in the dual");
            out.set_column(i, j, image);
        }
        out
    }

    /// Flat coefficients in the unknown layout of [`unknown_layout`].
    pub fn to_vector(&self) -> Vec<RingElement> {
        unknown_layout(&self.preorder)
            .into_iter()
            .map(|((i, j), (x, y))| self.coefficient(i, j, x, y))
            .collect()
    }

    pub fn from_vector(
        preorder: &Arc<Preorder>,
        ring: RingSpec,
        values: &[RingElement],
    ) -> Result<Self> {
        let layout = unknown_layout(preorder);
        if layout.len() != values.len() {
            return Err(Error::Format(format!(
                "expected {} coefficients, got {}",
                layout.len(),
                values.len()
            )));
        }
        let mut columns: BTreeMap<_, Vec<_>> = BTreeMap::new();
        for (&(col, pos), v) in layout.iter().zip(values) {
            if !v.is_zero() {
                columns.entry(col).or_default().push((pos, v.clone()));
            }
        }
        let columns = columns
            .into_iter()
            .map(|(col, entries)| {
                Ok((
                    col,
                    IncidenceFunction::from_entries(preorder, ring, entries)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(preorder, ring, columns)
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson {
            columns: self
                .columns()
                .map(|((i, j), col)| ColumnJson {
                    i: self.preorder.label(i).to_string(),
                    j: self.preorder.label(j).to_string(),
                    image: col.to_json(),
                })
                .collect(),
        }
    }

    pub fn from_json(
        preorder: &Arc<Preorder>,
        ring: RingSpec,
        json: &OperatorJson,
    ) -> Result<Self> {
        let columns = json
            .columns
            .iter()
            .map(|c| {
                Ok((
                    (preorder.index_of(&c.i)?, preorder.index_of(&c.j)?),
                    IncidenceFunction::from_json(preorder, ring, &c.image)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(preorder, ring, columns)
    }
}

/// Unknowns `C^{ij}_{xy}` ordered by basis column `(i, j)`, then by output
/// position `(x, y)`, both lexicographic in element indices.
pub fn unknown_layout(preorder: &Preorder) -> Vec<((usize, usize), (usize, usize))> {
    let pairs: Vec<(usize, usize)> = preorder.pairs().collect();
    pairs
        .iter()
        .flat_map(|&col| pairs.iter().map(move |&pos| (col, pos)))
        .collect()
}

impl Add for &LinearOperator {
    type Output = LinearOperator;

    fn add(self, rhs: &LinearOperator) -> LinearOperator {
        self.try_add(rhs)
            .expect("adding operators of different algebras")
    }
}

impl Sub for &LinearOperator {
    type Output = LinearOperator;

    fn sub(self, rhs: &LinearOperator) -> LinearOperator {
        self + &rhs.scale(&-self.ring.one())
    }
}

impl fmt::Display for LinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for ((i, j), col) in self.columns() {
            writeln!(
                f,
                "e[{},{}] ↦ {col}",
                self.preorder.label(i),
                self.preorder.label(j)
            )?;
        }
        Ok(())
    }
}
