//! Bases of the modules of derivations and Lie derivations.
//!
//! Two independent routes are offered for Lie derivations:
//!
//! * [`lie_derivation_nullspace`] writes the Lie-Leibniz identity for every
//!   ordered pair of basis elements and every output position as a linear
//!   equation in the unknowns `C^{ij}_{xy}` and solves it exactly.
//! * [`lie_derivation_closed_form`] starts from the structural templates
//!   (free coefficients of `L(e_ii)` and `C^{ij}_{ij}`), imposes only the
//!   coefficient relation families, and expands each solution into an
//!   operator.
//!
//! [`compare_spans`] decides how two bases relate.

mod linalg;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{unknown_layout, LinearOperator, OperatorJson};
use crate::preorder::Preorder;
use crate::ring::{RingElement, RingSpec};

use linalg::{dense_to_sparse, Echelon, SparseRow};

/// A ring accepted by the solvers: `Q` or `Z/p` with `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field(RingSpec);

impl Field {
    /// Rejects non-fields and `Z/2`, where nothing is claimed about Lie derivations.
    pub fn new(ring: RingSpec) -> Result<Self> {
        let field = Self::exploratory(ring)?;
        if !ring.is_two_torsion_free() {
            return Err(Error::TwoTorsion(ring.to_string()));
        }
        Ok(field)
    }

    /// Any field, including characteristic 2.
    pub fn exploratory(ring: RingSpec) -> Result<Self> {
        if ring.is_field() {
            Ok(Field(ring))
        } else {
            Err(Error::NotAField(ring.to_string()))
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    LieDerivations,
    Derivations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bruteforce,
    ClosedForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Bruteforce => "bruteforce",
            Method::ClosedForm => "closed_form",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorBasis {
    pub space_kind: SpaceKind,
    pub method: Method,
    pub preorder: Arc<Preorder>,
    pub ring: RingSpec,
    pub basis: Vec<LinearOperator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisJson {
    pub kind: SpaceKind,
    pub method: Method,
    pub rank: usize,
    pub basis: Vec<OperatorJson>,
}

impl OperatorBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> BasisJson {
        BasisJson {
            kind: self.space_kind,
            method: self.method,
            rank: self.rank(),
            basis: self.basis.iter().map(LinearOperator::to_json).collect(),
        }
    }

    /// Every basis vector passes the predicate of its space.
    pub fn verify(&self) -> bool {
        self.basis.iter().all(|l| match self.space_kind {
            SpaceKind::LieDerivations => l.is_lie_derivation(),
            SpaceKind::Derivations => l.is_derivation(),
        })
    }
}

/// Index of each comparable pair in the standard basis order.
struct PairIndex {
    n: usize,
    pairs: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
}

impl PairIndex {
    fn new(preorder: &Preorder) -> Self {
        let n = preorder.len();
        let pairs: Vec<(usize, usize)> = preorder.pairs().collect();
        let mut index = vec![None; n * n];
        for (k, &(x, y)) in pairs.iter().enumerate() {
            index[x * n + y] = Some(k);
        }
        PairIndex { n, pairs, index }
    }

    fn of(&self, (x, y): (usize, usize)) -> usize {
        self.index[x * self.n + y].expect("comparable pair")
    }

    fn unknown(&self, column: (usize, usize), position: (usize, usize)) -> usize {
        self.of(column) * self.pairs.len() + self.of(position)
    }

    fn unknowns(&self) -> usize {
        self.pairs.len() * self.pairs.len()
    }
}

/// Integer residual rows, one per output position, for one basis pair.
#[derive(Default)]
struct Residual(BTreeMap<(usize, usize), BTreeMap<usize, i64>>);

impl Residual {
    fn add(&mut self, position: (usize, usize), unknown: usize, coefficient: i64) {
        *self
            .0
            .entry(position)
            .or_default()
            .entry(unknown)
            .or_default() += coefficient;
    }

    fn into_rows(self, ring: RingSpec) -> impl Iterator<Item = SparseRow> {
        self.0.into_values().filter_map(move |row| {
            let row: SparseRow = row
                .into_iter()
                .map(|(u, c)| (u, ring.from_i64(c)))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            (!row.is_empty()).then_some(row)
        })
    }
}

#[derive(Clone, Copy)]
enum Identity {
    Leibniz,
    LieLeibniz,
}

/// Terms of `L(e_ab) e_kl` as `(position, unknown)`: `(x, l) ← C^{ab}_{xk}`.
fn right_product(
    p: &Preorder,
    idx: &PairIndex,
    col: (usize, usize),
    (k, l): (usize, usize),
) -> Vec<((usize, usize), usize)> {
    (0..p.len())
        .filter(|&x| p.leq(x, k))
        .map(|x| ((x, l), idx.unknown(col, (x, k))))
        .collect()
}

/// Terms of `e_kl L(e_ab)`: `(k, y) ← C^{ab}_{ly}`.
fn left_product(
    p: &Preorder,
    idx: &PairIndex,
    (k, l): (usize, usize),
    col: (usize, usize),
) -> Vec<((usize, usize), usize)> {
    (0..p.len())
        .filter(|&y| p.leq(l, y))
        .map(|y| ((k, y), idx.unknown(col, (l, y))))
        .collect()
}

fn assemble(p: &Preorder, ring: RingSpec, identity: Identity) -> (usize, Vec<SparseRow>) {
    let idx = PairIndex::new(p);
    let mut rows = Vec::new();
    for &a in &idx.pairs {
        for &b in &idx.pairs {
            let ((i, j), (k, l)) = (a, b);
            let mut r = Residual::default();
            match identity {
                Identity::Leibniz => {
                    // L(ab) - L(a) b - a L(b)
                    if j == k {
                        for &pos in &idx.pairs {
                            r.add(pos, idx.unknown((i, l), pos), 1);
                        }
                    }
                    for (pos, u) in right_product(p, &idx, a, b) {
                        r.add(pos, u, -1);
                    }
                    for (pos, u) in left_product(p, &idx, a, b) {
                        r.add(pos, u, -1);
                    }
                }
                Identity::LieLeibniz => {
                    // L([a,b]) - L(a) b + b L(a) - a L(b) + L(b) a
                    for &pos in &idx.pairs {
                        if j == k {
                            r.add(pos, idx.unknown((i, l), pos), 1);
                        }
                        if l == i {
                            r.add(pos, idx.unknown((k, j), pos), -1);
                        }
                    }
                    for (pos, u) in right_product(p, &idx, a, b) {
                        r.add(pos, u, -1);
                    }
                    for (pos, u) in left_product(p, &idx, b, a) {
                        r.add(pos, u, 1);
                    }
                    for (pos, u) in left_product(p, &idx, a, b) {
                        r.add(pos, u, -1);
                    }
                    for (pos, u) in right_product(p, &idx, b, a) {
                        r.add(pos, u, 1);
                    }
                }
            }
            rows.extend(r.into_rows(ring));
        }
    }
    (idx.unknowns(), rows)
}

fn solve(unknowns: usize, rows: Vec<SparseRow>, ring: RingSpec) -> Result<Vec<Vec<RingElement>>> {
    let mut ech = Echelon::new(ring, unknowns);
    for row in rows {
        ech.insert(row)?;
    }
    Ok(ech.nullspace())
}

fn into_basis(
    preorder: &Arc<Preorder>,
    ring: RingSpec,
    space_kind: SpaceKind,
    method: Method,
    vectors: Vec<Vec<RingElement>>,
) -> Result<OperatorBasis> {
    let basis = vectors
        .iter()
        .map(|v| LinearOperator::from_vector(preorder, ring, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorBasis {
        space_kind,
        method,
        preorder: Arc::clone(preorder),
        ring,
        basis,
    })
}

/// Brute-force basis of the Lie derivations from the Lie-Leibniz identity on
/// all basis pairs.
pub fn lie_derivation_nullspace(preorder: &Arc<Preorder>, field: Field) -> Result<OperatorBasis> {
    let ring = field.ring();
    let (unknowns, rows) = assemble(preorder, ring, Identity::LieLeibniz);
    let vectors = solve(unknowns, rows, ring)?;
    into_basis(
        preorder,
        ring,
        SpaceKind::LieDerivations,
        Method::Bruteforce,
        vectors,
    )
}

/// Brute-force basis of the derivations from the Leibniz rule on all basis pairs.
pub fn derivation_nullspace(preorder: &Arc<Preorder>, field: Field) -> Result<OperatorBasis> {
    let ring = field.ring();
    let (unknowns, rows) = assemble(preorder, ring, Identity::Leibniz);
    let vectors = solve(unknowns, rows, ring)?;
    into_basis(
        preorder,
        ring,
        SpaceKind::Derivations,
        Method::Bruteforce,
        vectors,
    )
}

/// Free coefficient of the structural templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Parameter {
    /// `C^{ii}_{xy}` for an allowed position `(x, y)` of `L(e_ii)`.
    Idempotent { i: usize, position: (usize, usize) },
    /// `C^{ij}_{ij}` for `i < j`.
    Arrow { i: usize, j: usize },
}

fn template_parameters(p: &Preorder) -> Vec<Parameter> {
    let n = p.len();
    let mut params = Vec::new();
    for i in 0..n {
        let mut positions: Vec<(usize, usize)> = (0..n)
            .filter(|&x| p.lt(x, i))
            .map(|x| (x, i))
            .chain((0..n).map(|x| (x, x)))
            .chain((0..n).filter(|&y| p.lt(i, y)).map(|y| (i, y)))
            .collect();
        positions.sort_unstable();
        params.extend(
            positions
                .into_iter()
                .map(|position| Parameter::Idempotent { i, position }),
        );
    }
    params.extend(p.strict_pairs().map(|(i, j)| Parameter::Arrow { i, j }));
    params
}

/// Unknowns fed by a parameter, following the templates
/// `L(e_ii) = Σ_{x<i} C^{ii}_{xi} e_xi + Σ_x C^{ii}_{xx} e_xx + Σ_{y>i} C^{ii}_{iy} e_iy`
/// and `L(e_ij) = Σ_{x<i} C^{ii}_{xi} e_xj + C^{ij}_{ij} e_ij + Σ_{y>j} C^{jj}_{jy} e_iy`.
fn parameter_image(p: &Preorder, idx: &PairIndex, param: Parameter) -> Vec<usize> {
    let n = p.len();
    match param {
        Parameter::Arrow { i, j } => vec![idx.unknown((i, j), (i, j))],
        Parameter::Idempotent { i, position } => {
            let mut out = vec![idx.unknown((i, i), position)];
            let (x, y) = position;
            if x != y && y == i {
                // C^{ii}_{xi} reappears in L(e_ij) at (x, j) for every j > i
                out.extend(
                    (0..n)
                        .filter(|&j| p.lt(i, j))
                        .map(|j| idx.unknown((i, j), (x, j))),
                );
            } else if x != y && x == i {
                // C^{ii}_{iy} reappears in L(e_ki) at (k, y) for every k < i
                out.extend(
                    (0..n)
                        .filter(|&k| p.lt(k, i))
                        .map(|k| idx.unknown((k, i), (k, y))),
                );
            }
            out
        }
    }
}

/// Rows of the relation families in parameter coordinates.
fn relation_rows(p: &Preorder, params: &[Parameter], ring: RingSpec) -> Vec<SparseRow> {
    let n = p.len();
    let lookup: BTreeMap<(usize, usize, usize, usize), usize> = params
        .iter()
        .enumerate()
        .map(|(k, &param)| match param {
            Parameter::Idempotent {
                i,
                position: (x, y),
            } => ((i, i, x, y), k),
            Parameter::Arrow { i, j } => ((i, j, i, j), k),
        })
        .collect();
    let c = |i, j, x, y| lookup[&(i, j, x, y)];
    let mut rows = Vec::new();
    let mut push = |terms: &[(usize, i64)]| {
        let mut row: BTreeMap<usize, i64> = BTreeMap::new();
        for &(u, coef) in terms {
            *row.entry(u).or_default() += coef;
        }
        let row: SparseRow = row
            .into_iter()
            .map(|(u, coef)| (u, ring.from_i64(coef)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        if !row.is_empty() {
            rows.push(row);
        }
    };
    for (i, j) in p.strict_pairs() {
        push(&[(c(i, i, i, j), 1), (c(j, j, i, j), 1)]);
    }
    for (i, j) in p.strict_pairs() {
        for k in (0..n).filter(|&k| p.lt(j, k) && k != i) {
            push(&[(c(i, j, i, j), 1), (c(j, k, j, k), 1), (c(i, k, i, k), -1)]);
        }
    }
    for (i, j) in p.strict_pairs().filter(|&(i, j)| p.leq(j, i)) {
        push(&[(c(i, j, i, j), 1), (c(j, i, j, i), 1)]);
        push(&[(c(i, i, i, i), 1), (c(j, j, j, j), -1)]);
    }
    for i in 0..n {
        for x in 0..n {
            push(&[(c(i, i, i, i), 1), (c(i, i, x, x), -1)]);
        }
    }
    rows
}

/// Basis of the Lie derivations built from the structural templates subject
/// to the coefficient relations. Requires a connected preorder.
pub fn lie_derivation_closed_form(preorder: &Arc<Preorder>, field: Field) -> Result<OperatorBasis> {
    if !preorder.is_connected() {
        return Err(Error::Disconnected);
    }
    let ring = field.ring();
    let params = template_parameters(preorder);
    let idx = PairIndex::new(preorder);
    let solutions = solve(params.len(), relation_rows(preorder, &params, ring), ring)?;
    let images: Vec<Vec<usize>> = params
        .iter()
        .map(|&q| parameter_image(preorder, &idx, q))
        .collect();
    let vectors = solutions
        .into_iter()
        .map(|sol| {
            let mut v = vec![ring.zero(); idx.unknowns()];
            for (value, targets) in sol.iter().zip(&images) {
                if value.is_zero() {
                    continue;
                }
                for &u in targets {
                    v[u] = &v[u] + value;
                }
            }
            v
        })
        .collect();
    into_basis(
        preorder,
        ring,
        SpaceKind::LieDerivations,
        Method::ClosedForm,
        vectors,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanRelation {
    Equal,
    ASubsetB,
    BSubsetA,
    Incomparable,
}

impl fmt::Display for SpanRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpanRelation::Equal => "equal",
            SpanRelation::ASubsetB => "a_subset_b",
            SpanRelation::BSubsetA => "b_subset_a",
            SpanRelation::Incomparable => "incomparable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanComparison {
    pub relation: SpanRelation,
    /// A basis vector of one side outside the other's span (from `a` first).
    pub witness: Option<LinearOperator>,
}

fn echelon_of(ops: &[LinearOperator], ring: RingSpec, width: usize) -> Result<Echelon> {
    let mut ech = Echelon::new(ring, width);
    for op in ops {
        ech.insert(dense_to_sparse(&op.to_vector()))?;
    }
    Ok(ech)
}

/// Exact relation between `span(a)` and `span(b)`.
pub fn compare_spans(a: &OperatorBasis, b: &OperatorBasis) -> Result<SpanComparison> {
    if a.ring != b.ring || a.preorder != b.preorder {
        return Err(Error::Mismatch);
    }
    Field::exploratory(a.ring)?;
    let width = unknown_layout(&a.preorder).len();
    let ech_a = echelon_of(&a.basis, a.ring, width)?;
    let ech_b = echelon_of(&b.basis, b.ring, width)?;
    let outside = |ops: &[LinearOperator], ech: &Echelon| {
        ops.iter()
            .find(|op| !ech.contains(&dense_to_sparse(&op.to_vector())))
            .cloned()
    };
    let a_out = outside(&a.basis, &ech_b);
    let b_out = outside(&b.basis, &ech_a);
    let relation = match (&a_out, &b_out) {
        (None, None) => SpanRelation::Equal,
        (None, Some(_)) => SpanRelation::ASubsetB,
        (Some(_), None) => SpanRelation::BSubsetA,
        (Some(_), Some(_)) => SpanRelation::Incomparable,
    };
    Ok(SpanComparison {
        relation,
        witness: a_out.or(b_out),
    })
}
