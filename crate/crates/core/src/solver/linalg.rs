use std::collections::BTreeMap;

use crate::error::Result;
use crate::ring::{RingElement, RingSpec};

pub(crate) type SparseRow = BTreeMap<usize, RingElement>;

/// Incrementally maintained reduced row echelon form over a field.
///
/// Rows are inserted in order; each new row is reduced against the existing
/// pivots and, if nonzero, pivots on its lowest column. Pivot rows are kept
/// fully reduced, so the result is deterministic in the insertion order.
pub(crate) struct Echelon {
    ring: RingSpec,
    columns: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(ring: RingSpec, columns: usize) -> Self {
        Echelon {
            ring,
            columns,
            pivots: BTreeMap::new(),
        }
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let hits: Vec<(usize, RingElement)> = row
            .iter()
            .filter(|(c, _)| self.pivots.contains_key(c))
            .map(|(&c, v)| (c, v.clone()))
            .collect();
        for (c, factor) in hits {
            axpy(&mut row, &-&factor, &self.pivots[&c]);
        }
        row
    }

    /// Whether `row` lies in the current row space.
    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row.clone()).is_empty()
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> Result<bool> {
        let mut row = self.reduce(row);
        let Some((&lead, lead_value)) = row.iter().next() else {
            return Ok(false);
        };
        let inv = self.ring.inverse(lead_value)?;
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        for pivot_row in self.pivots.values_mut() {
            if let Some(factor) = pivot_row.get(&lead).cloned() {
                axpy(pivot_row, &-&factor, &row);
            }
        }
        self.pivots.insert(lead, row);
        Ok(true)
    }

    /// Basis of `{v : row · v = 0 for every inserted row}`, one vector per
    /// free column in increasing order, with a 1 at that column.
    pub fn nullspace(&self) -> Vec<Vec<RingElement>> {
        (0..self.columns)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut v = vec![self.ring.zero(); self.columns];
                v[free] = self.ring.one();
                for (&pc, row) in &self.pivots {
                    if let Some(x) = row.get(&free) {
                        v[pc] = -x;
                    }
                }
                v
            })
            .collect()
    }
}

/// `row += factor * other`, dropping zeros.
fn axpy(row: &mut SparseRow, factor: &RingElement, other: &SparseRow) {
    for (&c, v) in other {
        let updated = match row.get(&c) {
            Some(old) => old + &(factor * v),
            None => factor * v,
        };
        if updated.is_zero() {
            row.remove(&c);
        } else {
            row.insert(c, updated);
        }
    }
}

pub(crate) fn dense_to_sparse(values: &[RingElement]) -> SparseRow {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(ring: RingSpec, values: &[i64]) -> SparseRow {
        dense_to_sparse(&values.iter().map(|&v| ring.from_i64(v)).collect::<Vec<_>>())
    }

    fn dot(ring: RingSpec, a: &[i64], b: &[RingElement]) -> RingElement {
        a.iter()
            .zip(b)
            .fold(ring.zero(), |acc, (&x, y)| &acc + &(&ring.from_i64(x) * y))
    }

    #[test]
    fn rank_and_nullspace() {
        for ring in [
            RingSpec::Rationals,
            RingSpec::Modular(3),
            RingSpec::Modular(5),
        ] {
            let rows = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0], [1, 3, 4, 4]];
            let mut ech = Echelon::new(ring, 4);
            let grew: Vec<bool> = rows
                .iter()
                .map(|r| ech.insert(row(ring, r)).unwrap())
                .collect();
            assert_eq!(grew, vec![true, false, true, false]);
            assert_eq!(ech.rank(), 2);
            let ns = ech.nullspace();
            assert_eq!(ns.len(), 2);
            for v in &ns {
                for r in &rows {
                    assert!(dot(ring, r, v).is_zero());
                }
            }
        }
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det = 3
        let rows = [[1, 1], [1, -2]];
        let mut q = Echelon::new(RingSpec::Rationals, 2);
        let mut z3 = Echelon::new(RingSpec::Modular(3), 2);
        for r in rows {
            q.insert(row(RingSpec::Rationals, &r)).unwrap();
            z3.insert(row(RingSpec::Modular(3), &r)).unwrap();
        }
        assert_eq!(q.rank(), 2);
        assert_eq!(z3.rank(), 1);
    }

    #[test]
    fn contains_row_space() {
        let ring = RingSpec::Rationals;
        let mut ech = Echelon::new(ring, 3);
        ech.insert(row(ring, &[1, 0, 1])).unwrap();
        ech.insert(row(ring, &[0, 1, 1])).unwrap();
        assert!(ech.contains(&row(ring, &[2, -3, -1])));
        assert!(!ech.contains(&row(ring, &[0, 0, 1])));
    }
}
