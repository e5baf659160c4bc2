//! Finite preordered sets stored as dense boolean relations.
//!
//! Cycles are allowed. Strictness follows the usual preorder convention:
//! `x < y` means `x <= y` and `x != y`, so a 2-cycle gives both `x < y` and
//! `y < x`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// Row-major `n x n` relation, `leq[x * n + y]` iff `x <= y`.
    leq: Vec<bool>,
}

/// On-disk form: generating pairs; the closure is always applied on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreorderFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
}

impl Preorder {
    /// Smallest preorder on `elements` containing `generating_pairs`.
    pub fn build<S, P>(elements: &[S], generating_pairs: &[(P, P)]) -> Result<Self>
    where
        S: AsRef<str>,
        P: AsRef<str>,
    {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let index = index_labels(&labels)?;
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
        }
        for (a, b) in generating_pairs {
            let lookup = |l: &str| {
                index
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::UnknownLabel(l.to_string()))
            };
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            leq[a * n + b] = true;
        }
        // Warshall
        for k in 0..n {
            for x in 0..n {
                if leq[x * n + k] {
                    for y in 0..n {
                        if leq[k * n + y] {
                            leq[x * n + y] = true;
                        }
                    }
                }
            }
        }
        Ok(Preorder { labels, index, leq })
    }

    /// Wraps an explicit relation matrix, checking reflexivity and transitivity.
    pub fn from_relation(labels: Vec<String>, relation: &[Vec<bool>]) -> Result<Self> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        if relation.len() != n || relation.iter().any(|row| row.len() != n) {
            return Err(Error::Format(format!("relation must be {n} x {n}")));
        }
        let leq: Vec<bool> = relation.iter().flatten().copied().collect();
        let p = Preorder { labels, index, leq };
        p.check_axioms()?;
        Ok(p)
    }

    pub fn from_file(file: &PreorderFile) -> Result<Self> {
        Self::build(&file.elements, &file.relations)
    }

    /// Generating form with every strict pair of the closure listed.
    pub fn to_file(&self) -> PreorderFile {
        PreorderFile {
            elements: self.labels.clone(),
            relations: self
                .strict_pairs()
                .map(|(x, y)| (self.labels[x].clone(), self.labels[y].clone()))
                .collect(),
        }
    }

    pub fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for x in 0..n {
            if !self.leq(x, x) {
                return Err(Error::NotReflexive(self.labels[x].clone()));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.leq(x, y) && self.leq(y, z) && !self.leq(x, z) {
                        return Err(Error::NotTransitive(
                            self.labels[x].clone(),
                            self.labels[y].clone(),
                            self.labels[z].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    /// `x <= y` and `x != y`; does not exclude `y <= x`.
    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// Always true for a stored finite preorder; kept so callers can state
    /// the precondition of the incidence-algebra construction explicitly.
    pub fn is_locally_finite(&self) -> bool {
        true
    }

    /// Comparable pairs `(x, y)` with `x <= y`, in lexicographic index order.
    /// This is the index order of the standard basis.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |x| (0..n).filter(move |&y| self.leq(x, y)).map(move |y| (x, y)))
    }

    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs().filter(|(x, y)| x != y)
    }

    pub fn require_leq(&self, x: usize, y: usize) -> Result<()> {
        if self.leq(x, y) {
            Ok(())
        } else {
            Err(Error::NotComparable(
                self.labels[x].clone(),
                self.labels[y].clone(),
            ))
        }
    }

    /// All `z` with `x <= z <= y`, in element order.
    pub fn interval(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        self.require_leq(x, y)?;
        Ok((0..self.len())
            .filter(|&z| self.leq(x, z) && self.leq(z, y))
            .collect())
    }

    pub fn interval_by_label(&self, x: &str, y: &str) -> Result<Vec<&str>> {
        let iv = self.interval(self.index_of(x)?, self.index_of(y)?)?;
        Ok(iv.into_iter().map(|z| self.label(z)).collect())
    }

    /// Classes of the equivalence generated by comparability, each sorted,
    /// ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut component = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if component[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            component[start] = id;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                #[allow(clippy::needless_range_loop)]
                for y in 0..n {
                    if component[y] == usize::MAX && (self.leq(x, y) || self.leq(y, x)) {
                        component[y] = id;
                        members.push(y);
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// First pair of distinct equivalent elements, if any.
    pub fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        self.strict_pairs().find(|&(x, y)| self.leq(y, x))
    }

    pub fn is_poset(&self) -> bool {
        self.antisymmetry_violation().is_none()
    }

    /// Same elements with the relation transposed.
    pub fn dual(&self) -> Preorder {
        let n = self.len();
        let mut leq = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                leq[y * n + x] = self.leq(x, y);
            }
        }
        Preorder {
            labels: self.labels.clone(),
            index: self.index.clone(),
            leq,
        }
    }

    /// Sub-preorder on `keep` (element indices, in the given order).
    pub fn induced(&self, keep: &[usize]) -> Result<Self> {
        let labels: Vec<String> = keep.iter().map(|&x| self.labels[x].clone()).collect();
        let relation: Vec<Vec<bool>> = keep
            .iter()
            .map(|&x| keep.iter().map(|&y| self.leq(x, y)).collect())
            .collect();
        Self::from_relation(labels, &relation)
    }

    /// Chain `labels[0] < labels[1] < ...`.
    pub fn chain<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = labels
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        Self::build(labels, &pairs)
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

/// Every reflexive-transitive relation on the labels `"1"..="n"`, each exactly
/// once, ordered by the bit pattern of the off-diagonal entries.
pub fn enumerate_preorders(n: usize) -> Result<impl Iterator<Item = Preorder>> {
    if !(1..=5).contains(&n) {
        return Err(Error::SizeOutOfRange(n));
    }
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let index = index_labels(&labels)?;
    let off_diagonal: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let patterns = 1u64 << off_diagonal.len();
    Ok((0..patterns).filter_map(move |mask| {
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
        }
        for (bit, &(x, y)) in off_diagonal.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                leq[x * n + y] = true;
            }
        }
        let transitive = (0..n).all(|x| {
            (0..n).all(|y| !leq[x * n + y] || (0..n).all(|z| !leq[y * n + z] || leq[x * n + z]))
        });
        transitive.then(|| Preorder {
            labels: labels.clone(),
            index: index.clone(),
            leq,
        })
    }))
}
