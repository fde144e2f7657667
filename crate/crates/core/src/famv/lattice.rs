//! Finite lattices with precomputed meet, join and (when it exists)
//! Heyting implication tables.

use std::fmt;

use thiserror::Error;

use crate::finbase::{Atom, FinSet};
use crate::poset::{FinPoset, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("{0} and {1} have no meet")]
    NoMeet(Atom, Atom),
    #[error("{0} and {1} have no join")]
    NoJoin(Atom, Atom),
    #[error("a lattice needs at least one element")]
    Empty,
}

#[derive(Clone, PartialEq, Eq)]
pub struct LatticeV {
    order: FinPoset,
    meet: Vec<usize>,
    join: Vec<usize>,
    top: usize,
    bottom: usize,
    heyting: Option<Vec<usize>>,
}

impl fmt::Debug for LatticeV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeV{}", self.order.elements())
    }
}

impl LatticeV {
    /// Builds a lattice from its Hasse diagram `(lower, upper)`.
    pub fn from_hasse(names: &[&str], edges: &[(&str, &str)]) -> Result<Self, LatticeError> {
        let elements = FinSet::new(names.iter().map(|n| Atom::new(*n))).map_err(PosetError::from)?;
        let mut rel = Vec::new();
        for (a, b) in edges {
            rel.push((
                elements.lookup(a).map_err(PosetError::from)?,
                elements.lookup(b).map_err(PosetError::from)?,
            ));
        }
        LatticeV::from_poset(FinPoset::generated(elements, &rel)?)
    }

    pub fn from_poset(order: FinPoset) -> Result<Self, LatticeError> {
        let n = order.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let name = |i: usize| order.elements().atom(i).clone();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| order.leq(c, a) && order.leq(c, b)).collect();
                meet[a * n + b] = *lower
                    .iter()
                    .find(|&&c| lower.iter().all(|&d| order.leq(d, c)))
                    .ok_or_else(|| LatticeError::NoMeet(name(a), name(b)))?;
                let upper: Vec<usize> = (0..n).filter(|&c| order.leq(a, c) && order.leq(b, c)).collect();
                join[a * n + b] = *upper
                    .iter()
                    .find(|&&c| upper.iter().all(|&d| order.leq(c, d)))
                    .ok_or_else(|| LatticeError::NoJoin(name(a), name(b)))?;
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|a| order.leq(a, t)))
            .expect("finite lattices are bounded");
        let bottom = (0..n)
            .find(|&b| (0..n).all(|a| order.leq(b, a)))
            .expect("finite lattices are bounded");
        let mut lattice = LatticeV {
            order,
            meet,
            join,
            top,
            bottom,
            heyting: None,
        };
        lattice.heyting = lattice.implication_table();
        Ok(lattice)
    }

    /// `imp[b * n + c] = b ⇒ c`, the largest `a` with `a ∧ b ≤ c`.
    fn implication_table(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut imp = vec![0; n * n];
        for b in 0..n {
            for c in 0..n {
                let below: Vec<usize> = (0..n).filter(|&a| self.leq(self.meet(a, b), c)).collect();
                let candidate = below.iter().fold(self.bottom, |acc, &a| self.join(acc, a));
                if !below.contains(&candidate) {
                    return None;
                }
                imp[b * n + c] = candidate;
            }
        }
        Some(imp)
    }

    pub fn two() -> Self {
        LatticeV::from_hasse(&["0", "1"], &[("0", "1")]).expect("2")
    }

    /// The Boolean square `2²`, elements written as bit pairs.
    pub fn boolean_square() -> Self {
        LatticeV::boolean(2)
    }

    pub fn boolean_cube() -> Self {
        LatticeV::boolean(3)
    }

    /// Subsets of a `k`-element set, named by bit strings such as `(1,0)`.
    pub fn boolean(k: usize) -> Self {
        let name = |m: usize| {
            format!(
                "({})",
                (0..k)
                    .map(|i| ((m >> (k - 1 - i)) & 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        };
        let names: Vec<String> = (0..1usize << k).map(name).collect();
        let mut edges = Vec::new();
        for m in 0..1usize << k {
            for i in 0..k {
                if m & (1 << i) == 0 {
                    edges.push((names[m].as_str(), names[m | (1 << i)].as_str()));
                }
            }
        }
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        LatticeV::from_hasse(&refs, &edges).expect("Boolean lattice")
    }

    /// The chain `0 < ½ < 1`.
    pub fn chain3() -> Self {
        LatticeV::from_hasse(&["0", "½", "1"], &[("0", "½"), ("½", "1")]).expect("3-chain")
    }

    /// The diamond `M₃`: three pairwise incomparable atoms.
    pub fn m3() -> Self {
        LatticeV::from_hasse(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .expect("M3")
    }

    /// The pentagon `N₅`: `0 < a < b < 1` and `0 < c < 1`.
    pub fn n5() -> Self {
        LatticeV::from_hasse(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        )
        .expect("N5")
    }

    pub fn order(&self) -> &FinPoset {
        &self.order
    }

    pub fn elements(&self) -> &FinSet {
        self.order.elements()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, a: usize) -> &Atom {
        self.order.elements().atom(a)
    }

    pub fn elem(&self, name: &str) -> usize {
        self.order
            .elements()
            .lookup(name)
            .unwrap_or_else(|_| panic!("no element {name}"))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn is_heyting(&self) -> bool {
        self.heyting.is_some()
    }

    pub fn implies(&self, b: usize, c: usize) -> Option<usize> {
        self.heyting.as_ref().map(|imp| imp[b * self.len() + c])
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_lattices() {
        assert_eq!(LatticeV::two().len(), 2);
        let sq = LatticeV::boolean_square();
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.meet(sq.elem("(1,0)"), sq.elem("(0,1)")), sq.elem("(0,0)"));
        assert_eq!(sq.join(sq.elem("(1,0)"), sq.elem("(0,1)")), sq.elem("(1,1)"));
        assert_eq!(LatticeV::boolean_cube().len(), 8);
    }

    #[test]
    fn heyting_iff_distributive() {
        for (v, heyting) in [
            (LatticeV::two(), true),
            (LatticeV::boolean_square(), true),
            (LatticeV::boolean_cube(), true),
            (LatticeV::chain3(), true),
            (LatticeV::m3(), false),
            (LatticeV::n5(), false),
        ] {
            assert_eq!(v.is_heyting(), heyting, "{v:?}");
            assert_eq!(v.is_distributive(), heyting, "{v:?}");
        }
    }

    #[test]
    fn implication_adjunction() {
        for v in [LatticeV::boolean_cube(), LatticeV::chain3()] {
            let n = v.len();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(v.leq(v.meet(a, b), c), v.leq(a, v.implies(b, c).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn non_lattice_rejected() {
        let err = LatticeV::from_hasse(&["a", "b"], &[]).unwrap_err();
        assert!(matches!(err, LatticeError::NoMeet(..)));
        assert!(LatticeV::from_hasse(&[], &[]).is_err());
    }
}
