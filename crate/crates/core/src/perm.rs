use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A permutation of `0..degree`, stored as its image array.
///
/// Ordering is lexicographic on the image array.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm(Vec<usize>);

/// A vertex permutation that preserves some structure (graph or complex).
pub type Automorphism = Perm;

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
        }
        Ok(Perm(images))
    }

    /// Builds `v ↦ f(v)` on `0..degree`.
    pub fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::from_images((0..degree).map(f).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ rhs`, i.e. `v ↦ self(rhs(v))`.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        Perm(rhs.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(v, &w)| v == w)
    }

    pub fn fixes(&self, v: usize) -> bool {
        self.0[v] == v
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Perm::from_images(images)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_perm(max: usize) -> impl Strategy<Value = Perm> {
        (1..max).prop_flat_map(|n| {
            Just((0..n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Perm::from_images(v).unwrap())
        })
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
        assert!(serde_json::from_str::<Perm>("[1,1]").is_err());
    }

    #[test]
    fn composition_order() {
        let a = Perm::from_images(vec![1, 2, 0]).unwrap();
        let b = Perm::from_images(vec![1, 0, 2]).unwrap();
        // a(b(0)) = a(1) = 2
        assert_eq!(a.compose(&b).apply(0), 2);
    }

    proptest! {
        #[test]
        fn inverse_cancels(p in arb_perm(12)) {
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert!(p.inverse().compose(&p).is_identity());
        }

        #[test]
        fn json_round_trip(p in arb_perm(12)) {
            let s = serde_json::to_string(&p).unwrap();
            prop_assert_eq!(serde_json::from_str::<Perm>(&s).unwrap(), p);
        }
    }
}
