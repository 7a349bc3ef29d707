use serde::{Deserialize, Serialize};

use super::{GroupElement, GroupError, GroupSpec};

/// A permutation of `{0, …, N−1}` in one-line notation: `images[i] = π(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = GroupError;

    fn try_from(images: Vec<usize>) -> Result<Self, GroupError> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(GroupError::InvalidPermutation(images));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Position in the lexicographic order of one-line notations (Lehmer code).
    pub fn rank(&self) -> usize {
        let n = self.images.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller_later = self.images[i + 1..].iter().filter(|&&x| x < self.images[i]).count();
            rank = rank * (n - i) + smaller_later;
        }
        rank
    }

    pub fn from_rank(n: usize, mut rank: usize) -> Result<Self, GroupError> {
        let total = factorial(n).ok_or_else(|| GroupError::TooLarge(format!("{n}!")))?;
        if rank >= total {
            return Err(GroupError::ShapeMismatch(format!("rank {rank} ≥ {n}!")));
        }
        let mut digits = vec![0; n];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        Ok(Self { images: digits.into_iter().map(|d| pool.remove(d)).collect() })
    }

    /// All `N!` permutations in lexicographic order, so `all(n)[r].rank() == r`.
    pub fn all(n: usize) -> Vec<Permutation> {
        let total = factorial(n).expect("enumerable symmetric group");
        (0..total).map(|r| Self::from_rank(n, r).expect("rank in range")).collect()
    }
}

/// `n!`, or `None` on overflow.
pub fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

/// An element `hπ` of `H ≀ Sym_N` with `h ∈ H^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WreathElement {
    pub h: Vec<GroupElement>,
    pub perm: Permutation,
}

impl WreathElement {
    pub fn new(spec: &GroupSpec, h: Vec<GroupElement>, perm: Permutation) -> Result<Self, GroupError> {
        if h.len() != perm.len() {
            return Err(GroupError::ShapeMismatch(format!("{} coordinates for a permutation of {}", h.len(), perm.len())));
        }
        if let Some(bad) = h.iter().find(|g| !spec.contains(g)) {
            return Err(GroupError::ShapeMismatch(format!("{bad:?} is not in (Z/{})^{}", spec.m, spec.d)));
        }
        Ok(Self { h, perm })
    }

    pub fn identity(spec: &GroupSpec, n: usize) -> Self {
        Self { h: vec![spec.zero(); n], perm: Permutation::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }
}

/// `(π·h)_i = h_{π⁻¹(i)}`: `π` moves coordinate `j` to position `π(j)`.
pub fn act(perm: &Permutation, h: &[GroupElement]) -> Vec<GroupElement> {
    let inv = perm.inverse();
    (0..h.len()).map(|i| h[inv.apply(i)].clone()).collect()
}

/// `(hπ)(h'π') = (h_1 + h'_{π⁻¹(1)}, …, h_N + h'_{π⁻¹(N)}) ππ'`.
pub fn wreath_multiply(spec: &GroupSpec, a: &WreathElement, b: &WreathElement) -> Result<WreathElement, GroupError> {
    if a.n() != b.n() || a.h.len() != b.h.len() {
        return Err(GroupError::ShapeMismatch(format!("wreath factors of degree {} and {}", a.n(), b.n())));
    }
    let inv = a.perm.inverse();
    let h = (0..a.n()).map(|i| spec.add(&a.h[i], &b.h[inv.apply(i)])).collect();
    Ok(WreathElement { h, perm: a.perm.compose(&b.perm) })
}

/// `(hπ)⁻¹ = (−(π⁻¹·h)) π⁻¹`.
pub fn wreath_inverse(spec: &GroupSpec, a: &WreathElement) -> WreathElement {
    let inv = a.perm.inverse();
    let h = act(&inv, &a.h).iter().map(|g| spec.neg(g)).collect();
    WreathElement { h, perm: inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![1, 0, 2]).is_ok());
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 3]).is_err());
    }

    #[test]
    fn lexicographic_ranks() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        for (r, p) in all.iter().enumerate() {
            assert_eq!(p.rank(), r);
        }
        assert!(all.windows(2).all(|w| w[0].images() < w[1].images()));
        assert_eq!(all[0], Permutation::identity(4));
        assert_eq!(all[23].images(), &[3, 2, 1, 0]);
    }

    #[test]
    fn composition_order() {
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        let q = Permutation::new(vec![0, 2, 1]).unwrap();
        // (p∘q)(1) = p(q(1)) = p(2) = 0
        assert_eq!(p.compose(&q).apply(1), 0);
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn swapped_rows_example() {
        let g = GroupSpec::new(16, 3).unwrap();
        let e = |v: [i64; 3]| g.element(&v).unwrap();
        let swap = Permutation::new(vec![1, 0]).unwrap();
        let x = WreathElement::new(&g, vec![e([1, 2, 3]), e([4, 5, 6])], swap.clone()).unwrap();
        let y = WreathElement::new(&g, vec![e([10, 20, 30]), e([40, 50, 60])], swap).unwrap();
        let xy = wreath_multiply(&g, &x, &y).unwrap();
        assert_eq!(xy.h, vec![e([41, 52, 63]), e([14, 25, 36])]);
        assert!(xy.perm.is_identity());
    }

    #[test]
    fn identity_and_inverse() {
        let g = GroupSpec::new(5, 2).unwrap();
        let id = WreathElement::identity(&g, 3);
        assert_eq!(wreath_inverse(&g, &id), id);
        let a = WreathElement::new(
            &g,
            vec![g.element(&[1, 2]).unwrap(), g.element(&[3, 4]).unwrap(), g.element(&[0, 1]).unwrap()],
            Permutation::new(vec![2, 0, 1]).unwrap(),
        )
        .unwrap();
        assert_eq!(wreath_multiply(&g, &id, &a).unwrap(), a);
        assert_eq!(wreath_multiply(&g, &a, &wreath_inverse(&g, &a)).unwrap(), id);
        assert_eq!(wreath_multiply(&g, &wreath_inverse(&g, &a), &a).unwrap(), id);
    }

    #[test]
    fn shape_mismatch() {
        let g = GroupSpec::new(5, 2).unwrap();
        assert!(wreath_multiply(&g, &WreathElement::identity(&g, 2), &WreathElement::identity(&g, 3)).is_err());
        assert!(WreathElement::new(&g, vec![g.zero()], Permutation::identity(2)).is_err());
    }
}
