use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::GroupError;

/// The finite abelian group `H = (Z/m)^d`, written additively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub m: u32,
    pub d: usize,
}

/// An element of `(Z/m)^d`: `d` residues, always reduced into `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    residues: Vec<u32>,
}

impl GroupElement {
    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

impl GroupSpec {
    pub fn new(m: u32, d: usize) -> Result<Self, GroupError> {
        if m < 2 || d == 0 {
            return Err(GroupError::InvalidGroup { m, d });
        }
        Ok(Self { m, d })
    }

    /// `|H| = m^d`, or an error if it does not fit in `usize`.
    pub fn order(&self) -> Result<usize, GroupError> {
        (self.m as usize).checked_pow(self.d as u32).ok_or(GroupError::TooLarge(format!("({})^{} elements", self.m, self.d)))
    }

    /// Builds an element from arbitrary integers, reducing each mod `m`.
    pub fn element(&self, values: &[i64]) -> Result<GroupElement, GroupError> {
        if values.len() != self.d {
            return Err(GroupError::ShapeMismatch(format!("element has {} residues, group rank is {}", values.len(), self.d)));
        }
        let m = i64::from(self.m);
        Ok(GroupElement { residues: values.iter().map(|&v| v.rem_euclid(m) as u32).collect() })
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { residues: vec![0; self.d] }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.residues.len() == self.d && g.residues.iter().all(|&r| r < self.m)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement { residues: a.residues.iter().zip(&b.residues).map(|(&x, &y)| (x + y) % self.m).collect() }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement { residues: a.residues.iter().zip(&b.residues).map(|(&x, &y)| (x + self.m - y) % self.m).collect() }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement { residues: a.residues.iter().map(|&x| (self.m - x) % self.m).collect() }
    }

    /// Row-major index of `g` in `[0, m^d)`, residue 0 most significant.
    pub fn encode(&self, g: &GroupElement) -> usize {
        g.residues.iter().fold(0usize, |acc, &r| acc * self.m as usize + r as usize)
    }

    pub fn decode(&self, mut index: usize) -> GroupElement {
        let m = self.m as usize;
        let mut residues = vec![0u32; self.d];
        for r in residues.iter_mut().rev() {
            *r = (index % m) as u32;
            index /= m;
        }
        GroupElement { residues }
    }

    /// Direct product `(Z/m)^{d·k}` of `k` copies.
    pub fn power(&self, k: usize) -> Self {
        Self { m: self.m, d: self.d * k }
    }

    /// Concatenates one element of each factor into an element of the product.
    pub fn concat(parts: &[&GroupElement]) -> GroupElement {
        GroupElement { residues: parts.iter().flat_map(|p| p.residues.iter().copied()).collect() }
    }
}

/// `Q(S, T) = {s − t : s ∈ S, t ∈ T}`, deduplicated and sorted.
pub fn quotient_set(spec: &GroupSpec, s: &[GroupElement], t: &[GroupElement]) -> BTreeSet<GroupElement> {
    s.iter().flat_map(|a| t.iter().map(move |b| spec.sub(a, b))).collect()
}

/// Default cap on the number of `(q_x, q_y)` pairs a brute-force check enumerates.
pub const DEFAULT_CHECK_BUDGET: u64 = 100_000_000;

/// Looks for `q_x + q_y + q_z = 0` with `q_x ∈ qx`, `q_y ∈ qy`, `q_z ∈ qz`,
/// accepting a solution only when `allow(q_x, q_y, q_z)` says it is harmless.
/// Every pair `(q_x, q_y)` is visited; membership of `−(q_x+q_y)` is a hash lookup.
pub(crate) fn find_zero_sum(
    spec: &GroupSpec,
    qx: &BTreeSet<GroupElement>,
    qy: &BTreeSet<GroupElement>,
    qz: &BTreeSet<GroupElement>,
    budget: &mut u64,
    allow: impl Fn(&GroupElement, &GroupElement, &GroupElement) -> bool,
) -> Result<Option<[GroupElement; 3]>, GroupError> {
    let work = (qx.len() as u64).saturating_mul(qy.len() as u64);
    if work > *budget {
        return Err(GroupError::BudgetExceeded { needed: work, remaining: *budget });
    }
    *budget -= work;
    let zset: HashSet<&GroupElement> = qz.iter().collect();
    for a in qx {
        for b in qy {
            let c = spec.neg(&spec.add(a, b));
            if zset.contains(&c) && !allow(a, b, &c) {
                return Ok(Some([a.clone(), b.clone(), c]));
            }
        }
    }
    Ok(None)
}

/// Triple product property: `q_x + q_y + q_z = 0` over `Q(X)×Q(Y)×Q(Z)` forces
/// `q_x = q_y = q_z = 0`.
pub fn check_triple_product(spec: &GroupSpec, x: &[GroupElement], y: &[GroupElement], z: &[GroupElement]) -> Result<bool, GroupError> {
    let mut budget = DEFAULT_CHECK_BUDGET;
    let (qx, qy, qz) = (quotient_set(spec, x, x), quotient_set(spec, y, y), quotient_set(spec, z, z));
    let found = find_zero_sum(spec, &qx, &qy, &qz, &mut budget, |a, b, c| a.is_zero() && b.is_zero() && c.is_zero())?;
    Ok(found.is_none())
}
