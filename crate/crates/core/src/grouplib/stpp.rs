use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::abelian::{find_zero_sum, DEFAULT_CHECK_BUDGET};
use super::{factorial, quotient_set, wreath_inverse, wreath_multiply, GroupElement, GroupError, GroupSpec, Permutation, WreathElement};
use crate::matcore::ceil_log2;

/// One triple `(X_i, Y_i, Z_i)` of subsets of `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub x: Vec<GroupElement>,
    pub y: Vec<GroupElement>,
    pub z: Vec<GroupElement>,
}

/// Marks triples produced by [`stpp_family`], whose growth parameters are known
/// in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTag {
    /// Modulus of the base group `(Z/m)^3`.
    pub m: u32,
    /// Number of base-group factors `ℓ`.
    pub ell: usize,
}

/// `N` triples of subsets of an abelian group, all `X_i` of one size, all `Y_i`
/// of one size and all `Z_i` of one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StppTriples {
    group: GroupSpec,
    triples: Vec<Triple>,
    family: Option<FamilyTag>,
}

impl StppTriples {
    /// Checks shapes only; use [`check_stpp`] to verify the property itself.
    pub fn new(group: GroupSpec, triples: Vec<Triple>) -> Result<Self, GroupError> {
        let first = triples.first().ok_or_else(|| GroupError::ShapeMismatch("no triples".into()))?;
        let sizes = (first.x.len(), first.y.len(), first.z.len());
        if sizes.0 == 0 || sizes.1 == 0 || sizes.2 == 0 {
            return Err(GroupError::ShapeMismatch("empty subset".into()));
        }
        for (i, t) in triples.iter().enumerate() {
            if (t.x.len(), t.y.len(), t.z.len()) != sizes {
                return Err(GroupError::ShapeMismatch(format!("triple {i} has sizes {:?}, expected {sizes:?}", (t.x.len(), t.y.len(), t.z.len()))));
            }
            if let Some(bad) = t.x.iter().chain(&t.y).chain(&t.z).find(|g| !group.contains(g)) {
                return Err(GroupError::ShapeMismatch(format!("triple {i}: {bad:?} is not in (Z/{})^{}", group.m, group.d)));
            }
        }
        Ok(Self { group, triples, family: None })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    /// Number of triples `N`.
    pub fn n(&self) -> usize {
        self.triples.len()
    }

    pub fn family(&self) -> Option<FamilyTag> {
        self.family
    }

    /// `(|X_i|, |Y_i|, |Z_i|)`, common to every `i`.
    pub fn subset_sizes(&self) -> (usize, usize, usize) {
        let t = &self.triples[0];
        (t.x.len(), t.y.len(), t.z.len())
    }
}

/// A solution of `q_x + q_y + q_z = 0` that the simultaneous triple product
/// property forbids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StppWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub qx: GroupElement,
    pub qy: GroupElement,
    pub qz: GroupElement,
}

impl fmt::Display for StppWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(i,j,k)=({},{},{}), q_x={:?}, q_y={:?}, q_z={:?}",
            self.i,
            self.j,
            self.k,
            self.qx.residues(),
            self.qy.residues(),
            self.qz.residues()
        )
    }
}

/// Brute force over all `(i, j, k)` and `q_x ∈ Q(X_i,X_j)`, `q_y ∈ Q(Y_j,Y_k)`,
/// `q_z ∈ Q(Z_k,Z_i)`. `budget` caps the number of `(q_x, q_y)` pairs visited.
pub fn find_stpp_violation(t: &StppTriples, budget: u64) -> Result<Option<StppWitness>, GroupError> {
    let g = &t.group;
    let n = t.n();
    let mut remaining = budget;
    for i in 0..n {
        for j in 0..n {
            let qx = quotient_set(g, &t.triples[i].x, &t.triples[j].x);
            for k in 0..n {
                let qy = quotient_set(g, &t.triples[j].y, &t.triples[k].y);
                let qz = quotient_set(g, &t.triples[k].z, &t.triples[i].z);
                let same = i == j && j == k;
                let found = find_zero_sum(g, &qx, &qy, &qz, &mut remaining, |a, b, c| {
                    same && a.is_zero() && b.is_zero() && c.is_zero()
                })?;
                if let Some([qx, qy, qz]) = found {
                    return Ok(Some(StppWitness { i, j, k, qx, qy, qz }));
                }
            }
        }
    }
    Ok(None)
}

pub fn check_stpp(t: &StppTriples) -> Result<bool, GroupError> {
    Ok(find_stpp_violation(t, DEFAULT_CHECK_BUDGET)?.is_none())
}

/// The six subsets over `(Z/m)^3` generalizing `{1,…,15}×{0}×{0}` and friends:
/// `X̄_b`, `Ȳ_b`, `Z̄_b` put the nonzero residues on axes
/// `(0,1,2)` for `b = 0` and `(1,2,0)` for `b = 1`.
fn base_subsets(m: u32) -> [[Vec<GroupElement>; 3]; 2] {
    let g = GroupSpec { m, d: 3 };
    let axis = |a: usize| -> Vec<GroupElement> {
        (1..i64::from(m))
            .map(|v| {
                let mut e = [0i64; 3];
                e[a] = v;
                g.element(&e).expect("rank 3")
            })
            .collect()
    };
    [[axis(0), axis(1), axis(2)], [axis(1), axis(2), axis(0)]]
}

/// The two triples over `(Z/m)^3` of the running example.
pub fn running_example_triples(m: u32) -> Result<StppTriples, GroupError> {
    stpp_family(2, m)
}

/// `N` triples over `(Z/m)^{3ℓ}`, `ℓ = max(1, ⌈log₂ N⌉)`: triple `i` (1-based)
/// takes, in factor `p`, the base subsets indexed by the `p`-th binary digit of
/// `i − 1` (most significant first).
pub fn stpp_family(n_triples: usize, m: u32) -> Result<StppTriples, GroupError> {
    if n_triples == 0 {
        return Err(GroupError::ShapeMismatch("a family needs N ≥ 1".into()));
    }
    GroupSpec::new(m, 3)?;
    let ell = (ceil_log2(n_triples) as usize).max(1);
    let group = GroupSpec::new(m, 3 * ell)?;
    let base = base_subsets(m);
    let triples = (0..n_triples)
        .map(|i| {
            let digits: Vec<usize> = (0..ell).rev().map(|p| (i >> p) & 1).collect();
            let product = |which: usize| product_of(&digits.iter().map(|&b| &base[b][which][..]).collect::<Vec<_>>());
            Triple { x: product(0), y: product(1), z: product(2) }
        })
        .collect();
    let mut out = StppTriples::new(group, triples)?;
    out.family = Some(FamilyTag { m, ell });
    Ok(out)
}

/// Cartesian product of subsets, enumerated with the first factor outermost.
fn product_of(factors: &[&[GroupElement]]) -> Vec<GroupElement> {
    let mut acc: Vec<Vec<&GroupElement>> = vec![vec![]];
    for f in factors {
        acc = acc.into_iter().flat_map(|prefix| f.iter().map(move |g| [prefix.clone(), vec![g]].concat())).collect();
    }
    acc.iter().map(|parts| GroupSpec::concat(parts)).collect()
}

/// Limiting exponents `|H_N| = N^{α+o(1)}`, `k_N = N^{βN+o(N)}` of a family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthParameters {
    Regular { alpha: f64, beta: f64 },
    /// `β = 0`: every `X_i` is a singleton and no reduction happens.
    Degenerate { alpha: f64 },
}

impl GrowthParameters {
    pub fn alpha(&self) -> f64 {
        match *self {
            Self::Regular { alpha, .. } | Self::Degenerate { alpha } => alpha,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match *self {
            Self::Regular { beta, .. } => Some(beta),
            Self::Degenerate { .. } => None,
        }
    }
}

/// Closed-form growth parameters of the bundled family over `(Z/m)^3`:
/// `α = 3·log₂ m` and `β = log₂(m − 1)`. Other triples are refused since the
/// parameters are asymptotic and cannot be read off a single member.
pub fn growth_parameters(t: &StppTriples, n_triples: usize) -> Result<GrowthParameters, GroupError> {
    if n_triples < 2 {
        return Err(GroupError::ShapeMismatch(format!("growth parameters need N ≥ 2, got {n_triples}")));
    }
    let tag = t.family.ok_or(GroupError::UnknownFamily)?;
    Ok(family_growth(tag.m))
}

pub fn family_growth(m: u32) -> GrowthParameters {
    let alpha = 3.0 * f64::from(m).log2();
    if m <= 2 {
        GrowthParameters::Degenerate { alpha }
    } else {
        GrowthParameters::Regular { alpha, beta: f64::from(m - 1).log2() }
    }
}

/// Largest number of `(x,σ)·(y,τ)` pairs [`check_unique_quotient`] will enumerate.
pub const UNIQUE_QUOTIENT_LIMIT: u64 = 10_000_000;

/// Checks that `(x, σ, y, τ) ↦ (xσ)⁻¹yτ` is injective for `x ∈ ∏X_i`,
/// `y ∈ ∏Y_i`, `σ, τ ∈ Sym_N`.
pub fn check_unique_quotient(t: &StppTriples, n_triples: usize) -> Result<bool, GroupError> {
    if n_triples != t.n() {
        return Err(GroupError::ShapeMismatch(format!("{} triples, N = {n_triples}", t.n())));
    }
    let g = &t.group;
    let nf = factorial(n_triples).ok_or_else(|| GroupError::TooLarge(format!("{n_triples}!")))? as u64;
    let (sx, sy, _) = t.subset_sizes();
    let count = |s: usize| (s as u64).checked_pow(n_triples as u32).and_then(|p| p.checked_mul(nf));
    let work = count(sx).zip(count(sy)).and_then(|(a, b)| a.checked_mul(b));
    match work {
        Some(w) if w <= UNIQUE_QUOTIENT_LIMIT => {}
        _ => return Err(GroupError::BudgetExceeded { needed: work.unwrap_or(u64::MAX), remaining: UNIQUE_QUOTIENT_LIMIT }),
    }
    let xs = product_of_tuples(&t.triples.iter().map(|tr| &tr.x[..]).collect::<Vec<_>>());
    let ys = product_of_tuples(&t.triples.iter().map(|tr| &tr.y[..]).collect::<Vec<_>>());
    let perms = Permutation::all(n_triples);
    let lhs: Vec<WreathElement> = xs
        .iter()
        .flat_map(|x| perms.iter().map(move |s| WreathElement { h: x.clone(), perm: s.clone() }))
        .map(|e| wreath_inverse(g, &e))
        .collect();
    let rhs: Vec<WreathElement> =
        ys.iter().flat_map(|y| perms.iter().map(move |s| WreathElement { h: y.clone(), perm: s.clone() })).collect();
    let mut seen = HashSet::with_capacity(lhs.len() * rhs.len());
    for a in &lhs {
        for b in &rhs {
            let q = wreath_multiply(g, a, b)?;
            if !seen.insert(q) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All tuples `(g_1, …, g_N)` with `g_i ∈ sets[i]`, first coordinate outermost.
fn product_of_tuples(sets: &[&[GroupElement]]) -> Vec<Vec<GroupElement>> {
    let mut acc: Vec<Vec<GroupElement>> = vec![vec![]];
    for s in sets {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                s.iter().map(move |g| {
                    let mut t = prefix.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    acc
}

/// Serialized form `{m, d, N, triples: [[X_i, Y_i, Z_i], …]}`, each element a
/// residue array.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriplesFile {
    pub m: u32,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub triples: Vec<[Vec<Vec<u32>>; 3]>,
}

impl TriplesFile {
    pub fn from_triples(t: &StppTriples) -> Self {
        let list = |s: &[GroupElement]| s.iter().map(|g| g.residues().to_vec()).collect::<Vec<_>>();
        Self {
            m: t.group.m,
            d: t.group.d,
            n: t.n(),
            triples: t.triples.iter().map(|tr| [list(&tr.x), list(&tr.y), list(&tr.z)]).collect(),
        }
    }

    /// Rebuilds the triples, re-verifying the simultaneous triple product
    /// property unless `trust` is set.
    pub fn into_triples(self, trust: bool) -> Result<StppTriples, GroupError> {
        let group = GroupSpec::new(self.m, self.d)?;
        if self.triples.len() != self.n {
            return Err(GroupError::ShapeMismatch(format!("N = {} but {} triples listed", self.n, self.triples.len())));
        }
        let parse = |list: &[Vec<u32>]| -> Result<Vec<GroupElement>, GroupError> {
            list.iter()
                .map(|r| {
                    if r.iter().any(|&x| x >= self.m) {
                        return Err(GroupError::ShapeMismatch(format!("residues {r:?} not reduced mod {}", self.m)));
                    }
                    group.element(&r.iter().map(|&x| i64::from(x)).collect::<Vec<_>>())
                })
                .collect()
        };
        let triples = self
            .triples
            .iter()
            .map(|[x, y, z]| Ok(Triple { x: parse(x)?, y: parse(y)?, z: parse(z)? }))
            .collect::<Result<Vec<_>, GroupError>>()?;
        let mut out = StppTriples::new(group, triples)?;
        if !trust {
            if let Some(w) = find_stpp_violation(&out, DEFAULT_CHECK_BUDGET)? {
                return Err(GroupError::StppViolated(w));
            }
        }
        // recognize the bundled family so its growth parameters stay available
        if let Ok(f) = stpp_family(out.n(), out.group.m) {
            if f.group == out.group && f.triples == out.triples {
                out.family = f.family;
            }
        }
        Ok(out)
    }
}

pub fn triples_to_json(t: &StppTriples) -> String {
    serde_json::to_string(&TriplesFile::from_triples(t)).expect("triples serialize")
}

pub fn load_triples_json(text: &str, trust: bool) -> Result<StppTriples, GroupError> {
    let file: TriplesFile = serde_json::from_str(text).map_err(|e| GroupError::ShapeMismatch(e.to_string()))?;
    file.into_triples(trust)
}
