use serde::{Deserialize, Serialize};

use super::{InnerMultiplier, StpError};
use crate::grouplib::{
    check_stpp, factorial, stpp_family, GroupElement, GroupSpec, Permutation, StppTriples, TriplesFile, WreathElement,
};

/// Default memory guard for one configuration's working set.
pub const DEFAULT_BUDGET_BYTES: u64 = 4 << 30;

/// Environment variable overriding [`DEFAULT_BUDGET_BYTES`].
pub const BUDGET_ENV: &str = "WREATHMUL_BUDGET_BYTES";

/// Rows (or columns) indexed by a set `(∏ U_i) × Sym_N ⊂ H ≀ Sym_N`: row
/// `t·N! + r` is the `t`-th tuple (first coordinate outermost) paired with the
/// `r`-th permutation in lexicographic order.
#[derive(Clone, Debug)]
pub struct IndexSet {
    /// `N·d` residues per tuple, coordinate `i` in `[i·d, (i+1)·d)`.
    tuples: Vec<u32>,
    width: usize,
    perms: usize,
}

impl IndexSet {
    fn new(sets: &[&[GroupElement]], perms: usize) -> Self {
        let width: usize = sets.iter().map(|s| s[0].residues().len()).sum();
        let mut tuples: Vec<Vec<u32>> = vec![vec![]];
        for s in sets {
            tuples = tuples
                .into_iter()
                .flat_map(|prefix| {
                    s.iter().map(move |g| {
                        let mut t = prefix.clone();
                        t.extend_from_slice(g.residues());
                        t
                    })
                })
                .collect();
        }
        Self { tuples: tuples.concat(), width, perms }
    }

    pub fn len(&self) -> usize {
        self.tuples.len() / self.width * self.perms
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// `(h, permutation rank)` of row `index`.
    pub fn row(&self, index: usize) -> (&[u32], usize) {
        let (t, r) = (index / self.perms, index % self.perms);
        (&self.tuples[t * self.width..(t + 1) * self.width], r)
    }
}

/// One level of the group-theoretic multiplication for the family member
/// `(m, N)`: the group `H = (Z/m)^{3ℓ}`, its triples, and every index map the
/// pipeline uses.
#[derive(Clone, Debug)]
pub struct StpConfig {
    group: GroupSpec,
    n_wreath: usize,
    triples: StppTriples,
    k_n: usize,
    n: usize,
    perms: Vec<Permutation>,
    /// `compose[a·N! + b] = rank(π_a ∘ π_b)`.
    compose: Vec<usize>,
    inverse: Vec<usize>,
    /// `|H|^N`.
    hn: usize,
    /// `|H|`.
    h_order: usize,
    /// Orbit representatives of `Sym_N` acting on character tuples: the
    /// non-decreasing tuples of block indices, `N` per representative.
    xi_blocks: Vec<u32>,
    xi_orbit: Vec<u32>,
    /// For each flat character index: its representative and the least `κ`
    /// (by rank) with `χ = κ·χ₀`.
    orbit_rep: Vec<u32>,
    orbit_kappa: Vec<u16>,
    x: IndexSet,
    y: IndexSet,
    z: IndexSet,
    budget_bytes: u64,
}

/// `binom(a, b)` exactly, or `None` on overflow.
pub fn binomial(a: u128, b: u128) -> Option<u128> {
    let b = b.min(a.saturating_sub(b));
    (0..b).try_fold(1u128, |acc, i| acc.checked_mul(a - i).map(|v| v / (i + 1)))
}

/// Rough peak working set of one multiplication at binary64: the embedded,
/// transformed and batched data occupy about six copies of the `N!·|H|^N`
/// slots, plus the orbit tables.
pub fn estimate_bytes(m: u32, n_wreath: usize) -> Option<u64> {
    let ell = crate::matcore::ceil_log2(n_wreath.max(1)).max(1);
    let hn = u64::from(m).checked_pow(3 * ell * n_wreath as u32)?;
    let nf = factorial(n_wreath)? as u64;
    hn.checked_mul(nf)?.checked_mul(6 * 16)?.checked_add(hn.checked_mul(8)?)
}

/// Budget from [`BUDGET_ENV`] if set and valid, else the default.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET_BYTES)
}

/// [`build_config_with_budget`] using [`budget_from_env`].
pub fn build_config(m: u32, n_wreath: usize) -> Result<StpConfig, StpError> {
    build_config_with_budget(m, n_wreath, budget_from_env())
}

/// Builds and verifies the configuration for the family member `(m, N)`.
///
/// `m = 2` is accepted: every subset is a singleton, so the level serves only
/// `N!`-sized matrices, which still exercises the whole pipeline.
pub fn build_config_with_budget(m: u32, n_wreath: usize, budget_bytes: u64) -> Result<StpConfig, StpError> {
    if n_wreath < 2 {
        return Err(StpError::InvalidParameters(format!("N must be at least 2, got {n_wreath}")));
    }
    if m < 2 {
        return Err(StpError::InvalidParameters(format!("m must be at least 2, got {m}")));
    }
    let needed = estimate_bytes(m, n_wreath).unwrap_or(u64::MAX);
    if needed > budget_bytes {
        return Err(StpError::BudgetExceeded { needed, budget: budget_bytes });
    }
    let triples = stpp_family(n_wreath, m)?;
    if !check_stpp(&triples)? {
        return Err(StpError::InvalidParameters("family triples fail the simultaneous triple product property".into()));
    }
    from_triples(triples, budget_bytes)
}

fn from_triples(triples: StppTriples, budget_bytes: u64) -> Result<StpConfig, StpError> {
    let group = *triples.group();
    let n_wreath = triples.n();
    let h_order = group.order()?;
    let hn = h_order.checked_pow(n_wreath as u32).ok_or_else(|| StpError::InvalidParameters("|H|^N overflows".into()))?;
    let nf = factorial(n_wreath).ok_or_else(|| StpError::InvalidParameters("N! overflows".into()))?;
    if nf > usize::from(u16::MAX) {
        return Err(StpError::InvalidParameters(format!("N = {n_wreath} is too large")));
    }
    let k_n: usize = triples.triples().iter().map(|t| t.x.len()).product();
    let perms = Permutation::all(n_wreath);
    let compose = perms.iter().flat_map(|a| perms.iter().map(move |b| a.compose(b).rank())).collect();
    let inverse = perms.iter().map(|p| p.inverse().rank()).collect();

    let (xi_blocks, xi_orbit, orbit_rep, orbit_kappa) = orbit_tables(h_order, n_wreath, &perms, hn)?;

    let set = |pick: fn(&crate::grouplib::Triple) -> &Vec<GroupElement>| {
        IndexSet::new(&triples.triples().iter().map(|t| &pick(t)[..]).collect::<Vec<_>>(), nf)
    };
    let (x, y, z) = (set(|t| &t.x), set(|t| &t.y), set(|t| &t.z));
    Ok(StpConfig {
        group,
        n_wreath,
        k_n,
        n: k_n * nf,
        triples,
        perms,
        compose,
        inverse,
        hn,
        h_order,
        xi_blocks,
        xi_orbit,
        orbit_rep,
        orbit_kappa,
        x,
        y,
        z,
        budget_bytes,
    })
}

type OrbitTables = (Vec<u32>, Vec<u32>, Vec<u32>, Vec<u16>);

/// Enumerates non-decreasing block tuples (the lexicographically least member
/// of each orbit) and fills the character → (representative, least κ) map.
fn orbit_tables(h_order: usize, n: usize, perms: &[Permutation], hn: usize) -> Result<OrbitTables, StpError> {
    let count = binomial((h_order + n - 1) as u128, n as u128)
        .filter(|&c| c <= u128::from(u32::MAX))
        .ok_or_else(|| StpError::InvalidParameters("too many orbit representatives".into()))? as usize;
    let mut blocks = Vec::with_capacity(count * n);
    let mut tuple = vec![0u32; n];
    loop {
        blocks.extend_from_slice(&tuple);
        // next non-decreasing tuple
        let Some(pos) = (0..n).rev().find(|&i| (tuple[i] as usize) < h_order - 1) else { break };
        let v = tuple[pos] + 1;
        tuple[pos..].iter_mut().for_each(|t| *t = v);
    }
    debug_assert_eq!(blocks.len(), count * n);

    let inv: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let mut orbit_rep = vec![u32::MAX; hn];
    let mut orbit_kappa = vec![0u16; hn];
    let mut orbit = Vec::with_capacity(count);
    for (r, rep) in blocks.chunks_exact(n).enumerate() {
        let mut size = 0u32;
        for (k, kinv) in inv.iter().enumerate() {
            let flat = (0..n).fold(0usize, |acc, j| acc * h_order + rep[kinv.apply(j)] as usize);
            if orbit_rep[flat] == u32::MAX {
                orbit_rep[flat] = r as u32;
                orbit_kappa[flat] = k as u16;
                size += 1;
            }
        }
        orbit.push(size);
    }
    Ok((blocks, orbit, orbit_rep, orbit_kappa))
}

impl StpConfig {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// `N`, the degree of the symmetric group.
    pub fn n_wreath(&self) -> usize {
        self.n_wreath
    }

    pub fn triples(&self) -> &StppTriples {
        &self.triples
    }

    /// `k_N = ∏|X_i|`.
    pub fn k_n(&self) -> usize {
        self.k_n
    }

    /// Matrix order served, `k_N·N!`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `N!`, the order of the block products.
    pub fn block_order(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// `|H|`.
    pub fn h_order(&self) -> usize {
        self.h_order
    }

    /// `|H|^N`.
    pub fn hn(&self) -> usize {
        self.hn
    }

    /// Number of transform dimensions `N·d`, each of length `m`.
    pub fn dims(&self) -> usize {
        self.n_wreath * self.group.d
    }

    pub fn budget_bytes(&self) -> u64 {
        self.budget_bytes
    }

    /// `|Ξ(H^N)|`.
    pub fn xi_count(&self) -> usize {
        self.xi_orbit.len()
    }

    /// Block indices of representative `r`.
    pub fn xi_rep(&self, r: usize) -> &[u32] {
        &self.xi_blocks[r * self.n_wreath..(r + 1) * self.n_wreath]
    }

    pub fn xi_orbit_sizes(&self) -> &[u32] {
        &self.xi_orbit
    }

    /// `(representative, least κ)` with `χ = κ·χ₀` for the flat character `chi`.
    pub fn orbit_of(&self, chi: usize) -> (usize, usize) {
        (self.orbit_rep[chi] as usize, usize::from(self.orbit_kappa[chi]))
    }

    pub fn x_set(&self) -> &IndexSet {
        &self.x
    }

    pub fn y_set(&self) -> &IndexSet {
        &self.y
    }

    pub fn z_set(&self) -> &IndexSet {
        &self.z
    }

    #[inline]
    pub(crate) fn compose(&self, a: usize, b: usize) -> usize {
        self.compose[a * self.perms.len() + b]
    }

    #[inline]
    pub(crate) fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Flat index of `κ·χ₀` for representative `r`, where `(κ·χ)_j = χ_{κ⁻¹(j)}`.
    pub fn act_on_rep(&self, kappa: usize, r: usize) -> usize {
        let kinv = &self.perms[self.inverse[kappa]];
        let rep = self.xi_rep(r);
        (0..self.n_wreath).fold(0usize, |acc, j| acc * self.h_order + rep[kinv.apply(j)] as usize)
    }

    /// Position of `u⁻¹v` for `u = (h_u, σ)`, `v = (h_v, τ)`: the permutation
    /// part `σ⁻¹τ` (as a rank) and the flat index of `σ⁻¹·(h_v − h_u)`, whose
    /// coordinate `i` is coordinate `σ(i)` of the difference.
    #[inline]
    pub fn slot(&self, hu: &[u32], su: usize, hv: &[u32], sv: usize) -> (usize, usize) {
        let d = self.group.d;
        let m = self.group.m;
        let sigma = &self.perms[su];
        let mut flat = 0usize;
        for i in 0..self.n_wreath {
            let src = sigma.apply(i) * d;
            for c in 0..d {
                flat = flat * m as usize + ((hv[src + c] + m - hu[src + c]) % m) as usize;
            }
        }
        (self.compose(self.inverse[su], sv), flat)
    }

    /// The slot of `u⁻¹v` for explicit wreath elements, for cross-checking
    /// against group arithmetic.
    pub fn slot_of(&self, u: &WreathElement, v: &WreathElement) -> (usize, usize) {
        let flat = |e: &WreathElement| e.h.iter().flat_map(|g| g.residues().iter().copied()).collect::<Vec<u32>>();
        self.slot(&flat(u), u.perm.rank(), &flat(v), v.perm.rank())
    }

    /// Decodes a flat `H^N` index into its `N` coordinates.
    pub fn decode_h(&self, mut flat: usize) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(self.n_wreath);
        let mut blocks = vec![0usize; self.n_wreath];
        for b in blocks.iter_mut().rev() {
            *b = flat % self.h_order;
            flat /= self.h_order;
        }
        for b in blocks {
            out.push(self.group.decode(b));
        }
        out
    }
}

/// Serialized configuration: the triples plus `{m, N, inner, budget_bytes}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigFile {
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub inner: InnerMultiplier,
    pub budget_bytes: u64,
    pub triples: TriplesFile,
}

impl ConfigFile {
    pub fn new(cfg: &StpConfig, inner: InnerMultiplier) -> Self {
        Self { m: cfg.group.m, n: cfg.n_wreath, inner, budget_bytes: cfg.budget_bytes, triples: TriplesFile::from_triples(&cfg.triples) }
    }

    /// Rebuilds the configuration; the stored triples are re-verified unless
    /// `trust` is set, and must describe the family member `(m, N)`.
    pub fn into_config(self, trust: bool) -> Result<(StpConfig, InnerMultiplier), StpError> {
        let triples = self.triples.into_triples(trust)?;
        let expected = stpp_family(self.n, self.m)?;
        if triples.triples() != expected.triples() || triples.group() != expected.group() {
            return Err(StpError::InvalidParameters(format!("triples do not describe the family member (m={}, N={})", self.m, self.n)));
        }
        let needed = estimate_bytes(self.m, self.n).unwrap_or(u64::MAX);
        if needed > self.budget_bytes {
            return Err(StpError::BudgetExceeded { needed, budget: self.budget_bytes });
        }
        Ok((from_triples(expected, self.budget_bytes)?, self.inner))
    }
}

pub fn config_to_json(cfg: &StpConfig, inner: InnerMultiplier) -> String {
    serde_json::to_string(&ConfigFile::new(cfg, inner)).expect("config serializes")
}

pub fn load_config_json(text: &str, trust: bool) -> Result<(StpConfig, InnerMultiplier), StpError> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| StpError::InvalidParameters(e.to_string()))?;
    file.into_config(trust)
}
