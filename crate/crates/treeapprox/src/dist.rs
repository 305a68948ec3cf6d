//! Probability distributions over rooted tree types of radius k+1, with
//! exact rational weights, extraction from finite graphs, the
//! mass-transport (unimodularity) residual check, and projections to
//! smaller radii.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ball::extract_tree_ball;
use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::tree::{Params, TreeType};

/// A probability distribution `q` over tree types of depth at most
/// `radius` in the space with degree bound `d` and colors `1..=c`.
/// For synthesis the radius is `k+1` where `k` is the audit depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDistribution {
    d: usize,
    c: usize,
    radius: usize,
    weights: BTreeMap<TreeType, BigRational>,
}

impl TypeDistribution {
    /// Validating constructor: weights positive, exactly summing to one,
    /// every type inside the declared space. Zero weights are dropped.
    pub fn new(
        d: usize,
        c: usize,
        radius: usize,
        weights: BTreeMap<TreeType, BigRational>,
    ) -> Result<Self> {
        let params = Params::new(d, c, radius)?;
        let mut clean = BTreeMap::new();
        let mut total = BigRational::zero();
        for (ty, w) in weights {
            if w.is_negative() {
                return Err(Error::validation(format!("negative weight for type `{ty}`")));
            }
            if w.is_zero() {
                continue;
            }
            ty.check_fits(params)?;
            total += &w;
            clean.insert(ty, w);
        }
        if !total.is_one() {
            return Err(Error::validation(format!(
                "weights sum to {total}, expected exactly 1"
            )));
        }
        Ok(TypeDistribution { d, c, radius, weights: clean })
    }

    /// Skip validation; for residual diagnostics on deliberately invalid
    /// inputs.
    pub fn new_unchecked(
        d: usize,
        c: usize,
        radius: usize,
        weights: BTreeMap<TreeType, BigRational>,
    ) -> Self {
        TypeDistribution { d, c, radius, weights }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Audit depth k = radius − 1. Valid only for radius ≥ 1.
    pub fn k(&self) -> Result<usize> {
        self.radius
            .checked_sub(1)
            .ok_or_else(|| Error::validation("distribution has radius 0, no audit depth k".into()))
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, ty: &TreeType) -> BigRational {
        self.weights.get(ty).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TreeType, &BigRational)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &TreeType> {
        self.weights.keys()
    }

    /// Marginal under truncation to radius `level`:
    /// q_ℓ(τ) = Σ_{t : truncate(t,ℓ)=τ} q(t).
    pub fn project(&self, level: usize) -> Result<TypeDistribution> {
        if level > self.radius {
            return Err(Error::validation(format!(
                "projection level {level} exceeds distribution radius {}",
                self.radius
            )));
        }
        let mut weights: BTreeMap<TreeType, BigRational> = BTreeMap::new();
        for (ty, w) in &self.weights {
            *weights
                .entry(ty.truncate(level))
                .or_insert_with(BigRational::zero) += w;
        }
        Ok(TypeDistribution { d: self.d, c: self.c, radius: level, weights })
    }

    /// α·q₁ + (1−α)·q₂ with exact rational α ∈ [0,1].
    pub fn mixture(q1: &TypeDistribution, q2: &TypeDistribution, alpha: &BigRational) -> Result<TypeDistribution> {
        if q1.d != q2.d || q1.c != q2.c || q1.radius != q2.radius {
            return Err(Error::validation("mixture requires matching parameters"));
        }
        let beta = BigRational::one() - alpha;
        let mut weights = BTreeMap::new();
        for (ty, w) in &q1.weights {
            *weights.entry(ty.clone()).or_insert_with(BigRational::zero) += alpha * w;
        }
        for (ty, w) in &q2.weights {
            *weights.entry(ty.clone()).or_insert_with(BigRational::zero) += &beta * w;
        }
        TypeDistribution::new(q1.d, q1.c, q1.radius, weights)
    }
}

/// Empirical distribution of (k+1)-ball types over a uniform random
/// vertex. Requires every (k+1)-ball to be a tree, which is equivalent to
/// girth(G) > 2k+3; the offending vertex is named otherwise. Weights are
/// exact rationals with denominator |G|.
pub fn from_graph(g: &ColoredGraph, k: usize) -> Result<TypeDistribution> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::validation("cannot extract a distribution from an empty graph"));
    }
    let mut counts: BTreeMap<TreeType, usize> = BTreeMap::new();
    for v in 0..n {
        let ty = extract_tree_ball(g, v, k + 1)?;
        *counts.entry(ty).or_insert(0) += 1;
    }
    let denom = BigInt::from(n);
    let weights = counts
        .into_iter()
        .map(|(ty, cnt)| (ty, BigRational::new(BigInt::from(cnt), denom.clone())))
        .collect();
    TypeDistribution::new(g.max_degree_bound(), g.color_count(), k + 1, weights)
}

/// Sparse antisymmetric residual matrix of the intrinsic mass transport
/// identity: residual(τ,τ') = Σ_{t≺τ} q(t)·adm(t,τ') − Σ_{t'≺τ'} q(t')·adm(t',τ).
/// Entries are stored once for τ < τ'; lookups resolve the sign.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub k: usize,
    /// nonzero entries (τ, τ', residual) with τ < τ'
    pub entries: Vec<(TreeType, TreeType, BigRational)>,
    pub max_abs: BigRational,
    /// index set actually inspected (types realized as truncations or as
    /// neighbor balls inside support types)
    pub checked_types: usize,
}

impl ResidualReport {
    pub fn passes(&self) -> bool {
        self.max_abs.is_zero()
    }

    pub fn passes_with_tolerance(&self, tol: &BigRational) -> bool {
        self.max_abs <= *tol
    }

    pub fn residual(&self, tau: &TreeType, tau2: &TreeType) -> BigRational {
        if tau == tau2 {
            return BigRational::zero();
        }
        for (a, b, r) in &self.entries {
            if a == tau && b == tau2 {
                return r.clone();
            }
            if a == tau2 && b == tau {
                return -r.clone();
            }
        }
        BigRational::zero()
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "unimodularity-check")?;
        writeln!(f, "k = {}", self.k)?;
        writeln!(f, "checked-types = {}", self.checked_types)?;
        writeln!(f, "max-residual = {}", self.max_abs)?;
        writeln!(f, "pass = {}", self.passes())?;
        for (a, b, r) in &self.entries {
            writeln!(f, "residual {a} {b} {r}")?;
        }
        Ok(())
    }
}

/// Evaluate the mass-transport residuals of `q` at depth k = radius − 1.
pub fn check_unimodular(q: &TypeDistribution) -> Result<ResidualReport> {
    let k = q.k()?;
    // flow(τ, τ') = Σ_{t ≺ τ} q(t)·adm(t, τ')
    let mut flows: BTreeMap<(TreeType, TreeType), BigRational> = BTreeMap::new();
    let mut index: std::collections::BTreeSet<TreeType> = std::collections::BTreeSet::new();
    for (t, w) in q.iter() {
        let tau = t.truncate(k);
        index.insert(tau.clone());
        for (tau2, cnt) in t.neighbor_ball_types(k) {
            index.insert(tau2.clone());
            let mass = w * BigRational::from(BigInt::from(cnt));
            *flows
                .entry((tau.clone(), tau2))
                .or_insert_with(BigRational::zero) += mass;
        }
    }
    let zero = BigRational::zero();
    let mut entries = Vec::new();
    let mut max_abs = BigRational::zero();
    let keys: std::collections::BTreeSet<(TreeType, TreeType)> = flows
        .keys()
        .map(|(a, b)| {
            if a < b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            }
        })
        .collect();
    for (a, b) in keys {
        if a == b {
            continue;
        }
        let fwd = flows.get(&(a.clone(), b.clone())).unwrap_or(&zero);
        let bwd = flows.get(&(b.clone(), a.clone())).unwrap_or(&zero);
        let r = fwd - bwd;
        if !r.is_zero() {
            if r.abs() > max_abs {
                max_abs = r.abs();
            }
            entries.push((a, b, r));
        }
    }
    Ok(ResidualReport { k, entries, max_abs, checked_types: index.len() })
}

/// Outcome of the adm(t,τ) ∈ {0,1} scan.
#[derive(Debug, Clone)]
pub struct SimpleAdmCheck {
    /// (t, τ, adm) with adm ≥ 2, if any
    pub witness: Option<(TreeType, TreeType, usize)>,
}

impl SimpleAdmCheck {
    pub fn ok(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for SimpleAdmCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "simple-adm-check")?;
        match &self.witness {
            None => writeln!(f, "pass = true"),
            Some((t, tau, a)) => {
                writeln!(f, "pass = false")?;
                writeln!(f, "witness t = {t}")?;
                writeln!(f, "witness tau = {tau}")?;
                writeln!(f, "witness adm = {a}")
            }
        }
    }
}

/// True iff every support type has adm(t,τ) ≤ 1 for every τ; returns a
/// witness otherwise.
pub fn check_simple_adm(q: &TypeDistribution) -> Result<SimpleAdmCheck> {
    let k = q.k()?;
    for (t, _) in q.iter() {
        for (tau, cnt) in t.neighbor_ball_types(k) {
            if cnt > 1 {
                return Ok(SimpleAdmCheck { witness: Some((t.clone(), tau, cnt)) });
            }
        }
    }
    Ok(SimpleAdmCheck { witness: None })
}
