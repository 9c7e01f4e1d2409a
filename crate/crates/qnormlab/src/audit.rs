//! Sampled audits: F-seminorm axioms, concavity modulus estimation, and the
//! neighborhood-base laws for families of candidate neighborhoods of 0.
//!
//! Every audit returns an [`AuditReport`] with one entry per checked law.
//! Failures carry a concrete counterexample; a counterexample is judged by
//! the shared [`Tolerance`], so a reported failure is a genuine violation
//! and not floating-point noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::LshBasis;
use crate::space::{lp_fnorm, LpSpaceModel, SparseVector};
use crate::topology::{g_set_contains, ExponentFunction, GSetMembership};
use crate::{Error, Result, Tolerance};

/// Scaling axiom: how many dyadic halvings to try before giving up.
const VANISH_MAX_HALVINGS: u32 = 60;
/// Scaling axiom: `‖2^{−k}x‖` must drop below this relative threshold.
const VANISH_REL: f64 = 1e-4;

/// Concrete witness of a failed inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub inputs: serde_json::Value,
    pub lhs: f64,
    pub rhs: f64,
}

impl Counterexample {
    pub fn new(inputs: serde_json::Value, lhs: f64, rhs: f64) -> Self {
        Counterexample { inputs, lhs, rhs }
    }
}

/// One audited law: identifier, how many samples it saw, the verdict, and
/// on failure the first counterexample encountered.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub axiom: String,
    pub samples: usize,
    pub passed: bool,
    /// Worst observed lhs/rhs ratio when meaningful; ≤ 1 on a pass.
    pub margin: Option<f64>,
    pub counterexample: Option<Counterexample>,
}

impl AuditEntry {
    /// Entry for an inequality-shaped law. The counterexample is kept only
    /// when the law failed.
    pub fn inequality(axiom: String, samples: usize, passed: bool, cex: Counterexample) -> Self {
        AuditEntry {
            axiom,
            samples,
            passed,
            margin: None,
            counterexample: if passed { None } else { Some(cex) },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn new(entries: Vec<AuditEntry>) -> Self {
        AuditReport { entries }
    }

    pub fn entries(&self) -> &[AuditEntry] {
        &self.entries
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failed_axioms(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| !e.passed)
            .map(|e| e.axiom.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

fn random_sparse(rng: &mut ChaCha8Rng, max_index: u32, max_nnz: usize) -> SparseVector {
    let nnz = rng.random_range(1..=max_nnz);
    let mut entries: Vec<(u32, f64)> = Vec::with_capacity(nnz);
    while entries.len() < nnz {
        let i = rng.random_range(1..=max_index);
        if entries.iter().any(|&(j, _)| j == i) {
            continue;
        }
        let mut v = 0.0f64;
        while v.abs() < 0.05 {
            v = rng.random_range(-2.0..2.0);
        }
        entries.push((i, v));
    }
    SparseVector::from_entries(entries).expect("generator yields distinct nonzero entries")
}

fn coordinate_pairs() -> Vec<(SparseVector, SparseVector)> {
    let mut pairs = Vec::new();
    for i in 1..=4u32 {
        for j in i + 1..=4 {
            pairs.push((SparseVector::unit(i), SparseVector::unit(j)));
        }
    }
    pairs
}

/// Check the three F-seminorm laws on sampled vectors:
/// subadditivity, monotonicity under scalars |α| ≤ 1, and vanishing of
/// `‖2^{−k}x‖` as k grows. Coordinate pairs are always included, so the
/// canonical quasinorm counterexample (δ₁, δ₂) cannot be missed.
pub fn check_fseminorm_axioms<F>(norm: F, samples: usize, seed: u64, tol: Tolerance) -> AuditReport
where
    F: Fn(&SparseVector) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = coordinate_pairs();
    for _ in 0..samples {
        pairs.push((random_sparse(&mut rng, 8, 4), random_sparse(&mut rng, 8, 4)));
    }

    // subadditivity: ‖x+y‖ ≤ ‖x‖ + ‖y‖
    let mut sub_cex = None;
    let mut sub_margin = 0.0f64;
    for (x, y) in &pairs {
        let lhs = norm(&x.add(y));
        let rhs = norm(x) + norm(y);
        if rhs > 0.0 {
            sub_margin = sub_margin.max(lhs / rhs);
        }
        if tol.gt(lhs, rhs) && sub_cex.is_none() {
            sub_cex = Some(Counterexample::new(
                serde_json::json!({"x": x, "y": y}),
                lhs,
                rhs,
            ));
        }
    }
    let mut sub = AuditEntry::inequality(
        "fseminorm.subadditive".into(),
        pairs.len(),
        sub_cex.is_none(),
        sub_cex
            .clone()
            .unwrap_or_else(|| Counterexample::new(serde_json::Value::Null, 0.0, 0.0)),
    );
    sub.margin = Some(sub_margin);

    // scalar monotonicity: ‖αx‖ ≤ ‖x‖ for |α| ≤ 1
    let vectors: Vec<&SparseVector> = pairs.iter().map(|(x, _)| x).collect();
    let mut scalars = vec![1.0, -1.0, 0.5, -0.5, 0.0, 0.99];
    for _ in 0..4 {
        scalars.push(rng.random_range(-1.0..=1.0));
    }
    let mut mono_cex = None;
    let mut mono_margin = 0.0f64;
    let mut mono_count = 0;
    for x in &vectors {
        let nx = norm(x);
        for &alpha in &scalars {
            mono_count += 1;
            let lhs = norm(&x.scale(alpha));
            if nx > 0.0 {
                mono_margin = mono_margin.max(lhs / nx);
            }
            if tol.gt(lhs, nx) && mono_cex.is_none() {
                mono_cex = Some(Counterexample::new(
                    serde_json::json!({"x": x, "alpha": alpha}),
                    lhs,
                    nx,
                ));
            }
        }
    }
    let mut mono = AuditEntry::inequality(
        "fseminorm.scalar-monotone".into(),
        mono_count,
        mono_cex.is_none(),
        mono_cex
            .clone()
            .unwrap_or_else(|| Counterexample::new(serde_json::Value::Null, 0.0, 0.0)),
    );
    mono.margin = Some(mono_margin);

    // vanishing: some k ≤ 60 brings ‖2^{−k}x‖ under the relative threshold
    let mut van_cex = None;
    let mut van_margin = 0.0f64;
    for x in &vectors {
        let threshold = VANISH_REL * (1.0 + norm(x));
        let mut reached = f64::INFINITY;
        for k in 1..=VANISH_MAX_HALVINGS {
            reached = norm(&x.scale((-(k as f64)).exp2()));
            if reached <= threshold {
                break;
            }
        }
        van_margin = van_margin.max(reached / threshold);
        if reached > threshold && van_cex.is_none() {
            van_cex = Some(Counterexample::new(
                serde_json::json!({"x": x, "halvings": VANISH_MAX_HALVINGS}),
                reached,
                threshold,
            ));
        }
    }
    let mut van = AuditEntry::inequality(
        "fseminorm.scalar-vanishing".into(),
        vectors.len(),
        van_cex.is_none(),
        van_cex
            .clone()
            .unwrap_or_else(|| Counterexample::new(serde_json::Value::Null, 0.0, 0.0)),
    );
    van.margin = Some(van_margin);

    AuditReport::new(vec![sub, mono, van])
}

/// Largest observed `‖x+y‖ / (‖x‖+‖y‖)`, floored at 1. Coordinate pairs
/// are included, and for the p-quasinorm they attain the exact modulus
/// `2^{1/p−1}`.
pub fn estimate_modulus_of_concavity<F>(norm: F, samples: usize, seed: u64) -> f64
where
    F: Fn(&SparseVector) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = coordinate_pairs();
    for _ in 0..samples {
        pairs.push((random_sparse(&mut rng, 8, 4), random_sparse(&mut rng, 8, 4)));
    }
    let mut worst = 1.0f64;
    for (x, y) in &pairs {
        let denom = norm(x) + norm(y);
        if denom > 0.0 {
            worst = worst.max(norm(&x.add(y)) / denom);
        }
    }
    worst
}

/// Candidate neighborhood of 0: an F-norm ball or a basis-derived G set.
#[derive(Debug, Clone)]
pub enum Neighborhood {
    Ball {
        model: LpSpaceModel,
        radius: f64,
    },
    GSet {
        basis: LshBasis,
        n: u32,
        exponents: ExponentFunction,
    },
}

impl Neighborhood {
    pub fn ball(model: LpSpaceModel, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(Neighborhood::Ball { model, radius })
    }

    pub fn g_set(basis: LshBasis, n: u32, exponents: ExponentFunction) -> Result<Self> {
        if exponents.len() != n as usize || n == 0 {
            return Err(Error::InvalidSpec(
                "G set needs n ≥ 1 matching the exponent length".into(),
            ));
        }
        Ok(Neighborhood::GSet {
            basis,
            n,
            exponents,
        })
    }

    pub fn label(&self) -> String {
        match self {
            Neighborhood::Ball { model, radius } => format!("ball(p={}, r={})", model.p, radius),
            Neighborhood::GSet { basis, n, .. } => format!("gset(n={}, m={})", n, basis.len()),
        }
    }

    /// Certified membership; conservative for G sets (KUnknown counts as out).
    pub fn contains(&self, z: &SparseVector, tol: Tolerance) -> bool {
        match self {
            Neighborhood::Ball { model, radius } => tol.le(lp_fnorm(z, model), *radius),
            Neighborhood::GSet {
                basis,
                n,
                exponents,
            } => {
                matches!(
                    g_set_contains(basis, z, *n, exponents, tol),
                    Ok(GSetMembership::In)
                )
            }
        }
    }

    /// Certified non-membership; `!contains` is not enough for G sets.
    pub fn definitely_excludes(&self, z: &SparseVector, tol: Tolerance) -> bool {
        match self {
            Neighborhood::Ball { model, radius } => tol.gt(lp_fnorm(z, model), *radius),
            Neighborhood::GSet {
                basis,
                n,
                exponents,
            } => {
                matches!(
                    g_set_contains(basis, z, *n, exponents, tol),
                    Ok(GSetMembership::OutOfG)
                )
            }
        }
    }

    /// Deterministic sample from the neighborhood: scaled random directions
    /// for balls, dyadically shrunk basis combinations for G sets. Falls
    /// back to 0, which every candidate neighborhood contains.
    fn sample_point(&self, rng: &mut ChaCha8Rng, tol: Tolerance) -> SparseVector {
        match self {
            Neighborhood::Ball { model, radius } => {
                let dir = random_sparse(rng, 6, 3);
                let f = lp_fnorm(&dir, model);
                if f == 0.0 {
                    return SparseVector::zero();
                }
                let target = radius * rng.random_range(0.0..1.0);
                dir.scale((target / f).powf(1.0 / model.p))
            }
            Neighborhood::GSet { basis, .. } => {
                if basis.is_empty() {
                    return SparseVector::zero();
                }
                let mut z = SparseVector::zero();
                for _ in 0..rng.random_range(1..=3usize) {
                    let pick = rng.random_range(1..=basis.len() as u32);
                    let el = basis.element(pick).expect("index within built range");
                    z = z.add(&el.e.scale(rng.random_range(-1.0..1.0)));
                }
                for _ in 0..=VANISH_MAX_HALVINGS {
                    if self.contains(&z, tol) {
                        return z;
                    }
                    z = z.scale(0.5);
                }
                SparseVector::zero()
            }
        }
    }

    /// Analytic witness that some V with V+V ⊆ self exists: for a ball of
    /// radius u, subadditivity gives ‖v+w‖ ≤ u/2 + u/2 on the half ball.
    fn halving_candidate(&self) -> Option<Neighborhood> {
        match self {
            Neighborhood::Ball { model, radius } => Some(Neighborhood::Ball {
                model: *model,
                radius: radius / 2.0,
            }),
            Neighborhood::GSet { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NeighborhoodFamily {
    members: Vec<Neighborhood>,
}

impl NeighborhoodFamily {
    pub fn new(members: Vec<Neighborhood>) -> Self {
        NeighborhoodFamily { members }
    }

    pub fn members(&self) -> &[Neighborhood] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Is `inner ⊆ outer`, judged analytically for ball pairs of the same
/// exponent and by sampled membership otherwise.
fn subset_check(
    inner: &Neighborhood,
    outer: &Neighborhood,
    rng: &mut ChaCha8Rng,
    probes: usize,
    tol: Tolerance,
) -> bool {
    if let (
        Neighborhood::Ball {
            model: mi,
            radius: ri,
        },
        Neighborhood::Ball {
            model: mo,
            radius: ro,
        },
    ) = (inner, outer)
    {
        if mi.p == mo.p {
            return ri <= ro;
        }
    }
    (0..probes).all(|_| {
        let z = inner.sample_point(rng, tol);
        outer.contains(&z, tol)
    })
}

/// Audit the neighborhood-base laws on a family of candidate neighborhoods
/// of 0: pairwise intersections contain a member, members are balanced and
/// absorbing (sampled), every member admits an additive halving, and the
/// family separates points from 0. Sampled, one-sided: failures carry
/// certified counterexamples, passes mean no violation was found.
pub fn check_neighborhood_base(
    family: &NeighborhoodFamily,
    samples: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<AuditReport> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = family.members();
    let probes = (samples / 8).clamp(4, 64);
    let mut entries = Vec::new();

    // pairwise intersection contains a member
    let mut pair_cex = None;
    let mut pair_checks = 0;
    for (ai, a) in members.iter().enumerate() {
        for b in &members[ai..] {
            pair_checks += 1;
            let found = members.iter().any(|w| {
                subset_check(w, a, &mut rng, probes, tol)
                    && subset_check(w, b, &mut rng, probes, tol)
            });
            if !found && pair_cex.is_none() {
                pair_cex = Some(Counterexample::new(
                    serde_json::json!({"pair": [a.label(), b.label()]}),
                    0.0,
                    0.0,
                ));
            }
        }
    }
    entries.push(AuditEntry::inequality(
        "base.intersection".into(),
        pair_checks,
        pair_cex.is_none(),
        pair_cex.unwrap_or_else(|| Counterexample::new(serde_json::Value::Null, 0.0, 0.0)),
    ));

    // balanced: z ∈ U, |t| ≤ 1 keeps t·z ∈ U
    let mut bal_cex = None;
    let mut bal_checks = 0;
    for u in members {
        for _ in 0..probes {
            bal_checks += 1;
            let z = u.sample_point(&mut rng, tol);
            let t = rng.random_range(-1.0..=1.0);
            if !u.contains(&z.scale(t), tol) && bal_cex.is_none() {
                bal_cex = Some(Counterexample::new(
                    serde_json::json!({"member": u.label(), "z": z, "t": t}),
                    t.abs(),
                    1.0,
                ));
            }
        }
    }
    entries.push(AuditEntry::inequality(
        "base.balanced".into(),
        bal_checks,
        bal_cex.is_none(),
        bal_cex.unwrap_or_else(|| Counterexample::new(serde_json::Value::Null, 0.0, 0.0)),
    ));

    // additive halving: some V with V + V ⊆ U
    let mut halv_cex = None;
    for u in members {
        let ok = if u.halving_candidate().is_some() {
            // ‖v+w‖ ≤ ‖v‖+‖w‖ ≤ u/2 + u/2 analytically
            true
        } else {
            members.iter().any(|v| {
                (0..probes).all(|_| {
                    let a = v.sample_point(&mut rng, tol);
                    let b = v.sample_point(&mut rng, tol);
                    u.contains(&a.add(&b), tol)
                })
            })
        };
        if !ok && halv_cex.is_none() {
            halv_cex = Some(Counterexample::new(
                serde_json::json!({"member": u.label()}),
                0.0,
                0.0,
            ));
        }
    }
    entries.push(AuditEntry::inequality(
        "base.additive-halving".into(),
        members.len(),
        halv_cex.is_none(),
        halv_cex.unwrap_or_else(|| Counterexample::new(serde_json::Value::Null, 0.0, 0.0)),
    ));

    // absorbing: every direction shrinks into every member
    let mut abs_cex = None;
    let mut abs_checks = 0;
    let mut directions: Vec<SparseVector> = (1..=4).map(SparseVector::unit).collect();
    for _ in 0..probes {
        directions.push(random_sparse(&mut rng, 8, 4));
    }
    for u in members {
        for y in &directions {
            abs_checks += 1;
            let absorbed =
                (1..=VANISH_MAX_HALVINGS).any(|k| u.contains(&y.scale((-(k as f64)).exp2()), tol));
            if !absorbed && abs_cex.is_none() {
                abs_cex = Some(Counterexample::new(
                    serde_json::json!({"member": u.label(), "direction": y}),
                    1.0,
                    0.0,
                ));
            }
        }
    }
    entries.push(AuditEntry::inequality(
        "base.absorbing".into(),
        abs_checks,
        abs_cex.is_none(),
        abs_cex.unwrap_or_else(|| Counterexample::new(serde_json::Value::Null, 0.0, 0.0)),
    ));

    // separating: every sampled nonzero point is excluded by some member
    let mut sep_cex = None;
    let mut sep_checks = 0;
    let mut points: Vec<SparseVector> = (1..=6).map(SparseVector::unit).collect();
    for _ in 0..probes {
        points.push(random_sparse(&mut rng, 8, 4));
    }
    for z in &points {
        if z.is_zero() {
            continue;
        }
        sep_checks += 1;
        let excluded = members.iter().any(|u| u.definitely_excludes(z, tol));
        if !excluded && sep_cex.is_none() {
            sep_cex = Some(Counterexample::new(serde_json::json!({ "z": z }), 0.0, 0.0));
        }
    }
    entries.push(AuditEntry::inequality(
        "base.separating".into(),
        sep_checks,
        sep_cex.is_none(),
        sep_cex.unwrap_or_else(|| Counterexample::new(serde_json::Value::Null, 0.0, 0.0)),
    ));

    Ok(AuditReport::new(entries))
}
