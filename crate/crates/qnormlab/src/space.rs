//! Concrete quasi-normed sequence spaces.
//!
//! Vectors are finitely supported real sequences indexed by positive
//! integers; the model norm is the p-homogeneous F-norm `‖x‖_p = Σ|x_i|^p`
//! with 0 < p < 1. The bounded set `C` is the ball `{z : ‖z‖_p ≤ c}`, and
//! `K = C − C` is handled by a certified three-valued predicate rather than
//! an exact decision procedure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Tolerance};

/// Finitely supported real sequence. Canonical form: entries sorted by
/// strictly ascending positive index, no stored coordinate is zero, all
/// values finite. Equality is equality of canonical forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEntries")]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

/// Wire shape shared by vectors and functionals: `{"entries": [[i, v], ...]}`.
#[derive(Deserialize)]
struct RawEntries {
    entries: Vec<(u32, f64)>,
}

impl TryFrom<RawEntries> for SparseVector {
    type Error = Error;

    fn try_from(raw: RawEntries) -> Result<Self> {
        let mut prev = 0u32;
        for &(i, v) in &raw.entries {
            if i == 0 {
                return Err(Error::InvalidVector("index 0 is not allowed".into()));
            }
            if i <= prev {
                return Err(Error::InvalidVector(format!(
                    "indices must be strictly ascending, found {i} after {prev}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidVector(format!(
                    "non-finite value at index {i}"
                )));
            }
            if v == 0.0 {
                return Err(Error::InvalidVector(format!(
                    "explicit zero at index {i} breaks canonical form"
                )));
            }
            prev = i;
        }
        Ok(SparseVector {
            entries: raw.entries,
        })
    }
}

impl SparseVector {
    pub fn zero() -> Self {
        SparseVector {
            entries: Vec::new(),
        }
    }

    /// Coordinate vector δ_i.
    pub fn unit(i: u32) -> Self {
        assert!(i >= 1, "indices start at 1");
        SparseVector {
            entries: vec![(i, 1.0)],
        }
    }

    /// Canonicalizing constructor: sorts by index, rejects duplicates and
    /// non-finite values, drops exact zeros.
    pub fn from_entries(mut entries: Vec<(u32, f64)>) -> Result<Self> {
        entries.retain(|&(_, v)| v != 0.0);
        entries.sort_by_key(|&(i, _)| i);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidVector(format!("duplicate index {}", w[0].0)));
            }
        }
        for &(i, v) in &entries {
            if i == 0 {
                return Err(Error::InvalidVector("index 0 is not allowed".into()));
            }
            if !v.is_finite() {
                return Err(Error::InvalidVector(format!(
                    "non-finite value at index {i}"
                )));
            }
        }
        Ok(SparseVector { entries })
    }

    /// Dense prefix convenience: slice position k holds the coordinate of
    /// index k+1. Zeros are dropped.
    pub fn from_dense(values: &[f64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v != 0.0)
            .map(|(k, &v)| (k as u32 + 1, v))
            .collect();
        SparseVector { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Support size.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: u32) -> f64 {
        match self.entries.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&(i, _)| i)
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|&(i, _)| i)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, v)| v.abs())
            .fold(0.0, f64::max)
    }

    pub fn add(&self, other: &SparseVector) -> SparseVector {
        self.merge(other, 1.0)
    }

    pub fn sub(&self, other: &SparseVector) -> SparseVector {
        self.merge(other, -1.0)
    }

    fn merge(&self, other: &SparseVector, sign: f64) -> SparseVector {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(i, u)), Some(&&(j, w))) => {
                    if i < j {
                        entries.push((i, u));
                        a.next();
                    } else if j < i {
                        entries.push((j, sign * w));
                        b.next();
                    } else {
                        let v = u + sign * w;
                        if v != 0.0 {
                            entries.push((i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&(i, u)), None) => {
                    entries.push((i, u));
                    a.next();
                }
                (None, Some(&&(j, w))) => {
                    entries.push((j, sign * w));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVector { entries }
    }

    pub fn scale(&self, c: f64) -> SparseVector {
        assert!(c.is_finite(), "scalar must be finite");
        if c == 0.0 {
            return SparseVector::zero();
        }
        SparseVector {
            entries: self.entries.iter().map(|&(i, v)| (i, c * v)).collect(),
        }
    }

    /// Positive and negative parts: `z = z⁺ − z⁻` with disjoint supports.
    pub fn split_parts(&self) -> (SparseVector, SparseVector) {
        let pos = self
            .entries
            .iter()
            .filter(|&&(_, v)| v > 0.0)
            .copied()
            .collect();
        let neg = self
            .entries
            .iter()
            .filter(|&&(_, v)| v < 0.0)
            .map(|&(i, v)| (i, -v))
            .collect();
        (SparseVector { entries: pos }, SparseVector { entries: neg })
    }
}

/// Finitely supported coefficient sequence acting by coordinate pairing:
/// `f(x) = Σ_i f_i·x_i`. Same canonical form and wire shape as vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualFunctional(SparseVector);

impl DualFunctional {
    pub fn zero() -> Self {
        DualFunctional(SparseVector::zero())
    }

    /// Coordinate functional δ*_i.
    pub fn unit(i: u32) -> Self {
        DualFunctional(SparseVector::unit(i))
    }

    pub fn from_entries(entries: Vec<(u32, f64)>) -> Result<Self> {
        Ok(DualFunctional(SparseVector::from_entries(entries)?))
    }

    pub fn from_coeffs(coeffs: SparseVector) -> Self {
        DualFunctional(coeffs)
    }

    pub fn from_dense(values: &[f64]) -> Self {
        DualFunctional(SparseVector::from_dense(values))
    }

    pub fn coeffs(&self) -> &SparseVector {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn get(&self, i: u32) -> f64 {
        self.0.get(i)
    }

    pub fn scale(&self, c: f64) -> DualFunctional {
        DualFunctional(self.0.scale(c))
    }

    pub fn apply(&self, x: &SparseVector) -> f64 {
        pairing(self, x)
    }

    /// `Σ|f_i|`: bounds `|f(z)|` by `‖f‖_1·max_j|z_j|`.
    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|(_, v)| v.abs()).sum()
    }
}

/// The model space: exponent p of the F-norm `Σ|x_i|^p`, 0 < p < 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpSpaceModel {
    pub p: f64,
}

impl LpSpaceModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && 0.0 < p && p < 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        Ok(LpSpaceModel { p })
    }

    /// Analytic modulus of concavity of the quasinorm: `2^{1/p − 1}`.
    pub fn modulus_of_concavity(&self) -> f64 {
        (1.0 / self.p - 1.0).exp2()
    }
}

/// The bounded set `C = {z : ‖z‖_p ≤ c}`. 0 is a core point: any direction
/// y enters C under the scaling `t = (c/‖y‖_p)^{1/p}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedBall {
    pub radius: f64,
}

impl BoundedBall {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(BoundedBall { radius })
    }
}

/// Ordered generators v_1, v_2, … of the nested subspaces
/// `E_n = span(v_1..v_n)`. The standard chain is v_i = δ_i.
#[derive(Debug, Clone, PartialEq)]
pub enum SubspaceChain {
    Standard,
    Explicit(Vec<SparseVector>),
}

impl SubspaceChain {
    /// 1-based generator access; None past the end of an explicit chain.
    pub fn generator(&self, k: usize) -> Option<SparseVector> {
        assert!(k >= 1);
        match self {
            SubspaceChain::Standard => Some(SparseVector::unit(k as u32)),
            SubspaceChain::Explicit(v) => v.get(k - 1).cloned(),
        }
    }

    /// Coordinates appearing in E_k; the minimal-support solve space.
    pub fn coordinates_up_to(&self, k: usize) -> Vec<u32> {
        let mut coords: Vec<u32> = (1..=k)
            .filter_map(|j| self.generator(j))
            .flat_map(|v| v.support().collect::<Vec<_>>())
            .collect();
        coords.sort_unstable();
        coords.dedup();
        coords
    }
}

/// `‖x‖_p = Σ|x_i|^p`; p-homogeneous: `‖λx‖ = |λ|^p‖x‖`.
pub fn lp_fnorm(x: &SparseVector, model: &LpSpaceModel) -> f64 {
    x.iter().map(|(_, v)| v.abs().powf(model.p)).sum()
}

/// `(Σ|x_i|^p)^{1/p}`; 1-homogeneous quasinorm presentation.
pub fn lp_quasinorm(x: &SparseVector, model: &LpSpaceModel) -> f64 {
    let f = lp_fnorm(x, model);
    if f == 0.0 {
        0.0
    } else {
        f.powf(1.0 / model.p)
    }
}

/// `f(x) = Σ_i f_i·x_i` over the common (finite) support.
pub fn pairing(f: &DualFunctional, x: &SparseVector) -> f64 {
    let mut sum = 0.0;
    let (mut a, mut b) = (f.coeffs().iter().peekable(), x.iter().peekable());
    while let (Some(&(i, u)), Some(&(j, v))) = (a.peek(), b.peek()) {
        if i < j {
            a.next();
        } else if j < i {
            b.next();
        } else {
            sum += u * v;
            a.next();
            b.next();
        }
    }
    sum
}

/// Σ_i |f_i·x_i|: the cancellation-free magnitude of the pairing, used to
/// tell true zeros from cancellation dust.
pub fn pairing_abs_bound(f: &DualFunctional, x: &SparseVector) -> f64 {
    let mut sum = 0.0;
    let (mut a, mut b) = (f.coeffs().iter().peekable(), x.iter().peekable());
    while let (Some(&(i, u)), Some(&(j, v))) = (a.peek(), b.peek()) {
        if i < j {
            a.next();
        } else if j < i {
            b.next();
        } else {
            sum += (u * v).abs();
            a.next();
            b.next();
        }
    }
    sum
}

/// Dual norm of f over C together with an attaining point.
#[derive(Debug, Clone, PartialEq)]
pub struct DualNorm {
    pub value: f64,
    /// Point of C with `pairing(f, witness) = value`.
    pub witness: SparseVector,
}

/// `sup_{z∈C} |f(z)| = max_i |f_i| · c^{1/p}`.
///
/// Concentration on a single coordinate is optimal on the non-convex p-ball:
/// `Σ|z_i| ≤ (Σ|z_i|^p)^{1/p} ≤ c^{1/p}` for p < 1, so
/// `|f(z)| ≤ max_i|f_i|·Σ|z_i| ≤ max_i|f_i|·c^{1/p}`, attained by the signed
/// coordinate extreme at the argmax. Always finite because C is bounded.
pub fn dual_norm_over(f: &DualFunctional, ball: &BoundedBall, model: &LpSpaceModel) -> DualNorm {
    let reach = ball.radius.powf(1.0 / model.p);
    let mut best: Option<(u32, f64)> = None;
    for (i, v) in f.coeffs().iter() {
        let a = v.abs();
        if best.is_none_or(|(_, b)| a > b) {
            best = Some((i, a));
        }
    }
    match best {
        None => DualNorm {
            value: 0.0,
            witness: SparseVector::zero(),
        },
        Some((i, a)) => {
            let sign = if f.get(i) < 0.0 { -1.0 } else { 1.0 };
            DualNorm {
                value: a * reach,
                witness: SparseVector::unit(i).scale(sign * reach),
            }
        }
    }
}

/// Sampling oracle for [`dual_norm_over`]: max of `|f(z)|` over `trials`
/// random boundary points of C (restricted to supp(f)) plus every signed
/// coordinate extreme `±c^{1/p}·δ_i`, i ∈ supp(f). A certified lower bound.
pub fn brute_force_dual_norm(
    f: &DualFunctional,
    ball: &BoundedBall,
    model: &LpSpaceModel,
    trials: usize,
    seed: u64,
) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    let reach = ball.radius.powf(1.0 / model.p);
    let support: Vec<u32> = f.coeffs().support().collect();
    let mut best = 0.0f64;
    for &i in &support {
        for sign in [-1.0, 1.0] {
            let z = SparseVector::unit(i).scale(sign * reach);
            best = best.max(pairing(f, &z).abs());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let entries: Vec<(u32, f64)> = support
            .iter()
            .map(|&i| (i, rng.random_range(-1.0..=1.0)))
            .filter(|&(_, v)| v != 0.0)
            .collect();
        let z = SparseVector { entries };
        let nf = lp_fnorm(&z, model);
        if nf == 0.0 {
            continue;
        }
        let t = (ball.radius / nf).powf(1.0 / model.p);
        best = best.max(pairing(f, &z.scale(t)).abs());
    }
    best
}

/// Boundary scaling: the t > 0 with `‖t·y‖_p = c` exactly, namely
/// `t = (c/‖y‖_p)^{1/p}`; then `t·y ∈ C`.
pub fn scale_into(y: &SparseVector, ball: &BoundedBall, model: &LpSpaceModel) -> Result<f64> {
    let nf = lp_fnorm(y, model);
    if nf == 0.0 {
        return Err(Error::ZeroOnBoundary);
    }
    Ok((ball.radius / nf).powf(1.0 / model.p))
}

/// Certified membership verdict for `K = C − C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum KMembership {
    /// Decomposition certificate: u, v ∈ C with z = u − v.
    In {
        u: SparseVector,
        v: SparseVector,
    },
    Out,
    Unknown,
}

impl KMembership {
    pub fn is_in(&self) -> bool {
        matches!(self, KMembership::In { .. })
    }
}

/// Three-valued test for `z ∈ K = C − C`. Sound, not complete:
/// In when the positive/negative-part split has both parts in C;
/// Out when `‖z‖_p > 2c`, since any decomposition z = u − v obeys
/// `‖z‖_p ≤ ‖u‖_p + ‖v‖_p ≤ 2c` by subadditivity; Unknown between.
pub fn k_membership(
    z: &SparseVector,
    ball: &BoundedBall,
    model: &LpSpaceModel,
    tol: Tolerance,
) -> KMembership {
    let (u, v) = z.split_parts();
    if tol.le(lp_fnorm(&u, model), ball.radius) && tol.le(lp_fnorm(&v, model), ball.radius) {
        return KMembership::In { u, v };
    }
    if tol.gt(lp_fnorm(z, model), 2.0 * ball.radius) {
        return KMembership::Out;
    }
    KMembership::Unknown
}
