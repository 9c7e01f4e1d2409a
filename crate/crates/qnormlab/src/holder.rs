//! Reverse Hölder checks for exponents below 1, and the summability bound
//! tying the p-bracket functional to a power of the induced norm.

use serde::{Deserialize, Serialize};

use crate::basis::LshBasis;
use crate::space::SparseVector;
use crate::topology::{norm_e, p_bracket_norm};
use crate::{Error, Result, Tolerance};

/// Weighted instance of the reverse Hölder inequality with exponent pair
/// (p1, q1), q1 = p1/(p1−1) < 0. All weights are strictly positive; the
/// head sums run over the first N = lambda.len() terms while Σa runs over
/// the whole list, which may be longer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct HolderInstance {
    pub lambda: Vec<f64>,
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    pub p1: f64,
    pub p2: f64,
}

#[derive(Deserialize)]
struct RawInstance {
    lambda: Vec<f64>,
    t: Vec<f64>,
    a: Vec<f64>,
    p1: f64,
    p2: f64,
}

impl TryFrom<RawInstance> for HolderInstance {
    type Error = Error;
    fn try_from(raw: RawInstance) -> Result<Self> {
        HolderInstance::new(raw.lambda, raw.t, raw.a, raw.p1, raw.p2)
    }
}

fn all_positive(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
        return Err(Error::InvalidInstance(format!(
            "{name} must contain strictly positive finite entries"
        )));
    }
    Ok(())
}

impl HolderInstance {
    pub fn new(lambda: Vec<f64>, t: Vec<f64>, a: Vec<f64>, p1: f64, p2: f64) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidInstance("need at least one term".into()));
        }
        all_positive("lambda", &lambda)?;
        all_positive("t", &t)?;
        all_positive("a", &a)?;
        if !(p1.is_finite() && p2.is_finite() && 0.0 < p2 && p2 <= p1 && p1 < 1.0) {
            return Err(Error::InvalidInstance(format!(
                "exponents must satisfy 0 < p2 ≤ p1 < 1, got p1={p1}, p2={p2}"
            )));
        }
        if t.len() < lambda.len() || a.len() < lambda.len() {
            return Err(Error::InvalidInstance(format!(
                "t and a must cover every head term: N={}, t has {}, a has {}",
                lambda.len(),
                t.len(),
                a.len()
            )));
        }
        Ok(HolderInstance {
            lambda,
            t,
            a,
            p1,
            p2,
        })
    }

    pub fn head_len(&self) -> usize {
        self.lambda.len()
    }

    pub fn q1(&self) -> f64 {
        self.p1 / (self.p1 - 1.0)
    }
}

/// Both sides of the reverse Hölder inequality
///
///   `(Σ_{i≤N} λ_i^{p1}·t_i·a_i^{1−p2})^{1/p1} · (Σ_i a_i)^{1/q1}
///      ≤ Σ_{i≤N} λ_i·t_i^{1/p1}·a_i^{(p1−p2)/p1}`.
///
/// Splitting `λ^{p1}·t·a^{1−p2}` into the p1-th power of a right-side
/// summand times `a^{1−p1}` and applying Hölder with exponents 1/p1 and
/// 1/(1−p1) proves it; the negative exponent q1 turns the a-factor around.
/// Equality holds at a single term with unit weights.
pub fn reverse_holder_sides(inst: &HolderInstance) -> (f64, f64) {
    let n = inst.head_len();
    let head: f64 = (0..n)
        .map(|i| inst.lambda[i].powf(inst.p1) * inst.t[i] * inst.a[i].powf(1.0 - inst.p2))
        .sum();
    let a_total: f64 = inst.a.iter().sum();
    let lhs = head.powf(1.0 / inst.p1) * a_total.powf(1.0 / inst.q1());
    let rhs: f64 = (0..n)
        .map(|i| {
            inst.lambda[i]
                * inst.t[i].powf(1.0 / inst.p1)
                * inst.a[i].powf((inst.p1 - inst.p2) / inst.p1)
        })
        .sum();
    (lhs, rhs)
}

/// Outcome of the summability bound check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketBound {
    pub lhs: f64,
    pub rhs: f64,
    pub passed: bool,
}

/// Check `|x|_{(p)} ≤ (Σ_i r_i)^{1−p} · ‖x‖_E^p` on a span vector.
///
/// Hölder with exponents 1/p and 1/(1−p) gives
/// `Σ|e*_i(x)|^p·d_i·r_i^{1−p} ≤ (Σ|e*_i(x)|·d_i)^p·(Σ d_i·r_i)^{1−p}`,
/// and `d_i ≤ 1/2` (from `‖e*_i‖_C ≥ 1`) bounds the second factor by the
/// full radius-series total.
pub fn verify_bracket_bound(
    basis: &LshBasis,
    x: &SparseVector,
    tol: Tolerance,
) -> Result<BracketBound> {
    let lhs = p_bracket_norm(basis, x, tol)?;
    let ne = norm_e(basis, x, None, tol)?;
    let p = basis.model.p;
    let rhs = basis.r_sum().powf(1.0 - p) * ne.powf(p);
    Ok(BracketBound {
        lhs,
        rhs,
        passed: tol.le(lhs, rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_lsh_basis, BasisParams};
    use crate::space::{BoundedBall, LpSpaceModel, SubspaceChain};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn single_term_unit_instance_is_tight() {
        let inst = HolderInstance::new(vec![1.0], vec![1.0], vec![1.0], 0.5, 0.5).unwrap();
        let (lhs, rhs) = reverse_holder_sides(&inst);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        assert_relative_eq!(lhs, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn two_term_instance_with_spare_tail() {
        // a has a tail entry beyond the head, so Σa = 1 exactly
        let inst = HolderInstance::new(
            vec![1.0, 1.0],
            vec![1.0, 1.0],
            vec![0.5, 0.25, 0.25],
            0.5,
            0.5,
        )
        .unwrap();
        let (lhs, rhs) = reverse_holder_sides(&inst);
        assert_relative_eq!(lhs, (0.5f64.sqrt() + 0.5).powi(2), max_relative = 1e-12);
        assert_relative_eq!(lhs, 1.45711, max_relative = 1e-5);
        assert_relative_eq!(rhs, 2.0, max_relative = 1e-12);
        assert!(lhs <= rhs);
    }

    #[test]
    fn holds_on_random_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let n = rng.random_range(1..=6usize);
            let extra = rng.random_range(0..=3usize);
            let lambda: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..10.0)).collect();
            let t: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..10.0)).collect();
            let a: Vec<f64> = (0..n + extra)
                .map(|_| rng.random_range(0.01..10.0))
                .collect();
            let p1 = rng.random_range(0.05..0.99);
            let p2 = rng.random_range(0.01..=1.0) * p1;
            let inst = HolderInstance::new(lambda, t, a, p1, p2).unwrap();
            let (lhs, rhs) = reverse_holder_sides(&inst);
            assert!(
                tol().le(lhs, rhs),
                "violated: lhs={lhs}, rhs={rhs}, inst={inst:?}"
            );
        }
    }

    #[test]
    fn scaling_lambda_scales_both_sides() {
        let inst = HolderInstance::new(
            vec![2.0, 3.0],
            vec![1.5, 0.5],
            vec![0.7, 0.2, 0.1],
            0.6,
            0.3,
        )
        .unwrap();
        let (lhs, rhs) = reverse_holder_sides(&inst);
        let scaled = HolderInstance::new(
            inst.lambda.iter().map(|v| 5.0 * v).collect(),
            inst.t.clone(),
            inst.a.clone(),
            inst.p1,
            inst.p2,
        )
        .unwrap();
        let (lhs5, rhs5) = reverse_holder_sides(&scaled);
        // both sides are 1-homogeneous in λ
        assert_relative_eq!(lhs5, 5.0 * lhs, max_relative = 1e-12);
        assert_relative_eq!(rhs5, 5.0 * rhs, max_relative = 1e-12);
    }

    #[test]
    fn instance_validation() {
        assert!(HolderInstance::new(vec![], vec![1.0], vec![1.0], 0.5, 0.5).is_err());
        assert!(HolderInstance::new(vec![1.0], vec![-1.0], vec![1.0], 0.5, 0.5).is_err());
        assert!(HolderInstance::new(vec![1.0], vec![1.0], vec![1.0], 0.5, 0.7).is_err());
        assert!(HolderInstance::new(vec![1.0], vec![1.0], vec![1.0], 1.0, 0.5).is_err());
        assert!(HolderInstance::new(vec![1.0, 1.0], vec![1.0], vec![1.0, 1.0], 0.5, 0.5).is_err());
        let json = r#"{"lambda":[1.0],"t":[2.0],"a":[1.0,3.0],"p1":0.5,"p2":0.25}"#;
        let inst: HolderInstance = serde_json::from_str(json).unwrap();
        assert_eq!(inst.head_len(), 1);
        assert!(serde_json::from_str::<HolderInstance>(
            r#"{"lambda":[1.0],"t":[0.0],"a":[1.0],"p1":0.5,"p2":0.25}"#
        )
        .is_err());
    }

    #[test]
    fn bracket_bound_on_default_basis() {
        let model = LpSpaceModel::new(0.5).unwrap();
        let ball = BoundedBall::new(1.0).unwrap();
        let params = BasisParams::defaults(&model);
        let basis =
            build_lsh_basis(&model, &ball, &SubspaceChain::Standard, &params, 6, tol()).unwrap();

        let b = verify_bracket_bound(&basis, &SparseVector::unit(1), tol()).unwrap();
        assert!(b.passed);
        assert_relative_eq!(b.lhs, 2f64.powf(-3.5), max_relative = 1e-12);
        // rhs = (1/3)^{1/2} · (1/2)^{1/2}
        assert_relative_eq!(
            b.rhs,
            (1.0f64 / 3.0).sqrt() * 0.5f64.sqrt(),
            max_relative = 1e-12
        );
        assert_relative_eq!(b.rhs, 0.40825, max_relative = 1e-5);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let nnz = rng.random_range(1..=4usize);
            let mut entries = Vec::new();
            for _ in 0..nnz {
                let i = rng.random_range(1..=6u32);
                let v = rng.random_range(-3.0..3.0f64);
                if v != 0.0 && !entries.iter().any(|&(j, _)| j == i) {
                    entries.push((i, v));
                }
            }
            let x = SparseVector::from_entries(entries).unwrap();
            let b = verify_bracket_bound(&basis, &x, tol()).unwrap();
            assert!(b.passed, "bound violated at {x:?}: {b:?}");
        }

        let zero = verify_bracket_bound(&basis, &SparseVector::zero(), tol()).unwrap();
        assert_eq!(zero.lhs, 0.0);
        assert!(zero.passed);
    }
}
