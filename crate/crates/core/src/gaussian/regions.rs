use rayon::prelude::*;
use serde::Serialize;

use super::{cap, sqrt0, GaussianError, GaussianParams, Type1Aux, Type2Aux};
use crate::geometry::{RatePair, RateRegion};
use crate::info::DegradationType;

pub const DEFAULT_GRID_1D: usize = 41;
pub const DEFAULT_GRID_4D: usize = 21;

/// Per-aux caps of a rectangle-with-sum-constraint polygon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Type1Caps {
    pub r1_cap: f64,
    pub r2_cap: f64,
    pub sum_cap: f64,
}

/// {0, 1/(n−1), …, 1}.
pub fn unit_grid(steps: usize) -> Result<Vec<f64>, GaussianError> {
    if steps < 2 {
        return Err(GaussianError::BadGrid(steps));
    }
    Ok((0..steps).map(|k| k as f64 / (steps - 1) as f64).collect())
}

/// The two nontrivial corners of {r1 ≤ a, r2 ≤ b, r1 + r2 ≤ s}.
pub fn polygon_corners(a: f64, b: f64, s: f64) -> [RatePair; 2] {
    let a1 = a.min(s);
    let b1 = b.min(s);
    [
        RatePair::new(a1, b.min(s - a1).max(0.0)),
        RatePair::new(a.min(s - b1).max(0.0), b1),
    ]
}

pub fn type1_constraints(p: &GaussianParams, a: &Type1Aux) -> Result<Type1Caps, GaussianError> {
    p.require(DegradationType::TypeI)?;
    let (pp, pr) = (p.p, p.pr);
    let (al, be, th, tr) = (a.alpha, a.beta, a.theta, a.theta_r);
    let private = th * pp + tr * pr + 2.0 * sqrt0(al * th * tr * pp * pr);
    let cloud = (1.0 - th) * pp + (1.0 - tr) * pr + 2.0 * sqrt0(be * (1.0 - th) * (1.0 - tr) * pp * pr);
    Ok(Type1Caps {
        r1_cap: cap((1.0 - al) * th * pp / p.sigma3sq).min(cap(private / p.sigma1sq)),
        r2_cap: cap(cloud / (private + p.sigma2sq)),
        sum_cap: cap(((1.0 - be) * (1.0 - th) * pp + (1.0 - al) * th * pp) / p.sigma3sq),
    })
}

/// Constraints of the Type-I region in its (γ, δ) parameterization.
pub fn bhaskaran_constraints(p: &GaussianParams, gamma: f64, delta: f64) -> Result<Type1Caps, GaussianError> {
    p.require(DegradationType::TypeI)?;
    let total = p.p + p.pr + 2.0 * sqrt0(gamma * p.p * p.pr);
    Ok(Type1Caps {
        r1_cap: cap(delta * total / p.sigma1sq),
        r2_cap: cap((1.0 - delta) * total / (delta * total + p.sigma2sq)),
        sum_cap: cap((1.0 - gamma) * p.p / p.sigma3sq),
    })
}

/// (R1 cap, R2 cap from receiver 2, R2 cap from relay decoding).
pub fn type2_constraints(p: &GaussianParams, a: &Type2Aux) -> Result<(f64, f64, f64), GaussianError> {
    p.require(DegradationType::TypeII)?;
    Ok((
        cap(a.alpha * p.p / p.sigma1sq),
        cap(((1.0 - a.alpha) * p.p + p.pr) / (a.alpha * p.p + p.sigma2sq)),
        cap((a.beta - a.alpha) * p.p / (a.alpha * p.p + p.sigma3sq)),
    ))
}

pub fn type3_constraints(p: &GaussianParams, alpha: f64) -> Result<(f64, f64), GaussianError> {
    p.require(DegradationType::TypeIII)?;
    Ok((
        cap(alpha * p.p / p.sigma1sq),
        cap((1.0 - alpha) * p.p / (alpha * p.p + p.sigma2sq)),
    ))
}

fn caps_corners(c: Type1Caps) -> [RatePair; 2] {
    polygon_corners(c.r1_cap, c.r2_cap, c.sum_cap)
}

pub fn type1_region(p: &GaussianParams, grid_steps: usize) -> Result<RateRegion, GaussianError> {
    p.require(DegradationType::TypeI)?;
    let g = unit_grid(grid_steps)?;
    let n = g.len();
    let points: Vec<RatePair> = (0..n * n)
        .into_par_iter()
        .flat_map_iter(|ab| {
            let g = &g;
            let (al, be) = (g[ab / n], g[ab % n]);
            (0..n * n).flat_map(move |tt| {
                let aux = Type1Aux { alpha: al, beta: be, theta: g[tt / n], theta_r: g[tt % n] };
                caps_corners(type1_constraints(p, &aux).expect("type checked above"))
            })
        })
        .collect();
    Ok(RateRegion::from_points(points, format!("gaussian type1 grid {grid_steps}")))
}

pub fn bhaskaran_region(p: &GaussianParams, grid_steps: usize) -> Result<RateRegion, GaussianError> {
    p.require(DegradationType::TypeI)?;
    let g = unit_grid(grid_steps)?;
    let mut points = Vec::with_capacity(2 * g.len() * g.len());
    for &gamma in &g {
        for &delta in &g {
            points.extend(caps_corners(bhaskaran_constraints(p, gamma, delta)?));
        }
    }
    Ok(RateRegion::from_points(points, format!("gaussian bhaskaran grid {grid_steps}")))
}

pub fn type2_region(p: &GaussianParams, grid_steps: usize) -> Result<RateRegion, GaussianError> {
    p.require(DegradationType::TypeII)?;
    let g = unit_grid(grid_steps)?;
    let mut points = Vec::new();
    for (i, &alpha) in g.iter().enumerate() {
        for &beta in &g[i..] {
            let (r1, r2a, r2b) = type2_constraints(p, &Type2Aux { alpha, beta })?;
            points.push(RatePair::new(r1, r2a.min(r2b)));
        }
    }
    Ok(RateRegion::from_points(points, format!("gaussian type2 grid {grid_steps}")))
}

pub fn type3_region(p: &GaussianParams, grid_steps: usize) -> Result<RateRegion, GaussianError> {
    p.require(DegradationType::TypeIII)?;
    let points = unit_grid(grid_steps)?
        .into_iter()
        .map(|alpha| type3_constraints(p, alpha).map(|(r1, r2)| RatePair::new(r1, r2)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RateRegion::from_points(points, format!("gaussian type3 grid {grid_steps}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{subset_check, SupportQuery};
    use crate::gaussian::c_fn;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn main_params() -> GaussianParams {
        GaussianParams::new(1.0, 1.0, 0.5, 1.0, 0.2).unwrap()
    }

    fn c(x: f64) -> f64 {
        c_fn(x).unwrap()
    }

    #[test]
    fn type1_constraint_examples() {
        let p = main_params();
        let caps = type1_constraints(&p, &Type1Aux::new(0.0, 0.0, 1.0, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(caps.r1_cap, c(4.0), epsilon = 1e-12);
        assert_abs_diff_eq!(caps.r1_cap, 1.160964047, epsilon = 1e-9);
        assert_eq!(caps.r2_cap, 0.0);
        assert_abs_diff_eq!(caps.sum_cap, 1.292481250, epsilon = 1e-9);

        let zero = type1_constraints(&p, &Type1Aux::new(0.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(zero.r1_cap, 0.0);
        let a1 = type1_constraints(&p, &Type1Aux::new(1.0, 0.3, 1.0, 0.5).unwrap()).unwrap();
        assert_eq!(a1.r1_cap, 0.0);

        let bad = GaussianParams::new(1.0, 1.0, 0.5, 1.0, 0.7).unwrap();
        assert!(matches!(
            type1_constraints(&bad, &Type1Aux::new(0.0, 0.0, 1.0, 1.0).unwrap()),
            Err(GaussianError::WrongType { .. })
        ));
    }

    #[test]
    fn type1_region_extremes() {
        let p = main_params();
        let r = type1_region(&p, 21).unwrap();
        assert!(r.boundary().iter().all(|q| q.r1 >= 0.0 && q.r2 >= 0.0));
        // Best single-user rate for receiver 1 sits at α = 0.05, θ = θr = 1:
        // min{C(0.95·5), C((2 + 2√0.05)/0.5)}.
        let best = c(0.95 * 5.0).min(c((2.0 + 2.0 * 0.05f64.sqrt()) / 0.5));
        assert_abs_diff_eq!(r.max_r1().unwrap(), best, epsilon = 1e-9);
        assert_abs_diff_eq!(r.max_r1().unwrap(), 1.26178098, epsilon = 1e-8);
        assert!(r.max_r1().unwrap() >= c(4.0));
        // R2 alone is limited by the sum constraint through σ3².
        let r2 = r.max_r2().unwrap();
        assert!(r2 <= c(4.0) + 1e-12);
        assert_abs_diff_eq!(r2, 1.03230624, epsilon = 1e-8);

        let coarse = type1_region(&p, 2).unwrap();
        assert!(!coarse.is_empty());
        assert!(matches!(type1_region(&p, 1), Err(GaussianError::BadGrid(1))));
    }

    #[test]
    fn bhaskaran_examples() {
        let p = main_params();
        let z = bhaskaran_constraints(&p, 1.0, 1.0).unwrap();
        assert_eq!(z.sum_cap, 0.0);
        assert_eq!(bhaskaran_constraints(&p, 0.3, 0.0).unwrap().r1_cap, 0.0);
        let e = bhaskaran_constraints(&p, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(e.r1_cap, c(4.0), epsilon = 1e-12);
        assert_abs_diff_eq!(e.sum_cap, c(5.0), epsilon = 1e-12);
    }

    #[test]
    fn type2_examples() {
        let p = GaussianParams::new(1.0, 1.0, 0.5, 1.0, 0.7).unwrap();
        let (r1, r2a, r2b) = type2_constraints(&p, &Type2Aux::new(0.5, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r1, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r2a, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r2b, c(0.5 / 1.2), epsilon = 1e-12);
        assert_abs_diff_eq!(r2b, 0.25126, epsilon = 1e-5);
        assert_eq!(type2_constraints(&p, &Type2Aux::new(0.0, 0.4).unwrap()).unwrap().0, 0.0);
        assert_eq!(type2_constraints(&p, &Type2Aux::new(0.4, 0.4).unwrap()).unwrap().2, 0.0);
        assert!(type2_region(&p, 41).unwrap().boundary().len() > 10);
    }

    #[test]
    fn type3_examples() {
        let p = GaussianParams::new(1.0, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(type3_constraints(&p, 1.0).unwrap(), (0.5, 0.0));
        let q = GaussianParams::new(1.0, 1.0, 0.25, 1.0, 2.0).unwrap();
        let (r1, r2) = type3_constraints(&q, 0.0).unwrap();
        assert_eq!((r1, r2), (0.0, c(1.0)));
        let (r1, r2) = type3_constraints(&q, 0.5).unwrap();
        assert_abs_diff_eq!(r1, 0.792481250, epsilon = 1e-9);
        // ᾱP/(αP + σ2²) = 0.5/1.5
        assert_abs_diff_eq!(r2, c(1.0 / 3.0), epsilon = 1e-12);
        assert_abs_diff_eq!(r2, 0.207518750, epsilon = 1e-9);

        let r = type3_region(&q, 41).unwrap();
        assert_eq!(r.boundary().len(), 41);
        assert!(r.boundary().iter().any(|b| (b.r1 - r1).abs() < 1e-12 && (b.r2 - r2).abs() < 1e-12));
    }

    #[test]
    fn type3_support_matches_dense_sweep() {
        let q = GaussianParams::new(1.0, 1.0, 0.25, 1.0, 2.0).unwrap();
        let w = SupportQuery::new(1.0, 1.0).unwrap();
        let dense = (0..=100_000)
            .map(|k| {
                let (a, b) = type3_constraints(&q, k as f64 / 100_000.0).unwrap();
                a + b
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let s = type3_region(&q, 401).unwrap().support(w).unwrap();
        assert!(s <= dense + 1e-12);
        assert!(dense - s < 1e-5);
    }

    #[test]
    fn type1_grid_refinement_is_monotone() {
        let p = main_params();
        let coarse = type1_region(&p, 6).unwrap();
        let fine = type1_region(&p, 11).unwrap();
        assert!(subset_check(&coarse, &fine, 64, 1e-12).unwrap().holds);
    }

    #[test]
    fn corners_respect_constraints() {
        let [a, b] = polygon_corners(1.0, 1.0, 1.5);
        assert_eq!((a.r1, a.r2), (1.0, 0.5));
        assert_eq!((b.r1, b.r2), (0.5, 1.0));
        let [a, b] = polygon_corners(2.0, 1.0, 0.5);
        assert_eq!((a.r1, a.r2), (0.5, 0.0));
        assert_eq!((b.r1, b.r2), (0.0, 0.5));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn type3_frontier_is_monotone_in_alpha(
            pp in 0.1f64..10.0, s1 in 0.05f64..1.0, extra in 0.0f64..2.0,
            a in 0.01f64..0.98, d in 0.001f64..0.01,
        ) {
            let q = GaussianParams::new(pp, 1.0, s1, s1 + extra, s1 + extra + 0.1).unwrap();
            let b = (a + d).min(0.999);
            let (r1a, r2a) = type3_constraints(&q, a).unwrap();
            let (r1b, r2b) = type3_constraints(&q, b).unwrap();
            prop_assert!(r1b > r1a);
            prop_assert!(r2b < r2a);
        }

        #[test]
        fn corners_are_inside_polygon(a in 0.0f64..3.0, b in 0.0f64..3.0, s in 0.0f64..3.0) {
            for q in polygon_corners(a, b, s) {
                prop_assert!(q.r1 <= a + 1e-15 && q.r2 <= b + 1e-15 && q.r1 + q.r2 <= s + 1e-12);
            }
        }
    }
}
