use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::{cap, regions, sqrt0, GaussianError, GaussianParams, Type1Aux, Type2Aux};

/// Auxiliary parameters of one of the three Gaussian constructions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussianAux {
    Type1(Type1Aux),
    Type2(Type2Aux),
    Type3 { alpha: f64 },
}

/// Jointly Gaussian variables written as linear combinations of
/// independent zero-mean sources.
struct Model {
    std: Vec<f64>,
    vars: BTreeMap<&'static str, Vec<f64>>,
}

impl Model {
    fn new(variances: &[f64]) -> Self {
        Self {
            std: variances.iter().map(|v| sqrt0(*v)).collect(),
            vars: BTreeMap::new(),
        }
    }

    fn source(&self, k: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.std.len()];
        e[k] = 1.0;
        e
    }

    fn define(&mut self, name: &'static str, coef: Vec<f64>) {
        self.vars.insert(name, coef);
    }

    fn whitened(&self, name: &str) -> DVector<f64> {
        let c = &self.vars[name];
        DVector::from_iterator(c.len(), c.iter().zip(&self.std).map(|(a, s)| a * s))
    }

    /// Var(y | given) as the squared residual of projecting y onto the
    /// span of the conditioning variables.
    fn conditional_variance(&self, y: &str, given: &[&str]) -> f64 {
        let yv = self.whitened(y);
        if given.is_empty() {
            return yv.norm_squared();
        }
        let cols: Vec<DVector<f64>> = given.iter().map(|g| self.whitened(g)).collect();
        let m = DMatrix::from_columns(&cols);
        let coef = m.clone().svd(true, true).solve(&yv, 1e-12).expect("svd with both factors");
        (yv - m * coef).norm_squared()
    }

    /// I(given_a; y | given_c) = ½ log2 Var(y|C) / Var(y|A,C).
    fn mi(&self, a: &[&str], y: &str, c: &[&str]) -> f64 {
        let mut ac: Vec<&str> = a.to_vec();
        ac.extend_from_slice(c);
        let outer = self.conditional_variance(y, c);
        let inner = self.conditional_variance(y, &ac);
        (0.5 * (outer / inner).log2()).max(0.0)
    }

    fn add_outputs(&mut self, z1: usize, z2: usize, z3: usize) {
        let x = self.vars["X"].clone();
        let x3 = self.vars["X3"].clone();
        let sum = |extra: usize| -> Vec<f64> {
            let e = self.source(extra);
            x.iter().zip(&x3).zip(&e).map(|((a, b), z)| a + b + z).collect()
        };
        let y1 = sum(z1);
        let y2 = sum(z2);
        let e3 = self.source(z3);
        let y3 = x.iter().zip(&e3).map(|(a, z)| a + z).collect();
        self.define("Y1", y1);
        self.define("Y2", y2);
        self.define("Y3", y3);
    }
}

fn gain(num: f64, den: f64, what: &str) -> Result<f64, GaussianError> {
    if den > 0.0 {
        Ok(sqrt0(num / den))
    } else if num <= 0.0 {
        Ok(0.0)
    } else {
        Err(GaussianError::DegenerateAux(format!("{what} has zero denominator")))
    }
}

/// c with c²/Pr + 2c = β̄P: the coherent relay share that keeps the
/// Type-II cloud at the power the region formula assumes.
pub fn type2_relay_coherence(p: &GaussianParams, a: &Type2Aux) -> f64 {
    p.pr * ((1.0 + (1.0 - a.beta) * p.p / p.pr).sqrt() - 1.0)
}

fn lincomb(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let n = terms[0].1.len();
    (0..n).map(|i| terms.iter().map(|(w, v)| w * v[i]).sum()).collect()
}

/// Every mutual-information term of the requested scheme, computed from
/// the covariance of the Gaussian auxiliary construction.
pub fn gaussian_mi_oracle(
    p: &GaussianParams,
    aux: &GaussianAux,
) -> Result<BTreeMap<&'static str, f64>, GaussianError> {
    let mut out = BTreeMap::new();
    match *aux {
        GaussianAux::Type1(a) => {
            let (pp, pr) = (p.p, p.pr);
            let rho2 = gain(a.alpha * a.theta * pp, a.theta_r * pr, "rho2")?;
            let rho12 = gain(a.beta * (1.0 - a.theta) * pp, (1.0 - a.theta_r) * pr, "rho1 + rho2")?;
            let rho1 = rho12 - rho2;
            // V, W0, W1, W2, Z1, Z2, Z3
            let mut m = Model::new(&[
                (1.0 - a.theta_r) * pr,
                a.theta_r * pr,
                (1.0 - a.beta) * (1.0 - a.theta) * pp,
                (1.0 - a.alpha) * a.theta * pp,
                p.sigma1sq,
                p.sigma2sq,
                p.sigma3sq,
            ]);
            let (v, w0, w1, w2) = (m.source(0), m.source(1), m.source(2), m.source(3));
            let u = lincomb(&[(rho1, &v), (1.0, &w1)]);
            let x3 = lincomb(&[(1.0, &v), (1.0, &w0)]);
            let x = lincomb(&[(1.0, &u), (rho2, &x3), (1.0, &w2)]);
            m.define("V", v);
            m.define("U", u);
            m.define("X3", x3);
            m.define("X", x);
            m.add_outputs(4, 5, 6);
            out.insert("I(X;Y3|U,V,X3)", m.mi(&["X"], "Y3", &["U", "V", "X3"]));
            out.insert("I(X,X3;Y1|U,V)", m.mi(&["X", "X3"], "Y1", &["U", "V"]));
            out.insert("I(U,V;Y2)", m.mi(&["U", "V"], "Y2", &[]));
            out.insert("I(X;Y3|V,X3)", m.mi(&["X"], "Y3", &["V", "X3"]));
        }
        GaussianAux::Type2(a) => {
            let c = type2_relay_coherence(p, &a);
            // X3, W1, W2, Z1, Z2, Z3
            let mut m = Model::new(&[
                p.pr,
                (a.beta - a.alpha) * p.p,
                a.alpha * p.p,
                p.sigma1sq,
                p.sigma2sq,
                p.sigma3sq,
            ]);
            let (x3, w1, w2) = (m.source(0), m.source(1), m.source(2));
            let u = lincomb(&[(c / p.pr, &x3), (1.0, &w1)]);
            let x = lincomb(&[(1.0, &u), (1.0, &w2)]);
            m.define("X3", x3);
            m.define("U", u);
            m.define("X", x);
            m.add_outputs(3, 4, 5);
            out.insert("I(X;Y1|U,X3)", m.mi(&["X"], "Y1", &["U", "X3"]));
            out.insert("I(U,X3;Y2)", m.mi(&["U", "X3"], "Y2", &[]));
            out.insert("I(U;Y3|X3)", m.mi(&["U"], "Y3", &["X3"]));
        }
        GaussianAux::Type3 { alpha } => {
            // U, W, Z1, Z2, Z3; the relay is silent.
            let mut m = Model::new(&[(1.0 - alpha) * p.p, alpha * p.p, p.sigma1sq, p.sigma2sq, p.sigma3sq]);
            let (u, w) = (m.source(0), m.source(1));
            let x = lincomb(&[(1.0, &u), (1.0, &w)]);
            m.define("U", u);
            m.define("X", x);
            m.define("X3", vec![0.0; 5]);
            m.add_outputs(2, 3, 4);
            out.insert("I(X;Y1|U,X3)", m.mi(&["X"], "Y1", &["U", "X3"]));
            out.insert("I(U;Y2|X3)", m.mi(&["U"], "Y2", &["X3"]));
        }
    }
    Ok(out)
}

/// The closed-form counterpart of every key returned by [`gaussian_mi_oracle`].
pub fn closed_form_values(
    p: &GaussianParams,
    aux: &GaussianAux,
) -> Result<BTreeMap<&'static str, f64>, GaussianError> {
    let mut out = BTreeMap::new();
    match *aux {
        GaussianAux::Type1(a) => {
            let caps = regions::type1_constraints(p, &a)?;
            let private = a.theta * p.p + a.theta_r * p.pr + 2.0 * sqrt0(a.alpha * a.theta * a.theta_r * p.p * p.pr);
            out.insert("I(X;Y3|U,V,X3)", cap((1.0 - a.alpha) * a.theta * p.p / p.sigma3sq));
            out.insert("I(X,X3;Y1|U,V)", cap(private / p.sigma1sq));
            out.insert("I(U,V;Y2)", caps.r2_cap);
            out.insert("I(X;Y3|V,X3)", caps.sum_cap);
        }
        GaussianAux::Type2(a) => {
            let (r1, r2a, r2b) = regions::type2_constraints(p, &a)?;
            out.insert("I(X;Y1|U,X3)", r1);
            out.insert("I(U,X3;Y2)", r2a);
            out.insert("I(U;Y3|X3)", r2b);
        }
        GaussianAux::Type3 { alpha } => {
            let (r1, r2) = regions::type3_constraints(p, alpha)?;
            out.insert("I(X;Y1|U,X3)", r1);
            out.insert("I(U;Y2|X3)", r2);
        }
    }
    Ok(out)
}
