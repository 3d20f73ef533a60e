use serde::Serialize;

use crate::gaussian::polygon_corners;
use crate::geometry::RatePair;
use crate::info::{conditional_mutual_information, DiscreteChannel, Pmf};

use super::aux::{FactorForm, Type1InnerAux, Type1OuterAux, Type2Aux, Type3Aux};
use super::DmError;

/// Largest dense (V, U, X3, X, Y1, Y2, Y3) joint the reference evaluator builds.
pub const MAX_DENSE_ENTRIES: usize = 1_000_000;

const V: usize = 0;
const U: usize = 1;
const X3: usize = 2;
const X: usize = 3;
const Y1: usize = 4;
const Y2: usize = 5;
const Y3: usize = 6;

/// Type-I polygon {R2 ≤ c_r2, R1 + R2 ≤ min(c_sum_a, c_sum_b, c_sum_c)}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Type1Values {
    /// I(U,V;Y2)
    pub c_r2: f64,
    /// I(U,V;Y2) + I(X;Y3|U,V,X3)
    pub c_sum_a: f64,
    /// I(U,V;Y2) + I(X,X3;Y1|U,V)
    pub c_sum_b: f64,
    /// I(X;Y3|V,X3)
    pub c_sum_c: f64,
}

impl Type1Values {
    pub fn sum_cap(&self) -> f64 {
        self.c_sum_a.min(self.c_sum_b).min(self.c_sum_c)
    }

    pub fn corners(&self) -> [RatePair; 2] {
        let s = self.sum_cap();
        polygon_corners(s, self.c_r2, s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Type2Values {
    /// I(X;Y1|U,X3)
    pub c_r1: f64,
    /// I(U,X3;Y2)
    pub c_r2a: f64,
    /// I(U;Y3|X3)
    pub c_r2b: f64,
}

impl Type2Values {
    pub fn corner(&self) -> RatePair {
        RatePair::new(self.c_r1, self.c_r2a.min(self.c_r2b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Type3Values {
    /// I(X;Y1|U, X3 = x3)
    pub c_r1: f64,
    /// I(U;Y2|X3 = x3)
    pub c_r2: f64,
}

impl Type3Values {
    pub fn corner(&self) -> RatePair {
        RatePair::new(self.c_r1, self.c_r2)
    }
}

/// The full joint over (V, U, X3, X, Y1, Y2, Y3).
pub fn dense_joint(ch: &DiscreteChannel, form: &FactorForm) -> Result<Pmf, DmError> {
    form.check_channel(ch)?;
    let q = form.joint();
    let outputs = ch.sizes().outputs();
    let entries = q.len() * outputs;
    if entries > MAX_DENSE_ENTRIES {
        return Err(DmError::TooLarge { entries });
    }
    let mut values = Vec::with_capacity(entries);
    for (i, &mass) in q.iter().enumerate() {
        let x = i % form.x;
        let x3 = (i / form.x) % form.x3;
        values.extend(ch.slice(x, x3).iter().map(|w| mass * w));
    }
    let s = ch.sizes();
    Ok(Pmf::new(values, vec![form.v, form.u, form.x3, form.x, s.y1, s.y2, s.y3])?)
}

fn cmi(j: &Pmf, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
    conditional_mutual_information(j, a, b, c).expect("fixed disjoint index sets")
}

fn type1_from_joint(j: &Pmf) -> Type1Values {
    let c_r2 = cmi(j, &[U, V], &[Y2], &[]);
    Type1Values {
        c_r2,
        c_sum_a: c_r2 + cmi(j, &[X], &[Y3], &[U, V, X3]),
        c_sum_b: c_r2 + cmi(j, &[X, X3], &[Y1], &[U, V]),
        c_sum_c: cmi(j, &[X], &[Y3], &[V, X3]),
    }
}

pub fn eval_type1_inner(ch: &DiscreteChannel, aux: &Type1InnerAux) -> Result<Type1Values, DmError> {
    Ok(type1_from_joint(&dense_joint(ch, &aux.factor_form())?))
}

pub fn eval_type1_outer(ch: &DiscreteChannel, aux: &Type1OuterAux) -> Result<Type1Values, DmError> {
    Ok(type1_from_joint(&dense_joint(ch, &aux.factor_form())?))
}

pub fn eval_type2(ch: &DiscreteChannel, aux: &Type2Aux) -> Result<Type2Values, DmError> {
    let j = dense_joint(ch, &aux.factor_form())?;
    Ok(Type2Values {
        c_r1: cmi(&j, &[X], &[Y1], &[U, X3]),
        c_r2a: cmi(&j, &[U, X3], &[Y2], &[]),
        c_r2b: cmi(&j, &[U], &[Y3], &[X3]),
    })
}

pub fn eval_type3(ch: &DiscreteChannel, aux: &Type3Aux) -> Result<Type3Values, DmError> {
    let j = dense_joint(ch, &aux.factor_form(ch.sizes().x3)?)?;
    // X3 is a point mass, so conditioning on it is conditioning on X3 = x3.
    Ok(Type3Values {
        c_r1: cmi(&j, &[X], &[Y1], &[U, X3]),
        c_r2: cmi(&j, &[U], &[Y2], &[X3]),
    })
}

/// I(X,X3;Y1) under a Type-II auxiliary law.
pub(crate) fn type2_sum_rhs(ch: &DiscreteChannel, aux: &Type2Aux) -> Result<f64, DmError> {
    let j = dense_joint(ch, &aux.factor_form())?;
    Ok(cmi(&j, &[X, X3], &[Y1], &[]))
}
