use crate::info::{CondPmf, DiscreteChannel, Pmf, ZERO_MASS};

use super::DmError;

/// p(v) p(u|v) p(x3|v) p(x|u,x3). Rows of `p_x_given_ux3` are indexed
/// u·|X3| + x3.
#[derive(Debug, Clone, PartialEq)]
pub struct Type1InnerAux {
    pub p_v: Pmf,
    pub p_u_given_v: CondPmf,
    pub p_x3_given_v: CondPmf,
    pub p_x_given_ux3: CondPmf,
}

/// Which relay-input law the Type-I outer bound ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OuterFactorization {
    /// p(u,v) p(x3|u) p(x|u,x3), as the theorem is stated.
    Theorem,
    /// p(u,v) p(x3|u,v) p(x|u,x3), as the converse derives it.
    #[default]
    Derived,
}

#[derive(Debug, Clone, PartialEq)]
pub enum X3Law {
    /// Rows indexed by u.
    GivenU(CondPmf),
    /// Rows indexed by u·|V| + v.
    GivenUV(CondPmf),
}

/// p(u,v) p(x3|·) p(x|u,x3) with `p_uv` shaped [|U|, |V|].
#[derive(Debug, Clone, PartialEq)]
pub struct Type1OuterAux {
    pub p_uv: Pmf,
    pub p_x3: X3Law,
    pub p_x_given_ux3: CondPmf,
}

/// p(u,x3) p(x|u) with `p_ux3` shaped [|U|, |X3|].
#[derive(Debug, Clone, PartialEq)]
pub struct Type2Aux {
    pub p_ux3: Pmf,
    pub p_x_given_u: CondPmf,
}

/// A fixed relay symbol and p(u,x) shaped [|U|, |X|].
#[derive(Debug, Clone, PartialEq)]
pub struct Type3Aux {
    pub x3: usize,
    pub p_ux: Pmf,
}

/// Any auxiliary distribution produced by the enumerator.
#[derive(Debug, Clone, PartialEq)]
pub enum AuxDistribution {
    Type1Inner(Type1InnerAux),
    Type1Outer(Type1OuterAux),
    Type2(Type2Aux),
    Type3(Type3Aux),
}

/// Every auxiliary law reduced to b(v,u,x3) · t(x|u,x3).
#[derive(Debug, Clone, PartialEq)]
pub struct FactorForm {
    pub v: usize,
    pub u: usize,
    pub x3: usize,
    pub x: usize,
    /// Row-major over (v, u, x3).
    pub b: Vec<f64>,
    /// Row-major over (u, x3, x).
    pub t: Vec<f64>,
}

fn mismatch(what: &str, got: usize, want: usize) -> DmError {
    DmError::DimensionMismatch(format!("{what} has size {got}, expected {want}"))
}

/// p(x|u) from a joint p(u,x); rows with no mass become uniform.
pub(crate) fn conditional_rows(joint: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        let row = &joint[r * cols..(r + 1) * cols];
        let mass: f64 = row.iter().sum();
        for c in 0..cols {
            out[r * cols + c] = if mass > ZERO_MASS { row[c] / mass } else { 1.0 / cols as f64 };
        }
    }
    out
}

impl FactorForm {
    pub fn check_channel(&self, ch: &DiscreteChannel) -> Result<(), DmError> {
        let s = ch.sizes();
        if self.x != s.x {
            return Err(mismatch("auxiliary X alphabet", self.x, s.x));
        }
        if self.x3 != s.x3 {
            return Err(mismatch("auxiliary X3 alphabet", self.x3, s.x3));
        }
        Ok(())
    }

    /// q(v,u,x3,x) row-major.
    pub fn joint(&self) -> Vec<f64> {
        let mut q = Vec::with_capacity(self.b.len() * self.x);
        for v in 0..self.v {
            for u in 0..self.u {
                for x3 in 0..self.x3 {
                    let b = self.b[(v * self.u + u) * self.x3 + x3];
                    let t = &self.t[(u * self.x3 + x3) * self.x..][..self.x];
                    q.extend(t.iter().map(|p| b * p));
                }
            }
        }
        q
    }
}

impl Type1InnerAux {
    pub fn new(p_v: Pmf, p_u_given_v: CondPmf, p_x3_given_v: CondPmf, p_x_given_ux3: CondPmf) -> Result<Self, DmError> {
        let v = p_v.values().len();
        if p_v.rank() != 1 {
            return Err(DmError::DimensionMismatch("p(v) must be one-dimensional".into()));
        }
        for (what, rows) in [("p(u|v)", p_u_given_v.rows()), ("p(x3|v)", p_x3_given_v.rows())] {
            if rows != v {
                return Err(mismatch(what, rows, v));
            }
        }
        let want = p_u_given_v.cols() * p_x3_given_v.cols();
        if p_x_given_ux3.rows() != want {
            return Err(mismatch("p(x|u,x3) rows", p_x_given_ux3.rows(), want));
        }
        Ok(Self {
            p_v,
            p_u_given_v,
            p_x3_given_v,
            p_x_given_ux3,
        })
    }

    pub fn factor_form(&self) -> FactorForm {
        let (nv, nu, nx3) = (self.p_v.values().len(), self.p_u_given_v.cols(), self.p_x3_given_v.cols());
        let mut b = Vec::with_capacity(nv * nu * nx3);
        for v in 0..nv {
            for u in 0..nu {
                for x3 in 0..nx3 {
                    b.push(self.p_v.values()[v] * self.p_u_given_v.get(v, u) * self.p_x3_given_v.get(v, x3));
                }
            }
        }
        FactorForm {
            v: nv,
            u: nu,
            x3: nx3,
            x: self.p_x_given_ux3.cols(),
            b,
            t: self.p_x_given_ux3.values().to_vec(),
        }
    }

    /// The same joint written in the outer bound's derived form.
    pub fn to_outer(&self) -> Type1OuterAux {
        let (nv, nu) = (self.p_v.values().len(), self.p_u_given_v.cols());
        let mut p_uv = vec![0.0; nu * nv];
        let mut rows = Vec::with_capacity(nu * nv * self.p_x3_given_v.cols());
        for u in 0..nu {
            for v in 0..nv {
                p_uv[u * nv + v] = self.p_v.values()[v] * self.p_u_given_v.get(v, u);
                rows.extend_from_slice(self.p_x3_given_v.row(v));
            }
        }
        let x3 = CondPmf::new(nu * nv, self.p_x3_given_v.cols(), rows).expect("rows copied from a valid law");
        Type1OuterAux {
            p_uv: Pmf::from_parts_unchecked(p_uv, vec![nu, nv]),
            p_x3: X3Law::GivenUV(x3),
            p_x_given_ux3: self.p_x_given_ux3.clone(),
        }
    }
}

impl Type1OuterAux {
    pub fn new(p_uv: Pmf, p_x3: X3Law, p_x_given_ux3: CondPmf) -> Result<Self, DmError> {
        if p_uv.rank() != 2 {
            return Err(DmError::DimensionMismatch("p(u,v) must be two-dimensional".into()));
        }
        let (nu, nv) = (p_uv.shape()[0], p_uv.shape()[1]);
        let (rows, nx3) = match &p_x3 {
            X3Law::GivenU(c) => (c.rows(), c.cols()),
            X3Law::GivenUV(c) => (c.rows(), c.cols()),
        };
        let want = match p_x3 {
            X3Law::GivenU(_) => nu,
            X3Law::GivenUV(_) => nu * nv,
        };
        if rows != want {
            return Err(mismatch("p(x3|...) rows", rows, want));
        }
        if p_x_given_ux3.rows() != nu * nx3 {
            return Err(mismatch("p(x|u,x3) rows", p_x_given_ux3.rows(), nu * nx3));
        }
        Ok(Self {
            p_uv,
            p_x3,
            p_x_given_ux3,
        })
    }

    pub fn factor_form(&self) -> FactorForm {
        let (nu, nv) = (self.p_uv.shape()[0], self.p_uv.shape()[1]);
        let law = |u: usize, v: usize, x3: usize| match &self.p_x3 {
            X3Law::GivenU(c) => c.get(u, x3),
            X3Law::GivenUV(c) => c.get(u * nv + v, x3),
        };
        let nx3 = match &self.p_x3 {
            X3Law::GivenU(c) | X3Law::GivenUV(c) => c.cols(),
        };
        let mut b = Vec::with_capacity(nv * nu * nx3);
        for v in 0..nv {
            for u in 0..nu {
                for x3 in 0..nx3 {
                    b.push(self.p_uv.values()[u * nv + v] * law(u, v, x3));
                }
            }
        }
        FactorForm {
            v: nv,
            u: nu,
            x3: nx3,
            x: self.p_x_given_ux3.cols(),
            b,
            t: self.p_x_given_ux3.values().to_vec(),
        }
    }
}

impl Type2Aux {
    pub fn new(p_ux3: Pmf, p_x_given_u: CondPmf) -> Result<Self, DmError> {
        if p_ux3.rank() != 2 || p_ux3.shape()[0] != p_x_given_u.rows() {
            return Err(DmError::DimensionMismatch(format!(
                "p(u,x3) shape {:?} does not match {} rows of p(x|u)",
                p_ux3.shape(),
                p_x_given_u.rows()
            )));
        }
        Ok(Self { p_ux3, p_x_given_u })
    }

    pub fn factor_form(&self) -> FactorForm {
        let (nu, nx3) = (self.p_ux3.shape()[0], self.p_ux3.shape()[1]);
        let mut t = Vec::with_capacity(nu * nx3 * self.p_x_given_u.cols());
        for u in 0..nu {
            for _ in 0..nx3 {
                t.extend_from_slice(self.p_x_given_u.row(u));
            }
        }
        FactorForm {
            v: 1,
            u: nu,
            x3: nx3,
            x: self.p_x_given_u.cols(),
            b: self.p_ux3.values().to_vec(),
            t,
        }
    }
}

impl Type3Aux {
    pub fn new(x3: usize, p_ux: Pmf) -> Result<Self, DmError> {
        if p_ux.rank() != 2 {
            return Err(DmError::DimensionMismatch("p(u,x) must be two-dimensional".into()));
        }
        Ok(Self { x3, p_ux })
    }

    /// Factor form over a relay alphabet of size `nx3`, with all mass on `x3`.
    pub fn factor_form(&self, nx3: usize) -> Result<FactorForm, DmError> {
        if self.x3 >= nx3 {
            return Err(DmError::BadSymbol {
                symbol: self.x3,
                alphabet: nx3,
            });
        }
        let (nu, nx) = (self.p_ux.shape()[0], self.p_ux.shape()[1]);
        let given = conditional_rows(self.p_ux.values(), nu, nx);
        let mut b = vec![0.0; nu * nx3];
        let mut t = Vec::with_capacity(nu * nx3 * nx);
        for u in 0..nu {
            b[u * nx3 + self.x3] = self.p_ux.values()[u * nx..(u + 1) * nx].iter().sum();
            for _ in 0..nx3 {
                t.extend_from_slice(&given[u * nx..(u + 1) * nx]);
            }
        }
        Ok(FactorForm {
            v: 1,
            u: nu,
            x3: nx3,
            x: nx,
            b,
            t,
        })
    }
}
