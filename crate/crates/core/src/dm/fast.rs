//! Entropy evaluation that never materializes the full joint. Every
//! bound term involves a single channel output, so each one only needs
//! b(v,u,x3), t(x|u,x3) and the per-output marginal p(y_k|x,x3).

use std::f64::consts::LN_2;

use crate::info::{DiscreteChannel, Output, ZERO_MASS};

use super::aux::FactorForm;
use super::eval::{Type1Values, Type2Values, Type3Values};

pub(crate) const K1: usize = 0;
pub(crate) const K2: usize = 1;
pub(crate) const K3: usize = 2;

#[inline]
fn nlogn(p: f64) -> f64 {
    if p > ZERO_MASS {
        -p * p.ln()
    } else {
        0.0
    }
}

fn entropy_nats(row: &[f64]) -> f64 {
    row.iter().map(|&p| nlogn(p)).sum()
}

struct OutputTable {
    ny: usize,
    /// p(y|x,x3), row-major over (x, x3, y).
    w: Vec<f64>,
    /// H(Y|x,x3) in nats.
    h: Vec<f64>,
}

pub(crate) struct ChannelTables {
    nx: usize,
    nx3: usize,
    outs: [OutputTable; 3],
}

/// Per-(u, x3) output laws induced by one t(x|u,x3).
pub(crate) struct TTable {
    /// p(y_k|u,x3), row-major over (u, x3, y).
    r: [Vec<f64>; 3],
    /// H(Y_k|u,x3) in nats.
    hr: [Vec<f64>; 3],
    /// Σ_x t(x|u,x3) H(Y_k|x,x3) in nats.
    hbar: [Vec<f64>; 3],
}

impl ChannelTables {
    pub fn new(ch: &DiscreteChannel) -> Self {
        let s = ch.sizes();
        let table = |k: Output| {
            let m = ch.output_marginal(k);
            let h = (0..m.rows()).map(|r| entropy_nats(m.row(r))).collect();
            OutputTable {
                ny: m.cols(),
                w: m.values().to_vec(),
                h,
            }
        };
        Self {
            nx: s.x,
            nx3: s.x3,
            outs: [table(Output::Y1), table(Output::Y2), table(Output::Y3)],
        }
    }

    pub fn t_table(&self, t: &[f64], nu: usize) -> TTable {
        let (nx, nx3) = (self.nx, self.nx3);
        let mut r: [Vec<f64>; 3] = Default::default();
        let mut hr: [Vec<f64>; 3] = Default::default();
        let mut hbar: [Vec<f64>; 3] = Default::default();
        for k in 0..3 {
            let o = &self.outs[k];
            let mut rk = vec![0.0; nu * nx3 * o.ny];
            let mut hb = vec![0.0; nu * nx3];
            for u in 0..nu {
                for x3 in 0..nx3 {
                    let ux = u * nx3 + x3;
                    for x in 0..nx {
                        let p = t[ux * nx + x];
                        let row = (x * nx3 + x3) * o.ny;
                        for y in 0..o.ny {
                            rk[ux * o.ny + y] += p * o.w[row + y];
                        }
                        hb[ux] += p * o.h[x * nx3 + x3];
                    }
                }
            }
            hr[k] = rk.chunks(o.ny).map(entropy_nats).collect();
            r[k] = rk;
            hbar[k] = hb;
        }
        TTable { r, hr, hbar }
    }
}

/// Conditional entropies H(Y_k | S) in bits for one auxiliary law.
pub(crate) struct FastEval<'a> {
    tables: &'a ChannelTables,
    scratch: Vec<f64>,
    nv: usize,
    nu: usize,
}

impl<'a> FastEval<'a> {
    pub fn new(tables: &'a ChannelTables, nv: usize, nu: usize) -> Self {
        let ny = tables.outs.iter().map(|o| o.ny).max().unwrap_or(1);
        Self {
            tables,
            scratch: vec![0.0; nv * nu * tables.nx3 * ny],
            nv,
            nu,
        }
    }

    /// H(Y_k | group) where `key` maps (v, u, x3) to a group index.
    fn grouped(&mut self, b: &[f64], tt: &TTable, k: usize, groups: usize, key: impl Fn(usize, usize, usize) -> usize) -> f64 {
        let ny = self.tables.outs[k].ny;
        let nx3 = self.tables.nx3;
        let acc = &mut self.scratch[..groups * ny];
        acc.fill(0.0);
        let r = &tt.r[k];
        for v in 0..self.nv {
            for u in 0..self.nu {
                for x3 in 0..nx3 {
                    let mass = b[(v * self.nu + u) * nx3 + x3];
                    if mass <= ZERO_MASS {
                        continue;
                    }
                    let g = key(v, u, x3) * ny;
                    let row = (u * nx3 + x3) * ny;
                    for y in 0..ny {
                        acc[g + y] += mass * r[row + y];
                    }
                }
            }
        }
        let mut h = 0.0;
        for g in acc.chunks(ny) {
            let total: f64 = g.iter().sum();
            h += entropy_nats(g) - nlogn(total);
        }
        h / LN_2
    }

    fn weighted(&self, b: &[f64], per_ux3: &[f64]) -> f64 {
        let nx3 = self.tables.nx3;
        let block = self.nu * nx3;
        let mut h = 0.0;
        for v in 0..self.nv {
            for (i, &p) in per_ux3.iter().enumerate() {
                h += b[v * block + i] * p;
            }
        }
        h / LN_2
    }

    fn h_all(&self, b: &[f64], tt: &TTable, k: usize) -> f64 {
        self.weighted(b, &tt.hbar[k])
    }

    fn h_uvx3(&self, b: &[f64], tt: &TTable, k: usize) -> f64 {
        self.weighted(b, &tt.hr[k])
    }

    fn h_none(&mut self, b: &[f64], tt: &TTable, k: usize) -> f64 {
        self.grouped(b, tt, k, 1, |_, _, _| 0)
    }

    fn h_uv(&mut self, b: &[f64], tt: &TTable, k: usize) -> f64 {
        let nu = self.nu;
        self.grouped(b, tt, k, self.nv * nu, |v, u, _| v * nu + u)
    }

    fn h_vx3(&mut self, b: &[f64], tt: &TTable, k: usize) -> f64 {
        let nx3 = self.tables.nx3;
        self.grouped(b, tt, k, self.nv * nx3, |v, _, x3| v * nx3 + x3)
    }

    fn h_ux3(&mut self, b: &[f64], tt: &TTable, k: usize) -> f64 {
        let nx3 = self.tables.nx3;
        self.grouped(b, tt, k, self.nu * nx3, |_, u, x3| u * nx3 + x3)
    }

    fn h_x3(&mut self, b: &[f64], tt: &TTable, k: usize) -> f64 {
        self.grouped(b, tt, k, self.tables.nx3, |_, _, x3| x3)
    }

    pub fn type1(&mut self, b: &[f64], tt: &TTable) -> Type1Values {
        let all3 = self.h_all(b, tt, K3);
        let c_r2 = (self.h_none(b, tt, K2) - self.h_uv(b, tt, K2)).max(0.0);
        let a1 = (self.h_uvx3(b, tt, K3) - all3).max(0.0);
        let a5 = (self.h_uv(b, tt, K1) - self.h_all(b, tt, K1)).max(0.0);
        let c_sum_c = (self.h_vx3(b, tt, K3) - all3).max(0.0);
        Type1Values {
            c_r2,
            c_sum_a: c_r2 + a1,
            c_sum_b: c_r2 + a5,
            c_sum_c,
        }
    }

    pub fn type2(&mut self, b: &[f64], tt: &TTable) -> Type2Values {
        let ux3_2 = self.h_ux3(b, tt, K2);
        let ux3_3 = self.h_ux3(b, tt, K3);
        Type2Values {
            c_r1: (self.h_ux3(b, tt, K1) - self.h_all(b, tt, K1)).max(0.0),
            c_r2a: (self.h_none(b, tt, K2) - ux3_2).max(0.0),
            c_r2b: (self.h_x3(b, tt, K3) - ux3_3).max(0.0),
        }
    }

    pub fn type3(&mut self, b: &[f64], tt: &TTable) -> Type3Values {
        let ux3_2 = self.h_ux3(b, tt, K2);
        Type3Values {
            c_r1: (self.h_ux3(b, tt, K1) - self.h_all(b, tt, K1)).max(0.0),
            c_r2: (self.h_x3(b, tt, K2) - ux3_2).max(0.0),
        }
    }
}

/// One-shot helpers over a [`FactorForm`], used to cross-check the dense path.
#[cfg(test)]
pub(crate) fn fast_type1(ch: &DiscreteChannel, form: &FactorForm) -> Type1Values {
    let tables = ChannelTables::new(ch);
    let tt = tables.t_table(&form.t, form.u);
    FastEval::new(&tables, form.v, form.u).type1(&form.b, &tt)
}

#[cfg(test)]
pub(crate) fn fast_type2(ch: &DiscreteChannel, form: &FactorForm) -> Type2Values {
    let tables = ChannelTables::new(ch);
    let tt = tables.t_table(&form.t, form.u);
    FastEval::new(&tables, form.v, form.u).type2(&form.b, &tt)
}

pub(crate) fn fast_type3(ch: &DiscreteChannel, form: &FactorForm) -> Type3Values {
    let tables = ChannelTables::new(ch);
    let tt = tables.t_table(&form.t, form.u);
    FastEval::new(&tables, form.v, form.u).type3(&form.b, &tt)
}
