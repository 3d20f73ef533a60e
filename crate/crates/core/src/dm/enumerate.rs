use crate::info::{Alphabets, CondPmf, Pmf};

use super::aux::{
    conditional_rows, AuxDistribution, OuterFactorization, Type1InnerAux, Type1OuterAux, Type2Aux,
    Type3Aux, X3Law,
};
use super::DmError;

/// Cap on the number of auxiliary laws one enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Auxiliary alphabet sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cardinalities {
    pub u: usize,
    pub v: usize,
}

impl Cardinalities {
    /// |U| = min(|X||X3| + 1, 4), |V| = 2.
    pub fn default_for(sizes: Alphabets) -> Self {
        Self {
            u: (sizes.x * sizes.x3 + 1).min(4),
            v: 2,
        }
    }
}

/// Which auxiliary family to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxKind {
    Type1Inner,
    Type1Outer(OuterFactorization),
    Type2,
    Type3,
}

/// Number of points of the probability simplex on k symbols with every
/// coordinate a multiple of 1/n: C(n + k − 1, k − 1).
pub fn simplex_count(k: usize, n: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 1..k as u128 {
        c = c * (n as u128 + i) / i;
    }
    c
}

/// All such simplex points in lexicographic order of their integer numerators.
pub fn simplex_grid(k: usize, n: usize) -> Vec<Vec<f64>> {
    fn rec(k: usize, left: usize, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if k == 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&c| c as f64 / n as f64).collect());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(k - 1, left - c, n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 && n > 0 {
        rec(k, n, n, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Conditional laws with `rows` rows, each drawn from a common simplex grid.
#[derive(Debug, Clone)]
pub(crate) struct RowGrid {
    rows: usize,
    points: Vec<Vec<f64>>,
}

impl RowGrid {
    pub fn new(rows: usize, cols: usize, n: usize) -> Self {
        Self {
            rows,
            points: simplex_grid(cols, n),
        }
    }

    pub fn count(&self) -> u128 {
        (self.points.len() as u128).pow(self.rows as u32)
    }

    /// Row 0 is the most significant digit.
    pub fn fill(&self, mut index: usize, out: &mut Vec<f64>) {
        let base = self.points.len();
        let mut digits = vec![0; self.rows];
        for d in digits.iter_mut().rev() {
            *d = index % base;
            index /= base;
        }
        out.clear();
        for d in digits {
            out.extend_from_slice(&self.points[d]);
        }
    }

    pub fn get(&self, index: usize) -> Vec<f64> {
        let mut out = Vec::new();
        self.fill(index, &mut out);
        out
    }
}

pub(crate) fn check_resolution(n: usize) -> Result<(), DmError> {
    if n == 0 {
        Err(DmError::BadResolution(n))
    } else {
        Ok(())
    }
}

/// Factor grids of a family in enumeration order (last varies fastest).
pub(crate) fn factor_grids(kind: AuxKind, c: Cardinalities, s: Alphabets, n: usize) -> Vec<RowGrid> {
    let (nu, nv) = (c.u, c.v);
    match kind {
        AuxKind::Type1Inner => vec![
            RowGrid::new(1, nu * nv, n),
            RowGrid::new(nv, s.x3, n),
            RowGrid::new(nu * s.x3, s.x, n),
        ],
        AuxKind::Type1Outer(f) => {
            let x3_rows = match f {
                OuterFactorization::Theorem => nu,
                OuterFactorization::Derived => nu * nv,
            };
            vec![
                RowGrid::new(1, nu * nv, n),
                RowGrid::new(x3_rows, s.x3, n),
                RowGrid::new(nu * s.x3, s.x, n),
            ]
        }
        AuxKind::Type2 => vec![RowGrid::new(1, nu * s.x3, n), RowGrid::new(nu, s.x, n)],
        AuxKind::Type3 => vec![RowGrid::new(1, nu * s.x, n)],
    }
}

/// Closed-form size of an enumeration.
pub fn count_aux(kind: AuxKind, cards: Cardinalities, sizes: Alphabets, resolution: usize) -> u128 {
    let relay = if kind == AuxKind::Type3 { sizes.x3 as u128 } else { 1 };
    factor_grids(kind, cards, sizes, resolution)
        .iter()
        .fold(relay, |acc, g| acc.saturating_mul(g.count()))
}

pub(crate) fn check_budget(count: u128, budget: u64) -> Result<(), DmError> {
    if count > budget as u128 {
        Err(DmError::BudgetExceeded { count, budget })
    } else {
        Ok(())
    }
}

/// Deterministic stream of every auxiliary law on the grid.
pub struct AuxStream {
    kind: AuxKind,
    cards: Cardinalities,
    sizes: Alphabets,
    grids: Vec<RowGrid>,
    next: u128,
    count: u128,
}

impl AuxStream {
    pub fn len(&self) -> u128 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn decode(&self, mut index: u128) -> AuxDistribution {
        let mut digits = vec![0usize; self.grids.len()];
        for (d, g) in digits.iter_mut().zip(&self.grids).rev() {
            *d = (index % g.count()) as usize;
            index /= g.count();
        }
        let f: Vec<Vec<f64>> = digits.iter().zip(&self.grids).map(|(&d, g)| g.get(d)).collect();
        let (nu, nv, s) = (self.cards.u, self.cards.v, self.sizes);
        let cond = |rows, cols, v: &Vec<f64>| CondPmf::new(rows, cols, v.clone()).expect("grid rows sum to one");
        match self.kind {
            AuxKind::Type1Inner => {
                let joint = &f[0];
                let p_v: Vec<f64> = (0..nv).map(|v| (0..nu).map(|u| joint[u * nv + v]).sum()).collect();
                let mut by_v = vec![0.0; nv * nu];
                for u in 0..nu {
                    for v in 0..nv {
                        by_v[v * nu + u] = joint[u * nv + v];
                    }
                }
                AuxDistribution::Type1Inner(Type1InnerAux {
                    p_v: Pmf::from_parts_unchecked(p_v, vec![nv]),
                    p_u_given_v: cond(nv, nu, &conditional_rows(&by_v, nv, nu)),
                    p_x3_given_v: cond(nv, s.x3, &f[1]),
                    p_x_given_ux3: cond(nu * s.x3, s.x, &f[2]),
                })
            }
            AuxKind::Type1Outer(fac) => AuxDistribution::Type1Outer(Type1OuterAux {
                p_uv: Pmf::from_parts_unchecked(f[0].clone(), vec![nu, nv]),
                p_x3: match fac {
                    OuterFactorization::Theorem => X3Law::GivenU(cond(nu, s.x3, &f[1])),
                    OuterFactorization::Derived => X3Law::GivenUV(cond(nu * nv, s.x3, &f[1])),
                },
                p_x_given_ux3: cond(nu * s.x3, s.x, &f[2]),
            }),
            AuxKind::Type2 => AuxDistribution::Type2(Type2Aux {
                p_ux3: Pmf::from_parts_unchecked(f[0].clone(), vec![nu, s.x3]),
                p_x_given_u: cond(nu, s.x, &f[1]),
            }),
            AuxKind::Type3 => AuxDistribution::Type3(Type3Aux {
                x3: index as usize,
                p_ux: Pmf::from_parts_unchecked(f[0].clone(), vec![nu, s.x]),
            }),
        }
    }
}

impl Iterator for AuxStream {
    type Item = AuxDistribution;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.count {
            return None;
        }
        let item = self.decode(self.next);
        self.next += 1;
        Some(item)
    }
}

pub fn enumerate_aux(
    kind: AuxKind,
    cards: Cardinalities,
    sizes: Alphabets,
    resolution: usize,
    budget: u64,
) -> Result<AuxStream, DmError> {
    check_resolution(resolution)?;
    let count = count_aux(kind, cards, sizes, resolution);
    check_budget(count, budget)?;
    Ok(AuxStream {
        kind,
        cards,
        sizes,
        grids: factor_grids(kind, cards, sizes, resolution),
        next: 0,
        count,
    })
}
