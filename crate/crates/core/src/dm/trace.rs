use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{pareto_frontier, subset_check, RatePair, RateRegion};
use crate::info::{chain_deviations, DegradationType, DiscreteChannel, Pmf};

use super::aux::{OuterFactorization, Type2Aux, Type3Aux};
use super::enumerate::{check_budget, check_resolution, count_aux, factor_grids, AuxKind, Cardinalities, RowGrid, DEFAULT_BUDGET};
use super::eval::{eval_type2, type2_sum_rhs};
use super::fast::{fast_type3, ChannelTables, FastEval, TTable};
use super::DmError;

/// Tolerance on the Type-II chain deviations required by the redundancy check.
pub const DEGRADATION_TOL: f64 = 1e-9;

/// Largest number of t(x|u,x3) tables cached per trace.
const T_CACHE: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Bound {
    Inner,
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub cards: Cardinalities,
    pub resolution: usize,
    pub outer: OuterFactorization,
    pub budget: u64,
}

impl TraceOptions {
    pub fn new(ch: &DiscreteChannel, resolution: usize) -> Self {
        Self {
            cards: Cardinalities::default_for(ch.sizes()),
            resolution,
            outer: OuterFactorization::default(),
            budget: DEFAULT_BUDGET,
        }
    }
}

fn mixed_digits(mut index: usize, grids: &[RowGrid]) -> Vec<usize> {
    let mut d = vec![0; grids.len()];
    for (slot, g) in d.iter_mut().zip(grids).rev() {
        let c = g.count() as usize;
        *slot = index % c;
        index /= c;
    }
    d
}

/// Type I and II: enumerate b(v,u,x3) in the outer loop and t(x|u,x3) inside.
fn trace_factored(ch: &DiscreteChannel, kind: AuxKind, opts: &TraceOptions) -> Vec<RatePair> {
    let s = ch.sizes();
    let (nu, nv, nx3) = (opts.cards.u, opts.cards.v, s.x3);
    let grids = factor_grids(kind, opts.cards, s, opts.resolution);
    let (b_grids, t_grid) = grids.split_at(grids.len() - 1);
    let t_grid = &t_grid[0];
    let nb: usize = b_grids.iter().map(|g| g.count() as usize).product();
    let nt = t_grid.count() as usize;
    let ev_v = if kind == AuxKind::Type2 { 1 } else { nv };
    let tables = ChannelTables::new(ch);

    let expand = |raw: &[f64]| -> Vec<f64> {
        if kind != AuxKind::Type2 {
            return raw.to_vec();
        }
        // p(x|u) repeated for every x3
        let nx = s.x;
        let mut t = Vec::with_capacity(nu * nx3 * nx);
        for u in 0..nu {
            for _ in 0..nx3 {
                t.extend_from_slice(&raw[u * nx..(u + 1) * nx]);
            }
        }
        t
    };
    let t_table = |i: usize| tables.t_table(&expand(&t_grid.get(i)), nu);
    let cache: Option<Vec<TTable>> = (nt <= T_CACHE).then(|| (0..nt).map(t_table).collect());

    let build_b = |bi: usize, out: &mut Vec<f64>| {
        let d = mixed_digits(bi, b_grids);
        let first = b_grids[0].get(d[0]);
        out.clear();
        match kind {
            AuxKind::Type2 => out.extend_from_slice(&first),
            AuxKind::Type1Inner | AuxKind::Type1Outer(_) => {
                let x3 = b_grids[1].get(d[1]);
                let row = |u: usize, v: usize| match kind {
                    AuxKind::Type1Inner => v,
                    AuxKind::Type1Outer(OuterFactorization::Theorem) => u,
                    _ => u * nv + v,
                };
                for v in 0..nv {
                    for u in 0..nu {
                        for k in 0..nx3 {
                            out.push(first[u * nv + v] * x3[row(u, v) * nx3 + k]);
                        }
                    }
                }
            }
            AuxKind::Type3 => unreachable!("Type III is traced per relay symbol"),
        }
    };

    (0..nb)
        .into_par_iter()
        .fold(
            || (Vec::new(), FastEval::new(&tables, ev_v, nu), Vec::new()),
            |(mut acc, mut ev, mut b), bi| {
                build_b(bi, &mut b);
                for ti in 0..nt {
                    let owned;
                    let tt = match &cache {
                        Some(c) => &c[ti],
                        None => {
                            owned = t_table(ti);
                            &owned
                        }
                    };
                    match kind {
                        AuxKind::Type2 => acc.push(ev.type2(&b, tt).corner()),
                        _ => acc.extend(ev.type1(&b, tt).corners()),
                    }
                }
                if acc.len() > 4096 {
                    acc = pareto_frontier(acc);
                }
                (acc, ev, b)
            },
        )
        .map(|(acc, _, _)| pareto_frontier(acc))
        .reduce(Vec::new, |mut a, b| {
            a.extend(b);
            pareto_frontier(a)
        })
}

fn trace_type3(ch: &DiscreteChannel, opts: &TraceOptions) -> Vec<RatePair> {
    let s = ch.sizes();
    let grid = &factor_grids(AuxKind::Type3, opts.cards, s, opts.resolution)[0];
    let n = grid.count() as usize;
    let points: Vec<RatePair> = (0..s.x3 * n)
        .into_par_iter()
        .map(|i| {
            let aux = Type3Aux {
                x3: i / n,
                p_ux: Pmf::from_parts_unchecked(grid.get(i % n), vec![opts.cards.u, s.x]),
            };
            let form = aux.factor_form(s.x3).expect("relay symbol in range");
            fast_type3(ch, &form).corner()
        })
        .collect();
    pareto_frontier(points)
}

/// Union of per-auxiliary rate polygons over the grid, Pareto-pruned.
/// Types II and III are capacity results, so `bound` only matters for Type I.
pub fn trace_dm_region(
    ch: &DiscreteChannel,
    ty: DegradationType,
    bound: Bound,
    opts: &TraceOptions,
) -> Result<RateRegion, DmError> {
    check_resolution(opts.resolution)?;
    if opts.cards.u == 0 || opts.cards.v == 0 {
        return Err(DmError::BadCardinality);
    }
    let kind = match (ty, bound) {
        (DegradationType::TypeI, Bound::Inner) => AuxKind::Type1Inner,
        (DegradationType::TypeI, Bound::Outer) => AuxKind::Type1Outer(opts.outer),
        (DegradationType::TypeII, _) => AuxKind::Type2,
        (DegradationType::TypeIII, _) => AuxKind::Type3,
        (DegradationType::None, _) => return Err(DmError::NoBound),
    };
    check_budget(count_aux(kind, opts.cards, ch.sizes(), opts.resolution), opts.budget)?;
    let points = match kind {
        AuxKind::Type3 => trace_type3(ch, opts),
        _ => trace_factored(ch, kind, opts),
    };
    let tag = match kind {
        AuxKind::Type1Inner => "dm type1 inner".to_string(),
        AuxKind::Type1Outer(f) => format!("dm type1 outer ({f:?})"),
        AuxKind::Type2 => "dm type2".to_string(),
        AuxKind::Type3 => "dm type3".to_string(),
    };
    Ok(RateRegion::from_points(points, format!("{tag} resolution {}", opts.resolution)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerOuterReport {
    pub inner_points: usize,
    pub outer_points: usize,
    pub holds: bool,
    pub max_violation: f64,
    pub directions: usize,
}

/// Traces both Type-I bounds and compares their support functions over
/// 64 directions.
pub fn check_inner_subset_outer(ch: &DiscreteChannel, opts: &TraceOptions, tol: f64) -> Result<InnerOuterReport, DmError> {
    let inner = trace_dm_region(ch, DegradationType::TypeI, Bound::Inner, opts)?;
    let outer = trace_dm_region(ch, DegradationType::TypeI, Bound::Outer, opts)?;
    let r = subset_check(&inner, &outer, 64, tol)?;
    Ok(InnerOuterReport {
        inner_points: inner.boundary().len(),
        outer_points: outer.boundary().len(),
        holds: r.holds,
        max_violation: r.max_violation,
        directions: r.directions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RedundancyReport {
    /// I(U,X3;Y2) + I(X;Y1|U,X3)
    pub lhs: f64,
    /// I(X,X3;Y1)
    pub rhs: f64,
    pub holds: bool,
}

/// Checks that the Type-II sum-rate row is implied by the other rows.
pub fn check_type2_redundancy(ch: &DiscreteChannel, aux: &Type2Aux) -> Result<RedundancyReport, DmError> {
    let s = ch.sizes();
    let dev = chain_deviations(ch, &Pmf::uniform(&[s.x, s.x3]))?[1];
    let worst = dev[0].max(dev[1]);
    if worst > DEGRADATION_TOL {
        return Err(DmError::NotDegraded { deviation: worst });
    }
    let v = eval_type2(ch, aux)?;
    let lhs = v.c_r2a + v.c_r1;
    let rhs = type2_sum_rhs(ch, aux)?;
    Ok(RedundancyReport {
        lhs,
        rhs,
        holds: lhs <= rhs + DEGRADATION_TOL,
    })
}
