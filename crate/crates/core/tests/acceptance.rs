//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pdrbc::dm::{
    check_inner_subset_outer, check_type2_redundancy, trace_dm_region, Bound, Cardinalities, TraceOptions,
    Type2Aux as DmType2Aux,
};
use pdrbc::gaussian::{
    bhaskaran_region, closed_form_values, gaussian_mi_oracle, type1_constraints, type1_region, type2_constraints,
    type3_constraints, GaussianAux, GaussianParams, Type1Aux, Type2Aux,
};
use pdrbc::geometry::{
    canonical_rows, fm_eliminate_all, pareto_frontier, remove_redundant, subset_check, type1_split_system, RatePair,
    RateRegion,
};
use pdrbc::info::{Alphabets, CondPmf, DegradationType, DiscreteChannel, Pmf};
use pdrbc::sim::{simulate, SimAux, SimConfig};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn bit(p: f64, b: usize) -> f64 {
    if b == 1 {
        p
    } else {
        1.0 - p
    }
}

fn rand_pmf(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

fn sorted_noise(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let mut s = [0.0; 3].map(|_: f64| rng.random_range(0.05..5.0));
    s.sort_by(f64::total_cmp);
    s
}

fn fidelity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for ty in 0..3 {
        for _ in 0..100 {
            let p = rng.random_range(0.1..10.0);
            let pr = rng.random_range(0.1..10.0);
            let [lo, mid, hi] = sorted_noise(&mut rng);
            let (params, aux) = match ty {
                0 => (
                    GaussianParams::new(p, pr, mid, hi, lo).unwrap(),
                    GaussianAux::Type1(Type1Aux::new(rng.random(), rng.random(), rng.random(), rng.random()).unwrap()),
                ),
                1 => {
                    let (a, b): (f64, f64) = (rng.random(), rng.random());
                    (
                        GaussianParams::new(p, pr, lo, hi, mid).unwrap(),
                        GaussianAux::Type2(Type2Aux::new(a.min(b), a.max(b)).unwrap()),
                    )
                }
                _ => (
                    GaussianParams::new(p, pr, lo, mid, hi).unwrap(),
                    GaussianAux::Type3 { alpha: rng.random() },
                ),
            };
            let closed = closed_form_values(&params, &aux).unwrap();
            let oracle = gaussian_mi_oracle(&params, &aux).unwrap();
            for (k, v) in &closed {
                worst = worst.max((v - oracle[k]).abs());
            }
        }
    }
    verdict(worst <= 1e-9, format!("max |closed form - oracle| = {worst:.2e} over 300 points"))
}

fn tightness() -> Verdict {
    let sets = [(1.0, 1.0, 0.5, 1.0, 0.2), (2.0, 1.0, 1.0, 3.0, 0.5), (1.0, 4.0, 0.3, 0.6, 0.1)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, pr, s1, s2, s3) in sets {
        let params = GaussianParams::new(p, pr, s1, s2, s3).unwrap();
        let bha = bhaskaran_region(&params, 21).unwrap();
        let t1 = type1_region(&params, 21).unwrap();
        let fwd = subset_check(&bha, &t1, 64, 1e-6).unwrap();
        let rev = subset_check(&t1, &bha, 64, 5e-3).unwrap();
        pass &= fwd.holds && rev.holds;
        parts.push(format!(
            "({p},{pr},{s1},{s2},{s3}): bha<=t1 {:.2e}, t1<=bha {:.2e}",
            fwd.max_violation, rev.max_violation
        ));
    }
    verdict(pass, parts.join("; "))
}

fn fm_reproduction() -> Verdict {
    let sys = type1_split_system();
    let out = remove_redundant(&fm_eliminate_all(&sys, &["R1p", "R1pp"]).unwrap());
    let want: [(&[(&str, i64)], &[(&str, i64)]); 5] = [
        (&[("R2", 1)], &[("A3", 1)]),
        (&[("R1", 1), ("R2", 1)], &[("A4", 1)]),
        (&[("R1", 1), ("R2", 1)], &[("A2", 1)]),
        (&[("R1", 1), ("R2", 1)], &[("A1", 1), ("A3", 1)]),
        (&[("R1", 1), ("R2", 1)], &[("A3", 1), ("A5", 1)]),
    ];
    let got = out.canonical_ineqs();
    let pass = out.vars == ["R1", "R2"] && got == canonical_rows(&out, &want);
    verdict(pass, format!("{} rows: {}", got.len(), got.join(" | ")))
}

/// Binary channel with X − (X3,Y1) − Y3 − Y2 and relay-free downstream links.
fn type2_cascade(rng: &mut ChaCha8Rng) -> DiscreteChannel {
    let first: Vec<f64> = (0..4).map(|_| rng.random_range(0.01..0.99)).collect();
    let mid: Vec<f64> = (0..2).map(|_| rng.random_range(0.01..0.99)).collect();
    let last: Vec<f64> = (0..2).map(|_| rng.random_range(0.01..0.99)).collect();
    DiscreteChannel::from_fn(Alphabets::binary(), |x, x3, y1, y2, y3| {
        bit(first[x * 2 + x3], y1) * bit(mid[y1], y3) * bit(last[y3], y2)
    })
    .unwrap()
}

fn redundancy() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = f64::NEG_INFINITY;
    let mut holds = true;
    for _ in 0..50 {
        let ch = type2_cascade(&mut rng);
        let aux = DmType2Aux::new(
            Pmf::new(rand_pmf(&mut rng, 6), vec![3, 2]).unwrap(),
            CondPmf::new(3, 2, (0..3).flat_map(|_| rand_pmf(&mut rng, 2)).collect()).unwrap(),
        )
        .unwrap();
        let r = check_type2_redundancy(&ch, &aux).unwrap();
        holds &= r.lhs <= r.rhs + 1e-9;
        worst = worst.max(r.lhs - r.rhs);
    }
    verdict(holds, format!("max lhs - rhs = {worst:.3e} over 50 channels"))
}

fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|v| -v * v.log2()).sum()
}

/// Compositions of `total` into `parts` nonnegative integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Superposition region of the degraded broadcast channel X → Y1 → Y2,
/// enumerated directly over p(u, x) on the 1/res grid.
fn superposition_oracle(w1: &[[f64; 2]; 2], w2: &[[f64; 2]; 2], nu: usize, res: usize) -> RateRegion {
    let mut points = Vec::new();
    for c in compositions(res, nu * 2) {
        let pux: Vec<f64> = c.iter().map(|&k| k as f64 / res as f64).collect();
        let mut r1 = 0.0;
        let mut py2 = [0.0; 2];
        let mut h_y2_given_u = 0.0;
        for u in 0..nu {
            let pu = pux[u * 2] + pux[u * 2 + 1];
            if pu == 0.0 {
                continue;
            }
            let px = [pux[u * 2] / pu, pux[u * 2 + 1] / pu];
            let out = |w: &[[f64; 2]; 2]| [0, 1].map(|y| px[0] * w[0][y] + px[1] * w[1][y]);
            let (y1u, y2u) = (out(w1), out(w2));
            let h1_given_x = px[0] * entropy(&w1[0]) + px[1] * entropy(&w1[1]);
            r1 += pu * (entropy(&y1u) - h1_given_x);
            h_y2_given_u += pu * entropy(&y2u);
            py2[0] += pu * y2u[0];
            py2[1] += pu * y2u[1];
        }
        let r2 = entropy(&py2) - h_y2_given_u;
        points.push(RatePair::new(r1, r2));
    }
    RateRegion::from_points(pareto_frontier(points), "superposition oracle")
}

fn type3_channel() -> (DiscreteChannel, [[f64; 2]; 2], [[f64; 2]; 2]) {
    let (e1, e2, e3) = (0.1, 0.15, 0.2);
    let flip = |e: f64, a: usize, b: usize| if a == b { 1.0 - e } else { e };
    let sizes = Alphabets { x: 2, x3: 1, y1: 2, y2: 2, y3: 2 };
    let ch = DiscreteChannel::from_fn(sizes, |x, _, y1, y2, y3| flip(e1, x, y1) * flip(e2, y1, y2) * flip(e3, y2, y3))
        .unwrap();
    let w1 = [[1.0 - e1, e1], [e1, 1.0 - e1]];
    let e12 = e1 * (1.0 - e2) + (1.0 - e1) * e2;
    let w2 = [[1.0 - e12, e12], [e12, 1.0 - e12]];
    (ch, w1, w2)
}

fn degenerate_reduction() -> Verdict {
    let (ch, w1, w2) = type3_channel();
    let opts = TraceOptions::new(&ch, 6);
    let traced = trace_dm_region(&ch, DegradationType::TypeIII, Bound::Inner, &opts).unwrap();
    let oracle = superposition_oracle(&w1, &w2, opts.cards.u, 6);
    let a = subset_check(&traced, &oracle, 64, 1e-9).unwrap();
    let b = subset_check(&oracle, &traced, 64, 1e-9).unwrap();
    let v = a.max_violation.max(b.max_violation);
    verdict(
        a.holds && b.holds,
        format!("|U| = {}, max support gap {v:.2e}, {} frontier points", opts.cards.u, traced.boundary().len()),
    )
}

/// Binary channel with X − (X3,Y3) − Y1 − Y2.
fn type1_cascade(rng: &mut ChaCha8Rng) -> DiscreteChannel {
    let mut link = || -> Vec<f64> { (0..4).map(|_| rng.random_range(0.01..0.99)).collect() };
    let (l3, l1, l2) = (link(), link(), link());
    DiscreteChannel::from_fn(Alphabets::binary(), |x, x3, y1, y2, y3| {
        bit(l3[x * 2 + x3], y3) * bit(l1[y3 * 2 + x3], y1) * bit(l2[y1 * 2 + x3], y2)
    })
    .unwrap()
}

fn inner_outer() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::NEG_INFINITY;
    let mut holds = true;
    for _ in 0..10 {
        let ch = type1_cascade(&mut rng);
        let mut opts = TraceOptions::new(&ch, 4);
        opts.cards = Cardinalities { u: 2, v: 2 };
        opts.budget = 20_000_000;
        let r = check_inner_subset_outer(&ch, &opts, 1e-9).unwrap();
        holds &= r.holds;
        worst = worst.max(r.max_violation);
    }
    verdict(holds, format!("|U| = |V| = 2, max violation {worst:.3e} over 10 channels"))
}

struct SimCase {
    name: &'static str,
    params: GaussianParams,
    aux: SimAux,
    blocks: usize,
    corner: RatePair,
}

fn sim_cases() -> Vec<SimCase> {
    let p1 = GaussianParams::new(1.0, 1.0, 6.0, 12.0, 3.0).unwrap();
    let a1 = Type1Aux::new(0.2, 0.2, 0.5, 0.5).unwrap();
    let c1 = type1_constraints(&p1, &a1).unwrap();
    let r2 = c1.r2_cap.min(c1.sum_cap);
    let p2 = GaussianParams::new(1.0, 1.0, 4.0, 12.0, 6.0).unwrap();
    let a2 = Type2Aux::new(0.5, 0.9).unwrap();
    let (r1, r2a, r2b) = type2_constraints(&p2, &a2).unwrap();
    let p3 = GaussianParams::new(1.0, 1.0, 4.0, 8.0, 8.0).unwrap();
    let (t1, t2) = type3_constraints(&p3, 0.5).unwrap();
    vec![
        SimCase {
            name: "type1",
            params: p1,
            aux: SimAux::Type1(a1),
            blocks: 2,
            corner: RatePair::new(c1.r1_cap.min(c1.sum_cap - r2), r2),
        },
        SimCase { name: "type2", params: p2, aux: SimAux::Type2(a2), blocks: 3, corner: RatePair::new(r1, r2a.min(r2b)) },
        SimCase { name: "type3", params: p3, aux: SimAux::Type3 { alpha: 0.5 }, blocks: 3, corner: RatePair::new(t1, t2) },
    ]
}

const SIM_N: usize = 32;

/// Rate scaled by `frac`, rounded to whole bits per block.
fn scaled(rate: f64, frac: f64) -> f64 {
    (frac * SIM_N as f64 * rate).round() / SIM_N as f64
}

fn sim_config(case: &SimCase, frac: f64, seed: u64) -> SimConfig {
    SimConfig {
        params: case.params,
        aux: case.aux,
        n: SIM_N,
        blocks: case.blocks,
        r1: scaled(case.corner.r1, frac),
        r2: scaled(case.corner.r2, frac),
        split: None,
        trials: 200,
        seed,
    }
}

fn separation() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for case in sim_cases() {
        let mut wins = 0;
        let (mut lo_sum, mut hi_sum) = (0.0, 0.0);
        for s in 0..10u64 {
            let lo = simulate(&sim_config(&case, 0.5, 1000 + s)).unwrap();
            let hi = simulate(&sim_config(&case, 1.5, 2000 + s)).unwrap();
            wins += (lo.overall_error_rate < hi.overall_error_rate) as usize;
            lo_sum += lo.overall_error_rate;
            hi_sum += hi.overall_error_rate;
        }
        let zero = simulate(&sim_config(&case, 0.0, 7)).unwrap();
        pass &= wins >= 9 && zero.overall_errors == 0;
        let lo = sim_config(&case, 0.5, 0);
        let hi = sim_config(&case, 1.5, 0);
        parts.push(format!(
            "{} {wins}/10 (bits {}+{} vs {}+{}, mean err {:.3} vs {:.3}, zero-rate errors {})",
            case.name,
            lo.r1 * SIM_N as f64,
            lo.r2 * SIM_N as f64,
            hi.r1 * SIM_N as f64,
            hi.r2 * SIM_N as f64,
            lo_sum / 10.0,
            hi_sum / 10.0,
            zero.overall_errors
        ));
    }
    verdict(pass, parts.join("; "))
}

fn cli_outputs(dir: &Path, tag: usize) -> Vec<Vec<u8>> {
    let bin = env!("CARGO_BIN_EXE_pdrbc");
    let out = |name: &str| dir.join(format!("{name}-{tag}"));
    let channel = dir.join("type3.json");
    let sim = sim_cases().remove(2);
    let lo = sim_config(&sim, 0.5, 0);
    let hi = sim_config(&sim, 1.5, 0);
    let sweep = format!("{}:{},{}:{}", lo.r1, lo.r2, hi.r1, hi.r2);
    let commands: Vec<(Vec<String>, Vec<String>)> = vec![
        (
            "compare --a builtin:bhaskaran --b builtin:type1 --p 1 --pr 1 --s1 0.5 --s2 1 --s3 0.2 --grid 21 --out"
                .split(' ')
                .map(String::from)
                .chain([out("compare").display().to_string()])
                .collect(),
            vec![out("compare").display().to_string()],
        ),
        (
            "region-gaussian --type 1 --p 1 --pr 1 --s1 0.5 --s2 1 --s3 0.2 --grid 21 --out"
                .split(' ')
                .map(String::from)
                .chain([out("type1").display().to_string()])
                .collect(),
            vec![out("type1").display().to_string()],
        ),
        (
            vec![
                "region-dm".into(),
                "--channel".into(),
                channel.display().to_string(),
                "--type".into(),
                "3".into(),
                "--resolution".into(),
                "6".into(),
                "--out".into(),
                out("dm").display().to_string(),
            ],
            vec![out("dm").display().to_string()],
        ),
        (
            format!("simulate --scheme 3 --p 1 --s1 4 --s2 8 --alpha 0.5 --n {SIM_N} --blocks 3 --trials 200 --seed 5 --sweep {sweep} --csv")
                .split(' ')
                .map(String::from)
                .chain([out("sweep.csv").display().to_string(), "--out".into(), out("sweep.json").display().to_string()])
                .collect(),
            vec![out("sweep.csv").display().to_string(), out("sweep.json").display().to_string()],
        ),
    ];
    let mut bytes = Vec::new();
    for (args, files) in commands {
        let status = Command::new(bin).args(&args).status().expect("spawn pdrbc");
        assert!(status.success(), "pdrbc {args:?} exited with {status}");
        for f in files {
            bytes.push(std::fs::read(f).expect("read output"));
        }
    }
    bytes
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let (ch, _, _) = type3_channel();
    std::fs::write(dir.path().join("type3.json"), serde_json::to_string(&ch.to_file()).unwrap()).unwrap();
    let runs: Vec<Vec<Vec<u8>>> = (0..3).map(|t| cli_outputs(dir.path(), t)).collect();
    let same = runs[1] == runs[0] && runs[2] == runs[0];
    let sizes: Vec<usize> = runs[0].iter().map(|b| b.len()).collect();
    verdict(same, format!("{} output files x 3 runs, sizes {sizes:?}", sizes.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict, Duration); 8] = [
        ("gaussian formula fidelity", fidelity, Duration::from_secs(5)),
        ("type-I tightness", tightness, Duration::from_secs(120)),
        ("fourier-motzkin reproduction", fm_reproduction, Duration::from_secs(1)),
        ("type-II redundancy", redundancy, Duration::from_secs(30)),
        ("dm degenerate reduction", degenerate_reduction, Duration::from_secs(120)),
        ("inner within outer", inner_outer, Duration::from_secs(300)),
        ("simulation separation", separation, Duration::from_secs(600)),
        ("cli determinism", determinism, Duration::from_secs(900)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let took = start.elapsed();
        let pass = v.pass && took <= limit;
        failed += !pass as usize;
        println!(
            "criterion {} {name}: {} [{:.1}s, limit {}s] {}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            v.detail
        );
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
