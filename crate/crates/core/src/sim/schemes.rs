use rand::Rng;

use super::codebook::{block_power, cascade_noise, ml_decode, Codebooks, Layer};
use super::{Plan, SimAux, TrialOutcome};
use crate::gaussian::{sqrt0, type2_relay_coherence};

fn draw(rng: &mut impl Rng, bits: u32) -> u64 {
    if bits == 0 {
        0
    } else {
        rng.random_range(0..1u64 << bits)
    }
}

fn add(out: &mut [f64], other: &[f64]) {
    out.iter_mut().zip(other).for_each(|(o, v)| *o += v);
}

/// Type I. Each block carries the triple t = (a, m2, c) with a the cloud
/// share of M1 and c the private share; its cloud index is (a, m2).
pub(crate) fn type1_trial(plan: &Plan, trial: u64) -> TrialOutcome {
    let cfg = &plan.cfg;
    let SimAux::Type1(aux) = cfg.aux else { unreachable!("checked by plan") };
    let [k1p, k2, k1pp] = plan.bits;
    let kc = k1p + k2;
    let k = kc + k1pp;
    let cloud_mask = (1u64 << kc) - 1;
    let n = cfg.n;
    let nb = cfg.blocks;
    let p = &cfg.params;
    let books = Codebooks::new(cfg.seed, trial, n);

    let std_v = sqrt0((1.0 - aux.theta_r) * p.pr);
    let std_w0 = sqrt0(aux.theta_r * p.pr);
    let std_w1 = sqrt0((1.0 - aux.beta) * (1.0 - aux.theta) * p.p);
    let std_w2 = sqrt0((1.0 - aux.alpha) * aux.theta * p.p);
    let rho2 = if aux.theta_r * p.pr > 0.0 { sqrt0(aux.alpha * aux.theta * p.p / (aux.theta_r * p.pr)) } else { 0.0 };
    let rho12 = if (1.0 - aux.theta_r) * p.pr > 0.0 {
        sqrt0(aux.beta * (1.0 - aux.theta) * p.p / ((1.0 - aux.theta_r) * p.pr))
    } else {
        0.0
    };
    let rho1 = rho12 - rho2;

    let mut msg_rng = books.rng(Layer::Messages, 0, 0);
    // triples[b] for b = 0..=B+1; the end blocks carry index 0.
    let mut triples = vec![0u64; nb + 2];
    for t in triples.iter_mut().take(nb + 1).skip(1) {
        let a = draw(&mut msg_rng, k1p);
        let m2 = draw(&mut msg_rng, k2);
        let c = draw(&mut msg_rng, k1pp);
        *t = a | m2 << k1p | c << kc;
    }
    let cloud = |t: u64| t & cloud_mask;

    // Source part of x whose messages the relay does not need: U and W2.
    let source_part = |b: usize, cur: u64, prev: u64, out: &mut [f64]| {
        books.add_word(Layer::W1, b, cloud(cur) | cloud(prev) << kc, std_w1, 1.0, out);
        books.add_word(Layer::W2, b, cur | prev << k, std_w2, 1.0, out);
    };

    let mut out = TrialOutcome::default();
    let mut relay_est = vec![0u64; nb + 2];
    let mut y1 = Vec::with_capacity(nb + 2);
    let mut y2 = Vec::with_capacity(nb + 2);
    for b in 1..=nb + 1 {
        let (cur, prev) = (triples[b], triples[b - 1]);
        let mut x = vec![0.0; n];
        books.add_word(Layer::V, b, cloud(prev), std_v, rho1 + rho2, &mut x);
        books.add_word(Layer::W0, b, prev, std_w0, rho2, &mut x);
        source_part(b, cur, prev, &mut x);
        let r_prev = relay_est[b - 1];
        let mut x3 = vec![0.0; n];
        books.add_word(Layer::V, b, cloud(r_prev), std_v, 1.0, &mut x3);
        books.add_word(Layer::W0, b, r_prev, std_w0, 1.0, &mut x3);
        out.tx_power.push(block_power(&x));
        out.relay_power.push(block_power(&x3));

        let [z1, z2, z3] = cascade_noise(&books, b, [p.sigma1sq, p.sigma2sq, p.sigma3sq]);
        let mut y3 = x.clone();
        add(&mut y3, &z3);
        let mut sum = x;
        add(&mut sum, &x3);
        let mut o1 = sum.clone();
        add(&mut o1, &z1);
        add(&mut sum, &z2);
        y1.push(o1);
        y2.push(sum);

        if b <= nb {
            // The relay knows its own past estimate, so the V and W0
            // contributions are fixed across candidates.
            let mut known = vec![0.0; n];
            books.add_word(Layer::V, b, cloud(r_prev), std_v, rho1 + rho2, &mut known);
            books.add_word(Layer::W0, b, r_prev, std_w0, rho2, &mut known);
            let (est, tied) = ml_decode(1 << k, &y3, |m, buf| {
                buf.copy_from_slice(&known);
                source_part(b, m, r_prev, buf);
            });
            relay_est[b] = est;
            out.ties += tied as u64;
            out.relay_err |= est != cur;
        }
    }

    // Backward decoding at receiver 1: block b reveals triple b − 1.
    let mut est1 = vec![0u64; nb + 2];
    for b in (2..=nb + 1).rev() {
        let cur = est1[b];
        let (est, tied) = ml_decode(1 << k, &y1[b - 1], |m, buf| {
            books.add_word(Layer::V, b, cloud(m), std_v, 1.0 + rho1 + rho2, buf);
            books.add_word(Layer::W0, b, m, std_w0, 1.0 + rho2, buf);
            source_part(b, cur, m, buf);
        });
        est1[b - 1] = est;
        out.ties += tied as u64;
    }
    // M1 is (a, c); m2 bits are not charged to receiver 1.
    let m1_mask = !(((1u64 << k2) - 1) << k1p);
    out.rx1_err = (1..=nb).any(|b| est1[b] & m1_mask != triples[b] & m1_mask);

    // Receiver 2 follows the clouds only, with W0 and W2 as noise.
    let mut est2 = vec![0u64; nb + 2];
    for b in (2..=nb + 1).rev() {
        let cur = est2[b];
        let (est, tied) = ml_decode(1 << kc, &y2[b - 1], |c, buf| {
            books.add_word(Layer::V, b, c, std_v, 1.0 + rho1 + rho2, buf);
            books.add_word(Layer::W1, b, cur | c << kc, std_w1, 1.0, buf);
        });
        est2[b - 1] = est;
        out.ties += tied as u64;
    }
    out.rx2_err = (1..=nb).any(|b| (est2[b] >> k1p) != (cloud(triples[b]) >> k1p));
    out
}

/// Type II. The relay forwards the previous M2 through X3; receiver 1
/// decodes jointly with the relay's index.
pub(crate) fn type2_trial(plan: &Plan, trial: u64) -> TrialOutcome {
    let cfg = &plan.cfg;
    let SimAux::Type2(aux) = cfg.aux else { unreachable!("checked by plan") };
    let [k1, k2, _] = plan.bits;
    let n = cfg.n;
    let nb = cfg.blocks;
    let p = &cfg.params;
    let books = Codebooks::new(cfg.seed, trial, n);

    let std_x3 = sqrt0(p.pr);
    let std_w1 = sqrt0((aux.beta - aux.alpha) * p.p);
    let std_w2 = sqrt0(aux.alpha * p.p);
    let rho1 = if p.pr > 0.0 { type2_relay_coherence(p, &aux) / p.pr } else { 0.0 };

    let mut msg_rng = books.rng(Layer::Messages, 0, 0);
    let mut m1 = vec![0u64; nb + 2];
    let mut m2 = vec![0u64; nb + 2];
    for b in 1..=nb {
        m1[b] = draw(&mut msg_rng, k1);
        m2[b] = draw(&mut msg_rng, k2);
    }
    let cloud = |b: usize, cur: u64, prev: u64, out: &mut [f64]| {
        books.add_word(Layer::W1, b, cur | prev << k2, std_w1, 1.0, out);
    };
    let satellite = |b: usize, m: u64, cur: u64, prev: u64, out: &mut [f64]| {
        books.add_word(Layer::W2, b, m | (cur | prev << k2) << k1, std_w2, 1.0, out);
    };

    let mut out = TrialOutcome::default();
    let mut relay_est = vec![0u64; nb + 2];
    let mut y1 = Vec::with_capacity(nb + 2);
    let mut y2 = Vec::with_capacity(nb + 2);
    for b in 1..=nb + 1 {
        let mut x = vec![0.0; n];
        books.add_word(Layer::X3, b, m2[b - 1], std_x3, rho1, &mut x);
        cloud(b, m2[b], m2[b - 1], &mut x);
        satellite(b, m1[b], m2[b], m2[b - 1], &mut x);
        let r_prev = relay_est[b - 1];
        let x3 = books.word(Layer::X3, b, r_prev, std_x3);
        out.tx_power.push(block_power(&x));
        out.relay_power.push(block_power(&x3));

        let [z1, z2, z3] = cascade_noise(&books, b, [p.sigma1sq, p.sigma2sq, p.sigma3sq]);
        let mut y3 = x.clone();
        add(&mut y3, &z3);
        let mut sum = x;
        add(&mut sum, &x3);
        let mut o1 = sum.clone();
        add(&mut o1, &z1);
        add(&mut sum, &z2);
        y1.push(o1);
        y2.push(sum);

        if b <= nb {
            let known = books.word(Layer::X3, b, r_prev, std_x3 * rho1);
            let (est, tied) = ml_decode(1 << k2, &y3, |m, buf| {
                buf.copy_from_slice(&known);
                cloud(b, m, r_prev, buf);
            });
            relay_est[b] = est;
            out.ties += tied as u64;
            out.relay_err |= est != m2[b];
        }
    }

    let mut est2 = vec![0u64; nb + 2];
    for b in (2..=nb + 1).rev() {
        let cur = est2[b];
        let (est, tied) = ml_decode(1 << k2, &y2[b - 1], |m, buf| {
            books.add_word(Layer::X3, b, m, std_x3, 1.0 + rho1, buf);
            cloud(b, cur, m, buf);
        });
        est2[b - 1] = est;
        out.ties += tied as u64;
    }
    out.rx2_err = (1..=nb).any(|b| est2[b] != m2[b]);

    // Receiver 1 searches (m1_b, m2_{b−1}) jointly, knowing m2_b from the
    // previous backward step.
    let mut e1 = vec![0u64; nb + 2];
    let mut e2 = vec![0u64; nb + 2];
    for b in (1..=nb + 1).rev() {
        let cur = e2[b];
        let b1 = if b == nb + 1 { 0 } else { k1 };
        let b2 = if b == 1 { 0 } else { k2 };
        let (est, tied) = ml_decode(1 << (b1 + b2), &y1[b - 1], |j, buf| {
            let (m, prev) = (j & ((1 << b1) - 1), j >> b1);
            books.add_word(Layer::X3, b, prev, std_x3, 1.0 + rho1, buf);
            cloud(b, cur, prev, buf);
            satellite(b, m, cur, prev, buf);
        });
        e1[b] = est & ((1 << b1) - 1);
        e2[b - 1] = est >> b1;
        out.ties += tied as u64;
    }
    out.rx1_err = (1..=nb).any(|b| e1[b] != m1[b]);
    out
}

/// Type III. Plain superposition coding; the relay stays silent and every
/// block is independent.
pub(crate) fn type3_trial(plan: &Plan, trial: u64) -> TrialOutcome {
    let cfg = &plan.cfg;
    let SimAux::Type3 { alpha } = cfg.aux else { unreachable!("checked by plan") };
    let [k1, k2, _] = plan.bits;
    let n = cfg.n;
    let p = &cfg.params;
    let books = Codebooks::new(cfg.seed, trial, n);
    let std_u = sqrt0((1.0 - alpha) * p.p);
    let std_w = sqrt0(alpha * p.p);
    let mut msg_rng = books.rng(Layer::Messages, 0, 0);

    let mut out = TrialOutcome::default();
    for b in 1..=cfg.blocks {
        let m1 = draw(&mut msg_rng, k1);
        let m2 = draw(&mut msg_rng, k2);
        let mut x = books.word(Layer::V, b, m2, std_u);
        books.add_word(Layer::W2, b, m1 | m2 << k1, std_w, 1.0, &mut x);
        out.tx_power.push(block_power(&x));
        out.relay_power.push(0.0);
        let [z1, z2, _] = cascade_noise(&books, b, [p.sigma1sq, p.sigma2sq, p.sigma3sq]);
        let mut y1 = x.clone();
        add(&mut y1, &z1);
        let mut y2 = x;
        add(&mut y2, &z2);

        let (e2, tied) = ml_decode(1 << k2, &y2, |m, buf| {
            books.add_word(Layer::V, b, m, std_u, 1.0, buf);
        });
        out.ties += tied as u64;
        out.rx2_err |= e2 != m2;

        let (j, tied) = ml_decode(1 << (k1 + k2), &y1, |j, buf| {
            books.add_word(Layer::V, b, j >> k1, std_u, 1.0, buf);
            books.add_word(Layer::W2, b, j, std_w, 1.0, buf);
        });
        out.ties += tied as u64;
        out.rx1_err |= j & ((1 << k1) - 1) != m1;
    }
    out
}
