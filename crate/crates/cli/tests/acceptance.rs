//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons
//! throughout. Runs as a plain binary (`harness = false`) so every line is
//! printed; the process exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use ellstab::euclid::{euclid_reduce, replay};
use ellstab::lattice::{
    delta, delta_e, dual_d, phi, phi_q, phihat, phihat_q, psi_m_closed, psi_m_diagram, shift1, tensor, ChernTable,
    Divisor, QTable, SurfaceGeometry,
};
use ellstab::matrix::Mat2;
use ellstab::rational::{fmt_q, half, q, qf, qz, Q, Z};
use ellstab::stability::{gieseker_bound, line_bundle_wall, onedim_bound, zerofiber_bound, StabParams};
use ellstab::transport::{
    check_constraints, forward_transport, intertwine_check, inverse_transport, transport_matrix, tx_transport, TxParams,
};
use ellstab::walls::{enumerate_walls, solve_wall, SearchBox, WallSolution};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_e11f;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn geometries() -> [SurfaceGeometry; 3] {
    [1, 2, 3].map(|e| SurfaceGeometry::new(e).unwrap())
}

fn rand_q(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Q {
    qf(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn rand_table(rng: &mut ChaCha8Rng) -> ChernTable {
    let s = qf(rng.gen_range(-200..=200), 2);
    ChernTable::from_i64(rng.gen_range(-50..=50), rng.gen_range(-50..=50), rng.gen_range(-50..=50), s)
}

/// Moves `s` into the class of `c₁²/2` so the table is the class of an object.
fn geometric(n: i64, d: i64, c: i64, shift: i64, g: SurfaceGeometry) -> ChernTable {
    let s = q(d * c) + g.half_e() * q(d * d) + q(shift);
    ChernTable::new(Z::from(n), Z::from(d), Z::from(c), s).unwrap()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0usize;
    for g in geometries() {
        for _ in 0..1000 {
            // all of ℤ⊕ℤ⊕ℤ⊕½ℤ through the rational extension
            let v = rand_table(&mut rng);
            let vq = QTable::from(&v);
            if phihat_q(&phi_q(&vq, g), g) != -&vq || phi_q(&phihat_q(&vq, g), g) != -&vq {
                return fail(format!("Φ̂Φ or ΦΦ̂ ≠ −id on {v}, e = {}", g.e));
            }
            if dual_d(&dual_d(&v)) != v {
                return fail(format!("dual twice ≠ id on {v}"));
            }
            let div = Divisor::ints(rng.gen_range(-20..=20), rng.gen_range(-20..=20));
            let round = tensor(&tensor(&v, &div, g).unwrap(), &-&div, g).unwrap();
            if round != v {
                return fail(format!("tensor(−D)∘tensor(D) ≠ id on {v}, D = {div}"));
            }
            // the same identities inside the lattice on classes of objects
            let w = geometric(
                rng.gen_range(-50..=50),
                rng.gen_range(-50..=50),
                rng.gen_range(-50..=50),
                rng.gen_range(-50..=50),
                g,
            );
            let (Ok(pw), Ok(hw)) = (phi(&w, g), phihat(&w, g)) else {
                return fail(format!("Φ or Φ̂ left the lattice on the geometric class {w}"));
            };
            if phihat(&pw, g).ok() != Some(shift1(&w)) || phi(&hw, g).ok() != Some(shift1(&w)) {
                return fail(format!("Φ̂Φ or ΦΦ̂ ≠ −id on {w}, e = {}", g.e));
            }
            checked += 2;
        }
    }
    pass(format!("{checked} tables across e ∈ {{1,2,3}}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut checked = 0usize;
    for g in geometries() {
        for m in 1..=5u64 {
            for _ in 0..500 {
                // n > d forces r ≥ 1 when m = 1
                let d = rng.gen_range(if m == 1 { 2 } else { 1 }..=60i64);
                let r = rng.gen_range(if m == 1 { 1 } else { 0 }..d);
                let n = m as i64 * d + r;
                let v = geometric(n, d, rng.gen_range(-100..=100), rng.gen_range(-100..=100), g);
                let closed = match psi_m_closed(&v, m, g) {
                    Ok(x) => x,
                    Err(e) => return fail(format!("closed form rejected {v}: {e}")),
                };
                let chain = match psi_m_diagram(&v, m, g) {
                    Ok(x) => x.output,
                    Err(e) => return fail(format!("diagram rejected {v}: {e}")),
                };
                // independent closed form: (r, d, c − m(s + e·r) − (e/2)·d·m², s)
                let mz = Z::from(m);
                let cq = qz(&v.c) - qz(&mz) * (&v.s + g.eq() * q(r)) - g.half_e() * q(d) * qz(&(&mz * &mz));
                if closed != chain
                    || closed.n != Z::from(r)
                    || closed.d != v.d
                    || qz(&closed.c) != cq
                    || closed.s != v.s
                {
                    return fail(format!("Ψ_{m} mismatch on {v}: closed {closed}, chain {chain}"));
                }
                checked += 1;
            }
        }
    }
    pass(format!("{checked} (v, m, e) triples"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    for i in 0..500 {
        let g = geometries()[i % 3];
        let e = g.eq();
        let abar = qf(rng.gen_range(1..=60), rng.gen_range(1..=12));
        let pbar = if i % 5 == 0 { q(0) } else { rand_q(&mut rng, 40, 12) };
        let qbar = rand_q(&mut rng, 40, 12);
        let bbar = if i % 7 == 0 { e.clone() } else { &e + qf(rng.gen_range(0..=60), rng.gen_range(1..=12)) };
        let res = match forward_transport(&abar, &pbar, &qbar, &bbar, g) {
            Ok(r) => r,
            Err(err) => return fail(format!("forward transport rejected ({abar}, {pbar}, {qbar}, {bbar}): {err}")),
        };
        let (bar, un) = (&res.barred, &res.unbarred);
        let tag = format!("ā={}, p̄={}, q̄={}, b̄={}, e={}", fmt_q(&abar), fmt_q(&pbar), fmt_q(&qbar), fmt_q(&bbar), g.e);
        if !check_constraints(bar, un, g).all() {
            return fail(format!("constraints fail at {tag}"));
        }
        let (ubar, vbar) = (q(2) * &abar + &e, q(2) * &bbar - &e);
        let (u, v) = (q(2) * &un.a + &e, q(2) * &un.b - &e);
        if &u * &v != &ubar * &vbar {
            return fail(format!("UV ≠ ŪV̄ at {tag}"));
        }
        let t = transport_matrix(&un.p, &pbar);
        if !t.det().is_one() || t != res.t {
            return fail(format!("det T ≠ 1 at {tag}"));
        }
        match inverse_transport(&un.a, &un.p, &un.q, &un.b, g) {
            Ok(back) if back.barred == StabParams::new(abar.clone(), pbar.clone(), qbar.clone(), bbar.clone()) => {}
            _ => return fail(format!("inverse∘forward ≠ id at {tag}")),
        }
        if !intertwine_check(&res, g) {
            return fail(format!("intertwining fails at {tag}"));
        }
        if pbar.is_zero() && (v != ubar || u != vbar || !un.p.is_zero() || un.q != &qbar - g.half_e()) {
            return fail(format!("p̄ = 0 specialization fails at {tag}"));
        }
    }
    pass("500 parameter sets")
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let g = SurfaceGeometry::k3();
    let mut done = 0;
    while done < 100 {
        let lambda = rand_q(&mut rng, 30, 8);
        if (q(2) * &lambda).is_integer() {
            continue;
        }
        let z = &lambda * &lambda + qf(rng.gen_range(1..=80), rng.gen_range(1..=10));
        let params = match TxParams::infer(lambda.clone(), z.clone()) {
            Ok(p) => p,
            Err(e) => return fail(format!("rejected λ = {}, z = {}: {e}", fmt_q(&lambda), fmt_q(&z))),
        };
        let res = match tx_transport(&params, g) {
            Ok(r) => r,
            Err(e) => return fail(format!("λ = {}, z = {}: {e}", fmt_q(&lambda), fmt_q(&z))),
        };
        let tr = &res.transport;
        let z1 = &z + q(1);
        let expected = StabParams::new(
            -(&lambda * &lambda) / &z1,
            -(&lambda / &z1),
            -(&lambda / &z1) - (&lambda + q(1)),
            &z + q(2),
        );
        let barred = StabParams::new(&z - &lambda * &lambda, lambda.clone(), q(0), q(2));
        let t = Mat2::new(&lambda / &z1, q(1) - &lambda * &lambda / &z1, q(-1), lambda.clone());
        let window = q(-1) + q(1) / &z1 < expected.a && expected.a.is_negative();
        if tr.unbarred != expected || tr.barred != barred || tr.t != t || !window || !intertwine_check(tr, g) {
            return fail(format!("λ = {}, z = {}", fmt_q(&lambda), fmt_q(&z)));
        }
        done += 1;
    }
    pass("100 (λ, z) pairs")
}

fn criterion_5() -> Outcome {
    let g = SurfaceGeometry::k3();
    let b = q(3);
    let search = SearchBox::symmetric(10, 10, 30);
    let mut lines = Vec::new();
    let mut total_walls = 0usize;
    let mut check = |label: String, v: &ChernTable, b_field: &Divisor, bound: Q| -> Result<(), String> {
        let report = enumerate_walls(v, b_field, &b, &search, g).map_err(|e| format!("{label}: {e}"))?;
        let max = report.walls.iter().map(|w| &w.a).filter(|a| a.is_positive()).max().cloned();
        total_walls += report.walls.len();
        if let Some(m) = &max {
            if m >= &bound {
                return Err(format!("{label}: wall at {} ≥ bound {}", fmt_q(m), fmt_q(&bound)));
            }
        }
        lines.push(format!(
            "{label}: {} walls, max {}, bound {}",
            report.walls.len(),
            max.as_ref().map_or("none".into(), fmt_q),
            fmt_q(&bound)
        ));
        Ok(())
    };
    let zero = Divisor::zero();
    for v in [ChernTable::ints(1, 1, 0, 0), ChernTable::ints(2, 1, 0, 0), ChernTable::ints(2, 1, 1, -1)] {
        let bound = match gieseker_bound(&v, &zero, &b, g) {
            Ok(x) => x,
            Err(e) => return fail(format!("gieseker bound for {v}: {e}")),
        };
        if let Err(e) = check(format!("gieseker {v}"), &v, &zero, bound) {
            return fail(e);
        }
    }
    for v in [ChernTable::ints(0, 0, 1, 0), ChernTable::ints(0, 1, 1, 0), ChernTable::ints(0, 2, 1, 0)] {
        for pbar in [q(-1), q(0), half()] {
            let b_field = Divisor::new(pbar.clone(), q(0));
            let bound = match onedim_bound(&v, &b_field, &b, g) {
                Ok(x) => x,
                Err(e) => return fail(format!("onedim bound for {v} at p̄ = {}: {e}", fmt_q(&pbar))),
            };
            if let Err(e) = check(format!("onedim {v} p̄={}", fmt_q(&pbar)), &v, &b_field, bound) {
                return fail(e);
            }
        }
    }
    let zero_fiber_cases = [
        (ChernTable::ints(2, 0, 3, 0), q(0)),
        (ChernTable::ints(2, 0, 3, 0), q(-1)),
        (ChernTable::ints(3, 0, 2, -1), q(0)),
        (ChernTable::ints(3, 0, 4, -2), half()),
        (ChernTable::ints(3, 0, 4, -2), q(-1)),
    ];
    for (v, lambda) in zero_fiber_cases {
        let bound = match zerofiber_bound(&v, &lambda, &b, g) {
            Ok(x) => x,
            Err(e) => return fail(format!("zero-fiber bound for {v}: {e}")),
        };
        let b_field = Divisor::new(q(0), lambda.clone());
        if let Err(e) = check(format!("zerofiber {v} λ={}", fmt_q(&lambda)), &v, &b_field, bound) {
            return fail(e);
        }
    }
    if total_walls == 0 {
        return fail("no walls found in any box; the check is vacuous".to_string());
    }
    pass(lines.join("; "))
}

/// Least `k` with `φ^k ≥ m`, exactly: `φ^k = F_k·φ + F_{k−1}`.
fn ceil_log_phi(m: u64) -> u64 {
    let (mut f_prev, mut f) = (1i128, 0i128); // F_{-1}, F_0
    let m = m as i128;
    for k in 0.. {
        // F_k·(1+√5)/2 + F_{k−1} ≥ m  ⇔  F_k·√5 ≥ 2(m − F_{k−1}) − F_k
        let rhs = 2 * (m - f_prev) - f;
        if rhs <= 0 || 5 * f * f >= rhs * rhs {
            return k;
        }
        (f_prev, f) = (f, f + f_prev);
    }
    unreachable!()
}

fn criterion_6() -> Outcome {
    let g = SurfaceGeometry::k3();
    let t = match euclid_reduce(&ChernTable::ints(2, 5, 0, 3), g) {
        Ok(t) => t,
        Err(e) => return fail(format!("worked example: {e}")),
    };
    let de = q(30);
    let example_ok = t.moves.len() == 2
        && t.moves[0].after == ChernTable::ints(2, 1, 8, -5)
        && t.final_table == ChernTable::ints(1, 2, 2, -8)
        && t.lambda == Divisor::ints(2, 6)
        && t.k == Z::from(16)
        && t.moves.iter().all(|m| delta_e(&m.before, g) == de && delta_e(&m.after, g) == de)
        && replay(&t, g).unwrap_or(false);
    if !example_ok {
        return fail("worked example (2,5,0,3) does not reproduce");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut done = 0;
    let mut longest = 0;
    while done < 500 {
        let g = geometries()[done % 3];
        let (n, d) = (rng.gen_range(1..=1000i64), rng.gen_range(1..=1000i64));
        if num_integer::gcd(n, d) != 1 || (n == d && n != 1) {
            continue;
        }
        let c = rng.gen_range(-1000..=1000i64);
        // s = c₁²/2 − t with t large enough for Δ_e ≥ 0
        let c1_half = Z::from(d) * Z::from(c) + (g.half_e() * q(d * d)).floor().to_integer();
        let frac = g.half_e() * q(d * d) - (g.half_e() * q(d * d)).floor();
        let need = (g.eq() * q(n * n) - q(1 - n) * (q(2 * d * c) + g.eq() * q(d * d))) / q(2 * n);
        let t = need.ceil().to_integer() + Z::from(rng.gen_range(0..=100));
        let s = qz(&(&c1_half - &t)) + frac;
        let v = ChernTable::new(Z::from(n), Z::from(d), Z::from(c), s).unwrap();
        let de = delta_e(&v, g);
        if de.is_negative() {
            return fail(format!("generator produced Δ_e < 0 for {v}"));
        }
        let trace = match euclid_reduce(&v, g) {
            Ok(t) => t,
            Err(e) => return fail(format!("{v}, e = {}: {e}", g.e)),
        };
        let bound = 2 * ceil_log_phi(n.max(d) as u64) + 2;
        longest = longest.max(trace.moves.len());
        let ok = (trace.moves.len() as u64) <= bound
            && trace.final_table.n.is_one()
            && trace.moves.iter().all(|m| delta_e(&m.after, g) == de)
            && delta(&trace.final_table, g) == qz(&(Z::from(2) * &trace.k))
            && !trace.k.is_negative()
            && replay(&trace, g).unwrap_or(false);
        if !ok {
            return fail(format!("{v}, e = {}: {} moves (bound {bound})", g.e, trace.moves.len()));
        }
        done += 1;
    }
    pass(format!("worked example + 500 random reductions, longest {longest} moves"))
}

fn line_bundle_table(l: &Divisor, g: SurfaceGeometry) -> ChernTable {
    let c1_theta = l.dot_theta(g);
    ChernTable::new(Z::one(), l.alpha.to_integer(), c1_theta.to_integer(), l.square(g) * half()).unwrap()
}

fn criterion_7() -> (Outcome, Outcome) {
    let g = SurfaceGeometry::k3();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut violations = Vec::new();
    let (mut samples, mut beyond_threshold, mut beyond_violations) = (0, 0, 0);
    for _ in 0..50 {
        let l = Divisor::ints(rng.gen_range(1..=8), rng.gen_range(-40..=40));
        for bb in 3..=22 {
            let bbar = q(bb);
            let rec = match line_bundle_wall(&l, &bbar, g) {
                Ok(r) => r,
                Err(e) => return (fail(format!("{l}: {e}")), fail("not run")),
            };
            // oracle: the wall of L(−Θ) ⊂ L on the a-ray at B = 0, ω = Θ + b̄f
            let sub = line_bundle_table(&(&l + &-&Divisor::theta()), g);
            let oracle = solve_wall(&line_bundle_table(&l, g), &sub, &Divisor::zero(), &bbar, g);
            if !matches!(&oracle, Ok(WallSolution::WallAt { a }) if a == &rec.formula_value) {
                return (
                    fail(format!("wall formula disagrees with the a-ray solve for {l}, b̄ = {bb}")),
                    fail("not run"),
                );
            }
            samples += 1;
            if !rec.dominated() {
                violations.push(format!(
                    "L = {l}, b̄ = {bb}: ā = {} ≥ {}",
                    fmt_q(rec.wall_at.as_ref().unwrap()),
                    fmt_q(&rec.sup_bound)
                ));
            }
            if bbar > rec.bbar_threshold {
                beyond_threshold += 1;
                if !rec.dominated() {
                    beyond_violations += 1;
                }
            }
        }
    }
    let main = if violations.is_empty() {
        pass(format!("{samples} (L, b̄) samples"))
    } else {
        fail(format!("{} of {samples} samples exceed the bound, e.g. {}", violations.len(), violations[0]))
    };
    let companion = if beyond_violations == 0 {
        pass(format!("{beyond_threshold} samples with b̄ > b̄₀(L), all below the bound"))
    } else {
        fail(format!("{beyond_violations} of {beyond_threshold} samples with b̄ > b̄₀(L) exceed the bound"))
    };
    (main, companion)
}

fn criterion_8() -> Outcome {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return fail(format!("tempdir: {e}")),
    };
    let table = dir.path().join("v.json");
    let fiber = dir.path().join("fiber.json");
    let psi_in = dir.path().join("psi.json");
    let files = [
        (&table, r#"{"n": 2, "d": 5, "c": 0, "s": "3"}"#),
        (&fiber, r#"{"n": 0, "d": 0, "c": 1, "s": "0"}"#),
        (&psi_in, r#"{"n": 5, "d": 2, "c": 0, "s": "0"}"#),
    ];
    for (path, text) in files {
        if let Err(e) = std::fs::write(path, text) {
            return fail(format!("write {}: {e}", path.display()));
        }
    }
    let t = table.to_str().unwrap();
    let f = fiber.to_str().unwrap();
    let p = psi_in.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["transform", "--op", "phi", t],
        vec!["transform", "--op", "phihat", t, "--verify"],
        vec!["transform", "--op", "dual", t, "--verify"],
        vec!["transform", "--op", "shift", t, "--verify"],
        vec!["transform", "--op", "tensor", "--alpha", "1", "--beta", "-2", t, "--verify"],
        vec!["transform", "--op", "psi", "--m", "2", p, "--verify"],
        vec!["transform", "--op", "upsilon", "--k", "2", t, "--verify", "--format", "tsv"],
        vec!["transport", "forward", "--abar", "2", "--pbar", "1", "--qbar", "0", "--bbar", "3", "--check", "full"],
        vec!["transport", "inverse", "--a", "1/5", "--p", "-2/5", "--q", "-12/5", "--b", "6", "--check", "full"],
        vec!["transport", "tx", "--lambda", "-3/4", "--z", "1", "--check", "full"],
        vec!["transport", "thm54", "--lambda", "10", "--vbar", "4", "--v", "1,2,0,0"],
        vec!["transport", "friedman56", "--lambda", "0", "--ubar", "8", "--v", "1,1,0,0"],
        vec!["transport", "thm58", "--lambda", "0", "--v", "2,0,3,0"],
        vec!["bounds", "gieseker", "--v", "1,1,0,0", "--b", "3"],
        vec!["bounds", "onedim", f, "--p", "1/2", "--b", "3"],
        vec!["bounds", "zerofiber", "--v", "2,0,3,0", "--lambda", "0", "--b", "3"],
        vec!["bounds", "geometric", "--pbar", "1", "--bbar", "3"],
        vec!["bounds", "linebundle", "--alpha", "7", "--beta", "2", "--bbar", "30"],
        vec!["walls", "--v", "2,1,0,0", "--b", "3", "--box", "6,6,12", "--generic"],
        vec!["walls", "--v", "1,1,0,0", "--b", "3", "--box", "6,6,12", "--format", "tsv"],
        vec!["walls", "--v", "1,1,0,0", "--b", "3", "--box", "6,6,12", "--format", "svg+json"],
        vec!["euclid", t, "--check", "full"],
        vec!["euclid", "--v", "3,2,5,0", "--format", "tsv"],
    ];
    let exe = env!("CARGO_BIN_EXE_ellstab");
    for args in &runs {
        let run = || Command::new(exe).args(args).output();
        let (a, b) = match (run(), run()) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return fail(format!("could not spawn for {args:?}")),
        };
        if !a.status.success() {
            return fail(format!("{args:?} exited with {}: {}", a.status, String::from_utf8_lossy(&a.stderr)));
        }
        if a.stdout != b.stdout || a.status.code() != b.status.code() || a.stdout.is_empty() {
            return fail(format!("{args:?} is not byte-deterministic"));
        }
    }
    pass(format!("{} commands, each run twice", runs.len()))
}

fn timed<T>(limit: Duration, f: impl FnOnce() -> T) -> (T, Duration, bool) {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    (out, took, took < limit)
}

type Row = (String, Outcome, Option<(Duration, Duration, bool)>);

fn run(name: &str, limit: Option<Duration>, f: fn() -> Outcome) -> Row {
    let (out, took, in_time) = timed(limit.unwrap_or(Duration::MAX), f);
    (name.to_string(), out, limit.map(|l| (took, l, in_time)))
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let mut results = vec![
        run("1 composition identities", secs(1), criterion_1),
        run("2 Psi_m closed form vs diagram", secs(5), criterion_2),
        run("3 transport suite", secs(5), criterion_3),
        run("4 boundary transport", secs(1), criterion_4),
        run("5 bound domination", secs(120), criterion_5),
        run("6 euclid", secs(10), criterion_6),
    ];
    let ((seven, seven_beyond), took, in_time) = timed(Duration::from_secs(1), criterion_7);
    let limit = Some((took, Duration::from_secs(1), in_time));
    results.push(("7 line-bundle walls".into(), seven, limit));
    results.push(("7' line-bundle walls beyond threshold (companion)".into(), seven_beyond, limit));
    results.push(run("8 CLI determinism", None, criterion_8));

    let mut failures = 0;
    for (name, out, time) in &results {
        let ok = out.ok && time.as_ref().is_none_or(|t| t.2);
        if !ok {
            failures += 1;
        }
        let timing = time
            .as_ref()
            .map(|(took, limit, _)| format!(" [{:.3}s, limit {}s]", took.as_secs_f64(), limit.as_secs()))
            .unwrap_or_default();
        println!("{} criterion {name}: {}{timing}", if ok { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("acceptance: {} of {} passed", results.len() - failures, results.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
