//! Acceptance criteria, one PASS/FAIL line each.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use addcomb::energy::{energy, energy_k};
use addcomb::field::{self, InvariantFn, MultSubgroup, PrimeField};
use addcomb::spectral::{check_triangle_inequality, eigendecompose, spectrum_distance, SpectralOperator};
use addcomb::transform::correlate;
use addcomb::verify::{self, EQUALITY_CHECKS};
use addcomb::{GroupFn, GroupSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit_s), format!("took {elapsed:.1?}, limit {limit_s}s"))
}

fn identity_battery() -> Outcome {
    let start = Instant::now();
    let s = verify::run_identity_suite(1, 200).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(s.pass, format!("counterexample {:?}", s.counterexample))?;
    let names = [
        "parseval",
        "convolution_energy",
        "inversion",
        "convolution_theorem",
        "correlation_theorem",
        "membership_plus",
        "membership_minus",
        "shift_energy",
    ];
    for n in names {
        let r = s.record(n).ok_or(format!("missing {n}"))?;
        ensure(r.count == 200, format!("{n}: {} trials", r.count))?;
    }
    for base in ["commutation", "scalar_c", "gen_c", "conv_c"] {
        let int = s.record(&format!("{base}/int")).ok_or(format!("missing {base}/int"))?;
        let cx = s.record(&format!("{base}/complex")).ok_or(format!("missing {base}/complex"))?;
        ensure(int.count + cx.count == 200, format!("{base}: {} trials", int.count + cx.count))?;
        ensure(int.worst.exact && int.worst.slack == 0.0, format!("{base}: integer path not exact"))?;
        ensure(cx.worst.tol <= 1e-8 * cx.worst.lhs.abs().max(cx.worst.rhs.abs()).max(1.0), format!("{base}: tolerance"))?;
    }
    for n in ["membership_plus", "membership_minus", "shift_energy"] {
        let r = s.record(n).unwrap();
        ensure(r.worst.exact && r.worst.slack == 0.0, format!("{n} not exact"))?;
    }
    within(elapsed, 60)?;
    Ok(format!("{} checks over 200 trials in {elapsed:.1?}", s.summary.checks))
}

fn inequality_battery() -> Outcome {
    let s = verify::run_inequality_suite(1, 1000).map_err(|e| e.to_string())?;
    ensure(s.pass && s.summary.failed == 0, format!("counterexample {:?}", s.counterexample))?;
    let required = [
        "heart_plus",
        "heart_minus",
        "heart_2",
        "katz_koester_plus",
        "katz_koester_minus",
        "weight_k1_l1",
        "weight_k2_l1",
        "energy_weight_1_plus",
        "energy_weight_2_minus",
        "power_mean_a2_p2_plus",
        "power_mean_a3_p2_plus",
        "power_mean_a2_p3_plus",
        "triangle_mean",
        "triangle_l2",
        "cycle_k3_bound",
        "cycle_k5_bound",
        "g_size",
        "f0_sup_psi",
        "f0_sup_h",
    ];
    for n in required {
        let r = s.record(n).ok_or(format!("missing {n}"))?;
        ensure(r.count == 1000, format!("{n}: {} trials", r.count))?;
    }
    for n in EQUALITY_CHECKS {
        let r = s.record(&format!("subgroup/{n}")).ok_or(format!("missing subgroup/{n}"))?;
        ensure(r.worst.exact && r.worst.slack == 0.0, format!("subgroup/{n}: slack {}", r.worst.slack))?;
    }
    Ok(format!("{} checks, {} equality cases at slack 0", s.summary.checks, EQUALITY_CHECKS.len()))
}

fn golden() -> Outcome {
    let gamma = MultSubgroup::new(Arc::new(PrimeField::new(7).map_err(|e| e.to_string())?), 3).unwrap();
    let g = gamma.as_set();
    ensure(g.members() == [1, 2, 4], "subgroup")?;
    ensure(energy(g, g).unwrap() == 15, "E(Γ)")?;
    ensure(energy_k(g, g, 3).unwrap() == 33, "E_3(Γ)")?;
    let psi = correlate(&g.indicator(), &g.indicator()).unwrap();
    let spec = eigendecompose(&SpectralOperator::new(g, &psi).unwrap()).unwrap();
    ensure(spectrum_distance(&spec.eigenvalues, &[5.0, 2.0, 2.0]) <= 1e-8, "restricted spectrum")?;
    let mu = field::mu_alpha_direct(&gamma, &psi).unwrap();
    let mu_re: Vec<f64> = mu.values.iter().map(|z| z.re).collect();
    ensure(spectrum_distance(&mu_re, &[5.0, 2.0, 2.0]) <= 1e-8 && mu.values.iter().all(|z| z.im.abs() <= 1e-8), "μ_α")?;
    let tri = check_triangle_inequality(g, &g.indicator()).unwrap();
    ensure(tri[0].exact && tri[0].lhs == 141.0 && tri[0].rhs == 125.0 && tri[0].pass, "triangle")?;
    Ok("E=15, E_3=33, spectrum {5,2,2}, μ {5,2,2}, 141 >= 125".into())
}

fn spectral_equivalence() -> Outcome {
    let start = Instant::now();
    let s = verify::run_subgroup_suite(&verify::SUBGROUP_PRIMES).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(s.pass, format!("counterexample {:?}", s.counterexample))?;
    let subgroups: usize = verify::SUBGROUP_PRIMES.iter().map(|&p| field::divisors(p as u64 - 1).len()).sum();
    for n in ["spectrum_gamma", "spectrum_random", "mu_product", "mu_power_2", "mu_power_3", "characters"] {
        let r = s.record(n).ok_or(format!("missing {n}"))?;
        ensure(r.count == subgroups, format!("{n}: {} of {subgroups}", r.count))?;
        ensure(r.worst.tol <= 1e-8 * r.worst.rhs.abs().max(1.0), format!("{n}: tolerance"))?;
    }
    for n in ["trace_exact_gamma", "trace_sq_exact_gamma", "trace_exact_random", "trace_sq_exact_random"] {
        let r = s.record(n).ok_or(format!("missing {n}"))?;
        ensure(r.count == subgroups && r.worst.exact && r.worst.slack == 0.0, format!("{n} not exact"))?;
    }
    within(elapsed, 120)?;
    Ok(format!("{subgroups} subgroups in {elapsed:.1?}"))
}

fn mult_energy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut identities, mut lower) = (0, 0);
    let primes = field::primes_up_to(101);
    for &p in &primes {
        let f = Arc::new(PrimeField::new(p).unwrap());
        for t in field::divisors(p as u64 - 1).into_iter().filter(|&t| t <= 16) {
            let gamma = MultSubgroup::new(Arc::clone(&f), t as u32).unwrap();
            let grp = gamma.field().additive();
            let mut v = vec![0i64; p as usize];
            for &x in gamma.elements() {
                v[x as usize] = rng.random_range(-3..=3);
            }
            let fun = GroupFn::from_ints(grp, v).unwrap();
            for k in 2..=3 {
                let brute = field::mult_energy_k(&gamma, &fun, k).unwrap().exact().unwrap();
                let coeffs = field::character_coefficients(&gamma, &fun);
                let formula = (t as f64).powi(k as i32 - 1) * coeffs.iter().map(|c| c.norm_sqr().powi(k as i32)).sum::<f64>();
                ensure(formula.round() as u128 == brute, format!("p={p} t={t} k={k}: {formula} vs {brute}"))?;
                identities += 1;
            }
        }
    }
    let pool: Vec<(u32, u32)> = primes
        .iter()
        .flat_map(|&p| field::divisors(p as u64 - 1).into_iter().filter(|&t| (2..=16).contains(&t)).map(move |t| (p, t as u32)))
        .collect();
    for i in 0..100 {
        let (p, t) = pool[i % pool.len()];
        let gamma = MultSubgroup::new(Arc::new(PrimeField::new(p).unwrap()), t).unwrap();
        let a = loop {
            let a = GroupSet::new(gamma.field().additive(), gamma.elements().iter().copied().filter(|_| rng.random_bool(0.5))).unwrap();
            if !a.is_empty() {
                break a;
            }
        };
        for k in 2..=3 {
            let checks = field::check_tk_characters(&gamma, &a.indicator(), k).unwrap();
            ensure(checks.len() == 2 && checks.iter().all(|c| c.pass), format!("p={p} t={t} k={k} A={:?}", a.members()))?;
        }
        lower += 1;
    }
    Ok(format!("{identities} identity matches, lower bound on {lower} sets"))
}

fn exact_fourier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let subgroups: Vec<MultSubgroup> = verify::SUBGROUP_PRIMES
        .iter()
        .flat_map(|&p| {
            let f = Arc::new(PrimeField::new(p).unwrap());
            field::divisors(p as u64 - 1).into_iter().map(move |t| MultSubgroup::new(Arc::clone(&f), t as u32).unwrap())
        })
        .collect();
    let mut worst_eq = 0.0f64;
    for i in 0..100 {
        let gamma = &subgroups[i % subgroups.len()];
        let grp = gamma.field().additive();
        let hs = vec![
            GroupFn::constant(grp, 1),
            correlate(&gamma.as_set().indicator(), &gamma.as_set().indicator()).unwrap(),
            InvariantFn::random(gamma, &mut rng, 1, 4, false).to_group_fn(gamma).unwrap(),
        ];
        let u = field::random_supported(gamma, &mut rng);
        let lambda = rng.random_range(0..gamma.p());
        let checks = field::check_exact_fourier(gamma, &u, lambda, &hs).map_err(|e| e.to_string())?;
        ensure(checks.iter().all(|c| c.pass), format!("p={} t={} λ={lambda}", gamma.p(), gamma.order()))?;
        let eq = &checks[0];
        let rel = (eq.lhs - eq.rhs).abs() / eq.lhs.abs().max(eq.rhs.abs()).max(1.0);
        ensure(rel <= 1e-8, format!("equality at h = 1 off by {rel:e}"))?;
        worst_eq = worst_eq.max(rel);
    }
    Ok(format!("100 instances, worst relative gap at h = 1: {worst_eq:.1e}"))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_addcomb"))
}

fn asymptotic_substitutes() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let csv = dir.path().join("scan.csv");
    let start = Instant::now();
    let out = bin().args(["subgroup-scan", "--pmax", "2000", "--csv"]).arg(&csv).output().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), format!("subgroup-scan exit {:?}", out.status.code()))?;
    within(elapsed, 300)?;
    let text = std::fs::read_to_string(&csv).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    ensure(header.starts_with("p,t,e2,e3,sum,diff,ratio_52,ratio_229,ratio_sumw,lower,lower_ok"), format!("header {header}"))?;
    let mut rows = 0;
    let mut worst = 0.0f64;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let (t, e2, sum): (u128, u128, u128) = (cols[1].parse().unwrap(), cols[2].parse().unwrap(), cols[4].parse().unwrap());
        ensure(e2 * sum >= t.pow(4) && cols[10] == "true", format!("lower bound fails on {line}"))?;
        let r: f64 = cols[6].parse().unwrap();
        ensure(r.is_finite(), "ratio_52 not finite")?;
        worst = worst.max(r);
        rows += 1;
    }
    let jobs = addcomb::experiments::subgroup_jobs(2000, 1, u32::MAX).unwrap().len();
    ensure(rows == jobs, format!("{rows} rows for {jobs} subgroups"))?;

    let out =
        bin().args(["convex-scan", "--nmax", "512", "--csv"]).arg(dir.path().join("convex.csv")).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), "convex-scan failed")?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(stderr.contains("mismatched=0"), format!("convex cross-validation: {stderr}"))?;
    Ok(format!("{rows} rows in {elapsed:.1?}, worst ratio_52 = {worst:.3}; convex n <= 512 validated"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let out = bin().args(["verify", "--seed", "1", "--json"]).arg(&path).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), format!("verify exit {:?}", out.status.code()))?;
        bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(bytes[0] == bytes[1], "reports differ")?;
    Ok(format!("{} identical bytes", bytes[0].len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("identity battery", identity_battery),
        ("inequality battery", inequality_battery),
        ("golden subgroup p=7", golden),
        ("spectral equivalence", spectral_equivalence),
        ("multiplicative energy via characters", mult_energy),
        ("exact Fourier formula", exact_fourier),
        ("subgroup and convex scans", asymptotic_substitutes),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
