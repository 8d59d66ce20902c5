//! Randomized and structured batteries over every identity and inequality
//! check, aggregated into serializable reports.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::check::IneqCheck;
use crate::energy::{self, Weight, WeightData};
use crate::error::{Error, Result};
use crate::field::{self, InvariantFn, MultSubgroup, PrimeField};
use crate::func::{FnValues, GroupFn, TupleFn};
use crate::group::{CyclicGroup, GroupSet, Sign};
use crate::par::{map_range, Exec};
use crate::spectral::{self, eigendecompose, SpectralOperator};
use crate::tol;
use crate::transform::{self, dft, Points};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Moduli cycled through by the identity battery.
pub const IDENTITY_MODULI: [u32; 3] = [5, 7, 16];
/// Modulus of the inequality battery.
pub const INEQUALITY_MODULUS: u32 = 32;
/// Primes of the default subgroup battery.
pub const SUBGROUP_PRIMES: [u32; 4] = [7, 13, 31, 101];
/// Largest prime accepted by the subgroup battery.
pub const SUBGROUP_MAX_PRIME: u32 = 10_000;

/// The correlation used by the battery, replaceable for mutation testing.
pub type CorrelateFn = fn(&GroupFn, &GroupFn) -> Result<GroupFn>;

#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub seed: u64,
    pub trials: usize,
    pub exec: Exec,
    pub correlate: CorrelateFn,
    /// Record wall-clock runtime in summaries (breaks byte-identical output).
    pub timing: bool,
}

impl Config {
    pub fn new(seed: u64, trials: usize) -> Self {
        Config { seed, trials, exec: Exec::default(), correlate: transform::correlate, timing: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub trials: usize,
    pub moduli: Vec<u32>,
    pub densities: [f64; 2],
    pub structured: Vec<String>,
}

/// Everything needed to replay one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub trial: usize,
    pub modulus: u32,
    pub params: String,
    pub sets: Vec<Vec<u32>>,
    pub functions: Vec<FnValues>,
}

impl Instance {
    fn new(trial: usize, modulus: u32, params: impl Into<String>) -> Self {
        Instance { trial, modulus, params: params.into(), sets: Vec::new(), functions: Vec::new() }
    }

    fn set(mut self, s: &GroupSet) -> Self {
        self.sets.push(s.members().to_vec());
        self
    }

    fn func(mut self, f: &GroupFn) -> Self {
        self.functions.push(f.values().clone());
        self
    }
}

/// The worst evaluation of one named check across all trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    #[serde(flatten)]
    pub worst: IneqCheck,
    pub count: usize,
    pub failures: usize,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: IneqCheck,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_slack: f64,
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSuite {
    pub name: String,
    pub generator: GeneratorSpec,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
}

impl CheckSuite {
    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|r| r.worst.name == name)
    }

    /// Records whose name starts with `prefix`.
    pub fn records<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.checks.iter().filter(move |r| r.worst.name.starts_with(prefix))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub seed: u64,
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub suites: Vec<CheckSuite>,
    pub pass: bool,
}

impl Report {
    pub fn new(seed: u64, suites: Vec<CheckSuite>) -> Self {
        let pass = suites.iter().all(|s| s.pass);
        Report { metadata: Metadata { version: VERSION.to_string(), seed, timestamp: None }, suites, pass }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent stream per `(seed, suite, trial)`.
pub fn trial_rng(seed: u64, suite: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(suite.wrapping_mul(0x1_0000_0001) ^ splitmix(trial))))
}

type TrialOutput = Vec<(IneqCheck, Arc<Instance>)>;

fn aggregate(name: &str, generator: GeneratorSpec, trials: Vec<Result<TrialOutput>>, started: Option<Instant>) -> Result<CheckSuite> {
    let mut records: Vec<CheckRecord> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut counterexample = None;
    let (mut total, mut failed) = (0usize, 0usize);
    for trial in trials {
        let trial = trial?;
        for (check, instance) in &trial {
            total += 1;
            if !check.pass {
                failed += 1;
                counterexample.get_or_insert_with(|| Counterexample { check: check.clone(), instance: (**instance).clone() });
            }
            match index.get(&check.name) {
                None => {
                    index.insert(check.name.clone(), records.len());
                    records.push(CheckRecord {
                        worst: check.clone(),
                        count: 1,
                        failures: usize::from(!check.pass),
                        instance: (**instance).clone(),
                    });
                }
                Some(&i) => {
                    let r = &mut records[i];
                    r.count += 1;
                    r.failures += usize::from(!check.pass);
                    if worse(check, &r.worst) {
                        r.worst = check.clone();
                        r.instance = (**instance).clone();
                    }
                }
            }
        }
        // a failing trial halts the battery
        if counterexample.is_some() {
            break;
        }
    }
    let worst_slack = records.iter().map(|r| &r.worst).reduce(|a, b| if worse(b, a) { b } else { a }).map_or(0.0, |c| c.slack);
    Ok(CheckSuite {
        name: name.to_string(),
        generator,
        summary: Summary {
            checks: total,
            passed: total - failed,
            failed,
            worst_slack,
            runtime_ms: started.map(|s| s.elapsed().as_millis() as u64),
        },
        pass: failed == 0,
        checks: records,
        counterexample,
    })
}

/// Failures first, then the smallest normalized margin.
fn worse(a: &IneqCheck, b: &IneqCheck) -> bool {
    match (a.pass, b.pass) {
        (false, true) => true,
        (true, false) => false,
        _ => a.margin() < b.margin(),
    }
}

fn push(out: &mut TrialOutput, inst: &Arc<Instance>, checks: impl IntoIterator<Item = IneqCheck>) {
    out.extend(checks.into_iter().map(|c| (c, Arc::clone(inst))));
}

fn push_one(out: &mut TrialOutput, inst: &Arc<Instance>, name: &str, checks: Vec<IneqCheck>) {
    if let Some(c) = IneqCheck::worst_of(name, checks) {
        out.push((c, Arc::clone(inst)));
    }
}

fn random_set(g: CyclicGroup, rng: &mut impl Rng, density: f64) -> GroupSet {
    GroupSet::new(g, g.elements().filter(|_| rng.random_bool(density))).expect("residues in range")
}

fn random_nonempty(g: CyclicGroup, rng: &mut impl Rng, density: f64) -> GroupSet {
    loop {
        let s = random_set(g, rng, density);
        if !s.is_empty() {
            return s;
        }
    }
}

fn random_ints(g: CyclicGroup, rng: &mut impl Rng, lo: i64, hi: i64) -> GroupFn {
    GroupFn::from_ints(g, g.elements().map(|_| rng.random_range(lo..=hi)).collect()).expect("length N")
}

fn random_complex(g: CyclicGroup, rng: &mut impl Rng) -> GroupFn {
    GroupFn::from_complex(g, g.elements().map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
        .expect("length N")
}

fn random_fn(g: CyclicGroup, rng: &mut impl Rng, integer: bool) -> GroupFn {
    if integer {
        random_ints(g, rng, -4, 4)
    } else {
        random_complex(g, rng)
    }
}

fn sign_tag(sign: Sign) -> &'static str {
    match sign {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    }
}

/// `F(f ∘ g) = conj(F(f̄)) ĝ` with the configured correlation.
fn check_correlation(correlate: CorrelateFn, f: &GroupFn, g: &GroupFn) -> Result<IneqCheck> {
    let corr = dft(&correlate(f, g)?);
    let (fbar, gh) = (dft(&f.conj()), dft(g));
    let checks = (0..f.group().order())
        .map(|xi| {
            transform::complex_check(
                "c",
                "fourier-of-correlation",
                corr.values[xi],
                fbar.values[xi].conj() * gh.values[xi],
                tol::FOURIER_REL,
            )
        })
        .collect();
    Ok(IneqCheck::worst_of("correlation_theorem", checks).expect("nonempty group"))
}

fn identity_trial(cfg: &Config, trial: usize) -> Result<TrialOutput> {
    let mut rng = trial_rng(cfg.seed, 0, trial as u64);
    let n = IDENTITY_MODULI[trial % IDENTITY_MODULI.len()];
    let g = CyclicGroup::new(n)?;
    let integer = trial.is_multiple_of(2);
    let path = if integer { "int" } else { "complex" };
    let mut out = Vec::new();

    let (f, h) = (random_fn(g, &mut rng, integer), random_fn(g, &mut rng, integer));
    let inst = Arc::new(Instance::new(trial, n, "fourier").func(&f).func(&h));
    push(
        &mut out,
        &inst,
        [
            transform::check_parseval(&f, &h)?,
            transform::check_convolution_energy(&f, &h)?,
            transform::check_inversion(&f)?,
            transform::check_convolution_theorem(&f, &h)?,
            check_correlation(cfg.correlate, &f, &h)?,
        ],
    );

    let (l, k) = (rng.random_range(2..=3usize), rng.random_range(2..=3usize));
    let matrix: Vec<Vec<GroupFn>> = (0..l).map(|_| (0..k).map(|_| random_fn(g, &mut rng, integer)).collect()).collect();
    let dim = ((l - 1) * (k - 1)) as u32;
    let points = if (n as u64).pow(dim) <= 4096 { Points::Full } else { Points::Sampled(256) };
    let mut inst = Instance::new(trial, n, format!("commutation l={l} k={k}"));
    for f in matrix.iter().flatten() {
        inst = inst.func(f);
    }
    let inst = Arc::new(inst);
    let mut c = transform::check_commutation(&matrix, points, &mut rng)?;
    c.name = format!("commutation/{path}");
    push(&mut out, &inst, [c]);

    let l = rng.random_range(2..=3usize);
    let fs: Vec<GroupFn> = (0..l).map(|_| random_fn(g, &mut rng, integer)).collect();
    let gs: Vec<GroupFn> = (0..l).map(|_| random_fn(g, &mut rng, integer)).collect();
    let mut inst = Instance::new(trial, n, format!("scalar l={l}"));
    for f in fs.iter().chain(&gs) {
        inst = inst.func(f);
    }
    let mut c = transform::check_scalar_c(&fs, &gs)?;
    c.name = format!("scalar_c/{path}");
    push(&mut out, &Arc::new(inst), [c]);

    let (k, l) = (rng.random_range(2..=3usize), rng.random_range(2..=3usize));
    let fs: Vec<GroupFn> = (0..k).map(|_| random_fn(g, &mut rng, integer)).collect();
    let mut inst = Instance::new(trial, n, format!("multi-scalar k={k} l={l}"));
    for f in &fs {
        inst = inst.func(f);
    }
    let mut c = transform::check_gen_c(&fs, l)?;
    c.name = format!("gen_c/{path}");
    push(&mut out, &Arc::new(inst), [c]);

    let l = rng.random_range(2..=3usize);
    let (f0, f1, f2) = (random_fn(g, &mut rng, integer), random_fn(g, &mut rng, integer), random_fn(g, &mut rng, integer));
    let inst = Arc::new(Instance::new(trial, n, format!("triple l={l}")).func(&f0).func(&f1).func(&f2));
    let mut c = transform::check_conv_c(&f0, &f1, &f2, l)?;
    c.name = format!("conv_c/{path}");
    push(&mut out, &inst, [c]);

    let (da, db) = (rng.random_range(0.2..0.8), rng.random_range(0.2..0.8));
    let (a, b) = (random_set(g, &mut rng, da), random_set(g, &mut rng, db));
    let (k, l) = (rng.random_range(1..=2usize), rng.random_range(1..=2usize));
    let inst = Arc::new(Instance::new(trial, n, format!("sets k={k} l={l}")).set(&a).set(&b));
    for sign in Sign::both() {
        let mut m = energy::check_membership_identity(&a, &b, k, l, sign)?;
        m.name = format!("membership_{}", sign_tag(sign));
        push(&mut out, &inst, [m]);
    }
    let mut s = energy::check_shift_energy_lemma(&a, &b, k, l)?;
    s.name = "shift_energy".into();
    push(&mut out, &inst, [s]);
    Ok(out)
}

/// Fourier, convolution and generalized-convolution identities over
/// `Z/5`, `Z/7`, `Z/16`, integer inputs on even trials and complex on odd.
pub fn run_identity_suite(seed: u64, trials: usize) -> Result<CheckSuite> {
    run_identity_suite_with(&Config::new(seed, trials))
}

pub fn run_identity_suite_with(cfg: &Config) -> Result<CheckSuite> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let started = cfg.timing.then(Instant::now);
    let results = map_range(cfg.exec, cfg.trials, |i| identity_trial(cfg, i));
    let generator = GeneratorSpec {
        seed: cfg.seed,
        trials: cfg.trials,
        moduli: IDENTITY_MODULI.to_vec(),
        densities: [0.2, 0.8],
        structured: Vec::new(),
    };
    aggregate("identities", generator, results, started)
}

fn set_checks(out: &mut TrialOutput, inst: &Arc<Instance>, a: &GroupSet, h: &GroupFn, prefix: &str) -> Result<()> {
    for sign in Sign::both() {
        let tag = sign_tag(sign);
        push_one(out, inst, &format!("{prefix}katz_koester_{tag}"), energy::check_katz_koester(a, sign)?);
        let mut c = energy::check_heart(a, sign)?;
        c.name = format!("{prefix}heart_{tag}");
        push(out, inst, [c]);
        let mut c = energy::check_energy_weight_1(a, sign)?;
        c.name = format!("{prefix}energy_weight_1_{tag}");
        let mut d = energy::check_energy_weight_2(a, sign)?;
        d.name = format!("{prefix}energy_weight_2_{tag}");
        push(out, inst, [c, d]);
        for mut c in energy::check_level_corollaries(a, sign)? {
            c.name = format!("{prefix}{}_{tag}", c.name.trim_end_matches(['+', '-']));
            push(out, inst, [c]);
        }
    }
    let mut c = energy::check_heart_2(a)?;
    c.name = format!("{prefix}heart_2");
    push(out, inst, [c]);
    for (i, mut c) in spectral::check_triangle_inequality(a, h)?.into_iter().enumerate() {
        c.name = format!("{prefix}triangle_{}", ["mean", "diagonal", "l2"][i]);
        push(out, inst, [c]);
    }
    for k in 3..=5 {
        for (i, mut c) in spectral::check_cycle_sums(a, h, k)?.into_iter().enumerate() {
            c.name = format!("{prefix}cycle_k{k}_{}", ["trace", "bound"][i]);
            push(out, inst, [c]);
        }
    }
    for mut c in spectral::first_eigenfunction_bounds(a, h)?.checks {
        c.name = format!("{prefix}{}", c.name);
        push(out, inst, [c]);
    }
    Ok(())
}

fn inequality_trial(cfg: &Config, trial: usize) -> Result<TrialOutput> {
    let mut rng = trial_rng(cfg.seed, 1, trial as u64);
    let g = CyclicGroup::new(INEQUALITY_MODULUS)?;
    let density = rng.random_range(0.1..0.9);
    let a = random_nonempty(g, &mut rng, density);
    let b = random_nonempty(g, &mut rng, density);
    let h = random_ints(g, &mut rng, 0, 3);
    let inst = Arc::new(Instance::new(trial, g.modulus(), format!("density={density:.4}")).set(&a).set(&b).func(&h));
    let mut out = Vec::new();
    set_checks(&mut out, &inst, &a, &h, "")?;
    for k in 1..=2usize {
        let sign = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let data = WeightData::new(&a, &b, k, 1, sign)?;
        let size = g.tuple_space(k, crate::group::DEFAULT_TUPLE_CAP)?;
        let q = TupleFn::new(g, k, FnValues::Int((0..size).map(|_| rng.random_range(-3..=3)).collect()))?;
        let c = energy::check_weight_inequality(&data, &Weight::Table(q), &format!("weight_k{k}_l1"))?;
        push(&mut out, &inst, [c]);
    }
    Ok(out)
}

/// Additive subgroups of `Z/32` with `h = 1_H`, the tight cases.
fn equality_trial(trial: usize, step: u32) -> Result<TrialOutput> {
    let g = CyclicGroup::new(INEQUALITY_MODULUS)?;
    let hset = energy::additive_subgroup(g, step)?;
    let h = hset.indicator();
    let inst = Arc::new(Instance::new(trial, g.modulus(), format!("subgroup step={step}")).set(&hset));
    let mut out = Vec::new();
    set_checks(&mut out, &inst, &hset, &h, "subgroup/")?;
    Ok(out)
}

/// Step sizes of the structured equality instances.
pub const EQUALITY_STEPS: [u32; 5] = [1, 2, 4, 8, 16];

/// Checks that are tight on additive subgroups with `h = 1_H`.
pub const EQUALITY_CHECKS: [&str; 13] = [
    "katz_koester_plus",
    "katz_koester_minus",
    "heart_plus",
    "heart_minus",
    "heart_2",
    "energy_weight_1_plus",
    "energy_weight_1_minus",
    "energy_weight_2_plus",
    "energy_weight_2_minus",
    "triangle_mean",
    "cycle_k3_bound",
    "cycle_k4_bound",
    "cycle_k5_bound",
];

/// Set inequalities over random subsets of `Z/32` plus additive subgroups.
pub fn run_inequality_suite(seed: u64, trials: usize) -> Result<CheckSuite> {
    run_inequality_suite_with(&Config::new(seed, trials))
}

pub fn run_inequality_suite_with(cfg: &Config) -> Result<CheckSuite> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let started = cfg.timing.then(Instant::now);
    let total = cfg.trials + EQUALITY_STEPS.len();
    let results = map_range(cfg.exec, total, |i| {
        if i < cfg.trials {
            inequality_trial(cfg, i)
        } else {
            equality_trial(i, EQUALITY_STEPS[i - cfg.trials])
        }
    });
    let generator = GeneratorSpec {
        seed: cfg.seed,
        trials: cfg.trials,
        moduli: vec![INEQUALITY_MODULUS],
        densities: [0.1, 0.9],
        structured: EQUALITY_STEPS.iter().map(|s| format!("additive subgroup step {s}")).collect(),
    };
    aggregate("inequalities", generator, results, started)
}

/// Random `A ⊆ Γ`, nonempty.
fn random_subset(gamma: &MultSubgroup, rng: &mut impl Rng) -> GroupSet {
    let grp = gamma.field().additive();
    loop {
        let d = rng.random_range(0.2..0.9);
        let a = GroupSet::new(grp, gamma.elements().iter().copied().filter(|_| rng.random_bool(d))).expect("in range");
        if !a.is_empty() {
            return a;
        }
    }
}

fn random_on(gamma: &MultSubgroup, rng: &mut impl Rng) -> GroupFn {
    let grp = gamma.field().additive();
    let mut v = vec![0i64; grp.order()];
    for &x in gamma.elements() {
        v[x as usize] = rng.random_range(-3..=3);
    }
    GroupFn::from_ints(grp, v).expect("length p")
}

/// Draws per subgroup for the multiplicative-energy and Fourier checks.
pub const SUBGROUP_SAMPLES: usize = 5;
/// Largest subgroup order for the brute-force multiplicative energy checks.
pub const MULT_ENERGY_MAX_T: u32 = 16;

fn subgroup_trial(seed: u64, trial: usize, field: Arc<PrimeField>, t: u32) -> Result<TrialOutput> {
    let mut rng = trial_rng(seed, 2, ((field.p() as u64) << 32) | t as u64);
    let gamma = MultSubgroup::new(field, t)?;
    let p = gamma.p();
    let grp = gamma.field().additive();
    let gset = gamma.as_set().clone();
    let gg = transform::correlate(&gset.indicator(), &gset.indicator())?;
    let even = InvariantFn::random(&gamma, &mut rng, 0, 5, true).to_group_fn(&gamma)?;
    let odd = InvariantFn::random(&gamma, &mut rng, -3, 3, false).to_group_fn(&gamma)?;
    let inst = Arc::new(Instance::new(trial, p, format!("p={p} t={t}")).set(&gset).func(&even).func(&odd));
    let mut out = Vec::new();

    push(&mut out, &inst, [field::check_characters(&gamma)]);
    for (tag, kernel) in [("gamma", &gg), ("random", &even)] {
        let mut c = field::check_spectrum_matches(&gamma, kernel)?;
        c.name = format!("spectrum_{tag}");
        push(&mut out, &inst, [c]);
        let op = SpectralOperator::new(&gset, kernel)?;
        let spec = eigendecompose(&op)?;
        for mut c in spectral::check_traces(&op, &spec)? {
            c.name = format!("{}_{tag}", c.name);
            push(&mut out, &inst, [c]);
        }
    }
    push(&mut out, &inst, [field::check_eigenbasis(&gamma, &odd)?]);
    if gamma.index() > 1 {
        let mut c = field::check_eigenbasis_on_coset(&gamma, &odd, gamma.field().root())?;
        c.name = "eigenbasis_coset".into();
        push(&mut out, &inst, [c]);
    }
    push(&mut out, &inst, field::check_mu_convolution(&gamma, &odd, &even)?);
    for k in 1..=2 {
        let mut c = field::check_energy_maximizer(&gamma, k)?;
        c.name = format!("energy_maximizer_k{k}");
        push(&mut out, &inst, [c]);
    }

    let hs = vec![GroupFn::constant(grp, 1), gg.clone(), InvariantFn::random(&gamma, &mut rng, 1, 4, false).to_group_fn(&gamma)?];
    for s in 0..SUBGROUP_SAMPLES {
        let u = field::random_supported(&gamma, &mut rng);
        let lambda = rng.random_range(0..p);
        let v = random_ints(grp, &mut rng, 0, 3);
        let inst = Arc::new(Instance::new(trial, p, format!("p={p} t={t} sample={s} lambda={lambda}")).func(&u).func(&v));
        for (i, mut c) in field::check_exact_fourier(&gamma, &u, lambda, &hs)?.into_iter().enumerate() {
            c.name = format!("exact_fourier_{}", ["constant", "gamma", "random"][i]);
            push(&mut out, &inst, [c]);
        }
        if s == 0 {
            for (i, mut c) in field::check_exact_fourier_c3(&gamma, &u, &v, &hs)?.into_iter().enumerate() {
                c.name = format!("exact_fourier_triple_{}", ["constant", "gamma", "random"][i]);
                push(&mut out, &inst, [c]);
            }
            push_one(&mut out, &inst, "connected", hs.iter().map(|h| field::check_connected(&gamma, h, &u)).collect::<Result<_>>()?);
        }

        let a = random_subset(&gamma, &mut rng);
        let inst = Arc::new(Instance::new(trial, p, format!("p={p} t={t} sample={s}")).set(&a));
        if s == 0 {
            push(&mut out, &inst, field::check_vinogradov_bounds(&gamma, &a)?);
            for k in 2..=3u32 {
                if (t as u128).pow(2 * k - 1) <= field::MULT_ENERGY_CAP {
                    push_one(&mut out, &inst, &format!("p_variance_k{k}"), field::check_p_variance(&gamma, &a, &hs, k)?);
                }
            }
        }
        if t <= MULT_ENERGY_MAX_T {
            for k in 2..=3 {
                let checks = field::check_tk_characters(&gamma, &a.indicator(), k)?;
                for mut c in checks {
                    c.name = if c.name.starts_with("mult_energy_lower") {
                        format!("mult_energy_lower_k{k}")
                    } else {
                        format!("mult_energy_k{k}")
                    };
                    push(&mut out, &inst, [c]);
                }
                let f = random_on(&gamma, &mut rng);
                let inst = Arc::new(Instance::new(trial, p, format!("p={p} t={t} sample={s} k={k}")).func(&f));
                let mut c = field::check_tk_characters(&gamma, &f, k)?.remove(0);
                c.name = format!("mult_energy_k{k}");
                push(&mut out, &inst, [c]);
            }
        }
    }

    if p == 7 && t == 3 {
        out.extend(golden_checks(&gamma)?.into_iter().map(|c| (c, Arc::clone(&inst))));
    }
    Ok(out)
}

/// Exact values for `Γ = {1, 2, 4} ⊆ F_7`.
fn golden_checks(gamma: &MultSubgroup) -> Result<Vec<IneqCheck>> {
    let s = gamma.as_set();
    let gg = transform::correlate(&s.indicator(), &s.indicator())?;
    let mut out = vec![
        IneqCheck::eq_int("golden_energy", "golden-subgroup", energy::energy(s, s)? as i128, 15),
        IneqCheck::eq_int("golden_energy_3", "golden-subgroup", energy::energy_k(s, s, 3)? as i128, 33),
    ];
    let mu = field::mu_alpha_direct(gamma, &gg)?;
    let target = [5.0, 2.0, 2.0];
    let diff = mu.values.iter().zip(target).map(|(m, t)| (m - Complex64::new(t, 0.0)).norm()).fold(0.0, f64::max);
    out.push(IneqCheck::le("golden_mu", "golden-subgroup", diff, tol::SPECTRAL_REL, 0.0));
    let spec = eigendecompose(&SpectralOperator::new(s, &gg)?)?;
    out.push(IneqCheck::le(
        "golden_spectrum",
        "golden-subgroup",
        spectral::spectrum_distance(&spec.eigenvalues, &target),
        tol::SPECTRAL_REL,
        0.0,
    ));
    let tri = spectral::check_triangle_inequality(s, &s.indicator())?.remove(0);
    out.push(IneqCheck::eq_int("golden_triangle_lhs", "golden-subgroup", tri.lhs as i128, 141));
    out.push(IneqCheck::ge_int("golden_triangle", "golden-subgroup", tri.lhs as i128, 125));
    Ok(out)
}

/// Character-side checks for every subgroup of `F_p^*`, `p` in `primes`.
pub fn run_subgroup_suite(primes: &[u32]) -> Result<CheckSuite> {
    run_subgroup_suite_with(&Config::new(1, 1), primes)
}

pub fn run_subgroup_suite_with(cfg: &Config, primes: &[u32]) -> Result<CheckSuite> {
    if primes.is_empty() {
        return Err(Error::InvalidArgument("prime list is empty".into()));
    }
    if let Some(&p) = primes.iter().find(|&&p| p > SUBGROUP_MAX_PRIME) {
        return Err(Error::InvalidArgument(format!("prime {p} above {SUBGROUP_MAX_PRIME}")));
    }
    let started = cfg.timing.then(Instant::now);
    let mut jobs = Vec::new();
    for &p in primes {
        let f = Arc::new(PrimeField::new(p)?);
        for t in field::divisors(p as u64 - 1) {
            jobs.push((Arc::clone(&f), t as u32));
        }
    }
    let results = map_range(cfg.exec, jobs.len(), |i| subgroup_trial(cfg.seed, i, Arc::clone(&jobs[i].0), jobs[i].1));
    let generator = GeneratorSpec {
        seed: cfg.seed,
        trials: jobs.len(),
        moduli: primes.to_vec(),
        densities: [0.2, 0.9],
        structured: vec!["every subgroup order t | p - 1".into()],
    };
    aggregate("subgroups", generator, results, started)
}

/// All three batteries; `inequality_trials` defaults to five times `trials`.
pub fn run_all(cfg: &Config, inequality_trials: usize, primes: &[u32]) -> Result<Report> {
    let identities = run_identity_suite_with(cfg)?;
    let inequalities = run_inequality_suite_with(&Config { trials: inequality_trials, ..*cfg })?;
    let subgroups = run_subgroup_suite_with(cfg, primes)?;
    Ok(Report::new(cfg.seed, vec![identities, inequalities, subgroups]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shifted_correlate(f: &GroupFn, g: &GroupFn) -> Result<GroupFn> {
        Ok(transform::correlate(f, g)?.shift(1))
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(run_identity_suite(1, 0).is_err());
        assert!(run_inequality_suite(1, 0).is_err());
        assert!(run_subgroup_suite(&[]).is_err());
        assert!(run_subgroup_suite(&[15]).is_err());
    }

    #[test]
    fn small_batteries_pass() {
        let s = run_identity_suite(3, 12).unwrap();
        assert!(s.pass, "{:?}", s.counterexample);
        assert_eq!(s.record("commutation/int").unwrap().count, 6);
        assert_eq!(s.record("membership_plus").unwrap().count, 12);
        let s = run_inequality_suite(3, 4).unwrap();
        assert!(s.pass, "{:?}", s.counterexample);
        let s = run_subgroup_suite(&[7, 13]).unwrap();
        assert!(s.pass, "{:?}", s.counterexample);
        assert!(s.record("golden_energy").unwrap().worst.pass);
    }

    #[test]
    fn mutation_is_caught() {
        let cfg = Config { correlate: shifted_correlate, ..Config::new(1, 6) };
        let s = run_identity_suite_with(&cfg).unwrap();
        assert!(!s.pass);
        let cx = s.counterexample.clone().unwrap();
        assert_eq!(cx.check.name, "correlation_theorem");
        assert_eq!(cx.instance.trial, 0);
        assert_eq!(cx.instance.functions.len(), 2);
        // halted after the first failing trial
        assert_eq!(s.record("parseval").unwrap().count, 1);
    }

    #[test]
    fn sequential_matches_parallel() {
        let seq = Config { exec: Exec::Sequential, ..Config::new(5, 9) };
        let par = Config { exec: Exec::Parallel, ..seq };
        assert_eq!(run_identity_suite_with(&seq).unwrap(), run_identity_suite_with(&par).unwrap());
    }

    #[test]
    fn report_round_trips() {
        let r = Report::new(2, vec![run_identity_suite(2, 3).unwrap()]);
        let json = r.to_json().unwrap();
        assert_eq!(Report::from_json(&json).unwrap(), r);
        assert_eq!(json, Report::new(2, vec![run_identity_suite(2, 3).unwrap()]).to_json().unwrap());
    }
}
