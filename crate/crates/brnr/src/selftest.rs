//! The acceptance table behind `brnr selftest`: every headline value of
//! the catalog groups is recomputed at p in {3, 5, 7} and checked, the
//! brute-force oracles are replayed at p = 3, and the structural
//! properties (duality, double annihilator, base-change equivariance,
//! the factor-test soundness) are exercised. Each check yields one row;
//! the caller decides how to print them.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::explore::{derive_candidate, evaluate_candidate, xw_space, Classification};
use crate::exterior::{
    binomial, induced_wedge_matrix, partial_decomposability_witness, subspace_multivectors,
    MultiVector, Side,
};
use crate::field::PrimeField;
use crate::group::{
    build_gamma, builtin, extraspecial, k2_space, spec_from_gamma, BuiltinParams,
    CentralExtensionSpec, Thm34Variant,
};
use crate::linalg::{annihilator, annihilator_std, Matrix, Subspace};
use crate::obstruction::{analyze, plucker_oracle_s2, sdec_oracle, Obstructions};
use crate::render::parse;

const PRIMES: [u64; 3] = [3, 5, 7];
const ORACLE_BUDGET: u128 = 10_000_000;

/// Outcome of one selftest row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Computed and logged without a pass/fail judgement.
    Info,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

struct Table {
    rows: Vec<Row>,
}

impl Table {
    fn check(&mut self, id: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.rows.push(Row {
            id: id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
    }

    fn info(&mut self, id: impl Into<String>, detail: impl Into<String>) {
        self.rows.push(Row { id: id.into(), status: Status::Info, detail: detail.into() });
    }
}

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).expect("selftest primes are valid")
}

fn smallest_nonsquare(f: PrimeField) -> u32 {
    (2..f.p()).find(|&t| !f.is_nonzero_square(t)).expect("odd p has a non-square")
}

/// (a, b) with X^2 + aX + b irreducible, per selftest prime.
fn prop33_params(p: u64) -> (i64, i64) {
    match p {
        5 => (1, 1),
        _ => (0, 1),
    }
}

/// The catalog instances the property rows run over.
fn catalog_instances(f: PrimeField) -> Vec<(String, CentralExtensionSpec)> {
    let p = f.p() as u64;
    let ns = smallest_nonsquare(f) as i64;
    let (a, b) = prop33_params(p);
    let mk = |name: &str, params: BuiltinParams| {
        let spec = builtin(f, name, &params).expect("catalog instance parameters are valid");
        (name.to_string(), spec)
    };
    vec![
        mk("thm2.4", BuiltinParams::default()),
        ("thm2.6(t=1)".to_string(), builtin(f, "thm2.6", &BuiltinParams { t: Some(1), ..Default::default() }).unwrap()),
        (format!("thm2.6(t={ns})"), builtin(f, "thm2.6", &BuiltinParams { t: Some(ns), ..Default::default() }).unwrap()),
        mk("thm2.7", BuiltinParams::default()),
        mk("prop3.2", BuiltinParams::default()),
        (format!("prop3.3(a={a},b={b})"), builtin(f, "prop3.3", &BuiltinParams { a: Some(a), b: Some(b), ..Default::default() }).unwrap()),
        mk("thm3.4", BuiltinParams::default()),
        mk("peyre-p12", BuiltinParams::default()),
        ("extraspecial(2)".to_string(), extraspecial(f, 2).unwrap()),
    ]
}

fn subspace_from(f: PrimeField, n: usize, d: usize, gens: &[&str]) -> Subspace {
    let rows: Vec<Vec<u32>> =
        gens.iter().map(|g| parse(f, n, g).unwrap().coords().to_vec()).collect();
    Subspace::span(f, binomial(n, d), &rows).unwrap()
}

/// Runs the whole table. Wall time is a few seconds in release builds.
pub fn run() -> Vec<Row> {
    let mut t = Table { rows: Vec::new() };
    let steps: [(&str, fn(&mut Table)); 12] = [
        ("1", criterion_1_thm24),
        ("2", criterion_2_thm26),
        ("3", criterion_3_thm27),
        ("4", criterion_4_thm34),
        ("5", criterion_5_peyre),
        ("6", criterion_6_extraspecial),
        ("7", criterion_7_prop32),
        ("8", criterion_8_prop33),
        ("9", criterion_9_case2),
        ("10", criterion_10_oracles),
        ("11", criterion_11_properties),
        ("12", criterion_12_replay),
    ];
    let trace = std::env::var_os("BRNR_SELFTEST_TRACE").is_some();
    for (name, step) in steps {
        let t0 = std::time::Instant::now();
        step(&mut t);
        if trace {
            eprintln!("criterion {name}: {:?}", t0.elapsed());
        }
    }
    t.rows
}

fn criterion_1_thm24(t: &mut Table) {
    for p in PRIMES {
        let f = field(p);
        let id = format!("1 thm2.4 p={p}");
        let spec = builtin(f, "thm2.4", &BuiltinParams::default()).unwrap();
        let obs = analyze(&spec).unwrap();
        let dims_ok = obs.report().dims() == [3, 12, 12, 3, 18, 2, 1, 19]
            && obs.brnr_dim() == 0
            && obs.h3_lower_dim() == 1
            && obs.s2 == obs.s2_dec;
        // the witness class is (1,3,5)-(1,4,6)+(2,5,6) modulo <(1,5,6)>
        let w2 = parse(f, 6, "(1,3,5)-(1,4,6)+(2,5,6)").unwrap();
        let witness_ok = obs.s3_witnesses.len() == 1 && {
            let witness =
                MultiVector::from_coords(f, 6, 3, Side::Primal, obs.s3_witnesses[0].clone())
                    .unwrap();
            obs.s3_dec.contains(witness.sub(&w2).unwrap().coords()).unwrap()
                && obs.s3_dec == subspace_from(f, 6, 3, &["(1,5,6)"])
        };
        t.check(
            id,
            dims_ok && witness_ok,
            format!(
                "dims={:?} brnr={} h3={} witness_ok={witness_ok}",
                obs.report().dims(),
                obs.brnr_dim(),
                obs.h3_lower_dim()
            ),
        );
    }
}

fn criterion_2_thm26(t: &mut Table) {
    for p in PRIMES {
        let f = field(p);
        let id = format!("2 thm2.6 sweep p={p}");
        let mut ok = true;
        let mut bad = String::new();
        for tv in 1..f.p() {
            let spec =
                builtin(f, "thm2.6", &BuiltinParams { t: Some(tv as i64), ..Default::default() })
                    .unwrap();
            let obs = analyze(&spec).unwrap();
            let expected_h3 = if f.is_nonzero_square(tv) { 0 } else { 2 };
            if obs.brnr_dim() != 0 || obs.h3_lower_dim() != expected_h3 {
                ok = false;
                bad = format!(
                    "t={tv}: brnr={} h3={} (expected 0/{expected_h3})",
                    obs.brnr_dim(),
                    obs.h3_lower_dim()
                );
                break;
            }
        }
        t.check(
            id,
            ok,
            if ok {
                format!("all {} values of t match the square dichotomy", f.p() - 1)
            } else {
                bad
            },
        );
    }
}

fn criterion_3_thm27(t: &mut Table) {
    for p in PRIMES {
        let f = field(p);
        let spec = builtin(f, "thm2.7", &BuiltinParams::default()).unwrap();
        let obs = analyze(&spec).unwrap();
        let ok = obs.brnr_dim() == 0
            && obs.h3_lower_dim() == 1
            && obs.s3_dec == subspace_from(f, 6, 3, &["(1,3,5)"]);
        t.check(
            format!("3 thm2.7 p={p}"),
            ok,
            format!("brnr={} h3={} s3_dec dim={}", obs.brnr_dim(), obs.h3_lower_dim(), obs.s3_dec.dim()),
        );
    }
}

fn criterion_4_thm34(t: &mut Table) {
    for p in PRIMES {
        let f = field(p);
        let spec = builtin(f, "thm3.4", &BuiltinParams::default()).unwrap();
        let obs = analyze(&spec).unwrap();
        let w = parse(f, 6, "(1,2,3)+(3,4,5)+(5,6,1)").unwrap();
        let wprime = parse(f, 6, "(1,3,5)").unwrap();
        let s3_expected = Subspace::span(
            f,
            binomial(6, 3),
            &[w.coords().to_vec(), wprime.coords().to_vec()],
        )
        .unwrap();
        let h3_side_ok = obs.h3_lower_dim() == 1
            && obs.order_exponent() == 15
            && obs.s3 == s3_expected
            && obs.s3_dec == subspace_from(f, 6, 3, &["(1,3,5)"]);
        // The Brauer clause brnr_dim = 0 does not hold: S2 contains the three
        // classes (1,2)+(4,5), (2,3)+(5,6), (3,4)-(1,6), whose squares are
        // nonzero, so S2_dec = <(1,3),(1,5),(3,5)> and the quotient has
        // dimension 3 at every odd p. Both enumeration oracles confirm this
        // at p = 3 (criterion 10). The row is expected to fail on this
        // clause and is kept as stated.
        let ok = h3_side_ok && obs.brnr_dim() == 0;
        t.check(
            format!("4 thm3.4 sec3 p={p}"),
            ok,
            format!(
                "h3-side ok={h3_side_ok}; brnr={} (stated expectation 0, computed {})",
                obs.brnr_dim(),
                obs.brnr_dim()
            ),
        );
        let printed = builtin(
            f,
            "thm3.4",
            &BuiltinParams { variant: Thm34Variant::Printed, ..Default::default() },
        )
        .unwrap();
        let pobs = analyze(&printed).unwrap();
        t.info(
            format!("4 thm3.4 printed p={p}"),
            format!(
                "logged without assertion: dims={:?} brnr={} h3={}",
                pobs.report().dims(),
                pobs.brnr_dim(),
                pobs.h3_lower_dim()
            ),
        );
    }
}

fn criterion_5_peyre(t: &mut Table) {
    for p in PRIMES {
        let f = field(p);
        let spec = builtin(f, "peyre-p12", &BuiltinParams::default()).unwrap();
        let obs = analyze(&spec).unwrap();
        let ok = obs.brnr_dim() == 0 && obs.h3_lower_dim() >= 1 && obs.order_exponent() == 12;
        t.check(
            format!("5 peyre-p12 p={p}"),
            ok,
            format!("brnr={} h3={} order=p^{}", obs.brnr_dim(), obs.h3_lower_dim(), obs.order_exponent()),
        );
    }
}

fn criterion_6_extraspecial(t: &mut Table) {
    for p in PRIMES {
        let f = field(p);
        for n in 1..=4usize {
            let spec = extraspecial(f, n).unwrap();
            let obs = analyze(&spec).unwrap();
            let k3_ok = if n == 1 { obs.k3.dim() == 0 } else { obs.k3.dim() == 2 * n };
            let ok = obs.brnr_dim() == 0 && obs.h3_lower_dim() == 0 && k3_ok;
            t.check(
                format!("6 extraspecial(n={n}) p={p}"),
                ok,
                format!("brnr={} h3={} dim_k3={}", obs.brnr_dim(), obs.h3_lower_dim(), obs.k3.dim()),
            );
        }
    }
    for n in 2..=10usize {
        let lhs = binomial(2 * n, 3) - 2 * n;
        let rhs = 8 * binomial(n, 3) + 2 * n * (n - 2);
        let detail = format!("C({}, 3) - {} = {} = 8*C({n},3) + 2*{n}*({n}-2)", 2 * n, 2 * n, lhs);
        if n <= 6 {
            // the larger instances double as report checks at p = 3
            let f = field(3);
            let obs = analyze(&extraspecial(f, n).unwrap()).unwrap();
            let ok = lhs == rhs
                && obs.k3.dim() == 2 * n
                && obs.s3.dim() == lhs
                && obs.h3_lower_dim() == 0;
            t.check(
                format!("6 counting identity n={n}"),
                ok,
                format!("{detail}; dim_s3={} h3={}", obs.s3.dim(), obs.h3_lower_dim()),
            );
        } else {
            t.check(format!("6 counting identity n={n}"), lhs == rhs, detail);
        }
    }
}

fn criterion_7_prop32(t: &mut Table) {
    for p in PRIMES {
        let f = field(p);
        let spec = builtin(f, "prop3.2", &BuiltinParams::default()).unwrap();
        let obs = analyze(&spec).unwrap();
        let ok = obs.brnr_dim() == 1
            && obs.h3_lower_dim() == 0
            && obs.s2.dim() == 3
            && obs.s2_dec.dim() == 2
            && obs.k3.dim() == binomial(4, 3);
        t.check(
            format!("7 prop3.2 p={p}"),
            ok,
            format!(
                "brnr={} h3={} dim_s2={} dim_s2dec={} k3 full={}",
                obs.brnr_dim(),
                obs.h3_lower_dim(),
                obs.s2.dim(),
                obs.s2_dec.dim(),
                obs.k3.dim() == binomial(4, 3)
            ),
        );
    }
}

fn criterion_8_prop33(t: &mut Table) {
    for (p, a, b) in [(3i64, 0i64, 1i64), (7, 0, 1), (5, 1, 1)] {
        let f = field(p as u64);
        let spec =
            builtin(f, "prop3.3", &BuiltinParams { a: Some(a), b: Some(b), ..Default::default() })
                .unwrap();
        let obs = analyze(&spec).unwrap();
        let ok = obs.brnr_dim() == 2 && obs.h3_lower_dim() == 0;
        t.check(
            format!("8 prop3.3(a={a},b={b}) p={p}"),
            ok,
            format!("brnr={} h3={}", obs.brnr_dim(), obs.h3_lower_dim()),
        );
    }
}

fn criterion_9_case2(t: &mut Table) {
    for p in PRIMES {
        let f = field(p);
        let w = parse(f, 6, "(1,2,3)+(4,5,6)").unwrap();
        let xw = xw_space(&w).unwrap();
        let gens = subspace_multivectors(&xw, 6, 2, Side::Dual).unwrap();
        let candidate = derive_candidate(6, &gens).unwrap();
        let outcome = evaluate_candidate(&candidate, Some(&w)).unwrap();
        let ok = outcome.classification == Classification::Clean
            && outcome.obstructions.brnr_dim() == 0
            && outcome.obstructions.h3_lower_dim() == 0;
        t.check(
            format!("9 split-target candidate p={p}"),
            ok,
            format!(
                "classification={} brnr={} h3={}",
                outcome.classification.label(),
                outcome.obstructions.brnr_dim(),
                outcome.obstructions.h3_lower_dim()
            ),
        );
    }
}

fn oracle_agrees_d2(obs: &Obstructions, n: usize) -> Result<bool> {
    let oracle = sdec_oracle(&obs.s2, n, 2, ORACLE_BUDGET)?;
    Ok(oracle == obs.s2_dec)
}

fn criterion_10_oracles(t: &mut Table) {
    let f = field(3);
    // pair-enumeration oracle, degree 2, on every catalog instance with n = 6
    let mut n6: Vec<(String, CentralExtensionSpec)> = catalog_instances(f)
        .into_iter()
        .filter(|(_, s)| s.dim_u() == 6)
        .collect();
    n6.push(("extraspecial(3)".into(), extraspecial(f, 3).unwrap()));
    n6.push((
        "thm3.4 printed".into(),
        builtin(f, "thm3.4", &BuiltinParams { variant: Thm34Variant::Printed, ..Default::default() })
            .unwrap(),
    ));
    for (name, spec) in &n6 {
        let obs = analyze(spec).unwrap();
        let ok = oracle_agrees_d2(&obs, 6).unwrap();
        t.check(format!("10 sdec-oracle d=2 {name}"), ok, format!("s2_dec dim {}", obs.s2_dec.dim()));
    }

    // degree-3 oracle on 50 seeded random presentations with n = 4
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut all_ok = true;
    let mut detail = String::from("50 random n=4 presentations agree");
    for trial in 0..50 {
        let m = rng.gen_range(1..=3usize);
        let mut entries = Vec::new();
        for i in 1..=4usize {
            for j in (i + 1)..=4 {
                let exps: Vec<i64> = (0..m).map(|_| rng.gen_range(0..3) as i64).collect();
                entries.push((i, j, exps));
            }
        }
        let spec = CentralExtensionSpec::new(f, m, 4, &entries).unwrap();
        let gamma = build_gamma(&spec);
        let k2 = k2_space(&gamma);
        let k3 = crate::obstruction::k3_space(&k2, 4).unwrap();
        let s3 = annihilator_std(&k3);
        let fast = crate::obstruction::decomposable_span(&s3, 4, 3).unwrap();
        let oracle = sdec_oracle(&s3, 4, 3, ORACLE_BUDGET).unwrap();
        if fast != oracle {
            all_ok = false;
            detail = format!("trial {trial}: sweep dim {} vs oracle dim {}", fast.dim(), oracle.dim());
            break;
        }
    }
    t.check("10 sdec-oracle d=3 random n=4", all_ok, detail);

    // Pluecker oracle on every catalog instance
    let mut instances = catalog_instances(f);
    instances.push(("extraspecial(1)".into(), extraspecial(f, 1).unwrap()));
    instances.push(("extraspecial(3)".into(), extraspecial(f, 3).unwrap()));
    for (name, spec) in &instances {
        let obs = analyze(spec).unwrap();
        let oracle = plucker_oracle_s2(&obs.s2, spec.dim_u(), ORACLE_BUDGET).unwrap();
        t.check(
            format!("10 pluecker-oracle {name}"),
            oracle == obs.s2_dec,
            format!("s2_dec dim {}", obs.s2_dec.dim()),
        );
    }
}

fn criterion_11_properties(t: &mut Table) {
    // duality bookkeeping on every catalog instance at every prime
    for p in PRIMES {
        let f = field(p);
        let mut ok = true;
        let mut detail = String::from("dim K_max - dim K = dim S - dim S_dec in both degrees");
        for (name, spec) in catalog_instances(f) {
            let obs = analyze(&spec).unwrap();
            if obs.k2_max.dim() - obs.k2.dim() != obs.s2.dim() - obs.s2_dec.dim()
                || obs.k3_max.dim() - obs.k3.dim() != obs.s3.dim() - obs.s3_dec.dim()
            {
                ok = false;
                detail = format!("duality broken for {name}");
                break;
            }
        }
        t.check(format!("11 duality p={p}"), ok, detail);
    }

    // double annihilator under random nonsingular grams
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ok = true;
    for p in PRIMES {
        let f = field(p);
        for _ in 0..20 {
            let dim = rng.gen_range(1..=8usize);
            let rows = rng.gen_range(0..=dim);
            let mk = |rng: &mut ChaCha8Rng, r: usize, c: usize| {
                let mut m = Matrix::zeros(f, r, c);
                for i in 0..r {
                    for j in 0..c {
                        m.set(i, j, rng.gen_range(0..f.p()));
                    }
                }
                m
            };
            let s = Subspace::from_matrix(&mk(&mut rng, rows, dim));
            let gram = loop {
                let g = mk(&mut rng, dim, dim);
                if g.rank() == dim {
                    break g;
                }
            };
            let back = annihilator(&annihilator(&s, &gram).unwrap(), &gram.transpose()).unwrap();
            if back != s {
                ok = false;
            }
        }
    }
    t.check("11 double annihilator", ok, "ann(ann(S, G), G^T) = S on random subspaces");

    // base-change equivariance: 20 random GL(U) transports per instance
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in PRIMES {
        let f = field(p);
        let mut ok = true;
        let mut detail = format!("20 GL(U) transports per instance at p={p}");
        'outer: for (name, spec) in catalog_instances(f) {
            let base = analyze(&spec).unwrap().report().dims();
            let n = spec.dim_u();
            let gamma = build_gamma(&spec);
            for _ in 0..20 {
                let g = loop {
                    let mut m = Matrix::zeros(f, n, n);
                    for i in 0..n {
                        for j in 0..n {
                            m.set(i, j, rng.gen_range(0..f.p()));
                        }
                    }
                    if m.rank() == n {
                        break m;
                    }
                };
                let transported = gamma
                    .matrix()
                    .mul(&induced_wedge_matrix(&g, 2).unwrap())
                    .unwrap();
                let tspec = spec_from_gamma(&transported, n).unwrap();
                let dims = analyze(&tspec).unwrap().report().dims();
                if dims != base {
                    ok = false;
                    detail = format!("{name}: {base:?} became {dims:?}");
                    break 'outer;
                }
            }
        }
        t.check(format!("11 base-change equivariance p={p}"), ok, detail);
    }

    // scaling a V-coordinate (row of gamma) never moves any dimension
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ok = true;
    let mut detail = String::from("rescaling central coordinates fixes every dimension");
    'scal: for p in PRIMES {
        let f = field(p);
        for (name, spec) in catalog_instances(f) {
            let base = analyze(&spec).unwrap().report().dims();
            let gamma = build_gamma(&spec);
            for _ in 0..5 {
                let k = rng.gen_range(0..spec.dim_v());
                let c = rng.gen_range(1..f.p());
                let mut scaled = gamma.matrix().clone();
                for col in 0..scaled.cols() {
                    let v = f.mul(scaled.get(k, col), c);
                    scaled.set(k, col, v);
                }
                let sspec = spec_from_gamma(&scaled, spec.dim_u()).unwrap();
                let dims = analyze(&sspec).unwrap().report().dims();
                if dims != base {
                    ok = false;
                    detail = format!("{name}: scaling v{} by {c} moved {base:?} to {dims:?}", k + 1);
                    break 'scal;
                }
            }
        }
    }
    t.check("11 central rescaling", ok, detail);

    // factor-test soundness by exhaustion at p = 3, n <= 4
    let f = field(3);
    let mut ok = true;
    let mut detail = String::from("witness exists iff w is a brute-force product, p=3, n<=4");
    'lemma: for n in 2..=4usize {
        for d in 2..=3usize {
            if d > n {
                continue;
            }
            // every nonzero u' ^ u, by enumeration
            let mut products: HashSet<Vec<u32>> = HashSet::new();
            for uprime in crate::obstruction::AllVectors::new(f, binomial(n, d - 1)) {
                let uprime = MultiVector::from_coords(f, n, d - 1, Side::Primal, uprime).unwrap();
                for u in crate::obstruction::AllVectors::new(f, n) {
                    let u = MultiVector::from_coords(f, n, 1, Side::Primal, u).unwrap();
                    let w = uprime.wedge(&u).unwrap();
                    if !w.is_zero() {
                        products.insert(w.coords().to_vec());
                    }
                }
            }
            for coords in crate::obstruction::AllVectors::new(f, binomial(n, d)) {
                let w = MultiVector::from_coords(f, n, d, Side::Primal, coords.clone()).unwrap();
                if w.is_zero() {
                    continue;
                }
                let witness = partial_decomposability_witness(&w).unwrap();
                if witness.is_some() != products.contains(&coords) {
                    ok = false;
                    detail = format!("mismatch at n={n} d={d}");
                    break 'lemma;
                }
                if let Some(u0) = witness {
                    let u0 = MultiVector::from_coords(f, n, 1, Side::Primal, u0).unwrap();
                    if !w.wedge(&u0).unwrap().is_zero() {
                        ok = false;
                        detail = format!("witness does not annihilate at n={n} d={d}");
                        break 'lemma;
                    }
                }
            }
        }
    }
    t.check("11 factor-test exhaustive", ok, detail);
}

fn criterion_12_replay(t: &mut Table) {
    let choices: [(&str, &[&str]); 3] = [
        ("peyre-p12", &["[1,2]-[4,5]", "[2,3]-[5,6]", "[1,4]", "[2,5]", "[3,6]", "[4,6]"]),
        ("thm2.7", &["[1,2]-[4,5]", "[2,3]-[5,6]+[1,4]", "[3,6]-[2,4]"]),
        (
            "thm3.4",
            &[
                "[1,2]-[4,5]",
                "[2,3]-[5,6]",
                "[1,4]",
                "[2,5]",
                "[3,6]",
                "[4,6]",
                "[3,4]+[1,6]",
                "[2,4]",
                "[2,6]",
            ],
        ),
    ];
    for p in PRIMES {
        let f = field(p);
        let w = parse(f, 6, "(1,2,3)+(3,4,5)+(5,6,1)").unwrap();
        for (name, gens) in &choices {
            let gens: Vec<MultiVector> = gens.iter().map(|g| parse(f, 6, g).unwrap()).collect();
            let candidate = derive_candidate(6, &gens).unwrap();
            let outcome = evaluate_candidate(&candidate, Some(&w)).unwrap();
            let reference = analyze(&builtin(f, name, &BuiltinParams::default()).unwrap()).unwrap();
            let obs = &outcome.obstructions;
            let ok = obs.report().dims() == reference.report().dims()
                && obs.k2 == reference.k2
                && obs.s2 == reference.s2
                && obs.s2_dec == reference.s2_dec
                && obs.s3 == reference.s3
                && obs.s3_dec == reference.s3_dec;
            t.check(
                format!("12 replay {name} p={p}"),
                ok,
                format!("dims {:?}", obs.report().dims()),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_reports_known_failures_only() {
        let rows = run();
        assert!(rows.len() > 40);
        let failing: Vec<&Row> =
            rows.iter().filter(|r| r.status == Status::Fail).collect();
        // the only stated expectation the computation contradicts is the
        // Brauer clause of the thm3.4 rows (one per prime)
        assert_eq!(failing.len(), 3, "unexpected failures: {failing:?}");
        for row in failing {
            assert!(row.id.starts_with("4 thm3.4 sec3"), "unexpected failure {row:?}");
        }
        // and the printed-variant rows are informational
        assert_eq!(rows.iter().filter(|r| r.status == Status::Info).count(), 3);
    }
}
