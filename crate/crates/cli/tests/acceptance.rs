//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits non-zero if any fails.

use std::collections::HashMap;
use std::time::Instant;

use normcat::arith::{carmichael_lambda, factorize, phi, Arith, BaseFn, CompositionSpec, Domain, PrimeSet};
use normcat::experiments::{
    divisor_preimage_census, lemma_fps_census, non_normality_demo, small_value_census, thin_bound,
};
use normcat::ngram::{count_stream, meager_report, CountOptions};
use normcat::wordstream::{is_eps_k_normal, truncate, Alphabet, Cut, DigitOrder};

const MSF: DigitOrder = DigitOrder::MostSignificantFirst;

// ---------------------------------------------------------------------------
// Independent oracles: plain trial division and textbook formulas.

fn oracle_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn oracle_phi(n: u64) -> u64 {
    oracle_factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn oracle_sigma(n: u64) -> u64 {
    oracle_factor(n).iter().map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1)).product()
}

fn oracle_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        oracle_gcd(b, a % b)
    }
}

fn oracle_lambda(n: u64) -> u64 {
    oracle_factor(n).iter().fold(1, |acc, &(p, e)| {
        let part = if p == 2 && e >= 3 { 1 << (e - 2) } else { (p - 1) * p.pow(e - 1) };
        acc / oracle_gcd(acc, part) * part
    })
}

fn oracle_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Exponent of `(Z/nZ)^*`: least divisor `t` of `#units` with `a^t = 1` for every unit `a`.
fn unit_group_exponent(n: u64) -> u64 {
    if n <= 2 {
        return 1;
    }
    let units: Vec<u64> = (1..n).filter(|&a| oracle_gcd(a, n) == 1).collect();
    let order = units.len() as u64;
    (1..=order)
        .filter(|t| order % t == 0)
        .find(|&t| units.iter().all(|&a| oracle_pow(a, t, n) == 1))
        .expect("the group order always works")
}

fn oracle_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut m = 2u64;
    while out.len() < count {
        if oracle_factor(m) == [(m, 1)] {
            out.push(m);
        }
        m += 1;
    }
    out
}

fn oracle_apply(chain: &[&str], mut v: u64) -> u64 {
    for f in chain.iter().rev() {
        v = match *f {
            "phi" => oracle_phi(v),
            "sigma" => oracle_sigma(v),
            "lambda" => oracle_lambda(v),
            _ => unreachable!(),
        };
    }
    v
}

fn render(v: u64, g: u32) -> String {
    match g {
        2 => format!("{v:b}"),
        10 => format!("{v}"),
        16 => format!("{v:x}"),
        _ => unreachable!(),
    }
}

fn digit_value(c: char) -> u8 {
    c.to_digit(16).unwrap() as u8
}

// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn specs() -> Vec<(&'static str, Vec<&'static str>, Vec<BaseFn>)> {
    vec![
        ("id", vec![], vec![]),
        ("phi", vec!["phi"], vec![BaseFn::Phi]),
        ("sigma", vec!["sigma"], vec![BaseFn::Sigma]),
        ("lambda", vec!["lambda"], vec![BaseFn::Lambda]),
        ("phi.sigma", vec!["phi", "sigma"], vec![BaseFn::Phi, BaseFn::Sigma]),
        ("lambda.phi", vec!["lambda", "phi"], vec![BaseFn::Lambda, BaseFn::Phi]),
    ]
}

fn criterion_1() -> Outcome {
    let ar = Arith::with_limit(1000).unwrap();
    let ten = Alphabet::new(10).unwrap();
    let show = |spec: CompositionSpec, n: usize| -> String {
        truncate(&spec, ten, MSF, n, &ar).unwrap().digits.iter().map(|d| d.to_string()).collect()
    };
    let nat = show(CompositionSpec::identity(Domain::Naturals), 17);
    let pri = show(CompositionSpec::identity(Domain::Primes), 20);
    outcome(nat == "12345678910111213" && pri == "23571113171923293137", format!("naturals {nat}, primes {pri}"))
}

/// Criteria 2 and 3 share the same runs.
fn criteria_2_and_3() -> (Outcome, Outcome) {
    let ar = Arith::with_limit(1 << 16).unwrap();
    const WORDS: usize = 20_000;
    let primes = oracle_primes(WORDS);
    let mut runs = 0;
    let mut failures2 = Vec::new();
    let mut failures3 = Vec::new();
    for (name, oracle_chain, chain) in specs() {
        for domain in [Domain::Naturals, Domain::Primes] {
            // materialize the words with the oracle
            let values: Vec<u64> = (0..WORDS)
                .map(|i| {
                    let arg = if domain == Domain::Naturals { i as u64 + 1 } else { primes[i] };
                    oracle_apply(&oracle_chain, arg)
                })
                .collect();
            for g in [2u32, 10, 16] {
                let ws: Vec<Vec<u8>> =
                    values.iter().map(|&v| render(v, g).chars().map(digit_value).collect()).collect();
                let stream: Vec<u8> = ws.iter().flatten().copied().collect();
                let alphabet = Alphabet::new(g).unwrap();
                let spec = CompositionSpec::new(chain.clone(), domain.clone());
                for k in 1..=3usize {
                    for len in [k as u64, 997, 10_000] {
                        runs += 1;
                        let r = count_stream(&spec, alphabet, MSF, k, len, CountOptions::default(), &ar).unwrap();
                        let tag = format!("{name}@{domain} g={g} k={k} N={len}");
                        let text = &stream[..len as usize];

                        // naive recount over the materialized prefix
                        let mut naive: HashMap<Vec<u8>, u64> = HashMap::new();
                        for w in text.windows(k) {
                            *naive.entry(w.to_vec()).or_default() += 1;
                        }
                        let render_w = |w: &[u8]| {
                            w.iter().map(|&d| std::char::from_digit(d as u32, 16).unwrap()).collect::<String>()
                        };
                        let mut ok2 = r.freqs.len() as u64 == (g as u64).pow(k as u32);
                        for (w, &c) in &naive {
                            ok2 &= r.entry(&render_w(w)).map(|e| e.count) == Some(c);
                        }
                        ok2 &= r.freqs.iter().filter(|e| e.count > 0).count() == naive.len();
                        if !ok2 {
                            failures2.push(tag.clone());
                        }

                        // independent decomposition: words up to the cut
                        let mut starts = Vec::new();
                        let mut pos = 0usize;
                        let mut last = 0usize;
                        for (i, w) in ws.iter().enumerate() {
                            starts.push(pos);
                            pos += w.len();
                            last = i;
                            if pos >= len as usize {
                                break;
                            }
                        }
                        let mut nu_sum: HashMap<Vec<u8>, i64> = HashMap::new();
                        for w in &ws[..=last] {
                            for win in w.windows(k) {
                                *nu_sum.entry(win.to_vec()).or_default() += 1;
                            }
                        }
                        let mut boundary: HashMap<Vec<u8>, i64> = HashMap::new();
                        for s in 0..=(len as usize - k) {
                            // a window straddles when it is not inside a single word
                            let word_of = |p: usize| starts.partition_point(|&st| st <= p) - 1;
                            if word_of(s) != word_of(s + k - 1) {
                                *boundary.entry(text[s..s + k].to_vec()).or_default() += 1;
                            }
                        }
                        let visible = len as usize - starts[last];
                        let mut tail: HashMap<Vec<u8>, i64> = HashMap::new();
                        for win in ws[last][..visible.min(ws[last].len())].windows(k) {
                            *tail.entry(win.to_vec()).or_default() += 1;
                        }
                        for win in ws[last].windows(k) {
                            *tail.entry(win.to_vec()).or_default() -= 1;
                        }
                        let total: u64 = r.freqs.iter().map(|e| e.count).sum();
                        let mut ok3 = total == len - k as u64 + 1 && r.positions == total;
                        for e in &r.freqs {
                            let key: Vec<u8> = e.word.chars().map(digit_value).collect();
                            let get = |m: &HashMap<Vec<u8>, i64>| m.get(&key).copied().unwrap_or(0);
                            ok3 &= e.nu_sum as i64 == get(&nu_sum)
                                && e.boundary as i64 == get(&boundary)
                                && e.tail == get(&tail)
                                && e.count as i64 == e.nu_sum as i64 + e.boundary as i64 + e.tail;
                        }
                        ok3 &= match r.cut {
                            Cut::Flush => visible == ws[last].len(),
                            Cut::MidWord { visible: v, .. } => v == visible,
                        };
                        if !ok3 {
                            failures3.push(tag);
                        }
                    }
                }
            }
        }
    }
    let c2 = outcome(failures2.is_empty(), format!("{runs} runs, mismatches: {failures2:?}"));
    let c3 = outcome(failures3.is_empty(), format!("{runs} runs, violations: {failures3:?}"));
    (c2, c3)
}

fn criterion_4() -> Outcome {
    let bad_formula: Vec<u64> =
        (1..=5000u64).filter(|&n| carmichael_lambda(&factorize(n)) != unit_group_exponent(n)).collect();
    let ar = Arith::with_limit(100_000).unwrap();
    let bad_div: Vec<u64> = (1..=100_000u64)
        .filter(|&n| {
            use normcat::arith::Factorize;
            let f = ar.factorize(n);
            phi(&f) % carmichael_lambda(&f) != 0
        })
        .collect();
    outcome(
        bad_formula.is_empty() && bad_div.is_empty(),
        format!("formula mismatches {bad_formula:?}, divisibility failures {bad_div:?}"),
    )
}

fn literal_check(n: u64, eps: f64, k: usize, g: u32, ord: DigitOrder) -> bool {
    let mut digits: Vec<u8> = render(n, if g == 2 { 2 } else { 10 }).chars().map(digit_value).collect();
    if ord == DigitOrder::PaperOrder {
        digits.reverse();
    }
    let len = digits.len() as f64;
    let target = (g as f64).powi(-(k as i32));
    let cells = (g as u64).pow(k as u32);
    (0..cells).all(|mut idx| {
        let mut w = vec![0u8; k];
        for slot in w.iter_mut().rev() {
            *slot = (idx % g as u64) as u8;
            idx /= g as u64;
        }
        let c = if digits.len() >= k { digits.windows(k).filter(|x| *x == &w[..]).count() } else { 0 } as f64;
        (target - eps) * len < c && c < (target + eps) * len
    })
}

fn criterion_5() -> Outcome {
    let mut mismatches = 0u64;
    let mut checked = 0u64;
    for eps in [0.02, 0.05, 0.2] {
        for k in [1usize, 2] {
            for g in [2u32, 10] {
                for ord in [MSF, DigitOrder::PaperOrder] {
                    let a = Alphabet::new(g).unwrap();
                    for n in 1..=10_000u64 {
                        checked += 1;
                        if is_eps_k_normal(n, eps, k, a, ord) != literal_check(n, eps, k, g, ord) {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    outcome(mismatches == 0, format!("{checked} cases, {mismatches} mismatches"))
}

fn criterion_6() -> Outcome {
    let ar = Arith::with_limit(1 << 16).unwrap();
    let spec = CompositionSpec::new(vec![BaseFn::Phi], Domain::Naturals);
    let ten = Alphabet::new(10).unwrap();
    let dev = |n: u64| count_stream(&spec, ten, MSF, 1, n, CountOptions::default(), &ar).unwrap().max_dev;
    let small = dev(1000);
    let large = dev(10_000_000);
    outcome(
        large < small && large <= 0.05,
        format!("max_dev N=10^3: {small:.6}, N=10^7: {large:.6} (needs < first and <= 0.05)"),
    )
}

fn criterion_7() -> Outcome {
    let ar = Arith::with_limit(1_000_000).unwrap();
    let r = lemma_fps_census(&[1_000_000], &ar).unwrap();
    let observed = r.rows[0].observed;
    let oracle = (1..=1_000_000u64)
        .filter(|&n| {
            let l = oracle_lambda(n) as u128;
            l * l < n as u128
        })
        .count() as u64;
    let bound = thin_bound(1_000_000, 1.0 / 3.0);
    outcome(
        observed == oracle && (observed as f64) <= bound && r.all_pass(),
        format!("observed {observed}, oracle {oracle}, bound {bound:.1}"),
    )
}

fn criterion_8() -> Outcome {
    let ar = Arith::with_limit(100_000).unwrap();
    let mut worst = Vec::new();
    let mut pass = true;
    for a in [BaseFn::Phi, BaseFn::Sigma, BaseFn::Lambda] {
        for d in [2u64, 3, 4, 6, 12] {
            let r = divisor_preimage_census(&a, d, &[100_000], &ar).unwrap();
            let row = &r.rows[0];
            pass &= r.all_pass() && row.bound.is_some_and(|b| row.observed as f64 <= b);
            worst.push(format!("{a}/{d}:{}", row.observed));
        }
    }
    outcome(pass, format!("observed at 10^5: {}", worst.join(" ")))
}

fn criterion_9() -> Outcome {
    let ar = Arith::with_limit(100_000).unwrap();
    let points = [100, 1000, 10_000, 100_000];
    let sigma =
        small_value_census(&CompositionSpec::new(vec![BaseFn::Sigma], Domain::Naturals), 0.5, &points, &ar).unwrap();
    let sigma_zero = sigma.rows.iter().all(|r| r.observed == 0);
    let phi1 =
        small_value_census(&CompositionSpec::new(vec![BaseFn::Phi], Domain::Naturals), 0.5, &points, &ar).unwrap();
    let phi2 =
        small_value_census(&CompositionSpec::new(vec![BaseFn::Phi; 2], Domain::Naturals), 0.5, &points, &ar).unwrap();
    let o1 = (1..=100_000u64).filter(|&n| oracle_phi(n).pow(2) < n).count() as u64;
    let o2 = (1..=100_000u64).filter(|&n| oracle_phi(oracle_phi(n)).pow(4) < n).count() as u64;
    let (c1, c2) = (phi1.rows[3].observed, phi2.rows[3].observed);
    outcome(
        sigma_zero && c1 == o1 && c2 == o2,
        format!("sigma all zero: {sigma_zero}; phi {c1} (oracle {o1}); phi.phi {c2} (oracle {o2})"),
    )
}

fn criterion_10() -> Outcome {
    let r = non_normality_demo(
        &PrimeSet::new(vec![2]).unwrap(),
        5,
        Alphabet::new(10).unwrap(),
        MSF,
        1_000_000,
        &Arith::with_limit(1 << 16).unwrap(),
    )
    .unwrap();
    let oracle_block: String = (1..=31u64).map(|i| (1u64 << i.trailing_zeros()).to_string()).collect();
    let needed = 100.0 * 1e6 * 10f64.powi(-(oracle_block.len() as i32));
    outcome(
        r.block == oracle_block && r.observed as f64 >= needed && r.meets_separation(100.0),
        format!("block length {}, observed {}, needed {needed:e}", r.block_len, r.observed),
    )
}

fn criterion_11() -> Outcome {
    let r = meager_report(0.05, 1, Alphabet::new(2).unwrap(), MSF, &[100, 1000, 10_000, 100_000, 1_000_000]).unwrap();
    let first = r.rows.first().unwrap().fraction;
    let last = r.rows.last().unwrap().fraction;
    let delta = r.fit.as_ref().map(|f| f.delta);
    outcome(
        last < first && delta.is_some_and(|d| d < 1.0),
        format!("fraction 10^2: {first:.4}, 10^6: {last:.4}, fitted delta {delta:?}"),
    )
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<(&str, Vec<&str>)> = vec![
        (
            "count",
            vec!["count", "--f", "phi.sigma", "--domain", "primes", "--base", "16", "--k", "3", "--digits", "10000"],
        ),
        ("fps", vec!["experiment", "fps", "--checkpoints", "1000000"]),
        (
            "non-normal",
            vec!["experiment", "non-normal", "--primes", "2", "--k", "5", "--base", "10", "--digits", "1000000"],
        ),
    ];
    let mut diffs = Vec::new();
    for (name, args) in &runs {
        let mut outputs = Vec::new();
        for threads in ["1", "8"] {
            let path = dir.path().join(format!("{name}-{threads}.json"));
            let mut argv = vec!["normcat", "--threads", threads];
            argv.extend(args.iter().copied());
            let path_str = path.to_str().unwrap().to_string();
            argv.extend(["--report", &path_str]);
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = normcat_cli::run(argv, &mut out, &mut err);
            assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
            outputs.push(std::fs::read(&path).unwrap());
        }
        if outputs[0] != outputs[1] {
            diffs.push(*name);
        }
    }
    outcome(diffs.is_empty(), format!("differing reports: {diffs:?}"))
}

const CRITERIA: [(u32, &str); 12] = [
    (1, "stream fidelity"),
    (2, "oracle equivalence"),
    (3, "counter conservation"),
    (4, "lambda correctness"),
    (5, "classifier agreement"),
    (6, "convergence trend"),
    (7, "lambda below sqrt census"),
    (8, "divisor census"),
    (9, "small-value census"),
    (10, "block repetition separation"),
    (11, "non-normal fraction trend"),
    (12, "determinism across thread counts"),
];

fn main() {
    // cargo passes harness flags such as `--nocapture`; only a name filter matters
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut pair: Option<(Outcome, Outcome)> = None;
    let mut failed = Vec::new();
    let mut ran = 0;
    for (id, name) in CRITERIA {
        if filter.as_ref().is_some_and(|p| !format!("criterion_{id}").contains(p.as_str())) {
            continue;
        }
        let t = Instant::now();
        let o = match id {
            1 => criterion_1(),
            2 => pair.get_or_insert_with(criteria_2_and_3).0.clone(),
            3 => pair.get_or_insert_with(criteria_2_and_3).1.clone(),
            4 => criterion_4(),
            5 => criterion_5(),
            6 => criterion_6(),
            7 => criterion_7(),
            8 => criterion_8(),
            9 => criterion_9(),
            10 => criterion_10(),
            11 => criterion_11(),
            _ => criterion_12(),
        };
        ran += 1;
        println!(
            "criterion {id:>2} {} {name} ({:.1}s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed.push(id);
        }
    }
    println!("acceptance: {} passed, {} failed {:?}", ran - failed.len(), failed.len(), failed);
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
