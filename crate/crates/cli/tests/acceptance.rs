//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p fibsub-cli --test acceptance`.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use fibsub::beatty::{fibonacci_word, lower_wythoff, Letter};
use fibsub::fibzeck::{decode_rep, fib, zeckendorf_encode};
use fibsub::grundy::{
    attained_values, grundy_sieve, nim_value_group, period_scan, verify_recursion, SubtractionSet,
};
use fibsub::theorem::{
    classify, verify_equivalence, verify_follower_properties, verify_partition, PositionClass,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: String, fail: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(fail)
    }
}

/// Sieve on 0..=10^6 holds only 0, 1, 2; packed in 2 bits per position; < 5 s.
fn ternary() -> Outcome {
    const N: u64 = 1_000_000;
    let start = Instant::now();
    let table =
        grundy_sieve(&SubtractionSet::odd_fibonacci_minus_one(), N).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let values = attained_values(&table);
    let bytes = table.storage_bytes();
    if let Some(x) = verify_recursion(&table) {
        return Err(format!("mex recursion fails at {x}"));
    }
    check(
        values == BTreeSet::from([0, 1, 2]) && secs < 5.0 && bytes as u64 * 8 <= 2 * (N + 1) + 64,
        format!("values {values:?}, {bytes} bytes, {secs:.2} s"),
        format!("values {values:?}, {bytes} bytes, {secs:.2} s"),
    )
}

fn equivalence() -> Outcome {
    let r = verify_equivalence(1_000_000).map_err(|e| e.to_string())?;
    check(
        r.passed && r.mismatches == 0 && r.class_counts.total() == 1_000_001,
        format!("0 mismatches on [0, 10^6], counts {:?}", r.class_counts),
        format!(
            "{} mismatches, first {:?}",
            r.mismatches, r.first_counterexample
        ),
    )
}

fn partition() -> Outcome {
    let start = Instant::now();
    let r = verify_partition(10_000_000).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let c = r.class_counts;
    check(
        r.passed && c.unclassified == 0 && c.total() == 10_000_000 && secs < 10.0,
        format!(
            "[1, 10^7] partitioned {}/{}/{} in {secs:.2} s",
            c.b, c.b1, c.ab1
        ),
        format!(
            "passed={} first {:?}, {secs:.2} s",
            r.passed, r.first_counterexample
        ),
    )
}

fn follower_steps() -> Outcome {
    let r = verify_follower_properties(100_000).map_err(|e| e.to_string())?;
    check(
        r.passed,
        format!(
            "all follower claims hold on [0, 10^5], counts {:?}",
            r.class_counts
        ),
        format!("first failure {:?}", r.first_counterexample),
    )
}

fn aperiodicity() -> Outcome {
    let table = grundy_sieve(&SubtractionSet::odd_fibonacci_minus_one(), 100_000)
        .map_err(|e| e.to_string())?;
    let report = period_scan(&table, 10_000, 50_000).map_err(|e| e.to_string())?;
    if let Some(found) = report.found {
        return Err(format!("period found: {found:?}"));
    }
    const M: usize = 1_000_000;
    let word = fibonacci_word(M);
    let disagreement = (1..=M).find(|&k| {
        let in_b = classify(k as u64).unwrap() == PositionClass::B;
        in_b != (word.at(k) == Some(Letter::B))
    });
    match disagreement {
        None => Ok("no period <= 10^4 with preperiod <= 5*10^4 on [0, 10^5]; B labels match the word on [1, 10^6]".into()),
        Some(k) => Err(format!("class and word disagree at {k}")),
    }
}

fn group() -> Outcome {
    let table = grundy_sieve(&SubtractionSet::odd_fibonacci_minus_one(), 1_000_000)
        .map_err(|e| e.to_string())?;
    let g = nim_value_group(&table);
    check(
        g == BTreeSet::from([0, 1, 2, 3]) && g.len() == 4,
        format!("closure {g:?}, order 4, dimension 2"),
        format!("closure {g:?}"),
    )
}

fn density() -> Outcome {
    const N: u64 = 1_000_000;
    const EXPECTED: f64 = 0.381966;
    let table =
        grundy_sieve(&SubtractionSet::odd_fibonacci_minus_one(), N).map_err(|e| e.to_string())?;
    let zeros = (1..=N).filter(|&x| table.value(x) == 0).count() as u64;
    let partition = verify_partition(N).map_err(|e| e.to_string())?;
    let fraction = zeros as f64 / N as f64;
    check(
        (fraction - EXPECTED).abs() <= 0.0005 && zeros == partition.class_counts.b,
        format!(
            "{zeros} zeros, fraction {fraction:.6}, partition count {}",
            partition.class_counts.b
        ),
        format!(
            "{zeros} zeros, fraction {fraction:.6}, partition count {}",
            partition.class_counts.b
        ),
    )
}

fn beatty_exactness() -> Outcome {
    const N: usize = 100_000;
    // A(10^5) = 161803
    let word = fibonacci_word(170_000);
    let from_word: Vec<u64> = word.a_positions().take(N).collect();
    if from_word.len() < N {
        return Err("word too short".into());
    }
    let bad = (1..=N).find(|&n| lower_wythoff(n as u64).ok() != Some(from_word[n - 1]));
    match bad {
        None => Ok(format!(
            "A(n) = n-th 'a' for n <= 10^5 (A(10^5) = {})",
            from_word[N - 1]
        )),
        Some(n) => Err(format!("mismatch at n = {n}")),
    }
}

fn codec() -> Outcome {
    for x in 0..=1_000_000u64 {
        let rep = zeckendorf_encode(x);
        if decode_rep(&rep) != Ok(x)
            || rep.indices().windows(2).any(|w| w[1] < w[0] + 2)
            || rep.z1().is_some_and(|z| z < 2)
        {
            return Err(format!("round trip or invariants fail at {x}"));
        }
    }
    // every non-adjacent index set over 2..=25 (F_26 > 10^5), tallied by sum
    const LIMIT: u64 = 100_000;
    let mut reps: HashMap<u64, Vec<Vec<u32>>> = HashMap::new();
    let mut stack = vec![(2u32, 0u64, Vec::<u32>::new())];
    while let Some((next, sum, chosen)) = stack.pop() {
        reps.entry(sum).or_default().push(chosen.clone());
        for i in next..=25 {
            let s = sum + fib(i).unwrap();
            if s <= LIMIT {
                let mut c = chosen.clone();
                c.push(i);
                stack.push((i + 2, s, c));
            }
        }
    }
    for x in 1..=LIMIT {
        let found = reps.get(&x).map(Vec::as_slice).unwrap_or_default();
        if found.len() != 1 || found[0] != zeckendorf_encode(x).indices() {
            return Err(format!("{x} has representations {found:?}"));
        }
    }
    Ok("round trip on [0, 10^6]; unique representation on [1, 10^5]".into())
}

fn transcript() -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = fibsub_cli::run(
        ["fibsub", "play", "2"],
        &mut "1\n".as_bytes(),
        &mut out,
        &mut err,
    );
    let text = String::from_utf8(out).map_err(|e| e.to_string())?;
    check(
        code == 0
            && text == include_str!("golden/play_start2.txt")
            && text.ends_with("no legal move, you lose\n"),
        "byte-identical golden transcript; engine wins as second player".into(),
        format!("exit {code}, transcript:\n{text}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 ternary Grundy function", ternary),
        ("2 closed form = sieve = enumeration", equivalence),
        ("3 partition of [1, 10^7]", partition),
        ("4 follower properties", follower_steps),
        ("5 aperiodicity and word labels", aperiodicity),
        ("6 nim-value group", group),
        ("7 grundy-0 density", density),
        ("8 Beatty exactness", beatty_exactness),
        ("9 Zeckendorf codec", codec),
        ("10 deterministic play transcript", transcript),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("PASS  criterion {name}: {msg} [{ms} ms]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg} [{ms} ms]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
