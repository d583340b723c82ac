//! One line per acceptance criterion: the matrix of seeded suites, their
//! record counts, and the pinned time limits.

use std::time::{Duration, Instant};

use trilevel::report::{Report, Status};
use trilevel::suites::{acceptance_matrix, with_thread_cap};

const SEED: u64 = 7;

struct Requirement {
    /// Records that must be present (passing or skipped) for the criterion.
    min_records: usize,
    /// Name prefix of the records counted towards `min_records`.
    counted: &'static str,
    limit: Option<Duration>,
}

fn requirement(criterion: usize) -> Requirement {
    let r = |min_records, counted, limit: Option<u64>| Requirement { min_records, counted, limit: limit.map(Duration::from_secs) };
    match criterion {
        1 => r(4, "kx2", Some(1)),
        2 => r(100, "verdier ", Some(120)),
        3 => r(50, "tensor-level", None),
        4 => r(20, "koszul", None),
        5 => r(100, "calculus/pushout", None),
        6 => r(100, "model/mayer-vietoris", None),
        7 => r(50, "calibration/loewy", None),
        8 => r(25, "transport", None),
        9 => r(25, "anticommute", None),
        _ => unreachable!("nine criteria"),
    }
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for (criterion, runs) in acceptance_matrix(SEED) {
        let start = Instant::now();
        let mut records = Vec::new();
        for run in &runs {
            records.extend(with_thread_cap(|| run.suite.run(&run.config)).expect("suite configuration is valid"));
        }
        let elapsed = start.elapsed();
        let report = Report::new(SEED, records);
        let need = requirement(criterion);
        let counts = report.counts();
        let counted = report.records.iter().filter(|r| r.name.starts_with(need.counted) && r.status == Status::Pass).count();
        let in_time = need.limit.is_none_or(|l| elapsed < l);
        let ok = report.passed() && counted >= need.min_records && in_time;
        let limit = need.limit.map_or(String::new(), |l| format!(" (limit {} s)", l.as_secs()));
        println!(
            "criterion {criterion}: {} | {} pass, {} fail, {} skipped | {counted} of >= {} required instances | {:.2} s{limit}",
            if ok { "PASS" } else { "FAIL" },
            counts.pass,
            counts.fail,
            counts.skipped,
            need.min_records,
            elapsed.as_secs_f64(),
        );
        for r in report.failures() {
            println!("    {} #{}: {}", r.name, r.index, r.summary);
        }
        if !ok {
            failed.push(criterion);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
