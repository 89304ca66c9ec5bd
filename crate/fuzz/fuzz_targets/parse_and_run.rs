#![no_main]

use cstar_fixed::cli::{parse_config, run, Job};
use libfuzzer_sys::fuzz_target;

// Keep individual runs cheap so the fuzzer explores the parser and the
// validation paths rather than long iterations.
fn small(job: &Job) -> bool {
    match job {
        Job::VerifyMetric { samples, .. } | Job::Certify { samples, .. } => *samples <= 200,
        Job::SolveCoupled { solver, .. } => solver.max_iters <= 500,
        Job::SolveFredholm {
            problem,
            samples,
            solver,
            ..
        } => problem.n <= 64 && *samples <= 200 && solver.max_iters <= 200,
        Job::DemoRemark22 {
            starts, samples, ..
        } => starts.len() <= 8 && *samples <= 200,
    }
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = parse_config(text) {
        if small(&config.job) {
            let _ = run(&config);
        }
    }
});
