//! The whole construction on a real input: suspension of the projective
//! plane, localized at 2.
//!
//! ```sh
//! cargo run --example pipeline_end_to_end
//! ```

use plocal::bounds::BoundConfig;
use plocal::em::Budget;
use plocal::postnikov::{run_pipeline, PipelineOptions, StepStatus};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/sigma_rp2.sset");
    let text = std::fs::read_to_string(path).expect("corpus file present");
    let x = plocal::formats::parse_sset(&text).expect("corpus parses");
    println!("input: suspension of the projective plane, nondegenerate {:?}", x.nondegenerate_counts());

    let opts = PipelineOptions {
        prime: 2,
        dim: None,
        budget: Budget::default(),
        bound_config: BoundConfig::default(),
    };
    let out = run_pipeline(&x, &[], &opts).expect("pipeline runs");

    println!("d = {}, pi_2 = {:?}", out.effective_d, out.stage2.pi2);
    println!(
        "stage-2 model nondegenerate: {:?}",
        out.stage2.skeleton.set.nondegenerate_counts()
    );
    println!("pruned output nondegenerate: {:?}", out.pruned.set.nondegenerate_counts());
    println!(
        "|Y| = {} <= {} (headline bound at C = {})",
        out.y_size,
        out.final_bound.value.approx_string(),
        opts.bound_config.c_log3
    );
    for v in &out.verdicts {
        let mark = match v.status {
            StepStatus::Pass => "pass",
            StepStatus::Fail => "FAIL",
            StepStatus::Skipped => "skip",
        };
        println!("  [{mark}] {}", v.name);
    }
    assert!(out.passed());
}
