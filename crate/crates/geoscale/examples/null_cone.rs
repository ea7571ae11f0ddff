//! Null-cone membership through the command layer and through the margin machinery.

use geoscale::cli::{run, Command, Overrides, Problem};

fn main() -> geoscale::Result<()> {
    let unstable = r#"{
        "representation": {"kind": "operator_scaling", "n": 2, "k": 1},
        "group_kind": "SL",
        "v": [[1, 0], [0, 0], [0, 0], [0, 0]]
    }"#;
    let generic = r#"{
        "representation": {"kind": "operator_scaling", "n": 2, "k": 2},
        "group_kind": "SL",
        "v": [1, 2, 0, 1, 3, 0, 1, 1]
    }"#;
    for (name, text) in [("E11", unstable), ("generic pair", generic)] {
        let problem = Problem::from_json(text)?;
        let report = run(Command::Nullcone, &problem, &Overrides { cap_log_bound: Some(5.0), ..Default::default() })?;
        println!(
            "{name}: {} after {} (‖μ‖ = {:.4})",
            report.verdict.as_deref().unwrap_or("?"),
            report.details["iterations_used"],
            report.moment_norm.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
