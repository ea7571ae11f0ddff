//! Runs every bundled problem file through the command layer.

use geoscale::cli::{run, Command, Overrides, Problem};

fn main() -> geoscale::Result<()> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/problems");
    let jobs = [
        ("matrix_scaling.json", Command::Scale),
        ("left_right_unstable.json", Command::Nullcone),
        ("left_right_unstable.json", Command::Flow),
        ("tensor_target.json", Command::Pscale),
        ("torus_weights.json", Command::Margin),
        ("gt_capacity.json", Command::Capacity),
    ];
    for (file, cmd) in jobs {
        let text = std::fs::read_to_string(dir.join(file)).expect("bundled problem file");
        let problem = Problem::from_json(&text)?;
        let report = run(cmd, &problem, &Overrides::default())?;
        println!(
            "{file} {cmd:?}: status {}, verdict {}, exit {}, ‖μ‖ {:?}",
            report.status,
            report.verdict.as_deref().unwrap_or("-"),
            report.exit_code,
            report.moment_norm
        );
    }
    Ok(())
}
