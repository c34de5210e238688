//! Runs the benchmark comparison and prints the cells outside tolerance.

use dqre::estimator::EstimatorOptions;
use dqre::validate;

fn main() -> dqre::Result<()> {
    let report = validate::run(&EstimatorOptions::default(), None)?;
    let counted = report.rows.iter().filter(|c| c.counted).count();
    let outside: Vec<_> = report.rows.iter().filter(|c| !c.within).collect();
    println!("{counted} counted cells, {} outside their own band", outside.len());
    for c in outside {
        println!(
            "  {} | {} | {}: ratio {} (group {})",
            c.application,
            c.scenario,
            c.metric,
            c.ratio.map_or("n/a".into(), |r| format!("{r:.2}")),
            if c.pass { "passes" } else { "fails" }
        );
    }
    println!(
        "{}",
        if report.passed {
            "all groups pass"
        } else {
            "some groups fail"
        }
    );
    Ok(())
}
