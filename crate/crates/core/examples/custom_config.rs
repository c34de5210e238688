//! Estimates a user-defined workload described in TOML.

use dqre::config::RunConfig;
use dqre::estimator::Estimator;

const CONFIG: &str = r#"
[hardware]
preset = "slow-optimistic"
bell_error = 0.02
bell_weights = [1.0, 0.5, 2.0]
eta = 2e4
node_size = 30000

[application]
name = "toy-chemistry"
data_qubits = 180
t_count = 3e7
eps_total = 0.001

[estimator]
eta_mode = "refined"
budget_weights = [1.0, 1.0, 2.0]
"#;

fn main() -> dqre::Result<()> {
    let cfg = RunConfig::from_toml(CONFIG)?;
    let hw = cfg.hardware.resolve("slow-optimistic")?;
    let app = cfg
        .application
        .as_ref()
        .expect("config names an application")
        .resolve()?;
    let est = Estimator::new(hw, cfg.estimator.clone())?;
    let r = est.search_distributed(&app)?.representative().clone();
    println!("{}", serde_json::to_string_pretty(&r)?);
    Ok(())
}
