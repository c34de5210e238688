//! Pareto frontier of a distributed run and its overhead over monolithic.

use dqre::catalog::{lookup_application, lookup_preset};
use dqre::estimator::{overhead, Estimator, EstimatorOptions};

fn main() -> dqre::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fermi-hubbard".into());
    let app = lookup_application(&name)?;
    let est = Estimator::new(lookup_preset("fast-optimistic")?.hardware, EstimatorOptions::default())?;
    let mono = est.search_monolithic(&app)?;
    let dist = est.search_distributed(&app)?;
    println!("{} on 45k-qubit nodes, 10 MHz links, 1% Bell error", app.name);
    println!(
        "{:>5} {:>10} {:>12} {:>4} {:>6} {:>6} {:>6} {:>9}",
        "nodes", "qubits", "runtime s", "d", "edf", "msdf", "data", "overhead"
    );
    for (i, r) in dist.frontier.iter().enumerate() {
        println!(
            "{:>5} {:>10} {:>12.4e} {:>4} {:>6.3} {:>6.3} {:>6.3} {:>9.2}{}",
            r.nodes,
            r.total_physical_qubits,
            r.runtime_s,
            r.distance,
            r.fractions.edf,
            r.fractions.msdf,
            r.fractions.data,
            overhead(r, mono.representative()),
            if i == dist.representative {
                "  <- min volume"
            } else {
                ""
            }
        );
    }
    let edf = dist.representative().config.edf.as_ref().map(|f| f.label());
    println!("representative EDF: {}", edf.unwrap_or_default());
    Ok(())
}
