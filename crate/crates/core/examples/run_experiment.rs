//! Running an experiment from code and reading back its manifest.

use padelab::expcli::{run_experiment, Experiment, ExperimentConfig};

fn main() -> padelab::Result<()> {
    let dir = std::env::temp_dir().join("padelab-example");
    let mut cfg = ExperimentConfig::new(Experiment::FigHp);
    cfg.n = Some(vec![12]);
    cfg.n_pade = Some(vec![8]);
    cfg.out = Some(dir.clone());
    let manifest = run_experiment(cfg)?;
    println!("wrote {} files to {}", manifest.files.len(), dir.display());
    for f in &manifest.files {
        println!("  {:<24} {:<6} {}", f.name, f.label.as_deref().unwrap_or(""), &f.sha256[..16]);
    }
    println!("summary: {}", manifest.summary["hermite_pade"][0]);
    Ok(())
}
