//! Emits an experiment to disk and reproduces it from the manifest.

use sparse_ldp::experiments::{replay_manifest, run_and_emit, ExperimentConfig, ExperimentKind};
use sparse_ldp::Result;

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("sparse-ldp-replay-example");
    let mut cfg = ExperimentConfig::new(1.0, 2.0, vec![200, 400], 50, 99);
    cfg.delta = 1.0;
    let (_, files) = run_and_emit(ExperimentKind::Census, &cfg, &dir)?;
    println!("wrote {}", files.manifest.display());
    let replay = replay_manifest(&files.manifest)?;
    println!("byte-identical: {}", replay.matches());
    Ok(())
}
