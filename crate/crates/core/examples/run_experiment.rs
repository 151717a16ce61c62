//! Runs an experiment from an inline config and prints the report.

use fio_lab::lab::{run_experiment, ExperimentConfig};

const CONFIG: &str = r#"
experiment = "dyadic-decay"
seed = 3
grid = { dim = 1, half_extent = 16.0, points_per_axis = 2048 }
amplitude = { name = "hormander", m = -0.5, rho = 1.0 }
phase = { name = "wave" }
levels = [3, 6]
"#;

fn main() -> fio_lab::Result<()> {
    let cfg = ExperimentConfig::from_toml(CONFIG)?;
    cfg.validate()?;
    let report = run_experiment(&cfg);
    print!("{}", report.render());
    println!("{} measurement rows", report.csv()?.lines().count() - 1);
    Ok(())
}
