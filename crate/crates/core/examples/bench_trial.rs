use std::time::Instant;
use ns_spectra_core::{run_trial, SweepConfig};

fn main() {
    let mut config = SweepConfig::default();
    config.sizes = vec![512, 1024];
    config.trials_per_size = 1;
    for (i, &n) in [512usize, 1024].iter().enumerate() {
        let t = Instant::now();
        let rec = run_trial(&config, i, 0).unwrap();
        println!("n={n}: {:.2}s (final tail {:.4})", t.elapsed().as_secs_f64(), rec.steps.last().unwrap().tail_fraction);
    }
}
