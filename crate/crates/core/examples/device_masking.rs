//! Hides one device class the way `COMPAR_NGPU=0` or `COMPAR_NCPU=0` would
//! and shows which mmul variants stay reachable.

use compar::bench::{benchmark, run_sweep};
use compar::runtime::{RuntimeConfig, ENV_NCPU, ENV_NGPU};

fn main() {
    let bench = benchmark("mmul").unwrap();
    for mask in [None, Some(ENV_NGPU), Some(ENV_NCPU)] {
        let mut config = RuntimeConfig {
            honor_env: false,
            ..RuntimeConfig::default()
        };
        config
            .apply_env(|k| (Some(k) == mask).then(|| "0".to_string()))
            .unwrap();
        let label = mask.map_or("no mask".to_string(), |m| format!("{m}=0"));
        let results = run_sweep(&bench, &[64, 1024, 8192], &config, 3).unwrap();
        let picks: Vec<String> = results
            .iter()
            .map(|r| format!("n={} -> {}", r.n, r.chosen.as_deref().unwrap_or("-")))
            .collect();
        println!("{label:>14}: {}", picks.join(", "));
    }
}
