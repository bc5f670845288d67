//! Trains a performance model, saves it, and starts a second runtime that
//! skips calibration by loading the file.

use compar::bench::benchmark;
use compar::model::ElemType;
use compar::runtime::*;

fn run(rt: &Runtime, name: &str, n: usize) -> TaskReport {
    let h = rt
        .register_data(DataDesc::vector(ElemType::Float, n), None)
        .unwrap();
    let t = rt
        .submit(
            name,
            &[TaskArg::Handle(h), TaskArg::Scalar(Scalar::Int(n as i64))],
        )
        .unwrap();
    let r = rt.wait(t).unwrap();
    rt.unregister(h).unwrap();
    r
}

fn main() {
    let bench = benchmark("crossover").unwrap();
    let config = RuntimeConfig {
        honor_env: false,
        ..RuntimeConfig::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("crossover.perf");

    let first = Runtime::init(&bench.model(), &bench.registry(), config.clone()).unwrap();
    for _ in 0..8 {
        for n in [256, 4096] {
            run(&first, &bench.name, n);
        }
    }
    first.save_perf_model(&file).unwrap();
    print!("{}", std::fs::read_to_string(&file).unwrap());

    let second = Runtime::init(&bench.model(), &bench.registry(), config).unwrap();
    second.load_perf_model(&file).unwrap();
    for n in [256, 4096] {
        let r = run(&second, &bench.name, n);
        println!("n={n}: {} ({})", r.function_name, r.mode);
    }
}
