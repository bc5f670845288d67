//! Uses the process-wide runtime instance the generated glue talks to.

use compar::bench::benchmark;
use compar::model::ElemType;
use compar::runtime::{global, DataDesc, RuntimeConfig, Scalar, TaskArg};

fn main() {
    let bench = benchmark("nw").unwrap();
    global::init(&bench.model(), &bench.registry(), RuntimeConfig::default()).unwrap();

    let rt = global::get().unwrap();
    let h = rt
        .register_data(DataDesc::vector(ElemType::Float, 512), None)
        .unwrap();
    let t = rt
        .submit(
            "nw",
            &[TaskArg::Handle(h), TaskArg::Scalar(Scalar::Int(512))],
        )
        .unwrap();
    println!("{:?}", rt.wait(t).unwrap().function_name);
    rt.unregister(h).unwrap();
    drop(rt);

    println!("terminated: {}", global::terminate());
}
