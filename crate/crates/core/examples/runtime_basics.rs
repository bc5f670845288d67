//! Declares an interface in code, binds two variants, and runs a small chain
//! of tasks on shared data.

use compar::model::{AccessMode, ElemType, InterfaceSpec, ProgramModel, TargetModel};
use compar::runtime::*;

fn main() {
    let model = ProgramModel::from_interfaces(vec![InterfaceSpec::new("saxpy")
        .with_buffer("x", ElemType::Float, &["n"], AccessMode::Read)
        .with_buffer("y", ElemType::Float, &["n"], AccessMode::ReadWrite)
        .with_scalar("a", ElemType::Float)
        .with_variant("saxpy_seq", TargetModel::Seq)
        .with_variant("saxpy_cuda", TargetModel::Cuda)]);

    let saxpy = |args: &mut KernelArgs<'_>| {
        let a = args.scalar(0).as_f64() as f32;
        let (x, y) = args.read_write_pair(0, 1);
        let x = x.as_float().ok_or("x must be float")?;
        for (y, x) in y.as_float_mut().ok_or("y must be float")?.iter_mut().zip(x) {
            *y += a * x;
        }
        Ok(())
    };
    let mut registry = Registry::new();
    registry
        .register("saxpy_seq", saxpy)
        .register("saxpy_cuda", saxpy);

    let config = RuntimeConfig::default().with_workers(2, 1);
    let rt = Runtime::init(&model, &registry, config).expect("runtime starts");

    let n = 1 << 12;
    let x = rt
        .register_data(
            DataDesc::vector(ElemType::Float, n),
            Some(Buffer::Float(vec![1.0; n])),
        )
        .unwrap();
    let y = rt
        .register_data(DataDesc::vector(ElemType::Float, n), None)
        .unwrap();
    let tasks: Vec<TaskId> = (1..=10)
        .map(|a| {
            rt.submit(
                "saxpy",
                &[
                    TaskArg::Handle(x),
                    TaskArg::Handle(y),
                    TaskArg::Scalar(Scalar::Float(a as f64)),
                ],
            )
            .unwrap()
        })
        .collect();
    for t in tasks {
        let r = rt.wait(t).unwrap();
        println!(
            "task {t}: {} on worker {} ({}, {})",
            r.function_name, r.worker, r.class, r.mode
        );
    }
    let y = rt.unregister(y).unwrap();
    println!("y[0] = {}", y.as_float().unwrap()[0]);
}
