use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cuntz_kms::matrix01::ZeroOneMatrix;
use cuntz_kms::par::Execution;
use cuntz_kms::perron::{solve_beta, FrequencyVector};
use cuntz_kms::scalars::rat;
use cuntz_kms::states::{kms_sweep, StateSpec};
use cuntz_kms::tensorops::{verify_tensor_identity, DEFAULT_ENUMERATION_CAP};

fn spec(a: &ZeroOneMatrix, omega: &FrequencyVector) -> StateSpec {
    let sol = solve_beta(a, omega, 1e-12).unwrap();
    StateSpec::new(&sol.param, 1e-12).unwrap()
}

fn modes() -> Vec<(&'static str, Execution)> {
    let mut v = vec![("sequential", Execution::Sequential)];
    if Execution::Parallel.is_parallel() {
        v.push(("parallel", Execution::Parallel));
    }
    v
}

fn tensor_identity(c: &mut Criterion) {
    let f3 = ZeroOneMatrix::full(3).unwrap();
    let golden = ZeroOneMatrix::new(&[vec![1, 1], vec![1, 0]]).unwrap();
    let sa = spec(&f3, &FrequencyVector::from_rationals(&[rat(1, 1), rat(2, 1), rat(3, 1)]).unwrap());
    let sb = spec(&golden, &FrequencyVector::from_rationals(&[rat(1, 2), rat(3, 2)]).unwrap());
    let mut group = c.benchmark_group("verify_tensor_identity");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::new(name, "F3xgolden/len3"), &exec, |b, &exec| {
            b.iter(|| verify_tensor_identity(&sa, &sb, 3, 1e-9, DEFAULT_ENUMERATION_CAP, exec).unwrap())
        });
    }
    group.finish();
}

fn kms(c: &mut Criterion) {
    let f3 = ZeroOneMatrix::full(3).unwrap();
    let omega = FrequencyVector::from_rationals(&[rat(1, 1), rat(2, 1), rat(5, 2)]).unwrap();
    let sol = solve_beta(&f3, &omega, 1e-12).unwrap();
    let s = StateSpec::new(&sol.param, 1e-12).unwrap();
    let mut group = c.benchmark_group("kms_sweep");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::new(name, "F3/len2"), &exec, |b, &exec| {
            b.iter(|| kms_sweep(&s, &omega, sol.beta, 2, 1e-9, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, tensor_identity, kms);
criterion_main!(benches);
