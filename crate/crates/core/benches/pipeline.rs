//! Benchmarks of the data-parallel stages, comparing the rayon pool against
//! single-threaded execution. With the `parallel` feature enabled (the
//! default), each workload runs on the default pool and inside a one-thread
//! pool; built with `--no-default-features` only the sequential path exists.

use criterion::{criterion_group, criterion_main, Criterion};

use toric_gcp::field::FieldCtx;
use toric_gcp::gcp::{gcp, simplex_support, GcpProblem};
use toric_gcp::geom::subdivision::mixed_volume_seeded;
use toric_gcp::geom::support::{Support, SupportTuple};
use toric_gcp::poly::{poly_from_int_terms, MultiPoly};
use toric_gcp::resultant::ResultantConfig;
use toric_gcp::rootfind::{solve, SolveOptions};

fn cube_tuple() -> SupportTuple {
    let pts: Vec<Vec<i64>> = (0..8)
        .map(|k| vec![(k & 1) as i64, ((k >> 1) & 1) as i64, ((k >> 2) & 1) as i64])
        .collect();
    let cube = Support::new(3, pts).unwrap();
    SupportTuple::new(vec![cube.clone(), cube.clone(), cube]).unwrap()
}

fn demo_problem() -> GcpProblem {
    let field = FieldCtx::Q;
    let vars = ["x", "y"];
    let f1 = poly_from_int_terms(
        &vars,
        field,
        &[(1, &[0, 0]), (2, &[1, 0]), (-2, &[2, 1]), (-5, &[1, 1]), (1, &[2, 0]), (3, &[3, 1])],
    );
    let f2 = poly_from_int_terms(
        &vars,
        field,
        &[(2, &[0, 0]), (6, &[1, 0]), (-6, &[2, 1]), (-11, &[1, 1]), (4, &[2, 0]), (5, &[3, 1])],
    );
    let x_vars: Vec<String> = vec!["x".into(), "y".into()];
    let supports = toric_gcp::gcp::inferred_supports(&[f1.clone(), f2.clone()], &x_vars).unwrap();
    let fill = SupportTuple::new(vec![
        Support::new(2, vec![vec![0, 0], vec![3, 1]]).unwrap(),
        Support::new(2, vec![vec![1, 1], vec![2, 0]]).unwrap(),
    ])
    .unwrap();
    GcpProblem {
        system: vec![f1, f2],
        x_vars,
        supports,
        chow_support: simplex_support(2),
        fill: Some(fill),
        field,
    }
}

fn bilinear_batch() -> Vec<(Vec<MultiPoly>, Vec<String>)> {
    let field = FieldCtx::Gf(101);
    let vars = ["x", "y"];
    let mut out = Vec::new();
    for k in 1..=4i64 {
        let f1 = poly_from_int_terms(
            &vars,
            field,
            &[(k, &[0, 0]), (3, &[1, 0]), (7, &[0, 1]), (2, &[1, 1])],
        );
        let f2 = poly_from_int_terms(
            &vars,
            field,
            &[(5, &[0, 0]), (k + 1, &[1, 0]), (1, &[0, 1]), (9, &[1, 1])],
        );
        out.push((vec![f1, f2], vec!["x".to_string(), "y".to_string()]));
    }
    out
}

/// Run `f` on the one-thread pool when given, otherwise inline.
#[cfg(feature = "parallel")]
fn dispatch<R: Send>(pool: Option<&rayon::ThreadPool>, f: impl Fn() -> R + Send + Sync) -> R {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn dispatch<R>(_pool: Option<&()>, f: impl Fn() -> R) -> R {
    f()
}

#[cfg(feature = "parallel")]
type Pool = rayon::ThreadPool;
#[cfg(not(feature = "parallel"))]
type Pool = ();

fn run_workloads(c: &mut Criterion, label: &str, pool: Option<&Pool>) {
    let cubes = cube_tuple();
    c.bench_function(&format!("mixed_volume_cubes/{label}"), |b| {
        b.iter(|| dispatch(pool, || mixed_volume_seeded(std::hint::black_box(&cubes), 0).unwrap()))
    });

    let problem = demo_problem();
    c.bench_function(&format!("gcp_demo_system/{label}"), |b| {
        b.iter(|| {
            dispatch(pool, || gcp(std::hint::black_box(&problem), &ResultantConfig::default()).unwrap())
        })
    });

    let batch = bilinear_batch();
    c.bench_function(&format!("solve_bilinear_batch/{label}"), |b| {
        b.iter(|| {
            dispatch(pool, || {
                for (system, x_vars) in &batch {
                    solve(system, x_vars, FieldCtx::Gf(101), &SolveOptions::default()).unwrap();
                }
            })
        })
    });
}

fn benches(c: &mut Criterion) {
    #[cfg(feature = "parallel")]
    {
        run_workloads(c, "parallel", None);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .expect("single-thread pool");
        run_workloads(c, "single-thread", Some(&pool));
    }
    #[cfg(not(feature = "parallel"))]
    run_workloads(c, "sequential", None);
}

criterion_group! {
    name = pipeline;
    config = Criterion::default().sample_size(10);
    targets = benches
}
criterion_main!(pipeline);
