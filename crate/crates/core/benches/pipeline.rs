use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jabberwock_core::corpus::load_corpus;
use jabberwock_core::degrade::{build_map, degrade, make_condition, ConditionName};
use jabberwock_core::nonce::{build_pool, generator, passage_seed, Dictionary, NoncePool, PoolConstraint};
use jabberwock_core::{Execution, Parser};

fn degrade_corpus(c: &mut Criterion) {
    let corpus = load_corpus(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/corpus_150.jsonl")).unwrap();
    let parser = Parser::default();
    let pool = NoncePool::shipped();
    let mut group = c.benchmark_group("parse_and_degrade_150");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(BenchmarkId::from_parameter(format!("{exec:?}")), |b| {
            b.iter(|| {
                exec.map(&corpus.passages, |p| {
                    let parsed = parser.parse(&p.text);
                    let map = build_map(&p.id, &parsed, &pool, passage_seed(1, &p.id)).unwrap();
                    ConditionName::ALL
                        .iter()
                        .map(|&n| degrade(p, &parsed, &make_condition(n), &map).unwrap().text.len())
                        .sum::<usize>()
                })
            })
        });
    }
    group.finish();
}

fn pool(c: &mut Criterion) {
    let dict = Dictionary::embedded();
    let candidates = generator::generate(5000, 3, 3, 9);
    let mut group = c.benchmark_group("build_pool_5k");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(BenchmarkId::from_parameter(format!("{exec:?}")), |b| {
            b.iter(|| build_pool(&candidates, &dict, PoolConstraint::default(), exec).unwrap().len())
        });
    }
    group.finish();
}

criterion_group!(benches, degrade_corpus, pool);
criterion_main!(benches);
