//! Timings for the straightening engine, corner algebras, eigenprofiles and
//! the truncated K-theory model.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use ob_core::combinatorics::character_std;
use ob_core::diagrams::enumerate_basis;
use ob_core::hecke::check_hecke_relations;
use ob_core::ktheory::{commutator_check, residue_window};
use ob_core::towers::{eigen_profile, CornerAlgebra};
use ob_core::{slice, Bipartition, Engine, Params, Word};

fn p2() -> Params {
    Params::new(2, 0, &["0", "2"], &["0", "1"]).unwrap()
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn straighten(c: &mut Criterion) {
    c.bench_function("verify_all/P2/context 2", |b| {
        b.iter(|| Engine::new(p2()).verify_all(black_box(2)))
    });
    let basis = enumerate_basis(&w("udu"), &w("duu"), 2);
    c.bench_function("round trip/Hom(udu, duu)/cold memo", |b| {
        b.iter(|| {
            let e = Engine::new(p2());
            for d in &basis {
                black_box(e.eval(&slice(d)).unwrap());
            }
        })
    });
    let e = Engine::new(p2());
    let square = enumerate_basis(&w("uud"), &w("uud"), 2);
    c.bench_function("compose/End(uud) basis pairs/warm memo", |b| {
        b.iter(|| {
            for g in square.iter().take(8) {
                for h in square.iter().take(8) {
                    black_box(e.compose_diagrams(g, h));
                }
            }
        })
    });
}

fn corners(c: &mut Criterion) {
    c.bench_function("hecke relations/r=2, s=1/P2", |b| {
        b.iter(|| check_hecke_relations(&Engine::new(p2()), black_box(2), black_box(1)))
    });
    c.bench_function("structure constants/corner ud/P2", |b| {
        b.iter(|| {
            let e = Engine::new(p2());
            CornerAlgebra::new(&e, &w("ud"), 8).unwrap().structure_constants(&e)
        })
    });
    c.bench_function("eigenprofile/Hom(empty, uudd)/P2", |b| {
        b.iter(|| eigen_profile(&Engine::new(p2()), &w("uudd"), &Word::empty()).unwrap())
    });
}

fn combinatorics(c: &mut Criterion) {
    let params = p2();
    c.bench_function("character/empty/max len 4/P2", |b| {
        b.iter(|| character_std(&Bipartition::empty(2), black_box(4), &params))
    });
    let window = residue_window(&params, 4);
    c.bench_function("commutators/4 boxes/P2", |b| {
        b.iter(|| {
            for i in &window {
                black_box(commutator_check(i, i, 4, &params));
            }
        })
    });
}

criterion_group!(benches, straighten, corners, combinatorics);
criterion_main!(benches);
