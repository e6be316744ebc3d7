#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

use symmetroid_core::classify::{classify_endpoints, ClassifyTolerances, Classified};
use symmetroid_core::pencil::ChartPoint;
use symmetroid_core::tracker::{endpoints_of, prepare_start, solve_nodes, StartSolutions};
use symmetroid_core::{Chart, Pencil, Sequential, TrackOptions};

pub fn start() -> &'static StartSolutions {
    static START: OnceLock<StartSolutions> = OnceLock::new();
    START.get_or_init(|| {
        let chart = Chart::random(&mut ChaCha8Rng::seed_from_u64(42));
        prepare_start(&chart, 7, &TrackOptions::default(), &Sequential).expect("start system")
    })
}

pub fn solve(p: &Pencil) -> Vec<ChartPoint> {
    let res = solve_nodes(p, start(), &TrackOptions::default(), 1, &Sequential).expect("solve");
    endpoints_of(&res).expect("all paths succeed")
}

pub fn classify(p: &Pencil, pts: &[ChartPoint]) -> Classified {
    classify_endpoints(p, pts, &start().chart.kernel(), &ClassifyTolerances::default()).expect("classify")
}

pub fn random_pencil(seed: u64) -> Pencil {
    Pencil::random_normalized(seed)
}
