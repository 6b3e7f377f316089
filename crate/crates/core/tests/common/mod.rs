#![allow(dead_code)]

use hadamard_weak::{Point, Space, Tolerances64};
use proptest::prelude::*;

pub const SPIKE_BRANCHES: u32 = 12;
pub const BOOK_PAGES: u32 = 8;

pub fn cfg() -> Tolerances64 {
    Tolerances64::default()
}

pub fn r2() -> Space<f64> {
    Space::euclidean(2).unwrap()
}

pub fn spike() -> Space<f64> {
    Space::spike(SPIKE_BRANCHES).unwrap()
}

pub fn book() -> Space<f64> {
    Space::book(BOOK_PAGES, 1.0).unwrap()
}

pub fn halfplane() -> Space<f64> {
    Space::halfplane()
}

pub fn all_spaces() -> Vec<(&'static str, Space<f64>)> {
    vec![
        ("euclidean", r2()),
        ("spike", spike()),
        ("book", book()),
        ("halfplane", halfplane()),
    ]
}

pub fn euclidean_point(dim: usize) -> impl Strategy<Value = Point<f64>> {
    prop::collection::vec(-4.0..4.0f64, dim).prop_map(Point::Euclidean)
}

pub fn spike_point() -> impl Strategy<Value = Point<f64>> {
    (1..=SPIKE_BRANCHES)
        .prop_flat_map(|b| (Just(b), 0.0..=b as f64))
        .prop_map(|(branch, s)| spike().point_spike(branch, s).unwrap())
}

pub fn book_point() -> impl Strategy<Value = Point<f64>> {
    (1..=BOOK_PAGES, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(page, a, b)| {
        let (u, v) = if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
        book().point_book(page, u, v).unwrap()
    })
}

pub fn halfplane_point() -> impl Strategy<Value = Point<f64>> {
    (-3.0..3.0f64, 0.05..5.0f64).prop_map(|(x, y)| Point::HalfPlane { x, y })
}

/// A space together with a strategy for its points.
pub fn space_and_points(n: usize) -> impl Strategy<Value = (Space<f64>, Vec<Point<f64>>)> {
    prop_oneof![
        prop::collection::vec(euclidean_point(2), n).prop_map(|p| (r2(), p)),
        prop::collection::vec(spike_point(), n).prop_map(|p| (spike(), p)),
        prop::collection::vec(book_point(), n).prop_map(|p| (book(), p)),
        prop::collection::vec(halfplane_point(), n).prop_map(|p| (halfplane(), p)),
    ]
}
