//! Fixtures shared by the benchmarks.

use ncspec::gallery;
use ncspec::{Example, Tolerance};

/// A gallery example at the default tolerance.
pub fn example(name: &str) -> Example {
    gallery::by_name(name, Tolerance::default()).expect("gallery examples build")
}

/// Both factors and the product for a gallery pair.
pub fn pair(a: &str, b: &str) -> (Example, Example, Example) {
    let (e1, e2) = (example(a), example(b));
    let product = e1.product(&e2, Tolerance::default()).expect("gallery products build");
    (e1, e2, product)
}
