mod common;

use std::time::Instant;

use num_bigint::BigUint;
use parikh_core::chambers::box_points;
use parikh_core::langfront::{parikh_counting_function, BoundedLanguage};
use parikh_core::oracle::census_parikh;
use parikh_core::semilinear::DEFAULT_DEPTH_CAP;

#[test]
fn counting_functions_match_census() {
    for (name, text) in common::languages() {
        let start = Instant::now();
        let bl = BoundedLanguage::parse(text, 16).unwrap();
        let f = parikh_counting_function(&bl, DEFAULT_DEPTH_CAP).unwrap();
        let t = bl.alphabet().len();
        let census = census_parikh(&bl, &vec![10; t]);
        for x in box_points(t, 10) {
            let v: Vec<u64> = x.iter().map(|&c| c as u64).collect();
            let want = BigUint::from(census.get(&v).copied().unwrap_or(0));
            assert_eq!(f.eval(&v).unwrap(), want, "{name} at {v:?}");
        }
        eprintln!("{name}: {} summands, {:?}", f.summands().len(), start.elapsed());
    }
}
