#![no_main]

use libfuzzer_sys::fuzz_target;
use qs_core::skein::{kauffman_poly_with, parse_pd, pd_from_json, simplify, OracleConfig, SkeinParams};
use qs_core::{make_spec, Family};

fuzz_target!(|data: &str| {
    let Ok(d) = parse_pd(data) else {
        return;
    };
    // the serialized form must describe the same diagram
    assert_eq!(pd_from_json(&d.to_json()).as_ref(), Ok(&d));
    let (s, _) = simplify(&d);
    assert!(s.crossing_count() <= d.crossing_count());
    let params = SkeinParams::from_spec(&make_spec(Family::C, 1).unwrap());
    let config = OracleConfig {
        recursion_limit: 6,
        ..OracleConfig::default()
    };
    let _ = kauffman_poly_with(&d, &params, config);
});
