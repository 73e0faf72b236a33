#![no_main]

use libfuzzer_sys::fuzz_target;
use qs_core::RingElement;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    if let Ok(p) = RingElement::from_json(&v) {
        assert_eq!(RingElement::from_json(&p.to_json()).as_ref(), Ok(&p));
    }
});
