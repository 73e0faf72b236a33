#![no_main]

use libfuzzer_sys::fuzz_target;
use qs_core::RingElement;

fuzz_target!(|data: &str| {
    // anything that parses must survive render -> parse unchanged
    if let Ok(p) = RingElement::parse(data) {
        let text = p.render();
        assert_eq!(RingElement::parse(&text).as_ref(), Ok(&p), "{text}");
    }
});
