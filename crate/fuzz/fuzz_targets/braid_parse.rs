#![no_main]

use libfuzzer_sys::fuzz_target;
use qs_core::skein::braid_to_pd;
use qs_core::tangle::{closure_tape, parse_braid, Tape};

fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else {
        return;
    };
    let Ok(word) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok(b) = parse_braid(word, (k % 8) as usize + 1) else {
        return;
    };
    assert_eq!(parse_braid(&b.to_string(), b.strands).as_ref(), Ok(&b));
    let tape = closure_tape(&b);
    assert_eq!(Tape::parse(&tape.to_text()).as_ref(), Ok(&tape));
    assert_eq!(braid_to_pd(&b).crossing_count(), b.len());
});
