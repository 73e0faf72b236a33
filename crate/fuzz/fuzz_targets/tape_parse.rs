#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use qs_core::tangle::{Model, Tape};
use qs_core::{make_spec, Family};

fn model() -> &'static Model {
    static M: OnceLock<Model> = OnceLock::new();
    M.get_or_init(|| Model::new(make_spec(Family::C, 1).unwrap()).unwrap())
}

fuzz_target!(|data: &str| {
    let Ok(t) = Tape::parse(data) else {
        return;
    };
    assert_eq!(Tape::parse(&t.to_text()).as_ref(), Ok(&t));
    if t.max_width() <= 12 && t.events().len() <= 64 {
        let _ = model().evaluate(&t);
    }
});
