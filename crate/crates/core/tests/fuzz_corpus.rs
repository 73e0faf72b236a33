//! The fuzz targets' round-trip properties, run over the checked-in seeds.

use std::fs;
use std::path::PathBuf;

use qs_core::skein::{braid_to_pd, parse_pd, pd_from_json, simplify};
use qs_core::tangle::{closure_tape, parse_braid, Tape};
use qs_core::RingElement;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(b: &[u8]) -> &str {
    std::str::from_utf8(b).expect("seeds are utf-8")
}

#[test]
fn laurent_text_seeds() {
    let mut parsed = 0;
    for (name, data) in seeds("laurent_text") {
        if let Ok(p) = RingElement::parse(text(&data)) {
            parsed += 1;
            assert_eq!(RingElement::parse(&p.render()), Ok(p), "{name}");
        }
    }
    assert!(parsed >= 4);
}

#[test]
fn laurent_json_seeds() {
    let mut parsed = 0;
    for (name, data) in seeds("laurent_json") {
        let v: serde_json::Value = serde_json::from_slice(&data).unwrap();
        if let Ok(p) = RingElement::from_json(&v) {
            parsed += 1;
            assert_eq!(RingElement::from_json(&p.to_json()), Ok(p), "{name}");
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn pd_seeds() {
    let mut parsed = 0;
    for (name, data) in seeds("pd_parse") {
        if let Ok(d) = parse_pd(text(&data)) {
            parsed += 1;
            assert_eq!(pd_from_json(&d.to_json()).as_ref(), Ok(&d), "{name}");
            assert!(simplify(&d).0.crossing_count() <= d.crossing_count());
        }
    }
    assert!(parsed >= 4);
}

#[test]
fn braid_seeds() {
    let mut parsed = 0;
    for (name, data) in seeds("braid_parse") {
        let (k, rest) = data.split_first().unwrap();
        if let Ok(b) = parse_braid(text(rest), (k % 8) as usize + 1) {
            parsed += 1;
            assert_eq!(parse_braid(&b.to_string(), b.strands).as_ref(), Ok(&b), "{name}");
            let tape = closure_tape(&b);
            assert_eq!(Tape::parse(&tape.to_text()), Ok(tape));
            assert_eq!(braid_to_pd(&b).crossing_count(), b.len());
        }
    }
    assert!(parsed >= 4);
}

#[test]
fn tape_seeds() {
    let mut parsed = 0;
    for (name, data) in seeds("tape_parse") {
        if let Ok(t) = Tape::parse(text(&data)) {
            parsed += 1;
            assert_eq!(Tape::parse(&t.to_text()).as_ref(), Ok(&t), "{name}");
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn generated_pd_seeds_are_current() {
    // the trefoil and figure-eight seeds are braid_to_pd output
    for (file, word, k) in [("trefoil", "1 1 1", 2), ("figure_eight", "1 -2 1 -2", 3)] {
        let want = braid_to_pd(&parse_braid(word, k).unwrap());
        let (_, data) = seeds("pd_parse").into_iter().find(|(n, _)| n == file).expect("seed present");
        assert_eq!(parse_pd(text(&data)), Ok(want));
    }
}
