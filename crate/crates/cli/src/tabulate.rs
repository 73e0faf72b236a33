//! Append-only JSONL store of braid invariants keyed by `(name, family, rank)`.

use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};

use qs_core::tangle::{parse_braid, writhe, Model};

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub appended: usize,
    pub present: usize,
    pub skipped: usize,
}

type StoreKey = (String, String, u32);

fn key_of(v: &Value) -> Option<StoreKey> {
    Some((
        v.get("name")?.as_str()?.to_string(),
        v.get("family")?.as_str()?.to_string(),
        u32::try_from(v.get("rank")?.as_u64()?).ok()?,
    ))
}

/// Keys already in the store, and whether its last line lacks a newline.
fn load(store: &Path) -> io::Result<(HashSet<StoreKey>, bool)> {
    let text = match fs::read_to_string(store) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok((HashSet::new(), false)),
        Err(e) => return Err(e),
    };
    let mut keys = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Value>(line).ok().as_ref().and_then(key_of) {
            Some(k) => {
                keys.insert(k);
            }
            None => eprintln!("warning: {}:{}: unreadable record ignored", store.display(), i + 1),
        }
    }
    Ok((keys, !text.is_empty() && !text.ends_with('\n')))
}

/// Parses `name<TAB>strands<TAB>word`; blank lines and `#` comments yield `None`.
fn parse_line(line: &str) -> Result<Option<(&str, usize, &str)>, String> {
    let line = line.trim_end_matches(['\r', '\n']);
    if line.trim().is_empty() || line.trim_start().starts_with('#') {
        return Ok(None);
    }
    let mut parts = line.splitn(3, '\t');
    let name = parts.next().unwrap_or_default().trim();
    let strands = parts.next().ok_or("expected name<TAB>strands<TAB>word")?;
    let word = parts.next().ok_or("expected name<TAB>strands<TAB>word")?;
    if name.is_empty() {
        return Err("empty name".into());
    }
    let strands = strands.trim().parse().map_err(|_| format!("bad strand count {strands:?}"))?;
    Ok(Some((name, strands, word)))
}

pub fn run(md: &Model, input: &str, store: &Path) -> io::Result<Stats> {
    let (mut keys, ragged) = load(store)?;
    let mut file = OpenOptions::new().create(true).append(true).open(store)?;
    if ragged {
        // a torn final line from an interrupted run
        file.write_all(b"\n")?;
    }
    let family = md.spec.family.to_string();
    let rank = md.spec.rank;
    let mut stats = Stats::default();
    for (i, line) in input.lines().enumerate() {
        let (name, strands, word) = match parse_line(line) {
            Ok(Some(x)) => x,
            Ok(None) => continue,
            Err(e) => {
                eprintln!("warning: line {}: {e}", i + 1);
                stats.skipped += 1;
                continue;
            }
        };
        let key = (name.to_string(), family.clone(), rank);
        if keys.contains(&key) {
            stats.present += 1;
            continue;
        }
        let b = match parse_braid(word, strands) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("warning: line {}: {name}: {e}", i + 1);
                stats.skipped += 1;
                continue;
            }
        };
        let rec = json!({
            "name": name,
            "family": family,
            "rank": rank,
            "writhe": writhe(&b),
            "raw": md.evaluate_braid(&b).to_json(),
            "normalized": md.normalized_invariant(&b).to_json(),
        });
        writeln!(file, "{rec}")?;
        file.flush()?;
        keys.insert(key);
        stats.appended += 1;
    }
    Ok(stats)
}
