//! The fuzz corpus seeds should all be accepted by their parsers.

use perclab::env::{ClockArray, McEstimate};
use perclab::rsk::{Partition, Tableau};
use std::path::PathBuf;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn clock_array_seeds() {
    for (name, text) in seeds("clock_array_csv") {
        let a = ClockArray::from_csv(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(ClockArray::from_csv(&a.to_csv()).unwrap(), a, "{name}");
    }
}

#[test]
fn partition_seeds() {
    for (name, text) in seeds("partition") {
        let p: Partition = text.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(p.to_string().parse::<Partition>().unwrap(), p, "{name}");
    }
}

#[test]
fn tableau_seeds() {
    for (name, text) in seeds("tableau") {
        let t: Tableau = text.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(t.to_string().parse::<Tableau>().unwrap(), t, "{name}");
    }
}

#[test]
fn mc_json_seeds() {
    for (name, text) in seeds("mc_json") {
        let e = McEstimate::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(McEstimate::from_json(&e.to_json()).unwrap(), e, "{name}");
    }
}
