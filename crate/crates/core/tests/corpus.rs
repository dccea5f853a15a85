//! Replays the fuzz corpus seeds through the fuzz targets' invariants.

use std::path::PathBuf;

use pcm::config::Config;
use pcm::dataset_io::IdxFile;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn idx_seeds() {
    let mut accepted = Vec::new();
    for (name, bytes) in seeds("idx_parse") {
        if let Ok(file) = IdxFile::parse(&bytes) {
            assert_eq!(file.to_bytes(), bytes, "{name}");
            accepted.push(name);
        }
    }
    assert_eq!(accepted, ["empty_images", "images_2x3x3", "labels_4"]);
}

#[test]
fn config_seeds_parse_and_round_trip() {
    let all = seeds("config_parse");
    assert!(all.len() >= 4);
    for (name, bytes) in all {
        let text = String::from_utf8(bytes).unwrap();
        let config = Config::from_toml(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = Config::from_toml(&config.to_toml()).unwrap();
        assert_eq!(again, config, "{name}");
    }
}
