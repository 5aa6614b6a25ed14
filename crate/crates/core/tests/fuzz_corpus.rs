//! Replays the checked-in fuzz corpus through the fuzz-target invariants so
//! they are exercised on stable without cargo-fuzz.

use std::path::PathBuf;

use schroeder::config::{parse_complex, parse_method, parse_pixels, parse_viewport, RunConfig};
use schroeder::ppm::{decode, encode};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    assert!(!paths.is_empty(), "no seeds for {target}");
    paths.into_iter().map(|p| std::fs::read(p).unwrap()).collect()
}

fn text(target: &str) -> Vec<String> {
    seeds(target)
        .into_iter()
        .filter_map(|b| String::from_utf8(b).ok())
        .collect()
}

#[test]
fn complex_seeds() {
    let parsed = text("parse_complex")
        .iter()
        .filter_map(|s| parse_complex(s).ok())
        .count();
    assert!(parsed > 0);
    for s in text("parse_complex") {
        if let Ok(z) = parse_complex(&s) {
            assert!(z.is_finite(), "{s:?}");
        }
    }
}

#[test]
fn viewport_seeds() {
    for s in text("parse_viewport") {
        for (w, h) in [(1, 1), (16, 9), (0, 4)] {
            if let Ok(vp) = parse_viewport(&s, w, h) {
                assert!(vp.validate().is_ok());
                assert!(vp.pixel_center(0, 0).is_finite());
            }
        }
    }
}

#[test]
fn flag_seeds() {
    for s in text("parse_flags") {
        if let Ok((w, h)) = parse_pixels(&s) {
            assert!(w > 0 && h > 0, "{s:?}");
        }
        if let Ok(m) = parse_method(&s) {
            assert!(m.validate().is_ok(), "{s:?}");
        }
    }
}

#[test]
fn config_seeds() {
    let mut loaded = 0;
    for s in text("parse_config") {
        if let Ok(cfg) = RunConfig::from_json(&s) {
            let _ = cfg.validate();
            let again = RunConfig::from_json(&cfg.to_json()).unwrap();
            assert_eq!(again.to_json(), cfg.to_json());
            loaded += 1;
        }
    }
    assert!(loaded >= 3);
}

#[test]
fn ppm_seeds() {
    let mut decoded = 0;
    for b in seeds("decode_ppm") {
        if let Ok(img) = decode(&b) {
            assert_eq!(img.pixels.len(), img.width as usize * img.height as usize * 3);
            if img.maxval == 255 {
                assert_eq!(decode(&encode(img.width, img.height, &img.pixels)).unwrap(), img);
            }
            decoded += 1;
        }
    }
    assert!(decoded >= 2);
}
