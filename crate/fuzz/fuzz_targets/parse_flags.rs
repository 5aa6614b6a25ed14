#![no_main]

use libfuzzer_sys::fuzz_target;
use schroeder::config::{parse_method, parse_pixels};

fuzz_target!(|data: &str| {
    if let Ok((w, h)) = parse_pixels(data) {
        assert!(w > 0 && h > 0);
    }
    if let Ok(method) = parse_method(data) {
        assert!(method.validate().is_ok());
    }
});
