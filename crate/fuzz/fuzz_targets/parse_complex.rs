#![no_main]

use libfuzzer_sys::fuzz_target;
use schroeder::config::parse_complex;

fuzz_target!(|data: &str| {
    if let Ok(z) = parse_complex(data) {
        assert!(z.is_finite());
    }
});
