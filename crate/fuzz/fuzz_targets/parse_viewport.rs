#![no_main]

use libfuzzer_sys::fuzz_target;
use schroeder::config::parse_viewport;

fuzz_target!(|input: (&str, u16, u16)| {
    let (s, w, h) = input;
    if let Ok(vp) = parse_viewport(s, w.into(), h.into()) {
        assert!(vp.validate().is_ok());
        assert!(vp.pixel_center(0, 0).is_finite());
    }
});
