#![no_main]

use libfuzzer_sys::fuzz_target;
use schroeder::ppm::{decode, encode};

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = decode(data) {
        assert_eq!(img.pixels.len(), img.width as usize * img.height as usize * 3);
        if img.maxval == 255 {
            let round = decode(&encode(img.width, img.height, &img.pixels)).unwrap();
            assert_eq!(round, img);
        }
    }
});
