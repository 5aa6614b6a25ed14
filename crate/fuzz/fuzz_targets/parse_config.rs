#![no_main]

use libfuzzer_sys::fuzz_target;
use schroeder::config::RunConfig;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = RunConfig::from_json(data) {
        let _ = cfg.validate();
        let again = RunConfig::from_json(&cfg.to_json()).expect("serialized config reloads");
        assert_eq!(again.to_json(), cfg.to_json());
    }
});
