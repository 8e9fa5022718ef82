#![no_main]

use libfuzzer_sys::fuzz_target;
use pfvm::io::parse_config_str;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = parse_config_str(text) {
        let back = parse_config_str(&cfg.to_json()).expect("serialized config must parse");
        assert_eq!(back, cfg);
    }
});
