#![no_main]

use libfuzzer_sys::fuzz_target;
use pcm::config::Config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = Config::from_toml(text) {
        // Compared as text: NaN fields would defeat struct equality.
        let text = config.to_toml();
        let again = Config::from_toml(&text).expect("serialized config re-parses");
        assert_eq!(again.to_toml(), text);
    }
});
