#![no_main]

use libfuzzer_sys::fuzz_target;
use pcm::dataset_io::IdxFile;

fuzz_target!(|data: &[u8]| {
    if let Ok(file) = IdxFile::parse(data) {
        // Accepted input must re-encode to itself and expose consistent records.
        assert_eq!(file.to_bytes(), data);
        let n = file.records();
        if n > 0 {
            assert_eq!(file.record(n - 1).len(), file.record_len());
        }
    }
});
