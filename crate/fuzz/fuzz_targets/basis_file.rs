#![no_main]

use gcx_core::io::BasisFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(b) = serde_json::from_slice::<BasisFile>(data) else { return };
    let _ = b.validate();
});
