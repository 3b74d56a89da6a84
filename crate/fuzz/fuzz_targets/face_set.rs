#![no_main]

use gcx_core::strata::{Face, FaceSet};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = serde_json::from_slice::<Face>(data) {
        let _ = f.to_string();
    }
    if let Ok(fs) = serde_json::from_slice::<FaceSet>(data) {
        let _ = fs.faces();
    }
});
