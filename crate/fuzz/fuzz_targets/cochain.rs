#![no_main]

use gcx_core::Cochain;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(c) = serde_json::from_slice::<Cochain>(data) else { return };
    let back: Cochain = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(c, back);
});
