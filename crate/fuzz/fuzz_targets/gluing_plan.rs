#![no_main]

use gcx_core::gluing::{spherical_signatures, verify_fundamental_cycle, GluingPlan};
use libfuzzer_sys::fuzz_target;

// Plans come from files users hand to `gcx verify`; checking must reject, never panic.
fuzz_target!(|data: &[u8]| {
    let Ok(p) = serde_json::from_slice::<GluingPlan>(data) else { return };
    let _ = verify_fundamental_cycle(&p);
    let _ = spherical_signatures(&p);
});
