#![no_main]

use gcx_core::diagram::canonical_labelings;
use gcx_core::Diagram;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(d) = serde_json::from_slice::<Diagram>(data) else { return };
    let back: Diagram = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
    assert_eq!(d, back);
    // Keep the labeling search small enough for the fuzzer.
    if d.edges().len() <= 8 {
        let c = canonical_labelings(&d).diagram;
        assert_eq!(canonical_labelings(&c).diagram, c);
    }
});
