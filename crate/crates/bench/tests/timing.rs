use std::sync::Mutex;

use faddeeva::{Params64, Preset};
use faddeeva_bench::{exp_time_fraction, generate_inputs, time_implementation, ImplId, InputSpec};

// Timing tests must not share the CPU with each other.
static SERIAL: Mutex<()> = Mutex::new(());

fn inputs(size: usize) -> Vec<faddeeva::Complex64> {
    generate_inputs(&InputSpec { size, ..Default::default() }).unwrap()
}

#[test]
fn record_invariants() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let zs = inputs(1 << 20);
    let r = time_implementation(ImplId::Eq3, &zs, 5, &Params64::default()).unwrap();
    assert_eq!(r.size, 1 << 20);
    assert!(r.median_seconds > 0.0);
    assert!((r.throughput - r.size as f64 / r.median_seconds).abs() <= 1e-9 * r.throughput);
}

#[test]
fn repeated_medians_are_stable() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let zs = inputs(1 << 20);
    let p = Params64::default();
    let a = time_implementation(ImplId::Eq3, &zs, 15, &p).unwrap().median_seconds;
    let b = time_implementation(ImplId::Eq3, &zs, 15, &p).unwrap().median_seconds;
    assert!((a / b - 1.0).abs() <= 0.2, "{a} vs {b}");
}

#[test]
fn exp_fraction_orders_presets() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let zs = inputs(1 << 20);
    let high = exp_time_fraction(&zs, &Params64::from_preset(Preset::High), 5).unwrap();
    let fast = exp_time_fraction(&zs, &Params64::from_preset(Preset::Fast), 5).unwrap();
    assert!(high > 0.0 && high < 1.0 && fast > 0.0 && fast < 1.0);
    assert!(fast >= high, "fast {fast} high {high}");
}

#[test]
fn throughput_scales_linearly() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let p = Params64::default();
    let rates: Vec<f64> = [16, 20, 24]
        .iter()
        .map(|&k| time_implementation(ImplId::Eq3, &inputs(1 << k), 5, &p).unwrap().throughput)
        .collect();
    for r in &rates[1..] {
        assert!((r / rates[0] - 1.0).abs() <= 0.25, "{rates:?}");
    }
}

#[test]
fn every_implementation_passes_its_spot_check() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let zs = inputs(1 << 16);
    for id in [ImplId::Eq1, ImplId::Eq3, ImplId::Eq3Parallel, ImplId::Weideman(16), ImplId::Weideman(32)] {
        time_implementation(id, &zs, 3, &Params64::default()).unwrap();
    }
}
