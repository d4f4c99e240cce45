use cdo_cli::checks;

/// Criteria that cannot pass as stated. 11: offset integrality gives
/// `C(λ) = C(μ)`, which also admits `(λ, λ)` whenever `λ ≠ -w0 λ`.
const KNOWN_RED: [u32; 1] = [11];

fn main() {
    let seed = std::env::var("CDO_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut passed = 0;
    let mut unexpected = Vec::new();
    for id in 1..=checks::COUNT {
        let o = checks::run(id, seed);
        println!("{}", o.line());
        if o.pass() {
            passed += 1;
        } else if !KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    println!("{passed} of {} criteria pass", checks::COUNT);
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
