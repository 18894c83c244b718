use std::f64::consts::PI;

use angleforge::closure::{closure, replay, Context, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD};
use angleforge::linalg::Angle;

fn main() {
    let runs = [
        (PI / 7.0, Context::SphereReal, 3),
        (1.4, Context::SphereReal, 3),
        (2.0 * PI / 3.0, Context::SphereReal, 3),
        (0.75 * PI, Context::SphereReal, 4),
        (1.2, Context::ProjReal, 3),
        (1.0, Context::ProjReal, 5),
        (PI / 3.0, Context::ProjReal, 4),
        (PI / 4.0, Context::ProjComplex, 3),
        (0.3, Context::ProjComplex, 3),
        (PI / 4.0, Context::ProjComplexDim2, 2),
        (1.1, Context::ProjComplexDim2, 2),
        (1.0, Context::ProjComplex, 3),
    ];
    for (seed, ctx, dim) in runs {
        let cert = closure(Angle(seed), ctx, dim, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD);
        let ok = replay(&cert).is_ok();
        println!(
            "{ctx:<18} dim {dim} seed {seed:.6}: {} in {} steps, smallest {:.3e}, replay {}",
            cert.verdict,
            cert.steps.len(),
            cert.smallest_derived().unwrap_or(f64::NAN),
            if ok { "ok" } else { "FAILED" }
        );
    }
    let cert = closure(Angle(PI / 7.0), Context::SphereReal, 3, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD);
    println!("\n{}", cert.to_text().lines().take(40).collect::<Vec<_>>().join("\n"));
}
