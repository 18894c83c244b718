use std::f64::consts::{FRAC_PI_2, PI};

use angleforge::closure::functions::{
    case2_recursion, case4_gamma, case5_explicit, case5_recursion, ordering_classify, solve_alpha_check,
    special_constants, verify_beta_monotonicity, wrap_companion,
};
use angleforge::linalg::Angle;

fn main() -> angleforge::error::Result<()> {
    let c2 = case2_recursion(60);
    let c5 = case5_recursion(60);
    for n in [1, 2, 5, 10, 30, 60] {
        println!(
            "n {n:>2}: case2 {:.15} (pi/2 - {:.2e})  case5 {:.15} explicit {:.15}",
            c2[n - 1].rad(),
            FRAC_PI_2 - c2[n - 1].rad(),
            c5[n - 1].rad(),
            case5_explicit(n).rad()
        );
    }
    println!("case5 limit 2pi/3 = {:.15}", 2.0 * PI / 3.0);

    let a = solve_alpha_check().rad();
    println!("\nroot of 2pi - beta - a = 2a: {a:.15}");
    println!("companion at 1.28: {:.6}, at 1.29: {:.6}", wrap_companion(1.28), wrap_companion(1.29));

    let k = special_constants();
    println!("3 beta1 = 2pi - beta2 at      {:.15} (arccos(1/sqrt 5) = {:.15})", k.alpha_sqrt5.rad(), (1.0 / 5f64.sqrt()).acos());
    println!("case4 gamma = pi/2 at         {:.15} (arccos((1+sqrt 17)/8) = {:.15})", k.alpha_sqrt17.rad(), ((1.0 + 17f64.sqrt()) / 8.0).acos());
    println!("case4 gamma at pi/6: {:.12}", case4_gamma(Angle(PI / 6.0))?.rad());

    for a in [1.08, k.alpha_sqrt5.rad(), 1.2, 1.4] {
        println!("ordering at {a:.6}: dim 4 {:?}, dim 6 {:?}", ordering_classify(Angle(a), 4)?, ordering_classify(Angle(a), 6)?);
    }
    let m = verify_beta_monotonicity(1000)?;
    println!("\nbeta monotonicity on 1000 points: min d beta/d alpha {:.6}, ok {}", m.min_derivative, m.ok);
    Ok(())
}
