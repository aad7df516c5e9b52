//! The z-diagonal hidden-variable guess and why it fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use spinhvt::models::{naive_hvt_sx_check, naive_spectrum_check, violates_two_valuedness};

fn main() {
    let (up, down) = naive_hvt_sx_check();
    println!("x-up spin measured along x: ({up}, {down}), quantum mechanics says (1, 0)");
    for (t, p) in [(0.0, 0.0), (FRAC_PI_2, 0.0), (FRAC_PI_2, FRAC_PI_4), (1.0, 2.0)] {
        let vals = naive_spectrum_check(t, p);
        println!("theta {t:.3} phi {p:.3}: values {vals:?} two-valued: {}", !violates_two_valuedness(&vals));
    }
}
