//! Contraction windows and Gibbs admissibility across powers.

use radial_nlw::flow::{contraction_threshold, contraction_window, regime_check};

fn main() {
    println!("contraction argument closes for α < {:.6}", contraction_threshold());
    for alpha in [1.0, 2.0, 3.0, 3.2, 3.5, 4.0] {
        let window = contraction_window(alpha).map_or("empty".to_string(), |(lo, hi)| format!("({lo:.4}, {hi:.4})"));
        println!("α = {alpha}: window {window}, s = 0.9 → {:?}", regime_check(alpha, 0.9));
    }
}
