use kummer_core::ale::EhModel;
use kummer_core::gluing::{decay_sweep, f_constant_sweep};
fn main() {
    let m = EhModel::with_default_grid(1.0).unwrap();
    let eps = [0.1, 0.05, 0.02, 0.01];
    for k in 0..=1 {
        let r = decay_sweep(&m, &eps, k).unwrap();
        println!("{}", r.summary_line());
        print!("{}", r.csv());
    }
    let r = f_constant_sweep(&m, &eps).unwrap();
    println!("{}", r.summary_line());
    print!("{}", r.csv());
}
