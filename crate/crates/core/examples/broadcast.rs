//! CNOT copying: exact for states diagonal in the basis, lossy otherwise.

use spinhvt::qcore::{broadcast_demo, up_projector, DensityMatrix, Direction};

fn show(name: &str, rho: &DensityMatrix, basis: &Direction) -> spinhvt::Result<()> {
    let b = broadcast_demo(rho, basis)?;
    println!("{name}: copy error {:.3e}", b.copy_error(rho));
    let m = &b.reduced_object;
    for i in 0..2 {
        println!("  [{:>7.4} {:>7.4}]", m.entry(i, 0), m.entry(i, 1));
    }
    Ok(())
}

fn main() -> spinhvt::Result<()> {
    show("diag(0.3, 0.7) in z", &DensityMatrix::diagonal(&[0.3, 0.7])?, &Direction::Z)?;
    show("x up in z", &up_projector(&Direction::X)?, &Direction::Z)?;
    show("x up in x", &up_projector(&Direction::X)?, &Direction::X)?;
    Ok(())
}
