//! Where the pair model's nonlocality sits: in which pair marginal is read.

use spinhvt::two_spin::{factorization_audit, xz_direction};

fn main() -> spinhvt::Result<()> {
    let (a, b, b2) = (xz_direction(0.0), xz_direction(45.0), xz_direction(135.0));
    let audit = factorization_audit(&a, &b, &b2)?;
    println!("reads {} or, with the remote setting changed, {}", audit.key, audit.alternative_key);
    println!("outcomes factorize:            {}", audit.outcomes_factorize);
    println!("no signaling:                  {}", audit.no_signaling);
    println!("selection uses remote setting: {}", audit.selection_depends_on_remote_setting);
    println!("joint table shift:             {:.4}", audit.joint_difference);
    println!("local in Bell's sense:         {}", audit.is_local());
    Ok(())
}
