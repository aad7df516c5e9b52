//! Projector reading versus model reading for the event-based models.

use spinhvt::harness::inconsistency_report;
use spinhvt::models::ModelKind;

fn main() -> spinhvt::Result<()> {
    for kind in [ModelKind::Ehvt, ModelKind::Ihvt] {
        let r = inconsistency_report(kind, 362)?;
        println!("model {kind}");
        println!("  {}: up {:.5} down {:.5}", r.projector_label, r.projector_up, r.projector_down);
        println!("  {}: up {:.5} activation {:.5}", r.model_label, r.model_up, r.model_activation);
        println!("  states differ by {:.3} (mismatch: {})", r.representation_distance, r.representation_mismatch);
    }
    Ok(())
}
