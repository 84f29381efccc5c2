//! The chain of constants from the action bounds to the quasi-geodesic parameters.

use hyperlag::lagrangian::ActionBoundLedger;
use hyperlag::qg::{compute_constants, PropConstants};

fn main() -> hyperlag::Result<()> {
    let ledger = ActionBoundLedger::new(0.5, -1.0);
    let (lo, hi) = ledger.action_bounds(2.0, 1.0)?;
    println!("C = 1/2, V_min = -1, K = 2: average action per unit time in [{lo}, {hi}]");

    // the worked chain: C_K_max(3) = 2 needs V_min = -1.5
    let worked = PropConstants::assemble(&ActionBoundLedger::new(0.5, -1.5), 10.0, 2.0, 3.0)?;
    println!(
        "K = 10, K' = 2, K'' = 3: N0 = {}, k'' = {}, lambda = {}, epsilon = {}",
        worked.n0, worked.k_window_min, worked.lambda, worked.epsilon
    );

    // a shallow bump; K' is chosen from the dyadic grid below K
    let shallow = ActionBoundLedger::new(0.5, -1.5e-4);
    let c = compute_constants(&shallow, 2.0, 2.2)?;
    println!("shallow bump, K = 2: K' = {}, N0 = {}, lambda = {:.3}, epsilon = {:.4}", c.k_prime, c.n0, c.lambda, c.epsilon);
    Ok(())
}
