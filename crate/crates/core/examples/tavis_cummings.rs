//! Heat drawn by a thermal cavity mode from two qubits, against the
//! stabilizer threshold for `Z1 + Z2`.

use magic_heat::dynamics::{overlay_window, simulate_heat_trace, tc_window, TavisCummingsConfig};

fn main() -> magic_heat::Result<()> {
    let window = tc_window(1.5)?;
    println!("E0 {:.6}, S_min {:.6}, Q_c_stab {:.6}", window.e0, window.s_min, window.q_c_stab);
    for lambda in [0.0, 0.5, 1.0] {
        let trace = simulate_heat_trace(&TavisCummingsConfig { lambda, ..Default::default() })?;
        let overlay = overlay_window(&trace, &window);
        let (i, q_min) = trace.q.iter().copied().enumerate().fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        println!(
            "lambda {lambda}: min Q {q_min:.5} at t = {:.2}, certified {}, cutoff change {:.1e}",
            trace.times[i],
            overlay.certified,
            trace.cutoff_delta.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
