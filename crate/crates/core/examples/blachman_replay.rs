use qepi::epi::{blachman_replay, DEFAULT_T_MAX};
use qepi::phase_space::GaussianState;

fn main() -> qepi::Result<()> {
    let x = GaussianState::thermal(1, 0.5)?;
    let y = GaussianState::squeezed_vacuum(0.7);
    let (trace, report) = blachman_replay(&x, &y, DEFAULT_T_MAX, 8)?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>12}", "t", "clock_x", "clock_y", "ratio", "stam_slack");
    for k in 0..trace.times.len() {
        let slack = trace.stam_slack[k].map_or("-".to_string(), |s| format!("{s:.3e}"));
        println!(
            "{:>6.2} {:>10.5} {:>10.5} {:>10.6} {:>12}",
            trace.times[k], trace.clock_x[k], trace.clock_y[k], trace.ratio[k], slack
        );
    }
    println!("{report}");
    Ok(())
}
