//! Drive a run from TOML text, as the `capwave` binary does, and round-trip
//! the final state through the checkpoint format.

use capwave::cli::checkpoint;
use capwave::cli::config::Config;
use capwave::evolution::evolve;

const CONFIG: &str = r#"
[grid]
N = 128

[params]
sigma = 0.25
T = 0.5
output_every = 20

[initial_data]
kind = "wave"
A = 0.02
k = 2
"#;

fn main() -> capwave::Result<()> {
    let overrides = vec!["--params.sigma=0.5".to_string()];
    let config = Config::parse(CONFIG, &overrides)?;
    let traj = evolve(config.initial_state()?, config.sim_params(true)?, "config_run", |cp| {
        let r = cp.report.as_ref().expect("reports on");
        println!("t {:.3}  E_sigma {:.6e}  A1_min {:.6}", r.t, r.e_sigma_total, r.a1_min);
    })?;

    let text = checkpoint::render(&traj.last_state, config.params.sigma, config.gravity());
    let back = checkpoint::parse(&text, config.params.dealias)?;
    assert_eq!(back.state.g.real_values(), traj.last_state.g.real_values());
    println!("{}", text.lines().next().unwrap_or_default());
    Ok(())
}
