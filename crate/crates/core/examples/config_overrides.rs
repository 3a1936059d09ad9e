//! Loading configuration from TOML and applying `key=value` overrides.

use sprintlab::Config;

fn main() -> sprintlab::Result<()> {
    let mut cfg = Config::from_toml_str(
        r#"
        [detection]
        sprint_threshold = 24.0
        "#,
    )?;
    cfg.set("detection.tau=3.5")?;
    cfg.set("plays.resample_points=32")?;
    println!("threshold {} tau {}", cfg.detection.sprint_threshold, cfg.detection.tau);

    if let Err(e) = cfg.set("detection.no_such_key=1") {
        println!("rejected: {e}");
    }
    print!("{}", cfg.to_toml_string());
    Ok(())
}
