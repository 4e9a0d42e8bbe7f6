//! Writes the stock experiment definitions as editable JSON files, the same
//! ones the binary runs when `--config` is omitted. Pass a directory
//! (default `configs`).

use secoff::simkit::config::ExperimentConfig;

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "configs".into());
    std::fs::create_dir_all(&dir).expect("create output directory");
    for (name, exp) in [
        ("task_sweep.json", ExperimentConfig::default_task_sweep()),
        ("eve_distance_sweep.json", ExperimentConfig::default_distance_sweep()),
    ] {
        let path = std::path::Path::new(&dir).join(name);
        let json = serde_json::to_string_pretty(&exp).expect("config serializes");
        std::fs::write(&path, json + "\n").expect("write config file");
        println!("wrote {}", path.display());
    }
}
