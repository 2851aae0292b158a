//! Reads the datum files shipped in `data/` and runs the full theorem check
//! through the same entry point as the command-line tool.

use clap::Parser;

use hhcap::cli::{render, run, Cli, Format};

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    for file in ["identity_dual.json", "morita_dual.json", "apr_tilting.json", "apr_corrupted.json"] {
        let path = format!("{dir}/{file}");
        let cli = Cli::parse_from(["hhcap", "verify-theorem", &path, "--perturbations", "1"]);
        let outcome = run(&cli);
        let summary: Vec<String> = ["status", "checked", "refused", "first_failure"]
            .iter()
            .filter_map(|k| outcome.report.get(*k).map(|v| format!("{k}={v}")))
            .collect();
        println!("{file:<28} exit {} {}", outcome.code, summary.join(" "));
    }
    let cli = Cli::parse_from(["hhcap", "hh", &format!("{dir}/matrices_2x2.json"), "--cohomology", "--max-degree", "3"]);
    print!("{}", render(&run(&cli).report, Format::Text));
}
