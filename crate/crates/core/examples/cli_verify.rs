//! Drives the command-line front end in-process: writes a manifest, then
//! runs `invariants` and `verify` on it.

use polrig::catalog::PolarizedPair;
use polrig::cli::{run, serialize_manifest};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("polrig-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("manifest.json");
    let pairs = [
        PolarizedPair::scroll(&[1, 2])?,
        PolarizedPair::product(&[1, 1], &[1, 2])?,
    ];
    std::fs::write(&path, serialize_manifest(&pairs))?;
    let manifest = path.to_str().ok_or("non-UTF-8 temp path")?;

    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    let code = run(
        ["polrig", "invariants", "--manifest", manifest],
        &mut stdout,
        &mut stderr,
    );
    println!("exit {code}\n");
    let code = run(
        [
            "polrig",
            "verify",
            "--manifest",
            manifest,
            "--samples",
            "40000",
            "--seed",
            "7",
        ],
        &mut stdout,
        &mut stderr,
    );
    println!("exit {code}");
    Ok(())
}
