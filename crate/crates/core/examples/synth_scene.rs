//! Generate a synthetic scene, save it, and check how separable it is.
//!
//! cargo run --release --example synth_scene [out_dir] [noise] [seed]

use dmlcrf::hsi::{self, synth_scene, SynthConfig};

fn main() -> dmlcrf::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "synth_out".into());
    let noise_level = args.next().and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let cfg = SynthConfig {
        noise_level,
        seed,
        ..SynthConfig::default()
    };
    let (cube, labels) = synth_scene(&cfg)?;
    std::fs::create_dir_all(&out)?;
    hsi::write_cube(format!("{out}/cube.hsic"), &cube)?;
    hsi::write_pgm(format!("{out}/labels.pgm"), &labels)?;

    let mut counts = vec![0usize; labels.classes() as usize];
    for &l in labels.labels() {
        counts[l as usize - 1] += 1;
    }
    println!(
        "{}x{}x{} cube, class sizes {:?}",
        cube.height(),
        cube.width(),
        cube.bands(),
        counts
    );

    // coarse map, one character per 2x2 block
    for r in (0..labels.height()).step_by(2) {
        let row: String = (0..labels.width())
            .step_by(2)
            .map(|c| char::from(b'0' + labels.get(r, c) as u8))
            .collect();
        println!("{row}");
    }
    Ok(())
}
