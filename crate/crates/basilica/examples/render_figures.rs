//! Write the three standard figures: the filled Julia set, the depth-6
//! lamination (straight and hyperbolic chords), and the ι action overlay.
//! Outputs land in `target/figures/`.
//!
//! ```bash
//! cargo run -p basilica --example render_figures
//! ```

use basilica::render::{render_png, render_svg, Layer, RenderSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::path::Path::new("target/figures");
    std::fs::create_dir_all(dir)?;

    let julia = RenderSpec {
        width: 640,
        height: 400,
        max_iter: 300,
        ..RenderSpec::default()
    };
    std::fs::write(dir.join("filled_julia.svg"), render_svg(&julia)?)?;
    std::fs::write(dir.join("filled_julia.png"), render_png(&julia)?)?;

    let mut lam = RenderSpec::disk(640);
    lam.layers = vec![Layer::Lamination(6)];
    std::fs::write(dir.join("lamination_6.svg"), render_svg(&lam)?)?;
    lam.hyperbolic = true;
    std::fs::write(dir.join("lamination_6_hyperbolic.svg"), render_svg(&lam)?)?;

    let mut action = RenderSpec::disk(640);
    action.layers = vec![
        Layer::Lamination(3),
        Layer::Action("iota".parse()?),
    ];
    std::fs::write(dir.join("iota_action.svg"), render_svg(&action)?)?;

    let mut rays = RenderSpec {
        width: 640,
        height: 400,
        max_iter: 300,
        layers: vec![Layer::Filled, Layer::Rays(3)],
        ..RenderSpec::default()
    };
    rays.view = (-2.1, -1.3, 2.1, 1.3);
    std::fs::write(dir.join("rays_3.svg"), render_svg(&rays)?)?;

    for f in std::fs::read_dir(dir)? {
        let f = f?;
        println!("{} ({} bytes)", f.path().display(), f.metadata()?.len());
    }
    Ok(())
}
