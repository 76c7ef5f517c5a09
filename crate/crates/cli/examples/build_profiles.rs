//! Regenerates `data/profiles/*.tsv` from the bundled training texts.

use torcontent::core::langid::{LanguageProfile, NgramConfig};
use torcontent::profiles::TRAINING;

fn main() -> std::io::Result<()> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/profiles");
    for (label, text) in TRAINING {
        let p = LanguageProfile::from_text(label, text, &NgramConfig::default());
        std::fs::write(dir.join(format!("{label}.tsv")), p.to_tsv())?;
    }
    Ok(())
}
