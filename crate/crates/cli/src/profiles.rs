//! Character n-gram language profiles: the bundled set and profile files.

use std::path::Path;

use torcontent_core::langid::LanguageProfile;

use crate::{Error, Result};

/// Training text for each bundled profile.
pub const TRAINING: [(&str, &str); 6] = [
    ("de", include_str!("../data/langid/de.txt")),
    ("en", include_str!("../data/langid/en.txt")),
    ("es", include_str!("../data/langid/es.txt")),
    ("fr", include_str!("../data/langid/fr.txt")),
    ("it", include_str!("../data/langid/it.txt")),
    ("nl", include_str!("../data/langid/nl.txt")),
];

const BUNDLED: [(&str, &str); 6] = [
    ("de", include_str!("../data/profiles/de.tsv")),
    ("en", include_str!("../data/profiles/en.tsv")),
    ("es", include_str!("../data/profiles/es.tsv")),
    ("fr", include_str!("../data/profiles/fr.tsv")),
    ("it", include_str!("../data/profiles/it.tsv")),
    ("nl", include_str!("../data/profiles/nl.tsv")),
];

pub fn bundled() -> Vec<LanguageProfile> {
    BUNDLED
        .iter()
        .map(|(label, src)| LanguageProfile::parse(label, src).expect("bundled profile is valid"))
        .collect()
}

/// Loads every `<code>.tsv` in `dir`; `en` must be among them.
pub fn load_dir(dir: &Path) -> Result<Vec<LanguageProfile>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir.display(), e))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "tsv"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let label = p.file_stem().unwrap().to_string_lossy().into_owned();
        let src = std::fs::read_to_string(&p).map_err(|e| Error::io(p.display(), e))?;
        out.push(LanguageProfile::parse(&label, &src).map_err(|e| Error::Data(format!("{}: {e}", p.display())))?);
    }
    if !out.iter().any(|p| p.label() == "en") {
        return Err(Error::Data(format!("{}: no en.tsv profile", dir.display())));
    }
    Ok(out)
}
