//! URL normalization and onion/surface classification.

use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::Url;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AddressError {
    #[error("malformed address {0:?}: {1}")]
    Malformed(String, url::ParseError),
    #[error("address {0:?} has no host")]
    NoHost(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Onion,
    Surface,
}

/// Page identity: lowercase scheme and host, default port dropped, fragment
/// removed; path and query kept.
pub fn normalize(address: &str) -> Result<Url, AddressError> {
    let mut url = Url::parse(address.trim()).map_err(|e| AddressError::Malformed(address.to_string(), e))?;
    if url.host_str().is_none_or(str::is_empty) {
        return Err(AddressError::NoHost(address.to_string()));
    }
    url.set_fragment(None);
    Ok(url)
}

pub fn classify(url: &Url) -> Kind {
    match url.host_str() {
        Some(h) if h.trim_end_matches('.').to_ascii_lowercase().ends_with(".onion") => Kind::Onion,
        _ => Kind::Surface,
    }
}

pub fn classify_address(address: &str) -> Result<Kind, AddressError> {
    normalize(address).map(|u| classify(&u))
}

/// Full host of the address, lowercase, without a trailing dot.
pub fn domain(url: &Url) -> String {
    url.host_str().unwrap_or_default().trim_end_matches('.').to_ascii_lowercase()
}

pub fn is_followable(url: &Url) -> bool {
    matches!(url.scheme(), "http" | "https")
}
