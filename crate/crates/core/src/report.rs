//! Versioned JSON reports. Field order is fixed by the struct definitions
//! and floats are printed in shortest round-trip form, so equal inputs give
//! byte-identical output.

use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub schema: &'a str,
    pub version: &'a str,
    pub config: &'a RunConfig,
    #[serde(flatten)]
    pub body: &'a T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(schema: &'a str, config: &'a RunConfig, body: &'a T) -> Self {
        Report {
            schema,
            version: VERSION,
            config,
            body,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Body {
        x: f64,
        items: Vec<u32>,
    }

    #[test]
    fn report_embeds_schema_version_and_config() {
        let config = RunConfig::default();
        let body = Body { x: 0.1, items: vec![1, 2] };
        let s = to_json(&Report::new("yoccoz.test.v1", &config, &body)).unwrap();
        assert!(s.starts_with("{\n  \"schema\": \"yoccoz.test.v1\",\n  \"version\""));
        assert!(s.contains("\"x\": 0.1,"));
        assert!(s.contains("\"delta0\": 0.1"));
        assert_eq!(s, to_json(&Report::new("yoccoz.test.v1", &config, &body)).unwrap());
    }
}
