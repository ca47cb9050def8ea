use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use systolic::fuchsian::{bolza_surface, surface_from_fn, FNCoords, SurfaceModel};
use systolic::{Error, Result};

/// Which surface a command runs on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceChoice {
    Bolza,
    Fn { coords: FNCoords },
}

impl SurfaceChoice {
    pub fn build(&self) -> Result<SurfaceModel> {
        match self {
            SurfaceChoice::Bolza => Ok(bolza_surface()),
            SurfaceChoice::Fn { coords } => surface_from_fn(coords),
        }
    }
}

impl fmt::Display for SurfaceChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceChoice::Bolza => write!(f, "bolza"),
            SurfaceChoice::Fn { coords } => write!(f, "fn:{coords}"),
        }
    }
}

impl FromStr for SurfaceChoice {
    type Err = Error;

    /// `bolza`, or `fn:l1,l2,l3,t1,t2,t3`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "bolza" => Ok(SurfaceChoice::Bolza),
            other => match other.strip_prefix("fn:") {
                Some(c) => Ok(SurfaceChoice::Fn { coords: c.parse()? }),
                None => Err(Error::Domain(format!("unknown surface '{s}' (expected bolza or fn:...)"))),
            },
        }
    }
}
