//! Library side of the `systolic` command: report types, the verification
//! pipeline and rendering, kept out of `main` so tests can drive them.

pub mod render;
pub mod report;
pub mod surface;

use systolic::Error;

pub use render::Format;
pub use report::{verify, BoundsRow, DiamReport, RunOptions, Slacks, SysReport, TrigReport, VerificationReport};
pub use surface::SurfaceChoice;

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "systolic/1";

/// Environment variable overriding the group element cap.
pub const ELEMENT_CAP_VAR: &str = "SYSTOLIC_ELEMENT_CAP";

pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const RESOURCE: i32 = 3;
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidPoint { .. }
        | Error::NotUnimodular { .. }
        | Error::Domain(_)
        | Error::InvalidGenus(_)
        | Error::Construction(_) => exit::INVALID_INPUT,
        Error::ElementCap { .. } | Error::DomainNotClosed(_) => exit::RESOURCE,
        // A broken internal invariant is as alarming as a failed inequality.
        Error::Internal(_) => exit::VERIFICATION_FAILED,
    }
}

/// Element cap from [`ELEMENT_CAP_VAR`], or the library default.
pub fn element_cap_from_env() -> Result<usize, Error> {
    match std::env::var(ELEMENT_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|c| *c > 0)
            .ok_or_else(|| Error::Domain(format!("{ELEMENT_CAP_VAR}={v:?} is not a positive integer"))),
        Err(_) => Ok(systolic::tol::DEFAULT_ELEMENT_CAP),
    }
}
