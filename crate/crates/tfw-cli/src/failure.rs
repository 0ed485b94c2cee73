//! Exit-code classification: 2 for domain errors, 3 for numeric failures.

use std::fmt;

use tfw_core::energy::EnergyError;
use tfw_core::exactnum::ExactError;
use tfw_core::hamiltonian::HamError;
use tfw_core::mirror_ring::MirrorError;
use tfw_core::tropical::TropError;

pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn domain(message: impl Into<String>) -> Self {
        Failure { code: EXIT_DOMAIN, kind: "domain", message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Failure { code: EXIT_NUMERIC, kind: "numeric", message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind, self.message)
    }
}

fn exact_is_numeric(e: &ExactError) -> bool {
    matches!(e, ExactError::AmbiguousOrdering { .. })
}

fn trop_is_numeric(e: &TropError) -> bool {
    matches!(e, TropError::Exact(x) if exact_is_numeric(x))
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Self {
        if exact_is_numeric(&e) {
            Failure::numeric(e.to_string())
        } else {
            Failure::domain(e.to_string())
        }
    }
}

impl From<TropError> for Failure {
    fn from(e: TropError) -> Self {
        if trop_is_numeric(&e) {
            Failure::numeric(e.to_string())
        } else {
            Failure::domain(e.to_string())
        }
    }
}

impl From<HamError> for Failure {
    fn from(e: HamError) -> Self {
        let numeric = match &e {
            HamError::NonMonotone { .. } => true,
            HamError::Trop(t) => trop_is_numeric(t),
            _ => false,
        };
        if numeric {
            Failure::numeric(e.to_string())
        } else {
            Failure::domain(e.to_string())
        }
    }
}

impl From<EnergyError> for Failure {
    fn from(e: EnergyError) -> Self {
        let numeric = match &e {
            EnergyError::Exact(x) => exact_is_numeric(x),
            EnergyError::Trop(t) => trop_is_numeric(t),
            _ => false,
        };
        if numeric {
            Failure::numeric(e.to_string())
        } else {
            Failure::domain(e.to_string())
        }
    }
}

impl From<MirrorError> for Failure {
    fn from(e: MirrorError) -> Self {
        let numeric = match &e {
            MirrorError::CutoffExhausted(_) => true,
            MirrorError::Exact(x) => exact_is_numeric(x),
            MirrorError::Trop(t) => trop_is_numeric(t),
            _ => false,
        };
        if numeric {
            Failure::numeric(e.to_string())
        } else {
            Failure::domain(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::domain(format!("io: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::domain(format!("json: {e}"))
    }
}
