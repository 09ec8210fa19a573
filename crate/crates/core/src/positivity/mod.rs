//! Sign witnesses, PSD checks, SOS certificates and the numeric Gram search.

mod certificate;
mod psd;
mod search;
mod witness;

pub use certificate::{verify_sos, SosCertificate, SosCertificateJson};
pub use psd::{psd_check, quadratic_form, LdlWitness, PsdResult};
pub use search::{find_sos, monomials_of_degree, SosOutcome, SosSearchConfig};
pub use witness::{battery, battery_minimum, sign_witness_search, SignWitness, SignWitnessJson, RANDOM_POINTS};
