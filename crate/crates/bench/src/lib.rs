//! Fixtures shared by the benchmarks.

use equipart_core::{named_scheme, AssociationScheme, Family};

pub fn scheme(name: &str) -> AssociationScheme {
    let family: Family = name.parse().expect("valid family");
    named_scheme(family, 4096).expect("family builds")
}
