//! Flat geometry of the implemented quadratic differentials: marked flat
//! tori, genus-2 slit-torus surfaces, the diagonal flow and the per-curve
//! evolution laws.

pub mod document;
pub mod evolution;
pub mod slit;
pub mod torus;

pub use evolution::{
    balance_data, cylinder_modulus_profile, cylinder_size_profile, twist_profile, CurveEvolution,
    CurveRef,
};
pub use slit::{build_counterexample_pair, CounterexampleParams, Piece, SlitSurface};
pub use torus::{FlatLength, FlatTorus, FoliationPair};

/// Either of the implemented surfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Surface {
    Torus(FlatTorus),
    Slit(SlitSurface),
}

impl Surface {
    pub fn flow(&self, t: f64) -> Surface {
        match self {
            Surface::Torus(q) => Surface::Torus(q.flow(t)),
            Surface::Slit(s) => Surface::Slit(s.flow(t)),
        }
    }

    pub fn topology(&self) -> Topology {
        match self {
            Surface::Torus(_) => Topology::Torus,
            Surface::Slit(_) => Topology::GenusTwo,
        }
    }
}

impl From<FlatTorus> for Surface {
    fn from(t: FlatTorus) -> Self {
        Surface::Torus(t)
    }
}

impl From<SlitSurface> for Surface {
    fn from(s: SlitSurface) -> Self {
        Surface::Slit(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Torus,
    GenusTwo,
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Topology::Torus => f.write_str("torus"),
            Topology::GenusTwo => f.write_str("genus-2 slit surface"),
        }
    }
}
