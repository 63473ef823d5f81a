//! Versioned JSON documents for surfaces. Reals are written as decimal
//! strings with 17 significant digits, which round-trips every `f64`.

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::flat::slit::SlitSurface;
use crate::flat::torus::FlatTorus;
use crate::flat::Surface;

pub const SCHEMA_VERSION: u32 = 1;

pub fn encode_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn decode_real(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Document(format!("not a real number: `{s}`")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TorusDoc {
    basis: [[String; 2]; 2],
    /// Low parts of the double-double basis entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis_low: Option<[[String; 2]; 2]>,
    time: String,
    scale: String,
}

impl TorusDoc {
    fn from_torus(t: &FlatTorus) -> Self {
        let b = t.extended_base();
        let low = b.map(|row| row.map(|v| v.lo()));
        TorusDoc {
            basis: b.map(|row| row.map(|v| encode_real(v.hi()))),
            basis_low: low
                .iter()
                .flatten()
                .any(|&v| v != 0.0)
                .then(|| low.map(|row| row.map(encode_real))),
            time: encode_real(t.time()),
            scale: encode_real(t.scale()),
        }
    }

    fn to_torus(&self) -> Result<FlatTorus> {
        let mut b = [[TwoFloat::from(0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let hi = decode_real(&self.basis[i][j])?;
                let lo = match &self.basis_low {
                    Some(low) => decode_real(&low[i][j])?,
                    None => 0.0,
                };
                b[i][j] = TwoFloat::try_from((hi, lo))
                    .map_err(|_| Error::Document(format!("basis entry ({hi}, {lo}) is not normalized")))?;
            }
        }
        FlatTorus::from_extended(b, decode_real(&self.time)?, decode_real(&self.scale)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Body {
    FlatTorus(TorusDoc),
    SlitSurface {
        big: TorusDoc,
        small: TorusDoc,
        slit_holonomy: [String; 2],
        time: String,
        rel_twist: i64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Document {
    schema_version: u32,
    #[serde(flatten)]
    body: Body,
}

pub fn to_json(surface: &Surface) -> String {
    let body = match surface {
        Surface::Torus(t) => Body::FlatTorus(TorusDoc::from_torus(t)),
        Surface::Slit(s) => Body::SlitSurface {
            big: TorusDoc::from_torus(s.big()),
            small: TorusDoc::from_torus(s.small()),
            slit_holonomy: [encode_real(s.slit_base()[0]), encode_real(s.slit_base()[1])],
            time: encode_real(s.time()),
            rel_twist: s.rel_twist(),
        },
    };
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        body,
    };
    serde_json::to_string_pretty(&doc).expect("document serializes")
}

pub fn from_json(text: &str) -> Result<Surface> {
    let doc: Document = serde_json::from_str(text)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::Document(format!(
            "unsupported schema_version {}",
            doc.schema_version
        )));
    }
    match doc.body {
        Body::FlatTorus(t) => Ok(Surface::Torus(t.to_torus()?)),
        Body::SlitSurface {
            big,
            small,
            slit_holonomy,
            time,
            rel_twist,
        } => Ok(Surface::Slit(SlitSurface::from_parts(
            big.to_torus()?,
            small.to_torus()?,
            [decode_real(&slit_holonomy[0])?, decode_real(&slit_holonomy[1])?],
            decode_real(&time)?,
            rel_twist,
        ))),
    }
}
