//! Versioned JSON documents for fibrations, certificates and reports.
//!
//! Every document carries `kind` and `version`. Output has sorted keys and
//! is pretty-printed, so equal values serialize to identical text.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::Certificate;
use crate::decomposition::{ComponentCount, Exactness, IndexGapReport, InvariantReport};
use crate::fibration::{AbelianGroup, AbstractLF, FibrationError, Mode, Move};
use crate::lattice::{PlumbingTree, TreeError, TwistLetter};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported document version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("expected a {expected} document, found {found}")]
    Kind { expected: &'static str, found: String },
    #[error("bad torsion coefficient {0:?}")]
    Torsion(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberDoc {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleDoc {
    pub base: usize,
    #[serde(default)]
    pub word: Vec<TwistLetter>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FibrationBody {
    pub n: u32,
    pub fiber: FiberDoc,
    pub cycles: Vec<CycleDoc>,
}

impl FibrationBody {
    pub fn from_fibration(f: &AbstractLF) -> Self {
        FibrationBody {
            n: f.sphere_dim(),
            fiber: FiberDoc {
                vertices: f.fiber().vertex_count(),
                edges: f.fiber().edges().collect(),
            },
            cycles: f
                .cycles()
                .iter()
                .map(|c| CycleDoc {
                    base: c.base(),
                    word: c.word().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_fibration(&self) -> Result<AbstractLF, DocumentError> {
        let tree = PlumbingTree::new(self.fiber.vertices, self.fiber.edges.iter().copied(), self.n)?;
        let cycles = self.cycles.iter().map(|c| (c.base, c.word.clone()));
        Ok(AbstractLF::from_words(tree, cycles)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateBody {
    pub mode: Mode,
    pub start: FibrationBody,
    pub steps: Vec<Move>,
    pub end: FibrationBody,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomologyDoc {
    pub degree: u32,
    pub rank: usize,
    pub torsion: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentsDoc {
    pub value: usize,
    pub exactness: Exactness,
    pub justification: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportBody {
    pub n: u32,
    pub homology: Vec<HomologyDoc>,
    pub euler: i64,
    pub components: ComponentsDoc,
    pub index_gaps: Vec<IndexGapReport>,
    pub notes: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    kind: String,
    version: u32,
    #[serde(flatten)]
    body: T,
}

#[derive(Deserialize)]
struct Header {
    kind: String,
    version: u32,
}

fn write<T: Serialize>(kind: &str, body: &T) -> String {
    let env = Envelope {
        kind: kind.to_string(),
        version: FORMAT_VERSION,
        body,
    };
    // Going through `Value` sorts object keys.
    let value = serde_json::to_value(&env).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

fn read<T: DeserializeOwned>(expected: &'static str, text: &str) -> Result<T, DocumentError> {
    let header: Header = serde_json::from_str(text)?;
    if header.version != FORMAT_VERSION {
        return Err(DocumentError::Version(header.version));
    }
    if header.kind != expected {
        return Err(DocumentError::Kind {
            expected,
            found: header.kind,
        });
    }
    let env: Envelope<T> = serde_json::from_str(text)?;
    Ok(env.body)
}

/// The `kind` field of a document.
pub fn document_kind(text: &str) -> Result<String, DocumentError> {
    let header: Header = serde_json::from_str(text)?;
    Ok(header.kind)
}

pub fn fibration_to_json(f: &AbstractLF) -> String {
    write("fibration", &FibrationBody::from_fibration(f))
}

pub fn fibration_from_json(text: &str) -> Result<AbstractLF, DocumentError> {
    read::<FibrationBody>("fibration", text)?.to_fibration()
}

pub fn certificate_to_json(c: &Certificate) -> String {
    write(
        "certificate",
        &CertificateBody {
            mode: c.mode,
            start: FibrationBody::from_fibration(&c.start),
            steps: c.steps.clone(),
            end: FibrationBody::from_fibration(&c.claimed_end),
            provenance: c.provenance.clone(),
        },
    )
}

pub fn certificate_from_json(text: &str) -> Result<Certificate, DocumentError> {
    let body: CertificateBody = read("certificate", text)?;
    Ok(Certificate {
        mode: body.mode,
        start: body.start.to_fibration()?,
        steps: body.steps,
        claimed_end: body.end.to_fibration()?,
        provenance: body.provenance,
    })
}

pub fn report_to_json(r: &InvariantReport) -> String {
    let body = ReportBody {
        n: r.n,
        homology: r
            .homology
            .iter()
            .map(|(degree, g)| HomologyDoc {
                degree: *degree,
                rank: g.rank,
                torsion: g.torsion.iter().map(|t| t.to_string()).collect(),
            })
            .collect(),
        euler: r.euler,
        components: ComponentsDoc {
            value: r.components.value,
            exactness: r.components.exactness,
            justification: r.components.justification.clone(),
        },
        index_gaps: r.index_gaps.clone(),
        notes: r.notes.clone(),
    };
    write("report", &body)
}

pub fn report_from_json(text: &str) -> Result<InvariantReport, DocumentError> {
    let body: ReportBody = read("report", text)?;
    let homology = body
        .homology
        .into_iter()
        .map(|h| {
            let torsion = h
                .torsion
                .iter()
                .map(|t| BigInt::from_str(t).map_err(|_| DocumentError::Torsion(t.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((
                h.degree,
                AbelianGroup {
                    rank: h.rank,
                    torsion,
                },
            ))
        })
        .collect::<Result<Vec<_>, DocumentError>>()?;
    Ok(InvariantReport {
        n: body.n,
        homology,
        euler: body.euler,
        components: ComponentCount {
            value: body.components.value,
            exactness: body.components.exactness,
            justification: body.components.justification,
        },
        index_gaps: body.index_gaps,
        notes: body.notes,
    })
}
