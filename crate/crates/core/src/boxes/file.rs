//! JSON box files.
//!
//! ```json
//! {
//!   "kind": "es_box",
//!   "post_twirl": false,
//!   "branches": [
//!     { "e_c": [[re, im], ...], "u_a": [[re, im], ...], "u_b": [[re, im], ...] }
//!   ]
//! }
//! ```
//!
//! Matrices are row-major lists of `[re, im]` pairs. For `es_box` the
//! operator `e_c` is 4×4; for `ghz_from_two_epr` it is Charlie's 2×4 Kraus
//! operator and for `bell_from_ghz` his 1×2 one. Corrections are 2×2.

use serde::{Deserialize, Serialize};

use super::apply::{BranchAction, LoccBox};
use super::sub::{SubBranch, SubKind, SubPrimitiveBox};
use super::standard::{Branch, ESBox};
use crate::qcore::{Register, StateVector};
use crate::{CMatrix, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum FileKind {
    EsBox,
    GhzFromTwoEpr,
    BellFromGhz,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxFile {
    kind: FileKind,
    #[serde(default)]
    post_twirl: bool,
    branches: Vec<BranchFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchFile {
    e_c: Vec<[f64; 2]>,
    u_a: Vec<[f64; 2]>,
    u_b: Vec<[f64; 2]>,
}

fn encode(m: &CMatrix) -> Vec<[f64; 2]> {
    (0..m.nrows())
        .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
        .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
        .collect()
}

fn decode(entries: &[[f64; 2]], rows: usize, cols: usize, what: &str) -> Result<CMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::BoxFile(format!(
            "{what} has {} entries, expected {rows}×{cols}",
            entries.len()
        )));
    }
    if entries.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::BoxFile(format!("{what} has a non-finite entry")));
    }
    Ok(CMatrix::from_row_iterator(
        rows,
        cols,
        entries.iter().map(|[re, im]| C64::new(*re, *im)),
    ))
}

/// Any box the crate can build or read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyBox {
    Es(ESBox),
    Sub(SubPrimitiveBox),
}

impl AnyBox {
    pub fn as_es(&self) -> Option<&ESBox> {
        match self {
            AnyBox::Es(b) => Some(b),
            AnyBox::Sub(_) => None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let file = match self {
            AnyBox::Es(b) => BoxFile {
                kind: FileKind::EsBox,
                post_twirl: b.is_twirled(),
                branches: b
                    .branches()
                    .iter()
                    .map(|br| BranchFile {
                        e_c: encode(&br.e_c),
                        u_a: encode(&br.u_a),
                        u_b: encode(&br.u_b),
                    })
                    .collect(),
            },
            AnyBox::Sub(b) => BoxFile {
                kind: match b.kind() {
                    SubKind::GhzFromTwoEpr => FileKind::GhzFromTwoEpr,
                    SubKind::BellFromGhz => FileKind::BellFromGhz,
                },
                post_twirl: false,
                branches: b
                    .branches()
                    .iter()
                    .map(|br| BranchFile {
                        e_c: encode(&br.kraus),
                        u_a: encode(&br.u_a),
                        u_b: encode(&br.u_b),
                    })
                    .collect(),
            },
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parses a box file. Shapes are checked; validity is not, so broken
    /// boxes load and can be inspected by the validator.
    pub fn from_json(text: &str) -> Result<AnyBox> {
        let file: BoxFile =
            serde_json::from_str(text).map_err(|e| Error::BoxFile(e.to_string()))?;
        let (rows, cols) = match file.kind {
            FileKind::EsBox => (4, 4),
            FileKind::GhzFromTwoEpr => (2, 4),
            FileKind::BellFromGhz => (1, 2),
        };
        if file.kind != FileKind::EsBox && file.post_twirl {
            return Err(Error::BoxFile("only es_box supports post_twirl".into()));
        }
        let mut es = Vec::new();
        let mut sub = Vec::new();
        for (i, b) in file.branches.iter().enumerate() {
            let e_c = decode(&b.e_c, rows, cols, &format!("branch {i} e_c"))?;
            let u_a = decode(&b.u_a, 2, 2, &format!("branch {i} u_a"))?;
            let u_b = decode(&b.u_b, 2, 2, &format!("branch {i} u_b"))?;
            match file.kind {
                FileKind::EsBox => es.push(Branch { e_c, u_a, u_b }),
                _ => sub.push(SubBranch { kraus: e_c, u_a, u_b }),
            }
        }
        Ok(match file.kind {
            FileKind::EsBox => AnyBox::Es(
                ESBox::new(es, file.post_twirl).map_err(|e| Error::BoxFile(e.to_string()))?,
            ),
            FileKind::GhzFromTwoEpr => {
                AnyBox::Sub(SubPrimitiveBox::new(SubKind::GhzFromTwoEpr, sub))
            }
            FileKind::BellFromGhz => AnyBox::Sub(SubPrimitiveBox::new(SubKind::BellFromGhz, sub)),
        })
    }
}

impl From<ESBox> for AnyBox {
    fn from(b: ESBox) -> Self {
        AnyBox::Es(b)
    }
}

impl From<SubPrimitiveBox> for AnyBox {
    fn from(b: SubPrimitiveBox) -> Self {
        AnyBox::Sub(b)
    }
}

impl LoccBox for AnyBox {
    fn branch_actions(&self) -> Vec<BranchAction<'_>> {
        match self {
            AnyBox::Es(b) => b.branch_actions(),
            AnyBox::Sub(b) => b.branch_actions(),
        }
    }

    fn charlie_input(&self) -> Register {
        match self {
            AnyBox::Es(b) => b.charlie_input(),
            AnyBox::Sub(b) => b.charlie_input(),
        }
    }

    fn charlie_output(&self) -> Register {
        match self {
            AnyBox::Es(b) => b.charlie_output(),
            AnyBox::Sub(b) => b.charlie_output(),
        }
    }

    fn discards_charlie(&self) -> bool {
        match self {
            AnyBox::Es(b) => b.discards_charlie(),
            AnyBox::Sub(b) => b.discards_charlie(),
        }
    }

    fn post_twirl(&self) -> bool {
        match self {
            AnyBox::Es(b) => b.post_twirl(),
            AnyBox::Sub(b) => b.post_twirl(),
        }
    }

    fn canonical_input(&self) -> StateVector {
        match self {
            AnyBox::Es(b) => b.canonical_input(),
            AnyBox::Sub(b) => b.canonical_input(),
        }
    }
}
