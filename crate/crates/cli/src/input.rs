//! Parsing of vectors, boxes, families and experiment specs.

use std::path::Path;

use multiform::boxvc::{self, BoxFamily, LabelArray};
use multiform::ffla::{FVector, Fp};
use multiform::mform::AlternatingForm;
use multiform::typecount::{self, LookupTable, RelationOracle, RelationTable};
use multiform::{Error, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = read_bytes(path)?;
    serde_json::from_slice(&bytes)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad {what} entry {x:?} in {s:?}")))
        })
        .collect()
}

pub fn usize_list(s: &str) -> Result<Vec<usize>> {
    parse_list(s, "index")
}

/// "1,0,2" as a vector of F_p^d; entries must already be reduced.
pub fn vector(field: Fp, d: usize, s: &str) -> Result<FVector> {
    let coords: Vec<u32> = parse_list(s, "coordinate")?;
    if coords.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: coords.len(),
        });
    }
    if let Some(&c) = coords.iter().find(|&&c| c >= field.p()) {
        return Err(Error::InvalidInput(format!(
            "coordinate {c} is not reduced mod {}",
            field.p()
        )));
    }
    Ok(FVector::new(field, coords))
}

pub fn vectors(form: &AlternatingForm, specs: &[String]) -> Result<Vec<FVector>> {
    specs
        .iter()
        .map(|s| vector(form.field(), form.dim(), s))
        .collect()
}

/// Vectors separated by ';', e.g. "1,0,0;0,1,0". The empty string is no vectors.
pub fn vector_group(form: &AlternatingForm, s: &str) -> Result<Vec<FVector>> {
    s.split(';')
        .filter(|x| !x.trim().is_empty())
        .map(|x| vector(form.field(), form.dim(), x))
        .collect()
}

/// Box parts separated by ';', e.g. "0,1;2,3".
pub fn box_parts(s: &str) -> Result<boxvc::Box> {
    Ok(boxvc::Box::new(
        s.split(';').map(usize_list).collect::<Result<_>>()?,
    ))
}

/// Binary files are recognized by their magic; anything else is read as JSON.
pub fn family(path: &Path) -> Result<BoxFamily> {
    let bytes = read_bytes(path)?;
    if bytes.starts_with(b"MFBX") {
        BoxFamily::from_bytes(&bytes)
    } else {
        serde_json::from_slice(&bytes)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
    }
}

/// How to build the oracle of a type-counting experiment.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
pub enum OracleSpec {
    Constant {
        universes: Vec<usize>,
        value: bool,
    },
    /// Lists the true points.
    Table {
        universes: Vec<usize>,
        #[serde(rename = "true")]
        true_points: Vec<Vec<usize>>,
    },
    #[serde(rename_all = "camelCase")]
    RandomTable {
        universes: Vec<usize>,
        seed: u64,
    },
    Order {
        size: usize,
    },
    Equality {
        size: usize,
    },
    BadGraph {
        k: usize,
        d: usize,
        n: usize,
    },
    FormZero {
        form: AlternatingForm,
    },
    #[serde(rename_all = "camelCase")]
    Composed {
        base: Box<OracleSpec>,
        fns: Vec<LookupTable>,
        slot_map: Vec<Vec<usize>>,
        universes: Vec<usize>,
    },
}

const MAX_TABLE_CELLS: usize = 1 << 24;

fn table_cells(universes: &[usize]) -> Result<usize> {
    universes
        .iter()
        .try_fold(1usize, |acc, &u| acc.checked_mul(u))
        .filter(|&c| c <= MAX_TABLE_CELLS)
        .ok_or_else(|| Error::SizeGuard(format!("relation table over {universes:?} is too large")))
}

impl OracleSpec {
    pub fn build(&self) -> Result<RelationOracle> {
        Ok(match self {
            OracleSpec::Constant { universes, value } => {
                RelationOracle::constant(universes.clone(), *value)
            }
            OracleSpec::Table {
                universes,
                true_points,
            } => {
                table_cells(universes)?;
                for pt in true_points {
                    if pt.len() != universes.len()
                        || pt.iter().zip(universes).any(|(&x, &u)| x >= u)
                    {
                        return Err(Error::OutOfRange(format!(
                            "point {pt:?} outside {universes:?}"
                        )));
                    }
                }
                let pts: std::collections::HashSet<Vec<usize>> =
                    true_points.iter().cloned().collect();
                RelationOracle::table(RelationTable::from_fn(universes.clone(), |a| {
                    pts.contains(a)
                }))
            }
            OracleSpec::RandomTable { universes, seed } => {
                let cells = table_cells(universes)?;
                let bits = LookupTable::random(vec![cells], 2, *seed).values;
                let dims = universes.clone();
                RelationOracle::table(RelationTable::from_fn(universes.clone(), |a| {
                    bits[boxvc::flat_index(&dims, a)] == 1
                }))
            }
            OracleSpec::Order { size } => RelationOracle::table(RelationTable::order(*size)),
            OracleSpec::Equality { size } => RelationOracle::table(RelationTable::equality(*size)),
            OracleSpec::BadGraph { k, d, n } => {
                RelationOracle::hypergraph(boxvc::build_bad_hypergraph(*k, *d, *n)?)
            }
            OracleSpec::FormZero { form } => RelationOracle::form_zero(form.clone())?,
            OracleSpec::Composed {
                base,
                fns,
                slot_map,
                universes,
            } => typecount::compose_relation(&base.build()?, fns, slot_map, universes)?,
        })
    }
}

/// Experiment spec for the `types` commands.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TypesSpec {
    pub oracle: OracleSpec,
    #[serde(default)]
    pub b: usize,
    #[serde(default)]
    pub seqs: Vec<Vec<usize>>,
    pub window: Option<Vec<usize>>,
    pub long_seq: Option<Vec<usize>>,
    pub d_exp: Option<u32>,
    pub epsilon: Option<f64>,
    pub delta: Option<LabelArray>,
    pub budget: Option<u128>,
    pub seed: Option<u64>,
}

pub fn missing(field: &str, command: &str) -> Error {
    Error::InvalidInput(format!(
        "spec field {field:?} is required by `types {command}`"
    ))
}
