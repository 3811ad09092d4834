//! JSON file formats: `{"dim": n, "entries": [[[re, im], ...], ...]}` for
//! matrices and `{"dim_in": n, "dim_out": m, "kraus": [entries, ...]}` for
//! channels. Entries are row-major; doubles are written in shortest
//! round-trip form, so a parse of a serialized matrix is bit-exact.

use std::fs;
use std::path::Path;

use qfdiv::{DensityMatrix, HermitianOperator, Matrix, QuantumChannel, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Row-major `[re, im]` pairs.
pub type Entries = Vec<Vec<[f64; 2]>>;

/// Largest relative deviation from hermiticity accepted on load.
pub const HERMITIAN_RTOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Entries,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<Entries>,
}

/// A list of neighboring input pairs, or a list of states of which every
/// pair counts as neighboring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeighborFile {
    #[serde(default)]
    pub pairs: Vec<[MatrixFile; 2]>,
    #[serde(default)]
    pub states: Vec<MatrixFile>,
}

pub fn entries_of(m: &Matrix) -> Entries {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn matrix_from_entries(entries: &Entries, rows: usize, cols: usize) -> CliResult<Matrix> {
    if entries.len() != rows {
        return Err(CliError::Invalid(format!("expected {rows} rows, found {}", entries.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in entries.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::Invalid(format!("row {i} has {} entries, expected {cols}", row.len())));
        }
        for &[re, im] in row {
            if !re.is_finite() || !im.is_finite() {
                return Err(CliError::Invalid(format!("non-finite entry in row {i}")));
            }
            data.push(C64::new(re, im));
        }
    }
    Ok(Matrix::from_vec(rows, cols, data)?)
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixFile { dim: m.rows(), entries: entries_of(m) }
    }

    pub fn to_matrix(&self) -> CliResult<Matrix> {
        if self.dim == 0 {
            return Err(CliError::Invalid("dim must be positive".into()));
        }
        matrix_from_entries(&self.entries, self.dim, self.dim)
    }

    pub fn to_hermitian(&self) -> CliResult<HermitianOperator> {
        let m = self.to_matrix()?;
        let dev = m.max_abs_diff(&m.adjoint());
        let scale = m.as_slice().iter().fold(1.0f64, |a, z| a.max(z.norm()));
        if dev > HERMITIAN_RTOL * scale {
            return Err(CliError::Invalid(format!("matrix is not Hermitian (deviation {dev:e})")));
        }
        Ok(HermitianOperator::new(m)?)
    }

    pub fn to_density(&self) -> CliResult<DensityMatrix> {
        Ok(DensityMatrix::new(self.to_hermitian()?)?)
    }
}

impl ChannelFile {
    pub fn from_channel(c: &QuantumChannel) -> Self {
        ChannelFile { dim_in: c.dim_in(), dim_out: c.dim_out(), kraus: c.kraus().iter().map(entries_of).collect() }
    }

    pub fn to_channel(&self) -> CliResult<QuantumChannel> {
        if self.dim_in == 0 || self.dim_out == 0 {
            return Err(CliError::Invalid("channel dimensions must be positive".into()));
        }
        let kraus = self
            .kraus
            .iter()
            .map(|k| matrix_from_entries(k, self.dim_out, self.dim_in))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(QuantumChannel::new(self.dim_in, self.dim_out, kraus)?)
    }
}

impl NeighborFile {
    pub fn to_neighbors(&self) -> CliResult<qfdiv::dpriv::NeighborSet> {
        use qfdiv::dpriv::NeighborSet;
        match (self.pairs.is_empty(), self.states.is_empty()) {
            (false, true) => {
                let pairs = self
                    .pairs
                    .iter()
                    .map(|[a, b]| Ok((a.to_density()?, b.to_density()?)))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(NeighborSet::new(pairs)?)
            }
            (true, false) => {
                let states = self.states.iter().map(MatrixFile::to_density).collect::<CliResult<Vec<_>>>()?;
                Ok(NeighborSet::all_pairs(&states)?)
            }
            _ => Err(CliError::Invalid("neighbor file needs exactly one of `pairs` or `states`".into())),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_owned(), source })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string(value).expect("serializable value");
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn load_state(path: &Path) -> CliResult<DensityMatrix> {
    read_json::<MatrixFile>(path)?.to_density()
}

pub fn load_channel(path: &Path) -> CliResult<QuantumChannel> {
    read_json::<ChannelFile>(path)?.to_channel()
}

pub fn save_state(path: &Path, rho: &DensityMatrix) -> CliResult<()> {
    write_json(path, &MatrixFile::from_matrix(rho.op().matrix()))
}

pub fn save_channel(path: &Path, channel: &QuantumChannel) -> CliResult<()> {
    write_json(path, &ChannelFile::from_channel(channel))
}
