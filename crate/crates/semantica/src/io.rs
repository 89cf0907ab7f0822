//! Dataset and run files (JSON) and CSV tables.
//!
//! Floats are written with 17 significant digits so that every `f64`
//! survives a write/read cycle bit for bit.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use semantica_core::datagen::Dataset;
use semantica_core::dynamics::{DeepNet, ShallowNet};
use semantica_core::Matrix;

use crate::AppError;

/// `f64` rendered with 17 significant digits; `nan` for NaN.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// A float that serializes with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
struct F17(f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite float"));
        }
        let raw = RawValue::from_string(fmt17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(F17)
    }
}

fn rows_of(m: &Matrix) -> Vec<Vec<F17>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|&v| F17(v)).collect()).collect()
}

fn matrix_of(rows: &[Vec<F17>], what: &str) -> Result<Matrix, AppError> {
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, 0));
    }
    let plain: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v.0).collect()).collect();
    Matrix::from_rows(&plain).map_err(|e| AppError::Input(format!("{what}: {e}")))
}

#[derive(Serialize, Deserialize)]
struct DatasetDoc {
    name: String,
    layout: String,
    item_labels: Vec<String>,
    feature_labels: Vec<String>,
    x: Vec<Vec<F17>>,
    y: Vec<Vec<F17>>,
}

pub fn dataset_to_json(ds: &Dataset) -> Result<String, AppError> {
    let doc = DatasetDoc {
        name: ds.name.clone(),
        layout: "row-major".into(),
        item_labels: ds.item_labels.clone(),
        feature_labels: ds.feature_labels.clone(),
        x: rows_of(&ds.x),
        y: rows_of(&ds.y),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn dataset_from_json(text: &str) -> Result<Dataset, AppError> {
    let doc: DatasetDoc = serde_json::from_str(text)?;
    if doc.layout != "row-major" {
        return Err(AppError::Input(format!("unsupported layout {:?}", doc.layout)));
    }
    let ds = Dataset {
        name: doc.name,
        item_labels: doc.item_labels,
        feature_labels: doc.feature_labels,
        x: matrix_of(&doc.x, "x")?,
        y: matrix_of(&doc.y, "y")?,
    };
    ds.validate()?;
    Ok(ds)
}

pub fn write_dataset(path: &Path, ds: &Dataset) -> Result<(), AppError> {
    write_text(path, &dataset_to_json(ds)?)
}

pub fn read_dataset(path: &Path) -> Result<Dataset, AppError> {
    dataset_from_json(&read_text(path)?)
}

/// Trained weights with the settings that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFile {
    /// `"deep"` or `"shallow"`.
    pub arch: String,
    pub dataset: String,
    pub learning_rate: f64,
    pub epochs: usize,
    pub init_scale: f64,
    pub seed: u64,
    pub tau: f64,
    /// `W¹` (deep) or `W^s` (shallow).
    pub w1: Matrix,
    /// `W²`; empty for shallow runs.
    pub w2: Matrix,
    /// Hidden representations `W¹X` at recorded epochs.
    pub snapshots: Vec<(f64, Matrix)>,
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    t: F17,
    hidden: Vec<Vec<F17>>,
}

#[derive(Serialize, Deserialize)]
struct RunDoc {
    arch: String,
    dataset: String,
    learning_rate: F17,
    epochs: usize,
    init_scale: F17,
    seed: u64,
    tau: F17,
    layout: String,
    w1: Vec<Vec<F17>>,
    w2: Vec<Vec<F17>>,
    #[serde(default)]
    snapshots: Vec<Snapshot>,
}

impl RunFile {
    pub fn deep_net(&self) -> Result<DeepNet, AppError> {
        if self.arch != "deep" {
            return Err(AppError::Input("run file does not hold a deep network".into()));
        }
        Ok(DeepNet::new(self.w1.clone(), self.w2.clone())?)
    }

    pub fn shallow_net(&self) -> Result<ShallowNet, AppError> {
        if self.arch != "shallow" {
            return Err(AppError::Input("run file does not hold a shallow network".into()));
        }
        Ok(ShallowNet { ws: self.w1.clone() })
    }

    pub fn to_json(&self) -> Result<String, AppError> {
        let doc = RunDoc {
            arch: self.arch.clone(),
            dataset: self.dataset.clone(),
            learning_rate: F17(self.learning_rate),
            epochs: self.epochs,
            init_scale: F17(self.init_scale),
            seed: self.seed,
            tau: F17(self.tau),
            layout: "row-major".into(),
            w1: rows_of(&self.w1),
            w2: rows_of(&self.w2),
            snapshots: self.snapshots.iter().map(|(t, h)| Snapshot { t: F17(*t), hidden: rows_of(h) }).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self, AppError> {
        let doc: RunDoc = serde_json::from_str(text)?;
        if doc.arch != "deep" && doc.arch != "shallow" {
            return Err(AppError::Input(format!("unknown architecture {:?}", doc.arch)));
        }
        let snapshots = doc
            .snapshots
            .iter()
            .map(|s| Ok((s.t.0, matrix_of(&s.hidden, "snapshot")?)))
            .collect::<Result<Vec<_>, AppError>>()?;
        Ok(Self {
            arch: doc.arch,
            dataset: doc.dataset,
            learning_rate: doc.learning_rate.0,
            epochs: doc.epochs,
            init_scale: doc.init_scale.0,
            seed: doc.seed,
            tau: doc.tau.0,
            w1: matrix_of(&doc.w1, "w1")?,
            w2: matrix_of(&doc.w2, "w2")?,
            snapshots,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), AppError> {
        write_text(path, &self.to_json()?)
    }

    pub fn read(path: &Path) -> Result<Self, AppError> {
        Self::from_json(&read_text(path)?)
    }
}

pub fn read_text(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path).map_err(|e| AppError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), AppError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        f.write_all(b"\n")?;
    }
    Ok(())
}

/// A CSV table preceded by a `# provenance:` comment line.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub provenance: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(provenance: &str, header: &[&str]) -> Self {
        Self { provenance: provenance.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_floats(&mut self, values: &[f64]) {
        self.rows.push(values.iter().map(|&v| fmt17(v)).collect());
    }

    pub fn to_csv(&self) -> Result<String, AppError> {
        let mut out = format!("# provenance: {}\n", self.provenance).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.header)?;
            for r in &self.rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        String::from_utf8(out).map_err(|e| AppError::Numeric(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<(), AppError> {
        write_text(path, &self.to_csv()?)
    }

    /// Parses a table written by [`Table::to_csv`].
    pub fn parse(text: &str) -> Result<Self, AppError> {
        let mut lines = text.splitn(2, '\n');
        let first = lines.next().unwrap_or_default();
        let provenance = first
            .strip_prefix("# provenance: ")
            .ok_or_else(|| AppError::Input("missing provenance line".into()))?
            .to_string();
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(lines.next().unwrap_or_default().as_bytes());
        let header = r.headers()?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()))
            .collect::<Result<Vec<Vec<String>>, _>>()?;
        Ok(Self { provenance, header, rows })
    }

    /// Column `name` parsed as floats (`nan` allowed).
    pub fn column(&self, name: &str) -> Result<Vec<f64>, AppError> {
        let j = self
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| AppError::Input(format!("no column {name}")))?;
        self.rows
            .iter()
            .map(|r| r[j].parse::<f64>().map_err(|e| AppError::Input(format!("column {name}: {e}"))))
            .collect()
    }
}

/// Square similarity matrix with item labels heading both rows and columns.
pub fn similarity_table(provenance: &str, labels: &[String], m: &Matrix) -> Table {
    let mut header = vec![String::from("item")];
    header.extend(labels.iter().cloned());
    let rows = (0..m.rows())
        .map(|i| {
            let mut r = vec![labels[i].clone()];
            r.extend(m.row(i).iter().map(|&v| fmt17(v)));
            r
        })
        .collect();
    Table { provenance: provenance.into(), header, rows }
}
