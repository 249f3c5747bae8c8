//! Dataset, report and heatmap files.
//!
//! Native dataset layout (UTF-8 text):
//!
//! ```text
//! meeeftcd-sparse v1 rows=<n> primary=<m> secondary=<s> ones=<c> seed=<seed>
//! <email_id>,<label_number>,<i1> <i2> ... <ic>
//! ```
//!
//! One body line per row in stored (scrambled) order, indices strictly
//! increasing. Every file is written to a temporary sibling and renamed into
//! place, so readers never observe a partial file.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::features::{FeatureDataset, FeatureRow};
use crate::knn::EvalReport;
use crate::pipeline::PipelineStats;

pub const DATASET_MAGIC: &str = "meeeftcd-sparse";
pub const FORMAT_VERSION: u32 = 1;

pub const REPORT_FILE: &str = "report.txt";
pub const CONFUSION_COUNTS_FILE: &str = "confusion_counts.csv";
pub const CONFUSION_PERCENT_FILE: &str = "confusion_percent.csv";
pub const PER_LABEL_FILE: &str = "per_label.csv";
pub const HEATMAP_FILE: &str = "heatmap.svg";

/// Writes `contents` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let mut tmp_name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetHeader {
    pub format_version: u32,
    pub n_rows: usize,
    pub n_primary: usize,
    pub n_secondary: usize,
    pub ones_budget: usize,
    pub seed: u64,
}

impl DatasetHeader {
    pub fn of(dataset: &FeatureDataset) -> Self {
        DatasetHeader {
            format_version: FORMAT_VERSION,
            n_rows: dataset.rows.len(),
            n_primary: dataset.n_primary,
            n_secondary: dataset.n_secondary,
            ones_budget: dataset.ones_budget,
            seed: dataset.seed,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{DATASET_MAGIC} v{} rows={} primary={} secondary={} ones={} seed={}",
            self.format_version, self.n_rows, self.n_primary, self.n_secondary, self.ones_budget, self.seed
        )
    }

    pub fn parse(line: &str) -> std::result::Result<Self, String> {
        let mut parts = line.split_ascii_whitespace();
        if parts.next() != Some(DATASET_MAGIC) {
            return Err(format!("missing `{DATASET_MAGIC}` header"));
        }
        let version = parts
            .next()
            .and_then(|v| v.strip_prefix('v'))
            .and_then(|v| v.parse::<u32>().ok())
            .ok_or("missing format version")?;
        if version != FORMAT_VERSION {
            return Err(format!("unsupported format version {version}"));
        }
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for p in parts {
            let (k, v) = p.split_once('=').ok_or_else(|| format!("bad header field {p:?}"))?;
            fields.insert(k, v);
        }
        let get = |key: &str| -> std::result::Result<u64, String> {
            fields
                .get(key)
                .ok_or_else(|| format!("header lacks `{key}=`"))?
                .parse::<u64>()
                .map_err(|_| format!("bad header value for `{key}`"))
        };
        Ok(DatasetHeader {
            format_version: version,
            n_rows: get("rows")? as usize,
            n_primary: get("primary")? as usize,
            n_secondary: get("secondary")? as usize,
            ones_budget: get("ones")? as usize,
            seed: get("seed")?,
        })
    }
}

pub fn format_dataset(dataset: &FeatureDataset) -> String {
    let mut out = DatasetHeader::of(dataset).line();
    out.push('\n');
    for row in &dataset.rows {
        let _ = write!(out, "{},{},", row.email_id, row.label);
        for (i, idx) in row.indices.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{idx}");
        }
        out.push('\n');
    }
    out
}

pub fn write_dataset(dataset: &FeatureDataset, path: &Path) -> Result<()> {
    write_atomic(path, format_dataset(dataset).as_bytes())
}

fn parse_row(line: &str) -> std::result::Result<FeatureRow, String> {
    let mut parts = line.splitn(3, ',');
    let email_id = parts
        .next()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .ok_or("bad email id")?;
    let label = parts
        .next()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .ok_or("bad label number")?;
    let rest = parts.next().ok_or("missing index list")?;
    let indices = rest
        .split_ascii_whitespace()
        .map(|t| t.parse::<u32>().map_err(|_| format!("bad index {t:?}")))
        .collect::<std::result::Result<Vec<u32>, String>>()?;
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err("indices are not strictly increasing".into());
    }
    Ok(FeatureRow {
        email_id,
        label,
        indices,
    })
}

/// Parses the native layout and enforces every dataset invariant.
pub fn parse_dataset(text: &str, path: &Path) -> Result<FeatureDataset> {
    let mut lines = text.lines();
    let header_line = lines.next().ok_or_else(|| Error::parse(path, 1, "empty file"))?;
    let header = DatasetHeader::parse(header_line).map_err(|m| Error::parse(path, 1, m))?;

    let mut rows = Vec::with_capacity(header.n_rows);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_row(line).map_err(|m| Error::parse(path, lineno, m))?;
        rows.push(row);
    }
    from_rows(header, rows, path)
}

fn from_rows(header: DatasetHeader, rows: Vec<FeatureRow>, path: &Path) -> Result<FeatureDataset> {
    if rows.len() != header.n_rows {
        return Err(Error::parse(
            path,
            rows.len() + 2,
            format!("header declares {} rows, found {}", header.n_rows, rows.len()),
        ));
    }
    let n = rows.len();
    let mut ids = HashSet::with_capacity(n);
    for (pos, row) in rows.iter().enumerate() {
        if row.email_id >= n || !ids.insert(row.email_id) {
            return Err(Error::parse(
                path,
                pos + 2,
                format!("email id {} is not a unique id below {n}", row.email_id),
            ));
        }
    }
    let dataset = FeatureDataset {
        n_primary: header.n_primary,
        n_secondary: header.n_secondary,
        ones_budget: header.ones_budget,
        seed: header.seed,
        permutation: rows.iter().map(|r| r.email_id).collect(),
        rows,
    };
    dataset
        .validate()
        .map_err(|(pos, m)| Error::parse(path, pos + 2, m))?;
    Ok(dataset)
}

pub fn read_dataset(path: &Path) -> Result<FeatureDataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(&text, path)
}

/// Where the label sits in a delimited or sparse row of a foreign file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelColumn {
    #[default]
    First,
    Last,
}

/// Hints for reading a dataset in a layout other than the native one.
#[derive(Debug, Clone, Default)]
pub struct MappingHints {
    pub label_column: LabelColumn,
    /// Base of feature indices in sparse `index:value` rows (0 or 1).
    pub index_base: u32,
    /// Number of leading shared dimensions. Inferred when `None` as one past
    /// the largest dimension set in more than one row.
    pub n_primary: Option<usize>,
    /// Labels one per line, for feature files without a label column.
    pub labels_file: Option<PathBuf>,
    /// Rows, total dimensions and ones per row the import is expected to have.
    pub expect: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Imported {
    pub dataset: FeatureDataset,
    pub layout: &'static str,
    /// Dimension count seen in the source (dense column count, or one past
    /// the largest sparse index).
    pub source_dimensions: usize,
    pub notes: Vec<String>,
}

fn head_of(path: &Path) -> String {
    let Ok(file) = fs::File::open(path) else {
        return String::new();
    };
    BufReader::new(file)
        .lines()
        .take(5)
        .map(|l| {
            let l = l.unwrap_or_default();
            if l.len() > 160 {
                format!("{}...", &l[..l.char_indices().nth(160).map(|(i, _)| i).unwrap_or(l.len())])
            } else {
                l
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn unsupported(path: &Path, message: impl Into<String>) -> Error {
    Error::UnsupportedFormat {
        path: path.to_path_buf(),
        message: message.into(),
        head: head_of(path),
    }
}

/// Picks the single data file of an unpacked archive directory.
fn locate_data_file(dir: &Path, hints: &MappingHints) -> Result<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            !name.starts_with('.')
                && Some(p.as_path()) != hints.labels_file.as_deref()
                && !matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("md" | "pdf" | "html" | "zip" | "gz")
                )
                && !name.to_ascii_lowercase().starts_with("readme")
                && !name.to_ascii_lowercase().starts_with("license")
        })
        .collect();
    files.sort();
    match files.len() {
        1 => Ok(files.remove(0)),
        0 => Err(Error::UnsupportedFormat {
            path: dir.to_path_buf(),
            message: "no data file found in directory".into(),
            head: String::new(),
        }),
        _ => Err(Error::UnsupportedFormat {
            path: dir.to_path_buf(),
            message: "several candidate data files; pass one explicitly".into(),
            head: files
                .iter()
                .map(|f| f.display().to_string())
                .collect::<Vec<_>>()
                .join("\n"),
        }),
    }
}

struct RawRow {
    label: usize,
    indices: Vec<u32>,
}

fn parse_number(tok: &str) -> Option<f64> {
    tok.trim().trim_matches('"').parse::<f64>().ok()
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else if line.contains('\t') {
        line.split('\t').map(str::trim).collect()
    } else {
        line.split_ascii_whitespace().collect()
    }
}

fn parse_label(tok: &str) -> Option<usize> {
    let v = parse_number(tok)?;
    (v >= 0.0 && v.fract() == 0.0).then_some(v as usize)
}

/// Best-effort reader for datasets in foreign layouts: the native format,
/// sparse `label index:value ...` rows, or dense delimited 0/1 rows with a
/// label column (or a separate labels file). Row order is kept and row
/// positions become email ids.
pub fn import_published(path: &Path, hints: &MappingHints) -> Result<Imported> {
    let data_path = if path.is_dir() {
        locate_data_file(path, hints)?
    } else {
        path.to_path_buf()
    };
    let text = fs::read_to_string(&data_path).map_err(|e| Error::io(&data_path, e))?;
    let first = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| unsupported(&data_path, "file is empty"))?;

    if first.starts_with(DATASET_MAGIC) {
        let dataset = parse_dataset(&text, &data_path)?;
        let dims = dataset.n_total();
        let mut imported = Imported {
            dataset,
            layout: "native",
            source_dimensions: dims,
            notes: Vec::new(),
        };
        check_expectations(&mut imported, hints);
        return Ok(imported);
    }

    let external_labels = match &hints.labels_file {
        Some(p) => {
            let t = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            let mut labels = Vec::new();
            for (i, l) in t.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                labels.push(parse_label(l).ok_or_else(|| Error::parse(p, i + 1, "bad label"))?);
            }
            Some(labels)
        }
        None => None,
    };

    let sparse = first.split_ascii_whitespace().skip(1).any(|t| t.contains(':'));
    let (rows, dims, layout) = if sparse {
        parse_sparse_rows(&text, &data_path, hints, external_labels.as_deref())?
    } else {
        parse_dense_rows(&text, &data_path, hints, external_labels.as_deref())?
    };
    let mut imported = assemble(rows, dims, layout, &data_path, hints)?;
    check_expectations(&mut imported, hints);
    Ok(imported)
}

fn label_for(
    external: Option<&[usize]>,
    row: usize,
    path: &Path,
    lineno: usize,
) -> Result<usize> {
    external
        .and_then(|l| l.get(row).copied())
        .ok_or_else(|| Error::parse(path, lineno, format!("no label for row {row}")))
}

fn parse_sparse_rows(
    text: &str,
    path: &Path,
    hints: &MappingHints,
    external: Option<&[usize]>,
) -> Result<(Vec<RawRow>, usize, &'static str)> {
    let mut rows = Vec::new();
    let mut max_dim = 0usize;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut toks: Vec<&str> = line.split_ascii_whitespace().collect();
        let label = if external.is_some() {
            label_for(external, rows.len(), path, lineno)?
        } else {
            let tok = match hints.label_column {
                LabelColumn::First => toks.remove(0),
                LabelColumn::Last => toks.pop().unwrap_or(""),
            };
            parse_label(tok).ok_or_else(|| Error::parse(path, lineno, format!("bad label {tok:?}")))?
        };
        let mut indices = Vec::new();
        for t in toks {
            let (idx, val) = t
                .split_once(':')
                .ok_or_else(|| Error::parse(path, lineno, format!("expected index:value, got {t:?}")))?;
            let idx: u32 = idx
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad index {idx:?}")))?;
            let val = parse_number(val)
                .ok_or_else(|| Error::parse(path, lineno, format!("bad value {val:?}")))?;
            if val == 0.0 {
                continue;
            }
            if val != 1.0 {
                return Err(Error::parse(path, lineno, format!("non-binary value {val}")));
            }
            let idx = idx
                .checked_sub(hints.index_base)
                .ok_or_else(|| Error::parse(path, lineno, "index below index base"))?;
            indices.push(idx);
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::parse(path, lineno, "repeated index"));
        }
        if let Some(&last) = indices.last() {
            max_dim = max_dim.max(last as usize + 1);
        }
        rows.push(RawRow { label, indices });
    }
    Ok((rows, max_dim, "sparse index:value"))
}

fn parse_dense_rows(
    text: &str,
    path: &Path,
    hints: &MappingHints,
    external: Option<&[usize]>,
) -> Result<(Vec<RawRow>, usize, &'static str)> {
    let mut rows = Vec::new();
    let mut width: Option<usize> = None;
    let mut skipped_header = false;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = split_fields(line);
        if rows.is_empty() && !skipped_header && fields.iter().any(|f| parse_number(f).is_none()) {
            skipped_header = true;
            continue;
        }
        let label = if external.is_some() {
            label_for(external, rows.len(), path, lineno)?
        } else {
            let tok = match hints.label_column {
                LabelColumn::First => fields.remove(0),
                LabelColumn::Last => fields.pop().unwrap_or(""),
            };
            parse_label(tok).ok_or_else(|| Error::parse(path, lineno, format!("bad label {tok:?}")))?
        };
        match width {
            None => width = Some(fields.len()),
            Some(w) if w != fields.len() => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("row has {} feature columns, expected {w}", fields.len()),
                ))
            }
            _ => {}
        }
        let mut indices = Vec::new();
        for (col, f) in fields.iter().enumerate() {
            match parse_number(f) {
                Some(0.0) => {}
                Some(1.0) => indices.push(col as u32),
                _ => return Err(Error::parse(path, lineno, format!("non-binary value {f:?} in column {col}"))),
            }
        }
        rows.push(RawRow { label, indices });
    }
    if rows.is_empty() {
        return Err(unsupported(path, "no data rows"));
    }
    Ok((rows, width.unwrap_or(0), "dense delimited"))
}

/// Splits dimensions into primary and secondary, compacts secondary
/// dimensions to follow the primary block, and validates.
fn assemble(
    rows: Vec<RawRow>,
    source_dims: usize,
    layout: &'static str,
    path: &Path,
    hints: &MappingHints,
) -> Result<Imported> {
    let mut notes = Vec::new();
    let ones_budget = rows.first().map(|r| r.indices.len()).unwrap_or(0);

    let n_primary = match hints.n_primary {
        Some(m) => m,
        None => {
            let mut seen = HashSet::new();
            let mut shared_max: Option<u32> = None;
            for r in &rows {
                for &i in &r.indices {
                    if !seen.insert(i) {
                        shared_max = Some(shared_max.map_or(i, |m| m.max(i)));
                    }
                }
            }
            let m = shared_max.map_or(0, |m| m as usize + 1);
            notes.push(format!("inferred {m} primary dimensions from shared usage"));
            m
        }
    };

    let mut secondary: Vec<u32> = rows
        .iter()
        .flat_map(|r| r.indices.iter().copied().filter(|&i| i as usize >= n_primary))
        .collect();
    secondary.sort_unstable();
    let distinct_before = secondary.len();
    secondary.dedup();
    if secondary.len() != distinct_before {
        return Err(Error::parse(path, 0, "a secondary dimension is set in more than one row"));
    }
    let compact: BTreeMap<u32, u32> = secondary
        .iter()
        .enumerate()
        .map(|(k, &i)| (i, (n_primary + k) as u32))
        .collect();
    if source_dims != n_primary + secondary.len() {
        notes.push(format!(
            "source has {source_dims} dimensions, {} of them set; secondary dimensions renumbered",
            n_primary + secondary.len()
        ));
    }

    let feature_rows: Vec<FeatureRow> = rows
        .into_iter()
        .enumerate()
        .map(|(pos, r)| {
            let mut indices: Vec<u32> = r
                .indices
                .into_iter()
                .map(|i| compact.get(&i).copied().unwrap_or(i))
                .collect();
            indices.sort_unstable();
            FeatureRow {
                email_id: pos,
                label: r.label,
                indices,
            }
        })
        .collect();
    let header = DatasetHeader {
        format_version: FORMAT_VERSION,
        n_rows: feature_rows.len(),
        n_primary,
        n_secondary: secondary.len(),
        ones_budget,
        seed: 0,
    };
    let dataset = from_rows(header, feature_rows, path)?;
    Ok(Imported {
        dataset,
        layout,
        source_dimensions: source_dims,
        notes,
    })
}

fn check_expectations(imported: &mut Imported, hints: &MappingHints) {
    if let Some((rows, total, ones)) = hints.expect {
        let d = &imported.dataset;
        for (what, got, want) in [
            ("rows", d.rows.len(), rows),
            ("total dimensions", d.n_total(), total),
            ("ones per row", d.ones_budget, ones),
        ] {
            if got != want {
                imported
                    .notes
                    .push(format!("{what}: found {got}, expected {want}"));
            }
        }
    }
}

pub fn report_text(report: &EvalReport, stats: Option<&PipelineStats>) -> String {
    let mut out = String::new();
    if let Some(s) = stats {
        for (k, v) in s.key_values() {
            if matches!(k, "features_total" | "features_primary" | "features_secondary") {
                continue;
            }
            let _ = writeln!(out, "{k}={v}");
        }
    } else {
        let _ = writeln!(out, "primary_ones_upper_bound={}", report.ones_budget);
    }
    let _ = writeln!(out, "features_total={}", report.n_primary + report.n_secondary);
    let _ = writeln!(out, "features_primary={}", report.n_primary);
    let _ = writeln!(out, "features_secondary={}", report.n_secondary);
    let _ = writeln!(out, "ones_per_row={}", report.ones_budget);
    let _ = writeln!(out, "mean_primary_ones={:.3}", report.global.primary.mean);
    let _ = writeln!(out, "std_primary_ones={:.3}", report.global.primary.std);
    let _ = writeln!(out, "mean_secondary_ones={:.3}", report.global.mean_secondary);
    let _ = writeln!(out, "k={}", report.k);
    let _ = writeln!(out, "rows={}", report.n_rows);
    let _ = writeln!(out, "correct={}", report.correct());
    let _ = writeln!(out, "accuracy={:.2}%", report.accuracy() * 100.0);
    out
}

fn matrix_csv<T>(matrix: &[Vec<T>], cell: impl Fn(&T) -> String) -> String {
    let mut out = String::from("actual\\predicted");
    for j in 0..matrix.len() {
        let _ = write!(out, ",{j}");
    }
    out.push('\n');
    for (i, row) in matrix.iter().enumerate() {
        let _ = write!(out, "{i}");
        for v in row {
            out.push(',');
            out.push_str(&cell(v));
        }
        out.push('\n');
    }
    out
}

pub fn confusion_counts_csv(report: &EvalReport) -> String {
    matrix_csv(&report.confusion, |c| c.to_string())
}

pub fn confusion_percent_csv(report: &EvalReport) -> String {
    matrix_csv(&report.percentages(), |p| format!("{p:.2}"))
}

pub fn per_label_csv(report: &EvalReport) -> String {
    let mut out = String::from("label,emails,mean_primary_ones,std_primary_ones\n");
    for s in &report.per_label {
        let _ = writeln!(out, "{},{},{:.3},{:.3}", s.label, s.emails, s.primary.mean, s.primary.std);
    }
    out
}

/// Writes the key=value report, both confusion matrices and the per-label
/// table into `dir`. Nothing is written if `dir` does not exist.
pub fn write_report(report: &EvalReport, stats: Option<&PipelineStats>, dir: &Path) -> Result<()> {
    if !dir.is_dir() {
        return Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "output directory missing"),
        ));
    }
    write_atomic(&dir.join(CONFUSION_COUNTS_FILE), confusion_counts_csv(report).as_bytes())?;
    write_atomic(&dir.join(CONFUSION_PERCENT_FILE), confusion_percent_csv(report).as_bytes())?;
    write_atomic(&dir.join(PER_LABEL_FILE), per_label_csv(report).as_bytes())?;
    write_atomic(&dir.join(REPORT_FILE), report_text(report, stats).as_bytes())
}

/// Low end of the heatmap color ramp.
pub const RAMP_LOW: (u8, u8, u8) = (0xf7, 0xfb, 0xff);
/// High end of the heatmap color ramp.
pub const RAMP_HIGH: (u8, u8, u8) = (0x08, 0x30, 0x6b);

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// Linear interpolation between [`RAMP_LOW`] and [`RAMP_HIGH`].
pub fn ramp_color(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0);
    let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * t).round() as u8;
    (
        mix(RAMP_LOW.0, RAMP_HIGH.0),
        mix(RAMP_LOW.1, RAMP_HIGH.1),
        mix(RAMP_LOW.2, RAMP_HIGH.2),
    )
}

/// Color of every cell after rounding values to two decimals; the largest
/// rounded value maps to the dark end of the ramp.
pub fn heatmap_colors(matrix: &[Vec<f64>]) -> Vec<Vec<(u8, u8, u8)>> {
    let max = matrix.iter().flatten().map(|&v| round2(v)).fold(0.0, f64::max);
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| ramp_color(if max > 0.0 { round2(v) / max } else { 0.0 }))
                .collect()
        })
        .collect()
}

pub fn heatmap_svg(matrix: &[Vec<f64>]) -> Result<String> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(Error::Usage("heatmap needs a square matrix".into()));
    }
    const CELL: usize = 64;
    const LEFT: usize = 80;
    const TOP: usize = 40;
    let width = LEFT + n * CELL + 20;
    let height = TOP + n * CELL + 60;
    let colors = heatmap_colors(matrix);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    for (i, row) in matrix.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let (r, g, b) = colors[i][j];
            let x = LEFT + j * CELL;
            let y = TOP + i * CELL;
            let luminance = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
            let ink = if luminance < 128.0 { "white" } else { "black" };
            let _ = writeln!(
                svg,
                r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="#{r:02x}{g:02x}{b:02x}" stroke="#cccccc"/>"##
            );
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}" text-anchor="middle" dominant-baseline="central" fill="{ink}">{:.2}%</text>"#,
                x + CELL / 2,
                y + CELL / 2,
                round2(v)
            );
        }
    }
    for k in 0..n {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{k}</text>"#,
            LEFT + k * CELL + CELL / 2,
            TOP + n * CELL + 20
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end" dominant-baseline="central">{k}</text>"#,
            LEFT - 10,
            TOP + k * CELL + CELL / 2
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">predicted label</text>"#,
        LEFT + n * CELL / 2,
        TOP + n * CELL + 45
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">actual label</text>"#,
        TOP + n * CELL / 2,
        TOP + n * CELL / 2
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn render_heatmap(matrix: &[Vec<f64>], path: &Path) -> Result<()> {
    let svg = heatmap_svg(matrix)?;
    write_atomic(path, svg.as_bytes())
}
