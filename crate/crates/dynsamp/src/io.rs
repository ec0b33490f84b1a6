//! File formats: spectra, point sets, operators and sample vectors.
//!
//! CSV files start with `#` comment lines carrying the producing command,
//! crate versions and the resolved configuration as one-line JSON. Readers
//! skip comments except for the point-set metadata keys.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use dynsamp_core::operator::RowMeta;
use dynsamp_core::{BandlimitedFn, Complex64, SamplingOperator, SamplingSet, SpectrumGrid};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

/// Versions of the crates that produced an output.
pub fn versions() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([
        ("dynsamp", env!("CARGO_PKG_VERSION")),
        ("dynsamp-core", dynsamp_core::VERSION),
    ])
}

/// `#` comment block naming the command, versions and configuration.
pub fn comment_header(command: &str, cfg: &ExperimentConfig) -> Result<String> {
    Ok(format!(
        "# command: {command}\n# versions: {}\n# config: {}\n",
        serde_json::to_string(&versions())?,
        serde_json::to_string(cfg)?
    ))
}

/// Writes `bytes` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    let mut file = fs::File::create(tmp).map_err(|e| CliError::io(tmp, e))?;
    file.write_all(bytes).map_err(|e| CliError::io(tmp, e))?;
    file.sync_all().map_err(|e| CliError::io(tmp, e))?;
    fs::rename(tmp, path).map_err(|e| CliError::io(path, e))
}

/// CSV text with a comment header and one record per row.
pub fn csv_document<R: Serialize>(header: &str, rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = w
        .into_inner()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(format!("{header}{}", String::from_utf8_lossy(&body)))
}

#[derive(Serialize, serde::Deserialize)]
struct SpectrumRow {
    t: f64,
    re: f64,
    im: f64,
}

/// Spectrum as CSV with columns `t, re, im`.
pub fn spectrum_csv(header: &str, f: &BandlimitedFn) -> Result<String> {
    let rows: Vec<SpectrumRow> = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| SpectrumRow {
            t: f.grid().node(j),
            re: v.re,
            im: v.im,
        })
        .collect();
    csv_document(header, &rows)
}

/// Reads a spectrum CSV written by [`spectrum_csv`]. The `t` column must be
/// a uniform grid symmetric about 0.
pub fn read_spectrum_csv(path: &Path) -> Result<BandlimitedFn> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::parse(path, e.to_string()))?;
    let mut ts = Vec::new();
    let mut values = Vec::new();
    for row in rdr.deserialize::<SpectrumRow>() {
        let row = row.map_err(|e| CliError::parse(path, e.to_string()))?;
        ts.push(row.t);
        values.push(Complex64::new(row.re, row.im));
    }
    if ts.len() < SpectrumGrid::MIN_LEN {
        return Err(CliError::parse(path, "spectrum needs at least 16 rows"));
    }
    let sigma = ts[ts.len() - 1];
    let grid =
        SpectrumGrid::new(sigma, ts.len()).map_err(|e| CliError::parse(path, e.to_string()))?;
    let tol = 1e-9 * sigma;
    if ts
        .iter()
        .enumerate()
        .any(|(j, t)| (t - grid.node(j)).abs() > tol)
    {
        return Err(CliError::parse(
            path,
            "t column is not a uniform grid on [-sigma, sigma]",
        ));
    }
    Ok(BandlimitedFn::from_values(grid, values)?)
}

/// One point per line.
pub fn points_txt(set: &SamplingSet) -> String {
    set.points().iter().map(|p| format!("{p}\n")).collect()
}

/// Reads one real per line (blank lines and `#` comments skipped). Without
/// an explicit window the hull of the points is used.
pub fn read_points_txt(path: &Path, window: Option<(f64, f64)>) -> Result<SamplingSet> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut pts = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| CliError::parse(path, format!("line {}: not a number", n + 1)))?;
        pts.push(v);
    }
    let window = match window {
        Some(w) => w,
        None => {
            let lo = pts.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = pts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if lo < hi {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        }
    };
    SamplingSet::new(pts, window).map_err(|e| CliError::parse(path, e.to_string()))
}

/// Point set as CSV with `window_lo`, `window_hi` and `nominal_spacing`
/// metadata comments and a single `lambda` column.
pub fn points_csv(header: &str, set: &SamplingSet) -> String {
    let (lo, hi) = set.window();
    let spacing = set
        .nominal_spacing()
        .map_or_else(|| "none".to_string(), |s| s.to_string());
    let mut out = format!(
        "{header}# window_lo: {lo}\n# window_hi: {hi}\n# nominal_spacing: {spacing}\nlambda\n"
    );
    for p in set.points() {
        out.push_str(&format!("{p}\n"));
    }
    out
}

/// Reads a point-set CSV written by [`points_csv`].
pub fn read_points_csv(path: &Path) -> Result<SamplingSet> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut meta = BTreeMap::new();
    let mut pts = Vec::new();
    let mut seen_header = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(c) = line.strip_prefix('#') {
            if let Some((k, v)) = c.split_once(':') {
                meta.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if !seen_header {
            if line != "lambda" {
                return Err(CliError::parse(path, "expected a `lambda` header"));
            }
            seen_header = true;
            continue;
        }
        pts.push(
            line.parse::<f64>()
                .map_err(|_| CliError::parse(path, format!("bad value {line:?}")))?,
        );
    }
    let num = |k: &str| -> Result<f64> {
        meta.get(k)
            .ok_or_else(|| CliError::parse(path, format!("missing {k}")))?
            .parse()
            .map_err(|_| CliError::parse(path, format!("bad {k}")))
    };
    let window = (num("window_lo")?, num("window_hi")?);
    let spacing = match meta.get("nominal_spacing").map(String::as_str) {
        None | Some("none") => None,
        Some(s) => Some(
            s.parse()
                .map_err(|_| CliError::parse(path, "bad nominal_spacing"))?,
        ),
    };
    Ok(SamplingSet::new(pts, window)
        .map_err(|e| CliError::parse(path, e.to_string()))?
        .with_nominal_spacing(spacing))
}

#[derive(Serialize)]
struct OperatorHeader<'a> {
    versions: BTreeMap<&'static str, &'static str>,
    config: &'a ExperimentConfig,
    rows: usize,
    cols: usize,
    sigma: f64,
    t_nodes: Vec<f64>,
    t_weights: Vec<f64>,
    row_meta: &'a [RowMeta],
    row_weights: &'a [f64],
}

/// Operator dimensions and row metadata as JSON.
pub fn operator_json(cfg: &ExperimentConfig, op: &SamplingOperator) -> Result<String> {
    let h = OperatorHeader {
        versions: versions(),
        config: cfg,
        rows: op.matrix().nrows(),
        cols: op.matrix().ncols(),
        sigma: op.grid().sigma(),
        t_nodes: op.grid().nodes(),
        t_weights: op.grid().weights(),
        row_meta: op.rows(),
        row_weights: op.row_weights(),
    };
    Ok(serde_json::to_string_pretty(&h)? + "\n")
}

#[derive(Serialize)]
struct EntryRow {
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

/// Raw operator entries as CSV `row, col, re, im`.
pub fn operator_matrix_csv(header: &str, op: &SamplingOperator) -> Result<String> {
    let m = op.matrix();
    let mut rows = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            rows.push(EntryRow {
                row: r,
                col: c,
                re: v.re,
                im: v.im,
            });
        }
    }
    csv_document(header, &rows)
}

#[derive(Serialize)]
struct SampleRow {
    lambda: f64,
    u: f64,
    re: f64,
    im: f64,
}

/// Samples as CSV `lambda, u, re, im` in operator row order.
pub fn samples_csv(header: &str, rows: &[RowMeta], samples: &[Complex64]) -> Result<String> {
    let out: Vec<SampleRow> = rows
        .iter()
        .zip(samples)
        .map(|(m, s)| SampleRow {
            lambda: m.lambda,
            u: m.u,
            re: s.re,
            im: s.im,
        })
        .collect();
    csv_document(header, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynsamp_core::bandlimited::sinc_pw;
    use dynsamp_core::Jitter;

    #[test]
    fn spectrum_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let f = sinc_pw(std::f64::consts::PI, 0.5).unwrap();
        let cfg = ExperimentConfig::default();
        let path = dir.path().join("s.csv");
        write_atomic(
            &path,
            spectrum_csv(&comment_header("test", &cfg).unwrap(), &f)
                .unwrap()
                .as_bytes(),
        )
        .unwrap();
        let g = read_spectrum_csv(&path).unwrap();
        assert_eq!(f, g);
        assert!(!dir.path().join("s.csv.tmp").exists());
    }

    #[test]
    fn spectrum_rejects_non_uniform_grid() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let mut text = String::from("t,re,im\n");
        for j in 0..20 {
            let t = -1.0 + 2.0 * (j as f64 / 19.0).powi(2);
            text.push_str(&format!("{t},0,0\n"));
        }
        fs::write(&path, text).unwrap();
        assert!(matches!(
            read_spectrum_csv(&path),
            Err(CliError::Parse { .. })
        ));
    }

    #[test]
    fn points_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let set = SamplingSet::jittered(
            1.0,
            &Jitter::Uniform {
                amplitude: 0.2,
                seed: 4,
            },
            (-5.0, 5.0),
        )
        .unwrap();
        let csv_path = dir.path().join("p.csv");
        fs::write(&csv_path, points_csv("# command: test\n", &set)).unwrap();
        assert_eq!(read_points_csv(&csv_path).unwrap(), set);

        let txt_path = dir.path().join("p.txt");
        fs::write(&txt_path, points_txt(&set)).unwrap();
        let back = read_points_txt(&txt_path, Some(set.window())).unwrap();
        assert_eq!(back.points(), set.points());
    }

    #[test]
    fn samples_and_operator_exports() {
        let set = SamplingSet::arithmetic(1.0, 0.0, (-2.0, 2.0)).unwrap();
        let fam = dynsamp_core::KernelFamily::with_node_count(2.0, 0.5, 2.0, 2).unwrap();
        let op = SamplingOperator::assemble(&set, &fam, SpectrumGrid::periodic(1.0, 4.0).unwrap())
            .unwrap();
        let cfg = ExperimentConfig::default();
        let json: serde_json::Value =
            serde_json::from_str(&operator_json(&cfg, &op).unwrap()).unwrap();
        assert_eq!(json["rows"], 10);
        assert_eq!(json["row_meta"].as_array().unwrap().len(), 10);
        let m = operator_matrix_csv("", &op).unwrap();
        assert_eq!(m.lines().count(), 1 + 10 * op.grid().len());
        let s = samples_csv("# x\n", op.rows(), &[Complex64::new(1.0, -1.0); 10]).unwrap();
        assert!(s.starts_with("# x\nlambda,u,re,im\n"));
        assert_eq!(s.lines().count(), 12);
    }
}
