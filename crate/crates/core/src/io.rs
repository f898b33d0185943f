//! Flat text formats: CSV with a header row and `{:.16e}` numbers, and
//! `key=value` reports and configs.

use crate::error::{Error, Result};
use crate::initial_data::{AnnulusDomain, MeridianField, RadialProfile};
use crate::solver::{RadialField, Scheme, SolverConfig, SpaceTimeField};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_string<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator,
    I::Item: AsRef<[f64]>,
{
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let row = row.as_ref();
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v:.16e}");
        }
        s.push('\n');
    }
    s
}

pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator,
    I::Item: AsRef<[f64]>,
{
    fs::write(path, csv_string(header, rows))?;
    Ok(())
}

/// Header and numeric rows. Every row must have as many fields as the header.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: `{f}`: {e}", k + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != header.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, header has {}",
                k + 1,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

fn expect_header(found: &[String], want: &[&str]) -> Result<()> {
    if found.len() != want.len() || found.iter().zip(want).any(|(a, b)| a != b) {
        return Err(Error::Parse(format!("expected columns {}, found {}", want.join(","), found.join(","))));
    }
    Ok(())
}

pub fn radial_csv(field: &RadialField) -> String {
    csv_string(&["r", "value"], (0..=field.nr()).map(|i| [field.radius(i), field.values[i]]))
}

/// `cells + 1` uniform samples of a profile.
pub fn profile_csv(p: &RadialProfile, cells: usize) -> String {
    csv_string(&["r", "value"], p.nodes(cells).into_iter().map(|r| [r, p.value(r)]))
}

pub fn meridian_csv(field: &MeridianField) -> String {
    csv_string(&["z", "rho", "value"], field.rows())
}

/// Reads `(r, value)` rows on a uniform grid. `n` is not part of the file.
pub fn read_radial_csv(text: &str, n: usize) -> Result<RadialField> {
    let (header, rows) = parse_csv(text)?;
    expect_header(&header, &["r", "value"])?;
    if rows.len() < 5 {
        return Err(Error::Parse("need at least 5 radial nodes".into()));
    }
    let (lo, hi) = (rows[0][0], rows[rows.len() - 1][0]);
    let domain = AnnulusDomain::new(n, lo, hi)?;
    let cells = rows.len() - 1;
    for (k, row) in rows.iter().enumerate() {
        if (row[0] - domain.node(k, cells)).abs() > 1e-9 * hi.abs().max(1.0) {
            return Err(Error::Parse(format!("radius {} at row {} is off the uniform grid", row[0], k + 1)));
        }
    }
    Ok(RadialField {
        domain,
        values: rows.iter().map(|r| r[1]).collect(),
    })
}

/// Reads `(z, ρ, value)` rows in the order written by [`meridian_csv`].
pub fn read_meridian_csv(text: &str, n: usize) -> Result<MeridianField> {
    let (header, rows) = parse_csv(text)?;
    expect_header(&header, &["z", "rho", "value"])?;
    let radius = |row: &Vec<f64>| row[0].hypot(row[1]);
    let r_in = radius(rows.first().ok_or_else(|| Error::Parse("no rows".into()))?);
    let width = rows
        .iter()
        .take_while(|row| (radius(row) - r_in).abs() < 1e-9 * r_in.max(1.0))
        .count();
    if width < 3 || rows.len() % width != 0 {
        return Err(Error::Parse("rows do not form a polar grid".into()));
    }
    let r_out = radius(&rows[rows.len() - 1]);
    let domain = AnnulusDomain::new(n, r_in, r_out)?;
    let field = MeridianField::new(
        domain,
        rows.len() / width - 1,
        width - 1,
        rows.iter().map(|r| r[2]).collect(),
    )?;
    for (k, (row, want)) in rows.iter().zip(field.rows()).enumerate() {
        if (row[0] - want[0]).abs() > 1e-9 || (row[1] - want[1]).abs() > 1e-9 {
            return Err(Error::Parse(format!("row {} is off the polar grid", k + 1)));
        }
    }
    Ok(field)
}

pub fn kv_string<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        let _ = writeln!(s, "{}={}", k.as_ref(), v.as_ref());
    }
    s
}

/// One `key=value` per line; blank lines and `#` comments are skipped.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: missing `=`", k + 1)))?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| Error::Parse(format!("{key}: `{v}`: {e}")))
}

/// Keys: `scheme`, `dt`, `nr`, `ntheta`, `t_final`, `snapshots` (a
/// comma-separated list of times, or `uniform:K`), `startup`.
pub fn parse_solver_config(text: &str) -> Result<SolverConfig> {
    let mut cfg = SolverConfig::new(f64::NAN, 0, 0, f64::NAN);
    let mut snaps: Option<String> = None;
    for (key, v) in parse_kv(text)? {
        match key.as_str() {
            "scheme" => cfg.scheme = Scheme::parse(&v)?,
            "dt" => cfg.dt = num(&key, &v)?,
            "nr" => cfg.nr = num(&key, &v)?,
            "ntheta" => cfg.ntheta = num(&key, &v)?,
            "t_final" => cfg.t_final = num(&key, &v)?,
            "snapshots" => snaps = Some(v),
            "startup" => cfg.startup_steps = num(&key, &v)?,
            other => return Err(Error::Parse(format!("unknown config key `{other}`"))),
        }
    }
    for (name, ok) in [("dt", cfg.dt.is_finite()), ("t_final", cfg.t_final.is_finite()), ("nr", cfg.nr > 0)] {
        if !ok {
            return Err(Error::Parse(format!("missing config key `{name}`")));
        }
    }
    if let Some(s) = snaps {
        cfg = match s.strip_prefix("uniform:") {
            Some(k) => cfg.clone().with_uniform_snapshots(num("snapshots", k)?),
            None if s.is_empty() => cfg,
            None => {
                let times = s
                    .split(',')
                    .map(|t| num::<f64>("snapshots", t.trim()))
                    .collect::<Result<Vec<_>>>()?;
                cfg.with_snapshots(times)
            }
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn solver_config_kv(cfg: &SolverConfig) -> Vec<(String, String)> {
    let times: Vec<String> = cfg.snapshot_times.iter().map(|t| fmt_f64(*t)).collect();
    vec![
        ("scheme".into(), cfg.scheme.name().into()),
        ("dt".into(), fmt_f64(cfg.dt)),
        ("nr".into(), cfg.nr.to_string()),
        ("ntheta".into(), cfg.ntheta.to_string()),
        ("t_final".into(), fmt_f64(cfg.t_final)),
        ("snapshots".into(), times.join(",")),
        ("startup".into(), cfg.startup_steps.to_string()),
    ]
}

fn export<F>(dir: &Path, field: &SpaceTimeField<F>, csv: impl Fn(&F) -> String) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut index = Vec::with_capacity(field.len());
    for (k, (t, f)) in field.snapshots.iter().enumerate() {
        fs::write(dir.join(format!("snapshot_{k:05}.csv")), csv(f))?;
        index.push(format!("{k},{}", fmt_f64(*t)));
    }
    let mut s = String::from("snapshot_id,t\n");
    for line in index {
        s.push_str(&line);
        s.push('\n');
    }
    fs::write(dir.join("index.csv"), s)?;
    Ok(())
}

/// One CSV per snapshot plus `index.csv` with `(snapshot_id, t)`.
pub fn export_radial_snapshots(dir: &Path, field: &SpaceTimeField<RadialField>) -> Result<()> {
    export(dir, field, radial_csv)
}

pub fn export_meridian_snapshots(dir: &Path, field: &SpaceTimeField<MeridianField>) -> Result<()> {
    export(dir, field, meridian_csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_exact_and_lf_terminated() {
        let s = csv_string(&["a", "b"], [[0.1, 1.0 / 3.0]]);
        assert!(s.ends_with('\n') && !s.contains('\r'));
        let (_, rows) = parse_csv(&s).unwrap();
        assert_eq!(rows[0], vec![0.1, 1.0 / 3.0]);
    }

    #[test]
    fn config_round_trip() {
        let cfg = SolverConfig::new(0.01, 32, 16, 0.5).with_snapshots(vec![0.1, 0.25]);
        let text = kv_string(&solver_config_kv(&cfg));
        assert_eq!(parse_solver_config(&text).unwrap(), cfg);
        assert!(parse_solver_config("dt=0.1\nnr=8\nt_final=1\ncolour=red\n").is_err());
    }
}
