//! Command implementations. Each returns the text it would write, so the
//! binary only decides where the text goes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use discrete_curvature::conformal::curvature_report;
use discrete_curvature::families::{parameter_interval, FamilyConfig};
use discrete_curvature::solver::{family_roots, scan_family, uniformize as solve};
use discrete_curvature::{ConformalFactor, CurvatureReport, Family, SolverOptions};

use crate::error::{CliError, Result};
use crate::format::{parse, serialize, SurfaceFile};
use crate::numfmt::{fixed, sig};
use crate::obj;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_surface(path: &Path) -> Result<SurfaceFile> {
    parse(&read_text(path)?, &path.display().to_string())
}

/// Writes `text` to `path` through a temporary file in the same directory, or
/// to stdout when no path is given.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e));
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Per-vertex rows `id W A K` followed by the totals.
pub fn report_text(r: &CurvatureReport) -> String {
    let mut out = String::from("# vertex W A K\n");
    for i in 0..r.defects.len() {
        let _ = writeln!(out, "{i} {} {} {}", sig(r.defects[i]), sig(r.areas[i]), sig(r.curvature[i]));
    }
    let _ = writeln!(out, "A_tot {}", sig(r.total_area));
    let _ = writeln!(out, "chi {}", r.euler_characteristic);
    let _ = writeln!(out, "sum_W {}", sig(r.sum_defects()));
    let _ = writeln!(out, "flips_performed {}", r.flips);
    out
}

pub fn curvature(input: &Path) -> Result<String> {
    let f = read_surface(input)?;
    Ok(report_text(&curvature_report(&f.surface, &f.metric)?))
}

/// Reads a conformal factor written as `id value` rows.
pub fn read_factor(path: &Path, num_vertices: usize) -> Result<ConformalFactor> {
    let name = path.display().to_string();
    let text = read_text(path)?;
    let mut u: Vec<Option<f64>> = vec![None; num_vertices];
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let err = |message: String| CliError::Parse { path: name.clone(), line, message };
        let tok: Vec<&str> = l.split_whitespace().collect();
        let [id, value] = tok[..] else {
            return Err(err("expected '<vertex> <value>'".into()));
        };
        let id: usize = id.parse().map_err(|_| err(format!("invalid vertex '{id}'")))?;
        let value: f64 = match value.parse() {
            Ok(x) if f64::is_finite(x) => x,
            _ => return Err(err(format!("invalid value '{value}'"))),
        };
        if id >= num_vertices {
            return Err(err(format!("vertex {id} out of range (vertices {num_vertices})")));
        }
        if u[id].replace(value).is_some() {
            return Err(err(format!("duplicate value for vertex {id}")));
        }
    }
    u.into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| CliError::Usage(format!("{name}: no value for vertex {i}"))))
        .collect::<Result<Vec<f64>>>()
        .map(ConformalFactor)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformizeOutput {
    pub factor: String,
    pub report: String,
    pub iterations: usize,
    pub grad_norm: f64,
}

pub fn uniformize(input: &Path, mut opts: SolverOptions, init: Option<&Path>) -> Result<UniformizeOutput> {
    let f = read_surface(input)?;
    if let Some(path) = init {
        opts.init = Some(read_factor(path, f.surface.num_vertices())?);
    }
    let r = solve(&f.surface, &f.metric, &opts)?;
    let mut factor = String::from("# vertex u\n");
    for (i, x) in r.u_star.0.iter().enumerate() {
        let _ = writeln!(factor, "{i} {}", sig(*x));
    }
    let mut report = report_text(&r.report);
    let _ = writeln!(report, "iterations {}", r.iterations);
    let _ = writeln!(report, "grad_norm {}", sig(r.grad_norm));
    let _ = writeln!(report, "k_tol {}", sig(r.k_tol));
    Ok(UniformizeOutput { factor, report, iterations: r.iterations, grad_norm: r.grad_norm })
}

/// Rows `v D(v)` over the whole parameter interval. The two end rows are
/// marked with a trailing comment because the Delaunay condition is tight there.
pub fn scan(family: Family, b0: f64, c0: f64, samples: usize) -> Result<String> {
    let rows = scan_family(family, b0, c0, samples)?;
    let mut out = String::new();
    for (k, (v, d)) in rows.iter().enumerate() {
        let _ = write!(out, "{} {}", fixed(*v), sig(*d));
        if k == 0 || k + 1 == rows.len() {
            out.push_str(" # boundary");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Sorted roots of `D`, one per line.
pub fn roots(family: Family, b0: f64, c0: f64, samples: usize, root_tol: f64) -> Result<String> {
    let roots = family_roots(family, b0, c0, samples, root_tol)?;
    Ok(roots.iter().map(|v| format!("{}\n", fixed(*v))).collect())
}

/// Surface file of one family member.
pub fn family_file(family: Family, b0: f64, c0: f64, v: f64) -> Result<String> {
    parameter_interval(b0, c0)?;
    let m = family.member(&FamilyConfig::new(b0, c0, v)?)?;
    Ok(serialize(&m.surface, &m.metric))
}

/// Surface file converted from an OBJ mesh plus one warning per non-Delaunay edge.
pub fn import_obj(input: &Path) -> Result<(String, Vec<String>)> {
    let m = obj::import_obj(&read_text(input)?, &input.display().to_string())?;
    let warnings = m
        .non_delaunay
        .iter()
        .map(|(e, i, j, cot)| format!("edge {e} ({i}-{j}) is not Delaunay (cotangent sum {})", sig(*cot)))
        .collect();
    Ok((serialize(&m.surface, &m.metric), warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::exit;

    fn tmp_file(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn write_output_replaces_atomically() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_output(Some(&p), "one\n").unwrap();
        write_output(Some(&p), "two\n").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two\n");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn factor_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = tmp_file(&dir, "u", "# comment\n1 0.5\n0 -0.25\n");
        assert_eq!(read_factor(&p, 2).unwrap().0, vec![-0.25, 0.5]);
        assert!(read_factor(&p, 3).is_err());
        let bad = tmp_file(&dir, "bad", "0 x\n");
        assert_eq!(read_factor(&bad, 1).unwrap_err().exit_code(), exit::USAGE);
    }

    #[test]
    fn roots_of_the_small_family() {
        assert_eq!(roots(Family::Tetrahedron, 1.6, 1.75, 401, 1e-12).unwrap(), "0.000000000000\n");
        let three = roots(Family::Tetrahedron, 2.2, 2.35, 401, 1e-12).unwrap();
        assert_eq!(three.lines().count(), 3);
        let e = roots(Family::Tetrahedron, 1.0, 1.5, 401, 1e-12).unwrap_err();
        assert_eq!(e.exit_code(), exit::USAGE);
    }

    #[test]
    fn scan_rows() {
        let s = scan(Family::Tetrahedron, 1.6, 1.75, 5).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].ends_with("# boundary"));
        assert!(lines[2].starts_with("0.000000000000 "));
        assert!(!lines[2].contains('#'));
    }
}
