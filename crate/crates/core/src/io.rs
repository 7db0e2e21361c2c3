//! Profile files: a CSV table `s,omega,omega_p,f,f_p` next to a JSON sidecar
//! `{n, b, alpha, tol, s0, s_max}` sharing its stem. Every number is written
//! with 17 significant digits so that `f64` values survive a round trip
//! exactly.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::FlowTrace;
use crate::ode::SolitonProfile;
use crate::radial_pde::{RadialTensor2, RadialVectorField};
use crate::Scalar;

pub const PROFILE_HEADER: [&str; 5] = ["s", "omega", "omega_p", "f", "f_p"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub n: usize,
    pub b: f64,
    pub alpha: f64,
    pub tol: f64,
    pub s0: f64,
    pub s_max: f64,
}

impl Sidecar {
    pub fn of<T: Scalar>(p: &SolitonProfile<T>) -> Self {
        Self {
            n: p.n,
            b: p.b.to_f64_lossy(),
            alpha: p.alpha.to_f64_lossy(),
            tol: p.tol.to_f64_lossy(),
            s0: p.s0().to_f64_lossy(),
            s_max: p.s_max().to_f64_lossy(),
        }
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `dir/name.csv` → `dir/name.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

fn write_rows<W: Write>(w: W, header: &[&str], columns: &[Vec<f64>]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        out.write_record(columns.iter().map(|c| fmt_num(c[i])))?;
    }
    out.flush()?;
    Ok(())
}

fn lossy<T: Scalar>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64_lossy()).collect()
}

pub fn write_profile_csv<T: Scalar, W: Write>(p: &SolitonProfile<T>, w: W) -> Result<()> {
    write_rows(w, &PROFILE_HEADER, &[lossy(&p.s), lossy(&p.omega), lossy(&p.omega_p), lossy(&p.f), lossy(&p.f_p)])
}

pub fn write_sidecar<W: Write>(sidecar: &Sidecar, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, sidecar)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// Writes `csv_path` and its sidecar.
pub fn save_profile<T: Scalar>(p: &SolitonProfile<T>, csv_path: &Path) -> Result<()> {
    write_profile_csv(p, BufWriter::new(File::create(csv_path)?))?;
    write_sidecar(&Sidecar::of(p), BufWriter::new(File::create(sidecar_path(csv_path))?))
}

fn parse_num<T: Scalar>(field: &str, row: usize, col: &str) -> Result<T> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Format(format!("row {row}, column {col}: cannot parse {field:?}")))?;
    T::from_f64(v).ok_or_else(|| Error::Format(format!("row {row}, column {col}: {v} not representable")))
}

/// Reads the table and combines it with the sidecar metadata. The sidecar's
/// `s0` and `s_max` must match the first and last rows.
pub fn read_profile<T: Scalar, R: Read>(csv_data: R, sidecar: &Sidecar) -> Result<SolitonProfile<T>> {
    let mut rdr = csv::Reader::from_reader(csv_data);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if header != PROFILE_HEADER {
        return Err(Error::Format(format!("expected header {}, found {}", PROFILE_HEADER.join(","), header.join(","))));
    }
    let mut cols: [Vec<T>; 5] = Default::default();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 5 {
            return Err(Error::Format(format!("row {row} has {} fields", rec.len())));
        }
        for (c, col) in cols.iter_mut().enumerate() {
            col.push(parse_num(&rec[c], row, PROFILE_HEADER[c])?);
        }
    }
    let [s, omega, omega_p, f, f_p] = cols;
    if s.len() < 3 {
        return Err(Error::Format(format!("profile has {} rows, need at least 3", s.len())));
    }
    if sidecar.n < 3 {
        return Err(Error::Format("dimension must be ≥ 3".into()));
    }
    if s.windows(2).any(|w| !(w[1] > w[0])) || !(s[0] > T::zero()) {
        return Err(Error::Format("s column is not positive and strictly increasing".into()));
    }
    if omega.iter().any(|w| !(*w > T::zero())) {
        return Err(Error::Format("omega column has non-positive entries".into()));
    }
    let ends = (s[0].to_f64_lossy(), s[s.len() - 1].to_f64_lossy());
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    if !close(ends.0, sidecar.s0) || !close(ends.1, sidecar.s_max) {
        return Err(Error::Format(format!(
            "sidecar range [{:e}, {:e}] does not match the table [{:e}, {:e}]",
            sidecar.s0, sidecar.s_max, ends.0, ends.1
        )));
    }
    let lit = |v: f64, name: &str| T::from_f64(v).ok_or_else(|| Error::Format(format!("sidecar {name} {v} not representable")));
    Ok(SolitonProfile {
        n: sidecar.n,
        b: lit(sidecar.b, "b")?,
        alpha: lit(sidecar.alpha, "alpha")?,
        tol: lit(sidecar.tol, "tol")?,
        s,
        omega,
        omega_p,
        f,
        f_p,
    })
}

/// Loads `csv_path` and its sidecar.
pub fn load_profile<T: Scalar>(csv_path: &Path) -> Result<SolitonProfile<T>> {
    let sidecar: Sidecar = serde_json::from_reader(File::open(sidecar_path(csv_path))?)?;
    read_profile(File::open(csv_path)?, &sidecar)
}

pub fn write_vector_field<T: Scalar, W: Write>(v: &RadialVectorField<T>, w: W) -> Result<()> {
    write_rows(w, &["s", "v"], &[lossy(&v.s), lossy(&v.v)])
}

pub fn write_tensor<T: Scalar, W: Write>(h: &RadialTensor2<T>, w: W) -> Result<()> {
    write_rows(w, &["s", "beta", "gamma"], &[lossy(&h.s), lossy(&h.beta), lossy(&h.gamma)])
}

pub fn write_flow_trace<W: Write>(t: &FlowTrace, w: W) -> Result<()> {
    write_rows(
        w,
        &["tau", "s", "r", "f", "bound_r", "bound_f"],
        &[t.tau.clone(), t.s.clone(), t.r.clone(), t.f.clone(), t.bound_r.clone(), t.bound_f.clone()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let p = SolitonProfile::construct(3, -1.0_f64, 1e4, 300, 1e-10).unwrap();
        let mut buf = Vec::new();
        write_profile_csv(&p, &mut buf).unwrap();
        let q: SolitonProfile<f64> = read_profile(buf.as_slice(), &Sidecar::of(&p)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let side = Sidecar { n: 3, b: 0.0, alpha: 0.0, tol: 1e-10, s0: 1.0, s_max: 3.0 };
        let bad_header = "s,omega,f\n1,1,1\n";
        assert!(matches!(read_profile::<f64, _>(bad_header.as_bytes(), &side), Err(Error::Format(_))));
        let decreasing = "s,omega,omega_p,f,f_p\n1,1,0,0.25,0.25\n3,1,0,0.75,0.25\n2,1,0,0.5,0.25\n";
        assert!(matches!(read_profile::<f64, _>(decreasing.as_bytes(), &side), Err(Error::Format(_))));
        let garbage = "s,omega,omega_p,f,f_p\n1,1,0,0.25,0.25\n2,x,0,0.5,0.25\n3,1,0,0.75,0.25\n";
        assert!(matches!(read_profile::<f64, _>(garbage.as_bytes(), &side), Err(Error::Format(_))));
        let ok = "s,omega,omega_p,f,f_p\n1,1,0,0.25,0.25\n2,1,0,0.5,0.25\n3,1,0,0.75,0.25\n";
        assert!(read_profile::<f64, _>(ok.as_bytes(), &side).is_ok());
        let wrong_range = Sidecar { s_max: 4.0, ..side };
        assert!(read_profile::<f64, _>(ok.as_bytes(), &wrong_range).is_err());
    }

    #[test]
    fn number_format_has_17_digits() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(-2.5), "-2.5000000000000000e0");
    }
}
