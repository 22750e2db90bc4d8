//! JSON and CSV emission. Floats are written with 17 significant digits,
//! so every value round-trips bit-exactly.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use caretflow::geometry::RegimeReport;
use caretflow::mesh::Grid;
use caretflow::solver::SolutionField;
use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter, Serializer};

use crate::CliError;

/// Pretty printing with every finite float as `{:.16e}`.
struct Fixed17<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $t:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $t)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for Fixed17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Fixed17(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).map_err(|e| CliError::Io(e.to_string()))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Single-line variant, for streams.
pub fn to_json_line<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    struct Line(CompactFormatter);
    impl Formatter for Line {
        fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
            write!(w, "{value:.16e}")
        }
    }
    let mut buf = Vec::new();
    value.serialize(&mut Serializer::with_formatter(&mut buf, Line(CompactFormatter))).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn emit_report_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<(), CliError> {
    write_file(path, &to_json(value)?)
}

pub const FIELD_HEADER: &str = "i,j,xi1,xi2,psi,w,phi,v1,v2,v3,c,rho,L2,tag";

pub fn field_csv(field: &SolutionField) -> String {
    let g = &field.grid;
    let mut s = String::with_capacity(g.len() * 256);
    s.push_str(FIELD_HEADER);
    s.push('\n');
    for k in 0..g.len() {
        let (i, j) = g.ij(k);
        let [x1, x2] = g.nodes[k];
        let v = field.velocity[k];
        let _ = write!(s, "{i},{j}");
        for x in [x1, x2, field.psi[k], field.w[k], field.phi[k], v[0], v[1], v[2], field.c[k], field.rho[k], field.l2[k]] {
            let _ = write!(s, ",{x:.16e}");
        }
        let _ = writeln!(s, ",{}", g.tags[k].as_str());
    }
    s
}

pub fn emit_field_csv(field: &SolutionField, path: &Path) -> Result<(), CliError> {
    write_file(path, &field_csv(field))
}

pub fn grid_csv(grid: &Grid) -> String {
    let mut s = String::from("i,j,xi1,xi2,tag\n");
    for k in 0..grid.len() {
        let (i, j) = grid.ij(k);
        let [x1, x2] = grid.nodes[k];
        let _ = writeln!(s, "{i},{j},{x1:.16e},{x2:.16e},{}", grid.tags[k].as_str());
    }
    s
}

const ATLAS_POINTS: [&str; 8] = ["P0", "P1", "P2", "P4", "P5", "P6", "P7", "PR"];

/// Regime atlas: one row per report.
pub fn atlas_csv(reports: &[RegimeReport]) -> String {
    let mut s = String::from("beta,regime,beta_c,beta0");
    for p in ATLAS_POINTS {
        let _ = write!(s, ",{p}_xi1,{p}_xi2");
    }
    s.push('\n');
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
    for r in reports {
        let _ = write!(s, "{:.16e},{:?},{},{}", r.inputs.beta, r.regime, opt(r.beta_c), opt(r.beta0));
        let pts = &r.points;
        for p in [pts.p0, pts.p1, pts.p2, pts.p4, pts.p5, pts.p6, pts.p7, pts.pr] {
            let _ = write!(s, ",{},{}", opt(p.map(|p| p[0])), opt(p.map(|p| p[1])));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_seventeen_digits_and_round_trip() {
        let v = vec![0.1, 1.0 / 3.0, -2.5e-300, 6.02e23];
        let s = to_json(&v).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert_eq!(to_json_line(&[1.5]).unwrap(), "[1.5000000000000000e0]");
    }

    #[test]
    fn non_finite_becomes_null() {
        assert_eq!(to_json_line(&[f64::NAN]).unwrap(), "[null]");
    }
}
