//! OBJ and CSV export.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::heisenberg::HPoint;
use crate::ruling::RuledSurface;

/// Writes a `#` header naming the columns, then one comma-separated row per
/// record with 17 significant digits.
pub fn write_csv<W: Write>(mut w: W, columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> io::Result<()> {
    writeln!(w, "# {}", columns.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

pub fn write_csv_file(path: &Path, columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    File::create(path).and_then(|f| write_csv(BufWriter::new(f), columns, rows)).map_err(|e| Error::io(path, e))
}

/// Vertices row-major (`n_h` rows of `n_s`), each quad split along the
/// `(j, i)`–`(j+1, i+1)` diagonal.
pub fn write_obj<W: Write>(mut w: W, vertices: &[HPoint], n_s: usize, n_h: usize) -> io::Result<()> {
    assert_eq!(vertices.len(), n_s * n_h, "vertex count must be n_s * n_h");
    writeln!(w, "# ruled surface, {n_h} x {n_s} vertices, coordinates x y t")?;
    for p in vertices {
        writeln!(w, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.t)?;
    }
    for j in 0..n_h.saturating_sub(1) {
        for i in 0..n_s.saturating_sub(1) {
            let a = j * n_s + i + 1;
            let (b, c, d) = (a + 1, a + n_s + 1, a + n_s);
            writeln!(w, "f {a} {b} {c}")?;
            writeln!(w, "f {a} {c} {d}")?;
        }
    }
    w.flush()
}

/// `B u = ᾱ/β̄` per `s` node. At the pinches the direction degenerates, so
/// the value there is extrapolated linearly from the two nearest rulings.
pub fn burgers_per_ruling(surface: &RuledSurface) -> Vec<f64> {
    let n = surface.n_s();
    let s = &surface.lambda.grid;
    let mut b: Vec<f64> = surface.directions.iter().map(|&(a, bb)| if bb > 0.0 { a / bb } else { f64::NAN }).collect();
    if n >= 4 {
        let ext =
            |i0: usize, i1: usize, at: usize, b: &[f64]| b[i0] + (b[i1] - b[i0]) * (s[at] - s[i0]) / (s[i1] - s[i0]);
        b[0] = ext(1, 2, 0, &b);
        b[n - 1] = ext(n - 2, n - 3, n - 1, &b);
    }
    b
}

/// `surface.obj` plus a CSV `(j, i, h, s, B u)` in the same vertex order.
pub fn export_mesh(surface: &RuledSurface, obj_path: &Path, csv_path: &Path) -> Result<()> {
    let (n_s, n_h) = (surface.n_s(), surface.n_h());
    File::create(obj_path)
        .and_then(|f| write_obj(BufWriter::new(f), &surface.mesh, n_s, n_h))
        .map_err(|e| Error::io(obj_path, e))?;
    let bu = burgers_per_ruling(surface);
    let rows = (0..n_h).flat_map(|j| {
        let bu = &bu;
        (0..n_s).map(move |i| vec![j as f64, i as f64, surface.h_grid[j], surface.lambda.grid[i], bu[i]])
    });
    write_csv_file(csv_path, &["j", "i", "h", "s", "bu"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::area::burgers_on_ruling;
    use crate::ruling::tests::{c1, flat};

    fn obj_counts(text: &str) -> (usize, usize) {
        (text.lines().filter(|l| l.starts_with("v ")).count(), text.lines().filter(|l| l.starts_with("f ")).count())
    }

    #[test]
    fn three_by_three() {
        let vs: Vec<HPoint> = (0..9).map(|k| HPoint::new(0.0, (k % 3) as f64, (k / 3) as f64)).collect();
        let mut buf = Vec::new();
        write_obj(&mut buf, &vs, 3, 3).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(obj_counts(&text), (9, 8));
        assert!(text.contains("f 1 2 5\nf 1 5 4\n"));
        assert!(text
            .lines()
            .filter(|l| l.starts_with("f "))
            .all(|l| { l[2..].split(' ').all(|x| (1..=9).contains(&x.parse::<usize>().unwrap())) }));
    }

    #[test]
    fn flat_mesh_is_planar() {
        let s = RuledSurface::build(&flat(), 17, 5).unwrap();
        let mut buf = Vec::new();
        write_obj(&mut buf, &s.mesh, s.n_s(), s.n_h()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(obj_counts(&text), (17 * 5, 16 * 4 * 2));
        for l in text.lines().filter(|l| l.starts_with("v ")) {
            assert_eq!(l.split(' ').nth(1).unwrap().parse::<f64>().unwrap(), 0.0);
        }
    }

    #[test]
    fn csv_round_trips() {
        let mut buf = Vec::new();
        let x = 0.1 + 0.2;
        write_csv(&mut buf, &["a", "b"], [vec![x, -1e-300], vec![f64::MAX, 3.0]]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# a,b"));
        let first: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(first, vec![x, -1e-300]);
    }

    #[test]
    fn burgers_column() {
        let c = c1();
        let s = RuledSurface::build(&c, 33, 3).unwrap();
        let bu = burgers_per_ruling(&s);
        for (b, &si) in bu.iter().zip(&s.lambda.grid).take(32).skip(1) {
            assert!((b - burgers_on_ruling(&c, si).unwrap()).abs() < 1e-15);
        }
        assert!(bu.iter().all(|b| b.is_finite()));
        let dir = tempfile::tempdir().unwrap();
        let (o, v) = (dir.path().join("s.obj"), dir.path().join("s.csv"));
        export_mesh(&s, &o, &v).unwrap();
        let csv = std::fs::read_to_string(&v).unwrap();
        assert_eq!(csv.lines().count(), 1 + 33 * 3);
        assert_eq!(obj_counts(&std::fs::read_to_string(&o).unwrap()).0, s.n_s() * s.n_h());
    }
}
