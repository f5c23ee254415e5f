//! Plain-text mesh format:
//!
//! ```text
//! N <count>
//! x y [value]      one line per node, 17 significant digits
//! E <count>
//! i j k            counterclockwise node indices
//! B <count>
//! i j tag          boundary edges, tag is `outer` or `diagonal`
//! ```
//!
//! The optional third node column carries nodal values such as an eigenvector.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use spectral_bounds_core::geometry::{EdgeTag, Mesh};

#[derive(Debug)]
pub enum MeshFormatError {
    Io(std::io::Error),
    Parse { line: usize, message: String },
}

impl std::fmt::Display for MeshFormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeshFormatError::Io(e) => write!(f, "mesh file: {e}"),
            MeshFormatError::Parse { line, message } => {
                write!(f, "mesh file line {line}: {message}")
            }
        }
    }
}

impl std::error::Error for MeshFormatError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            MeshFormatError::Io(e) => Some(e),
            MeshFormatError::Parse { .. } => None,
        }
    }
}

impl From<std::io::Error> for MeshFormatError {
    fn from(e: std::io::Error) -> Self {
        MeshFormatError::Io(e)
    }
}

/// Serialises `mesh`, appending `values` as a third node column when given.
pub fn write_mesh(mesh: &Mesh, values: Option<&[f64]>) -> String {
    if let Some(v) = values {
        assert_eq!(v.len(), mesh.num_nodes(), "one value per node");
    }
    let mut s = String::new();
    writeln!(s, "N {}", mesh.num_nodes()).unwrap();
    for (i, p) in mesh.nodes.iter().enumerate() {
        match values {
            Some(v) => writeln!(s, "{:.16e} {:.16e} {:.16e}", p[0], p[1], v[i]).unwrap(),
            None => writeln!(s, "{:.16e} {:.16e}", p[0], p[1]).unwrap(),
        }
    }
    writeln!(s, "E {}", mesh.num_elements()).unwrap();
    for t in &mesh.elements {
        writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    writeln!(s, "B {}", mesh.boundary_edges.len()).unwrap();
    for (e, tag) in &mesh.boundary_edges {
        writeln!(s, "{} {} {}", e[0], e[1], tag.as_str()).unwrap();
    }
    s
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<Vec<&'a str>, MeshFormatError> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !fields.is_empty() {
                return Ok(fields);
            }
        }
        Err(self.err("unexpected end of file"))
    }

    fn err(&self, message: impl Into<String>) -> MeshFormatError {
        MeshFormatError::Parse {
            line: self.last,
            message: message.into(),
        }
    }

    fn header(&mut self, key: &str) -> Result<usize, MeshFormatError> {
        let f = self.next()?;
        if f.len() != 2 || f[0] != key {
            return Err(self.err(format!("expected `{key} <count>`")));
        }
        f[1].parse().map_err(|_| self.err("bad count"))
    }

    fn parse<T: std::str::FromStr>(&self, s: &str) -> Result<T, MeshFormatError> {
        s.parse()
            .map_err(|_| self.err(format!("cannot parse `{s}`")))
    }
}

/// Parses the text format; returns the mesh and the value column if present.
pub fn parse_mesh(text: &str) -> Result<(Mesh, Option<Vec<f64>>), MeshFormatError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let n = lines.header("N")?;
    let mut nodes = Vec::with_capacity(n);
    let mut values = Vec::new();
    let mut with_values = None;
    for _ in 0..n {
        let f = lines.next()?;
        let has = match (f.len(), with_values) {
            (2, None | Some(false)) => false,
            (3, None | Some(true)) => true,
            _ => return Err(lines.err("inconsistent node line")),
        };
        with_values = Some(has);
        nodes.push([lines.parse(f[0])?, lines.parse(f[1])?]);
        if has {
            values.push(lines.parse(f[2])?);
        }
    }
    let e = lines.header("E")?;
    let mut elements = Vec::with_capacity(e);
    for _ in 0..e {
        let f = lines.next()?;
        if f.len() != 3 {
            return Err(lines.err("element line needs three indices"));
        }
        let tri: [usize; 3] = [lines.parse(f[0])?, lines.parse(f[1])?, lines.parse(f[2])?];
        if tri.iter().any(|&i| i >= n) {
            return Err(lines.err("node index out of range"));
        }
        elements.push(tri);
    }
    let b = lines.header("B")?;
    let mut boundary_edges = Vec::with_capacity(b);
    for _ in 0..b {
        let f = lines.next()?;
        if f.len() != 3 {
            return Err(lines.err("boundary line needs two indices and a tag"));
        }
        let edge: [usize; 2] = [lines.parse(f[0])?, lines.parse(f[1])?];
        if edge.iter().any(|&i| i >= n) {
            return Err(lines.err("node index out of range"));
        }
        let tag =
            EdgeTag::parse(f[2]).ok_or_else(|| lines.err(format!("unknown tag `{}`", f[2])))?;
        boundary_edges.push((edge, tag));
    }
    let mesh = Mesh {
        nodes,
        elements,
        boundary_edges,
        refinement_level: 0,
    };
    Ok((mesh, with_values.filter(|&h| h).map(|_| values)))
}

pub fn save_mesh(path: &Path, mesh: &Mesh, values: Option<&[f64]>) -> Result<(), MeshFormatError> {
    fs::write(path, write_mesh(mesh, values))?;
    Ok(())
}

pub fn load_mesh(path: &Path) -> Result<(Mesh, Option<Vec<f64>>), MeshFormatError> {
    parse_mesh(&fs::read_to_string(path)?)
}
