use std::fmt::Write as _;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Complex(Complex64),
}

impl Cell {
    fn kind(&self) -> ColumnKind {
        match self {
            Cell::Real(_) => ColumnKind::Real,
            Cell::Complex(_) => ColumnKind::Complex,
        }
    }
}

/// One sweep, one row per parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub probe_name: String,
    pub parameters: Vec<(String, String)>,
    columns: Vec<(String, ColumnKind)>,
    rows: Vec<Vec<Cell>>,
    pub verdict: Option<String>,
    pub warnings: Vec<String>,
}

/// Shortest round-trip decimal, scientific outside `[1e-5, 1e16)`.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl ProbeReport {
    pub fn new(name: &str, columns: &[(&str, ColumnKind)]) -> Self {
        Self {
            probe_name: name.to_string(),
            parameters: Vec::new(),
            columns: columns.iter().map(|(n, k)| (n.to_string(), *k)).collect(),
            rows: Vec::new(),
            verdict: None,
            warnings: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.push((key.to_string(), value.to_string()));
    }

    /// Panics if the row does not match the schema.
    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row length must match the schema");
        for (cell, (name, kind)) in row.iter().zip(&self.columns) {
            assert_eq!(cell.kind(), *kind, "column {name} has the wrong kind");
        }
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[(String, ColumnKind)] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(n, _)| n == name)
    }

    /// Values of a real column.
    pub fn real_column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.index(name)?;
        self.rows
            .iter()
            .map(|r| match r[i] {
                Cell::Real(x) => Some(x),
                Cell::Complex(_) => None,
            })
            .collect()
    }

    /// Values of a complex column.
    pub fn complex_column(&self, name: &str) -> Option<Vec<Complex64>> {
        let i = self.index(name)?;
        self.rows
            .iter()
            .map(|r| match r[i] {
                Cell::Complex(z) => Some(z),
                Cell::Real(_) => None,
            })
            .collect()
    }

    /// Header comment, column names, rows. Parameter values and the verdict
    /// have spaces replaced by underscores so the first line splits on blanks.
    pub fn to_csv(&self) -> String {
        let mut s = format!("# probe={}", self.probe_name);
        for (k, v) in &self.parameters {
            let _ = write!(s, " {k}={}", v.replace(' ', "_"));
        }
        if let Some(v) = &self.verdict {
            let _ = write!(s, " verdict={}", v.replace(' ', "_"));
        }
        s.push('\n');
        let header: Vec<String> = self
            .columns
            .iter()
            .flat_map(|(n, k)| match k {
                ColumnKind::Real => vec![n.clone()],
                ColumnKind::Complex => vec![format!("{n}_re"), format!("{n}_im")],
            })
            .collect();
        s.push_str(&header.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .flat_map(|c| match c {
                    Cell::Real(x) => vec![fmt_num(*x)],
                    Cell::Complex(z) => vec![fmt_num(z.re), fmt_num(z.im)],
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}
