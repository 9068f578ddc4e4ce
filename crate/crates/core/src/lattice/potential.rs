use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PeriodicGrid;
use crate::{Error, Result};

/// Nonnegative potential sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    samples: Vec<f64>,
    label: String,
}

impl Potential {
    pub fn new(samples: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidPotential("no samples".into()));
        }
        if let Some((j, v)) = samples.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidPotential(format!(
                "sample {j} is {v}; potentials must be finite and nonnegative"
            )));
        }
        Ok(Self {
            samples,
            label: label.into(),
        })
    }

    pub fn constant(grid: &PeriodicGrid, mu: f64) -> Result<Self> {
        Self::new(vec![mu; grid.len()], format!("constant:{mu}"))
    }

    /// `V(x) = x²` on `[-P/2, P/2)`, extended periodically.
    pub fn quadratic(grid: &PeriodicGrid) -> Self {
        let samples = grid.coordinates().into_iter().map(|x| x * x).collect();
        Self {
            samples,
            label: "quadratic".into(),
        }
    }

    /// Flat-bottomed well: `0` for `|x| < width/2`, `depth` elsewhere.
    pub fn well(grid: &PeriodicGrid, depth: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidPotential(format!(
                "well width must be positive, got {width}"
            )));
        }
        let samples = grid
            .coordinates()
            .into_iter()
            .map(|x| if x.abs() < 0.5 * width { 0.0 } else { depth })
            .collect();
        Self::new(samples, format!("well:{depth},{width}"))
    }

    /// Parses a builtin specification: `constant:μ`, `quadratic`,
    /// `well:depth,width`, or `file:PATH`.
    pub fn from_spec(grid: &PeriodicGrid, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, args) = match spec.split_once(':') {
            Some((n, a)) => (n.trim(), a.trim()),
            None => (spec, ""),
        };
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidPotential(format!("cannot parse number {s:?} in {spec:?}")))
        };
        match name {
            "constant" => Self::constant(grid, parse(args)?),
            "quadratic" if args.is_empty() => Ok(Self::quadratic(grid)),
            "well" => {
                let (d, w) = args
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidPotential(format!("expected well:depth,width, got {spec:?}")))?;
                Self::well(grid, parse(d)?, parse(w)?)
            }
            "file" => Self::from_file(grid, Path::new(args)),
            _ => Err(Error::InvalidPotential(format!("unknown potential {spec:?}"))),
        }
    }

    /// Reads a two-column `coordinate value` table and interpolates it
    /// linearly (periodically) onto the grid. Blank lines and `#` comments
    /// are skipped.
    pub fn from_file(grid: &PeriodicGrid, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut table = Self::parse_table(&text)?;
        let period = grid.period();
        for row in table.iter_mut() {
            row.0 = (row.0 + 0.5 * period).rem_euclid(period) - 0.5 * period;
        }
        table.sort_by(|a, b| a.0.total_cmp(&b.0));
        let samples = grid
            .coordinates()
            .into_iter()
            .map(|x| interpolate_periodic(&table, period, x))
            .collect();
        Self::new(samples, format!("file:{}", path.display()))
    }

    fn parse_table(text: &str) -> Result<Vec<(f64, f64)>> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(Error::InvalidPotential(format!(
                    "line {}: expected two columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let x: f64 = cols[0]
                .parse()
                .map_err(|_| Error::InvalidPotential(format!("line {}: bad coordinate", lineno + 1)))?;
            let v: f64 = cols[1]
                .parse()
                .map_err(|_| Error::InvalidPotential(format!("line {}: bad value", lineno + 1)))?;
            rows.push((x, v));
        }
        if rows.is_empty() {
            return Err(Error::InvalidPotential("potential file has no rows".into()));
        }
        Ok(rows)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(0.0, f64::max)
    }

    /// True when no sample is positive (critical radius undefined).
    pub fn is_trivial(&self) -> bool {
        self.samples.iter().all(|&v| v == 0.0)
    }

    /// `Some(μ)` when every sample equals `μ` exactly.
    pub fn constant_value(&self) -> Option<f64> {
        let first = self.samples[0];
        self.samples.iter().all(|&v| v == first).then_some(first)
    }

    pub fn check_grid(&self, grid: &PeriodicGrid) -> Result<()> {
        if self.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

fn interpolate_periodic(table: &[(f64, f64)], period: f64, x: f64) -> f64 {
    if table.len() == 1 {
        return table[0].1;
    }
    let idx = table.partition_point(|r| r.0 <= x);
    let (left, right) = match idx {
        0 => {
            let l = table[table.len() - 1];
            ((l.0 - period, l.1), table[0])
        }
        i if i == table.len() => {
            let r = table[0];
            (table[i - 1], (r.0 + period, r.1))
        }
        i => (table[i - 1], table[i]),
    };
    let span = right.0 - left.0;
    if span <= 0.0 {
        return left.1;
    }
    let w = (x - left.0) / span;
    (1.0 - w) * left.1 + w * right.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn grid() -> PeriodicGrid {
        PeriodicGrid::new(32, 4.0).unwrap()
    }

    #[test]
    fn builtins_parse() {
        let g = grid();
        assert_eq!(
            Potential::from_spec(&g, "constant:2.5").unwrap().constant_value(),
            Some(2.5)
        );
        let q = Potential::from_spec(&g, "quadratic").unwrap();
        assert_eq!(q.samples()[0], 4.0);
        let w = Potential::from_spec(&g, "well:3,1").unwrap();
        assert_eq!(w.samples()[g.origin_index()], 0.0);
        assert_eq!(w.samples()[0], 3.0);
        assert!(Potential::from_spec(&g, "cubic").is_err());
        assert!(Potential::from_spec(&g, "constant:-1").is_err());
        assert!(Potential::from_spec(&g, "constant:abc").is_err());
    }

    #[test]
    fn zero_potential_is_trivial() {
        let v = Potential::constant(&grid(), 0.0).unwrap();
        assert!(v.is_trivial());
    }

    #[test]
    fn file_on_grid_coordinates_roundtrips() {
        let g = grid();
        let q = Potential::quadratic(&g);
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# x V").unwrap();
        for (x, v) in g.coordinates().iter().zip(q.samples()) {
            writeln!(file, "{x} {v}").unwrap();
        }
        let spec = format!("file:{}", file.path().display());
        let loaded = Potential::from_spec(&g, &spec).unwrap();
        for (a, b) in loaded.samples().iter().zip(q.samples()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn file_is_interpolated_periodically() {
        let g = grid();
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "-1.0 1.0\n1.0 3.0").unwrap();
        let v = Potential::from_file(&g, file.path()).unwrap();
        assert!((v.samples()[g.origin_index()] - 2.0).abs() < 1e-12);
        // x = -2 sits halfway along the wrapped segment from 1 to 3 (= -1).
        assert!((v.samples()[0] - 2.0).abs() < 1e-12);
    }
}
