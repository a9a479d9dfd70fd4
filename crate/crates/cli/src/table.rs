//! CSV tables with `#` metadata lines.

use std::io::{self, Write};

use anyhow::bail;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { metadata: Vec::new(), header, rows: Vec::new() }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.metadata.push((key.into(), value.into()));
        self
    }

    /// Rows must match the header width and hold finite numbers only.
    pub fn check(&self) -> anyhow::Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.header.len() {
                bail!("row {i} has {} columns, header has {}", row.len(), self.header.len());
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                bail!("non-finite value in row {i}, column {}", self.header[j]);
            }
        }
        Ok(())
    }

    /// Twelve significant digits in scientific notation, LF line endings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        writeln!(out, "{}", self.header.join(","))?;
        let mut line = String::new();
        for row in &self.rows {
            line.clear();
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&format!("{v:.11e}"));
            }
            writeln!(out, "{line}")?;
        }
        out.flush()
    }
}

/// Evaluates `f` for every index on the current rayon pool; results come
/// back in index order.
pub fn par_rows<F>(n: usize, f: F) -> anyhow::Result<Vec<Vec<f64>>>
where
    F: Fn(usize) -> anyhow::Result<Vec<f64>> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_format() {
        let mut t = Table::new(vec!["S", "price"]);
        t.meta("figure", "1");
        t.rows.push(vec![40.0, 3.134_164_972_563_290_5]);
        t.rows.push(vec![0.0, -1.5e-300]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# figure: 1\nS,price\n4.00000000000e1,3.13416497256e0\n0.00000000000e0,-1.50000000000e-300\n"
        );
    }

    #[test]
    fn check_rejects_bad_rows() {
        let mut t = Table::new(vec!["a"]);
        t.rows.push(vec![f64::NAN]);
        assert!(t.check().is_err());
        t.rows[0] = vec![1.0, 2.0];
        assert!(t.check().is_err());
    }

    #[test]
    fn rows_keep_index_order() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let rows = pool.install(|| par_rows(1000, |i| Ok(vec![i as f64]))).unwrap();
        assert!(rows.iter().enumerate().all(|(i, r)| r[0] == i as f64));
    }
}
