//! Field tables: comma-separated displacement and stress samples on the
//! `(s, z)` grid, with a fixed, versioned header. Floats are written with
//! 17 significant digits so identical runs produce identical bytes.

use std::fmt::Write as _;

use thiserror::Error;

use crate::material::StressState;

/// Version tag written as the first line of every table.
pub const TABLE_VERSION: &str = "# shellsv-field-table-v1";

/// Fixed column header.
pub const TABLE_HEADER: &str =
    "s,z,u1,u2,u3,n_ss,n_sz,n_zz,m_ss,m_sz,m_zz,p_ss,p_sz,p_zs,p_zz,s_s,s_z";

/// One output row.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldRow {
    pub s: f64,
    pub z: f64,
    pub u: [f64; 3],
    pub stress: StressState,
}

/// In-memory field table with `grid_s * grid_z` rows (s fastest).
#[derive(Debug, Clone)]
pub struct FieldTable {
    pub grid_s: usize,
    pub grid_z: usize,
    pub rows: Vec<FieldRow>,
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("table format error: {0}")]
    Format(String),
    #[error("table io error: {0}")]
    Io(#[from] std::io::Error),
}

/// 17 significant digits, locale-free.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl FieldTable {
    pub fn new(grid_s: usize, grid_z: usize, rows: Vec<FieldRow>) -> Self {
        assert_eq!(rows.len(), grid_s * grid_z, "row count must be grid_s * grid_z");
        FieldTable {
            grid_s,
            grid_z,
            rows,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{TABLE_VERSION}");
        let _ = writeln!(out, "{TABLE_HEADER}");
        for r in &self.rows {
            let st = &r.stress;
            let cols = [
                r.s, r.z, r.u[0], r.u[1], r.u[2], st.n_ss, st.n_sz, st.n_zz, st.m_ss,
                st.m_sz, st.m_zz, st.p_ss, st.p_sz, st.p_zs, st.p_zz, st.s_s, st.s_z,
            ];
            let line: Vec<String> = cols.iter().map(|&v| fmt_float(v)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<FieldTable, TableError> {
        let mut lines = text.lines();
        let version = lines
            .next()
            .ok_or_else(|| TableError::Format("empty table".into()))?;
        if version.trim() != TABLE_VERSION {
            return Err(TableError::Format(format!(
                "unknown table version line `{version}`"
            )));
        }
        let header = lines
            .next()
            .ok_or_else(|| TableError::Format("missing header".into()))?;
        if header.trim() != TABLE_HEADER {
            return Err(TableError::Format(format!("unexpected header `{header}`")));
        }
        let mut rows = Vec::new();
        for (idx, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 17 {
                return Err(TableError::Format(format!(
                    "row {} has {} columns, expected 17",
                    idx + 3,
                    cols.len()
                )));
            }
            let mut vals = [0.0f64; 17];
            for (v, c) in vals.iter_mut().zip(&cols) {
                *v = c.trim().parse::<f64>().map_err(|e| {
                    TableError::Format(format!("row {}: bad float `{c}`: {e}", idx + 3))
                })?;
            }
            rows.push(FieldRow {
                s: vals[0],
                z: vals[1],
                u: [vals[2], vals[3], vals[4]],
                stress: StressState {
                    n_ss: vals[5],
                    n_sz: vals[6],
                    n_zz: vals[7],
                    m_ss: vals[8],
                    m_sz: vals[9],
                    m_zz: vals[10],
                    p_ss: vals[11],
                    p_sz: vals[12],
                    p_zs: vals[13],
                    p_zz: vals[14],
                    s_s: vals[15],
                    s_z: vals[16],
                },
            });
        }
        // Infer the grid shape: s runs fastest, stations are contiguous.
        let grid_s = rows
            .iter()
            .position(|r| r.z != rows[0].z)
            .unwrap_or(rows.len());
        if grid_s == 0 || rows.len() % grid_s != 0 {
            return Err(TableError::Format(format!(
                "cannot infer grid shape from {} rows",
                rows.len()
            )));
        }
        let grid_z = rows.len() / grid_s;
        Ok(FieldTable {
            grid_s,
            grid_z,
            rows,
        })
    }

    /// z-stations in row order.
    pub fn z_stations(&self) -> Vec<f64> {
        (0..self.grid_z)
            .map(|j| self.rows[j * self.grid_s].z)
            .collect()
    }

    /// Displacement grids per station: `[component][node]` for station `j`.
    pub fn displacement_station(&self, j: usize) -> [Vec<f64>; 3] {
        let base = j * self.grid_s;
        let mut out = [
            Vec::with_capacity(self.grid_s),
            Vec::with_capacity(self.grid_s),
            Vec::with_capacity(self.grid_s),
        ];
        for i in 0..self.grid_s {
            let r = &self.rows[base + i];
            out[0].push(r.u[0]);
            out[1].push(r.u[1]);
            out[2].push(r.u[2]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> FieldTable {
        let mut rows = Vec::new();
        for j in 0..2 {
            for i in 0..4 {
                rows.push(FieldRow {
                    s: i as f64 * 0.25,
                    z: j as f64,
                    u: [i as f64, j as f64, 0.5],
                    stress: StressState {
                        n_zz: 1.0 + i as f64,
                        ..Default::default()
                    },
                });
            }
        }
        FieldTable::new(4, 2, rows)
    }

    #[test]
    fn roundtrip_preserves_rows() {
        let table = sample_table();
        let text = table.to_text();
        let back = FieldTable::from_text(&text).unwrap();
        assert_eq!(back.grid_s, 4);
        assert_eq!(back.grid_z, 2);
        assert_eq!(back.rows.len(), table.rows.len());
        for (a, b) in back.rows.iter().zip(&table.rows) {
            assert_eq!(a.s, b.s);
            assert_eq!(a.u, b.u);
            assert_eq!(a.stress.n_zz, b.stress.n_zz);
        }
    }

    #[test]
    fn header_is_versioned_and_fixed() {
        let text = sample_table().to_text();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), TABLE_VERSION);
        assert_eq!(lines.next().unwrap(), TABLE_HEADER);
    }

    #[test]
    fn bad_version_rejected() {
        let text = sample_table().to_text().replace("-v1", "-v9");
        assert!(matches!(
            FieldTable::from_text(&text),
            Err(TableError::Format(_))
        ));
    }

    #[test]
    fn deterministic_bytes() {
        assert_eq!(sample_table().to_text(), sample_table().to_text());
    }
}
