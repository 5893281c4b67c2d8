//! Raster scans of an archipelago over the `(u, m)` rectangle `[-1, 1]²`.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::family::param::{family_map, ParamPoint};
use crate::renorm::{detect_type, RenormType, Renormalization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Inside,
    Outside,
    Uncertain,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Inside => "inside",
            CellStatus::Outside => "outside",
            CellStatus::Uncertain => "uncertain",
        }
    }

    pub fn gray(self) -> u8 {
        match self {
            CellStatus::Inside => 255,
            CellStatus::Outside => 0,
            CellStatus::Uncertain => 128,
        }
    }
}

/// Renormalization boundary data recorded for inside and uncertain cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellData {
    pub p: f64,
    pub q: f64,
    pub fa0m: f64,
    pub fb0p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanCell {
    pub u: f64,
    pub m: f64,
    pub status: CellStatus,
    pub data: Option<CellData>,
}

impl ScanCell {
    pub fn s(&self) -> f64 {
        (self.m + 1.0 + self.u) / 2.0
    }

    pub fn t(&self) -> f64 {
        (self.m + 1.0 - self.u) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanGrid {
    pub rtype: RenormType,
    pub nu: usize,
    pub nm: usize,
    /// Row-major, row `j` holds `m_j` (increasing), column `i` holds `u_i`.
    pub cells: Vec<ScanCell>,
    /// Columns whose inside cells do not form a single run.
    pub discontiguous_fibers: Vec<usize>,
}

/// Status of one parameter under the type-restricted detector.
pub fn membership(pt: &ParamPoint, rtype: &RenormType) -> Result<(CellStatus, Option<Renormalization<f64>>)> {
    let map = family_map(pt);
    Ok(match detect_type(&map, rtype)? {
        None => (CellStatus::Outside, None),
        Some(r) if r.uncertain => (CellStatus::Uncertain, Some(r)),
        Some(r) => (CellStatus::Inside, Some(r)),
    })
}

pub fn cell_center(index: usize, count: usize) -> f64 {
    -1.0 + (index as f64 + 0.5) * 2.0 / count as f64
}

fn scan_column(rtype: &RenormType, i: usize, nu: usize, nm: usize) -> Result<Vec<ScanCell>> {
    let u = cell_center(i, nu);
    (0..nm)
        .map(|j| {
            let m = cell_center(j, nm);
            let Ok(pt) = ParamPoint::from_um(u, m) else {
                return Ok(ScanCell { u, m, status: CellStatus::Outside, data: None });
            };
            let (status, r) = membership(&pt, rtype)?;
            let data = r.map(|r| CellData { p: r.p, q: r.q, fa0m: r.fa0m, fb0p: r.fb0p });
            Ok(ScanCell { u, m, status, data })
        })
        .collect()
}

/// Classify the center of every cell of an `nu × nm` raster.
pub fn scan_archipelago(rtype: &RenormType, nu: usize, nm: usize) -> Result<ScanGrid> {
    scan_archipelago_with(rtype, nu, nm, true)
}

pub fn scan_archipelago_with(rtype: &RenormType, nu: usize, nm: usize, parallel: bool) -> Result<ScanGrid> {
    if nu < 16 || nm < 16 {
        return Err(crate::LorenzError::Precondition(format!("scan resolution {nu}x{nm} below 16x16")));
    }
    let columns: Vec<Vec<ScanCell>> = if parallel {
        (0..nu).into_par_iter().map(|i| scan_column(rtype, i, nu, nm)).collect::<Result<_>>()?
    } else {
        (0..nu).map(|i| scan_column(rtype, i, nu, nm)).collect::<Result<_>>()?
    };
    let discontiguous_fibers = columns
        .iter()
        .enumerate()
        .filter(|(_, col)| !is_contiguous(col.iter().map(|c| c.status)))
        .map(|(i, _)| i)
        .collect();
    let mut cells = Vec::with_capacity(nu * nm);
    for j in 0..nm {
        for col in &columns {
            cells.push(col[j].clone());
        }
    }
    Ok(ScanGrid { rtype: rtype.clone(), nu, nm, cells, discontiguous_fibers })
}

/// Inside cells form one run; uncertain cells may only flank it.
pub fn is_contiguous(statuses: impl Iterator<Item = CellStatus>) -> bool {
    let s: Vec<CellStatus> = statuses.collect();
    let Some(first) = s.iter().position(|&c| c == CellStatus::Inside) else {
        return true;
    };
    let last = s.iter().rposition(|&c| c == CellStatus::Inside).unwrap_or(first);
    s[first..=last].iter().all(|&c| c == CellStatus::Inside)
}

impl ScanGrid {
    pub fn cell(&self, i: usize, j: usize) -> &ScanCell {
        &self.cells[j * self.nu + i]
    }

    pub fn count(&self, status: CellStatus) -> usize {
        self.cells.iter().filter(|c| c.status == status).count()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "u,m,s,t,status,p,q,fa0m,fb0p")?;
        for c in &self.cells {
            write!(out, "{},{},{},{},{}", num(c.u), num(c.m), num(c.s()), num(c.t()), c.status.as_str())?;
            match &c.data {
                Some(d) => writeln!(out, ",{},{},{},{}", num(d.p), num(d.q), num(d.fa0m), num(d.fb0p))?,
                None => writeln!(out, ",,,,")?,
            }
        }
        Ok(())
    }

    /// Binary 8-bit PGM, one pixel per cell, `m` increasing downward.
    pub fn write_pgm<W: Write>(&self, mut out: W, comment: Option<&str>) -> io::Result<()> {
        write!(out, "P5\n")?;
        if let Some(c) = comment {
            for line in c.lines() {
                write!(out, "# {line}\n")?;
            }
        }
        write!(out, "{} {}\n255\n", self.nu, self.nm)?;
        let bytes: Vec<u8> = self.cells.iter().map(|c| c.status.gray()).collect();
        out.write_all(&bytes)
    }

    /// Connected components of inside cells under 4-adjacency, largest first.
    pub fn islands(&self) -> Vec<IslandCells> {
        let (nu, nm) = (self.nu, self.nm);
        let mut label = vec![usize::MAX; nu * nm];
        let mut out = Vec::new();
        for start in 0..nu * nm {
            if label[start] != usize::MAX || self.cells[start].status != CellStatus::Inside {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut cells = Vec::new();
            label[start] = id;
            while let Some(k) = stack.pop() {
                let (i, j) = (k % nu, k / nu);
                cells.push((i, j));
                let mut nbrs = Vec::with_capacity(4);
                if i > 0 {
                    nbrs.push(k - 1);
                }
                if i + 1 < nu {
                    nbrs.push(k + 1);
                }
                if j > 0 {
                    nbrs.push(k - nu);
                }
                if j + 1 < nm {
                    nbrs.push(k + nu);
                }
                for n in nbrs {
                    if label[n] == usize::MAX && self.cells[n].status == CellStatus::Inside {
                        label[n] = id;
                        stack.push(n);
                    }
                }
            }
            cells.sort();
            out.push(IslandCells { cells });
        }
        out.sort_by(|a, b| b.cells.len().cmp(&a.cells.len()).then(a.cells.cmp(&b.cells)));
        out
    }
}

/// One raster island.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IslandCells {
    /// `(column, row)` indices.
    pub cells: Vec<(usize, usize)>,
}

impl IslandCells {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Member cell closest to the centroid, a safe interior seed.
    pub fn seed(&self, grid: &ScanGrid) -> ParamPoint {
        let n = self.cells.len() as f64;
        let (cu, cm) = self.cells.iter().fold((0.0, 0.0), |(a, b), &(i, j)| {
            let c = grid.cell(i, j);
            (a + c.u / n, b + c.m / n)
        });
        let best = self
            .cells
            .iter()
            .map(|&(i, j)| grid.cell(i, j))
            .min_by(|a, b| {
                let da = (a.u - cu).powi(2) + (a.m - cm).powi(2);
                let db = (b.u - cu).powi(2) + (b.m - cm).powi(2);
                da.total_cmp(&db)
            })
            .expect("islands are non-empty");
        ParamPoint::from_um(best.u, best.m).expect("inside cells lie in the square")
    }
}

/// CSV/JSON number format: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contiguity_rule() {
        use CellStatus::*;
        assert!(is_contiguous([Outside, Uncertain, Inside, Inside, Uncertain, Outside].into_iter()));
        assert!(is_contiguous([Outside, Outside].into_iter()));
        assert!(!is_contiguous([Inside, Outside, Inside].into_iter()));
        assert!(!is_contiguous([Inside, Uncertain, Inside].into_iter()));
    }

    #[test]
    fn period_one_type_is_empty() {
        let t: RenormType = "L,R".parse().unwrap();
        let g = scan_archipelago(&t, 16, 16).unwrap();
        assert_eq!(g.count(CellStatus::Inside), 0);
        assert_eq!(g.count(CellStatus::Uncertain), 0);
    }

    #[test]
    fn resolution_floor() {
        let t: RenormType = "LR,RL".parse().unwrap();
        assert!(scan_archipelago(&t, 8, 32).is_err());
    }
}
