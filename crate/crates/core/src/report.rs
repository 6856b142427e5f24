//! Serialization of result artifacts. JSON reports serialize through
//! serde with stable field order; CSV files round-trip through the
//! readers below.

use crate::error::Result;
use crate::farey::FareySet;
use crate::frobenius::CensusOutput;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Version stamp carried by every emitted artifact.
pub const SCHEMA_VERSION: u32 = 1;

/// Pretty JSON with trailing newline; byte-stable for identical values.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Farey list CSV: header `q,p1,…,pn`, one row per point.
pub fn write_farey_csv<W: Write>(w: W, set: &FareySet) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let n = set.n();
    let mut header = vec!["q".to_string()];
    for i in 1..=n {
        header.push(format!("p{i}"));
    }
    wtr.write_record(&header)?;
    for (p, q) in set.iter() {
        let mut rec = vec![q.to_string()];
        rec.extend(p.iter().map(|v| v.to_string()));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Parses a Farey list CSV back into (q, p) rows.
pub fn read_farey_csv<R: Read>(r: R) -> Result<Vec<(i64, Vec<i64>)>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let q: i64 = rec[0]
            .parse()
            .map_err(|e| crate::Error::invalid(format!("bad q field: {e}")))?;
        let p = rec
            .iter()
            .skip(1)
            .map(|s| s.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| crate::Error::invalid(format!("bad p field: {e}")))?;
        out.push((q, p));
    }
    Ok(out)
}

/// One row of a census CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub r: f64,
    pub restricted_tail: u64,
    pub full_tail: u64,
    pub restricted_norm: f64,
    pub full_norm: f64,
}

/// Census CSV: `R,restricted_tail,full_tail,restricted_norm,full_norm`.
pub fn write_census_csv<W: Write>(w: W, census: &CensusOutput) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "R",
        "restricted_tail",
        "full_tail",
        "restricted_norm",
        "full_norm",
    ])?;
    let grid = &census.restricted.r_grid;
    for (i, &r) in grid.iter().enumerate() {
        wtr.write_record(&[
            format!("{r}"),
            census.restricted.raw_tails[i].to_string(),
            census.full.raw_tails[i].to_string(),
            format!("{}", census.restricted.norm_tails[i]),
            format!("{}", census.full.norm_tails[i]),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_census_csv<R: Read>(r: R) -> Result<Vec<CensusRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let parse_f = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| crate::Error::invalid(format!("bad float field: {e}")))
        };
        let parse_u = |s: &str| {
            s.parse::<u64>()
                .map_err(|e| crate::Error::invalid(format!("bad count field: {e}")))
        };
        out.push(CensusRow {
            r: parse_f(&rec[0])?,
            restricted_tail: parse_u(&rec[1])?,
            full_tail: parse_u(&rec[2])?,
            restricted_norm: parse_f(&rec[3])?,
            full_norm: parse_f(&rec[4])?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::ResidueSystem;
    use crate::farey::enumerate;
    use crate::frobenius::frobenius_census;
    use crate::geom::TestSet;

    #[test]
    fn farey_csv_round_trip() {
        let set = enumerate(&ResidueSystem::full(2), 4).unwrap();
        let mut buf = Vec::new();
        write_farey_csv(&mut buf, &set).unwrap();
        let parsed = read_farey_csv(buf.as_slice()).unwrap();
        assert_eq!(parsed.len(), set.len());
        for (i, (q, p)) in parsed.iter().enumerate() {
            let (ep, eq) = set.point(i);
            assert_eq!(*q, eq);
            assert_eq!(p, ep);
        }
    }

    #[test]
    fn census_csv_round_trip() {
        let sys = ResidueSystem::new(2, 2, &[vec![1, 1, 1]]).unwrap();
        let domain = TestSet::boxed(vec![0.0; 3], vec![1.0; 3]).unwrap();
        let grid: Vec<f64> = (0..10).map(|i| 0.25 * i as f64).collect();
        let census = frobenius_census(&sys, &domain, 12, &grid).unwrap();
        let mut buf = Vec::new();
        write_census_csv(&mut buf, &census).unwrap();
        let rows = read_census_csv(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), grid.len());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.r, grid[i]);
            assert_eq!(row.restricted_tail, census.restricted.raw_tails[i]);
            assert_eq!(row.full_tail, census.full.raw_tails[i]);
            assert_eq!(row.restricted_norm, census.restricted.norm_tails[i]);
            assert_eq!(row.full_norm, census.full.norm_tails[i]);
        }
    }

    #[test]
    fn json_bytes_stable() {
        let set = enumerate(&ResidueSystem::full(1), 30).unwrap();
        let rep = crate::farey::growth_check(&set).unwrap();
        assert_eq!(to_json_bytes(&rep).unwrap(), to_json_bytes(&rep).unwrap());
    }
}
