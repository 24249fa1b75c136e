//! Embedded reference tables and their diff against freshly computed values.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use cyclo_core::family::{compute_mpq, FamilyOptions};
use cyclo_core::kaplan::{HeightOptions, TernaryInstance};
use cyclo_core::numtheory::{factorize, primes_between};
use cyclo_core::oracle::oracle_height;
use cyclo_core::{Error, Result};
use serde::{Deserialize, Serialize};

pub const CONJECTURAL_BANNER: &str = "CONJECTURAL: posed as an open question, not a proven result";

/// Largest `n` for which T1's "smallest n" claim is checked by exhaustive search.
const MINIMALITY_CAP: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    T1,
    T4,
    T5,
    T6,
    TNegentien,
    Q13,
    Q17,
    Q19,
    Q23,
}

impl TableId {
    pub const ALL: [TableId; 9] = [
        TableId::T1,
        TableId::T4,
        TableId::T5,
        TableId::T6,
        TableId::TNegentien,
        TableId::Q13,
        TableId::Q17,
        TableId::Q19,
        TableId::Q23,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::T1 => "T1",
            TableId::T4 => "T4",
            TableId::T5 => "T5",
            TableId::T6 => "T6",
            TableId::TNegentien => "T_NEGENTIEN",
            TableId::Q13 => "Q13",
            TableId::Q17 => "Q17",
            TableId::Q19 => "Q19",
            TableId::Q23 => "Q23",
        }
    }

    pub fn conjectural(self) -> bool {
        matches!(self, TableId::Q13 | TableId::Q17 | TableId::Q19 | TableId::Q23)
    }

    fn data(self) -> &'static str {
        match self {
            TableId::T1 => include_str!("../data/t1.csv"),
            TableId::T4 => include_str!("../data/t4.csv"),
            TableId::T5 => include_str!("../data/t5.csv"),
            TableId::T6 => include_str!("../data/t6.csv"),
            TableId::TNegentien => include_str!("../data/t_negentien.csv"),
            TableId::Q13 => include_str!("../data/conjectural/q13.csv"),
            TableId::Q17 => include_str!("../data/conjectural/q17.csv"),
            TableId::Q19 => include_str!("../data/conjectural/q19.csv"),
            TableId::Q23 => include_str!("../data/conjectural/q23.csv"),
        }
    }

    pub fn default_qmax(self) -> u64 {
        match self {
            TableId::T1 => 0,
            TableId::T4 => 50,
            TableId::T5 => 60,
            TableId::T6 => 120,
            TableId::TNegentien => 61,
            TableId::Q13 => 100,
            TableId::Q17 => 110,
            TableId::Q19 => 120,
            TableId::Q23 => 130,
        }
    }

    /// The conjectural residue table for `p`, if one is embedded.
    pub fn conjectural_for(p: u64) -> Option<TableId> {
        match p {
            13 => Some(TableId::Q13),
            17 => Some(TableId::Q17),
            19 => Some(TableId::Q19),
            23 => Some(TableId::Q23),
            _ => None,
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let want = s.to_ascii_uppercase().replace('-', "_");
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == want || (want == "TNEGENTIEN" && *t == TableId::TNegentien))
            .ok_or_else(|| format!("unknown table {s:?}; expected one of T1, T4, T5, T6, T_NEGENTIEN, Q13, Q17, Q19, Q23"))
    }
}

#[derive(Debug, Deserialize)]
struct HeightRow {
    p: u64,
    #[serde(rename = "M")]
    m: u64,
    n: String,
}

/// One `M(p;q)` claim: either a single `q`, or every prime `q` in the listed
/// residues mod `p` from `q0` on. Without `q0` the claim is "for large q".
#[derive(Debug, Clone, Deserialize)]
pub struct FamilyRow {
    pub p: u64,
    pub q: Option<u64>,
    #[serde(deserialize_with = "semicolon_list")]
    pub residues: Vec<u64>,
    pub q0: Option<u64>,
    #[serde(deserialize_with = "semicolon_list")]
    pub expected: Vec<u64>,
}

fn semicolon_list<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<u64>, D::Error> {
    let s = String::deserialize(d)?;
    s.split(';')
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse().map_err(serde::de::Error::custom))
        .collect()
}

fn read_rows<T: for<'de> Deserialize<'de>>(id: TableId) -> Vec<T> {
    csv::Reader::from_reader(id.data().as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .unwrap_or_else(|e| panic!("embedded table {id} is malformed: {e}"))
}

pub fn family_rows(id: TableId) -> Vec<FamilyRow> {
    read_rows(id)
}

impl FamilyRow {
    fn key(&self) -> String {
        match self.q {
            Some(q) => format!("M({};{q})", self.p),
            None => {
                let res: Vec<String> = self.residues.iter().map(u64::to_string).collect();
                match self.q0 {
                    Some(q0) => format!("q = {} (mod {}), q >= {q0}", res.join(","), self.p),
                    None => format!("q = {} (mod {}), q large", res.join(","), self.p),
                }
            }
        }
    }

    /// Number used by `--rows` filtering: the exact `q`, else the first residue.
    fn selector(&self) -> u64 {
        self.q.unwrap_or_else(|| self.residues.first().copied().unwrap_or(0))
    }

    /// The primes this row makes a claim about, within `qmax`.
    fn targets(&self, qmax: u64) -> Vec<u64> {
        if let Some(q) = self.q {
            return if q <= qmax { vec![q] } else { vec![] };
        }
        let in_class = |q: &u64| self.residues.contains(&(q % self.p));
        let lo = self.q0.unwrap_or(self.p + 1).max(self.p + 1);
        let all: Vec<u64> = primes_between(lo, qmax).into_iter().filter(in_class).collect();
        match self.q0 {
            Some(_) => all,
            // "sufficiently large": probe the largest prime available in each residue
            None => self
                .residues
                .iter()
                .filter_map(|&a| all.iter().rev().find(|&&q| q % self.p == a).copied())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "matches paper")]
    Matches,
    #[serde(rename = "differs")]
    Differs,
    #[serde(rename = "not computed (cap)")]
    NotComputed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Matches => "matches paper",
            Status::Differs => "differs",
            Status::NotComputed => "not computed (cap)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDiff {
    pub key: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDiff {
    pub table: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub banner: Option<String>,
    pub rows: Vec<RowDiff>,
}

impl TableDiff {
    pub fn has_differences(&self) -> bool {
        self.rows.iter().any(|r| r.status == Status::Differs)
    }
}

pub struct TableOptions {
    pub qmax: Option<u64>,
    pub rows: Option<Vec<u64>>,
    pub family: FamilyOptions,
}

fn join_values(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub fn diff_table(id: TableId, opts: &TableOptions) -> Result<TableDiff> {
    let keep = |sel: u64| opts.rows.as_ref().is_none_or(|r| r.contains(&sel));
    let rows = match id {
        TableId::T1 => read_rows::<HeightRow>(id)
            .into_iter()
            .filter(|r| keep(r.p))
            .map(|r| diff_height_row(&r, opts.family.degree_cap))
            .collect::<Result<Vec<_>>>()?,
        _ => {
            let qmax = opts.qmax.unwrap_or(id.default_qmax());
            family_rows(id)
                .into_iter()
                .filter(|r| keep(r.selector()))
                .map(|r| diff_family_row(&r, qmax, &opts.family))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(TableDiff {
        table: id.name().to_string(),
        banner: id.conjectural().then(|| CONJECTURAL_BANNER.to_string()),
        rows,
    })
}

fn parse_product(s: &str) -> Result<Vec<u64>> {
    s.split('*')
        .map(|t| t.trim().parse::<u64>().map_err(|e| Error::BadPrimes(format!("{s:?}: {e}"))))
        .collect()
}

fn diff_height_row(row: &HeightRow, degree_cap: u64) -> Result<RowDiff> {
    let f = parse_product(&row.n)?;
    let [p, q, r] = f[..] else {
        return Err(Error::BadPrimes(format!("expected three factors in {:?}", row.n)));
    };
    let n = p * q * r;
    let key = row.p.to_string();
    let expected = format!("M({}) = {}, smallest n = {}", row.p, row.m, row.n);
    let opts = HeightOptions { degree_cap, ..Default::default() };
    let h = match TernaryInstance::new(p, q, r).and_then(|i| i.height(opts)) {
        Ok(h) => h,
        Err(e) if e.is_budget() => {
            return Ok(RowDiff { key, expected, computed: e.to_string(), status: Status::NotComputed });
        }
        Err(e) => return Err(e),
    };
    let mut computed = format!("A({n}) = {}", h.height);
    let mut ok = h.height == row.m;
    if n <= MINIMALITY_CAP {
        match smaller_with_height(row.p, n, row.m)? {
            Some(m) => {
                computed.push_str(&format!("; smaller n = {m} also reaches {}", row.m));
                ok = false;
            }
            None => computed.push_str("; no smaller n"),
        }
    } else {
        computed.push_str("; minimality not searched");
    }
    Ok(RowDiff { key, expected, computed, status: if ok { Status::Matches } else { Status::Differs } })
}

/// Smallest odd squarefree `m < n` with least prime factor `p` and `A(m) >= target`.
fn smaller_with_height(p: u64, n: u64, target: u64) -> Result<Option<u64>> {
    for m in (p..n).step_by(2) {
        let f = factorize(m);
        if f.first().map(|&(l, _)| l) != Some(p) || f.iter().any(|&(_, e)| e > 1) {
            continue;
        }
        if oracle_height(m)?.height >= target {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn diff_family_row(row: &FamilyRow, qmax: u64, family: &FamilyOptions) -> Result<RowDiff> {
    let key = row.key();
    let expected = join_values(&row.expected);
    let targets = row.targets(qmax);
    if targets.is_empty() {
        return Ok(RowDiff { key, expected, computed: format!("no q <= {qmax}"), status: Status::NotComputed });
    }
    let allowed: BTreeSet<u64> = row.expected.iter().copied().collect();
    let mut parts = Vec::new();
    let mut ok = true;
    let mut stopped = None;
    for q in targets {
        match compute_mpq(row.p, q, family) {
            Ok(res) => {
                ok &= allowed.contains(&res.m);
                parts.push(format!("M({};{q}) = {}", row.p, res.m));
            }
            Err(e) if e.is_budget() => {
                stopped = Some(format!("stopped at q = {q}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let status = match (parts.is_empty(), ok) {
        (true, _) => Status::NotComputed,
        (false, true) => Status::Matches,
        (false, false) => Status::Differs,
    };
    parts.extend(stopped);
    Ok(RowDiff { key, expected, computed: parts.join("; "), status })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_parse() {
        for id in TableId::ALL.into_iter().filter(|&t| t != TableId::T1) {
            let rows = family_rows(id);
            assert!(!rows.is_empty(), "{id}");
            for r in &rows {
                assert!(r.q.is_some() != !r.residues.is_empty(), "{id} {r:?}");
                assert!(!r.expected.is_empty());
            }
        }
        assert_eq!(read_rows::<HeightRow>(TableId::T1).len(), 6);
        assert_eq!(family_rows(TableId::Q19).len(), 18);
    }

    #[test]
    fn names_round_trip() {
        for id in TableId::ALL {
            assert_eq!(id.name().parse::<TableId>().unwrap(), id);
            assert_eq!(id.name().to_lowercase().parse::<TableId>().unwrap(), id);
        }
        assert!("T2".parse::<TableId>().is_err());
        assert!(TableId::Q13.conjectural() && !TableId::T6.conjectural());
    }

    #[test]
    fn row_targets() {
        let t6 = family_rows(TableId::T6);
        assert_eq!(t6[2].targets(160), vec![157]);
        assert_eq!(t6[7].targets(60), vec![19, 41]);
        assert!(t6[2].targets(120).is_empty());
        let q13 = family_rows(TableId::Q13);
        assert_eq!(q13[0].targets(100), vec![79]);
    }

    #[test]
    fn t5_matches() {
        let opts = TableOptions { qmax: None, rows: None, family: FamilyOptions::default() };
        let d = diff_table(TableId::T5, &opts).unwrap();
        assert_eq!(d.rows.len(), 8);
        assert!(d.rows.iter().all(|r| r.status == Status::Matches), "{d:?}");
        assert!(d.banner.is_none());
    }

    #[test]
    fn small_t1_rows_are_minimal() {
        let opts = TableOptions { qmax: None, rows: Some(vec![3, 5, 7]), family: FamilyOptions::default() };
        let d = diff_table(TableId::T1, &opts).unwrap();
        assert_eq!(d.rows.len(), 3);
        for r in &d.rows {
            assert_eq!(r.status, Status::Matches, "{r:?}");
            assert!(r.computed.ends_with("no smaller n"));
        }
    }
}
