//! The known-values database: curated literature bounds consumed by the
//! engine but never re-derived. CSV on disk, seeded in memory from the
//! embedded reference tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::qnum::ExactInt;
use crate::spaces::PackingParams;

use super::tables::{all_cells, ReferenceCell, DERIVED_TAGS, EXTERNAL_TAGS};

/// One curated row: at most one lower and one upper bound for a parameter
/// tuple, with the tag alphabet of the reference tables and a free-text
/// source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownValue {
    pub params: PackingParams,
    pub lower: Option<ExactInt>,
    pub upper: Option<ExactInt>,
    pub lower_tag: String,
    pub upper_tag: String,
    pub source: String,
}

#[derive(Debug, thiserror::Error)]
pub enum DbError {
    #[error("line {0}: {1}")]
    Malformed(usize, String),
    #[error("line {0}: lower {1} exceeds upper {2}")]
    Inverted(usize, ExactInt, ExactInt),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// In-memory database keyed by parameter tuple.
#[derive(Debug, Clone, Default)]
pub struct Database {
    rows: BTreeMap<PackingParams, KnownValue>,
}

const HEADER: &str = "q,n,k,t,lambda,repeated,lower,upper,lower_tag,upper_tag,source";

impl Database {
    pub fn new() -> Database {
        Database::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, p: PackingParams) -> Option<&KnownValue> {
        self.rows.get(&p)
    }

    pub fn lower(&self, p: PackingParams) -> Option<&ExactInt> {
        self.rows.get(&p).and_then(|r| r.lower.as_ref())
    }

    pub fn upper(&self, p: PackingParams) -> Option<&ExactInt> {
        self.rows.get(&p).and_then(|r| r.upper.as_ref())
    }

    pub fn rows(&self) -> impl Iterator<Item = &KnownValue> {
        self.rows.values()
    }

    /// Insert a row, merging with any existing row for the same
    /// parameters (a present side replaces an absent one; a tighter bound
    /// replaces a looser one of the same side).
    pub fn insert(&mut self, row: KnownValue) {
        let entry = self.rows.entry(row.params).or_insert_with(|| KnownValue {
            params: row.params,
            lower: None,
            upper: None,
            lower_tag: String::new(),
            upper_tag: String::new(),
            source: row.source.clone(),
        });
        if let Some(lo) = row.lower {
            if entry.lower.as_ref().map_or(true, |old| lo > *old) {
                entry.lower = Some(lo);
                entry.lower_tag = row.lower_tag;
            }
        }
        if let Some(up) = row.upper {
            if entry.upper.as_ref().map_or(true, |old| up < *old) {
                entry.upper = Some(up);
                entry.upper_tag = row.upper_tag;
            }
        }
        if entry.source.is_empty() {
            entry.source = row.source;
        }
    }

    pub fn load(path: &Path) -> Result<Database, DbError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Database, DbError> {
        let mut db = Database::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() || (idx == 0 && line.trim() == HEADER) {
                continue;
            }
            let f: Vec<&str> = line.splitn(11, ',').collect();
            if f.len() != 11 {
                return Err(DbError::Malformed(
                    lineno,
                    format!("expected 11 fields, found {}", f.len()),
                ));
            }
            let int = |s: &str, what: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| DbError::Malformed(lineno, format!("bad {what}: {s:?}")))
            };
            let big = |s: &str, what: &str| -> Result<Option<ExactInt>, DbError> {
                if s.trim().is_empty() {
                    return Ok(None);
                }
                s.trim()
                    .parse::<ExactInt>()
                    .map(Some)
                    .map_err(|_| DbError::Malformed(lineno, format!("bad {what}: {s:?}")))
            };
            let repeated = match f[5].trim() {
                "0" | "false" => false,
                "1" | "true" => true,
                other => {
                    return Err(DbError::Malformed(lineno, format!("bad repeated flag: {other:?}")))
                }
            };
            let params = PackingParams::new(
                int(f[0], "q")? as u32,
                int(f[1], "n")? as u32,
                int(f[2], "k")? as u32,
                int(f[3], "t")? as u32,
                int(f[4], "lambda")?,
                repeated,
            )
            .map_err(|e| DbError::Malformed(lineno, e.to_string()))?;
            let lower = big(f[6], "lower")?;
            let upper = big(f[7], "upper")?;
            if let (Some(lo), Some(up)) = (&lower, &upper) {
                if lo > up {
                    return Err(DbError::Inverted(lineno, lo.clone(), up.clone()));
                }
            }
            db.insert(KnownValue {
                params,
                lower,
                upper,
                lower_tag: f[8].trim().to_string(),
                upper_tag: f[9].trim().to_string(),
                source: f[10].trim().to_string(),
            });
        }
        Ok(db)
    }

    pub fn dump(&self) -> String {
        let mut out = String::from(HEADER);
        out.push('\n');
        for row in self.rows.values() {
            let p = row.params;
            let opt = |v: &Option<ExactInt>| v.as_ref().map(|x| x.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                p.q,
                p.n,
                p.k,
                p.t,
                p.lambda,
                p.repeated as u8,
                opt(&row.lower),
                opt(&row.upper),
                row.lower_tag,
                row.upper_tag,
                row.source
            )
            .unwrap();
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), DbError> {
        std::fs::write(path, self.dump())?;
        Ok(())
    }
}

fn is_external(tags: &[char]) -> bool {
    tags.iter().any(|t| EXTERNAL_TAGS.contains(t))
}

fn has_derived(tags: &[char]) -> bool {
    tags.iter().any(|t| DERIVED_TAGS.contains(t))
}

fn tag_string(tags: &[char]) -> String {
    tags.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
}

/// Which sides of a reference-table cell go into the seed database.
/// Externally obtained bounds (ILP runs, designs, parallelisms, arcs, ...)
/// are facts we store; sides explained by an implemented rule are left for
/// the engine to re-derive.
pub fn seed_sides(cell: &ReferenceCell) -> (bool, bool) {
    if cell.is_single() {
        let ext = is_external(&cell.lower_tags);
        // parallelism cells: the matching upper is always the packing
        // bound, which the engine derives
        let upper = ext && !has_derived(&cell.lower_tags) && cell.lower_tags != ['p'];
        (ext, upper)
    } else {
        (is_external(&cell.lower_tags), is_external(&cell.upper_tags))
    }
}

/// The built-in database: external sides of every reference-table cell,
/// plus the lambda = 1 inputs and repeated-variant facts quoted in the
/// text.
pub fn seed_database() -> Database {
    let mut db = Database::new();
    for cell in all_cells() {
        let (seed_lower, seed_upper) = seed_sides(&cell);
        if !seed_lower && !seed_upper {
            continue;
        }
        db.insert(KnownValue {
            params: cell.params,
            lower: seed_lower.then(|| cell.lower.clone()),
            upper: seed_upper.then(|| cell.upper.clone()),
            lower_tag: if seed_lower { tag_string(&cell.lower_tags) } else { String::new() },
            upper_tag: if seed_upper { tag_string(&cell.upper_tags) } else { String::new() },
            source: "reference tables".into(),
        });
    }
    let mut special = |q, n, k, t, lambda, repeated, lower: Option<u64>, upper: Option<u64>, tag: &str, source: &str| {
        db.insert(KnownValue {
            params: PackingParams::new(q, n, k, t, lambda, repeated).unwrap(),
            lower: lower.map(ExactInt::from),
            upper: upper.map(ExactInt::from),
            lower_tag: lower.map(|_| tag.to_string()).unwrap_or_default(),
            upper_tag: upper.map(|_| tag.to_string()).unwrap_or_default(),
            source: source.into(),
        });
    };
    special(2, 8, 3, 1, 1, false, Some(34), Some(34), "l", "maximum partial 3-spread of GF(2)^8");
    special(2, 6, 3, 2, 1, false, Some(77), Some(77), "l", "computer classification of (6,77,4;3)_2 codes");
    special(2, 8, 4, 2, 1, false, Some(257), Some(257), "l", "computer result for (8,257,6;4)_2 codes");
    special(
        2, 6, 4, 2, 2, true, Some(21), Some(21), "i",
        "a doubled block forces cardinality 2, so the repeated maximum equals the plain one",
    );
    special(
        2, 7, 5, 1, 3, true, None, Some(10), "i",
        "the unique hyperplane configuration behind value 11 is excluded by 8-divisibility",
    );
    special(2, 8, 5, 1, 2, true, Some(10), None, "i", "attained; matches the recursive intersection bound");
    special(2, 8, 3, 1, 3, true, Some(107), Some(107), "j", "text value; tight by the improved Johnson bound");
    special(
        2, 8, 5, 1, 4, false, None, Some(31), "i",
        "quoted chain ends at 31 although 1 + A^r_2(5,2,1;3) evaluates to 32; stored, not re-derived",
    );
    db
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn p(q: u32, n: u32, k: u32, t: u32, lambda: u64, repeated: bool) -> PackingParams {
        PackingParams::new(q, n, k, t, lambda, repeated).unwrap()
    }

    #[test]
    fn seed_policy() {
        let db = seed_database();
        // pure-rule cells are absent
        assert!(db.get(p(2, 4, 3, 2, 2, false)).is_none()); // c
        assert!(db.get(p(2, 8, 7, 7, 2, false)).is_none()); // b
        assert!(db.get(p(2, 5, 4, 1, 2, false)).is_none()); // i
        // parallelism: lower only
        let row = db.get(p(2, 4, 2, 1, 2, false)).unwrap();
        assert_eq!(row.lower.as_ref().unwrap().to_u64(), Some(10));
        assert!(row.upper.is_none());
        // arcs: both sides
        let row = db.get(p(3, 3, 2, 1, 2, false)).unwrap();
        assert_eq!(row.lower.as_ref().unwrap().to_u64(), Some(4));
        assert_eq!(row.upper.as_ref().unwrap().to_u64(), Some(4));
        // split cell with derivable upper: lower only
        let row = db.get(p(2, 2 + 5, 3, 2, 2, false)).unwrap();
        assert_eq!(row.lower.as_ref().unwrap().to_u64(), Some(741));
        assert!(row.upper.is_none());
        // split cell with ILP upper: both
        let row = db.get(p(2, 7, 4, 2, 2, false)).unwrap();
        assert_eq!(row.lower.as_ref().unwrap().to_u64(), Some(96));
        assert_eq!(row.upper.as_ref().unwrap().to_u64(), Some(144));
        // x-tagged lowers are derived, never seeded
        assert!(db.lower(p(2, 8, 4, 2, 2, false)).is_none());
        // repeated-variant special rows
        let row = db.get(p(2, 6, 4, 2, 2, true)).unwrap();
        assert_eq!(row.upper.as_ref().unwrap().to_u64(), Some(21));
        assert_eq!(db.upper(p(2, 7, 5, 1, 3, true)).unwrap().to_u64(), Some(10));
    }

    #[test]
    fn csv_roundtrip() {
        let db = seed_database();
        let text = db.dump();
        let back = Database::parse(&text).unwrap();
        assert_eq!(back.len(), db.len());
        for row in db.rows() {
            assert_eq!(back.get(row.params), Some(row));
        }
        assert_eq!(back.dump(), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Database::parse("q,n,k,t\n").unwrap_err();
        assert!(matches!(err, DbError::Malformed(1, _)));
        let err = Database::parse(&format!("{HEADER}\n2,4,2,1,2,0,11,10,p,p,bad\n")).unwrap_err();
        assert!(matches!(err, DbError::Inverted(2, _, _)));
        let err = Database::parse(&format!("{HEADER}\n2,4,7,1,2,0,1,2,p,p,bad\n")).unwrap_err();
        assert!(matches!(err, DbError::Malformed(2, _)));
        // empty input is a valid empty database
        assert!(Database::parse("").unwrap().is_empty());
    }
}
