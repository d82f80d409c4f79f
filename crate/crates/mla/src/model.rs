//! Aligned genome pairs and the structured symbol alphabet.
//!
//! An aligned pair is a 2 x m matrix over the alphabet plus a gap marker.
//! Columns where both rows carry a symbol must agree (a *match*); a column
//! may never be gapped in both rows. Unmatched characters (symbol in one
//! row, gap in the other) are the objects that labelings later explain as
//! duplications or losses.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Which row of the aligned pair an event or query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Genome {
    X,
    Y,
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genome::X => write!(f, "X"),
            Genome::Y => write!(f, "Y"),
        }
    }
}

/// Half-open column interval `[start, end)`, 0-based.
///
/// Serialized as a two-element array `[start, end]` with the end exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end, "interval start {start} > end {end}");
        Interval { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, column: usize) -> bool {
        self.start <= column && column < self.end
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn iter(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (self.start, self.end).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (start, end) = <(usize, usize)>::deserialize(deserializer)?;
        if start > end {
            return Err(D::Error::custom(format!(
                "interval start {start} exceeds end {end}"
            )));
        }
        Ok(Interval { start, end })
    }
}

/// One symbol of the structured alphabet used by the graph reduction.
///
/// The structured kinds carry small indices that make every symbol of a
/// reduction instance collision-free; `Plain` covers hand-made instances
/// that do not need the structured scheme.
///
/// Rendered form (also the wire format inside instance files):
/// `s:v:<i>`, `s:e:<i>:<j>`, `x:<i>:<p>`, `e:<i>:<j>:<c>`, `z:<i>:<k>`,
/// `w:<i>:<k>`, `u:<i>:<k>`, `p:<string>`. The gap marker `-` is not a
/// token; rows store gaps as absent cells.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolToken {
    /// Vertex-block separator, one per vertex.
    VertexSep { vertex: u32 },
    /// Edge-block separator, one per edge `{i, j}` with `i < j`.
    EdgeSep { lo: u32, hi: u32 },
    /// Port symbol of a vertex: `rank` is the slot (1..=3) of one of its edges.
    Port { vertex: u32, rank: u32 },
    /// Edge code symbol; `half` is 1 or 2.
    EdgeCode { lo: u32, hi: u32, half: u32 },
    /// Vertex-block pad symbol (eight per vertex).
    ZPad { vertex: u32, k: u32 },
    /// First auxiliary block separator (four per vertex).
    WPad { vertex: u32, k: u32 },
    /// Second auxiliary block separator (six per vertex).
    UPad { vertex: u32, k: u32 },
    /// Free-form symbol for hand-made instances.
    Plain(String),
}

impl fmt::Display for SymbolToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolToken::VertexSep { vertex } => write!(f, "s:v:{vertex}"),
            SymbolToken::EdgeSep { lo, hi } => write!(f, "s:e:{lo}:{hi}"),
            SymbolToken::Port { vertex, rank } => write!(f, "x:{vertex}:{rank}"),
            SymbolToken::EdgeCode { lo, hi, half } => write!(f, "e:{lo}:{hi}:{half}"),
            SymbolToken::ZPad { vertex, k } => write!(f, "z:{vertex}:{k}"),
            SymbolToken::WPad { vertex, k } => write!(f, "w:{vertex}:{k}"),
            SymbolToken::UPad { vertex, k } => write!(f, "u:{vertex}:{k}"),
            SymbolToken::Plain(s) => write!(f, "p:{s}"),
        }
    }
}

/// Error for an unparseable token string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed token {text:?}")]
pub struct TokenParseError {
    pub text: String,
}

fn parse_index(part: Option<&str>, text: &str) -> Result<u32, TokenParseError> {
    part.and_then(|p| {
        // Reject signs and leading zeros so rendering stays canonical.
        if p.is_empty() || (p.len() > 1 && p.starts_with('0')) {
            return None;
        }
        p.parse::<u32>().ok()
    })
    .ok_or_else(|| TokenParseError {
        text: text.to_string(),
    })
}

impl FromStr for SymbolToken {
    type Err = TokenParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TokenParseError {
            text: s.to_string(),
        };
        if let Some(payload) = s.strip_prefix("p:") {
            return Ok(SymbolToken::Plain(payload.to_string()));
        }
        let mut parts = s.split(':');
        let token = match parts.next().ok_or_else(err)? {
            "s" => match parts.next().ok_or_else(err)? {
                "v" => SymbolToken::VertexSep {
                    vertex: parse_index(parts.next(), s)?,
                },
                "e" => SymbolToken::EdgeSep {
                    lo: parse_index(parts.next(), s)?,
                    hi: parse_index(parts.next(), s)?,
                },
                _ => return Err(err()),
            },
            "x" => SymbolToken::Port {
                vertex: parse_index(parts.next(), s)?,
                rank: parse_index(parts.next(), s)?,
            },
            "e" => {
                let token = SymbolToken::EdgeCode {
                    lo: parse_index(parts.next(), s)?,
                    hi: parse_index(parts.next(), s)?,
                    half: parse_index(parts.next(), s)?,
                };
                if let SymbolToken::EdgeCode { half, .. } = token {
                    if half != 1 && half != 2 {
                        return Err(err());
                    }
                }
                token
            }
            "z" => SymbolToken::ZPad {
                vertex: parse_index(parts.next(), s)?,
                k: parse_index(parts.next(), s)?,
            },
            "w" => SymbolToken::WPad {
                vertex: parse_index(parts.next(), s)?,
                k: parse_index(parts.next(), s)?,
            },
            "u" => SymbolToken::UPad {
                vertex: parse_index(parts.next(), s)?,
                k: parse_index(parts.next(), s)?,
            },
            _ => return Err(err()),
        };
        if parts.next().is_some() {
            return Err(err());
        }
        Ok(token)
    }
}

impl Serialize for SymbolToken {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SymbolToken {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Classification of one alignment column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnClass {
    /// Both rows carry the (equal) symbol.
    Match,
    /// Symbol in X, gap in Y.
    UnmatchedX,
    /// Symbol in Y, gap in X.
    UnmatchedY,
}

/// Validation and parsing errors for aligned pairs.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unequal row lengths: {x} vs {y}")]
    UnequalRowLengths { x: usize, y: usize },
    #[error("double-gap column {column}")]
    DoubleGap { column: usize },
    #[error("mismatched non-gap column {column}")]
    MismatchedColumn { column: usize },
    #[error("malformed token in row {row} at column {column}: {text:?}")]
    MalformedToken {
        row: Genome,
        column: usize,
        text: String,
    },
    #[error("declared column count {declared} does not match row length {actual}")]
    ColumnCountMismatch { declared: usize, actual: usize },
    #[error("invalid instance JSON: {0}")]
    Json(String),
    #[error("interval {interval} is out of bounds for {columns} columns")]
    OutOfBounds { interval: Interval, columns: usize },
    #[error("target {target} contains a gap column for genome {genome}")]
    GapInTarget { genome: Genome, target: Interval },
}

/// A cell of one row: a symbol or a gap.
pub type Cell = Option<SymbolToken>;

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    columns: usize,
    #[serde(rename = "rowX")]
    row_x: Vec<String>,
    #[serde(rename = "rowY")]
    row_y: Vec<String>,
}

/// Two aligned genomes as equal-length rows over symbol-or-gap cells.
///
/// Construction enforces the alignment invariants (equal lengths, no
/// double-gap column, matching symbols in shared columns), so a value of
/// this type is always a valid alignment. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedPair {
    row_x: Vec<Cell>,
    row_y: Vec<Cell>,
}

impl AlignedPair {
    /// Checks the alignment invariants and wraps the rows.
    pub fn new(row_x: Vec<Cell>, row_y: Vec<Cell>) -> Result<Self, ModelError> {
        if row_x.len() != row_y.len() {
            return Err(ModelError::UnequalRowLengths {
                x: row_x.len(),
                y: row_y.len(),
            });
        }
        for (column, (cx, cy)) in row_x.iter().zip(&row_y).enumerate() {
            match (cx, cy) {
                (None, None) => return Err(ModelError::DoubleGap { column }),
                (Some(a), Some(b)) if a != b => {
                    return Err(ModelError::MismatchedColumn { column })
                }
                _ => {}
            }
        }
        Ok(AlignedPair { row_x, row_y })
    }

    /// Parses an instance document (see the instance JSON schema).
    pub fn parse_alignment(document: &[u8]) -> Result<Self, ModelError> {
        let file: InstanceFile =
            serde_json::from_slice(document).map_err(|e| ModelError::Json(e.to_string()))?;
        if file.columns != file.row_x.len() {
            return Err(ModelError::ColumnCountMismatch {
                declared: file.columns,
                actual: file.row_x.len(),
            });
        }
        let parse_row = |row: &[String], genome: Genome| -> Result<Vec<Cell>, ModelError> {
            row.iter()
                .enumerate()
                .map(|(column, text)| {
                    if text == "-" {
                        Ok(None)
                    } else {
                        text.parse::<SymbolToken>().map(Some).map_err(|_| {
                            ModelError::MalformedToken {
                                row: genome,
                                column,
                                text: text.clone(),
                            }
                        })
                    }
                })
                .collect()
        };
        let row_x = parse_row(&file.row_x, Genome::X)?;
        let row_y = parse_row(&file.row_y, Genome::Y)?;
        AlignedPair::new(row_x, row_y)
    }

    /// Renders the instance document; `parse_alignment` inverts this exactly.
    pub fn to_json(&self) -> String {
        let render = |row: &[Cell]| {
            row.iter()
                .map(|c| match c {
                    Some(t) => t.to_string(),
                    None => "-".to_string(),
                })
                .collect::<Vec<_>>()
        };
        let file = InstanceFile {
            columns: self.columns(),
            row_x: render(&self.row_x),
            row_y: render(&self.row_y),
        };
        serde_json::to_string_pretty(&file).expect("instance serialization cannot fail")
    }

    pub fn columns(&self) -> usize {
        self.row_x.len()
    }

    fn row(&self, genome: Genome) -> &[Cell] {
        match genome {
            Genome::X => &self.row_x,
            Genome::Y => &self.row_y,
        }
    }

    /// The symbol of `genome` at `column`, or `None` on a gap.
    pub fn token(&self, genome: Genome, column: usize) -> Option<&SymbolToken> {
        self.row(genome).get(column).and_then(|c| c.as_ref())
    }

    pub fn classify_column(&self, column: usize) -> ColumnClass {
        match (&self.row_x[column], &self.row_y[column]) {
            (Some(_), Some(_)) => ColumnClass::Match,
            (Some(_), None) => ColumnClass::UnmatchedX,
            (None, Some(_)) => ColumnClass::UnmatchedY,
            (None, None) => unreachable!("double-gap column rejected at construction"),
        }
    }

    /// One class per column; `Match` iff both entries are non-gap.
    pub fn classify_columns(&self) -> Vec<ColumnClass> {
        (0..self.columns())
            .map(|c| self.classify_column(c))
            .collect()
    }

    /// True iff `column` holds a symbol of `genome` with a gap opposite.
    pub fn is_unmatched(&self, genome: Genome, column: usize) -> bool {
        let class = self.classify_column(column);
        match genome {
            Genome::X => class == ColumnClass::UnmatchedX,
            Genome::Y => class == ColumnClass::UnmatchedY,
        }
    }

    /// Maximal intervals of columns unmatched for `genome`, sorted and disjoint.
    pub fn unmatched_runs(&self, genome: Genome) -> Vec<Interval> {
        let mut runs = Vec::new();
        let mut start = None;
        for column in 0..self.columns() {
            if self.is_unmatched(genome, column) {
                start.get_or_insert(column);
            } else if let Some(s) = start.take() {
                runs.push(Interval::new(s, column));
            }
        }
        if let Some(s) = start {
            runs.push(Interval::new(s, self.columns()));
        }
        runs
    }

    /// Total number of columns unmatched for `genome`.
    pub fn unmatched_count(&self, genome: Genome) -> usize {
        (0..self.columns())
            .filter(|&c| self.is_unmatched(genome, c))
            .count()
    }

    /// True iff every column of `interval` carries a symbol of `genome`.
    pub fn gap_free(&self, genome: Genome, interval: Interval) -> bool {
        interval.end <= self.columns() && interval.iter().all(|c| self.token(genome, c).is_some())
    }

    /// The symbols of `genome` over `interval`, or `None` if a gap intervenes.
    pub fn token_seq(&self, genome: Genome, interval: Interval) -> Option<Vec<&SymbolToken>> {
        interval.iter().map(|c| self.token(genome, c)).collect()
    }

    /// Every gap-free interval of `genome` other than `target` whose symbol
    /// sequence equals `target`'s: the candidate duplication sources.
    /// Overlapping occurrences are reported as distinct intervals.
    pub fn substring_occurrences(
        &self,
        genome: Genome,
        target: Interval,
    ) -> Result<Vec<Interval>, ModelError> {
        if target.end > self.columns() {
            return Err(ModelError::OutOfBounds {
                interval: target,
                columns: self.columns(),
            });
        }
        let needle = self
            .token_seq(genome, target)
            .ok_or(ModelError::GapInTarget { genome, target })?;
        let len = target.len();
        let mut sources = Vec::new();
        if len == 0 {
            return Ok(sources);
        }
        for start in 0..=(self.columns() - len) {
            let window = Interval::new(start, start + len);
            if window == target {
                continue;
            }
            match self.token_seq(genome, window) {
                Some(seq) if seq == needle => sources.push(window),
                _ => {}
            }
        }
        Ok(sources)
    }

    /// Per-genome occurrence counts of every symbol (gaps excluded).
    pub fn symbol_occurrence_counts(&self) -> BTreeMap<SymbolToken, (usize, usize)> {
        let mut counts: BTreeMap<SymbolToken, (usize, usize)> = BTreeMap::new();
        for cell in self.row_x.iter().flatten() {
            counts.entry(cell.clone()).or_default().0 += 1;
        }
        for cell in self.row_y.iter().flatten() {
            counts.entry(cell.clone()).or_default().1 += 1;
        }
        counts
    }

    /// Largest per-genome occurrence count over all symbols.
    pub fn max_occurrence(&self) -> usize {
        self.symbol_occurrence_counts()
            .values()
            .map(|&(x, y)| x.max(y))
            .max()
            .unwrap_or(0)
    }

    /// Nearest column left of `column` holding a symbol of `genome`.
    pub fn prev_symbol_column(&self, genome: Genome, column: usize) -> Option<usize> {
        (0..column).rev().find(|&c| self.token(genome, c).is_some())
    }

    /// Nearest column right of `column` holding a symbol of `genome`.
    pub fn next_symbol_column(&self, genome: Genome, column: usize) -> Option<usize> {
        (column + 1..self.columns()).find(|&c| self.token(genome, c).is_some())
    }
}

/// Convenience constructor for hand-made instances: `"-"` is a gap, any
/// other string is a `Plain` symbol.
pub fn plain_pair(row_x: &[&str], row_y: &[&str]) -> Result<AlignedPair, ModelError> {
    let to_cells = |row: &[&str]| {
        row.iter()
            .map(|&s| {
                if s == "-" {
                    None
                } else {
                    Some(SymbolToken::Plain(s.to_string()))
                }
            })
            .collect()
    };
    AlignedPair::new(to_cells(row_x), to_cells(row_y))
}
