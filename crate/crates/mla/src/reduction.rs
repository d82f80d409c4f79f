//! Builds the aligned genome pair encoding a cubic graph, plus a block map
//! locating every construction block and its named sub-intervals.
//!
//! Layout (left to right): one 18-column block per vertex, one 5-column
//! block per edge (edges in global order), then per vertex a 12-column and
//! a 21-column auxiliary block. In the vertex/edge blocks only row X
//! carries symbols past the separator, so every non-separator column there
//! is unmatched; the auxiliary blocks are identical in both rows, so the
//! whole auxiliary part is matched and never needs labeling.
//!
//! Each edge `{lo, hi}` contributes a 3-symbol encoding to both endpoint
//! vertex blocks: `port(lo) code1 code2` seen from `lo` and
//! `code1 code2 port(hi)` seen from `hi`. The split of that triple around
//! the second auxiliary block's separators (`[l]`/`[r]`) is what makes the
//! two canonical vertex-block labelings possible.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{order_edges, CubicGraph, GraphError};
use crate::model::{AlignedPair, Cell, Interval, SymbolToken};

/// Identifier of one construction block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockName {
    /// Vertex block in the vertex/edge part.
    VertexVe(u32),
    /// Edge block in the vertex/edge part.
    EdgeVe(u32, u32),
    /// First auxiliary block of a vertex (pad-pair sources).
    Aux1(u32),
    /// Second auxiliary block of a vertex (split-encoding sources).
    Aux2(u32),
}

impl fmt::Display for BlockName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockName::VertexVe(v) => write!(f, "X-VE:v:{v}"),
            BlockName::EdgeVe(lo, hi) => write!(f, "X-VE:e:{lo}:{hi}"),
            BlockName::Aux1(v) => write!(f, "X-A1:v:{v}"),
            BlockName::Aux2(v) => write!(f, "X-A2:v:{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed block name {text:?}")]
pub struct BlockNameParseError {
    pub text: String,
}

impl FromStr for BlockName {
    type Err = BlockNameParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || BlockNameParseError {
            text: s.to_string(),
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["X-VE", "v", v] => Ok(BlockName::VertexVe(v.parse().map_err(|_| err())?)),
            ["X-VE", "e", lo, hi] => Ok(BlockName::EdgeVe(
                lo.parse().map_err(|_| err())?,
                hi.parse().map_err(|_| err())?,
            )),
            ["X-A1", "v", v] => Ok(BlockName::Aux1(v.parse().map_err(|_| err())?)),
            ["X-A2", "v", v] => Ok(BlockName::Aux2(v.parse().map_err(|_| err())?)),
            _ => Err(err()),
        }
    }
}

impl Serialize for BlockName {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BlockName {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(D::Error::custom)
    }
}

/// One block: its column interval and named sub-interval anchors.
///
/// Anchor names are fixed:
/// - vertex blocks: `z:1-2`, `z:3-4`, `z:5-6`, `z:7-8` (pad pairs),
///   `enc:e:<lo>:<hi>` (the encoding triple of each incident edge), and
///   `a2src:1` .. `a2src:6` (the six split-encoding targets);
/// - edge blocks: `enc:i` / `enc:j` (the two 3-symbol encodings) and
///   `x:i` / `x:j` (the two port columns);
/// - first auxiliary blocks: `z:1-2` .. `z:7-8` (pad-pair sources);
/// - second auxiliary blocks: `a2src:1` .. `a2src:6` (split sources).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub name: BlockName,
    pub interval: Interval,
    pub anchors: BTreeMap<String, Interval>,
}

impl Block {
    pub fn anchor(&self, name: &str) -> Option<Interval> {
        self.anchors.get(name).copied()
    }
}

/// All blocks of a reduction instance, in column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMap {
    pub blocks: Vec<Block>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockMapError {
    #[error("block {0} not found")]
    MissingBlock(String),
    #[error("anchor {anchor:?} not found in block {block}")]
    MissingAnchor { block: BlockName, anchor: String },
    #[error("invalid block map JSON: {0}")]
    Json(String),
}

impl BlockMap {
    pub fn get(&self, name: BlockName) -> Result<&Block, BlockMapError> {
        self.blocks
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| BlockMapError::MissingBlock(name.to_string()))
    }

    pub fn anchor(&self, name: BlockName, anchor: &str) -> Result<Interval, BlockMapError> {
        self.get(name)?
            .anchor(anchor)
            .ok_or_else(|| BlockMapError::MissingAnchor {
                block: name,
                anchor: anchor.to_string(),
            })
    }

    pub fn vertex_blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks
            .iter()
            .filter(|b| matches!(b.name, BlockName::VertexVe(_)))
    }

    pub fn edge_blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks
            .iter()
            .filter(|b| matches!(b.name, BlockName::EdgeVe(_, _)))
    }

    /// The block whose interval contains `column`.
    pub fn block_of_column(&self, column: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.interval.contains(column))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("block map serialization cannot fail")
    }

    pub fn from_json(document: &[u8]) -> Result<Self, BlockMapError> {
        serde_json::from_slice(document).map_err(|e| BlockMapError::Json(e.to_string()))
    }
}

/// The 3-symbol encoding of `edge` as seen from `vertex`, split into the
/// left and right parts used by the second auxiliary block.
pub fn enc_split(
    vertex: u32,
    edge: (u32, u32),
    own_rank: u32,
) -> (Vec<SymbolToken>, Vec<SymbolToken>) {
    let (lo, hi) = edge;
    let code1 = SymbolToken::EdgeCode { lo, hi, half: 1 };
    let code2 = SymbolToken::EdgeCode { lo, hi, half: 2 };
    if vertex == lo {
        (
            vec![SymbolToken::Port {
                vertex,
                rank: own_rank,
            }],
            vec![code1, code2],
        )
    } else {
        (
            vec![code1, code2],
            vec![SymbolToken::Port {
                vertex,
                rank: own_rank,
            }],
        )
    }
}

/// Edge block rows: X carries the separator, the two ports and the two
/// edge codes; Y carries the separator followed by four gaps.
pub fn build_edge_block(
    edge: (u32, u32),
    rank_lo: u32,
    rank_hi: u32,
) -> (Vec<SymbolToken>, Vec<Cell>) {
    let (lo, hi) = edge;
    let x = vec![
        SymbolToken::EdgeSep { lo, hi },
        SymbolToken::Port {
            vertex: lo,
            rank: rank_lo,
        },
        SymbolToken::EdgeCode { lo, hi, half: 1 },
        SymbolToken::EdgeCode { lo, hi, half: 2 },
        SymbolToken::Port {
            vertex: hi,
            rank: rank_hi,
        },
    ];
    let mut y: Vec<Cell> = vec![Some(x[0].clone())];
    y.extend(std::iter::repeat_with(|| None).take(4));
    (x, y)
}

/// Vertex block rows: X interleaves the four pad pairs with the three
/// incident-edge encodings (18 symbols); Y is the separator plus 17 gaps.
/// `incident` must hold the vertex's three edges in rank order.
pub fn build_vertex_block(vertex: u32, incident: &[(u32, u32)]) -> (Vec<SymbolToken>, Vec<Cell>) {
    assert_eq!(incident.len(), 3, "a cubic vertex has three edges");
    let pad = |k: u32| SymbolToken::ZPad { vertex, k };
    let mut x = vec![SymbolToken::VertexSep { vertex }];
    for (t, &edge) in incident.iter().enumerate() {
        x.push(pad(2 * t as u32 + 1));
        x.push(pad(2 * t as u32 + 2));
        let (left, right) = enc_split(vertex, edge, t as u32 + 1);
        x.extend(left);
        x.extend(right);
    }
    x.push(pad(7));
    x.push(pad(8));
    let mut y: Vec<Cell> = vec![Some(x[0].clone())];
    y.extend(std::iter::repeat_with(|| None).take(17));
    (x, y)
}

/// Auxiliary block rows (identical in X and Y): the first interleaves the
/// pad pairs with `w` separators (12 symbols), the second interleaves the
/// split encodings with `u` separators (21 symbols).
pub fn build_aux_blocks(
    vertex: u32,
    incident: &[(u32, u32)],
) -> (Vec<SymbolToken>, Vec<SymbolToken>) {
    assert_eq!(incident.len(), 3, "a cubic vertex has three edges");
    let pad = |k: u32| SymbolToken::ZPad { vertex, k };
    let mut aux1 = Vec::with_capacity(12);
    for t in 0..4u32 {
        aux1.push(SymbolToken::WPad { vertex, k: t + 1 });
        aux1.push(pad(2 * t + 1));
        aux1.push(pad(2 * t + 2));
    }
    let mut aux2 = Vec::with_capacity(21);
    for (t, &edge) in incident.iter().enumerate() {
        let t32 = t as u32;
        let (left, right) = enc_split(vertex, edge, t32 + 1);
        aux2.push(SymbolToken::UPad {
            vertex,
            k: 2 * t32 + 1,
        });
        aux2.push(pad(2 * t32 + 2));
        aux2.extend(left);
        aux2.push(SymbolToken::UPad {
            vertex,
            k: 2 * t32 + 2,
        });
        aux2.extend(right);
        aux2.push(pad(2 * t32 + 3));
    }
    (aux1, aux2)
}

/// Offsets of the three encoding triples inside a vertex block.
const ENC_BASES: [usize; 3] = [3, 8, 13];
/// Offsets of the four pad pairs inside a vertex block.
const Z_PAIR_BASES: [usize; 4] = [1, 6, 11, 16];

fn z_pair_anchor(t: usize) -> String {
    format!("z:{}-{}", 2 * t + 1, 2 * t + 2)
}

/// Builds the full aligned pair and its block map for a cubic graph.
///
/// Deterministic; total columns are `18n + 5|E| + 33n`.
pub fn reduce_graph(graph: &CubicGraph) -> Result<(AlignedPair, BlockMap), GraphError> {
    graph.validate()?;
    let order = order_edges(graph);
    let mut row_x: Vec<Cell> = Vec::new();
    let mut row_y: Vec<Cell> = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();

    let mut push_block = |row_x: &mut Vec<Cell>,
                          row_y: &mut Vec<Cell>,
                          name: BlockName,
                          x: Vec<Cell>,
                          y: Vec<Cell>,
                          rel_anchors: Vec<(String, Interval)>| {
        let base = row_x.len();
        let interval = Interval::new(base, base + x.len());
        row_x.extend(x);
        row_y.extend(y);
        let anchors = rel_anchors
            .into_iter()
            .map(|(k, a)| (k, Interval::new(base + a.start, base + a.end)))
            .collect();
        blocks.push(Block {
            name,
            interval,
            anchors,
        });
    };

    // Vertex part.
    for vertex in graph.vertices() {
        let incident = order.incident(vertex).to_vec();
        let (x, y) = build_vertex_block(vertex, &incident);
        let mut anchors = Vec::new();
        for (t, base) in Z_PAIR_BASES.iter().enumerate() {
            anchors.push((z_pair_anchor(t), Interval::new(*base, base + 2)));
        }
        for (t, &(lo, hi)) in incident.iter().enumerate() {
            let base = ENC_BASES[t];
            anchors.push((format!("enc:e:{lo}:{hi}"), Interval::new(base, base + 3)));
            let left_len = enc_split(vertex, (lo, hi), t as u32 + 1).0.len();
            anchors.push((
                format!("a2src:{}", 2 * t + 1),
                Interval::new(base - 1, base + left_len),
            ));
            anchors.push((
                format!("a2src:{}", 2 * t + 2),
                Interval::new(base + left_len, base + 4),
            ));
        }
        push_block(
            &mut row_x,
            &mut row_y,
            BlockName::VertexVe(vertex),
            x.into_iter().map(Some).collect(),
            y,
            anchors,
        );
    }

    // Edge part, in global edge order.
    for &(lo, hi) in order.edges() {
        let rank_lo = order.rank(lo, (lo, hi)).expect("incident edge has a rank");
        let rank_hi = order.rank(hi, (lo, hi)).expect("incident edge has a rank");
        let (x, y) = build_edge_block((lo, hi), rank_lo, rank_hi);
        let anchors = vec![
            ("enc:i".to_string(), Interval::new(1, 4)),
            ("enc:j".to_string(), Interval::new(2, 5)),
            ("x:i".to_string(), Interval::new(1, 2)),
            ("x:j".to_string(), Interval::new(4, 5)),
        ];
        push_block(
            &mut row_x,
            &mut row_y,
            BlockName::EdgeVe(lo, hi),
            x.into_iter().map(Some).collect(),
            y,
            anchors,
        );
    }

    // Auxiliary part: per vertex, the pad-pair block then the split block.
    for vertex in graph.vertices() {
        let incident = order.incident(vertex).to_vec();
        let (aux1, aux2) = build_aux_blocks(vertex, &incident);
        let aux1_anchors = (0..4)
            .map(|t| (z_pair_anchor(t), Interval::new(3 * t + 1, 3 * t + 3)))
            .collect();
        let cells1: Vec<Cell> = aux1.into_iter().map(Some).collect();
        push_block(
            &mut row_x,
            &mut row_y,
            BlockName::Aux1(vertex),
            cells1.clone(),
            cells1,
            aux1_anchors,
        );
        let mut aux2_anchors = Vec::new();
        for (t, &edge) in incident.iter().enumerate() {
            let left_len = enc_split(vertex, edge, t as u32 + 1).0.len();
            let group = 7 * t;
            aux2_anchors.push((
                format!("a2src:{}", 2 * t + 1),
                Interval::new(group + 1, group + 2 + left_len),
            ));
            aux2_anchors.push((
                format!("a2src:{}", 2 * t + 2),
                Interval::new(group + 3 + left_len, group + 7),
            ));
        }
        let cells2: Vec<Cell> = aux2.into_iter().map(Some).collect();
        push_block(
            &mut row_x,
            &mut row_y,
            BlockName::Aux2(vertex),
            cells2.clone(),
            cells2,
            aux2_anchors,
        );
    }

    let pair = AlignedPair::new(row_x, row_y).expect("construction emits a valid alignment");
    Ok((pair, BlockMap { blocks }))
}
