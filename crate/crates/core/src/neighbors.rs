//! Near-neighbor search under Hamming distance.
//!
//! Uses multi-index hashing: split the `n` columns into `d + 1` contiguous
//! blocks. Two rows within distance `d` disagree in at most `d` blocks, so
//! they agree exactly on at least one. Candidates are rows that share some
//! block; each is verified with the full distance. Cost depends on bucket
//! sizes and degrades to the all-pairs scan for very skewed laws.

use std::collections::HashMap;

use crate::hamming::{
    hamming_unchecked, pack_row, packed_distance, PACK_MAX_ALPHABET, PACK_MAX_COLS,
};
use crate::model::{Symbol, SymbolMatrix};

/// Column ranges of the `d + 1` blocks, or `None` when `d >= n` (every pair
/// is then within distance `d`).
fn blocks(n: usize, d: usize) -> Option<Vec<(usize, usize)>> {
    if d >= n {
        return None;
    }
    let parts = d + 1;
    let (base, extra) = (n / parts, n % parts);
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for b in 0..parts {
        let len = base + usize::from(b < extra);
        out.push((start, start + len));
        start += len;
    }
    Some(out)
}

#[inline]
fn block_key(row: &[Symbol], (s, e): (usize, usize), k: u64) -> u64 {
    row[s..e].iter().fold(0u64, |acc, &x| {
        acc.wrapping_mul(k).wrapping_add(x as u64 - 1)
    })
}

/// All pairs `(i, j, dist)` with `i < j` and `dist <= d`, sorted by `(i, j)`.
pub fn near_pairs(db: &SymbolMatrix, d: usize) -> Vec<(usize, usize, usize)> {
    let m = db.rows();
    let mut out = Vec::new();
    let Some(blocks) = blocks(db.cols(), d) else {
        for i in 0..m {
            for j in i + 1..m {
                out.push((i, j, hamming_unchecked(db.row(i), db.row(j))));
            }
        }
        return out;
    };
    let k = db.alphabet_size() as u64;
    let mut keyed: Vec<(u64, u32)> = Vec::with_capacity(m);
    for (b, &range) in blocks.iter().enumerate() {
        keyed.clear();
        keyed.extend((0..m).map(|i| (block_key(db.row(i), range, k), i as u32)));
        keyed.sort_unstable();
        for run in keyed.chunk_by(|x, y| x.0 == y.0) {
            for (x, &(_, i)) in run.iter().enumerate() {
                let ri = db.row(i as usize);
                for &(_, j) in &run[x + 1..] {
                    let rj = db.row(j as usize);
                    let (s, e) = range;
                    if ri[s..e] != rj[s..e] {
                        continue;
                    }
                    // report each pair from the first block where it agrees
                    if blocks[..b].iter().any(|&(s, e)| ri[s..e] == rj[s..e]) {
                        continue;
                    }
                    let dist = hamming_unchecked(ri, rj);
                    if dist <= d {
                        let (a, c) = if i < j { (i, j) } else { (j, i) };
                        out.push((a as usize, c as usize, dist));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// For each row, whether some other row lies within distance `d`.
pub fn vulnerable_rows(db: &SymbolMatrix, d: usize) -> Vec<bool> {
    let m = db.rows();
    let mut flag = vec![false; m];
    if m < 2 {
        return flag;
    }
    let Some(blocks) = blocks(db.cols(), d) else {
        return vec![true; m];
    };
    let k = db.alphabet_size() as u64;
    let mut keyed: Vec<(u64, u32)> = Vec::with_capacity(m);
    for &range in &blocks {
        keyed.clear();
        keyed.extend((0..m).map(|i| (block_key(db.row(i), range, k), i as u32)));
        keyed.sort_unstable();
        for run in keyed.chunk_by(|x, y| x.0 == y.0) {
            for (x, &(_, i)) in run.iter().enumerate() {
                let i = i as usize;
                for &(_, j) in &run[x + 1..] {
                    let j = j as usize;
                    if flag[i] && flag[j] {
                        continue;
                    }
                    if hamming_unchecked(db.row(i), db.row(j)) <= d {
                        flag[i] = true;
                        flag[j] = true;
                    }
                }
            }
        }
    }
    flag
}

/// Tables from block key to query rows, one per block.
enum BlockTable {
    /// CSR layout indexed directly by key.
    Direct {
        offsets: Vec<u32>,
        ids: Vec<u32>,
    },
    Hashed(HashMap<u64, Vec<u32>>),
}

const DIRECT_TABLE_LIMIT: u64 = 1 << 16;

/// Counting sort of `0..keys.len()` by key into a CSR table over `0..size`.
/// Buckets list their members in increasing order.
fn fill_csr(keys: &[u64], size: usize, offsets: &mut Vec<u32>, ids: &mut Vec<u32>) {
    offsets.clear();
    offsets.resize(size + 1, 0);
    for &key in keys {
        offsets[key as usize + 1] += 1;
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    ids.clear();
    ids.resize(keys.len(), 0);
    for (q, &key) in keys.iter().enumerate() {
        let cursor = &mut offsets[key as usize];
        ids[*cursor as usize] = q as u32;
        *cursor += 1;
    }
    // each cursor now sits at the start of the next bucket
    offsets.copy_within(..size, 1);
    offsets[0] = 0;
}

impl BlockTable {
    fn build(keys: &[u64], space: Option<u64>) -> Self {
        match space {
            Some(size) if size <= DIRECT_TABLE_LIMIT => {
                let (mut offsets, mut ids) = (Vec::new(), Vec::new());
                fill_csr(keys, size as usize, &mut offsets, &mut ids);
                BlockTable::Direct { offsets, ids }
            }
            _ => {
                let mut map: HashMap<u64, Vec<u32>> = HashMap::new();
                for (q, &key) in keys.iter().enumerate() {
                    map.entry(key).or_default().push(q as u32);
                }
                BlockTable::Hashed(map)
            }
        }
    }

    #[inline]
    fn get(&self, key: u64) -> &[u32] {
        match self {
            BlockTable::Direct { offsets, ids } => {
                let k = key as usize;
                &ids[offsets[k] as usize..offsets[k + 1] as usize]
            }
            BlockTable::Hashed(map) => map.get(&key).map_or(&[], Vec::as_slice),
        }
    }
}

/// Rows indexed at once when the streamed side is the one put in tables.
const CHUNK_ROWS: usize = 4096;

/// Indexes each streamed chunk instead of the queries. Used when rows pack
/// into a `u128`: every query then walks one short bucket per block with
/// cheap distance checks, and found queries drop out of later chunks.
///
/// Keys cover only a prefix of each block so tables stay near the chunk
/// size. Rows equal on a block are equal on its prefix, so no candidate is
/// lost; the extra ones are rejected by the distance check.
struct ChunkPlan {
    /// Per block: column range of the keyed prefix and its key space.
    prefixes: Vec<((usize, usize), usize)>,
    /// `query_keys[b][q]` is the prefix key of query `q` in block `b`.
    query_keys: Vec<Vec<u64>>,
    packed_queries: Vec<u128>,
    packed_rows: Vec<u128>,
    keys: Vec<u64>,
    offsets: Vec<u32>,
    ids: Vec<u32>,
}

impl ChunkPlan {
    fn new(queries: &[Vec<Symbol>], blocks: &[(usize, usize)], k: u64) -> Self {
        let prefixes: Vec<_> = blocks
            .iter()
            .map(|&(s, e)| {
                let mut len = 0;
                let mut space = 1u64;
                while s + len < e && space * k <= CHUNK_ROWS as u64 {
                    space *= k;
                    len += 1;
                }
                ((s, s + len), space as usize)
            })
            .collect();
        let query_keys = prefixes
            .iter()
            .map(|&(range, _)| queries.iter().map(|q| block_key(q, range, k)).collect())
            .collect();
        Self {
            prefixes,
            query_keys,
            packed_queries: queries.iter().map(|q| pack_row(q)).collect(),
            packed_rows: Vec::with_capacity(CHUNK_ROWS),
            keys: Vec::with_capacity(CHUNK_ROWS),
            offsets: Vec::new(),
            ids: Vec::with_capacity(CHUNK_ROWS),
        }
    }
}

/// Decides, for a fixed set of query rows, whether any *other* row of a
/// database streamed through [`QueryIndex::scan`] lies within distance `d`.
pub struct QueryIndex {
    d: usize,
    n: usize,
    k: u64,
    queries: Vec<Vec<Symbol>>,
    query_ids: Vec<u64>,
    found: Vec<bool>,
    remaining: usize,
    search: Search,
}

enum Search {
    /// `d >= n`: any other row is a neighbor.
    Everything,
    Chunked(Box<ChunkPlan>),
    /// Block tables over the queries, probed once per streamed row.
    QueryTables(Vec<(usize, usize)>, Vec<BlockTable>),
}

impl QueryIndex {
    /// `queries[i]` is row `ids[i]` of the database; a row is never its own
    /// neighbor.
    pub fn new(
        queries: Vec<Vec<Symbol>>,
        ids: Vec<u64>,
        n: usize,
        alphabet: usize,
        d: usize,
    ) -> Self {
        assert_eq!(queries.len(), ids.len());
        let k = alphabet as u64;
        let packable = n <= PACK_MAX_COLS && alphabet <= PACK_MAX_ALPHABET;
        let search = match blocks(n, d) {
            None => Search::Everything,
            Some(blocks) if packable => {
                Search::Chunked(Box::new(ChunkPlan::new(&queries, &blocks, k)))
            }
            Some(blocks) => {
                let tables = blocks
                    .iter()
                    .map(|&range| {
                        let keys: Vec<u64> =
                            queries.iter().map(|q| block_key(q, range, k)).collect();
                        let space = k.checked_pow((range.1 - range.0) as u32);
                        BlockTable::build(&keys, space)
                    })
                    .collect();
                Search::QueryTables(blocks, tables)
            }
        };
        let found = vec![false; queries.len()];
        let remaining = queries.len();
        Self {
            d,
            n,
            k,
            queries,
            query_ids: ids,
            found,
            remaining,
            search,
        }
    }

    pub fn all_found(&self) -> bool {
        self.remaining == 0
    }

    /// Streams rows `first_id, first_id + 1, ...` packed in `rows`.
    pub fn scan(&mut self, first_id: u64, rows: &[Symbol]) {
        if self.remaining == 0 || rows.is_empty() {
            return;
        }
        match &mut self.search {
            Search::Everything => {
                let count = (rows.len() / self.n) as u64;
                for q in 0..self.queries.len() {
                    let id = self.query_ids[q];
                    // some streamed row other than the query itself
                    let other = count > 1 || id != first_id;
                    if !self.found[q] && other {
                        self.found[q] = true;
                        self.remaining -= 1;
                    }
                }
            }
            Search::Chunked(plan) => {
                let mut first = first_id;
                for chunk in rows.chunks(CHUNK_ROWS * self.n) {
                    scan_chunk(
                        plan,
                        self.n,
                        self.k,
                        self.d,
                        first,
                        chunk,
                        &self.query_ids,
                        &mut self.found,
                        &mut self.remaining,
                    );
                    if self.remaining == 0 {
                        return;
                    }
                    first += (chunk.len() / self.n) as u64;
                }
            }
            Search::QueryTables(blocks, tables) => {
                for (r, row) in rows.chunks_exact(self.n).enumerate() {
                    let id = first_id + r as u64;
                    for (range, table) in blocks.iter().zip(tables.iter()) {
                        for &q in table.get(block_key(row, *range, self.k)) {
                            let q = q as usize;
                            if self.found[q] || self.query_ids[q] == id {
                                continue;
                            }
                            if hamming_unchecked(&self.queries[q], row) <= self.d {
                                self.found[q] = true;
                                self.remaining -= 1;
                            }
                        }
                    }
                    if self.remaining == 0 {
                        return;
                    }
                }
            }
        }
    }

    pub fn found(&self) -> &[bool] {
        &self.found
    }
}

#[allow(clippy::too_many_arguments)]
fn scan_chunk(
    plan: &mut ChunkPlan,
    n: usize,
    k: u64,
    d: usize,
    first_id: u64,
    rows: &[Symbol],
    query_ids: &[u64],
    found: &mut [bool],
    remaining: &mut usize,
) {
    let ChunkPlan {
        prefixes,
        query_keys,
        packed_queries,
        packed_rows,
        keys,
        offsets,
        ids,
    } = plan;
    packed_rows.clear();
    packed_rows.extend(rows.chunks_exact(n).map(pack_row));
    let count = packed_rows.len() as u64;
    for (&(range, space), query_keys) in prefixes.iter().zip(query_keys.iter()) {
        keys.clear();
        keys.extend(rows.chunks_exact(n).map(|row| block_key(row, range, k)));
        fill_csr(keys, space, offsets, ids);
        for (q, &key) in query_keys.iter().enumerate() {
            if found[q] {
                continue;
            }
            // local index of the query itself, or out of range
            let own = query_ids[q].wrapping_sub(first_id);
            let own = if own < count { own as u32 } else { u32::MAX };
            let target = packed_queries[q];
            let bucket = &ids[offsets[key as usize] as usize..offsets[key as usize + 1] as usize];
            if bucket
                .iter()
                .any(|&r| r != own && packed_distance(target, packed_rows[r as usize]) <= d)
            {
                found[q] = true;
                *remaining -= 1;
            }
        }
        if *remaining == 0 {
            return;
        }
    }
}
