use std::io::{BufRead, Write};
use std::ops::Deref;

use crate::error::{usage, Error, Result};

/// An attribute value, `1..=k`.
pub type Symbol = u16;

/// Row-major matrix of symbols over an alphabet of size `alphabet`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolMatrix {
    rows: usize,
    cols: usize,
    alphabet: usize,
    data: Vec<Symbol>,
}

impl SymbolMatrix {
    pub fn new(rows: usize, cols: usize, alphabet: usize, data: Vec<Symbol>) -> Result<Self> {
        if alphabet < 2 || alphabet > Symbol::MAX as usize {
            return Err(usage!(
                "alphabet size {alphabet} outside 2..={}",
                Symbol::MAX
            ));
        }
        if data.len() != rows * cols {
            return Err(usage!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            ));
        }
        if let Some(pos) = data.iter().position(|&s| s == 0 || s as usize > alphabet) {
            return Err(usage!(
                "entry ({}, {}) = {} outside alphabet 1..={alphabet}",
                pos / cols.max(1),
                pos % cols.max(1),
                data[pos]
            ));
        }
        Ok(Self {
            rows,
            cols,
            alphabet,
            data,
        })
    }

    /// Builds from nested rows; convenient in tests.
    pub fn from_rows<R: AsRef<[Symbol]>>(alphabet: usize, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(usage!("row {i} has {} entries, expected {cols}", r.len()));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, alphabet, data)
    }

    pub(crate) fn from_parts_unchecked(
        rows: usize,
        cols: usize,
        alphabet: usize,
        data: Vec<Symbol>,
    ) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self {
            rows,
            cols,
            alphabet,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn row(&self, i: usize) -> &[Symbol] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entry(&self, i: usize, j: usize) -> Symbol {
        self.data[i * self.cols + j]
    }

    pub fn row_iter(&self) -> impl ExactSizeIterator<Item = &[Symbol]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.data
    }

    /// Writes the text format: `m n k` header, then one line per row.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {} {}", self.rows, self.cols, self.alphabet)?;
        let mut line = String::new();
        for row in self.row_iter() {
            line.clear();
            for (j, s) in row.iter().enumerate() {
                if j > 0 {
                    line.push(' ');
                }
                line.push_str(&s.to_string());
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("text format is ASCII")
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let dims: Vec<usize> = header
            .split(' ')
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("bad header `{header}`")))?;
        let [rows, cols, alphabet] = dims[..] else {
            return Err(Error::Parse(format!(
                "header must be `m n k`, got `{header}`"
            )));
        };
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {}", i + 1)))?
                .map_err(|e| Error::Parse(e.to_string()))?;
            let before = data.len();
            if cols > 0 {
                for tok in line.split(' ') {
                    let s = tok.parse::<Symbol>().map_err(|_| {
                        Error::Parse(format!("bad symbol `{tok}` on row {}", i + 1))
                    })?;
                    data.push(s);
                }
            } else if !line.is_empty() {
                return Err(Error::Parse(format!("row {} should be empty", i + 1)));
            }
            if data.len() - before != cols {
                return Err(Error::Parse(format!(
                    "row {} has {} symbols, expected {cols}",
                    i + 1,
                    data.len() - before
                )));
            }
        }
        if let Some(extra) = lines.next() {
            let extra = extra.map_err(|e| Error::Parse(e.to_string()))?;
            if !extra.is_empty() {
                return Err(Error::Parse("trailing data after last row".into()));
            }
        }
        Self::new(rows, cols, alphabet, data).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// The public, correctly labeled `m x n` database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnlabeledDatabase(SymbolMatrix);

impl UnlabeledDatabase {
    pub fn new(matrix: SymbolMatrix) -> Result<Self> {
        if matrix.rows() == 0 || matrix.cols() == 0 {
            return Err(usage!(
                "database must have at least one row and column, got {}x{}",
                matrix.rows(),
                matrix.cols()
            ));
        }
        Ok(Self(matrix))
    }

    pub fn from_rows<R: AsRef<[Symbol]>>(alphabet: usize, rows: &[R]) -> Result<Self> {
        Self::new(SymbolMatrix::from_rows(alphabet, rows)?)
    }

    pub fn into_inner(self) -> SymbolMatrix {
        self.0
    }
}

impl Deref for UnlabeledDatabase {
    type Target = SymbolMatrix;
    fn deref(&self) -> &SymbolMatrix {
        &self.0
    }
}

/// The anonymized database: rows shuffled, deleted columns removed.
///
/// Deleted positions are not recorded anywhere; the matcher only sees the
/// `K = n - d` surviving columns in their original relative order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDatabase(SymbolMatrix);

impl LabeledDatabase {
    pub fn new(matrix: SymbolMatrix) -> Self {
        Self(matrix)
    }

    pub fn into_inner(self) -> SymbolMatrix {
        self.0
    }
}

impl Deref for LabeledDatabase {
    type Target = SymbolMatrix;
    fn deref(&self) -> &SymbolMatrix {
        &self.0
    }
}
