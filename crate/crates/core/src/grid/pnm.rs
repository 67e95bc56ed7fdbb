//! PBM/PGM reader producing a foreground pixel set.
//!
//! PBM pixels equal to 1 (black) are foreground. PGM pixels are foreground if
//! their value exceeds half of `maxval`. Image row 0 is the top row; it maps
//! to grid row `height − 1` so that the grid's y axis points up.

use super::{GridError, GridSpec, PixelSet};
use crate::geom::Point;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PnmError {
    #[error("cannot read image: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed image: {0}")]
    ParseError(String),
    #[error("unsupported image format `{0}` (expected P1, P2, P4 or P5)")]
    UnsupportedFormat(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

fn parse_err(msg: impl Into<String>) -> PnmError {
    PnmError::ParseError(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    PbmAscii,
    PgmAscii,
    PbmBinary,
    PgmBinary,
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, PnmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_err(format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(format!("{what} out of range")))
    }

    /// Exactly one whitespace byte separates the header from binary data.
    fn single_whitespace(&mut self) -> Result<(), PnmError> {
        match self.data.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(parse_err("missing whitespace after header")),
        }
    }

    fn rest(&self) -> &'a [u8] {
        &self.data[self.pos..]
    }
}

/// Load a PBM or PGM file as a pixel set with pixel side `h`.
pub fn load_binary_image(path: impl AsRef<Path>, h: f64) -> Result<PixelSet, PnmError> {
    let data = std::fs::read(path)?;
    parse_binary_image(&data, h)
}

/// Parse PBM/PGM bytes. The grid origin is `(0, 0)` and its size matches the
/// image.
pub fn parse_binary_image(data: &[u8], h: f64) -> Result<PixelSet, PnmError> {
    if data.len() < 2 {
        return Err(parse_err("file too short"));
    }
    let kind = match &data[..2] {
        b"P1" => Kind::PbmAscii,
        b"P2" => Kind::PgmAscii,
        b"P4" => Kind::PbmBinary,
        b"P5" => Kind::PgmBinary,
        other => return Err(PnmError::UnsupportedFormat(String::from_utf8_lossy(other).into_owned())),
    };
    let mut cur = Cursor { data, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    if width == 0 || height == 0 {
        return Err(parse_err("image has zero size"));
    }
    let maxval = match kind {
        Kind::PgmAscii | Kind::PgmBinary => {
            let m = cur.number("maxval")?;
            if m == 0 || m > 65535 {
                return Err(parse_err(format!("maxval {m} out of range")));
            }
            m
        }
        _ => 1,
    };

    let foreground: Vec<bool> = match kind {
        Kind::PbmAscii => {
            let mut v = Vec::with_capacity(width * height);
            while v.len() < width * height {
                cur.skip_space_and_comments();
                match cur.data.get(cur.pos) {
                    Some(b'0') => v.push(false),
                    Some(b'1') => v.push(true),
                    Some(_) => return Err(parse_err("invalid PBM sample")),
                    None => return Err(parse_err("truncated PBM data")),
                }
                cur.pos += 1;
            }
            v
        }
        Kind::PgmAscii => {
            let mut v = Vec::with_capacity(width * height);
            for _ in 0..width * height {
                let s = cur.number("sample")?;
                if s > maxval {
                    return Err(parse_err(format!("sample {s} exceeds maxval {maxval}")));
                }
                v.push(2 * s > maxval);
            }
            v
        }
        Kind::PbmBinary => {
            cur.single_whitespace()?;
            let stride = width.div_ceil(8);
            let raster = cur.rest();
            if raster.len() < stride * height {
                return Err(parse_err("truncated PBM raster"));
            }
            (0..height)
                .flat_map(|r| {
                    let row = &raster[r * stride..(r + 1) * stride];
                    (0..width).map(move |c| row[c / 8] & (0x80 >> (c % 8)) != 0)
                })
                .collect()
        }
        Kind::PgmBinary => {
            cur.single_whitespace()?;
            let bytes = if maxval < 256 { 1 } else { 2 };
            let raster = cur.rest();
            if raster.len() < bytes * width * height {
                return Err(parse_err("truncated PGM raster"));
            }
            (0..width * height)
                .map(|k| {
                    let s = if bytes == 1 {
                        raster[k] as usize
                    } else {
                        (raster[2 * k] as usize) << 8 | raster[2 * k + 1] as usize
                    };
                    2 * s > maxval
                })
                .collect()
        }
    };

    let spec = GridSpec::new(h, Point::ORIGIN, width, height)?;
    let mut set = PixelSet::empty(spec);
    for (k, _) in foreground.iter().enumerate().filter(|(_, &f)| f) {
        let (col, row) = (k % width, k / width);
        set.insert(col, height - 1 - row);
    }
    Ok(set)
}
