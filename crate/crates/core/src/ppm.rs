//! Binary PPM (`P6`, 8-bit) encoding and a strict decoder.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PpmError {
    #[error("missing P6 magic")]
    BadMagic,
    #[error("malformed header: {0}")]
    Header(&'static str),
    #[error("maxval {0} unsupported (only 1..=255)")]
    MaxVal(u32),
    #[error("image dimensions {0}x{1} are zero or too large")]
    Dimensions(u32, u32),
    #[error("expected {expected} payload bytes, found {found}")]
    Payload { expected: usize, found: usize },
}

/// Upper bound on decoded pixel count.
pub const MAX_PIXELS: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    pub maxval: u8,
    /// Row-major RGB triples.
    pub pixels: Vec<u8>,
}

impl Image {
    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }
}

/// `P6\n{w} {h}\n255\n` followed by the RGB payload.
pub fn encode(width: u32, height: u32, rgb: &[u8]) -> Vec<u8> {
    assert_eq!(rgb.len(), 3 * width as usize * height as usize, "payload size");
    let header = format!("P6\n{width} {height}\n255\n");
    let mut out = Vec::with_capacity(header.len() + rgb.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(rgb);
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&c) = self.bytes.get(self.pos) {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<u32, PpmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(&c) = self.bytes.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((c - b'0') as u32))
                .ok_or(PpmError::Header(what))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PpmError::Header(what));
        }
        Ok(value)
    }
}

pub fn decode(bytes: &[u8]) -> Result<Image, PpmError> {
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(PpmError::BadMagic);
    }
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur.bytes.get(2).is_some_and(|c| c.is_ascii_whitespace() || *c == b'#') {
        return Err(PpmError::Header("magic must be followed by whitespace"));
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if !(1..=255).contains(&maxval) {
        return Err(PpmError::MaxVal(maxval));
    }
    let count = width as u64 * height as u64;
    if count == 0 || count > MAX_PIXELS {
        return Err(PpmError::Dimensions(width, height));
    }
    // exactly one whitespace byte separates the header from the raster
    match cur.bytes.get(cur.pos) {
        Some(c) if c.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(PpmError::Header("missing separator after maxval")),
    }
    let payload = &bytes[cur.pos..];
    let expected = 3 * count as usize;
    if payload.len() != expected {
        return Err(PpmError::Payload {
            expected,
            found: payload.len(),
        });
    }
    if payload.iter().any(|&v| v as u32 > maxval) {
        return Err(PpmError::Header("sample exceeds maxval"));
    }
    Ok(Image {
        width,
        height,
        maxval: maxval as u8,
        pixels: payload.to_vec(),
    })
}
