//! 8-bit image containers, the red-feature enhancement, and a minimal
//! binary PNM codec (P6 in, P5 out) so the tool has no image-library
//! dependency.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    /// Row-major `[r, g, b]` triplets.
    pixels: Vec<[u8; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<RgbImage> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::invalid(format!(
                "pixel count {} does not match {width}x{height}",
                pixels.len()
            )));
        }
        Ok(RgbImage {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    /// Parses binary PPM (`P6`, maxval 255). Header comments are honored;
    /// the payload must match the declared size exactly.
    pub fn from_p6(bytes: &[u8]) -> Result<RgbImage> {
        let mut cursor = Cursor {
            bytes,
            pos: 0,
        };
        let magic = cursor.token()?;
        if magic != b"P6" {
            return Err(malformed(format!(
                "expected magic P6, got {:?}",
                String::from_utf8_lossy(&magic)
            )));
        }
        let width = cursor.number()? as usize;
        let height = cursor.number()? as usize;
        let maxval = cursor.number()?;
        if maxval != 255 {
            return Err(malformed(format!("only maxval 255 is supported, got {maxval}")));
        }
        cursor.single_whitespace()?;
        if width == 0 || height == 0 {
            return Err(malformed(format!("degenerate dimensions {width}x{height}")));
        }
        let need = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(3))
            .ok_or_else(|| malformed("dimensions overflow".to_owned()))?;
        let payload = &cursor.bytes[cursor.pos..];
        if payload.len() < need {
            return Err(malformed(format!(
                "payload holds {} bytes, need {need}",
                payload.len()
            )));
        }
        if payload.len() > need {
            return Err(malformed(format!(
                "{} trailing bytes after the pixel data",
                payload.len() - need
            )));
        }
        let pixels = payload
            .chunks_exact(3)
            .map(|c| [c[0], c[1], c[2]])
            .collect();
        RgbImage::new(width, height, pixels)
    }
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<GrayImage> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::invalid(format!(
                "pixel count {} does not match {width}x{height}",
                pixels.len()
            )));
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Serializes as binary PGM (`P5`, maxval 255).
    pub fn to_p5(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_filler(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<Vec<u8>> {
        self.skip_filler();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(malformed("truncated header".to_owned()));
        }
        Ok(self.bytes[start..self.pos].to_vec())
    }

    fn number(&mut self) -> Result<u32> {
        let tok = self.token()?;
        std::str::from_utf8(&tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                malformed(format!(
                    "expected a number in the header, got {:?}",
                    String::from_utf8_lossy(&tok)
                ))
            })
    }

    /// Exactly one whitespace byte separates the header from the payload.
    fn single_whitespace(&mut self) -> Result<()> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(malformed(
                "missing whitespace between header and pixel data".to_owned(),
            )),
        }
    }
}

fn malformed(reason: String) -> Error {
    Error::MalformedData {
        format: "PNM",
        reason,
    }
}

/// Red-feature weighting.
#[derive(Debug, Clone, Copy)]
pub struct EnhancementParams {
    /// Gain on the red-over-blue excess; 1.0 matches the deployed tuning.
    pub k: f64,
}

impl EnhancementParams {
    pub fn new(k: f64) -> Result<EnhancementParams> {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::invalid(format!("k must be finite and > 0, got {k}")));
        }
        Ok(EnhancementParams { k })
    }
}

impl Default for EnhancementParams {
    fn default() -> EnhancementParams {
        EnhancementParams { k: 1.0 }
    }
}

/// Per-pixel feature `R + k * max(R - B, 0) - G`, rounded and clamped to
/// `[0, 255]`. Red-dominant paint lights up; gray floors and glare mostly
/// cancel out.
pub fn enhance(img: &RgbImage, params: &EnhancementParams) -> GrayImage {
    let pixels = img
        .pixels
        .iter()
        .map(|&[r, g, b]| {
            let (r, g, b) = (r as f64, g as f64, b as f64);
            let v = r + params.k * (r - b).max(0.0) - g;
            v.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage {
        width: img.width,
        height: img.height,
        pixels,
    }
}

/// Plain luma (`0.299 R + 0.587 G + 0.114 B`), kept as the comparison
/// baseline for the feature map.
pub fn vanilla_grayscale(img: &RgbImage) -> GrayImage {
    let pixels = img
        .pixels
        .iter()
        .map(|&[r, g, b]| {
            let v = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
            v.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage {
        width: img.width,
        height: img.height,
        pixels,
    }
}
