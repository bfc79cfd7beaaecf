//! Binary PGM (P5) reading and writing.
//!
//! Depth frames are 16-bit (maxval 65535, big-endian samples). Masks and
//! recalibrated difference images are written as 8-bit PGM (maxval 255).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::frame::DepthFrame;

const DEPTH_MAXVAL: u32 = 65535;

struct Header {
    width: usize,
    height: usize,
    maxval: u32,
    data_offset: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::MalformedHeader("missing P5 magic".into()));
    }
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for (k, field) in fields.iter_mut().enumerate() {
        // whitespace and comments between tokens
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| b.is_ascii_digit()) {
            pos += 1;
        }
        if start == pos {
            let name = ["width", "height", "maxval"][k];
            return Err(Error::MalformedHeader(format!("expected {name}")));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        *field = text
            .parse()
            .map_err(|_| Error::MalformedHeader(format!("number out of range: {text}")))?;
    }
    // exactly one whitespace byte separates maxval from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::MalformedHeader("no whitespace after maxval".into())),
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::MalformedHeader(format!("maxval {maxval} out of range")));
    }
    Ok(Header {
        width: width as usize,
        height: height as usize,
        maxval,
        data_offset: pos,
    })
}

/// Decodes a 16-bit P5 image. Only maxval 65535 is accepted.
pub fn decode_depth(bytes: &[u8]) -> Result<DepthFrame> {
    let header = parse_header(bytes)?;
    if header.maxval != DEPTH_MAXVAL {
        return Err(Error::UnsupportedMaxval(header.maxval));
    }
    let n = header.width * header.height;
    let payload = &bytes[header.data_offset..];
    if payload.len() < 2 * n {
        return Err(Error::TruncatedPayload {
            expected: 2 * n,
            found: payload.len(),
        });
    }
    let data = payload[..2 * n]
        .chunks_exact(2)
        .map(|b| u16::from_be_bytes([b[0], b[1]]))
        .collect();
    DepthFrame::new(header.width, header.height, data)
}

pub fn encode_depth(frame: &DepthFrame) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", frame.width(), frame.height(), DEPTH_MAXVAL).into_bytes();
    out.reserve(frame.len() * 2);
    for &d in frame.data() {
        out.extend_from_slice(&d.to_be_bytes());
    }
    out
}

pub fn encode_gray(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    assert_eq!(pixels.len(), width * height, "gray buffer size mismatch");
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

/// Decodes an 8-bit P5 image as a mask: nonzero samples are set.
pub fn decode_mask(bytes: &[u8]) -> Result<crate::PixelMask> {
    let header = parse_header(bytes)?;
    if header.maxval != 255 {
        return Err(Error::UnsupportedMaxval(header.maxval));
    }
    let n = header.width * header.height;
    let payload = &bytes[header.data_offset..];
    if payload.len() < n {
        return Err(Error::TruncatedPayload {
            expected: n,
            found: payload.len(),
        });
    }
    crate::PixelMask::from_bits(
        header.width,
        header.height,
        payload[..n].iter().map(|&b| b > 0).collect(),
    )
}

pub fn load_depth_frame(path: impl AsRef<Path>) -> Result<DepthFrame> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_depth(&bytes)
}

pub fn save_depth_frame(frame: &DepthFrame, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_depth(frame)).map_err(|e| Error::io(path, e))
}

pub fn save_gray(path: impl AsRef<Path>, width: usize, height: usize, pixels: &[u8]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_gray(width, height, pixels)).map_err(|e| Error::io(path, e))
}

pub fn load_mask(path: impl AsRef<Path>) -> Result<crate::PixelMask> {
    let path = path.as_ref();
    decode_mask(&fs::read(path).map_err(|e| Error::io(path, e))?)
}

pub fn save_mask(path: impl AsRef<Path>, mask: &crate::PixelMask) -> Result<()> {
    save_gray(path, mask.width(), mask.height(), &mask.to_gray())
}
