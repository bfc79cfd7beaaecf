use crate::error::{Error, Result};
use crate::frame::Rect;

/// One boolean per pixel, row-major. Used for regions of interest, grown
/// regions and changed-cell maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl PixelMask {
    pub fn new(width: usize, height: usize) -> Self {
        PixelMask {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::DimensionMismatch {
                width,
                height,
                len: bits.len(),
            });
        }
        Ok(PixelMask { width, height, bits })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        PixelMask { width, height, bits }
    }

    pub fn from_rect(width: usize, height: usize, rect: Rect) -> Self {
        Self::from_fn(width, height, |x, y| rect.contains(x, y))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    #[inline]
    pub fn get_index(&self, i: usize) -> bool {
        self.bits[i]
    }

    #[inline]
    pub fn set_index(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Coordinates `(x, y)` of set pixels in raster order.
    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % w, i / w))
    }

    /// Tight bounding box of the set pixels, `None` for an empty mask.
    pub fn bbox(&self) -> Option<Rect> {
        let mut x0 = usize::MAX;
        let mut y0 = usize::MAX;
        let mut x1 = 0;
        let mut y1 = 0;
        for (x, y) in self.iter_set() {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        (x0 != usize::MAX).then(|| Rect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1))
    }

    fn assert_same_dims(&self, other: &PixelMask) {
        assert_eq!(
            (self.width, self.height),
            (other.width, other.height),
            "mask dimensions differ"
        );
    }

    /// Clears every pixel that is set in `other`.
    pub fn subtract(&mut self, other: &PixelMask) {
        self.assert_same_dims(other);
        for (a, &b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= !b;
        }
    }

    pub fn union_with(&mut self, other: &PixelMask) {
        self.assert_same_dims(other);
        for (a, &b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn intersection_count(&self, other: &PixelMask) -> usize {
        self.assert_same_dims(other);
        self.bits.iter().zip(&other.bits).filter(|(&a, &b)| a && b).count()
    }

    pub fn is_disjoint(&self, other: &PixelMask) -> bool {
        self.intersection_count(other) == 0
    }

    pub fn is_subset_of(&self, other: &PixelMask) -> bool {
        self.assert_same_dims(other);
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn iou(&self, other: &PixelMask) -> f64 {
        let inter = self.intersection_count(other);
        let union = self.count() + other.count() - inter;
        if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        }
    }

    pub fn crop(&self, rect: Rect) -> Result<PixelMask> {
        if !rect.fits_within(self.width, self.height) {
            return Err(Error::RectOutOfBounds {
                rect,
                width: self.width,
                height: self.height,
            });
        }
        Ok(PixelMask::from_fn(rect.w, rect.h, |x, y| {
            self.get(rect.x + x, rect.y + y)
        }))
    }

    /// 8-bit grayscale rendering: 255 inside, 0 outside.
    pub fn to_gray(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect()
    }
}
