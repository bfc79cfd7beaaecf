use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned pixel rectangle; `x` is the column and `y` the row of the
/// top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub const fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Rect { x, y, w, h }
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    pub fn right(&self) -> usize {
        self.x + self.w
    }

    pub fn bottom(&self) -> usize {
        self.y + self.h
    }

    pub fn is_degenerate(&self) -> bool {
        self.w == 0 || self.h == 0
    }

    pub fn fits_within(&self, width: usize, height: usize) -> bool {
        !self.is_degenerate() && self.right() <= width && self.bottom() <= height
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x && x < self.right() && y >= self.y && y < self.bottom()
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let x0 = self.x.max(other.x);
        let y0 = self.y.max(other.y);
        let x1 = self.right().min(other.right());
        let y1 = self.bottom().min(other.bottom());
        (x1 > x0 && y1 > y0).then(|| Rect::new(x0, y0, x1 - x0, y1 - y0))
    }

    /// Intersection over union of the two rectangles' areas.
    pub fn iou(&self, other: &Rect) -> f64 {
        let inter = self.intersection(other).map_or(0, |r| r.area());
        let union = self.area() + other.area() - inter;
        if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        }
    }
}

/// A single-channel depth image in millimeters, stored row-major.
/// A value of 0 marks an invalid measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthFrame {
    width: usize,
    height: usize,
    data: Vec<u16>,
}

impl DepthFrame {
    pub fn new(width: usize, height: usize, data: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::DimensionMismatch {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(DepthFrame { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u16) -> Self {
        assert!(width > 0 && height > 0, "frame dimensions must be positive");
        DepthFrame {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u16] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<u16> {
        self.data
    }

    pub fn full_rect(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u16) {
        self.data[y * self.width + x] = value;
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, u16> {
        self.data.chunks_exact(self.width)
    }

    /// Copies the window `rect` into a new frame of size `rect.w` x `rect.h`.
    pub fn crop(&self, rect: Rect) -> Result<DepthFrame> {
        if !rect.fits_within(self.width, self.height) {
            return Err(Error::RectOutOfBounds {
                rect,
                width: self.width,
                height: self.height,
            });
        }
        let mut data = Vec::with_capacity(rect.area());
        for row in self.rows().skip(rect.y).take(rect.h) {
            data.extend_from_slice(&row[rect.x..rect.right()]);
        }
        Ok(DepthFrame {
            width: rect.w,
            height: rect.h,
            data,
        })
    }

    /// Number of pixels carrying a measurement (value > 0).
    pub fn valid_pixel_count(&self) -> usize {
        self.data.iter().filter(|&&d| d > 0).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> DepthFrame {
        DepthFrame::new(w, h, (0..(w * h) as u16).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(DepthFrame::new(0, 3, vec![]).is_err());
        assert!(DepthFrame::new(2, 2, vec![1, 2, 3]).is_err());
    }

    #[test]
    fn crop_interior_of_ramp() {
        let f = ramp(4, 4);
        let c = f.crop(Rect::new(1, 1, 2, 2)).unwrap();
        assert_eq!((c.width(), c.height()), (2, 2));
        assert_eq!(c.data(), &[5, 6, 9, 10]);
    }

    #[test]
    fn crop_full_is_identity() {
        let f = ramp(5, 3);
        assert_eq!(f.crop(f.full_rect()).unwrap(), f);
    }

    #[test]
    fn crop_to_driver_window_dims() {
        // 640 columns x 480 rows cropped to a 460 x 370 driver window.
        let f = DepthFrame::filled(640, 480, 1200);
        let c = f.crop(Rect::new(90, 60, 460, 370)).unwrap();
        assert_eq!((c.width(), c.height()), (460, 370));
    }

    #[test]
    fn crop_out_of_bounds() {
        let f = ramp(4, 4);
        assert!(matches!(
            f.crop(Rect::new(3, 0, 2, 1)),
            Err(Error::RectOutOfBounds { .. })
        ));
        assert!(f.crop(Rect::new(0, 0, 0, 1)).is_err());
    }

    #[test]
    fn valid_pixels() {
        let f = DepthFrame::new(2, 2, vec![0, 500, 500, 700]).unwrap();
        assert_eq!(f.valid_pixel_count(), 3);
        assert_eq!(DepthFrame::filled(3, 3, 0).valid_pixel_count(), 0);
    }

    #[test]
    fn rect_iou() {
        let a = Rect::new(0, 0, 10, 10);
        assert_eq!(a.iou(&a), 1.0);
        assert_eq!(a.iou(&Rect::new(10, 0, 5, 5)), 0.0);
        let b = Rect::new(5, 0, 10, 10);
        assert!((a.iou(&b) - 50.0 / 150.0).abs() < 1e-12);
    }
}
