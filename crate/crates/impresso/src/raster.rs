//! Image containers: interleaved 8-bit sRGB rasters and floating-point planes.

use crate::scalar::Scalar;

/// Interleaved 8-bit sRGB image, row-major, `data.len() == width * height * 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    /// Wraps raw interleaved RGB bytes.
    ///
    /// Panics if either dimension is zero or the buffer length does not
    /// equal `width * height * 3`.
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert!(
            width >= 1 && height >= 1,
            "image dimensions must be at least 1x1"
        );
        assert_eq!(
            data.len(),
            width * height * 3,
            "buffer length must be width*height*3"
        );
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    /// RGB triple at pixel column `x`, row `y`.
    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

/// Single floating-point plane, row-major, `data.len() == width * height`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Scalar> Plane<T> {
    /// Wraps an existing buffer. Panics on a zero dimension or length mismatch.
    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Self {
        assert!(
            width >= 1 && height >= 1,
            "plane dimensions must be at least 1x1"
        );
        assert_eq!(
            data.len(),
            width * height,
            "buffer length must be width*height"
        );
        Self {
            width,
            height,
            data,
        }
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::from_vec(width, height, vec![T::zero(); width * height])
    }

    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self::from_vec(width, height, vec![value; width * height])
    }

    /// Builds a plane by evaluating `f(col, row)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(col, row));
            }
        }
        Self::from_vec(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> T {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.width + col] = value;
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.width..(row + 1) * self.width]
    }

    /// Arithmetic mean over all pixels.
    pub fn mean(&self) -> T {
        let mut sum = T::zero();
        for &v in &self.data {
            sum += v;
        }
        sum / crate::scalar::cast(self.data.len() as f64)
    }

    /// Copies the `size_w` x `size_h` window whose top-left corner is at
    /// (`row`, `col`). Panics if the window leaves the plane.
    pub fn crop(&self, row: usize, col: usize, size_w: usize, size_h: usize) -> Plane<T> {
        assert!(
            col + size_w <= self.width && row + size_h <= self.height,
            "crop window must stay inside the plane"
        );
        let mut data = Vec::with_capacity(size_w * size_h);
        for r in row..row + size_h {
            let start = r * self.width + col;
            data.extend_from_slice(&self.data[start..start + size_w]);
        }
        Plane::from_vec(size_w, size_h, data)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Plane<T> {
        Plane {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// CIE L*a*b* image as three planes of identical dimensions.
///
/// `l` is nominally in [0, 100]; `a` and `b` are signed and unbounded.
/// Intermediate results (statistics transfer, sharpening) may push `l`
/// outside its nominal range; only conversion back to sRGB clamps.
#[derive(Debug, Clone, PartialEq)]
pub struct LabImage<T> {
    pub l: Plane<T>,
    pub a: Plane<T>,
    pub b: Plane<T>,
}

impl<T: Scalar> LabImage<T> {
    /// Bundles three planes. Panics if their dimensions differ.
    pub fn new(l: Plane<T>, a: Plane<T>, b: Plane<T>) -> Self {
        assert!(
            l.width() == a.width()
                && l.width() == b.width()
                && l.height() == a.height()
                && l.height() == b.height(),
            "L, a, b planes must share dimensions"
        );
        Self { l, a, b }
    }

    pub fn width(&self) -> usize {
        self.l.width()
    }

    pub fn height(&self) -> usize {
        self.l.height()
    }

    pub fn planes(&self) -> [&Plane<T>; 3] {
        [&self.l, &self.a, &self.b]
    }
}
