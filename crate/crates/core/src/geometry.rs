//! Bounding boxes and the relative-displacement state encodings.

use core::fmt;

/// Rejected box construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryError {
    /// Width or height was not strictly positive.
    NonPositiveSize { w: f64, h: f64 },
    /// A coordinate was NaN or infinite.
    NonFinite,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::NonPositiveSize { w, h } => {
                write!(f, "box size must be positive, got w={w}, h={h}")
            }
            GeometryError::NonFinite => f.write_str("box coordinates must be finite"),
        }
    }
}

impl core::error::Error for GeometryError {}

/// Axis-aligned box with top-left corner `(x, y)` and size `(w, h)` in pixels.
///
/// Construction rejects degenerate sizes, so every `BoundingBox` in
/// circulation has `w > 0`, `h > 0` and finite fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

/// Box center in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Center {
    pub cx: f64,
    pub cy: f64,
}

/// Center displacement between consecutive frames, in units of box size.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Displacement {
    pub dx: f64,
    pub dy: f64,
}

impl Displacement {
    pub const ZERO: Displacement = Displacement { dx: 0.0, dy: 0.0 };

    pub const fn new(dx: f64, dy: f64) -> Self {
        Displacement { dx, dy }
    }

    /// Euclidean length of the displacement.
    pub fn magnitude(&self) -> f64 {
        libm::hypot(self.dx, self.dy)
    }

    pub fn is_finite(&self) -> bool {
        self.dx.is_finite() && self.dy.is_finite()
    }
}

impl core::ops::Neg for Displacement {
    type Output = Displacement;

    fn neg(self) -> Displacement {
        Displacement::new(-self.dx, -self.dy)
    }
}

impl BoundingBox {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Result<Self, GeometryError> {
        if !(x.is_finite() && y.is_finite() && w.is_finite() && h.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if w <= 0.0 || h <= 0.0 {
            return Err(GeometryError::NonPositiveSize { w, h });
        }
        Ok(BoundingBox { x, y, w, h })
    }

    /// Box of size `(w, h)` centered at `(cx, cy)`.
    pub fn from_center(cx: f64, cy: f64, w: f64, h: f64) -> Result<Self, GeometryError> {
        BoundingBox::new(cx - w / 2.0, cy - h / 2.0, w, h)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn center(&self) -> Center {
        Center {
            cx: self.x + self.w / 2.0,
            cy: self.y + self.h / 2.0,
        }
    }

    /// Center change normalized by the previous box size (`self` is the
    /// previous box).
    pub fn displacement_prev_norm(&self, cur: &BoundingBox) -> Displacement {
        let (p, c) = (self.center(), cur.center());
        Displacement::new((c.cx - p.cx) / self.w, (c.cy - p.cy) / self.h)
    }

    /// Center change normalized by the mean of the previous and current box
    /// sizes.
    pub fn displacement_avg_norm(&self, cur: &BoundingBox) -> Displacement {
        let (p, c) = (self.center(), cur.center());
        Displacement::new(
            (c.cx - p.cx) / (0.5 * self.w + 0.5 * cur.w),
            (c.cy - p.cy) / (0.5 * self.h + 0.5 * cur.h),
        )
    }

    /// Inverse of [`displacement_prev_norm`](Self::displacement_prev_norm) at
    /// fixed size: shifts the center by `(d.dx * w, d.dy * h)`.
    pub fn apply_displacement(&self, d: Displacement) -> BoundingBox {
        BoundingBox {
            x: self.x + d.dx * self.w,
            y: self.y + d.dy * self.h,
            w: self.w,
            h: self.h,
        }
    }

    /// Same center, size multiplied by `factor`. Panics unless `factor > 0`.
    pub fn scaled_about_center(&self, factor: f64) -> BoundingBox {
        assert!(factor > 0.0 && factor.is_finite(), "scale factor must be positive");
        let c = self.center();
        let (w, h) = (self.w * factor, self.h * factor);
        BoundingBox {
            x: c.cx - w / 2.0,
            y: c.cy - h / 2.0,
            w,
            h,
        }
    }

    pub fn translated(&self, ox: f64, oy: f64) -> BoundingBox {
        BoundingBox {
            x: self.x + ox,
            y: self.y + oy,
            ..*self
        }
    }

    /// Positions and sizes multiplied by `k` (scene rescaling about the
    /// origin). Panics unless `k > 0`.
    pub fn scaled(&self, k: f64) -> BoundingBox {
        assert!(k > 0.0 && k.is_finite(), "scale factor must be positive");
        BoundingBox {
            x: self.x * k,
            y: self.y * k,
            w: self.w * k,
            h: self.h * k,
        }
    }

    pub fn intersection_area(&self, other: &BoundingBox) -> f64 {
        let iw = (self.x + self.w).min(other.x + other.w) - self.x.max(other.x);
        let ih = (self.y + self.h).min(other.y + other.h) - self.y.max(other.y);
        if iw <= 0.0 || ih <= 0.0 {
            0.0
        } else {
            iw * ih
        }
    }
}

impl fmt::Display for BoundingBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x, self.y, self.w, self.h)
    }
}
