//! Non-regular grids: per-axis block extents and the prefix-sum map that
//! places the image block of each cell.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Along `x`; extents are block widths.
    Horizontal,
    /// Along `y`; extents are block heights.
    Vertical,
}

/// Extents for the coordinates `start..start + extents.len()` of one axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AxisProfile {
    start: i64,
    extents: Vec<usize>,
}

impl AxisProfile {
    pub fn new(start: i64, extents: Vec<usize>) -> Result<Self> {
        if extents.contains(&0) {
            return Err(Error::InvalidArgument(
                "profile extents must be at least 1".into(),
            ));
        }
        Ok(AxisProfile { start, extents })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.extents.len() as i64
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn extent(&self, coord: i64) -> Result<usize> {
        if coord < self.start || coord >= self.end() {
            return Err(self.out_of_range(coord));
        }
        Ok(self.extents[(coord - self.start) as usize])
    }

    pub fn total(&self) -> usize {
        self.extents.iter().sum()
    }

    /// Lower corner of the image block of coordinate `r`.
    ///
    /// `phi(0) = 0`, `phi(r) = sum of extents of 0..r` for `r > 0` and
    /// `phi(r) = -(sum of extents of r..0)` for `r < 0`.
    pub fn phi(&self, r: i64) -> Result<i64> {
        let (lo, hi) = if r >= 0 { (0, r) } else { (r, 0) };
        if lo == hi {
            return Ok(0);
        }
        if lo < self.start || hi > self.end() {
            return Err(self.out_of_range(if lo < self.start { lo } else { hi - 1 }));
        }
        let from = (lo - self.start) as usize;
        let to = (hi - self.start) as usize;
        let sum: usize = self.extents[from..to].iter().sum();
        Ok(if r >= 0 { sum as i64 } else { -(sum as i64) })
    }

    /// `phi` for every coordinate of the profile plus one past the end,
    /// assuming the profile starts at 0.
    pub(crate) fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        let mut out = Vec::with_capacity(self.extents.len() + 1);
        out.push(0);
        for e in &self.extents {
            acc += e;
            out.push(acc);
        }
        out
    }

    fn out_of_range(&self, coord: i64) -> Error {
        Error::OutOfRange {
            coord,
            start: self.start,
            end: self.end(),
        }
    }
}

/// Block extents along both axes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SizeProfile {
    pub horizontal: AxisProfile,
    pub vertical: AxisProfile,
}

impl SizeProfile {
    pub fn axis(&self, axis: Axis) -> &AxisProfile {
        match axis {
            Axis::Horizontal => &self.horizontal,
            Axis::Vertical => &self.vertical,
        }
    }

    pub fn phi(&self, r: i64, axis: Axis) -> Result<i64> {
        self.axis(axis).phi(r)
    }

    /// `(phi_h(x), phi_v(y))`.
    pub fn phi_point(&self, x: i64, y: i64) -> Result<(i64, i64)> {
        Ok((self.horizontal.phi(x)?, self.vertical.phi(y)?))
    }
}

/// `phi` of `profile` at `r` along `axis`.
pub fn phi(profile: &SizeProfile, r: i64, axis: Axis) -> Result<i64> {
    profile.phi(r, axis)
}
