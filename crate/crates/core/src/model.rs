//! Intersection data of a closed geodesic with a simple multicurve.
//!
//! A configuration is the ordered list of points where the geodesic `γ`
//! crosses the multicurve `β`, each described by its offset along `γ`
//! from the base point and the crossing angle, together with the length
//! of `γ` itself. Which component of the multicurve a point belongs to is
//! irrelevant for the derivative formulas, so it is not recorded.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One transverse crossing of `β` with `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntersectionPoint {
    /// Distance along `γ` from the base point.
    #[serde(rename = "l")]
    pub offset: f64,
    /// Crossing angle in radians, in `(0, π)`.
    #[serde(rename = "theta")]
    pub angle: f64,
}

impl IntersectionPoint {
    pub fn new(offset: f64, angle: f64) -> Self {
        Self { offset, angle }
    }

    /// The complex coordinate `l + iθ`.
    pub fn coordinate(&self) -> Complex64 {
        Complex64::new(self.offset, self.angle)
    }
}

/// A validated intersection configuration.
///
/// Invariants, checked on construction:
/// - `total_length > 0`;
/// - the first offset is exactly `0` and offsets are strictly increasing
///   and stay below `total_length`;
/// - every angle lies in `(0, π)`.
///
/// A configuration without points (disjoint curves) is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionConfig {
    total_length: f64,
    points: Vec<IntersectionPoint>,
}

impl IntersectionConfig {
    pub fn new(total_length: f64, points: Vec<IntersectionPoint>) -> Result<Self> {
        validate(total_length, &points)?;
        Ok(Self {
            total_length,
            points,
        })
    }

    /// Builds a configuration from parallel offset and angle arrays.
    pub fn from_arrays(total_length: f64, offsets: &[f64], angles: &[f64]) -> Result<Self> {
        if offsets.len() != angles.len() {
            return Err(Error::LengthMismatch {
                what: "angles",
                got: angles.len(),
                expected: offsets.len(),
            });
        }
        let points = offsets
            .iter()
            .zip(angles)
            .map(|(&l, &t)| IntersectionPoint::new(l, t))
            .collect();
        Self::new(total_length, points)
    }

    /// Geometric intersection number.
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Translation length of `γ`.
    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn points(&self) -> &[IntersectionPoint] {
        &self.points
    }

    pub fn offsets(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.offset).collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.angle).collect()
    }

    /// Distance along `γ` (in its orientation) from point `i` to point `j`.
    ///
    /// `l_ij = l_j - l_i` for `i < j`, `0` for `i == j`, and
    /// `L - l_ji` for `i > j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (li, lj) = (self.points[i].offset, self.points[j].offset);
        match i.cmp(&j) {
            std::cmp::Ordering::Less => lj - li,
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => self.total_length - (li - lj),
        }
    }

    /// Moves the base point to the intersection at zero-based `index`.
    ///
    /// Offsets become `(l_i - l_index) mod L`, and points are cyclically
    /// rotated so that the new base point comes first.
    pub fn relabel_base_point(&self, index: usize) -> Result<Self> {
        let n = self.n();
        if index >= n {
            return Err(Error::IndexOutOfRange { index, len: n });
        }
        let base = self.points[index].offset;
        let points = (0..n)
            .map(|m| {
                let src = (index + m) % n;
                let p = self.points[src];
                let offset = if src >= index {
                    p.offset - base
                } else {
                    p.offset - base + self.total_length
                };
                IntersectionPoint::new(offset, p.angle)
            })
            .collect();
        Self::new(self.total_length, points)
    }

    /// Replaces every angle `θ` by `π - θ` (reverses the orientation of `β`).
    pub fn reflected(&self) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| IntersectionPoint::new(p.offset, PI - p.angle))
            .collect();
        Self::new(self.total_length, points)
    }
}

/// Checks the configuration invariants without taking ownership.
pub fn validate(total_length: f64, points: &[IntersectionPoint]) -> Result<()> {
    if !(total_length.is_finite() && total_length > 0.0) {
        return Err(Error::LengthOutOfRange {
            offset: 0.0,
            total_length,
        });
    }
    for (index, p) in points.iter().enumerate() {
        if !(p.angle > 0.0 && p.angle < PI) {
            return Err(Error::DegenerateAngle {
                index,
                angle: p.angle,
            });
        }
        let ordered = if index == 0 {
            p.offset == 0.0
        } else {
            p.offset > points[index - 1].offset
        };
        if !ordered {
            return Err(Error::UnorderedLengths { index });
        }
        if p.offset.is_nan() || p.offset >= total_length {
            return Err(Error::LengthOutOfRange {
                offset: p.offset,
                total_length,
            });
        }
    }
    Ok(())
}
