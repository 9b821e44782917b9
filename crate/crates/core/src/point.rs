use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};

/// A point of `R^d`, `d >= 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: coords.len(),
            });
        }
        Ok(Point { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn origin(dim: usize) -> Self {
        Point {
            coords: alloc::vec![0.0; dim.max(2)],
        }
    }

    /// `(0, …, 0, value)`, the point the paper writes as `ā` for `value = a`.
    pub fn vertical(dim: usize, value: f64) -> Self {
        let mut p = Self::origin(dim);
        let d = p.dim();
        p.coords[d - 1] = value;
        p
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(coords.len() >= 2);
        Point { coords }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// The first `d - 1` coordinates.
    #[inline]
    pub fn horizontal(&self) -> &[f64] {
        &self.coords[..self.coords.len() - 1]
    }

    #[inline]
    pub fn last(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    pub fn norm(&self) -> f64 {
        euclidean_norm(&self.coords)
    }

    pub fn max_norm(&self) -> f64 {
        max_norm(&self.coords)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        let mut s = 0.0;
        for (x, y) in self.coords.iter().zip(&other.coords) {
            s += (x - y) * (x - y);
        }
        libm::sqrt(s)
    }

    /// `|x + (0, …, 0, a)|`.
    pub fn shifted_norm(&self, a: f64) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for x in &self.coords[..d - 1] {
            s += x * x;
        }
        let z = self.coords[d - 1] + a;
        libm::sqrt(s + z * z)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point {
            coords: self.coords.iter().zip(&other.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point {
            coords: self.coords.iter().zip(&other.coords).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

pub(crate) fn euclidean_norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum::<f64>())
}

pub(crate) fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}
