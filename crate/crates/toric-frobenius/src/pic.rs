//! Integer coordinates on a free Picard group.

use num_traits::{ToPrimitive, Zero};
use toric_core::{DivisorClass, Int, PicGroup, StackyFan};

use crate::error::{FrobeniusError, Result};

/// Coordinates of `Pic(X) ≅ Z^r` with respect to the classes of chosen rays.
#[derive(Clone, Debug)]
pub struct PicCoordinates {
    pic: PicGroup,
    generators: Vec<usize>,
    /// Column `ρ` holds the coordinates of `[D_ρ]`.
    images: Vec<Vec<Int>>,
    small: Vec<Vec<i64>>,
}

impl PicCoordinates {
    /// The lexicographically first set of rays whose classes form a basis.
    pub fn standard(fan: &StackyFan) -> Result<Self> {
        let pic = PicGroup::of(fan);
        let structure = pic.structure();
        if !structure.torsion.is_empty() {
            return Err(FrobeniusError::PicNotFree(structure.torsion.iter().map(|t| t.to_string()).collect()));
        }
        let r = structure.free_rank;
        let n = fan.num_rays();
        let mut subset: Vec<usize> = (0..r).collect();
        loop {
            if let Ok(c) = Self::with_generators(fan, &subset) {
                return Ok(c);
            }
            // next r-subset of 0..n in lexicographic order
            let mut i = r;
            loop {
                if i == 0 {
                    return Err(FrobeniusError::NotAPicBasis);
                }
                i -= 1;
                if subset[i] < n - r + i {
                    break;
                }
            }
            subset[i] += 1;
            for j in i + 1..r {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }

    /// Coordinates with respect to the classes `[D_g]`, `g ∈ generators`.
    pub fn with_generators(fan: &StackyFan, generators: &[usize]) -> Result<Self> {
        let pic = PicGroup::of(fan);
        let structure = pic.structure();
        if !structure.torsion.is_empty() {
            return Err(FrobeniusError::PicNotFree(structure.torsion.iter().map(|t| t.to_string()).collect()));
        }
        if generators.len() != structure.free_rank || generators.iter().any(|&g| g >= fan.num_rays()) {
            return Err(FrobeniusError::NotAPicBasis);
        }
        let n = fan.num_rays();
        let mut images = Vec::with_capacity(n);
        for r in 0..n {
            let e: Vec<Int> = (0..n).map(|i| Int::from((i == r) as i64)).collect();
            images.push(pic.coordinates(&e, generators).ok_or(FrobeniusError::NotAPicBasis)?);
        }
        let small = images
            .iter()
            .map(|v| v.iter().map(|x| x.to_i64().ok_or(FrobeniusError::Overflow)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(PicCoordinates { pic, generators: generators.to_vec(), images, small })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn num_rays(&self) -> usize {
        self.images.len()
    }

    /// Coordinates of the class of the divisor `Σ d_ρ D_ρ`.
    pub fn coords(&self, d: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.rank()];
        for (x, img) in d.iter().zip(&self.images) {
            for (o, y) in out.iter_mut().zip(img) {
                *o += x * y;
            }
        }
        out
    }

    /// Same as [`coords`](Self::coords) on machine integers.
    pub fn coords_i64(&self, d: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.rank()];
        for (&x, img) in d.iter().zip(&self.small) {
            for (o, &y) in out.iter_mut().zip(img) {
                *o += x * y;
            }
        }
        out
    }

    /// Coordinates of `[D_ρ]`.
    pub fn ray_image(&self, ray: usize) -> &[Int] {
        &self.images[ray]
    }

    /// The class with the given coordinates.
    pub fn class_of(&self, coords: &[Int]) -> DivisorClass {
        let mut d = vec![Int::zero(); self.num_rays()];
        for (&g, c) in self.generators.iter().zip(coords) {
            d[g] = c.clone();
        }
        self.pic.canonical(&d)
    }

    pub fn pic(&self) -> &PicGroup {
        &self.pic
    }
}
