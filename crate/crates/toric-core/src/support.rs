//! Support functions, divisors and Picard classes.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{CoreError, Result};
use crate::fan::StackyFan;
use crate::lattice::{self, EchelonBasis, IntMatrix};
use crate::morphism::StackyMorphism;
use crate::{Int, Rat};

/// Integer values of a support function on the primitive ray generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportFunction {
    pub values: Vec<Int>,
}

impl SupportFunction {
    pub fn new(values: Vec<Int>) -> Self {
        SupportFunction { values }
    }

    pub fn zero(num_rays: usize) -> Self {
        SupportFunction { values: vec![Int::zero(); num_rays] }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        SupportFunction { values: values.iter().map(|&x| Int::from(x)).collect() }
    }

    /// The divisor `D_F = Σ -F(u_ρ) D_ρ`.
    pub fn divisor(&self) -> Vec<Int> {
        divisor_of_support(self)
    }

    /// Value of the piecewise-linear extension at `v ∈ L`, if `v` lies in the
    /// support of `fan`.
    pub fn evaluate(&self, fan: &StackyFan, v: &[Int]) -> Option<Rat> {
        let (cone, coeffs) = fan.locate(v)?;
        Some(cone.iter().zip(coeffs).fold(Rat::zero(), |acc, (&r, a)| {
            acc + a * Rat::from_integer(self.values[r].clone())
        }))
    }
}

pub fn divisor_of_support(f: &SupportFunction) -> Vec<Int> {
    f.values.iter().map(|x| -x.clone()).collect()
}

/// A divisor class stored by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub coefficients: Vec<Int>,
}

impl DivisorClass {
    pub fn is_trivial(&self) -> bool {
        self.coefficients.iter().all(|x| x.is_zero())
    }
}

impl std::fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "O(")?;
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The Picard group `Z^{Σ(1)} / β*M` of a stacky fan, with its canonical
/// reduction (Hermite form of the relation rows, earliest pivots first).
#[derive(Clone, Debug)]
pub struct PicGroup {
    relations: EchelonBasis<Int>,
    num_rays: usize,
}

impl PicGroup {
    pub fn of(fan: &StackyFan) -> Self {
        PicGroup { relations: fan.relation_lattice(), num_rays: fan.num_rays() }
    }

    pub fn num_rays(&self) -> usize {
        self.num_rays
    }

    pub fn canonical(&self, d: &[Int]) -> DivisorClass {
        assert_eq!(d.len(), self.num_rays, "divisor length must match ray count");
        DivisorClass { coefficients: self.relations.reduce(d).0 }
    }

    pub fn class_of_support(&self, f: &SupportFunction) -> DivisorClass {
        self.canonical(&f.divisor())
    }

    pub fn same_class(&self, a: &[Int], b: &[Int]) -> bool {
        self.canonical(a) == self.canonical(b)
    }

    /// The relation rows (divisors of characters) in Hermite form.
    pub fn relations(&self) -> &EchelonBasis<Int> {
        &self.relations
    }

    /// Free rank and torsion of Pic.
    pub fn structure(&self) -> lattice::Cokernel<Int> {
        let rows = self.relations.rows.clone();
        if rows.is_empty() {
            return lattice::Cokernel { free_rank: self.num_rays, torsion: vec![] };
        }
        lattice::cokernel_structure(&IntMatrix::from_rows(rows, self.num_rays).transpose())
    }

    pub fn is_free(&self) -> bool {
        self.structure().torsion.is_empty()
    }

    /// Coordinates of the class of `d` with respect to the classes of the given
    /// rays (`d ≡ Σ c_j D_{g_j}`), when those classes form a basis of a free Pic.
    pub fn coordinates(&self, d: &[Int], generators: &[usize]) -> Option<Vec<Int>> {
        // Solve d = Σ c_j e_{g_j} + Σ k_i relation_i over Z.
        let n = self.num_rays;
        let mut cols: Vec<Vec<Int>> = generators
            .iter()
            .map(|&g| (0..n).map(|r| Int::from((r == g) as i64)).collect())
            .collect();
        cols.extend(self.relations.rows.iter().cloned());
        let a = IntMatrix::from_cols(&cols, n);
        let x = lattice::solve_integer(&a, d)?;
        Some(x[..generators.len()].to_vec())
    }
}

pub fn pic_canonical_form(d: &[Int], fan: &StackyFan) -> DivisorClass {
    PicGroup::of(fan).canonical(d)
}

/// `m ∈ Δ_β(F)`: `⟨m, β u_ρ⟩ ≥ F(u_ρ)` for every ray.
pub fn delta_beta_contains(fan: &StackyFan, f: &SupportFunction, m: &[Int]) -> bool {
    fan.beta_rays().iter().zip(&f.values).all(|(bu, fv)| lattice::dot(m, bu) >= *fv)
}

/// `β*m` as a function on rays: `ρ ↦ ⟨m, β u_ρ⟩`.
pub fn character_values(fan: &StackyFan, m: &[Int]) -> Vec<Int> {
    fan.beta_rays().iter().map(|bu| lattice::dot(m, bu)).collect()
}

/// `(Φ*F)(u_ρ') = F(Φ u_ρ')`.
pub fn pullback_support(m: &StackyMorphism, f: &SupportFunction) -> Result<SupportFunction> {
    let mut values = Vec::with_capacity(m.source().num_rays());
    for (i, r) in m.source().rays().iter().enumerate() {
        let image = m.big_phi().apply(r);
        let v = f.evaluate(m.target(), &image).ok_or(CoreError::RayImageOutsideSupport { ray: i })?;
        if !v.is_integer() {
            return Err(CoreError::InvalidMorphism(format!(
                "support function is not integral at the image of ray {i}"
            )));
        }
        values.push(v.to_integer());
    }
    Ok(SupportFunction { values })
}

/// Pushforward along a finite quotient: one support function `Π_*(F - β*m)`
/// per class `[m] ∈ coker(π*: M' → M)`.
pub fn pushforward_support_finite_quotient(
    m: &StackyMorphism,
    f: &SupportFunction,
) -> Result<Vec<(Vec<Int>, SupportFunction)>> {
    if !m.classify().finite_quotient {
        return Err(CoreError::NotFiniteQuotient);
    }
    let reps = m.character_coset_representatives()?;
    Ok(reps
        .into_iter()
        .map(|rep| {
            let chi = character_values(m.source(), &rep);
            let values = f.values.iter().zip(&chi).map(|(a, b)| a - b).collect();
            (rep, SupportFunction { values })
        })
        .collect())
}

/// Exact ceiling of a rational.
pub fn ceil(q: &Rat) -> Int {
    q.ceil().to_integer()
}

/// Exact floor of a rational.
pub fn floor(q: &Rat) -> Int {
    q.floor().to_integer()
}

/// Floor of an integer quotient.
pub fn floor_div(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

/// `true` if all entries are nonnegative.
pub fn is_nonnegative(v: &[Int]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
