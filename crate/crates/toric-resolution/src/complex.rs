//! Complexes of line bundles and the resolution `C_•(S^φ, O^φ)`.

use std::collections::BTreeMap;

use toric_core::{product_stacky_fan, smooth_stacky_chart_cover, DivisorClass, Int, PicGroup, Poly, StackyFan, StackyMorphism};
use toric_morse::{exit_path_sheaf, sheaf_complex, ChainComplex, Coefficient, SparseMatrix};
use toric_strat::{thomsen_collection, Stratification};

use crate::error::{ResolutionError, Result};

/// A bounded complex of line bundles on a stacky fan. Entries are
/// polynomials in the Cox variables, one variable per ray of `fan`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineBundleComplex {
    pub fan: StackyFan,
    pub complex: ChainComplex<DivisorClass, Poly>,
}

impl LineBundleComplex {
    pub fn new(fan: StackyFan, complex: ChainComplex<DivisorClass, Poly>) -> Self {
        LineBundleComplex { fan, complex }
    }

    /// `O` in degree 0 with zero differential.
    pub fn unit(fan: &StackyFan) -> Self {
        let mut c = ChainComplex::new(fan.num_rays());
        c.terms.insert(0, vec![PicGroup::of(fan).canonical(&vec![Int::from(0); fan.num_rays()])]);
        LineBundleComplex { fan: fan.clone(), complex: c }
    }

    pub fn nvars(&self) -> usize {
        self.fan.num_rays()
    }

    pub fn terms(&self, k: i64) -> &[DivisorClass] {
        self.complex.terms.get(&k).map_or(&[], |t| t.as_slice())
    }

    pub fn d(&self, k: i64) -> SparseMatrix<Poly> {
        self.complex.d(k)
    }

    pub fn ranks(&self) -> Vec<(i64, usize)> {
        self.complex.ranks()
    }

    /// Highest degree carrying a nonzero term.
    pub fn length(&self) -> i64 {
        self.complex.max_degree()
    }

    /// Human-readable listing: terms per degree, then the nonzero entries
    /// of each differential with variables named `x0, x1, …`.
    pub fn describe(&self) -> String {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("x{i}")).collect();
        let mut out = String::new();
        for (k, t) in &self.complex.terms {
            let list: Vec<String> = t.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("C_{k}: {}\n", list.join(" ⊕ ")));
        }
        for (k, m) in &self.complex.differentials {
            out.push_str(&format!("d_{k}:"));
            for (&(r, c), p) in m.entries() {
                out.push_str(&format!(" [{r},{c}]={}", p.display_with(&names)));
            }
            out.push('\n');
        }
        out
    }

    /// Evaluates every entry at a point of Cox coordinates.
    pub fn specialize(&self, point: &[toric_core::Rat]) -> ChainComplex<DivisorClass, toric_core::Rat> {
        self.complex.map_entries((), |p| p.evaluate(point))
    }
}

/// A resolution together with its augmentation `α: O → C_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedComplex {
    pub complex: LineBundleComplex,
    /// Index inside `C_0` of the summand `O` hit by the unit.
    pub alpha: usize,
    pub target: StackyMorphism,
}

/// `C_k = ⊕_{dim σ = k} O(bF(σ))`, with differential assembled from the
/// exit edges of the stratification of `φ`.
pub fn build_resolution(phi: &StackyMorphism, codim_bound: usize) -> Result<AugmentedComplex> {
    smooth_stacky_chart_cover(phi.target())?;
    let s = Stratification::of(phi, codim_bound)?;
    let (complex, alpha) = complex_of_stratification(&s)?;
    Ok(AugmentedComplex { complex: LineBundleComplex::new(phi.target().clone(), complex), alpha, target: phi.clone() })
}

/// The cellular complex of a stratification and the position of the
/// identity stratum in degree 0.
pub fn complex_of_stratification(s: &Stratification) -> Result<(ChainComplex<DivisorClass, Poly>, usize)> {
    let (q, sheaf) = exit_path_sheaf(&s.quiver);
    let complex = sheaf_complex(&q, &sheaf)?;
    let alpha = q.positions()[s.quiver.identity_stratum];
    Ok((complex, alpha))
}

/// The resolution of the diagonal `X → X × X`.
pub fn diagonal_resolution(fan: &StackyFan, codim_bound: usize) -> Result<AugmentedComplex> {
    build_resolution(&StackyMorphism::diagonal(fan), codim_bound)
}

/// External tensor product on the product fan. Summands of degree `n` are
/// ordered by `(p, i, j)` with `p + q = n`; `d(a⊗b) = da⊗b + (−1)^p a⊗db`.
pub fn tensor_resolutions(a: &LineBundleComplex, b: &LineBundleComplex) -> LineBundleComplex {
    let fan = product_stacky_fan(&a.fan, &b.fan);
    let pic = PicGroup::of(&fan);
    let (na, nb) = (a.nvars(), b.nvars());
    let nvars = na + nb;
    let left: Vec<usize> = (0..na).collect();
    let right: Vec<usize> = (na..nvars).collect();

    // position of (p, q, i, j) inside degree p + q
    let mut index: BTreeMap<(i64, i64, usize, usize), usize> = BTreeMap::new();
    let mut out = ChainComplex::new(nvars);
    for (&p, ta) in &a.complex.terms {
        for (&q, tb) in &b.complex.terms {
            let terms = out.terms.entry(p + q).or_insert_with(Vec::new);
            for (i, da) in ta.iter().enumerate() {
                for (j, db) in tb.iter().enumerate() {
                    let mut d = da.coefficients.clone();
                    d.extend(db.coefficients.iter().cloned());
                    index.insert((p, q, i, j), terms.len());
                    terms.push(pic.canonical(&d));
                }
            }
        }
    }
    let mut diffs: BTreeMap<i64, SparseMatrix<Poly>> = BTreeMap::new();
    for (&p, ta) in &a.complex.terms {
        for (&q, tb) in &b.complex.terms {
            let n = p + q;
            let m = diffs.entry(n).or_insert_with(|| SparseMatrix::new(out.rank(n - 1), out.rank(n)));
            for (&(r, c), v) in a.complex.d(p).entries() {
                let v = v.relabel(nvars, &left);
                for j in 0..tb.len() {
                    m.add_to(index[&(p - 1, q, r, j)], index[&(p, q, c, j)], &v);
                }
            }
            for (&(r, c), v) in b.complex.d(q).entries() {
                let v = v.relabel(nvars, &right);
                let v = if p.rem_euclid(2) == 1 { v.negated() } else { v };
                for i in 0..ta.len() {
                    m.add_to(index[&(p, q - 1, i, r)], index[&(p, q, i, c)], &v);
                }
            }
        }
    }
    out.differentials = diffs.into_iter().filter(|(_, m)| !m.is_zero()).collect();
    LineBundleComplex { fan, complex: out }
}

/// Exact check of `d ∘ d = 0`.
pub fn check_d_squared(c: &LineBundleComplex) -> bool {
    c.complex.is_d_squared_zero()
}

/// First entry whose monomials do not all have divisor equal to
/// (target class) − (source class) in Pic.
pub fn check_homogeneity(c: &LineBundleComplex) -> Result<()> {
    let pic = PicGroup::of(&c.fan);
    for (&k, d) in &c.complex.differentials {
        let src = c.terms(k);
        let dst = c.terms(k - 1);
        for (&(r, col), p) in d.entries() {
            for (e, _) in p.terms() {
                let mut v = src[col].coefficients.clone();
                for (x, &a) in v.iter_mut().zip(e) {
                    *x += Int::from(a);
                }
                if pic.canonical(&v) != dst[r] {
                    return Err(ResolutionError::Inhomogeneous { degree: k, row: r, col });
                }
            }
        }
    }
    Ok(())
}

/// Whether every summand lies in the Thomsen collection of the fan.
pub fn check_thomsen_membership(c: &LineBundleComplex, codim_bound: usize) -> Result<bool> {
    let thomsen = thomsen_collection(&c.fan, codim_bound)?;
    Ok(c.complex.terms.values().flatten().all(|d| thomsen.contains(d)))
}

/// `Σ (−1)^k rank C_k`.
pub fn alternating_rank_sum(c: &LineBundleComplex) -> i64 {
    c.complex.euler_characteristic()
}

/// `d_1` composed with the augmentation: the `α` row of `d_1` must vanish
/// after pairing with the cokernel presentation. Concretely the image of
/// `d_1` is contained in the kernel of `C_0 → O_Y`, which at the torus
/// identity evaluates every entry to zero.
pub fn augmentation_is_cocycle(c: &AugmentedComplex) -> bool {
    let n = c.complex.nvars();
    let one = vec![toric_core::Rat::from_integer(Int::from(1)); n];
    let d1 = c.complex.d(1);
    // sum over C_0 of the entries evaluated at the identity point
    (0..d1.cols).all(|col| {
        let mut total = toric_core::Rat::from_integer(Int::from(0));
        for r in 0..d1.rows {
            if let Some(p) = d1.get(r, col) {
                total += p.evaluate(&one);
            }
        }
        num_traits::Zero::is_zero(&total)
    })
}
