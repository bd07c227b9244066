//! Restriction of a resolution to an open subfan, followed by Morse
//! reduction down to the resolution built on the subfan itself.

use num_traits::Zero;
use toric_core::{DivisorClass, Int, PicGroup, Poly, Rat, StackyFan};
use toric_morse::{exit_path_sheaf, morse_reduce, rho_positive_matching, ChainComplex, HomotopyData, QuiverSheaf};
use toric_strat::{Stratification, DEFAULT_CODIM_BOUND};

use crate::complex::{AugmentedComplex, LineBundleComplex};
use crate::error::{ResolutionError, Result};
use crate::iso::find_signed_isomorphism;

#[derive(Clone, Debug)]
pub struct ChartRestriction {
    /// The subfan on the remaining rays (re-indexed in increasing order).
    pub chart_fan: StackyFan,
    /// Ambient index of each remaining ray.
    pub kept: Vec<usize>,
    /// Same quiver, bundles pulled back, removed variables set to 1.
    pub restricted: LineBundleComplex,
    pub reduced: LineBundleComplex,
    /// Between `restricted` (big) and `reduced` (small).
    pub homotopy: HomotopyData<Poly>,
    /// Position of the identity-stratum summand in degree 0 of `reduced`.
    pub alpha: usize,
}

/// Removes the given rays one at a time: each step reduces along the
/// ρ-positive matching and identifies the result with the complex of the
/// stratification in which `ρ` no longer participates.
pub fn restrict_to_chart(c: &AugmentedComplex, removed: &[usize]) -> Result<ChartRestriction> {
    let fan = &c.complex.fan;
    let n = fan.num_rays();
    let kept: Vec<usize> = (0..n).filter(|r| !removed.contains(r)).collect();
    let chart_fan = fan.subfan(&kept)?;
    let chart_pic = PicGroup::of(&chart_fan);

    let mut ones: Vec<Option<Rat>> = vec![None; n];
    for &r in removed {
        ones[r] = Some(Rat::from_integer(Int::from(1)));
    }
    let to_chart = |d: &DivisorClass| -> DivisorClass {
        let v: Vec<Int> = kept.iter().map(|&r| d.coefficients[r].clone()).collect();
        chart_pic.canonical(&v)
    };
    let relabel = |p: &Poly, specialize: &[Option<Rat>]| -> Poly {
        let s = p.specialize(specialize);
        let mut map = vec![0; n];
        for (i, &r) in kept.iter().enumerate() {
            map[r] = i;
        }
        // removed variables no longer occur after specialization
        s.relabel(kept.len(), &map)
    };
    let transport = |cx: &ChainComplex<DivisorClass, Poly>| -> ChainComplex<DivisorClass, Poly> {
        ChainComplex {
            ctx: kept.len(),
            terms: cx.terms.iter().map(|(&k, t)| (k, t.iter().map(&to_chart).collect())).collect(),
            differentials: cx
                .differentials
                .iter()
                .map(|(&k, m)| (k, m.map(|p| relabel(p, &ones))))
                .filter(|(_, m)| !m.is_zero())
                .collect(),
        }
    };

    let restricted = transport(&c.complex.complex);
    let mut s = Stratification::of(&c.target, DEFAULT_CODIM_BOUND.max(c.target.codim()))?;

    // the stored complex may differ from the freshly assembled one by a
    // signed permutation; absorb it into the homotopy data
    let (start, start_alpha) = stratification_complex(&s, &transport);
    let iso = find_signed_isomorphism(&restricted, &start, &[(0, c.alpha, start_alpha)])
        .ok_or(ResolutionError::RestrictionMismatch { ray: usize::MAX })?;
    let mut homotopy = iso.homotopy_data(&kept.len());
    let mut current = start;
    let mut alpha = start_alpha;

    let mut gone: Vec<Option<Rat>> = vec![None; n];
    for &rho in removed {
        gone[rho] = Some(Rat::from_integer(Int::from(1)));
        let matching = rho_positive_matching(&s, rho)?;
        let (q, sheaf) = exit_path_sheaf(&s.quiver);
        let sheaf = QuiverSheaf {
            ctx: sheaf.ctx,
            objects: sheaf.objects,
            values: sheaf.values.iter().map(|p| p.specialize(&gone)).collect(),
        };
        let red = morse_reduce(&q, &matching, &sheaf)?;
        let reduced = transport(&red.reduced);
        let crit_alpha = red.critical.iter().position(|&v| v == s.quiver.identity_stratum);

        let mut torus = s.torus.clone();
        torus.ray_functionals[rho] = vec![Int::zero(); torus.codim];
        torus.inactive_rays.push(rho);
        torus.inactive_rays.sort_unstable();
        let next = Stratification::of_torus(torus, DEFAULT_CODIM_BOUND.max(s.torus.codim))?;
        let (next_complex, next_alpha) = stratification_complex(&next, &transport);

        // α stays critical: it lies on no ρ-hyperplane crossing
        let red_alpha = crit_alpha
            .map(|i| red.reduced_quiver.positions()[i])
            .ok_or(ResolutionError::RestrictionMismatch { ray: rho })?;
        let iso = find_signed_isomorphism(&reduced, &next_complex, &[(0, red_alpha, next_alpha)])
            .ok_or(ResolutionError::RestrictionMismatch { ray: rho })?;
        let step = HomotopyData {
            projection: red.homotopy.projection.iter().map(|(&k, m)| (k, m.map(|p| relabel(p, &ones)))).collect(),
            inclusion: red.homotopy.inclusion.iter().map(|(&k, m)| (k, m.map(|p| relabel(p, &ones)))).collect(),
            homotopy: red.homotopy.homotopy.iter().map(|(&k, m)| (k, m.map(|p| relabel(p, &ones)))).collect(),
        };
        let step = step.then(&iso.homotopy_data(&kept.len()), &current, &reduced, &next_complex);
        homotopy = homotopy.then(&step, &restricted, &current, &next_complex);
        current = next_complex;
        alpha = next_alpha;
        s = next;
    }

    Ok(ChartRestriction {
        restricted: LineBundleComplex::new(chart_fan.clone(), restricted),
        reduced: LineBundleComplex::new(chart_fan.clone(), current),
        chart_fan,
        kept,
        homotopy,
        alpha,
    })
}

fn stratification_complex(
    s: &Stratification,
    transport: &dyn Fn(&ChainComplex<DivisorClass, Poly>) -> ChainComplex<DivisorClass, Poly>,
) -> (ChainComplex<DivisorClass, Poly>, usize) {
    let (q, sheaf) = exit_path_sheaf(&s.quiver);
    let complex = toric_morse::sheaf_complex(&q, &sheaf).expect("exit-path quivers are oriented");
    (transport(&complex), q.positions()[s.quiver.identity_stratum])
}

/// Removes, for a maximal cone, every ray outside it.
pub fn restrict_to_cone(c: &AugmentedComplex, cone: &[usize]) -> Result<ChartRestriction> {
    let removed: Vec<usize> = (0..c.complex.fan.num_rays()).filter(|r| !cone.contains(r)).collect();
    restrict_to_chart(c, &removed)
}
