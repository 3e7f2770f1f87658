//! Discrete point sets: finite patches, cut-and-project sets and coordinate
//! lattices, with witness searches for approximate-subgroup covers, Delone
//! parameters, commensurability and coset splittings.

mod certificate;
mod coset;
pub(crate) mod delone;
mod io;
mod lattice;
mod modelset;
mod order;
mod patch;
mod window;

use std::fmt;

pub use certificate::{
    approx_subgroup_certificate, commensurability_witness, verify_cover, ApproxCertificate, CertConfig,
    Commensurability, CoverSide, Inclusion, WitnessSet,
};
pub use coset::{coset_split, union_density_locator, CosetReport, CosetSplit, LocatorResult};
pub use delone::{delone_parameters, Covering, DeloneConfig, DelonePair};
pub use io::{read_point_set, write_patch, PointSetFile};
pub use lattice::{rational_bounds, MAX_ENUMERATION, to_coords, to_rationals, AffineLattice, LatticeSet};
pub use modelset::{modelset_product, CrossCheck, ModelSet, ModelSetOp};
pub use order::{norm_key, sort_by_norm, NormKey};
pub use patch::{fmt_point, inverse_window, patch_product, product_window, FinitePatch};
pub use window::{Interval, Window};

use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;
use crate::groupmodels::{Coords, GroupModel};

/// Any of the supported discrete sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSet {
    Patch(FinitePatch),
    Model(ModelSet),
    Lattice(LatticeSet),
}

impl From<FinitePatch> for PointSet {
    fn from(p: FinitePatch) -> Self {
        PointSet::Patch(p)
    }
}

impl From<ModelSet> for PointSet {
    fn from(m: ModelSet) -> Self {
        PointSet::Model(m)
    }
}

impl From<LatticeSet> for PointSet {
    fn from(l: LatticeSet) -> Self {
        PointSet::Lattice(l)
    }
}

impl PointSet {
    pub fn model(&self) -> GroupModel {
        match self {
            PointSet::Patch(p) => p.model(),
            PointSet::Model(m) => m.model(),
            PointSet::Lattice(l) => l.model(),
        }
    }

    /// Exact membership where decidable; `None` outside a patch's
    /// complete window.
    pub fn contains(&self, p: &[ExactScalar]) -> Option<bool> {
        match self {
            PointSet::Patch(s) => s.contains(p),
            PointSet::Model(m) => Some(m.contains(p)),
            PointSet::Lattice(l) => Some(l.contains(p)),
        }
    }

    /// Whether [`PointSet::sample`] returns the full intersection with `w`.
    pub fn is_complete_on(&self, w: &Window) -> bool {
        match self {
            PointSet::Patch(p) => p.is_complete() && w.is_subset_of(p.window()),
            _ => true,
        }
    }

    /// Points in `w`, in norm order. Patches return what they store.
    pub fn sample(&self, w: &Window) -> Result<Vec<Coords>> {
        match self {
            PointSet::Patch(p) => p.sample(w, false),
            PointSet::Model(m) => m.points_in(w),
            PointSet::Lattice(l) => {
                let mut v = l.points_in(w)?;
                sort_by_norm(&l.model(), &mut v);
                Ok(v)
            }
        }
    }

    /// Points in `w`, failing unless the sample is guaranteed complete.
    pub fn sample_complete(&self, w: &Window) -> Result<Vec<Coords>> {
        if !self.is_complete_on(w) {
            return Err(Error::IncompletePatch);
        }
        self.sample(w)
    }

    /// `P ∩ w` as a patch.
    pub fn patch(&self, w: &Window) -> Result<FinitePatch> {
        let complete = self.is_complete_on(w);
        FinitePatch::collect(self.model(), self.sample(w)?, w.clone(), complete)
    }

    /// `(g·P) ∩ w`, computed as `g·(P ∩ g⁻¹w)`.
    pub fn translate_patch(&self, g: &[ExactScalar], w: &Window) -> Result<FinitePatch> {
        let model = self.model();
        let back = w.left_translate(&model, &model.inv(g)?)?;
        let complete = self.is_complete_on(&back);
        let pts = self
            .sample(&back)?
            .iter()
            .map(|p| model.mul(g, p))
            .collect::<Result<Vec<_>>>()?;
        FinitePatch::collect(model, pts, w.clone(), complete)
    }

    pub fn contains_identity(&self) -> Option<bool> {
        self.contains(&self.model().identity())
    }

    /// Checks `e ∈ P` and `P = P⁻¹` (exactly for model sets and lattices,
    /// on `w` for patches).
    pub fn check_symmetric_with_identity(&self, w: &Window) -> Result<()> {
        if self.contains_identity() != Some(true) {
            return Err(Error::MissingIdentity);
        }
        let model = self.model();
        match self {
            PointSet::Model(m) => {
                if !m.is_symmetric() {
                    return Err(Error::NotSymmetric(format!("window {}", m.window())));
                }
            }
            PointSet::Lattice(l) => {
                let o: Coords = to_coords(l.lattice().offset());
                if !l.contains(&model.inv(&o)?) {
                    return Err(Error::NotSymmetric(fmt_point(&o)));
                }
            }
            PointSet::Patch(_) => {
                for p in self.sample(w)? {
                    if self.contains(&model.inv(&p)?) != Some(true) {
                        return Err(Error::NotSymmetric(fmt_point(&p)));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSet::Patch(p) => write!(f, "patch of {} points on {}", p.len(), p.window()),
            PointSet::Model(m) => write!(f, "{m}"),
            PointSet::Lattice(l) => write!(f, "{l}"),
        }
    }
}

/// `P^k ∩ w` for `k ≥ 1`. Model sets use window arithmetic (with its
/// cross-check) and additive lattices are closed under the operation;
/// other sets fall back to products of samples, which is heuristic.
pub fn power_sample(set: &PointSet, k: usize, w: &Window) -> Result<(Vec<Coords>, bool, Vec<CrossCheck>)> {
    let model = set.model();
    match set {
        PointSet::Model(m) => {
            let r = w
                .radius()
                .ok_or_else(|| Error::UnboundedWindow("power sample needs a box".into()))?;
            let (pk, checks) = modelset_product(m, m, ModelSetOp::Power(k), &r)?;
            Ok((pk.points_in(w)?, true, checks))
        }
        PointSet::Lattice(l) if model.is_abelian() => {
            let lat = l.lattice();
            let offset = lat.offset().iter().map(|o| o * crate::exactnum::int(k as i64)).collect();
            let lk = LatticeSet::new(model, offset, lat.gens().to_vec())?;
            Ok((PointSet::Lattice(lk).sample(w)?, true, Vec::new()))
        }
        _ => {
            let base = set.sample(w)?;
            let mut acc: std::collections::BTreeSet<Coords> = base.iter().cloned().collect();
            for _ in 1..k {
                let mut next = std::collections::BTreeSet::new();
                for x in &acc {
                    for y in &base {
                        let z = model.mul(x, y)?;
                        if w.contains(&z) {
                            next.insert(z);
                        }
                    }
                }
                acc = next;
            }
            let mut v: Vec<Coords> = acc.into_iter().collect();
            sort_by_norm(&model, &mut v);
            Ok((v, false, Vec::new()))
        }
    }
}
