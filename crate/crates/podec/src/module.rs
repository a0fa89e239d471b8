//! Downset-finite modules over the integer orthant, realized on a finite
//! grid with exact rational linear algebra.
//!
//! A `GridModule` stores one vector space per box degree and one transition
//! matrix per upward unit step, under the stabilization convention: the
//! grid stands for a module that is constant beyond the box's upper corner,
//! so a push past `hi` acts as the identity.  Localization along a face is
//! then the clamp to `hi` on the face coordinates, "image at infinity" is
//! the image at a clamped degree, and the support functors and the
//! coprimary test reduce to kernels, intersections and an exact
//! subspace-avoidance search.

use crate::downset::{orthant_faces, DownsetError, IntDownset};
use crate::linalg::{rat, span_intersect, Mat, Rat};
use crate::oracle::GridBox;
use num_traits::Zero;
use std::collections::BTreeSet;
use thiserror::Error;

/// Default cap on the number of representative degrees the essentiality
/// search will consider.
pub const DEFAULT_DEGREE_BUDGET: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("box does not clear the instance by the margin in coordinate {0}")]
    BoxTooSmall(usize),
    #[error("essentiality oracle refused: {degrees} degrees exceed budget {budget}")]
    BoxTooLarge { degrees: usize, budget: usize },
    #[error("generator {generator} has a nonzero coefficient on downset {downset} outside its support")]
    GeneratorOutsideHull { generator: usize, downset: usize },
    #[error("degree {0:?} is outside the box")]
    DegreeOutsideBox(Vec<i64>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("transitions fail to commute at degree {degree:?} on axes {axes:?}")]
    NonCommutingTransitions { degree: Vec<i64>, axes: (usize, usize) },
    #[error("submodule is not closed under transitions at degree {0:?}")]
    NotTransitionClosed(Vec<i64>),
    #[error("kernels of the component maps fail to intersect to zero at degree {0:?}")]
    InjectivityFailure(Vec<i64>),
    #[error(transparent)]
    Downset(#[from] DownsetError),
}

/// A module on a grid box: per-degree dimensions and per-step transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridModule {
    grid: GridBox,
    dims: Vec<usize>,
    /// `trans[axis][idx]` maps degree `idx` to `idx + e_axis`; `None` on the
    /// top boundary of that axis.
    trans: Vec<Vec<Option<Mat>>>,
}

/// Per-degree subspaces of a `GridModule`, given by column bases in the
/// module's own coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    pub spaces: Vec<Mat>,
}

impl GridModule {
    pub fn new(
        grid: GridBox,
        dims: Vec<usize>,
        trans: Vec<Vec<Option<Mat>>>,
    ) -> Result<Self, ModuleError> {
        let n = grid.rank();
        let count = grid.len();
        if dims.len() != count {
            return Err(ModuleError::DimensionMismatch { expected: count, got: dims.len() });
        }
        if trans.len() != n {
            return Err(ModuleError::DimensionMismatch { expected: n, got: trans.len() });
        }
        let m = GridModule { grid, dims, trans };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), ModuleError> {
        let n = self.grid.rank();
        for q in self.grid.points() {
            let idx = self.grid.index(&q).unwrap();
            for i in 0..n {
                let step = &self.trans[i][idx];
                if q[i] == self.grid.hi[i] {
                    if step.is_some() {
                        return Err(ModuleError::DimensionMismatch { expected: 0, got: 1 });
                    }
                    continue;
                }
                let t = step.as_ref().ok_or(ModuleError::DimensionMismatch {
                    expected: 1,
                    got: 0,
                })?;
                let mut up = q.clone();
                up[i] += 1;
                let next = self.grid.index(&up).unwrap();
                if t.cols() != self.dims[idx] || t.rows() != self.dims[next] {
                    return Err(ModuleError::DimensionMismatch {
                        expected: self.dims[idx],
                        got: t.cols(),
                    });
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if q[i] == self.grid.hi[i] || q[j] == self.grid.hi[j] {
                        continue;
                    }
                    let mut up_i = q.clone();
                    up_i[i] += 1;
                    let mut up_j = q.clone();
                    up_j[j] += 1;
                    let a = self.trans[j][self.grid.index(&up_i).unwrap()]
                        .as_ref()
                        .unwrap()
                        .mul(self.trans[i][idx].as_ref().unwrap());
                    let b = self.trans[i][self.grid.index(&up_j).unwrap()]
                        .as_ref()
                        .unwrap()
                        .mul(self.trans[j][idx].as_ref().unwrap());
                    if a != b {
                        return Err(ModuleError::NonCommutingTransitions {
                            degree: q.clone(),
                            axes: (i, j),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn zero(grid: GridBox) -> Self {
        let count = grid.len();
        let n = grid.rank();
        let mut trans = vec![vec![None; count]; n];
        for q in grid.points() {
            let idx = grid.index(&q).unwrap();
            for (i, row) in trans.iter_mut().enumerate() {
                if q[i] < grid.hi[i] {
                    row[idx] = Some(Mat::zeros(0, 0));
                }
            }
        }
        GridModule { grid, dims: vec![0; count], trans }
    }

    pub fn grid(&self) -> &GridBox {
        &self.grid
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, q: &[i64]) -> Result<usize, ModuleError> {
        let idx = self.grid.index(q).ok_or_else(|| ModuleError::DegreeOutsideBox(q.to_vec()))?;
        Ok(self.dims[idx])
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn index(&self, q: &[i64]) -> Result<usize, ModuleError> {
        self.grid.index(q).ok_or_else(|| ModuleError::DegreeOutsideBox(q.to_vec()))
    }

    /// Composite transition from `from` up to `to` (componentwise `>=`);
    /// path-independent by the commutativity invariant.
    pub fn push(&self, from: &[i64], to: &[i64]) -> Result<Mat, ModuleError> {
        let mut idx = self.index(from)?;
        self.index(to)?;
        assert!(from.iter().zip(to).all(|(a, b)| a <= b), "push must go upward");
        let mut cur = from.to_vec();
        let mut acc = Mat::identity(self.dims[idx]);
        for i in 0..self.grid.rank() {
            while cur[i] < to[i] {
                let t = self.trans[i][idx].as_ref().expect("interior step");
                acc = t.mul(&acc);
                cur[i] += 1;
                idx = self.grid.index(&cur).unwrap();
            }
        }
        Ok(acc)
    }

    /// The degree with the face coordinates clamped to the top corner.
    pub fn clamp(&self, q: &[i64], chi: &BTreeSet<usize>) -> Vec<i64> {
        q.iter()
            .enumerate()
            .map(|(i, &x)| if chi.contains(&i) { self.grid.hi[i] } else { x })
            .collect()
    }

    fn clamp_axis(&self, q: &[i64], j: usize) -> Vec<i64> {
        let mut out = q.to_vec();
        out[j] = self.grid.hi[j];
        out
    }

    /// Localization along an orthant face: degree `q` reads the module at
    /// the clamped degree, so pushes along the face become identities.
    /// Also returns the per-degree comparison maps `M_q -> (M_tau)_q`.
    pub fn localize(&self, chi: &BTreeSet<usize>) -> Result<(GridModule, Vec<Mat>), ModuleError> {
        let n = self.grid.rank();
        let count = self.grid.len();
        let mut dims = vec![0usize; count];
        let mut trans: Vec<Vec<Option<Mat>>> = vec![vec![None; count]; n];
        let mut compare = vec![Mat::zeros(0, 0); count];
        for q in self.grid.points() {
            let idx = self.grid.index(&q).unwrap();
            let c = self.clamp(&q, chi);
            let cidx = self.grid.index(&c).unwrap();
            dims[idx] = self.dims[cidx];
            compare[idx] = self.push(&q, &c)?;
            for i in 0..n {
                if q[i] == self.grid.hi[i] {
                    continue;
                }
                if chi.contains(&i) {
                    trans[i][idx] = Some(Mat::identity(self.dims[cidx]));
                } else {
                    trans[i][idx] = Some(
                        self.trans[i][cidx].as_ref().expect("clamp keeps axis interior").clone(),
                    );
                }
            }
        }
        Ok((GridModule { grid: self.grid.clone(), dims, trans }, compare))
    }

    /// Global support along a face: per degree, the intersection of the
    /// kernels of the pushes to the single-axis clamps off the face.
    pub fn global_support(&self, chi: &BTreeSet<usize>) -> Result<Submodule, ModuleError> {
        let mut spaces = Vec::with_capacity(self.grid.len());
        for q in self.grid.points() {
            let idx = self.grid.index(&q).unwrap();
            let mut space = Mat::identity(self.dims[idx]);
            for j in 0..self.grid.rank() {
                if chi.contains(&j) {
                    continue;
                }
                let a = self.push(&q, &self.clamp_axis(&q, j))?;
                space = span_intersect(&space, &a.kernel_basis());
            }
            spaces.push(space);
        }
        Ok(Submodule { spaces })
    }

    /// Local support along a face: the global support of the localization,
    /// as a submodule of the localized module.
    pub fn local_support(&self, chi: &BTreeSet<usize>) -> Result<(GridModule, Submodule), ModuleError> {
        let (loc, _) = self.localize(chi)?;
        let sub = loc.global_support(chi)?;
        Ok((loc, sub))
    }

    /// View a transition-closed family of subspaces as a module in its own
    /// right, with the restricted transitions.
    pub fn submodule_to_module(&self, sub: &Submodule) -> Result<GridModule, ModuleError> {
        let n = self.grid.rank();
        let count = self.grid.len();
        if sub.spaces.len() != count {
            return Err(ModuleError::DimensionMismatch { expected: count, got: sub.spaces.len() });
        }
        let mut dims = vec![0usize; count];
        let mut trans: Vec<Vec<Option<Mat>>> = vec![vec![None; count]; n];
        for q in self.grid.points() {
            let idx = self.grid.index(&q).unwrap();
            dims[idx] = sub.spaces[idx].cols();
        }
        for q in self.grid.points() {
            let idx = self.grid.index(&q).unwrap();
            for i in 0..n {
                if q[i] == self.grid.hi[i] {
                    continue;
                }
                let mut up = q.clone();
                up[i] += 1;
                let next = self.grid.index(&up).unwrap();
                let pushed = self.trans[i][idx].as_ref().unwrap().mul(&sub.spaces[idx]);
                let restricted = sub.spaces[next]
                    .solve(&pushed)
                    .ok_or_else(|| ModuleError::NotTransitionClosed(q.clone()))?;
                trans[i][idx] = Some(restricted);
            }
        }
        GridModule::new(self.grid.clone(), dims, trans)
    }
}

/// The indicator module `k[D]` of a downset, restricted to the box.
pub fn downset_module(d: &IntDownset, grid: &GridBox) -> Result<GridModule, ModuleError> {
    let n = grid.rank();
    let count = grid.len();
    let mut dims = vec![0usize; count];
    let mut trans: Vec<Vec<Option<Mat>>> = vec![vec![None; count]; n];
    for q in grid.points() {
        let idx = grid.index(&q).unwrap();
        dims[idx] = usize::from(d.member(&q)?);
    }
    for q in grid.points() {
        let idx = grid.index(&q).unwrap();
        for i in 0..n {
            if q[i] == grid.hi[i] {
                continue;
            }
            let mut up = q.clone();
            up[i] += 1;
            let next = grid.index(&up).unwrap();
            let t = if dims[idx] == 1 && dims[next] == 1 {
                Mat::identity(1)
            } else {
                Mat::zeros(dims[next], dims[idx])
            };
            trans[i][idx] = Some(t);
        }
    }
    GridModule::new(grid.clone(), dims, trans)
}

/// A generator of a hull submodule: a degree and one rational coefficient
/// per hull downset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub degree: Vec<i64>,
    pub coeffs: Vec<Rat>,
}

/// A module presented as the submodule of a direct sum of downset modules
/// generated by finitely many homogeneous elements, together with the box
/// it is realized on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullPresentation {
    pub hull: Vec<IntDownset>,
    pub generators: Vec<Generator>,
    pub grid: GridBox,
}

/// A realized hull module: the abstract grid module plus its embedding into
/// the ambient direct sum (per degree, `active` lists the hull indices with
/// nonzero ambient coordinate and `embed` gives the basis in those
/// coordinates).
#[derive(Clone, Debug)]
pub struct RealizedModule {
    pub module: GridModule,
    pub hull: HullPresentation,
    pub active: Vec<Vec<usize>>,
    pub embed: Vec<Mat>,
}

fn check_hull_margin(h: &HullPresentation) -> Result<(), ModuleError> {
    let n = h.grid.rank();
    for d in &h.hull {
        for p in d.pieces() {
            for i in 0..n {
                if !p.face.contains(&i) && h.grid.hi[i] < p.apex[i] + 1 {
                    return Err(ModuleError::BoxTooSmall(i));
                }
            }
        }
    }
    for g in &h.generators {
        if h.grid.index(&g.degree).is_none() {
            return Err(ModuleError::DegreeOutsideBox(g.degree.clone()));
        }
        for i in 0..n {
            if h.grid.hi[i] < g.degree[i] + 1 {
                return Err(ModuleError::BoxTooSmall(i));
            }
        }
    }
    Ok(())
}

/// Ambient transition of the direct sum of downset modules between
/// consecutive degrees: identity on shared coordinates.
fn ambient_step(from_active: &[usize], to_active: &[usize]) -> Mat {
    let mut m = Mat::zeros(to_active.len(), from_active.len());
    for (r, j) in to_active.iter().enumerate() {
        if let Some(c) = from_active.iter().position(|x| x == j) {
            m[(r, c)] = rat(1);
        }
    }
    m
}

/// Realize a hull presentation on its box: per-degree spaces are the spans
/// of the pushed generators inside the direct sum of the downset modules.
pub fn realize(h: &HullPresentation) -> Result<RealizedModule, ModuleError> {
    check_hull_margin(h)?;
    let n = h.grid.rank();
    let count = h.grid.len();
    let k = h.hull.len();
    for (gi, g) in h.generators.iter().enumerate() {
        if g.coeffs.len() != k {
            return Err(ModuleError::DimensionMismatch { expected: k, got: g.coeffs.len() });
        }
        for (j, c) in g.coeffs.iter().enumerate() {
            if !c.is_zero() && !h.hull[j].member(&g.degree)? {
                return Err(ModuleError::GeneratorOutsideHull { generator: gi, downset: j });
            }
        }
    }
    let mut active: Vec<Vec<usize>> = vec![Vec::new(); count];
    for q in h.grid.points() {
        let idx = h.grid.index(&q).unwrap();
        for (j, d) in h.hull.iter().enumerate() {
            if d.member(&q)? {
                active[idx].push(j);
            }
        }
    }
    // Spans accumulate in ascending degree order: everything pushed from
    // below plus the generators that sit at this degree.
    let mut embed: Vec<Mat> = vec![Mat::zeros(0, 0); count];
    for q in h.grid.points() {
        let idx = h.grid.index(&q).unwrap();
        let rows = active[idx].len();
        let mut cols: Vec<Vec<Rat>> = Vec::new();
        for i in 0..n {
            if q[i] == h.grid.lo[i] {
                continue;
            }
            let mut down = q.clone();
            down[i] -= 1;
            let prev = h.grid.index(&down).unwrap();
            let step = ambient_step(&active[prev], &active[idx]);
            let pushed = step.mul(&embed[prev]);
            for c in 0..pushed.cols() {
                cols.push(pushed.col(c));
            }
        }
        for g in &h.generators {
            if g.degree == q {
                cols.push(active[idx].iter().map(|&j| g.coeffs[j].clone()).collect());
            }
        }
        embed[idx] = Mat::from_cols(rows, cols).column_space_basis();
    }
    let mut dims = vec![0usize; count];
    let mut trans: Vec<Vec<Option<Mat>>> = vec![vec![None; count]; n];
    for q in h.grid.points() {
        let idx = h.grid.index(&q).unwrap();
        dims[idx] = embed[idx].cols();
        for i in 0..n {
            if q[i] == h.grid.hi[i] {
                continue;
            }
            let mut up = q.clone();
            up[i] += 1;
            let next = h.grid.index(&up).unwrap();
            let step = ambient_step(&active[idx], &active[next]);
            let pushed = step.mul(&embed[idx]);
            let restricted = embed[next].solve(&pushed).expect("span closed under pushes");
            trans[i][idx] = Some(restricted);
        }
    }
    let module = GridModule::new(h.grid.clone(), dims, trans)?;
    Ok(RealizedModule { module, hull: h.clone(), active, embed })
}

/// Persistence flags of one homogeneous element with respect to a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub persistent: bool,
    pub transient: bool,
    pub coprimary: bool,
}

/// Classify `v` in degree `q`: persistent iff it survives the clamp along
/// the face, transient iff it dies at every single-axis clamp off the face.
pub fn classify_element(
    m: &GridModule,
    q: &[i64],
    v: &[Rat],
    chi: &BTreeSet<usize>,
) -> Result<Classification, ModuleError> {
    let idx = m.index(q)?;
    if v.len() != m.dims()[idx] {
        return Err(ModuleError::DimensionMismatch { expected: m.dims()[idx], got: v.len() });
    }
    let at = |target: &[i64]| -> Result<bool, ModuleError> {
        let a = m.push(q, target)?;
        Ok(a.mul_vec(v).iter().all(Zero::is_zero))
    };
    let persistent = !at(&m.clamp(q, chi))?;
    let mut transient = true;
    for j in 0..m.grid().rank() {
        if chi.contains(&j) {
            continue;
        }
        if !at(&m.clamp_axis(q, j))? {
            transient = false;
            break;
        }
    }
    Ok(Classification { persistent, transient, coprimary: persistent && transient })
}

/// Preimage of the column span of `target` under `a`, as a column basis.
fn preimage(a: &Mat, target: &Mat) -> Mat {
    if target.cols() == 0 {
        return a.kernel_basis();
    }
    let mut neg = target.clone();
    for i in 0..neg.rows() {
        for j in 0..neg.cols() {
            let v = -neg[(i, j)].clone();
            neg[(i, j)] = v;
        }
    }
    let ker = a.hstack(&neg).kernel_basis();
    let cols: Vec<Vec<Rat>> = (0..ker.cols())
        .map(|c| (0..a.cols()).map(|r| ker[(r, c)].clone()).collect())
        .collect();
    Mat::from_cols(a.cols(), cols).column_space_basis()
}

fn dim_of(space: &Mat) -> usize {
    space.column_space_basis().cols()
}

/// Is there a nonzero vector in the span of `w` that lies in `k` or
/// outside `s`, for every constraint pair, simultaneously?
///
/// Branches on each constraint: either restrict to the kernel side or
/// promise to avoid the subspace `s`.  A finite set of proper subspaces
/// never covers a rational vector space, so at the end the promise is
/// checkable by dimension counts alone.
fn exists_avoider(w: &Mat, constraints: &[(Mat, Mat)], avoided: &[&Mat]) -> bool {
    let wdim = dim_of(w);
    if wdim == 0 {
        return false;
    }
    let Some(((k, s), rest)) = constraints.split_first() else {
        return avoided.iter().all(|s| dim_of(&span_intersect(s, w)) < wdim);
    };
    // If every vector of W already satisfies one side, no branching.
    if crate::linalg::span_subset(w, k) {
        return exists_avoider(w, rest, avoided);
    }
    if dim_of(&span_intersect(s, w)) == 0 {
        return exists_avoider(w, rest, avoided);
    }
    let restricted = span_intersect(w, k);
    if exists_avoider(&restricted, rest, avoided) {
        return true;
    }
    if crate::linalg::span_subset(w, s) {
        return false;
    }
    let mut next = avoided.to_vec();
    next.push(s);
    exists_avoider(w, rest, &next)
}

/// Exact coprimary test: the localization map must be injective in every
/// degree, and the local support must be an essential submodule of the
/// localization.  Essentiality is decided degree by degree: it fails iff
/// some nonzero localized vector has every push either zero or outside the
/// support.  The search runs over the clamped representative degrees and is
/// refused above the degree budget.
pub fn is_coprimary_module(
    m: &GridModule,
    chi: &BTreeSet<usize>,
    budget: usize,
) -> Result<bool, ModuleError> {
    let grid = m.grid().clone();
    let reps: Vec<Vec<i64>> = grid
        .points()
        .filter(|q| chi.iter().all(|&i| q[i] == grid.hi[i]))
        .collect();
    if reps.len() > budget {
        return Err(ModuleError::BoxTooLarge { degrees: reps.len(), budget });
    }
    // (a) injectivity of M -> M_tau at every degree.
    for q in grid.points() {
        let a = m.push(&q, &m.clamp(&q, chi))?;
        if a.kernel_basis().cols() > 0 {
            return Ok(false);
        }
    }
    // (b) essentiality of the local support inside the localization.
    let (loc, _) = m.localize(chi)?;
    let gamma = loc.global_support(chi)?;
    for q in &reps {
        let idx = loc.index(q)?;
        if loc.dims()[idx] == 0 {
            continue;
        }
        let mut constraints = Vec::new();
        for q2 in &reps {
            if !q.iter().zip(q2).all(|(a, b)| a <= b) {
                continue;
            }
            let a = loc.push(q, q2)?;
            let k = a.kernel_basis();
            let s = preimage(&a, &gamma.spaces[loc.index(q2)?]);
            constraints.push((k, s));
        }
        let full = Mat::identity(loc.dims()[idx]);
        if exists_avoider(&full, &constraints, &[]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One coprimary component of a module decomposition.
pub struct ModuleComponent {
    pub face: BTreeSet<usize>,
    /// The quotient `M / M^tau`, realized as the image of `M` inside the
    /// coprimary downset-module sum for this face.
    pub quotient: GridModule,
    /// Per-degree matrix of the map `M_q -> (E^tau)_q`.
    pub map: Vec<Mat>,
    /// The per-degree kernel of that map, as a submodule of `M`.
    pub kernel: Submodule,
    /// The canonical components used, per hull downset index.
    pub summands: Vec<(usize, IntDownset)>,
}

pub struct ModuleDecomposition {
    pub components: Vec<ModuleComponent>,
    /// Per-degree dimension of the intersection of all component kernels;
    /// all zero, which certifies injectivity into the coprimary sum.
    pub certificate: Vec<usize>,
}

/// Primary decomposition of a realized hull module: decompose each hull
/// downset canonically, sum the face-wise coprimary downset modules, map
/// the module in via the indicator surjections, and return the per-face
/// images with the kernel-intersection certificate.
pub fn primary_decomposition_module(
    rm: &RealizedModule,
) -> Result<ModuleDecomposition, ModuleError> {
    let grid = rm.module.grid().clone();
    let n = grid.rank();
    let count = grid.len();
    let hull_components: Vec<Vec<(BTreeSet<usize>, IntDownset)>> = rm
        .hull
        .hull
        .iter()
        .map(|d| d.canonical_decomposition())
        .collect::<Result<_, _>>()?;
    let mut components = Vec::new();
    for face in orthant_faces(n) {
        let mut summands: Vec<(usize, IntDownset)> = Vec::new();
        for (j, comps) in hull_components.iter().enumerate() {
            if let Some((_, c)) = comps.iter().find(|(tau, _)| *tau == face) {
                summands.push((j, c.clone()));
            }
        }
        if summands.is_empty() {
            continue;
        }
        // E^tau = direct sum of the coprimary downset modules; build its
        // grid module and the map from M degree by degree.
        let mut dims = vec![0usize; count];
        let mut trans: Vec<Vec<Option<Mat>>> = vec![vec![None; count]; n];
        let mut maps: Vec<Mat> = vec![Mat::zeros(0, 0); count];
        let member = |summand: &IntDownset, q: &[i64]| summand.member(q);
        for q in grid.points() {
            let idx = grid.index(&q).unwrap();
            let here: Vec<bool> = summands
                .iter()
                .map(|(_, c)| member(c, &q))
                .collect::<Result<_, _>>()?;
            dims[idx] = here.iter().filter(|&&b| b).count();
            // Map row per live summand: the ambient coordinate of hull
            // downset j, read off the embedding.
            let mut map = Mat::zeros(dims[idx], rm.module.dims()[idx]);
            let mut r = 0;
            for ((j, _), &live) in summands.iter().zip(&here) {
                if !live {
                    continue;
                }
                let pos = rm.active[idx]
                    .iter()
                    .position(|x| x == j)
                    .expect("component is inside its downset");
                for c in 0..rm.module.dims()[idx] {
                    map[(r, c)] = rm.embed[idx][(pos, c)].clone();
                }
                r += 1;
            }
            maps[idx] = map;
        }
        for q in grid.points() {
            let idx = grid.index(&q).unwrap();
            for i in 0..n {
                if q[i] == grid.hi[i] {
                    continue;
                }
                let mut up = q.clone();
                up[i] += 1;
                let next = grid.index(&up).unwrap();
                let mut t = Mat::zeros(dims[next], dims[idx]);
                let mut rows = Vec::new();
                let mut cols = Vec::new();
                for (si, (_, c)) in summands.iter().enumerate() {
                    let live_here = member(c, &q)?;
                    let live_up = member(c, &up)?;
                    if live_up {
                        rows.push(si);
                    }
                    if live_here {
                        cols.push(si);
                    }
                }
                for (ri, s_r) in rows.iter().enumerate() {
                    if let Some(ci) = cols.iter().position(|s_c| s_c == s_r) {
                        t[(ri, ci)] = rat(1);
                    }
                }
                trans[i][idx] = Some(t);
            }
        }
        let e_tau = GridModule::new(grid.clone(), dims, trans)?;
        // Image of M inside E^tau is the quotient M / ker.
        let image = Submodule {
            spaces: maps.iter().map(|m| m.column_space_basis()).collect(),
        };
        let quotient = e_tau.submodule_to_module(&image)?;
        let kernel = Submodule { spaces: maps.iter().map(Mat::kernel_basis).collect() };
        components.push(ModuleComponent { face, quotient, map: maps, kernel, summands });
    }
    // Certificate: kernels intersect to zero in every degree.
    let mut certificate = vec![0usize; count];
    for q in grid.points() {
        let idx = grid.index(&q).unwrap();
        let mut meet = Mat::identity(rm.module.dims()[idx]);
        for comp in &components {
            meet = span_intersect(&meet, &comp.kernel.spaces[idx]);
        }
        certificate[idx] = dim_of(&meet);
        if certificate[idx] != 0 {
            return Err(ModuleError::InjectivityFailure(q));
        }
    }
    Ok(ModuleDecomposition { components, certificate })
}

/// Convenience: `k[D]` for a downset as a hull presentation with a single
/// generator at the box's lower corner (which must lie in `D`).
pub fn downset_hull(d: &IntDownset, grid: &GridBox) -> HullPresentation {
    HullPresentation {
        hull: vec![d.clone()],
        generators: vec![Generator { degree: grid.lo.clone(), coeffs: vec![rat(1)] }],
        grid: grid.clone(),
    }
}
