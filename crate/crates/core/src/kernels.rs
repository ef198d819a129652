//! Truncated multipole kernels `A` whose Fredholm determinant `det(I - A)`
//! gives the interaction energy density at one imaginary-frequency node.
//!
//! Every kernel has the form `A = D A' D^{-1}` with `D = diag(s_n)`,
//! `s_n = sqrt(I_n(λ2 a) / K_n(λ2 a))`. The balanced matrix `A'` is what gets
//! stored: its entries stay of order one where the raw entries would span
//! hundreds of decades, and for the nested cylinders
//!
//! ```text
//! A'_np = r12_n Σ_m U_nm σ_m U_pm
//! U_nm  = s_n · sqrt(|K_m/I_m (λ2 b) / R23_m|) · I_{n-m}(λ2 a δ)
//! ```
//!
//! with `σ_m` the sign of `1/R23_m`. `U` is assembled in log space from
//! scaled Bessel values, the common exponential `e^{-λ2 (b - a - a|δ|)}` is
//! attached to each factor, and the sum over `m` becomes a matrix product.
//! The determinant is unchanged by the similarity transform.

use nalgebra::{DMatrix, DVector};

use crate::bessel::{BesselSequence, IRatioSequence, KRatioSequence, TranslationSequence};
use crate::error::{Error, Result};
use crate::geometry::{GeometryConfig, GeometryKind};
use crate::media::FrequencyNode;
use crate::reflection::{inv_r23_from, log_derivative_gap, plane_reflection, r12_from};

/// Which multipole index carries the outer reflection coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OuterIndex {
    /// `1/R23_m` inside the translation sum (reduces to the concentric
    /// kernel at zero eccentricity).
    #[default]
    Summation,
    /// `1/R23_n` on the row index; kept for comparison only.
    Row,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub outer_index: OuterIndex,
    /// Relative size of the `|m| = M` addend above which `M` is flagged.
    pub tail_tol: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self { outer_index: OuterIndex::Summation, tail_tol: 1e-14 }
    }
}

#[derive(Debug, Clone)]
enum Entries {
    Dense(DMatrix<f64>),
    Diagonal(DVector<f64>),
}

/// Kernel at one node, indices `n, p ∈ [-N, N]`, stored in balanced form.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    n_cutoff: usize,
    m_cutoff: usize,
    entries: Entries,
    /// `ln s_n` by `|n|`; `A_np = A'_np e^{ln s_n - ln s_p}`.
    log_scale: Vec<f64>,
    diagonal: bool,
    insufficient_m: bool,
    node: FrequencyNode,
    geometry: GeometryConfig,
}

impl KernelMatrix {
    pub fn n_cutoff(&self) -> usize {
        self.n_cutoff
    }

    /// Cutoff of the translation sum; 0 when there is none.
    pub fn m_cutoff(&self) -> usize {
        self.m_cutoff
    }

    pub fn dim(&self) -> usize {
        2 * self.n_cutoff + 1
    }

    /// The similarity-balanced matrix `A'`, rows and columns ordered `-N..=N`.
    pub fn balanced(&self) -> DMatrix<f64> {
        match &self.entries {
            Entries::Dense(m) => m.clone(),
            Entries::Diagonal(d) => DMatrix::from_diagonal(d),
        }
    }

    /// Balanced entry by storage position (`0..dim`).
    pub fn balanced_at(&self, i: usize, j: usize) -> f64 {
        match &self.entries {
            Entries::Dense(m) => m[(i, j)],
            Entries::Diagonal(d) if i == j => d[i],
            Entries::Diagonal(_) => 0.0,
        }
    }

    /// The dense balanced matrix, or `None` for a diagonal kernel.
    pub fn dense(&self) -> Option<&DMatrix<f64>> {
        match &self.entries {
            Entries::Dense(m) => Some(m),
            Entries::Diagonal(_) => None,
        }
    }

    pub fn node(&self) -> &FrequencyNode {
        &self.node
    }

    pub fn geometry(&self) -> &GeometryConfig {
        &self.geometry
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    /// True when the last retained addend of the translation sum was not
    /// negligible for some entry.
    pub fn insufficient_m(&self) -> bool {
        self.insufficient_m
    }

    fn index(&self, n: i64) -> usize {
        assert!(n.unsigned_abs() as usize <= self.n_cutoff, "order {n} outside the truncated range");
        (n + self.n_cutoff as i64) as usize
    }

    /// Raw kernel entry `A_np`.
    pub fn entry(&self, n: i64, p: i64) -> f64 {
        let b = self.balanced_at(self.index(n), self.index(p));
        if b == 0.0 {
            return 0.0;
        }
        let ln_n = self.log_scale[n.unsigned_abs() as usize];
        let ln_p = self.log_scale[p.unsigned_abs() as usize];
        b * (ln_n - ln_p).exp()
    }

    pub fn max_abs(&self) -> f64 {
        match &self.entries {
            Entries::Dense(m) => m.amax(),
            Entries::Diagonal(d) => d.amax(),
        }
    }

    /// Largest balanced entry in the outermost rows and columns relative to
    /// the largest entry overall; 0 for an identically vanishing kernel.
    pub fn boundary_ratio(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let last = self.dim() - 1;
        let edge = match &self.entries {
            Entries::Diagonal(d) => d[0].abs().max(d[last].abs()),
            Entries::Dense(m) => {
                let mut edge: f64 = 0.0;
                for k in 0..=last {
                    for (r, c) in [(0, k), (last, k), (k, 0), (k, last)] {
                        edge = edge.max(m[(r, c)].abs());
                    }
                }
                edge
            }
        };
        edge / max
    }

    /// Diagonal of the balanced matrix (equal to the raw diagonal).
    pub fn diagonal(&self) -> DVector<f64> {
        match &self.entries {
            Entries::Dense(m) => m.diagonal(),
            Entries::Diagonal(d) => d.clone(),
        }
    }
}

/// Starting order cutoff, `ceil(8 a / gap)`.
pub fn initial_n_cutoff(geometry: &GeometryConfig) -> usize {
    (8.0 * geometry.a / geometry.min_gap()).ceil().max(1.0) as usize
}

/// Translation-sum cutoff `N + 8 + ceil(4 λ2 a |δ|)`, plus the number of
/// terms needed for the geometric factor `(a|δ|/b)^{2m}` to reach 1e-16.
pub fn default_m_cutoff(geometry: &GeometryConfig, node: &FrequencyNode, n_cutoff: usize) -> usize {
    let offset = geometry.a * geometry.delta.abs();
    let mut m = n_cutoff + 8 + (4.0 * node.lambda2 * offset).ceil() as usize;
    if offset > 0.0 {
        m += (18.5 / (geometry.b / offset).ln()).ceil() as usize;
    }
    m
}

fn require(geometry: &GeometryConfig, kinds: &[GeometryKind], what: &str) -> Result<()> {
    geometry.validate()?;
    if kinds.contains(&geometry.kind) {
        Ok(())
    } else {
        Err(Error::InvalidGeometry(format!("{what} does not apply to a {} geometry", geometry.kind.name())))
    }
}

/// Per-order data on the inner cylinder surface.
struct InnerSide {
    gap: BesselSequence,
    r12: Vec<f64>,
    /// `ln s_n` without the `λ2 a` exponent of the scaling.
    ln_half: Vec<f64>,
}

impl InnerSide {
    fn new(node: &FrequencyNode, a: f64, n_cutoff: usize) -> Result<Self> {
        let gap = BesselSequence::new(node.lambda2 * a, n_cutoff)?;
        let r12 = if node.lambda1 == node.lambda2 {
            vec![0.0; n_cutoff + 1]
        } else if node.lambda1.is_infinite() {
            vec![1.0; n_cutoff + 1]
        } else {
            let inner = IRatioSequence::new(node.lambda1 * a, n_cutoff)?;
            (0..=n_cutoff).map(|n| r12_from(n, &inner, &gap)).collect()
        };
        let ln_half = (0..=n_cutoff).map(|n| 0.5 * (gap.ln_i_scaled(n) - gap.ln_k_scaled(n))).collect();
        Ok(Self { gap, r12, ln_half })
    }

    fn perfect(node: &FrequencyNode, a: f64, n_cutoff: usize) -> Result<Self> {
        let pc = FrequencyNode { lambda1: f64::INFINITY, ..*node };
        Self::new(&pc, a, n_cutoff)
    }

    fn log_scale(&self) -> Vec<f64> {
        let x = self.gap.x();
        self.ln_half.iter().map(|h| h + x).collect()
    }

    /// `λ2/λ1 [I'/I - K'/K]_n(λ2 a)`, the first-order departure of `R12_n` from 1.
    fn pc_correction(&self, node: &FrequencyNode) -> Vec<f64> {
        let ratio = node.lambda2 / node.lambda1;
        (0..self.r12.len()).map(|n| ratio * log_derivative_gap(&self.gap, n)).collect()
    }
}

/// Per-order data on the outer cylinder surface.
struct OuterSide {
    gap: BesselSequence,
    inv_r23: Vec<f64>,
}

impl OuterSide {
    fn new(node: &FrequencyNode, b: f64, m_cutoff: usize) -> Result<Self> {
        let gap = BesselSequence::new(node.lambda2 * b, m_cutoff)?;
        let inv_r23 = if node.lambda3 == node.lambda2 {
            vec![0.0; m_cutoff + 1]
        } else if node.lambda3.is_infinite() {
            vec![1.0; m_cutoff + 1]
        } else {
            let outer = KRatioSequence::new(node.lambda3 * b, m_cutoff)?;
            (0..=m_cutoff).map(|m| inv_r23_from(m, &outer, &gap)).collect()
        };
        Ok(Self { gap, inv_r23 })
    }

    /// `ln(K_m/I_m)` of the scaled values (exponent handled separately).
    fn ln_weight(&self, m: usize) -> f64 {
        self.gap.ln_k_scaled(m) - self.gap.ln_i_scaled(m)
    }

    fn pc_correction(&self, node: &FrequencyNode) -> Vec<f64> {
        let ratio = node.lambda2 / node.lambda3;
        (0..self.inv_r23.len()).map(|m| ratio * log_derivative_gap(&self.gap, m)).collect()
    }
}

/// `G_np = Σ_{|m| ≤ M} U_nm σ_m U_pm` with the translation factors of the
/// nested-cylinder kernel. `ln_w`/`sign_w` are indexed by `|m|`.
/// Returns the matrix and whether the `|m| = M` addend is still significant.
#[allow(clippy::too_many_arguments)]
fn translation_gram(
    inner: &InnerSide,
    ln_w: &[f64],
    sign_w: &[f64],
    trans: &TranslationSequence,
    env_half: f64,
    n_cutoff: usize,
    m_cutoff: usize,
    negative_offset: bool,
    tail_tol: f64,
) -> (DMatrix<f64>, bool) {
    let dim = 2 * n_cutoff + 1;
    let cols = 2 * m_cutoff + 1;
    let nc = n_cutoff as i64;
    let mc = m_cutoff as i64;
    let mut u = DMatrix::<f64>::zeros(dim, cols);
    let mut v = DMatrix::<f64>::zeros(dim, cols);
    for j in 0..cols {
        let m = j as i64 - mc;
        let mi = m.unsigned_abs() as usize;
        let half_w = 0.5 * ln_w[mi] + env_half;
        let s = sign_w[mi];
        for i in 0..dim {
            let n = i as i64 - nc;
            let k = (n - m).unsigned_abs() as usize;
            let ln = inner.ln_half[n.unsigned_abs() as usize] + half_w + trans.ln_i_scaled[k];
            let value = ln.exp();
            u[(i, j)] = value;
            v[(i, j)] = s * value;
        }
    }
    let mut g = &v * u.transpose();
    if negative_offset {
        // I_k(-z) = (-1)^k I_k(z): the pair of factors contributes (-1)^{n+p}.
        for i in 0..dim {
            for j in 0..dim {
                if (i + j) % 2 == 1 {
                    g[(i, j)] = -g[(i, j)];
                }
            }
        }
    }
    let mut edge: f64 = 0.0;
    let mut row_max: f64 = 0.0;
    for i in 0..dim {
        edge = edge.max(u[(i, 0)]).max(u[(i, cols - 1)]);
        row_max = row_max.max(u.row(i).iter().map(|x| x * x).sum::<f64>());
    }
    let insufficient = row_max > 0.0 && edge * edge > tail_tol * row_max;
    (g, insufficient)
}

fn scale_rows(g: &mut DMatrix<f64>, factors: &[f64], n_cutoff: usize) {
    let nc = n_cutoff as i64;
    for i in 0..g.nrows() {
        let f = factors[(i as i64 - nc).unsigned_abs() as usize];
        g.row_mut(i).scale_mut(f);
    }
}

fn nested_setup(
    geometry: &GeometryConfig,
    node: &FrequencyNode,
    n_cutoff: usize,
    m_cutoff: usize,
) -> Result<(TranslationSequence, f64)> {
    if m_cutoff < n_cutoff {
        return Err(Error::Domain(format!("translation cutoff M = {m_cutoff} is below N = {n_cutoff}")));
    }
    let z = node.lambda2 * geometry.a * geometry.delta;
    let trans = TranslationSequence::new(z, n_cutoff + m_cutoff)?;
    let env_half = node.lambda2 * (geometry.a - geometry.b + geometry.a * geometry.delta.abs());
    Ok((trans, env_half))
}

/// Kernel of two eccentric cylinders.
pub fn build_eccentric(geometry: &GeometryConfig, node: &FrequencyNode, n_cutoff: usize, m_cutoff: usize) -> Result<KernelMatrix> {
    build_eccentric_with(geometry, node, n_cutoff, m_cutoff, &KernelOptions::default())
}

pub fn build_eccentric_with(
    geometry: &GeometryConfig,
    node: &FrequencyNode,
    n_cutoff: usize,
    m_cutoff: usize,
    options: &KernelOptions,
) -> Result<KernelMatrix> {
    require(geometry, &[GeometryKind::Eccentric, GeometryKind::Concentric], "eccentric kernel")?;
    let (trans, env_half) = nested_setup(geometry, node, n_cutoff, m_cutoff)?;
    let inner = InnerSide::new(node, geometry.a, n_cutoff)?;
    let outer = OuterSide::new(node, geometry.b, m_cutoff)?;

    let (ln_w, sign_w, row): (Vec<f64>, Vec<f64>, Vec<f64>) = match options.outer_index {
        OuterIndex::Summation => (
            (0..=m_cutoff).map(|m| outer.ln_weight(m) + outer.inv_r23[m].abs().ln()).collect(),
            outer.inv_r23.iter().map(|v| v.signum()).collect(),
            inner.r12.clone(),
        ),
        OuterIndex::Row => (
            (0..=m_cutoff).map(|m| outer.ln_weight(m)).collect(),
            vec![1.0; m_cutoff + 1],
            (0..=n_cutoff).map(|n| inner.r12[n] * outer.inv_r23[n]).collect(),
        ),
    };
    let (mut g, insufficient_m) = translation_gram(
        &inner,
        &ln_w,
        &sign_w,
        &trans,
        env_half,
        n_cutoff,
        m_cutoff,
        geometry.delta < 0.0,
        options.tail_tol,
    );
    scale_rows(&mut g, &row, n_cutoff);
    Ok(KernelMatrix {
        n_cutoff,
        m_cutoff,
        entries: Entries::Dense(g),
        log_scale: inner.log_scale(),
        diagonal: geometry.delta == 0.0,
        insufficient_m,
        node: *node,
        geometry: *geometry,
    })
}

/// Diagonal kernel of two coaxial cylinders.
pub fn build_concentric(geometry: &GeometryConfig, node: &FrequencyNode, n_cutoff: usize) -> Result<KernelMatrix> {
    require(geometry, &[GeometryKind::Concentric], "concentric kernel")?;
    let inner = InnerSide::new(node, geometry.a, n_cutoff)?;
    let outer = OuterSide::new(node, geometry.b, n_cutoff)?;
    let env = -2.0 * node.lambda2 * (geometry.b - geometry.a);
    Ok(concentric_matrix(geometry, node, &inner, &outer, n_cutoff, |n| inner.r12[n] * outer.inv_r23[n], env))
}

fn concentric_matrix(
    geometry: &GeometryConfig,
    node: &FrequencyNode,
    inner: &InnerSide,
    outer: &OuterSide,
    n_cutoff: usize,
    coefficient: impl Fn(usize) -> f64,
    env: f64,
) -> KernelMatrix {
    let dim = 2 * n_cutoff + 1;
    let nc = n_cutoff as i64;
    let mut diag = DVector::<f64>::zeros(dim);
    for i in 0..dim {
        let n = (i as i64 - nc).unsigned_abs() as usize;
        let c = coefficient(n);
        if c != 0.0 {
            diag[i] = c * (2.0 * inner.ln_half[n] + outer.ln_weight(n) + env).exp();
        }
    }
    KernelMatrix {
        n_cutoff,
        m_cutoff: 0,
        entries: Entries::Diagonal(diag),
        log_scale: inner.log_scale(),
        diagonal: true,
        insufficient_m: false,
        node: *node,
        geometry: *geometry,
    }
}

/// Kernel of a cylinder facing a plane.
pub fn build_cylinder_plane(geometry: &GeometryConfig, node: &FrequencyNode, n_cutoff: usize) -> Result<KernelMatrix> {
    require(geometry, &[GeometryKind::CylinderPlane], "cylinder-plane kernel")?;
    let inner = InnerSide::new(node, geometry.a, n_cutoff)?;
    plane_matrix(geometry, node, &inner, plane_reflection(node), n_cutoff)
}

fn plane_matrix(
    geometry: &GeometryConfig,
    node: &FrequencyNode,
    inner: &InnerSide,
    plane: f64,
    n_cutoff: usize,
) -> Result<KernelMatrix> {
    let dim = 2 * n_cutoff + 1;
    let nc = n_cutoff as i64;
    let image = KRatioSequence::new(2.0 * node.lambda2 * geometry.h, 2 * n_cutoff)?;
    let ln_k = image_log_k(&image);
    let env = -2.0 * node.lambda2 * (geometry.h - geometry.a);
    let mut balanced = DMatrix::<f64>::zeros(dim, dim);
    if plane != 0.0 {
        for i in 0..dim {
            let n = i as i64 - nc;
            let r = inner.r12[n.unsigned_abs() as usize] * plane;
            if r == 0.0 {
                continue;
            }
            for j in 0..dim {
                let p = j as i64 - nc;
                let ln = inner.ln_half[n.unsigned_abs() as usize]
                    + inner.ln_half[p.unsigned_abs() as usize]
                    + ln_k[(n + p).unsigned_abs() as usize]
                    + env;
                balanced[(i, j)] = r * ln.exp();
            }
        }
    }
    Ok(KernelMatrix {
        n_cutoff,
        m_cutoff: 0,
        entries: Entries::Dense(balanced),
        log_scale: inner.log_scale(),
        diagonal: false,
        insufficient_m: false,
        node: *node,
        geometry: *geometry,
    })
}

fn image_log_k(seq: &KRatioSequence) -> Vec<f64> {
    let mut out = Vec::with_capacity(seq.n_max() + 1);
    let mut acc = seq.ln_k0_scaled();
    out.push(acc);
    for n in 1..=seq.n_max() {
        acc += seq.ratio(n - 1).ln();
        out.push(acc);
    }
    out
}

/// Any of the three kernels, chosen by the geometry kind.
pub fn build_kernel(
    geometry: &GeometryConfig,
    node: &FrequencyNode,
    n_cutoff: usize,
    m_cutoff: usize,
    options: &KernelOptions,
) -> Result<KernelMatrix> {
    match geometry.kind {
        GeometryKind::Concentric => build_concentric(geometry, node, n_cutoff),
        GeometryKind::Eccentric => build_eccentric_with(geometry, node, n_cutoff, m_cutoff, options),
        GeometryKind::CylinderPlane => build_cylinder_plane(geometry, node, n_cutoff),
    }
}

/// Perfect-conductor kernel (all reflection coefficients set to 1) and the
/// first-order correction `ΔA` with `A ≈ A_pc - ΔA` for large `ε1`, `ε3`.
/// Both share the balancing of the exact kernel.
pub fn build_pc_and_delta(
    geometry: &GeometryConfig,
    node: &FrequencyNode,
    n_cutoff: usize,
    m_cutoff: usize,
) -> Result<(KernelMatrix, KernelMatrix)> {
    geometry.validate()?;
    let inner = InnerSide::perfect(node, geometry.a, n_cutoff)?;
    let c1 = inner.pc_correction(node);
    match geometry.kind {
        GeometryKind::Concentric => {
            let outer = OuterSide::new(&FrequencyNode { lambda3: f64::INFINITY, ..*node }, geometry.b, n_cutoff)?;
            let c3 = outer.pc_correction(node);
            let env = -2.0 * node.lambda2 * (geometry.b - geometry.a);
            let pc = concentric_matrix(geometry, node, &inner, &outer, n_cutoff, |_| 1.0, env);
            let delta = concentric_matrix(geometry, node, &inner, &outer, n_cutoff, |n| c1[n] + c3[n], env);
            Ok((pc, delta))
        }
        GeometryKind::Eccentric => {
            let (trans, env_half) = nested_setup(geometry, node, n_cutoff, m_cutoff)?;
            let outer = OuterSide::new(&FrequencyNode { lambda3: f64::INFINITY, ..*node }, geometry.b, m_cutoff)?;
            let c3 = outer.pc_correction(node);
            let ln_w: Vec<f64> = (0..=m_cutoff).map(|m| outer.ln_weight(m)).collect();
            let ones = vec![1.0; m_cutoff + 1];
            let negative = geometry.delta < 0.0;
            let (pc_g, insufficient) =
                translation_gram(&inner, &ln_w, &ones, &trans, env_half, n_cutoff, m_cutoff, negative, 1e-14);
            let ln_w3: Vec<f64> = ln_w.iter().zip(&c3).map(|(w, c)| w + c.ln()).collect();
            let (mut outer_g, _) =
                translation_gram(&inner, &ln_w3, &ones, &trans, env_half, n_cutoff, m_cutoff, negative, 1e-14);
            let mut inner_g = pc_g.clone();
            scale_rows(&mut inner_g, &c1, n_cutoff);
            outer_g += inner_g;
            let wrap = |g| KernelMatrix {
                n_cutoff,
                m_cutoff,
                entries: Entries::Dense(g),
                log_scale: inner.log_scale(),
                diagonal: geometry.delta == 0.0,
                insufficient_m: insufficient,
                node: *node,
                geometry: *geometry,
            };
            Ok((wrap(pc_g), wrap(outer_g)))
        }
        GeometryKind::CylinderPlane => {
            let pc = plane_matrix(geometry, node, &inner, 1.0, n_cutoff)?;
            // (λ3 - λ2)/(λ3 + λ2) ≈ 1 - 2 λ2/λ3
            let c_plane = 2.0 * node.lambda2 / node.lambda3;
            let mut delta = pc.balanced();
            let row: Vec<f64> = c1.iter().map(|c| c + c_plane).collect();
            scale_rows(&mut delta, &row, n_cutoff);
            let delta = KernelMatrix { entries: Entries::Dense(delta), ..pc.clone() };
            Ok((pc, delta))
        }
    }
}
