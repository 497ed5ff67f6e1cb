//! Dense oracle for the iteration matrix of the relaxation.
//!
//! With the star expansion ordered vertices first, the relaxation sweep is
//! `x <- H x` with `H = omega D^-1 W + (1 - omega) I`, where
//! `W = [[0, A^T Sh], [A Sv, 0]]`, `A` is the edge-by-vertex incidence, `Sv`
//! holds vertex weights, `Sh` holds `w(e)/|e|`, and `D` is the diagonal of
//! row sums of `W`. `D^-1 W` is similar to the symmetric `[[0, B^T], [B, 0]]`
//! with `B = Dh^-1/2 Sh^1/2 A Dv^-1/2 Sv^1/2`, so its eigenvalues are `+-s`
//! for the singular values `s` of `B`, padded with zeros.
//!
//! Everything here is O(n^3) and meant for small instances only.

use nalgebra::{DMatrix, DVector, Schur};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algdist::{star_expand, AlgdConfig, Relaxation, StarExpansion};
use crate::generate;
use crate::hypergraph::DisjointSets;

/// Largest star expansion accepted for dense work.
pub const MAX_DENSE_NODES: usize = 2000;

/// Tolerance for eigenvalue comparisons.
pub const EIGEN_TOL: f64 = 1e-8;

/// Tolerance for exact algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Agreement required between the singular value route and the direct
/// eigenvalue solver.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

const SCHUR_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("star expansion has {nodes} nodes; dense analysis is limited to {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("node {0} of the star expansion has no neighbours")]
    IsolatedNode(usize),
    #[error("omega must lie strictly between 0 and 1, got {0}")]
    Omega(f64),
    #[error("eigenvalue routes disagree by {0:e}")]
    Inconsistent(f64),
    #[error("direct eigenvalue solver did not converge")]
    NoConvergence,
    #[error("star expansion has {0} components; the limit needs a connected graph")]
    Disconnected(usize),
    #[error("omega case ({0}) has two eigenvalues of equal magnitude next to 1; no single limit")]
    Oscillating(OmegaCase),
    #[error("second eigenvalue is not simple (gap {0:e})")]
    NotSimple(f64),
}

/// Position of omega relative to the thresholds 1/2 and `2/(3 - s2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaCase {
    /// `omega > 2/(3 - s2)`: the eigenvalue `1 - 2 omega` dominates.
    A,
    /// `omega <= 1/2`: every eigenvalue of `H` is nonnegative.
    B,
    /// `omega = 2/(3 - s2)`: `1 - 2 omega` and `omega s2 + 1 - omega` tie in magnitude.
    C,
    /// `1/2 < omega < 2/(3 - s2)`.
    D,
}

impl std::fmt::Display for OmegaCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::A => "a",
            Self::B => "b",
            Self::C => "c",
            Self::D => "d",
        })
    }
}

/// Labels omega by comparing `|1 - 2 omega|` with `omega s2 + 1 - omega`.
pub fn omega_case(omega: f64, sigma2: f64) -> OmegaCase {
    if omega <= 0.5 {
        return OmegaCase::B;
    }
    let flip = 2.0 * omega - 1.0;
    let smooth = omega * sigma2 + 1.0 - omega;
    if (flip - smooth).abs() <= EIGEN_TOL {
        OmegaCase::C
    } else if flip > smooth {
        OmegaCase::A
    } else {
        OmegaCase::D
    }
}

#[derive(Debug, Clone)]
pub struct DenseMatrices {
    pub omega: f64,
    pub vertex_count: usize,
    pub edge_count: usize,
    /// `|E| x |V|` incidence.
    pub a: DMatrix<f64>,
    pub sv: DVector<f64>,
    pub sh: DVector<f64>,
    pub w: DMatrix<f64>,
    /// Row sums of `w`.
    pub d: DVector<f64>,
    /// `D^-1 W`.
    pub p: DMatrix<f64>,
    pub hmat: DMatrix<f64>,
}

impl DenseMatrices {
    pub fn node_count(&self) -> usize {
        self.vertex_count + self.edge_count
    }

    /// `Dv`, the row sums on vertex rows.
    pub fn dv(&self) -> DVector<f64> {
        self.d.rows(0, self.vertex_count).into_owned()
    }

    pub fn dh(&self) -> DVector<f64> {
        self.d.rows(self.vertex_count, self.edge_count).into_owned()
    }

    /// `B = Dh^-1/2 Sh^1/2 A Dv^-1/2 Sv^1/2`.
    pub fn normalized_incidence(&self) -> DMatrix<f64> {
        let left = self.dh().zip_map(&self.sh, |d, s| (s / d).sqrt());
        let right = self.dv().zip_map(&self.sv, |d, s| (s / d).sqrt());
        DMatrix::from_fn(self.edge_count, self.vertex_count, |e, v| {
            left[e] * self.a[(e, v)] * right[v]
        })
    }

    /// Largest deviation of a row sum of `D^-1 W` from 1.
    pub fn row_sum_error(&self) -> f64 {
        self.p
            .row_iter()
            .map(|r| (r.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `|| D^-1 W 1 - 1 ||_inf`.
    pub fn ones_error(&self) -> f64 {
        let ones = DVector::from_element(self.node_count(), 1.0);
        (&self.p * &ones - &ones).amax()
    }
}

/// Assembles the dense matrices of a star expansion.
pub fn build_dense(g: &StarExpansion, omega: f64) -> Result<DenseMatrices, SpectralError> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let nodes = g.node_count();
    if nodes > MAX_DENSE_NODES {
        return Err(SpectralError::TooLarge {
            nodes,
            limit: MAX_DENSE_NODES,
        });
    }
    if !(omega > 0.0 && omega < 1.0) {
        return Err(SpectralError::Omega(omega));
    }
    if let Some(node) = (0..nodes).find(|&u| g.neighbors(u).is_empty()) {
        return Err(SpectralError::IsolatedNode(node));
    }
    let weights = g.node_weights();
    let sv = DVector::from_column_slice(&weights[..n]);
    let sh = DVector::from_column_slice(&weights[n..]);
    let mut a = DMatrix::zeros(m, n);
    for e in 0..m {
        for &v in g.neighbors(n + e) {
            a[(e, v)] = 1.0;
        }
    }
    let mut w = DMatrix::zeros(nodes, nodes);
    for e in 0..m {
        for v in 0..n {
            if a[(e, v)] != 0.0 {
                w[(v, n + e)] = sh[e];
                w[(n + e, v)] = sv[v];
            }
        }
    }
    let d = DVector::from_iterator(nodes, w.row_iter().map(|r| r.sum()));
    let mut p = w.clone();
    for (i, mut row) in p.row_iter_mut().enumerate() {
        row /= d[i];
    }
    let hmat = &p * omega + DMatrix::identity(nodes, nodes) * (1.0 - omega);
    Ok(DenseMatrices {
        omega,
        vertex_count: n,
        edge_count: m,
        a,
        sv,
        sh,
        w,
        d,
        p,
        hmat,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub omega: f64,
    /// Singular values of `B`, descending.
    pub singular_values: Vec<f64>,
    /// Eigenvalues of `D^-1 W` rebuilt from the singular values, ordered by
    /// decreasing magnitude (positive first on ties).
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues of `H`, same ordering.
    pub mu: Vec<f64>,
    pub mu2: f64,
    /// `(1 - mu2) / omega`.
    pub gamma: f64,
    pub sigma2: f64,
    pub omega_case: OmegaCase,
    /// Connected components of the star expansion.
    pub component_count: usize,
    /// How many singular values equal 1 within [`EIGEN_TOL`].
    pub unit_multiplicity: usize,
    /// Distance from 1 to the largest singular value below the unit cluster.
    pub unit_gap: f64,
    /// Gap between `|mu2|` and the next smaller eigenvalue magnitude of `H`.
    pub mu2_gap: f64,
    /// Real parts of the eigenvalues of `D^-1 W` from the direct solver,
    /// ascending.
    pub direct_eigenvalues: Vec<f64>,
    /// Largest imaginary part the direct solver returned.
    pub direct_imag: f64,
    /// Largest difference to the direct eigenvalue solver.
    pub cross_check_error: f64,
    /// Eigenvector of `H` for `mu2`, when `mu2` is simple and the graph is
    /// connected.
    pub limit_vector: Option<Vec<f64>>,
}

impl SpectralReport {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.first().map_or(0.0, |l| l.abs())
    }
}

fn by_magnitude(a: &f64, b: &f64) -> std::cmp::Ordering {
    b.abs().total_cmp(&a.abs()).then(b.total_cmp(a))
}

/// Eigenvalues of a square matrix from the real Schur form. Returns `(real
/// parts sorted ascending, largest |imaginary part|)`, or `None` when the QR
/// iteration does not converge.
///
/// The matrix is first split into the diagonal blocks of its irreducible
/// components. QR iteration also stalls now and then on the highly
/// structured blocks built here, so the transpose and an orthogonal
/// similarity of a block are tried before giving up. None of this changes
/// the spectrum.
pub fn direct_eigenvalues(m: &DMatrix<f64>) -> Option<(Vec<f64>, f64)> {
    let n = m.nrows();
    let mut dsu = DisjointSets::new(n);
    for j in 0..n {
        for i in 0..n {
            if m[(i, j)] != 0.0 {
                dsu.union(i, j);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![usize::MAX; n];
    for i in 0..n {
        let root = dsu.find(i);
        if block_of[root] == usize::MAX {
            block_of[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of[root]].push(i);
    }
    let mut re = Vec::with_capacity(n);
    let mut imag: f64 = 0.0;
    for idx in blocks {
        let block = m.select_rows(&idx).select_columns(&idx);
        for z in block_eigenvalues(block)?.iter() {
            re.push(z.re);
            imag = imag.max(z.im.abs());
        }
    }
    re.sort_by(f64::total_cmp);
    Some((re, imag))
}

fn block_eigenvalues(m: DMatrix<f64>) -> Option<DVector<nalgebra::Complex<f64>>> {
    let n = m.nrows();
    let reflect = || {
        let v = DVector::from_fn(n, |i, _| 1.0 + (i as f64 * 0.7548776662).fract());
        let q = DMatrix::identity(n, n) - &v * v.transpose() * (2.0 / v.norm_squared());
        &q * &m * &q
    };
    let schur = Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .or_else(|| Schur::try_new(m.transpose(), f64::EPSILON, SCHUR_MAX_ITER))
        .or_else(|| Schur::try_new(reflect(), f64::EPSILON, SCHUR_MAX_ITER))?;
    Some(schur.complex_eigenvalues())
}

/// Largest elementwise difference between two spectra after sorting both.
pub fn spectrum_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn star_component_count(dm: &DenseMatrices) -> usize {
    let nodes = dm.node_count();
    let mut dsu = DisjointSets::new(nodes);
    for j in 0..nodes {
        for i in 0..nodes {
            if dm.w[(i, j)] != 0.0 {
                dsu.union(i, j);
            }
        }
    }
    dsu.count()
}

/// `[[0, B^T], [B, 0]]`.
fn symmetric_form(b: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, n) = b.shape();
    let mut s = DMatrix::zeros(n + m, n + m);
    s.view_mut((n, 0), (m, n)).copy_from(b);
    s.view_mut((0, n), (n, m)).copy_from(&b.transpose());
    s
}

fn node_weights(dm: &DenseMatrices) -> DVector<f64> {
    let mut s = DVector::zeros(dm.node_count());
    s.rows_mut(0, dm.vertex_count).copy_from(&dm.sv);
    s.rows_mut(dm.vertex_count, dm.edge_count).copy_from(&dm.sh);
    s
}

/// Spectrum of `D^-1 W` and `H` through the singular values of `B`,
/// cross-checked against a direct eigenvalue solve of `D^-1 W`.
pub fn spectrum(dm: &DenseMatrices) -> Result<SpectralReport, SpectralError> {
    let n = dm.vertex_count;
    let m = dm.edge_count;
    let omega = dm.omega;
    let b = dm.normalized_incidence();
    let mut sigma: Vec<f64> = b.singular_values().iter().copied().collect();
    sigma.sort_by(|x, y| y.total_cmp(x));

    let mut eigenvalues: Vec<f64> = sigma.iter().flat_map(|&s| [s, -s]).collect();
    eigenvalues.resize(n + m, 0.0);
    eigenvalues.sort_by(by_magnitude);

    let (direct, imag) = direct_eigenvalues(&dm.p).ok_or(SpectralError::NoConvergence)?;
    let cross_check_error = spectrum_distance(&direct, &eigenvalues).max(imag);
    if cross_check_error.is_nan() || cross_check_error > CROSS_CHECK_TOL {
        return Err(SpectralError::Inconsistent(cross_check_error));
    }

    let mut mu: Vec<f64> = eigenvalues
        .iter()
        .map(|&l| omega * l + 1.0 - omega)
        .collect();
    mu.sort_by(by_magnitude);
    let mu2 = mu.get(1).copied().unwrap_or(0.0);
    let mu2_gap = mu.get(2).map_or(mu2.abs(), |m3| mu2.abs() - m3.abs());
    let sigma2 = sigma.get(1).copied().unwrap_or(0.0);
    let case = omega_case(omega, sigma2);

    let component_count = star_component_count(dm);
    let unit_multiplicity = sigma
        .iter()
        .filter(|&&s| (s - 1.0).abs() <= EIGEN_TOL)
        .count();
    let unit_gap = 1.0 - sigma.get(unit_multiplicity).copied().unwrap_or(0.0);

    let limit_vector =
        (component_count == 1 && case != OmegaCase::C && mu2_gap > EIGEN_TOL).then(|| {
            // Eigenvector of D^-1 W for lambda2 = (mu2 - 1 + omega) / omega,
            // taken from the symmetric form and mapped back.
            let lambda2 = (mu2 - 1.0 + omega) / omega;
            let eig = symmetric_form(&b).symmetric_eigen();
            let idx = (0..n + m)
                .min_by(|&i, &j| {
                    (eig.eigenvalues[i] - lambda2)
                        .abs()
                        .total_cmp(&(eig.eigenvalues[j] - lambda2).abs())
                })
                .expect("nonempty");
            let y = eig.eigenvectors.column(idx);
            let scale = dm.d.zip_map(&node_weights(dm), |d, s| (d * s).sqrt());
            (0..n + m).map(|i| y[i] / scale[i]).collect()
        });

    Ok(SpectralReport {
        omega,
        singular_values: sigma,
        eigenvalues,
        mu,
        mu2,
        gamma: (1.0 - mu2) / omega,
        sigma2,
        omega_case: case,
        component_count,
        unit_multiplicity,
        unit_gap,
        mu2_gap,
        direct_eigenvalues: direct,
        direct_imag: imag,
        cross_check_error,
        limit_vector,
    })
}

/// Absolute Pearson correlation. Zero when either input is constant.
pub fn abs_correlation(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let len = x.len() as f64;
    let mx = x.iter().sum::<f64>() / len;
    let my = y.iter().sum::<f64>() / len;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (a, b) = (a - mx, b - my);
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx.sqrt() * syy.sqrt())).abs().min(1.0)
}

fn limit_of(report: &SpectralReport) -> Result<&[f64], SpectralError> {
    if report.component_count != 1 {
        return Err(SpectralError::Disconnected(report.component_count));
    }
    if report.omega_case == OmegaCase::C {
        return Err(SpectralError::Oscillating(report.omega_case));
    }
    report
        .limit_vector
        .as_deref()
        .ok_or(SpectralError::NotSimple(report.mu2_gap))
}

/// Correlation with the limit direction after each of `iterations` steps
/// starting from `start`.
pub fn limit_scores(
    g: &StarExpansion,
    report: &SpectralReport,
    start: Vec<f64>,
    iterations: usize,
) -> Result<Vec<f64>, SpectralError> {
    let phi = limit_of(report)?;
    let mut relax = Relaxation::new(g, report.omega, start);
    Ok((0..iterations)
        .map(|_| {
            relax.step();
            abs_correlation(relax.current(), phi)
        })
        .collect())
}

/// Runs the relaxation from the random start of vector 0 under `cfg.seed`
/// and returns how well the iterate lines up with the second eigenvector.
pub fn verify_limit(
    g: &StarExpansion,
    cfg: &AlgdConfig,
    report: &SpectralReport,
    iterations: usize,
) -> Result<f64, SpectralError> {
    if cfg.omega != report.omega {
        return Err(SpectralError::Omega(cfg.omega));
    }
    limit_of(report)?;
    let mut rng = crate::algdist::vector_rng(cfg.seed, 0);
    let start = Relaxation::random(g, cfg.omega, &mut rng).into_current();
    let scores = limit_scores(g, report, start, iterations)?;
    Ok(scores.last().copied().unwrap_or(0.0))
}

/// Largest per-element difference between the relaxation engine and
/// `alpha H x + beta` over `iterations` steps from `start`.
pub fn closed_form_error(
    g: &StarExpansion,
    dm: &DenseMatrices,
    start: Vec<f64>,
    iterations: usize,
) -> f64 {
    let mut relax = Relaxation::new(g, dm.omega, start);
    let mut worst: f64 = 0.0;
    for _ in 0..iterations {
        let prev = DVector::from_column_slice(relax.current());
        let rec = relax.step();
        let expected = (&dm.hmat * prev) * rec.alpha;
        for (x, e) in relax.current().iter().zip(expected.iter()) {
            worst = worst.max((x - (e + rec.beta)).abs());
        }
    }
    worst
}

/// One line of the verification report.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceRecord {
    pub instance: usize,
    pub vertices: usize,
    pub edges: usize,
    pub pins: usize,
    pub singular_values: Vec<f64>,
    pub component_count: usize,
    pub unit_multiplicity: usize,
    pub omega_case: Option<OmegaCase>,
    pub gamma: Option<f64>,
    pub pairing_error: Option<f64>,
    pub row_sum_error: Option<f64>,
    pub ones_error: Option<f64>,
    pub radius_error: Option<f64>,
    pub mu_mapping_error: Option<f64>,
    pub closed_form_error: f64,
    pub limit_score: Option<f64>,
    /// Why the limit check did not apply.
    pub limit_skipped: Option<String>,
    pub pairing: bool,
    pub stochastic: bool,
    pub components: bool,
    pub closed_form: bool,
    pub limit: bool,
    pub error: Option<String>,
}

impl InstanceRecord {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.pairing
            && self.stochastic
            && self.components
            && self.closed_form
            && self.limit
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub instances: usize,
    pub seed: u64,
    pub omega: f64,
    pub closed_form_iterations: usize,
    pub limit_iterations: usize,
    pub limit_threshold: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            instances: 50,
            seed: 0,
            omega: 0.5,
            closed_form_iterations: 30,
            limit_iterations: 1000,
            limit_threshold: 0.999,
        }
    }
}

/// Hypergraph number `i` of the suite under `seed`. Every fourth instance is
/// a union of 2 to 4 components, the rest are small random hypergraphs.
pub fn suite_instance(seed: u64, i: usize) -> crate::Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    if i % 4 == 3 {
        generate::multi_component(&mut rng, 2 + i % 3)
    } else {
        generate::random_small(&mut rng)
    }
}

/// Runs every check on one hypergraph.
pub fn verify_instance(h: &crate::Hypergraph, index: usize, cfg: &SuiteConfig) -> InstanceRecord {
    let g = star_expand(h);
    let mut rec = InstanceRecord {
        instance: index,
        vertices: h.vertex_count(),
        edges: h.edge_count(),
        pins: h.pin_count(),
        singular_values: Vec::new(),
        component_count: h.star_components(),
        unit_multiplicity: 0,
        omega_case: None,
        gamma: None,
        pairing_error: None,
        row_sum_error: None,
        ones_error: None,
        radius_error: None,
        mu_mapping_error: None,
        closed_form_error: f64::NAN,
        limit_score: None,
        limit_skipped: None,
        pairing: false,
        stochastic: false,
        components: false,
        closed_form: false,
        limit: false,
        error: None,
    };
    let dm = match build_dense(&g, cfg.omega) {
        Ok(dm) => dm,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.row_sum_error = Some(dm.row_sum_error());
    rec.ones_error = Some(dm.ones_error());

    let algd = AlgdConfig {
        omega: cfg.omega,
        seed: cfg.seed.wrapping_add(index as u64),
        ..AlgdConfig::default()
    };
    let mut rng = crate::algdist::vector_rng(algd.seed, 1);
    let start = Relaxation::random(&g, cfg.omega, &mut rng).into_current();
    rec.closed_form_error = closed_form_error(&g, &dm, start, cfg.closed_form_iterations);
    rec.closed_form = rec.closed_form_error <= IDENTITY_TOL;

    let report = match spectrum(&dm) {
        Ok(r) => r,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    let pairing_error = report.cross_check_error;
    let radius = report
        .direct_eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max);
    let mu_mapping_error = direct_eigenvalues(&dm.hmat)
        .map(|(direct_mu, imag)| spectrum_distance(&direct_mu, &report.mu).max(imag))
        .unwrap_or(f64::INFINITY);

    rec.singular_values = report.singular_values.clone();
    rec.unit_multiplicity = report.unit_multiplicity;
    rec.omega_case = Some(report.omega_case);
    rec.gamma = Some(report.gamma);
    rec.pairing_error = Some(pairing_error);
    rec.radius_error = Some((radius - 1.0).abs());
    rec.mu_mapping_error = Some(mu_mapping_error);
    rec.pairing = pairing_error <= EIGEN_TOL && mu_mapping_error <= EIGEN_TOL;
    rec.stochastic = dm.row_sum_error() <= IDENTITY_TOL
        && dm.ones_error() <= IDENTITY_TOL
        && (radius - 1.0).abs() <= EIGEN_TOL;
    rec.components = report.unit_multiplicity == rec.component_count
        && report.component_count == rec.component_count
        && report.unit_gap > EIGEN_TOL;

    match verify_limit(&g, &algd, &report, cfg.limit_iterations) {
        Ok(score) => {
            rec.limit_score = Some(score);
            rec.limit = score >= cfg.limit_threshold;
        }
        Err(e) => {
            rec.limit_skipped = Some(e.to_string());
            rec.limit = true;
        }
    }
    rec
}

/// Generates and verifies `cfg.instances` hypergraphs in parallel. Records
/// come back in instance order.
pub fn verify_suite(cfg: &SuiteConfig) -> Vec<InstanceRecord> {
    (0..cfg.instances)
        .into_par_iter()
        .map(|i| verify_instance(&suite_instance(cfg.seed, i), i, cfg))
        .collect()
}

/// Writes one JSON object per line.
pub fn write_report<W: std::io::Write>(
    records: &[InstanceRecord],
    mut out: W,
) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}
