//! Metric solvable Lie algebras of Iwasawa type.
//!
//! The basis is orthonormal by construction: index 0 is the unit vector `A`
//! spanning `a`, indices `1..n-1` span the nilradical `n`. All structure
//! constants are stored densely as `c[i][j][k]` with
//! `[e_i, e_j] = sum_k c[i][j][k] e_k`.

mod clifford;
mod spec;

pub use clifford::{clifford_generate, minimal_clifford_dim};
pub use spec::{build_from_spec, AlgebraSpec, BracketEntry, SpectralEntry};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Identity tolerance for algebra-level checks (antisymmetry, Jacobi,
/// symmetry of `D`).
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Relative tolerance for clustering eigenvalues of `D`.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-9;

/// Required relative separation between distinct eigenvalue clusters.
pub const EIGEN_SEPARATION: f64 = 1e-6;

/// Tolerance for grading residuals (`[n_a, n_b] in n_{a+b}`).
pub const GRADING_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("antisymmetry violated at ({i},{j},{k}): c[i][j][k] + c[j][i][k] = {residual:e}")]
    NotAntisymmetric {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },
    #[error("Jacobi identity violated at ({i},{j},{k}): residual {residual:e}")]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },
    #[error("n is not a nilpotent ideal: {reason}")]
    NotNilpotentIdeal { reason: String },
    #[error("D = ad_A is not symmetric positive definite: {reason}")]
    DNotSymmetricPositive { reason: String },
    #[error("no Clifford module: {dim_u} is not a multiple of the minimal module dimension for {dim_z} generators")]
    NoCliffordModule { dim_z: usize, dim_u: usize },
    #[error("Clifford generator count {0} exceeds the supported desk-scale range (<= 8)")]
    UnsupportedCliffordGenerators(usize),
    #[error("eigenvalue grading violated: bracket of eigenvectors ({alpha}, {beta}) has component {residual:e} outside n_{{alpha+beta}}")]
    GradingViolation {
        alpha: f64,
        beta: f64,
        residual: f64,
    },
    #[error("eigenvalue clusters of D too close: {gap:e} below the required separation {required:e}")]
    ClusterSeparation { gap: f64, required: f64 },
    #[error("spectrum is degenerate: {0}")]
    DegenerateSpectrum(String),
    #[error("invalid input document: {0}")]
    Schema(String),
}

/// A metric solvable Lie algebra `g = a (+) n` with orthonormal basis,
/// `dim a = 1`, and the inner product the identity in that basis.
#[derive(Debug, Clone)]
pub struct MetricSolvableAlgebra {
    dim: usize,
    /// Dense `c[i][j][k]`, row-major `i * n^2 + j * n + k`.
    c: Vec<f64>,
}

impl MetricSolvableAlgebra {
    /// Builds from dense structure constants, checking every invariant:
    /// antisymmetry, the Jacobi identity, `n = span(e_1..)` a nilpotent ideal
    /// containing `[g, g]`, and `D = ad_A|n` symmetric positive definite.
    /// A vanishing `D` is admitted only for the fully abelian (flat) algebra.
    pub fn new(dim: usize, c: Vec<f64>) -> Result<Self, AlgebraError> {
        assert_eq!(c.len(), dim * dim * dim, "structure constant shape");
        let alg = MetricSolvableAlgebra { dim, c };
        alg.validate()?;
        Ok(alg)
    }

    /// Builds without validation. Used by tests and synthetic classifier
    /// inputs that deliberately break an invariant.
    pub fn from_raw_unchecked(dim: usize, c: Vec<f64>) -> Self {
        assert_eq!(c.len(), dim * dim * dim);
        MetricSolvableAlgebra { dim, c }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    /// `[x, y]` for coordinate vectors on the full algebra.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                let yj = y[j];
                if yj == 0.0 {
                    continue;
                }
                let w = xi * yj;
                for k in 0..n {
                    out[k] += w * self.c(i, j, k);
                }
            }
        }
        out
    }

    /// Matrix of `D = ad_A` on `n` (indices shifted by one).
    pub fn d_matrix(&self) -> DMatrix<f64> {
        let m = self.dim - 1;
        DMatrix::from_fn(m, m, |k, j| self.c(0, j + 1, k + 1))
    }

    /// Matrix of the skew operator `J_Z` on the full algebra:
    /// `<J_Z u, v> = <Z, [u, v]>`.
    pub fn j_operator(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |u, v| {
            let mut acc = 0.0;
            for w in 0..n {
                if z[w] != 0.0 {
                    acc += z[w] * self.c(v, u, w);
                }
            }
            acc
        })
    }

    /// Max absolute structure constant (scale for relative tolerances).
    pub fn scale(&self) -> f64 {
        self.c.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0)
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|v| v.abs() <= ALGEBRA_TOL)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim;
        let scale = self.scale();
        let tol = ALGEBRA_TOL * scale;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let r = self.c(i, j, k) + self.c(j, i, k);
                    if r.abs() > tol {
                        return Err(AlgebraError::NotAntisymmetric {
                            i,
                            j,
                            k,
                            residual: r,
                        });
                    }
                }
            }
        }
        // [g, g] must avoid the a-direction, which makes n an ideal
        // containing the derived algebra.
        for i in 0..n {
            for j in 0..n {
                if self.c(i, j, 0).abs() > tol {
                    return Err(AlgebraError::NotNilpotentIdeal {
                        reason: format!("[e_{i}, e_{j}] has an a-component {:e}", self.c(i, j, 0)),
                    });
                }
            }
        }
        // Jacobi identity, cyclic sum over basis triples.
        let jac_tol = ALGEBRA_TOL * scale * scale * (n as f64);
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for l in 0..n {
                        let mut acc = 0.0;
                        for m in 0..n {
                            acc += self.c(i, j, m) * self.c(m, k, l)
                                + self.c(j, k, m) * self.c(m, i, l)
                                + self.c(k, i, m) * self.c(m, j, l);
                        }
                        if acc.abs() > jac_tol {
                            return Err(AlgebraError::JacobiViolation {
                                i,
                                j,
                                k,
                                residual: acc,
                            });
                        }
                    }
                }
            }
        }
        // Nilpotency of n: the lower central series must reach zero.
        self.check_nilpotent(tol)?;
        // D symmetric; positive definite unless the algebra is flat.
        let d = self.d_matrix();
        let sym_residual = (&d - d.transpose()).abs().max();
        if sym_residual > tol {
            return Err(AlgebraError::DNotSymmetricPositive {
                reason: format!("asymmetry residual {:e}", sym_residual),
            });
        }
        let eigen = d.clone().symmetric_eigen();
        let min_eig = eigen.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(AlgebraError::DNotSymmetricPositive {
                reason: format!("negative eigenvalue {:e}", min_eig),
            });
        }
        if min_eig <= tol && !self.is_abelian() {
            return Err(AlgebraError::DNotSymmetricPositive {
                reason: format!("singular eigenvalue {:e} on a nonabelian algebra", min_eig),
            });
        }
        Ok(())
    }

    fn check_nilpotent(&self, tol: f64) -> Result<(), AlgebraError> {
        let n = self.dim;
        let m = n - 1;
        // Current term of the lower central series of n, as column vectors
        // in n-coordinates; starts at n itself.
        let mut current = DMatrix::<f64>::identity(m, m);
        for _step in 0..=m {
            let cols = current.ncols();
            if cols == 0 {
                return Ok(());
            }
            // Span of [n, current].
            let mut gen: Vec<f64> = Vec::new();
            let mut count = 0;
            for j in 0..m {
                for col in 0..cols {
                    let mut v = vec![0.0; m];
                    for k in 0..m {
                        let mut acc = 0.0;
                        for i in 0..m {
                            acc += current[(i, col)] * self.c(j + 1, i + 1, k + 1);
                        }
                        v[k] = acc;
                    }
                    if v.iter().any(|x| x.abs() > tol) {
                        gen.extend_from_slice(&v);
                        count += 1;
                    }
                }
            }
            if count == 0 {
                return Ok(());
            }
            let gen = DMatrix::from_vec(m, count, {
                // from_vec is column-major; the rows were pushed per vector.
                let mut colmajor = vec![0.0; m * count];
                for c_ in 0..count {
                    for r in 0..m {
                        colmajor[c_ * m + r] = gen[c_ * m + r];
                    }
                }
                colmajor
            });
            let next = orthonormal_column_basis(&gen, tol);
            if next.ncols() >= current.ncols() {
                return Err(AlgebraError::NotNilpotentIdeal {
                    reason: "lower central series of n does not descend".into(),
                });
            }
            current = next;
        }
        Err(AlgebraError::NotNilpotentIdeal {
            reason: "lower central series of n does not terminate".into(),
        })
    }
}

/// Orthonormal basis of the column space, by modified Gram-Schmidt with a
/// drop tolerance.
fn orthonormal_column_basis(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let rows = m.nrows();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for j in 0..m.ncols() {
        let mut v = m.column(j).into_owned();
        for b in &basis {
            let proj = b.dot(&v);
            v -= b * proj;
        }
        let norm = v.norm();
        if norm > tol.max(1e-10) {
            basis.push(v / norm);
        }
    }
    let mut out = DMatrix::zeros(rows, basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// One eigenvalue of `D` with its multiplicity and an orthonormal basis of
/// the eigenspace (full-algebra coordinates).
#[derive(Debug, Clone)]
pub struct SpectralEntryData {
    pub alpha: f64,
    pub multiplicity: usize,
    /// Columns are orthonormal eigenvectors, length `dim` (index 0 is zero).
    pub basis: DMatrix<f64>,
}

/// The eigenvalue set of `D` with multiplicities, sorted ascending.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub entries: Vec<SpectralEntryData>,
    pub lambda: f64,
}

impl SpectralData {
    pub fn multiplicity_of(&self, alpha: f64, tol: f64) -> usize {
        self.entries
            .iter()
            .find(|e| (e.alpha - alpha).abs() <= tol)
            .map_or(0, |e| e.multiplicity)
    }

    /// The entry carrying the top eigenvalue.
    pub fn top(&self) -> &SpectralEntryData {
        self.entries.last().expect("nonempty spectrum")
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.alpha).collect()
    }
}

/// Eigenspace decomposition of `D` with the grading check
/// `[n_a, n_b] (subset) n_{a+b}`.
pub fn spectral_decompose(alg: &MetricSolvableAlgebra) -> Result<SpectralData, AlgebraError> {
    let n = alg.dim();
    let d = alg.d_matrix();
    if alg.is_abelian() || d.abs().max() <= ALGEBRA_TOL {
        return Err(AlgebraError::DegenerateSpectrum(
            "D vanishes (abelian algebra has no positive spectrum)".into(),
        ));
    }
    let eigen = d.symmetric_eigen();
    let mut order: Vec<usize> = (0..n - 1).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[a]
            .partial_cmp(&eigen.eigenvalues[b])
            .unwrap()
    });
    let lambda_max = eigen.eigenvalues[*order.last().unwrap()];
    if lambda_max <= 0.0 {
        return Err(AlgebraError::DegenerateSpectrum(
            "top eigenvalue is not positive".into(),
        ));
    }

    // Cluster ascending eigenvalues at relative tolerance, then demand
    // separation between clusters.
    let mut clusters: Vec<(f64, Vec<usize>)> = Vec::new();
    for &idx in &order {
        let ev = eigen.eigenvalues[idx];
        match clusters.last_mut() {
            Some((val, members))
                if (ev - *val).abs() <= EIGEN_CLUSTER_TOL * lambda_max.max(ev.abs()) =>
            {
                members.push(idx);
                // Running mean keeps the cluster value stable.
                *val += (ev - *val) / members.len() as f64;
            }
            _ => clusters.push((ev, vec![idx])),
        }
    }
    for w in clusters.windows(2) {
        let gap = w[1].0 - w[0].0;
        let required = EIGEN_SEPARATION * lambda_max;
        if gap < required {
            return Err(AlgebraError::ClusterSeparation { gap, required });
        }
    }

    let mut entries = Vec::with_capacity(clusters.len());
    for (alpha, members) in &clusters {
        let mut basis = DMatrix::zeros(n, members.len());
        for (col, &idx) in members.iter().enumerate() {
            let mut v = DVector::zeros(n);
            for r in 0..n - 1 {
                v[r + 1] = eigen.eigenvectors[(r, idx)];
            }
            // Deterministic sign: largest-magnitude component positive.
            let mut pivot = 0;
            for r in 0..n {
                if v[r].abs() > v[pivot].abs() {
                    pivot = r;
                }
            }
            if v[pivot] < 0.0 {
                v = -v;
            }
            basis.set_column(col, &v);
        }
        entries.push(SpectralEntryData {
            alpha: *alpha,
            multiplicity: members.len(),
            basis,
        });
    }

    let spectral = SpectralData {
        entries,
        lambda: clusters.last().unwrap().0,
    };

    // Grading: brackets of eigenvectors must land in the (a+b)-eigenspace.
    let scale = alg.scale();
    for ea in &spectral.entries {
        for eb in &spectral.entries {
            for i in 0..ea.multiplicity {
                let va = ea.basis.column(i).into_owned();
                for j in 0..eb.multiplicity {
                    let vb = eb.basis.column(j).into_owned();
                    let br = alg.bracket(&va, &vb);
                    let target = ea.alpha + eb.alpha;
                    let mut outside = br.norm_squared();
                    for ec in &spectral.entries {
                        if (ec.alpha - target).abs() <= EIGEN_CLUSTER_TOL * spectral.lambda
                            || (ec.alpha - target).abs() <= EIGEN_SEPARATION * spectral.lambda
                        {
                            let proj = ec.basis.transpose() * &br;
                            outside -= proj.norm_squared();
                        }
                    }
                    if outside.max(0.0).sqrt() > GRADING_TOL * scale {
                        return Err(AlgebraError::GradingViolation {
                            alpha: ea.alpha,
                            beta: eb.alpha,
                            residual: outside.max(0.0).sqrt(),
                        });
                    }
                }
            }
        }
    }
    Ok(spectral)
}

/// The skew operators `J_Z` for an orthonormal basis of `n_lambda`, with the
/// block data of the adapted frame for the first basis direction.
#[derive(Debug, Clone)]
pub struct JOperatorFamily {
    /// Basis of `n_lambda`, full-algebra coordinates.
    pub z_basis: Vec<DVector<f64>>,
    /// `J_Z` on the full algebra (skew), one per basis vector.
    pub operators: Vec<DMatrix<f64>>,
    /// `a_i` coefficients of the half-eigenvalue pairs for `z_basis[0]`.
    pub a_coeffs: Vec<f64>,
    /// `(lambda_l, lambda - lambda_l, b_l)` for the mixed pairs of `z_basis[0]`.
    pub b_blocks: Vec<(f64, f64, f64)>,
}

/// Builds the `J`-operator family and verifies its invariants: skewness and
/// the defining identity at `ALGEBRA_TOL`, and the grading
/// `J_Z n_alpha (subset) n_{lambda-alpha}` at `GRADING_TOL`.
pub fn j_family(
    alg: &MetricSolvableAlgebra,
    spectral: &SpectralData,
) -> Result<JOperatorFamily, AlgebraError> {
    let top = spectral.top();
    let scale = alg.scale();
    let mut z_basis = Vec::new();
    let mut operators = Vec::new();
    for col in 0..top.multiplicity {
        let z = top.basis.column(col).into_owned();
        let j = alg.j_operator(&z);
        let skew = (&j + j.transpose()).abs().max();
        if skew > ALGEBRA_TOL * scale {
            return Err(AlgebraError::Schema(format!(
                "J_Z not skew (residual {:e}); metric data inconsistent",
                skew
            )));
        }
        // J_Z n_alpha (subset) n_{lambda - alpha}; zero when absent.
        for ent in &spectral.entries {
            let target = spectral.lambda - ent.alpha;
            for i in 0..ent.multiplicity {
                let img = &j * ent.basis.column(i).into_owned();
                let mut outside = img.norm_squared();
                for ec in &spectral.entries {
                    if (ec.alpha - target).abs() <= EIGEN_SEPARATION * spectral.lambda {
                        let proj = ec.basis.transpose() * &img;
                        outside -= proj.norm_squared();
                    }
                }
                // The a-component of J_Z on n_lambda (J_Z Z' has an A part
                // only for Z' parallel to Z).
                outside -= img[0] * img[0];
                if outside.max(0.0).sqrt() > GRADING_TOL * scale {
                    return Err(AlgebraError::GradingViolation {
                        alpha: ent.alpha,
                        beta: target,
                        residual: outside.max(0.0).sqrt(),
                    });
                }
            }
        }
        z_basis.push(z);
        operators.push(j);
    }

    // Block data for the distinguished direction.
    let basis = crate::geodesic::adapted_basis_for(alg, spectral, &z_basis[0])
        .map_err(|e| AlgebraError::Schema(format!("block extraction failed: {e}")))?;
    Ok(JOperatorFamily {
        z_basis,
        operators,
        a_coeffs: basis.y_blocks.iter().map(|b| b.a).collect(),
        b_blocks: basis
            .v_blocks
            .iter()
            .map(|b| (b.lambda_l, b.lambda_lp, b.b))
            .collect(),
    })
}

/// Builds a Damek-Ricci algebra: `ad_A = lambda/2` on `u`, `lambda` on the
/// center `z`, brackets `[u, u] (subset) z` given by Clifford-module
/// operators with `J_Z^2 = -lambda^2 ||Z||^2` on `u`.
pub fn build_damek_ricci(
    dim_z: usize,
    dim_u: usize,
    lambda: f64,
) -> Result<MetricSolvableAlgebra, AlgebraError> {
    build_damek_ricci_seeded(dim_z, dim_u, lambda, 0)
}

/// Same as [`build_damek_ricci`], optionally conjugating the Clifford
/// generators by a seeded random orthogonal basis change of `u` (seed 0
/// keeps the canonical generators).
pub fn build_damek_ricci_seeded(
    dim_z: usize,
    dim_u: usize,
    lambda: f64,
    clifford_seed: u64,
) -> Result<MetricSolvableAlgebra, AlgebraError> {
    if lambda <= 0.0 {
        return Err(AlgebraError::Schema("lambda must be positive".into()));
    }
    if dim_z == 0 {
        return Err(AlgebraError::Schema(
            "degenerate input: dim_u = 0 requires dim_z >= 1, and dim_z = 0 is rejected".into(),
        ));
    }
    let n = 1 + dim_u + dim_z;
    let mut c = vec![0.0; n * n * n];
    let mut set = |c: &mut Vec<f64>, i: usize, j: usize, k: usize, v: f64| {
        c[(i * n + j) * n + k] = v;
        c[(j * n + i) * n + k] = -v;
    };
    // D = ad_A.
    for j in 1..=dim_u {
        set(&mut c, 0, j, j, lambda / 2.0);
    }
    for j in dim_u + 1..n {
        set(&mut c, 0, j, j, lambda);
    }
    if dim_u > 0 {
        let mut ks = clifford_generate(dim_z, dim_u, 1.0)?;
        if clifford_seed != 0 {
            let q = seeded_orthogonal(dim_u, clifford_seed);
            for k in &mut ks {
                *k = &q * &*k * q.transpose();
            }
        }
        // [x_a, x_b] = sum_s <J_s x_a, x_b> z_s, with J_s = lambda K_s.
        for (s, k) in ks.iter().enumerate() {
            let zi = dim_u + 1 + s;
            for a in 1..=dim_u {
                for b in (a + 1)..=dim_u {
                    let v = lambda * k[(b - 1, a - 1)];
                    if v != 0.0 {
                        set(&mut c, a, b, zi, v);
                    }
                }
            }
        }
    }
    MetricSolvableAlgebra::new(n, c)
}

/// Deterministic random orthogonal matrix from a seed (QR of a seeded
/// Gaussian matrix with positive diagonal convention).
fn seeded_orthogonal(dim: usize, seed: u64) -> DMatrix<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::from_fn(dim, dim, |_, _| {
        // Box-Muller from uniform draws keeps the dependency surface small.
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen::<f64>();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    });
    // Modified Gram-Schmidt.
    for j in 0..dim {
        for i in 0..j {
            let proj = m.column(i).dot(&m.column(j).into_owned());
            let col_i = m.column(i).into_owned();
            let mut col_j = m.column(j).into_owned();
            col_j -= col_i * proj;
            m.set_column(j, &col_j);
        }
        let norm = m.column(j).norm();
        let col = m.column(j).into_owned() / norm;
        m.set_column(j, &col);
    }
    m
}

#[cfg(test)]
mod tests;
