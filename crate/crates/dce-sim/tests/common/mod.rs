//! Shared fixtures for the integration tests: a Lyapunov oracle that is
//! assembled and solved independently of the library (index-loop equation
//! assembly, hand-written Gaussian elimination), plus a small seeded PRNG
//! for reproducible randomized systems.

use nalgebra::Matrix6;

pub type M6 = Matrix6<f64>;

/// SplitMix64 PRNG: deterministic, seedable, no dependencies.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}

/// Gaussian elimination with partial pivoting on a dense row-major system.
fn gauss_solve(m: &mut [f64], b: &mut [f64], n: usize) {
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if m[row * n + col].abs() > m[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let diag = m[col * n + col];
        assert!(diag.abs() > 1e-300, "singular oracle system");
        for row in col + 1..n {
            let f = m[row * n + col] / diag;
            if f != 0.0 {
                for k in col..n {
                    m[row * n + k] -= f * m[col * n + k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= m[row * n + k] * b[k];
        }
        b[row] = s / m[row * n + row];
    }
}

/// Solves A·V + V·Aᵀ = −D by flattening V row-major and eliminating the
/// 36×36 system directly. Shares neither the vectorization convention nor
/// the solver with the library implementation.
pub fn lyapunov_oracle(a: &M6, d: &M6) -> M6 {
    const N: usize = 6;
    const NN: usize = N * N;
    let mut m = vec![0.0; NN * NN];
    let mut rhs = vec![0.0; NN];
    for i in 0..N {
        for j in 0..N {
            let r = i * N + j;
            // (A·V)_{ij} = Σ_k A_{ik} V_{kj};  (V·Aᵀ)_{ij} = Σ_l V_{il} A_{jl}
            for k in 0..N {
                m[r * NN + (k * N + j)] += a[(i, k)];
            }
            for l in 0..N {
                m[r * NN + (i * N + l)] += a[(j, l)];
            }
            rhs[r] = -d[(i, j)];
        }
    }
    gauss_solve(&mut m, &mut rhs, NN);
    M6::from_fn(|i, j| rhs[i * N + j])
}

/// Random Hurwitz-stable drift (diagonal shifted past the spectral
/// abscissa) with a strictly positive-definite diffusion N·Nᵀ + 0.1·I.
pub fn random_stable_system(rng: &mut SplitMix64) -> (M6, M6) {
    let a0 = M6::from_fn(|_, _| rng.range(-1.0, 1.0));
    let abscissa = a0
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let a = a0 - M6::identity() * (abscissa + 0.3 + rng.range(0.0, 0.7));
    let n = M6::from_fn(|_, _| rng.range(-1.0, 1.0));
    let d = n * n.transpose() + M6::identity() * 0.1;
    (a, d)
}
