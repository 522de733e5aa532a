use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GraphError, GraphIndex, DEFAULT_SPECTRAL_CAP, DEGREE};

#[derive(Debug, Clone, Copy)]
pub struct SpectralOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub cap: u64,
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            tolerance: 1e-8,
            max_iterations: 100_000,
            cap: DEFAULT_SPECTRAL_CAP,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    /// Rayleigh quotient of the converged vector.
    pub rayleigh: f64,
    /// `||A v - rayleigh v||` for the final unit vector.
    pub residual: f64,
    /// `rayleigh + residual`: the value used for the expansion bound.
    pub lambda2: f64,
    pub iterations: usize,
    /// `(d - lambda2) / 2`.
    pub h_lower: f64,
}

fn apply(adj: &[u32], degree: usize, shift: f64, v: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        let row = &adj[i * degree..(i + 1) * degree];
        *o = shift * v[i] + row.iter().map(|&j| v[j as usize]).sum::<f64>();
    }
}

fn project_out_constant(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    norm
}

fn rayleigh_residual(
    adj: &[u32],
    degree: usize,
    shift: f64,
    v: &[f64],
    w: &mut [f64],
) -> (f64, f64) {
    apply(adj, degree, shift, v, w);
    project_out_constant(w);
    let rq = v.iter().zip(w.iter()).map(|(a, b)| a * b).sum::<f64>();
    let residual = v
        .iter()
        .zip(w.iter())
        .map(|(a, b)| (b - rq * a).powi(2))
        .sum::<f64>()
        .sqrt();
    (rq, residual)
}

/// Second-largest eigenvalue of the adjacency operator of a `degree`-regular
/// multigraph given as a flat neighbour list, by power iteration on
/// `A + degree*I` restricted to the complement of the constant vector.
pub fn second_eigenvalue(
    adj: &[u32],
    degree: usize,
    opts: &SpectralOptions,
) -> Result<SpectralEstimate, GraphError> {
    let n = adj.len() / degree;
    let shift = degree as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    project_out_constant(&mut v);
    normalize(&mut v);
    let mut w = vec![0.0; n];
    let mut theta = f64::NAN;
    for it in 1..=opts.max_iterations {
        apply(adj, degree, shift, &v, &mut w);
        project_out_constant(&mut w);
        let next = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        std::mem::swap(&mut v, &mut w);
        normalize(&mut v);
        let converged = (next - theta).abs() <= opts.tolerance * next.abs().max(1.0);
        theta = next;
        if converged {
            let (rq, residual) = rayleigh_residual(adj, degree, shift, &v, &mut w);
            let rayleigh = rq - shift;
            let lambda2 = rayleigh + residual;
            return Ok(SpectralEstimate {
                rayleigh,
                residual,
                lambda2,
                iterations: it,
                h_lower: (shift - lambda2) / 2.0,
            });
        }
    }
    let (_, residual) = rayleigh_residual(adj, degree, shift, &v, &mut w);
    Err(GraphError::NonConvergence {
        iterations: opts.max_iterations,
        residual,
    })
}

/// Certified-direction lower bound on the edge expansion of `G_p`:
/// `h >= (d - lambda2) / 2` with `d = 6`.
pub fn spectral_gap_lower_bound(
    g: &GraphIndex,
    opts: &SpectralOptions,
) -> Result<SpectralEstimate, GraphError> {
    if g.p() > opts.cap {
        return Err(GraphError::CapExceeded {
            p: g.p(),
            cap: opts.cap,
        });
    }
    let comps = g.components();
    if !comps.connected {
        return Err(GraphError::Disconnected {
            components: comps.component_sizes.len(),
        });
    }
    second_eigenvalue(g.adjacency(), DEGREE, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Prime;
    use nalgebra::DMatrix;

    fn cycle(n: usize) -> Vec<u32> {
        (0..n)
            .flat_map(|i| [((i + 1) % n) as u32, ((i + n - 1) % n) as u32])
            .collect()
    }

    #[test]
    fn cycle_graph_closed_form() {
        for n in [5usize, 8, 13, 20] {
            let est = second_eigenvalue(&cycle(n), 2, &SpectralOptions::default()).unwrap();
            let expected = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
            assert!((est.rayleigh - expected).abs() < 1e-6, "n={n}: {est:?}");
        }
    }

    #[test]
    fn markoff_31_against_dense_eigensolver() {
        let g = GraphIndex::build(Prime::new(31).unwrap(), 3000).unwrap();
        let est = spectral_gap_lower_bound(&g, &SpectralOptions::default()).unwrap();
        let n = g.len();
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for &j in g.neighbors(i as u32) {
                m[(i, j as usize)] += 1.0;
            }
        }
        let mut eig: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((eig[0] - 6.0).abs() < 1e-9);
        assert!(
            (est.rayleigh - eig[1]).abs() < 1e-4,
            "{est:?} vs {}",
            eig[1]
        );
        assert!(est.lambda2 >= eig[1] - 1e-9);
        assert!(est.h_lower > 0.0);
    }
}
