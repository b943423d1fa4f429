use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Generator behind every simulation draw.
pub type SimRng = ChaCha8Rng;

/// SplitMix64 finalizer, used to spread replicate indices over seed space.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `base_seed ⊕ splitmix64(r)`.
pub fn replicate_seed(base_seed: u64, replicate: usize) -> u64 {
    base_seed ^ splitmix64(replicate as u64)
}

pub fn replicate_rng(base_seed: u64, replicate: usize) -> SimRng {
    SimRng::seed_from_u64(replicate_seed(base_seed, replicate))
}

/// Haar-distributed `n × n` orthogonal matrix, row-major.
///
/// Householder QR of a standard Gaussian matrix with the columns of `Q`
/// flipped so that `R` has a positive diagonal.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
        if let Some(q) = haar_from_gaussian(g, n) {
            return q;
        }
    }
}

fn haar_from_gaussian(mut a: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut diag = vec![0.0; n];
    for j in 0..n {
        let norm = (j..n).map(|i| a[i * n + j].powi(2)).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return None;
        }
        if j + 1 == n {
            diag[j] = a[j * n + j];
            reflectors.push(Vec::new());
            break;
        }
        let x0 = a[j * n + j];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..n).map(|i| a[i * n + j]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= vnorm;
        }
        for c in j..n {
            let dot: f64 = (j..n).map(|i| v[i - j] * a[i * n + c]).sum();
            for i in j..n {
                a[i * n + c] -= 2.0 * v[i - j] * dot;
            }
        }
        diag[j] = alpha;
        reflectors.push(v);
    }
    // Q = H₀H₁⋯ applied to the identity from the right-most reflector
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    for (j, v) in reflectors.iter().enumerate().rev() {
        if v.is_empty() {
            continue;
        }
        for c in 0..n {
            let dot: f64 = (j..n).map(|i| v[i - j] * q[i * n + c]).sum();
            for i in j..n {
                q[i * n + c] -= 2.0 * v[i - j] * dot;
            }
        }
    }
    for (j, &d) in diag.iter().enumerate() {
        if d == 0.0 {
            return None;
        }
        if d < 0.0 {
            for i in 0..n {
                q[i * n + j] = -q[i * n + j];
            }
        }
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_gram_error(q: &[f64], n: usize) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|l| q[l * n + i] * q[l * n + j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }

    #[test]
    fn orthogonality() {
        let mut rng = SimRng::seed_from_u64(7);
        for n in [1, 2, 5, 40] {
            let q = random_orthogonal(n, &mut rng);
            assert!(max_gram_error(&q, n) <= 1e-10, "n = {n}");
        }
    }

    #[test]
    fn qr_reproduces_the_gaussian_matrix() {
        let mut rng = SimRng::seed_from_u64(3);
        let n = 6;
        let g: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
        let q = haar_from_gaussian(g.clone(), n).unwrap();
        // R = QᵀG must be upper triangular with a positive diagonal
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n).map(|l| q[l * n + i] * g[l * n + j]).sum();
                if i > j {
                    assert!(r.abs() < 1e-12);
                } else if i == j {
                    assert!(r > 0.0);
                }
            }
        }
    }

    #[test]
    fn one_by_one_is_plus_or_minus_one() {
        let q = random_orthogonal(1, &mut SimRng::seed_from_u64(1));
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].abs(), 1.0);
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
        assert_ne!(replicate_seed(42, 0), replicate_seed(42, 1));
        let a = random_orthogonal(5, &mut replicate_rng(42, 0));
        let b = random_orthogonal(5, &mut replicate_rng(42, 0));
        assert_eq!(a, b);
    }
}
