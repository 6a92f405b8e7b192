use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::form::Form;

/// `Σ_j c_j (a_j · x)^{2d}` with `c_j ∈ [0.5, 1.5)` and unit `a_j`; convex
/// by construction and reproducible from `seed`.
pub fn random_convex_form(n: usize, d: u32, terms: usize, seed: u64) -> Form<f64> {
    assert!(terms >= 1, "need at least one term");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Form::zero(n, 2 * d);
    for _ in 0..terms {
        let mut a: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            a[0] = 1.0;
        } else {
            a.iter_mut().for_each(|v| *v /= norm);
        }
        let c: f64 = rng.random_range(0.5..1.5);
        out = &out + &Form::linear(&a).pow(2 * d).scale(&c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate_is_monomial() {
        let p = random_convex_form(1, 3, 1, 7);
        assert_eq!(p.num_terms(), 1);
        assert!(p.coeff_of(&[6]) > 0.0);
    }

    #[test]
    fn reproducible() {
        assert_eq!(random_convex_form(4, 2, 6, 11), random_convex_form(4, 2, 6, 11));
        assert_ne!(random_convex_form(4, 2, 6, 11), random_convex_form(4, 2, 6, 12));
    }
}
