//! Dense vector arithmetic used by composition and evaluation.

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("vector length mismatch: {left} vs {right}")]
pub struct LengthMismatch {
    pub left: usize,
    pub right: usize,
}

fn check(a: &[f64], b: &[f64]) -> Result<(), LengthMismatch> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(LengthMismatch {
            left: a.len(),
            right: b.len(),
        })
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> Result<f64, LengthMismatch> {
    check(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn is_zero(v: &[f64]) -> bool {
    v.iter().all(|&x| x == 0.0)
}

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64, LengthMismatch> {
    let d = dot(a, b)?;
    let denom = norm(a) * norm(b);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((d / denom).clamp(-1.0, 1.0))
}

pub fn add(a: &[f64], b: &[f64]) -> Result<Vec<f64>, LengthMismatch> {
    check(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| x + y).collect())
}

pub fn hadamard(a: &[f64], b: &[f64]) -> Result<Vec<f64>, LengthMismatch> {
    check(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| x * y).collect())
}

pub fn add_assign(acc: &mut [f64], v: &[f64]) -> Result<(), LengthMismatch> {
    check(acc, v)?;
    acc.iter_mut().zip(v).for_each(|(a, x)| *a += x);
    Ok(())
}

pub fn scale(v: &[f64], factor: f64) -> Vec<f64> {
    v.iter().map(|x| x * factor).collect()
}

/// Unit-length copy of `v`; the zero vector maps to itself.
pub fn l2_normalize(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    if n == 0.0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / n).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn cosine_examples() {
        let v = [0.3, -2.0, 5.5];
        assert_abs_diff_eq!(cosine(&v, &v).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        // 32 / (sqrt(14) * sqrt(77))
        let expected = 32.0 / (14.0f64.sqrt() * 77.0f64.sqrt());
        assert_abs_diff_eq!(expected, 0.974631846, epsilon = 1e-9);
        assert_abs_diff_eq!(
            cosine(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap(),
            0.974631846,
            epsilon = 1e-9
        );
    }

    #[test]
    fn zero_norm_cosine_is_zero() {
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(cosine(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            cosine(&[1.0], &[1.0, 2.0]),
            Err(LengthMismatch { left: 1, right: 2 })
        );
        assert!(add(&[1.0], &[]).is_err());
        assert!(hadamard(&[], &[1.0]).is_err());
    }

    #[test]
    fn elementwise_examples() {
        let x = [0.5, -3.0, 7.25];
        assert_eq!(hadamard(&[1.0, 1.0, 1.0], &x).unwrap(), x.to_vec());
        assert_eq!(add(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), vec![4.0, 6.0]);
        let n = l2_normalize(&[3.0, 4.0]);
        assert_abs_diff_eq!(n[0], 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(n[1], 0.8, epsilon = 1e-15);
        assert_eq!(l2_normalize(&[0.0, 0.0]), vec![0.0, 0.0]);
    }

    fn vec_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        (1usize..12).prop_flat_map(|n| {
            (
                prop::collection::vec(-100.0f64..100.0, n),
                prop::collection::vec(-100.0f64..100.0, n),
                prop::collection::vec(-100.0f64..100.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn cosine_properties((a, b, _c) in vec_pair(), s in 0.001f64..1000.0) {
            let ab = cosine(&a, &b).unwrap();
            let ba = cosine(&b, &a).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ab.abs() <= 1.0 + 1e-12);
            let scaled = cosine(&scale(&a, s), &b).unwrap();
            prop_assert!((scaled - ab).abs() < 1e-9);
        }

        #[test]
        fn add_and_hadamard_commute_and_associate((a, b, c) in vec_pair()) {
            prop_assert_eq!(add(&a, &b).unwrap(), add(&b, &a).unwrap());
            prop_assert_eq!(hadamard(&a, &b).unwrap(), hadamard(&b, &a).unwrap());
            let l = hadamard(&hadamard(&a, &b).unwrap(), &c).unwrap();
            let r = hadamard(&a, &hadamard(&b, &c).unwrap()).unwrap();
            for (x, y) in l.iter().zip(&r) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
            let l = add(&add(&a, &b).unwrap(), &c).unwrap();
            let r = add(&a, &add(&b, &c).unwrap()).unwrap();
            for (x, y) in l.iter().zip(&r) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
        }
    }
}
