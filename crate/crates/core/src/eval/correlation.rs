use crate::{Error, Result};

fn check_pair(x: &[f64], y: &[f64], min: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::shape(x.len(), y.len()));
    }
    if x.len() < min {
        return Err(Error::invalid(format!("need at least {min} values, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("correlation input".into()));
    }
    Ok(())
}

/// Sample Pearson correlation. Errors when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y, 2)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::invalid("zero variance"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the average of their positions.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman's ρ: Pearson correlation of average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y, 2)?;
    pearson(&ranks(x), &ranks(y))
}

pub fn mse(pred: &[f64], gold: &[f64]) -> Result<f64> {
    check_pair(pred, gold, 1)?;
    Ok(pred.iter().zip(gold).map(|(p, g)| (p - g).powi(2)).sum::<f64>() / pred.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-12);
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-12);
        assert!(pearson(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn spearman_examples() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-12);
        assert!((spearman(&[1.0, 1.0, 2.0], &[3.0, 3.0, 4.0]).unwrap() - 1.0).abs() < 1e-12);
        let x = [0.1, 0.5, 2.0, 7.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| v.exp()).collect();
        assert!((spearman(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn mse_examples() {
        assert_eq!(mse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(mse(&[1.0, 2.0], &[2.0, 4.0]).unwrap(), 2.5);
        assert!((mse(&[1.5, 2.5, 3.5], &[1.0, 2.0, 3.0]).unwrap() - 0.25).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn pearson_affine_invariant(
            xs in proptest::collection::vec(-100.0f64..100.0, 3..30),
            a in 0.1f64..10.0,
            b in -10.0f64..10.0,
        ) {
            let ys: Vec<f64> = xs.iter().enumerate().map(|(i, v)| v.sin() + i as f64 * 0.1).collect();
            if let (Ok(r1), Ok(r2)) = (pearson(&xs, &ys), pearson(&xs.iter().map(|v| a * v + b).collect::<Vec<_>>(), &ys)) {
                prop_assert!((r1 - r2).abs() < 1e-8);
            }
        }

        #[test]
        fn spearman_monotone_invariant(xs in proptest::collection::vec(-5.0f64..5.0, 3..30)) {
            let ys: Vec<f64> = xs.iter().map(|v| v.cos()).collect();
            let fx: Vec<f64> = xs.iter().map(|v| v.exp() * 3.0 - 1.0).collect();
            if let (Ok(r1), Ok(r2)) = (spearman(&xs, &ys), spearman(&fx, &ys)) {
                prop_assert!((r1 - r2).abs() < 1e-10);
            }
        }
    }
}
