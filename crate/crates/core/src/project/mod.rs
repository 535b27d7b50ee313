//! Two-dimensional PCA projection of sentence or paragraph vectors.
//!
//! Output is `x\ty\tgroup_id\tlabel` per point, plus a sidecar listing the
//! variance along each axis. The vector files written by `encode` also work
//! as input to external t-SNE tools.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;

use crate::numerics::seeded_rng;
use crate::{Error, Result};

pub const POWER_TOLERANCE: f64 = 1e-10;
pub const POWER_MAX_ITERS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedPoint {
    pub x: f64,
    pub y: f64,
    pub group_id: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection2D {
    pub points: Vec<ProjectedPoint>,
    /// Unit principal axes; the largest-magnitude coordinate of each is positive.
    pub components: [Vec<f64>; 2],
    /// Variance along each axis (eigenvalues of the covariance), non-increasing.
    pub explained_variance: [f64; 2],
    /// Total variance (trace of the covariance).
    pub total_variance: f64,
    pub mean: Vec<f64>,
}

impl Projection2D {
    pub fn explained_ratio(&self) -> [f64; 2] {
        self.explained_variance.map(|v| v / self.total_variance)
    }

    /// Coordinates of an arbitrary vector in the projected plane.
    pub fn project(&self, v: &[f64]) -> Result<(f64, f64)> {
        if v.len() != self.mean.len() {
            return Err(Error::shape(self.mean.len(), v.len()));
        }
        let c: Vec<f64> = v.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        Ok((dot(&c, &self.components[0]), dot(&c, &self.components[1])))
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            let _ = writeln!(s, "{}\t{}\t{}\t{}", p.x, p.y, p.group_id, p.label);
        }
        s
    }

    pub fn variance_text(&self) -> String {
        let r = self.explained_ratio();
        format!(
            "component\tvariance\tratio\n1\t{}\t{}\n2\t{}\t{}\ntotal\t{}\t1\n",
            self.explained_variance[0], r[0], self.explained_variance[1], r[1], self.total_variance
        )
    }

    /// Write the point file and a `<path>.variance` sidecar.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_tsv())?;
        let mut side = path.as_os_str().to_owned();
        side.push(".variance");
        std::fs::write(side, self.variance_text())?;
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    for a in against {
        let d = dot(v, a);
        v.iter_mut().zip(a).for_each(|(x, y)| *x -= d * y);
    }
}

fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Leading eigenpair of symmetric `cov` restricted to the complement of `found`.
fn power_iteration(cov: &[Vec<f64>], found: &[Vec<f64>], seed: u64) -> (Vec<f64>, f64) {
    let d = cov.len();
    let mut rng = seeded_rng(seed);
    let mut v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    orthogonalize(&mut v, found);
    normalize(&mut v);
    for _ in 0..POWER_MAX_ITERS {
        let mut w = matvec(cov, &v);
        orthogonalize(&mut w, found);
        if normalize(&mut w) == 0.0 {
            break;
        }
        let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if delta < POWER_TOLERANCE {
            break;
        }
    }
    if dot(&v, &v) < 0.5 {
        // null space: any unit vector orthogonal to what was found
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            orthogonalize(&mut e, found);
            if normalize(&mut e) > 1e-6 {
                v = e;
                break;
            }
        }
    }
    let lambda = dot(&v, &matvec(cov, &v)).max(0.0);
    (v, lambda)
}

fn fix_sign(v: &mut [f64]) {
    let i = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if v[i] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Mean-center, find the top two covariance eigenvectors by power iteration
/// with deflation, and project. `labels` holds `(group_id, label)` per vector.
pub fn pca_project(vectors: &[Vec<f64>], labels: &[(String, String)]) -> Result<Projection2D> {
    if vectors.len() < 3 {
        return Err(Error::invalid(format!("PCA needs at least 3 vectors, got {}", vectors.len())));
    }
    if labels.len() != vectors.len() {
        return Err(Error::shape(vectors.len(), labels.len()));
    }
    let d = vectors[0].len();
    if d < 2 {
        return Err(Error::invalid("PCA needs width at least 2"));
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::shape(d, v.len()));
    }
    if vectors.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("PCA input".into()));
    }
    let n = vectors.len() as f64;
    let mut mean = vec![0.0; d];
    for v in vectors {
        mean.iter_mut().zip(v).for_each(|(m, x)| *m += x / n);
    }
    let centered: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| v.iter().zip(&mean).map(|(x, m)| x - m).collect())
        .collect();
    let mut cov = vec![vec![0.0; d]; d];
    for c in &centered {
        for i in 0..d {
            if c[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                cov[i][j] += c[i] * c[j];
            }
        }
    }
    cov.iter_mut().flatten().for_each(|x| *x /= n - 1.0);
    let total: f64 = (0..d).map(|i| cov[i][i]).sum();
    if total <= 0.0 {
        return Err(Error::invalid("rank-0 data: all vectors are identical"));
    }
    let (mut a1, l1) = power_iteration(&cov, &[], 0x5eed);
    fix_sign(&mut a1);
    // deflate by projecting out the first axis, then re-orthogonalize
    let (mut a2, l2) = power_iteration(&cov, std::slice::from_ref(&a1), 0x5eed + 1);
    orthogonalize(&mut a2, std::slice::from_ref(&a1));
    normalize(&mut a2);
    fix_sign(&mut a2);
    let points = centered
        .iter()
        .zip(labels)
        .map(|(c, (g, l))| ProjectedPoint {
            x: dot(c, &a1),
            y: dot(c, &a2),
            group_id: g.clone(),
            label: l.clone(),
        })
        .collect();
    Ok(Projection2D {
        points,
        components: [a1, a2],
        explained_variance: [l1, l2.min(l1)],
        total_variance: total,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};

    fn labels(n: usize) -> Vec<(String, String)> {
        (0..n).map(|i| ((i % 3).to_string(), format!("p{i}"))).collect()
    }

    #[test]
    fn rank_one_line() {
        let dir = [1.0, -2.0, 0.5, 3.0, 1.0];
        let vs: Vec<Vec<f64>> = (0..20).map(|i| dir.iter().map(|d| d * i as f64 + 1.0).collect()).collect();
        let p = pca_project(&vs, &labels(20)).unwrap();
        assert!(p.explained_ratio()[0] >= 0.999);
        let a = &p.components;
        assert!((dot(&a[0], &a[0]) - 1.0).abs() < 1e-8);
        assert!((dot(&a[1], &a[1]) - 1.0).abs() < 1e-8);
        assert!(dot(&a[0], &a[1]).abs() < 1e-8);
        // largest coordinate of the first axis is positive
        assert!(a[0][3] > 0.0);
    }

    #[test]
    fn isotropic_square() {
        let mut rng = seeded_rng(11);
        let vs: Vec<Vec<f64>> = (0..10_000).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect();
        let p = pca_project(&vs, &labels(10_000)).unwrap();
        let [a, b] = p.explained_variance;
        assert!(a >= b && b / a > 0.9, "{a} {b}");
    }

    #[test]
    fn mean_projects_to_origin() {
        let vs = vec![vec![1.0, 2.0, 0.0], vec![3.0, -1.0, 1.0], vec![0.0, 0.0, 5.0], vec![2.0, 2.0, 2.0]];
        let p = pca_project(&vs, &labels(4)).unwrap();
        let (x, y) = p.project(&p.mean.clone()).unwrap();
        assert!(x.abs() < 1e-12 && y.abs() < 1e-12);
        let tsv = p.to_tsv();
        assert_eq!(tsv.lines().count(), 4);
        assert!(tsv.lines().next().unwrap().ends_with("\t0\tp0"));
    }

    #[test]
    fn errors() {
        assert!(pca_project(&vec![vec![1.0, 2.0]; 3], &labels(3)).is_err());
        assert!(pca_project(&vec![vec![1.0, 2.0]; 2], &labels(2)).is_err());
        assert!(pca_project(&[vec![1.0], vec![2.0], vec![3.0]], &labels(3)).is_err());
    }

    #[test]
    fn writes_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let vs = vec![vec![1.0, 2.0], vec![3.0, -1.0], vec![0.0, 0.5]];
        let p = pca_project(&vs, &labels(3)).unwrap();
        let path = dir.path().join("proj.tsv");
        p.write(&path).unwrap();
        let side = std::fs::read_to_string(dir.path().join("proj.tsv.variance")).unwrap();
        assert!(side.starts_with("component\tvariance\tratio\n1\t"));
    }

    fn sq_err(vs: &[Vec<f64>], p: &Projection2D, k: usize) -> f64 {
        vs.iter()
            .map(|v| {
                let c: Vec<f64> = v.iter().zip(&p.mean).map(|(a, m)| a - m).collect();
                let mut r = c.clone();
                for a in &p.components[..k] {
                    let d = dot(&c, a);
                    r.iter_mut().zip(a).for_each(|(x, y)| *x -= d * y);
                }
                dot(&r, &r)
            })
            .sum()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn second_axis_never_hurts(vs in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 4), 5..20)) {
            if let Ok(p) = pca_project(&vs, &labels(vs.len())) {
                prop_assert!(sq_err(&vs, &p, 2) <= sq_err(&vs, &p, 1) + 1e-9);
                prop_assert!(p.explained_variance[0] >= p.explained_variance[1]);
                prop_assert!(dot(&p.components[0], &p.components[1]).abs() < 1e-8);
            }
        }

        #[test]
        fn permutation_invariant_up_to_sign(vs in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 3), 5..12)) {
            let mut rev = vs.clone();
            rev.reverse();
            if let (Ok(a), Ok(b)) = (pca_project(&vs, &labels(vs.len())), pca_project(&rev, &labels(vs.len()))) {
                let [l1, l2] = a.explained_variance;
                // only compare well-separated spectra
                let l3 = a.total_variance - l1 - l2;
                if l1 - l2 > 1e-3 * l1 && l2 - l3 > 1e-3 * l1 {
                    let n = vs.len();
                    for i in 0..n {
                        prop_assert!((a.points[i].x.abs() - b.points[n - 1 - i].x.abs()).abs() < 1e-5);
                        prop_assert!((a.points[i].y.abs() - b.points[n - 1 - i].y.abs()).abs() < 1e-5);
                    }
                }
            }
        }
    }
}
