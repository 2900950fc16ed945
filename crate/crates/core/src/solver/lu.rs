//! Dense LU factorisation with partial pivoting. O(n³) factor, O(n²) solve.

use crate::scalar::Scalar;

/// Pivots at or below this fraction of the largest entry of their original
/// column are treated as zero.
pub const PIVOT_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularPivot {
    /// Column (unknown) at which elimination broke down.
    pub column: usize,
}

/// Packed L (unit lower, below diagonal) and U factors with row permutation.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> LuFactors<T> {
    /// Factor a row-major `n x n` matrix.
    pub fn factor(mut a: Vec<T>, n: usize) -> Result<Self, SingularPivot> {
        assert_eq!(a.len(), n * n, "matrix is not square");
        let col_scale: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|i| a[i * n + j].modulus()).fold(0.0, f64::max))
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (p, best) =
                (k..n)
                    .map(|i| (i, a[i * n + k].modulus()))
                    .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= PIVOT_THRESHOLD * col_scale[k] || best == 0.0 {
                return Err(SingularPivot { column: k });
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let factor = a[i * n + k] / pivot;
                if factor == T::ZERO {
                    continue;
                }
                a[i * n + k] = factor;
                for j in k + 1..n {
                    let u = a[k * n + j];
                    a[i * n + j] -= factor * u;
                }
            }
        }
        Ok(LuFactors { n, lu: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Forward then backward substitution for one right-hand side.
    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let mut x: Vec<T> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let mut s = x[i];
            for (l, xj) in row.iter().zip(&x[..i]) {
                s -= *l * *xj;
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let mut s = x[i];
            for (u, xj) in row.iter().zip(&x[i + 1..]) {
                s -= *u * *xj;
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }
}

/// `‖A x − b‖∞` for a row-major square matrix.
pub fn residual_inf<T: Scalar>(a: &[T], x: &[T], b: &[T]) -> f64 {
    let n = b.len();
    (0..n)
        .map(|i| {
            let mut s = -b[i];
            for j in 0..n {
                s += a[i * n + j] * x[j];
            }
            s.modulus()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn needs_pivoting() {
        // zero on the leading diagonal
        let a = vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        let lu = LuFactors::factor(a.clone(), 3).unwrap();
        let b = [3.0, 3.0, 7.0];
        let x = lu.solve(&b);
        assert!(residual_inf(&a, &x, &b) < 1e-14);
        // x = (2, 1, 1)
        for (got, want) in x.iter().zip([2.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn reports_zero_column() {
        let a = vec![1.0, 0.0, 2.0, 0.0];
        assert_eq!(LuFactors::factor(a, 2).unwrap_err(), SingularPivot { column: 1 });
    }

    #[test]
    fn reports_dependent_rows() {
        let a = vec![1.0, 2.0, 2.0, 4.0];
        assert!(LuFactors::factor(a, 2).is_err());
    }

    #[test]
    fn complex_system() {
        let j = Complex64::i();
        let one = Complex64::ONE;
        let a = vec![one + j, -one, -one, one - j];
        let b = [j, one];
        let x = LuFactors::factor(a.clone(), 2).unwrap().solve(&b);
        assert!(residual_inf(&a, &x, &b) < 1e-14);
    }

    proptest! {
        #[test]
        fn residual_small_on_diagonally_dominant(
            entries in proptest::collection::vec(-1.0f64..1.0, 36),
            b in proptest::collection::vec(-10.0f64..10.0, 6),
        ) {
            let mut a = entries;
            for i in 0..6 {
                a[i * 6 + i] += 7.0 * if i % 2 == 0 { 1.0 } else { -1.0 };
            }
            let x = LuFactors::factor(a.clone(), 6).unwrap().solve(&b);
            prop_assert!(residual_inf(&a, &x, &b) <= 1e-9 * b.iter().fold(1.0f64, |m, v| m.max(v.abs())));
        }
    }
}
