//! Multi-index algebra: the `𝐢, 𝐣, 𝐤` bookkeeping used by Taylor
//! corrections, kernel derivatives and moment sums.

use std::fmt;

/// A vector of nonnegative integer exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn unit(d: usize, axis: usize) -> Self {
        let mut v = vec![0; d];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// |𝐢| = i_1 + ... + i_d.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    /// 𝐢! = i_1! ... i_d!  (exact in f64 for the orders used here).
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&k| (1..=k).map(|q| q as f64).product::<f64>())
            .product()
    }

    /// Component-wise sum.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices with |𝐢| ≤ max_order in graded lexicographic order.
pub fn multi_indices(d: usize, max_order: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for ord in 0..=max_order {
        let mut cur = vec![0usize; d];
        emit_of_order(&mut cur, 0, ord, &mut out);
    }
    out
}

fn emit_of_order(cur: &mut Vec<usize>, axis: usize, remaining: usize, out: &mut Vec<MultiIndex>) {
    if axis == cur.len() - 1 {
        cur[axis] = remaining;
        out.push(MultiIndex(cur.clone()));
        cur[axis] = 0;
        return;
    }
    for k in 0..=remaining {
        cur[axis] = k;
        emit_of_order(cur, axis + 1, remaining - k, out);
        cur[axis] = 0;
    }
}

/// x^𝐢 = x_1^{i_1} ... x_d^{i_d}.
pub fn monomial_eval(x: &[f64], i: &MultiIndex) -> f64 {
    assert_eq!(x.len(), i.dim());
    x.iter()
        .zip(&i.0)
        .map(|(&xv, &e)| xv.powi(e as i32))
        .product()
}

#[cfg(test)]
fn binomial(n: usize, k: usize) -> usize {
    let mut r = 1usize;
    for q in 0..k {
        r = r * (n - q) / (q + 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_index_only() {
        assert_eq!(multi_indices(1, 0), vec![MultiIndex(vec![0])]);
    }

    #[test]
    fn graded_lex_d2() {
        let v = multi_indices(2, 1);
        assert_eq!(
            v,
            vec![
                MultiIndex(vec![0, 0]),
                MultiIndex(vec![0, 1]),
                MultiIndex(vec![1, 0])
            ]
        );
    }

    #[test]
    fn count_is_binomial() {
        // |{ |i| <= m }| = C(d+m, d)
        for d in 1..=4 {
            for m in 0..=6 {
                let n = multi_indices(d, m).len();
                assert_eq!(n, binomial(d + m, d), "d={d} m={m}");
            }
        }
    }

    #[test]
    fn monomials() {
        assert_eq!(monomial_eval(&[2.0, 3.0], &MultiIndex(vec![1, 2])), 18.0);
        assert_eq!(monomial_eval(&[7.0, -4.0], &MultiIndex(vec![0, 0])), 1.0);
        assert_eq!(monomial_eval(&[0.0, 5.0], &MultiIndex(vec![1, 0])), 0.0);
    }

    #[test]
    fn factorials() {
        assert_eq!(MultiIndex(vec![0, 0]).factorial(), 1.0);
        assert_eq!(MultiIndex(vec![3, 2]).factorial(), 12.0);
        assert_eq!(MultiIndex(vec![4]).factorial(), 24.0);
    }

    #[test]
    fn no_duplicates() {
        let v = multi_indices(3, 4);
        let mut s = v.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), v.len());
    }
}
