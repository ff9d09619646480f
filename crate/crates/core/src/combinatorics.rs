//! Composition polynomials `p_{j,i}` and `r_l` in the eigenvalue
//! coefficients `alpha_1, alpha_2, ...`.
//!
//! `p_{j,i}` is the coefficient of `z^j` in `(sum_q alpha_q z^q)^i`;
//! `r_l = p_{m+l,m} - m alpha_1^(m-1) alpha_{l+1}` collects the part of
//! `p_{m+l,m}` that does not involve `alpha_{l+1}`. Both are computed by
//! recursions that divide by `alpha_1`, so `alpha_1 != 0` is required.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("alpha_1 is zero; the recursions divide by it")]
    AlphaOneZero,
    #[error("need alpha_1..alpha_{needed}, only {available} supplied")]
    NotEnoughAlphas { needed: usize, available: usize },
}

/// Incrementally extended tables of `p_{j,i}` and `r_l` for a fixed `m`.
///
/// After `k` calls to [`PolyTables::push_alpha`] the table holds rows
/// `p_{j,*}` for `j <= k`; `r_l` can be extended up to `l = k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTables<S> {
    m: usize,
    alphas: Vec<S>,
    p: Vec<Vec<S>>,
    r: Vec<S>,
}

impl<S: Scalar> PolyTables<S> {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            alphas: Vec::new(),
            p: vec![vec![S::one()]],
            r: Vec::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of alphas pushed so far.
    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    /// `alpha_k`, 1-based.
    pub fn alpha(&self, k: usize) -> &S {
        &self.alphas[k - 1]
    }

    pub fn alphas(&self) -> &[S] {
        &self.alphas
    }

    /// `p_{j,i}` for `i <= j <= order()`.
    pub fn p(&self, j: usize, i: usize) -> &S {
        &self.p[j][i]
    }

    pub fn p_rows(&self) -> &[Vec<S>] {
        &self.p
    }

    /// `r_l`, 1-based; valid for `l <= r_len()`.
    pub fn r(&self, l: usize) -> &S {
        &self.r[l - 1]
    }

    pub fn r_len(&self) -> usize {
        self.r.len()
    }

    pub fn r_values(&self) -> &[S] {
        &self.r
    }

    /// Appends `alpha_{k}` (`k = order() + 1`) and fills row `p_{k,*}`.
    pub fn push_alpha(&mut self, alpha: S) -> Result<(), CombinatoricsError> {
        if self.alphas.is_empty() && alpha.is_exact_zero() {
            return Err(CombinatoricsError::AlphaOneZero);
        }
        self.alphas.push(alpha);
        let k = self.alphas.len();
        let a1 = self.alphas[0].clone();
        let mut row = Vec::with_capacity(k + 1);
        row.push(S::zero());
        for i in 1..k {
            // p_{k,i} = 1/((k-i) a1) sum_{q=i}^{k-1} [(k+1-q) i - q] a_{k+1-q} p_{q,i}
            let mut acc = S::zero();
            for q in i..k {
                let weight = ((k + 1 - q) * i) as i64 - q as i64;
                if weight == 0 {
                    continue;
                }
                acc = acc + S::from_i64(weight) * self.alphas[k - q].clone() * self.p[q][i].clone();
            }
            row.push(acc / (S::from_i64((k - i) as i64) * a1.clone()));
        }
        row.push(a1.pow(k as u32));
        self.p.push(row);
        Ok(())
    }

    /// Appends `r_{l}` (`l = r_len() + 1`); needs `alpha_1..alpha_l`.
    pub fn extend_r(&mut self) -> Result<(), CombinatoricsError> {
        let l = self.r.len() + 1;
        if self.alphas.len() < l {
            return Err(CombinatoricsError::NotEnoughAlphas {
                needed: l,
                available: self.alphas.len(),
            });
        }
        let value = if l == 1 {
            S::zero()
        } else {
            let m = self.m as i64;
            let a = |q: usize| self.alphas[q - 1].clone();
            let a1 = a(1);
            let mut with_r = S::zero();
            let mut with_alpha = S::zero();
            for j in 1..l {
                let weight = (l + 1 - j) as i64 * m - (m + j as i64);
                if weight == 0 {
                    continue;
                }
                let w = S::from_i64(weight);
                with_r = with_r + w.clone() * a(l + 1 - j) * self.r[j - 1].clone();
                with_alpha = with_alpha + w * a(l + 1 - j) * a(j + 1);
            }
            let a1_pow = if self.m >= 2 {
                a1.pow(self.m as u32 - 2)
            } else {
                a1.inv()
            };
            with_r / (S::from_i64(l as i64) * a1) + S::from_ratio(m, l as i64) * a1_pow * with_alpha
        };
        self.r.push(value);
        Ok(())
    }
}

/// Rows `p_{j,0..=min(j, i_max)}` for `j <= j_max`.
pub fn p_table<S: Scalar>(
    alphas: &[S],
    j_max: usize,
    i_max: usize,
) -> Result<Vec<Vec<S>>, CombinatoricsError> {
    if alphas.len() < j_max {
        return Err(CombinatoricsError::NotEnoughAlphas {
            needed: j_max,
            available: alphas.len(),
        });
    }
    let mut tables = PolyTables::new(1);
    for a in &alphas[..j_max] {
        tables.push_alpha(a.clone())?;
    }
    Ok(tables
        .p
        .into_iter()
        .map(|mut row| {
            row.truncate(i_max + 1);
            row
        })
        .collect())
}

/// `r_1, ..., r_{l_max}` for multiplicity `m`.
pub fn r_sequence<S: Scalar>(
    alphas: &[S],
    l_max: usize,
    m: usize,
) -> Result<Vec<S>, CombinatoricsError> {
    if alphas.len() < l_max {
        return Err(CombinatoricsError::NotEnoughAlphas {
            needed: l_max,
            available: alphas.len(),
        });
    }
    if alphas.first().is_some_and(S::is_exact_zero) {
        return Err(CombinatoricsError::AlphaOneZero);
    }
    let mut tables = PolyTables::new(m);
    tables.alphas = alphas[..l_max].to_vec();
    for _ in 0..l_max {
        tables.extend_r()?;
    }
    Ok(tables.r)
}

/// Definitional sums over compositions. Exponential cost; meant for
/// self-checks with small indices.
#[cfg(any(test, feature = "testing"))]
pub mod oracle {
    use crate::scalar::Scalar;

    /// Sum over compositions `s_1 + ... + s_parts = total` with
    /// `1 <= s_k <= max_part` of `prod alpha_{s_k}`.
    fn composition_sum<S: Scalar>(alphas: &[S], total: usize, parts: usize, max_part: usize) -> S {
        if parts == 0 {
            return if total == 0 { S::one() } else { S::zero() };
        }
        let mut acc = S::zero();
        for first in 1..=max_part.min(total) {
            if total - first < parts - 1 {
                break;
            }
            let rest = composition_sum(alphas, total - first, parts - 1, max_part);
            if !rest.is_exact_zero() {
                acc = acc + alphas[first - 1].clone() * rest;
            }
        }
        acc
    }

    /// `p_{j,i}` straight from its definition.
    pub fn p_bruteforce<S: Scalar>(alphas: &[S], j: usize, i: usize) -> S {
        assert!(j >= i, "p_(j,i) needs j >= i");
        if i == 0 {
            return if j == 0 { S::one() } else { S::zero() };
        }
        composition_sum(alphas, j, i, j - i + 1)
    }

    /// `r_l` straight from its definition.
    pub fn r_bruteforce<S: Scalar>(alphas: &[S], l: usize, m: usize) -> S {
        assert!(l >= 1);
        if l == 1 {
            return S::zero();
        }
        composition_sum(alphas, m + l, m, l)
    }
}
