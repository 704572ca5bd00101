//! Exact-rational word coefficients `f`, `g`, `h` and the nested-commutator
//! series `M(A, B)` with `e^{M(A,B)} = e^A e^B`.
//!
//! A word `c̄ = (c₁, …, cₙ)` over `{0, 1}` stands for the monomial
//! `A^{1−c₁}B^{c₁}⋯A^{1−cₙ}B^{cₙ}` (`0 ↦ A`, `1 ↦ B`) and for the operator
//! `ad(A)^{1−c₁}ad(B)^{c₁}⋯` applied to `[A, B]`. Words of length `n` are
//! indexed by the integer whose binary digits, most significant first, are
//! `c₁ … cₙ`.

use std::collections::HashMap;
use std::f64::consts::LN_2;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::{ad_operator_norm, ComplexMatrix, Tolerances};

/// Largest word length for which tables may be built.
pub const ORDER_CAP: usize = 10;

/// Default truncation order of the `M(A, B)` series.
pub const DEFAULT_BCH_ORDER: usize = 8;

/// Finite binary word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord {
    len: u8,
    bits: u32,
}

impl BinaryWord {
    pub const EMPTY: BinaryWord = BinaryWord { len: 0, bits: 0 };

    pub fn new(letters: &[u8]) -> Self {
        assert!(letters.len() <= 31, "word too long");
        let bits = letters.iter().fold(0u32, |acc, &c| {
            assert!(c <= 1, "letters must be 0 or 1");
            (acc << 1) | c as u32
        });
        Self { len: letters.len() as u8, bits }
    }

    pub fn from_index(len: usize, bits: u32) -> Self {
        assert!(len <= 31 && (len == 31 || bits < (1u32 << len)));
        Self { len: len as u8, bits }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self) -> u32 {
        self.bits
    }

    /// Letter `c_{k+1}` (zero-based `k`).
    pub fn letter(&self, k: usize) -> u8 {
        ((self.bits >> (self.len as usize - 1 - k)) & 1) as u8
    }

    pub fn letters(&self) -> Vec<u8> {
        (0..self.len()).map(|k| self.letter(k)).collect()
    }

    /// Number of ones.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn concat(&self, other: &BinaryWord) -> BinaryWord {
        BinaryWord { len: self.len + other.len, bits: (self.bits << other.len) | other.bits }
    }

    pub fn push(&self, c: u8) -> BinaryWord {
        self.concat(&BinaryWord { len: 1, bits: c as u32 })
    }

    pub fn prepend(&self, c: u8) -> BinaryWord {
        BinaryWord { len: 1, bits: c as u32 }.concat(self)
    }

    /// `1 − c̄` letterwise.
    pub fn complement(&self) -> BinaryWord {
        let mask = if self.len == 0 { 0 } else { u32::MAX >> (32 - self.len as u32) };
        BinaryWord { len: self.len, bits: !self.bits & mask }
    }

    pub fn reversed(&self) -> BinaryWord {
        let mut letters = self.letters();
        letters.reverse();
        BinaryWord::new(&letters)
    }

    /// Letters `k..end` (zero-based).
    pub fn slice(&self, start: usize, end: usize) -> BinaryWord {
        BinaryWord::new(&self.letters()[start..end])
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters().iter().map(|c| char::from(b'0' + c)).collect();
        write!(f, "({s})")
    }
}

/// Exact coefficients for every word up to a maximum length.
#[derive(Clone, Debug, PartialEq)]
pub struct WordTable {
    levels: Vec<Vec<BigRational>>,
}

impl WordTable {
    /// Largest stored word length; `None` for an empty table.
    pub fn order(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn get(&self, w: &BinaryWord) -> Option<&BigRational> {
        self.levels.get(w.len()).and_then(|l| l.get(w.index() as usize))
    }

    pub fn at(&self, letters: &[u8]) -> &BigRational {
        self.get(&BinaryWord::new(letters)).expect("word beyond table order")
    }

    pub fn level(&self, n: usize) -> &[BigRational] {
        &self.levels[n]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BinaryWord, &BigRational)> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(n, l)| l.iter().enumerate().map(move |(i, q)| (BinaryWord::from_index(n, i as u32), q)))
    }

    fn to_f64_levels(&self) -> Vec<Vec<f64>> {
        self.levels.iter().map(|l| l.iter().map(ratio_to_f64).collect()).collect()
    }
}

pub fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

type Poly = HashMap<BinaryWord, BigRational>;

fn poly_mul(a: &Poly, b: &Poly, max_len: usize) -> Poly {
    let mut out = Poly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            if wa.len() + wb.len() <= max_len {
                *out.entry(wa.concat(wb)).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Coefficients `f(c̄)` of `Σ_{k≥1} (−1)^{k−1}/k · Y^{k−1}` with
/// `Y = e^A e^B − I`, for every word of length at most `order`.
pub fn build_f_table(order: usize) -> Result<WordTable> {
    if order > ORDER_CAP {
        return Err(Error::OrderTooLarge { requested: order, cap: ORDER_CAP });
    }
    // Y = Σ_{p+q≥1} A^p B^q / (p! q!).
    let mut y = Poly::new();
    for p in 0..=order {
        for q in 0..=(order - p) {
            if p + q == 0 {
                continue;
            }
            let mut letters = vec![0u8; p];
            letters.extend(std::iter::repeat_n(1u8, q));
            let coef = BigRational::new(BigInt::one(), factorial(p) * factorial(q));
            y.insert(BinaryWord::new(&letters), coef);
        }
    }
    let mut total = Poly::new();
    let mut power = Poly::from([(BinaryWord::EMPTY, BigRational::one())]);
    for k in 1..=(order + 1) {
        let sign = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        let scale = BigRational::new(sign, BigInt::from(k));
        for (w, c) in &power {
            *total.entry(*w).or_insert_with(BigRational::zero) += c * &scale;
        }
        power = poly_mul(&power, &y, order);
        if power.is_empty() {
            break;
        }
    }
    let levels = (0..=order)
        .map(|n| {
            (0..(1u32 << n))
                .map(|i| total.get(&BinaryWord::from_index(n, i)).cloned().unwrap_or_else(BigRational::zero))
                .collect()
        })
        .collect();
    Ok(WordTable { levels })
}

/// `g` up to length `order(f) − 1` and `h` up to length `order(f) − 2`.
pub fn build_g_h_tables(f: &WordTable) -> Result<(WordTable, WordTable)> {
    let f_order = f.order().unwrap_or(0);
    if f.order().is_none() || f_order < 1 {
        return Err(Error::InsufficientOrder { required: 1, available: f_order });
    }
    let g_order = f_order - 1;
    let mut g_levels = Vec::with_capacity(g_order + 1);
    for n in 0..=g_order {
        let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let level = (0..(1u32 << n))
            .map(|i| {
                let w = BinaryWord::from_index(n, i);
                let a = f.get(&w.push(1)).expect("f order");
                let b = f.get(&w.complement().push(1)).expect("f order");
                let num = -a - b * BigRational::from_integer(sign.clone());
                num / BigRational::from_integer(BigInt::from(n + 2))
            })
            .collect();
        g_levels.push(level);
    }
    let g = WordTable { levels: g_levels };
    let mut h_levels = Vec::new();
    if g_order >= 1 {
        for n in 0..g_order {
            let level = (0..(1u32 << n)).map(|i| h_value(&g, &BinaryWord::from_index(n, i))).collect();
            h_levels.push(level);
        }
    }
    Ok((g, WordTable { levels: h_levels }))
}

fn h_value(g: &WordTable, w: &BinaryWord) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut h = &two * g.get(&w.prepend(1)).unwrap() - &two * g.get(&w.prepend(0)).unwrap();
    let n = w.len();
    for m in 0..=n {
        let left = g.get(&w.slice(0, m).reversed()).unwrap();
        let right = g.get(&w.slice(m, n)).unwrap();
        let term = left * right;
        if m % 2 == 0 {
            h += term;
        } else {
            h -= term;
        }
    }
    h
}

/// `f`, `g`, `h` tables plus floating copies of `g` for series evaluation.
#[derive(Clone, Debug)]
pub struct WordCoefficientTable {
    pub f: WordTable,
    pub g: WordTable,
    pub h: WordTable,
    g_float: Vec<Vec<f64>>,
    g_abs_sums: Vec<f64>,
}

impl WordCoefficientTable {
    /// Builds `f` through length `f_order`, `g` through `f_order − 1` and `h`
    /// through `f_order − 2`.
    pub fn build(f_order: usize) -> Result<Self> {
        let f = build_f_table(f_order)?;
        let (g, h) = build_g_h_tables(&f)?;
        let g_float = g.to_f64_levels();
        let g_abs_sums = g_float.iter().map(|l| l.iter().map(|x| x.abs()).sum()).collect();
        Ok(Self { f, g, h, g_float, g_abs_sums })
    }

    /// Tables sufficient for `M(A, B)` through words of length `order`.
    pub fn for_bch_order(order: usize) -> Result<Self> {
        Self::build(order + 1)
    }

    /// Largest `g` word length available.
    pub fn g_order(&self) -> usize {
        self.g.order().unwrap_or(0)
    }

    pub fn h_order(&self) -> Option<usize> {
        self.h.order()
    }
}

/// Convergence constants derived from a truncated `h` series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceConstants {
    pub delta_hat: f64,
    pub capital_delta_hat: f64,
    pub truncation_order: usize,
    pub safety_factor: f64,
    /// `Σ_{n=1}^{N} Σ |h(c̄)| (log 2 / 3)^n`.
    pub partial_sum: f64,
}

/// `δ̂ = min((1/12)·S_N⁻¹, 1)` from the partial sum `S_N` through length `order`,
/// and `Δ̂ = safety·min((log 2/6)·δ̂, (log 2)/4)`.
pub fn delta_constants(h: &WordTable, order: usize, safety: f64) -> Result<ConvergenceConstants> {
    let available = h.order().unwrap_or(0);
    if h.order().is_none() || available < order || order < 1 {
        return Err(Error::InsufficientOrder { required: order.max(1), available });
    }
    if !(safety > 0.0 && safety <= 1.0) {
        return Err(Error::InvalidInput(format!("safety factor {safety} outside (0, 1]")));
    }
    let x = LN_2 / 3.0;
    let partial_sum: f64 = (1..=order)
        .map(|n| {
            let s: BigRational = h.level(n).iter().map(|q| q.abs()).sum();
            ratio_to_f64(&s) * x.powi(n as i32)
        })
        .sum();
    let delta_hat = if partial_sum > 0.0 { (1.0 / (12.0 * partial_sum)).min(1.0) } else { 1.0 };
    let big = safety * (LN_2 / 6.0 * delta_hat).min(LN_2 / 4.0);
    Ok(ConvergenceConstants {
        delta_hat,
        capital_delta_hat: big,
        truncation_order: order,
        safety_factor: safety,
        partial_sum,
    })
}

/// Result of a truncated `M(A, B)` evaluation.
#[derive(Clone, Debug)]
pub struct BchOutput {
    pub m: ComplexMatrix,
    /// Estimated Frobenius norm of the omitted tail.
    pub residual_estimate: f64,
    /// Longest word length actually evaluated.
    pub levels_used: usize,
}

/// `M(A, B) = A + B + Σ g(c̄)·ad(c̄)([A, B])` through words of length `order`.
///
/// Evaluation stops early once every nested commutator of the current length
/// is below `1e-17·(‖A‖F + ‖B‖F)`; longer words only shrink further.
pub fn bch_m(a: &ComplexMatrix, b: &ComplexMatrix, table: &WordCoefficientTable, order: usize) -> Result<BchOutput> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if order > table.g_order() {
        return Err(Error::InsufficientOrder { required: order, available: table.g_order() });
    }
    let (na, nb) = (a.frobenius_norm(), b.frobenius_norm());
    // ‖ad X‖op ≤ 2‖X‖op ≤ 2‖X‖F; fall back to the exact norms only when needed.
    let (mut ad_a, mut ad_b) = (2.0 * na, 2.0 * nb);
    if ad_a + ad_b >= LN_2 {
        ad_a = ad_operator_norm(a);
        ad_b = ad_operator_norm(b);
        if ad_a + ad_b >= LN_2 {
            return Err(Error::ConvergenceGateFailed { sum: ad_a + ad_b });
        }
    }
    let dim = a.dim();
    let sq = dim * dim;
    let skew = a.anti_hermitian_residual() == 0.0 && b.anti_hermitian_residual() == 0.0;
    let (sa, sb) = (a.as_slice(), b.as_slice());
    let mut m: Vec<Complex64> = sa.iter().zip(sb).map(|(x, y)| x + y).collect();
    let mut level = vec![Complex64::new(0.0, 0.0); sq];
    commutator_into(sa, sb, &mut level, dim, skew);
    let scale = na + nb;
    let floor = 1e-17 * scale;
    let mut level_max = norm_of(&level);
    let mut levels_used = 0;
    add_scaled(&mut m, table.g_float[0][0], &level);
    let mut next = Vec::new();
    // ‖ad(X)W‖F ≤ 2‖X‖F‖W‖F bounds every remaining level from the current one.
    let rho = 2.0 * na.max(nb);
    for n in 1..=order {
        let mut tail = 0.0;
        let mut growth = 1.0;
        for gs in &table.g_abs_sums[n..=order] {
            growth *= rho;
            tail += gs * growth;
        }
        if level_max * tail <= floor {
            break;
        }
        let half = 1usize << (n - 1);
        let coeffs = &table.g_float[n];
        next.clear();
        next.resize(2 * half * sq, Complex64::new(0.0, 0.0));
        level_max = 0.0;
        for (idx, coef) in coeffs.iter().enumerate() {
            let op = if idx < half { sa } else { sb };
            let src = &level[(idx & (half - 1)) * sq..][..sq];
            let w = &mut next[idx * sq..][..sq];
            commutator_into(op, src, w, dim, skew);
            if *coef != 0.0 {
                add_scaled(&mut m, *coef, w);
            }
            level_max = level_max.max(norm_of(w));
        }
        std::mem::swap(&mut level, &mut next);
        levels_used = n;
    }
    let m = ComplexMatrix::from_row_major(dim, m)?;
    let q = 2.0 * ad_a.max(ad_b) / LN_2;
    let gamma = table.g_abs_sums[levels_used];
    let residual_estimate = if level_max == 0.0 {
        0.0
    } else if q < 1.0 {
        level_max * gamma.max(1.0) * q / (1.0 - q)
    } else {
        f64::INFINITY
    };
    Ok(BchOutput { m: m.anti_hermitian_part(), residual_estimate, levels_used })
}

fn norm_of(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn add_scaled(acc: &mut [Complex64], s: f64, x: &[Complex64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b * s;
    }
}

/// `out = XY − YX` for row-major `dim × dim` blocks. With `skew` both inputs
/// are anti-Hermitian, so only the upper triangle is computed.
fn commutator_into(x: &[Complex64], y: &[Complex64], out: &mut [Complex64], dim: usize, skew: bool) {
    for i in 0..dim {
        let j0 = if skew { i } else { 0 };
        for j in j0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += x[i * dim + k] * y[k * dim + j] - y[i * dim + k] * x[k * dim + j];
            }
            out[i * dim + j] = acc;
            if skew {
                out[j * dim + i] = -acc.conj();
            }
        }
        if skew {
            out[i * dim + i].re = 0.0;
        }
    }
}

/// Both sides of `‖M(A,B)‖F² ≤ 2‖A‖F² + 2‖B‖F² − ‖A − B‖F²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn check_norm_inequality(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    table: &WordCoefficientTable,
    order: usize,
    gate: f64,
    tol: &Tolerances,
) -> Result<NormInequality> {
    for x in [a, b] {
        let residual = x.anti_hermitian_residual();
        if residual > tol.eq_tol {
            return Err(Error::NotAntiHermitian { residual });
        }
        let norm = x.frobenius_norm();
        if norm >= gate {
            return Err(Error::NormGateFailed { norm, gate });
        }
    }
    let m = bch_m(a, b, table, order)?.m;
    let lhs = m.frobenius_norm_sqr();
    let rhs = 2.0 * a.frobenius_norm_sqr() + 2.0 * b.frobenius_norm_sqr() - (a - b).frobenius_norm_sqr();
    Ok(NormInequality { lhs, rhs, holds: lhs <= rhs + 10.0 * tol.eq_tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{mat_exp, principal_log_unitary};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn word_indexing() {
        let w = BinaryWord::new(&[1, 0, 1, 1]);
        assert_eq!(w.index(), 0b1011);
        assert_eq!(w.letters(), vec![1, 0, 1, 1]);
        assert_eq!(w.complement().letters(), vec![0, 1, 0, 0]);
        assert_eq!(w.reversed().letters(), vec![1, 1, 0, 1]);
        assert_eq!(w.slice(1, 3).letters(), vec![0, 1]);
        assert_eq!(w.weight(), 3);
        assert_eq!(BinaryWord::EMPTY.complement(), BinaryWord::EMPTY);
    }

    #[test]
    fn listed_values() {
        let t = WordCoefficientTable::build(4).unwrap();
        assert_eq!(t.f.at(&[]), &q(1, 1));
        assert_eq!(t.f.at(&[0]), &q(-1, 2));
        assert_eq!(t.f.at(&[1]), &q(-1, 2));
        assert_eq!(t.f.at(&[0, 0]), &q(1, 12));
        assert_eq!(t.f.at(&[0, 1]), &q(-1, 6));
        assert_eq!(t.f.at(&[1, 0]), &q(1, 3));
        assert_eq!(t.f.at(&[1, 1]), &q(1, 12));
        assert_eq!(t.g.at(&[]), &q(1, 2));
        assert_eq!(t.g.at(&[0]), &q(1, 12));
        assert_eq!(t.g.at(&[1]), &q(-1, 12));
        assert_eq!(t.h.at(&[]), &q(-1, 12));
    }

    #[test]
    fn order_cap_and_insufficient_order() {
        assert!(matches!(build_f_table(11), Err(Error::OrderTooLarge { .. })));
        let f0 = build_f_table(0).unwrap();
        assert!(matches!(build_g_h_tables(&f0), Err(Error::InsufficientOrder { .. })));
        let t = WordCoefficientTable::build(4).unwrap();
        assert!(matches!(delta_constants(&t.h, 3, 0.5), Err(Error::InsufficientOrder { .. })));
    }

    /// Oracle: for a word `w` of length `n`, the strictly upper-triangular
    /// `(n+1)×(n+1)` matrices `A' = Σ_{w_k=0} E_{k,k+1}`, `B' = Σ_{w_k=1} E_{k,k+1}`
    /// make entry `(0, n)` of `Σ (−1)^{k−1}/k·Y^{k−1}` equal to `f(w)`; the
    /// series is finite because `Y` is nilpotent.
    fn fitted_f(w: &BinaryWord) -> f64 {
        let n = w.len();
        let dim = n + 1;
        let mut a = ComplexMatrix::zeros(dim);
        let mut b = ComplexMatrix::zeros(dim);
        for k in 0..n {
            let target = if w.letter(k) == 0 { &mut a } else { &mut b };
            target.set(k, k + 1, crate::numerics::c64(1.0, 0.0));
        }
        let y = &mat_exp(&a).matmul(&mat_exp(&b)) - &ComplexMatrix::identity(dim);
        let mut power = ComplexMatrix::identity(dim);
        let mut total = ComplexMatrix::zeros(dim);
        for k in 1..=(n + 1) {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            total.axpy(sign / k as f64, &power);
            power = power.matmul(&y);
        }
        total.get(0, n).re
    }

    #[test]
    fn f_matches_nilpotent_fit() {
        let t = build_f_table(6).unwrap();
        for (w, c) in t.iter() {
            assert!((ratio_to_f64(c) - fitted_f(&w)).abs() < 1e-12, "{w:?}");
        }
    }

    #[test]
    fn g_and_h_identities_hold_exactly() {
        let t = WordCoefficientTable::build(8).unwrap();
        for (w, g) in t.g.iter() {
            let n = w.len();
            let sign = if n % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            let lhs = q(n as i64 + 2, 1) * g;
            let rhs = -t.f.get(&w.push(1)).unwrap() - sign * t.f.get(&w.complement().push(1)).unwrap();
            assert_eq!(lhs, rhs);
        }
        for (w, h) in t.h.iter() {
            assert_eq!(h, &h_value(&t.g, &w));
        }
    }

    #[test]
    fn delta_constants_behaviour() {
        let t = WordCoefficientTable::build(10).unwrap();
        let c1 = delta_constants(&t.h, 1, 1.0).unwrap();
        // Only |h(0)| + |h(1)| = 1/12 enters at N = 1.
        let s1 = (1.0 / 12.0) * (LN_2 / 3.0);
        assert!((c1.partial_sum - s1).abs() < 1e-16);
        assert_eq!(c1.delta_hat, 1.0);
        let c4 = delta_constants(&t.h, 4, 1.0).unwrap();
        let c6 = delta_constants(&t.h, 6, 1.0).unwrap();
        assert!(c6.delta_hat <= c4.delta_hat);
        assert!(c6.partial_sum >= c4.partial_sum);
        let c8 = delta_constants(&t.h, 8, 0.5).unwrap();
        assert!((c8.capital_delta_hat - 0.5 * LN_2 / 6.0).abs() < 1e-16);
        assert!(c8.capital_delta_hat <= LN_2 / 4.0);
    }

    #[test]
    fn bch_trivial_cases() {
        let t = WordCoefficientTable::for_bch_order(8).unwrap();
        let mut r = crate::random::rng(1);
        let a = crate::random::anti_hermitian(&mut r, 3, 0.1);
        let zero = ComplexMatrix::zeros(3);
        assert!(bch_m(&a, &zero, &t, 8).unwrap().m.approx_eq(&a, 1e-17));
        let b = a.scale_re(0.7);
        assert!(bch_m(&a, &b, &t, 8).unwrap().m.approx_eq(&(&a + &b), 1e-16));
    }

    #[test]
    fn bch_leading_terms() {
        let t = WordCoefficientTable::for_bch_order(8).unwrap();
        let mut r = crate::random::rng(2);
        let a = crate::random::anti_hermitian(&mut r, 2, 1e-3);
        let b = crate::random::anti_hermitian(&mut r, 2, 1e-3);
        let ab = a.commutator_unchecked(&b);
        let mut expected = &a + &b;
        expected.axpy(0.5, &ab);
        expected.axpy(1.0 / 12.0, &a.commutator_unchecked(&ab));
        expected.axpy(1.0 / 12.0, &b.commutator_unchecked(&ab.scale_re(-1.0)));
        let m = bch_m(&a, &b, &t, 8).unwrap().m;
        assert!((&m - &expected).frobenius_norm() < 1e-14);
    }

    #[test]
    fn bch_matches_principal_log() {
        let t = WordCoefficientTable::for_bch_order(8).unwrap();
        let mut r = crate::random::rng(3);
        for _ in 0..50 {
            let a = crate::random::anti_hermitian(&mut r, 3, 0.05);
            let b = crate::random::anti_hermitian(&mut r, 3, 0.05);
            let out = bch_m(&a, &b, &t, 8).unwrap();
            let target = mat_exp(&a).matmul(&mat_exp(&b));
            assert!((&mat_exp(&out.m) - &target).frobenius_norm() <= 1e-9);
            let log = principal_log_unitary(&target, 1e-10).unwrap();
            assert!((&out.m - &log).frobenius_norm() <= 1e-13);
        }
    }

    #[test]
    fn bch_gate() {
        let t = WordCoefficientTable::for_bch_order(4).unwrap();
        let a = crate::numerics::pauli::x().mul_i();
        let b = crate::numerics::pauli::y().mul_i();
        assert!(matches!(bch_m(&a, &b, &t, 4), Err(Error::ConvergenceGateFailed { .. })));
        assert!(matches!(bch_m(&a, &b, &t, 5), Err(Error::InsufficientOrder { .. })));
    }

    #[test]
    fn norm_inequality_equality_cases() {
        let t = WordCoefficientTable::for_bch_order(8).unwrap();
        let tol = Tolerances::default();
        let mut r = crate::random::rng(4);
        let a = crate::random::anti_hermitian(&mut r, 3, 0.1);
        let z = ComplexMatrix::zeros(3);
        let n = check_norm_inequality(&a, &z, &t, 8, 0.11, &tol).unwrap();
        assert!((n.lhs - n.rhs).abs() < 1e-16 && n.holds);
        let n = check_norm_inequality(&a, &a, &t, 8, 0.11, &tol).unwrap();
        assert!((n.lhs - 4.0 * a.frobenius_norm_sqr()).abs() < 1e-15 && n.holds);
        let big = a.scale_re(10.0);
        assert!(matches!(check_norm_inequality(&big, &z, &t, 8, 0.11, &tol), Err(Error::NormGateFailed { .. })));
    }
}
