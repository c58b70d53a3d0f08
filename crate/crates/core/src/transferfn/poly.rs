//! Real polynomials as coefficient lists in descending powers.

use num_complex::Complex64;

/// Drops leading zeros; the zero polynomial becomes `[0.0]`.
pub fn trim(p: &[f64]) -> Vec<f64> {
    match p.iter().position(|&c| c != 0.0) {
        Some(i) => p[i..].to_vec(),
        None => vec![0.0],
    }
}

pub fn is_zero(p: &[f64]) -> bool {
    p.iter().all(|&c| c == 0.0)
}

pub fn degree(p: &[f64]) -> usize {
    trim(p).len() - 1
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (i, c) in a.iter().enumerate() {
        out[n - a.len() + i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[n - b.len() + i] += c;
    }
    trim(&out)
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    trim(&a.iter().map(|c| c * k).collect::<Vec<_>>())
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&out)
}

pub fn pow(a: &[f64], n: u32) -> Vec<f64> {
    (0..n).fold(vec![1.0], |acc, _| mul(&acc, a))
}

/// Horner evaluation at a complex point.
pub fn eval(p: &[f64], s: Complex64) -> Complex64 {
    p.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

/// `p(s) / s^deg(p)`, evaluated through the reversed polynomial in `1/s` so
/// that large `|s|` does not overflow.
pub fn eval_reversed(p: &[f64], s: Complex64) -> Complex64 {
    let w = s.inv();
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        assert_eq!(mul(&[1.0, 1.0], &[1.0, -1.0]), vec![1.0, 0.0, -1.0]);
        assert_eq!(add(&[1.0, 0.0, 0.0], &[2.0, 1.0]), vec![1.0, 2.0, 1.0]);
        assert_eq!(add(&[1.0, 1.0], &[-1.0, 0.0]), vec![1.0]);
        assert_eq!(pow(&[1.0, 1.0], 3), vec![1.0, 3.0, 3.0, 1.0]);
        assert_eq!(trim(&[0.0, 0.0]), vec![0.0]);
        assert_eq!(degree(&[0.0, 2.0, 1.0]), 1);
    }

    #[test]
    fn reversed_matches_horner() {
        let p = [2.0, -1.0, 3.0];
        let s = Complex64::new(0.3, 7.0);
        let direct = eval(&p, s) / s.powu(2);
        assert!((eval_reversed(&p, s) - direct).norm() < 1e-14);
    }
}
