//! Truncated power series over Q.

use rug::Rational;

/// Coefficients of z^0..z^len-1; everything beyond is unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    c: Vec<Rational>,
}

impl QSeries {
    pub fn zero(len: usize) -> Self {
        QSeries { c: vec![Rational::new(); len] }
    }

    pub fn constant(q: Rational, len: usize) -> Self {
        let mut s = QSeries::zero(len);
        if len > 0 {
            s.c[0] = q;
        }
        s
    }

    /// From leading coefficients, padded with zeros or truncated.
    pub fn from_coeffs(mut v: Vec<Rational>, len: usize) -> Self {
        v.resize(len, Rational::new());
        QSeries { c: v }
    }

    /// z^k.
    pub fn monomial(k: usize, len: usize) -> Self {
        let mut s = QSeries::zero(len);
        if k < len {
            s.c[k] = Rational::from(1);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn constant_term(&self) -> Rational {
        self.c.first().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        QSeries { c: self.c.iter().zip(&o.c).map(|(a, b)| Rational::from(a + b)).collect() }
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        QSeries { c: self.c.iter().zip(&o.c).map(|(a, b)| Rational::from(a - b)).collect() }
    }

    pub fn scale(&self, q: &Rational) -> QSeries {
        QSeries { c: self.c.iter().map(|a| Rational::from(a * q)).collect() }
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        let n = self.len().min(o.len());
        let mut c = vec![Rational::new(); n];
        for (i, a) in self.c.iter().take(n).enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().take(n - i).enumerate() {
                c[i + j] += Rational::from(a * b);
            }
        }
        QSeries { c }
    }

    /// `p(self)` for a polynomial with coefficients `p` (Horner).
    pub fn compose_poly(&self, p: &[Rational]) -> QSeries {
        let mut acc = QSeries::zero(self.len());
        for k in p.iter().rev() {
            acc = acc.mul(self);
            acc.c[0] += k;
        }
        acc
    }

    /// `f(self)` for a power series `f`; needs a vanishing constant term.
    pub fn compose(&self, f: &[Rational]) -> Option<QSeries> {
        if self.constant_term() != 0 {
            return None;
        }
        let n = self.len();
        Some(self.compose_poly(&f[..f.len().min(n)]))
    }

    /// `self^alpha` for a series with constant term 1, from `s f' = alpha s' f`.
    pub fn pow(&self, alpha: &Rational) -> Option<QSeries> {
        if self.constant_term() != 1 {
            return None;
        }
        let n = self.len();
        let mut f = vec![Rational::new(); n];
        if n == 0 {
            return Some(QSeries { c: f });
        }
        f[0] = Rational::from(1);
        for k in 1..n {
            let mut acc = Rational::new();
            for j in 1..=k {
                if self.c[j] == 0 {
                    continue;
                }
                let w = Rational::from(alpha * j as u64) - Rational::from((k - j) as u64);
                acc += w * &self.c[j] * &f[k - j];
            }
            f[k] = acc / k as u64;
        }
        Some(QSeries { c: f })
    }

    /// Index of the first differing coefficient.
    pub fn first_difference(&self, o: &QSeries) -> Option<usize> {
        self.c.iter().zip(&o.c).position(|(a, b)| a != b)
    }
}
