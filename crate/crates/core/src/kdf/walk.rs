//! Row-incremental coefficient walk with term-wise limits.
//!
//! Every parameter carries a value and an ε-slope. A Pochhammer factor whose
//! value vanishes contributes its slope and one order of ε; a factor that
//! vanishes with zero slope is a hard zero. Upper hard zeros cut the series,
//! lower hard zeros are only admissible after a cut.

use rug::Rational;

use super::{KParam, KdFSpec, KdfError};
use crate::exactnum::{EpsFactor, Scalar};

enum Raw<S> {
    Exact(EpsFactor),
    Approx(S),
}

/// Product of the factors contributed by one index step.
#[derive(Clone, Debug)]
pub(crate) struct Part<S> {
    pub val: S,
    pub order: i32,
    pub num_rigid: bool,
    pub den_rigid: bool,
}

fn raw_factor<S: Scalar>(p: &KParam, k: usize, digits: u32) -> Result<Raw<S>, KdfError> {
    match p.value.as_exact() {
        Some(q) => Ok(Raw::Exact(EpsFactor::new(Rational::from(q + k as u64), p.eps.clone()))),
        None => Ok(Raw::Approx(S::lift_param(&p.value.add_i(k as i64), digits)?)),
    }
}

fn build_part<S: Scalar>(ups: &[&KParam], lows: &[&KParam], extra_den: Option<usize>, mult: Option<&S>, k: usize, digits: u32) -> Result<Part<S>, KdfError> {
    let mut val = match mult {
        Some(m) => m.clone(),
        None => S::one(digits),
    };
    let mut order = 0;
    let mut num_rigid = false;
    let mut den_rigid = false;
    for p in ups {
        match raw_factor::<S>(p, k, digits)? {
            Raw::Exact(f) => {
                if f.value != 0 {
                    val = val.mul(&S::lift(&f.value, digits));
                } else if f.slope != 0 {
                    val = val.mul(&S::lift(&f.slope, digits));
                    order += 1;
                } else {
                    num_rigid = true;
                }
            }
            Raw::Approx(v) => val = val.mul(&v),
        }
    }
    let mut den = S::one(digits);
    if let Some(f) = extra_den {
        den = S::lift(&Rational::from(f as u64), digits);
    }
    for p in lows {
        match raw_factor::<S>(p, k, digits)? {
            Raw::Exact(f) => {
                if f.value != 0 {
                    den = den.mul(&S::lift(&f.value, digits));
                } else if f.slope != 0 {
                    den = den.mul(&S::lift(&f.slope, digits));
                    order -= 1;
                } else {
                    den_rigid = true;
                }
            }
            Raw::Approx(v) => den = den.mul(&v),
        }
    }
    if !den_rigid && !num_rigid {
        val = val.div(&den);
    }
    Ok(Part { val, order, num_rigid, den_rigid })
}

/// Per-index step factors, grown on demand.
pub(crate) struct Tables<'a, S> {
    spec: &'a KdFSpec,
    digits: u32,
    x: Option<S>,
    y: Option<S>,
    pub n_part: Vec<Part<S>>,
    pub i_part: Vec<Part<S>>,
    pub j_part: Vec<Part<S>>,
}

impl<'a, S: Scalar> Tables<'a, S> {
    /// `x`, `y` are folded into the step factors when given.
    pub fn new(spec: &'a KdFSpec, x: Option<S>, y: Option<S>, digits: u32) -> Self {
        Tables { spec, digits, x, y, n_part: Vec::new(), i_part: Vec::new(), j_part: Vec::new() }
    }

    pub fn ensure(&mut self, k: usize) -> Result<(), KdfError> {
        let r = self.spec.roles();
        while self.n_part.len() <= k {
            let n = self.n_part.len();
            self.n_part.push(build_part(&r.up_n, &r.lo_n, None, None, n, self.digits)?);
        }
        while self.i_part.len() <= k {
            let i = self.i_part.len();
            self.i_part.push(build_part(&r.up_i, &r.lo_i, Some(i + 1), self.x.as_ref(), i, self.digits)?);
        }
        while self.j_part.len() <= k {
            let j = self.j_part.len();
            self.j_part.push(build_part(&r.up_j, &r.lo_j, Some(j + 1), self.y.as_ref(), j, self.digits)?);
        }
        Ok(())
    }
}

/// Coefficient (times folded powers) in leading-order form.
#[derive(Clone, Debug)]
pub(crate) struct Cell<S> {
    pub val: S,
    pub order: i32,
    pub rigid: bool,
}

impl<S: Scalar> Cell<S> {
    pub fn origin(digits: u32) -> Self {
        Cell { val: S::one(digits), order: 0, rigid: false }
    }

    /// Applies the step factors; upper zeros act before lower zeros.
    pub fn step(&self, a: &Part<S>, b: &Part<S>, at: (usize, usize)) -> Result<Cell<S>, KdfError> {
        let rigid = self.rigid || a.num_rigid || b.num_rigid;
        if (a.den_rigid || b.den_rigid) && !rigid {
            return Err(KdfError::UndefinedCoefficient { i: at.0, j: at.1 });
        }
        if rigid {
            return Ok(Cell { val: self.val.clone(), order: 0, rigid: true });
        }
        Ok(Cell {
            val: self.val.mul(&a.val).mul(&b.val),
            order: self.order + a.order + b.order,
            rigid: false,
        })
    }

    /// Limit value; None when it is identically zero.
    pub fn value(&self, at: (usize, usize)) -> Result<Option<&S>, KdfError> {
        if self.rigid || self.order > 0 {
            Ok(None)
        } else if self.order < 0 {
            Err(KdfError::UndefinedCoefficient { i: at.0, j: at.1 })
        } else {
            Ok(Some(&self.val))
        }
    }
}

/// Walks diagonals `i + j = n` for `n = 0, 1, ...`; `visit` sees the cells of
/// each diagonal (index i) and returns false to stop.
pub(crate) fn walk_diagonals<S: Scalar>(
    tables: &mut Tables<'_, S>,
    digits: u32,
    max_diag: usize,
    mut visit: impl FnMut(usize, &[Cell<S>]) -> Result<bool, KdfError>,
) -> Result<bool, KdfError> {
    let mut diag = vec![Cell::origin(digits)];
    for n in 0..=max_diag {
        if !visit(n, &diag)? {
            return Ok(true);
        }
        if n == max_diag {
            break;
        }
        tables.ensure(n + 1)?;
        let mut next = Vec::with_capacity(n + 2);
        for (i, c) in diag.iter().enumerate() {
            let j = n - i;
            next.push(c.step(&tables.n_part[n], &tables.j_part[j], (i, j + 1))?);
        }
        let last = &diag[n];
        next.push(last.step(&tables.n_part[n], &tables.i_part[n], (n + 1, 0))?);
        diag = next;
    }
    Ok(false)
}
