//! Matrices over `K` and `K[x^d, x^-d]` with exact coefficients.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::LpaError;
use crate::field::{format_coeff, parse_rational, Coeff, Field};

/// Exponent to nonzero coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Coeff>,
}

impl LaurentPoly {
    pub fn monomial(exp: i64, c: Coeff) -> Self {
        let mut p = LaurentPoly::default();
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Coeff)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn add_term(&mut self, field: Field, exp: i64, c: &Coeff) {
        let slot = self.terms.entry(exp).or_insert_with(Coeff::zero);
        *slot = field.add(slot, c);
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn mul(&self, other: &LaurentPoly, field: Field) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(field, a + b, &field.mul(c, d));
            }
        }
        out
    }

    /// `x ↦ x⁻¹`.
    pub fn invert_variable(&self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect() }
    }

    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| match e {
                0 => format_coeff(c),
                _ => format!("{}*x^{}", format_coeff(c), e),
            })
            .collect();
        parts.join(" + ")
    }
}

/// `n × n` matrix over `K` (period 0) or `K[x^d, x^-d]` (period `d`),
/// carrying the shift vector of its grading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct LaurentMatrix {
    pub size: usize,
    pub period: usize,
    pub shifts: Vec<i64>,
    entries: BTreeMap<(usize, usize), LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zero(period: usize, shifts: Vec<i64>) -> Self {
        LaurentMatrix { size: shifts.len(), period, shifts, entries: BTreeMap::new() }
    }

    pub fn identity(period: usize, shifts: Vec<i64>, field: Field) -> Self {
        let mut m = Self::zero(period, shifts);
        for i in 0..m.size {
            m.add_entry(field, i, i, 0, &field.one());
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero entries, indexed from 0.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &LaurentPoly)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn entry(&self, i: usize, j: usize) -> LaurentPoly {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn add_entry(&mut self, field: Field, i: usize, j: usize, exp: i64, c: &Coeff) {
        assert!(i < self.size && j < self.size, "entry ({i}, {j}) outside a {0}x{0} matrix", self.size);
        let slot = self.entries.entry((i, j)).or_default();
        slot.add_term(field, exp, c);
        if slot.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    fn same_shape(&self, other: &LaurentMatrix) {
        assert!(self.size == other.size && self.period == other.period, "matrix shapes differ");
    }

    pub fn add(&self, other: &LaurentMatrix, field: Field) -> LaurentMatrix {
        self.same_shape(other);
        let mut out = self.clone();
        for (&(i, j), p) in &other.entries {
            for (e, c) in p.terms() {
                out.add_entry(field, i, j, e, c);
            }
        }
        out
    }

    pub fn mul(&self, other: &LaurentMatrix, field: Field) -> LaurentMatrix {
        self.same_shape(other);
        let mut rows: BTreeMap<usize, Vec<(usize, &LaurentPoly)>> = BTreeMap::new();
        for (&(k, j), p) in &other.entries {
            rows.entry(k).or_default().push((j, p));
        }
        let mut out = LaurentMatrix::zero(self.period, self.shifts.clone());
        for (&(i, k), p) in &self.entries {
            for &(j, q) in rows.get(&k).map(Vec::as_slice).unwrap_or(&[]) {
                for (e, c) in p.mul(q, field).terms() {
                    out.add_entry(field, i, j, e, c);
                }
            }
        }
        out
    }

    /// Transpose with `x ↦ x⁻¹` entrywise.
    pub fn star(&self) -> LaurentMatrix {
        LaurentMatrix {
            size: self.size,
            period: self.period,
            shifts: self.shifts.clone(),
            entries: self.entries.iter().map(|(&(i, j), p)| ((j, i), p.invert_variable())).collect(),
        }
    }

    /// Every exponent is a multiple of the period (zero when the period is 0).
    pub fn exponents_respect_period(&self) -> bool {
        self.entries.values().flat_map(|p| p.terms()).all(|(e, _)| match self.period {
            0 => e == 0,
            d => e % d as i64 == 0,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    i: usize,
    j: usize,
    coeffs: BTreeMap<i64, String>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    size: usize,
    period: usize,
    shifts: Vec<i64>,
    entries: Vec<EntryJson>,
}

impl From<LaurentMatrix> for MatrixJson {
    fn from(m: LaurentMatrix) -> Self {
        let entries = m
            .entries
            .iter()
            .map(|(&(i, j), p)| EntryJson {
                i: i + 1,
                j: j + 1,
                coeffs: p.terms().map(|(e, c)| (e, format_coeff(c))).collect(),
            })
            .collect();
        MatrixJson { size: m.size, period: m.period, shifts: m.shifts, entries }
    }
}

impl TryFrom<MatrixJson> for LaurentMatrix {
    type Error = LpaError;

    fn try_from(j: MatrixJson) -> Result<Self, LpaError> {
        if j.shifts.len() != j.size {
            return Err(LpaError::Inconsistent("shift vector length differs from size".into()));
        }
        let mut m = LaurentMatrix::zero(j.period, j.shifts);
        for e in j.entries {
            if e.i == 0 || e.j == 0 || e.i > m.size || e.j > m.size {
                return Err(LpaError::Inconsistent(format!("entry ({}, {}) out of range", e.i, e.j)));
            }
            for (exp, c) in e.coeffs {
                let c = parse_rational(&c).ok_or_else(|| LpaError::Field(format!("bad coefficient {c}")))?;
                m.add_entry(Field::Rational, e.i - 1, e.j - 1, exp, &c);
            }
        }
        Ok(m)
    }
}
