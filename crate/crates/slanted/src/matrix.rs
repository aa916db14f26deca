//! Finite sections of slant-banded matrices.
//!
//! A matrix with slant alpha stores its nonzero entries bucketed by slant
//! index j = floor(alpha * m) - n, where m is the row and n the column. Rows
//! and columns both live on a symmetric window {-L..L}; everything outside
//! is extended by zero. Every (m, n) pair belongs to exactly one slant
//! class, so the buckets partition the entries.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::slant::{IndexWindow, Slant};
use crate::weight::Weight;

#[derive(Clone, PartialEq)]
pub struct SlantedMatrix {
    slant: Slant,
    window: IndexWindow,
    /// slant index j -> row m -> value; the column is implied by (m, j).
    classes: BTreeMap<i64, BTreeMap<i64, f64>>,
    sup: f64,
}

impl SlantedMatrix {
    fn from_parts(
        slant: Slant,
        window: IndexWindow,
        classes: BTreeMap<i64, BTreeMap<i64, f64>>,
    ) -> Self {
        let sup = classes
            .values()
            .flat_map(|rows| rows.values())
            .fold(0.0_f64, |acc, v| acc.max(v.abs()));
        SlantedMatrix { slant, window, classes, sup }
    }

    fn check_window(window: &IndexWindow) -> Result<()> {
        if window.dim() != 1 {
            return Err(Error::InvalidWindow(
                "matrix sections are one-dimensional".into(),
            ));
        }
        Ok(())
    }

    pub fn zero(slant: Slant, window: IndexWindow) -> Result<Self> {
        Self::check_window(&window)?;
        Ok(Self::from_parts(slant, window, BTreeMap::new()))
    }

    pub fn identity(window: IndexWindow) -> Result<Self> {
        Self::from_entries(
            Slant::one(),
            window,
            window.coords().map(|m| (m, m, 1.0)).collect::<Vec<_>>(),
        )
    }

    /// Build from (row, column, value) triples. Zero values are dropped,
    /// duplicates and out-of-window coordinates are rejected.
    pub fn from_entries<I>(slant: Slant, window: IndexWindow, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64, f64)>,
    {
        Self::check_window(&window)?;
        let mut classes: BTreeMap<i64, BTreeMap<i64, f64>> = BTreeMap::new();
        for (m, n, v) in entries {
            if !window.contains(m) || !window.contains(n) {
                return Err(Error::InvalidWindow(format!(
                    "entry ({m}, {n}) outside window of half-width {}",
                    window.half_width()
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "entry ({m}, {n}) has non-finite value {v}"
                )));
            }
            if v == 0.0 {
                continue;
            }
            let j = slant.floor_mul(m) - n;
            if classes.entry(j).or_default().insert(m, v).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate entry at ({m}, {n})"
                )));
            }
        }
        Ok(Self::from_parts(slant, window, classes))
    }

    pub fn slant(&self) -> Slant {
        self.slant
    }

    pub fn window(&self) -> IndexWindow {
        self.window
    }

    /// Column hit by row m on slant class j.
    pub fn column_for(&self, m: i64, j: i64) -> i64 {
        self.slant.floor_mul(m) - j
    }

    /// Slant class containing entry (m, n).
    pub fn class_of(&self, m: i64, n: i64) -> i64 {
        self.slant.floor_mul(m) - n
    }

    pub fn get(&self, m: i64, n: i64) -> f64 {
        let j = self.class_of(m, n);
        self.classes
            .get(&j)
            .and_then(|rows| rows.get(&m))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn nnz(&self) -> usize {
        self.classes.values().map(|rows| rows.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// (row, column, value) triples ordered by slant class, then row.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        self.classes.iter().flat_map(move |(&j, rows)| {
            rows.iter()
                .map(move |(&m, &v)| (m, self.slant.floor_mul(m) - j, v))
        })
    }

    pub fn occupied_slants(&self) -> impl Iterator<Item = i64> + '_ {
        self.classes.keys().copied()
    }

    /// Largest |j| over occupied slant classes, 0 when empty.
    pub fn max_abs_slant(&self) -> i64 {
        self.classes.keys().map(|j| j.abs()).max().unwrap_or(0)
    }

    /// Band half-width max |j| + 1; the truncation parameter that keeps the
    /// whole matrix satisfies nothing is dropped at this width.
    pub fn class_width(&self) -> i64 {
        self.max_abs_slant() + 1
    }

    /// Rows further than this from the window edge see exactly the entries
    /// the bi-infinite extension would.
    pub fn interior_margin(&self) -> i64 {
        self.max_abs_slant() * self.slant.ceil_abs_recip()
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup
    }

    /// Per-class sup norms (j, sup over the class), ascending in j.
    pub fn slant_sup_norms(&self) -> Vec<(i64, f64)> {
        self.classes
            .iter()
            .map(|(&j, rows)| {
                let sup = rows.values().fold(0.0_f64, |acc, v| acc.max(v.abs()));
                (j, sup)
            })
            .collect()
    }

    /// Weighted slant-class norm K * sum_j w(j) sup_j with the covering
    /// factor K = ceil(1/|alpha|)^d.
    pub fn slant_norm(&self, weight: &Weight) -> f64 {
        let k = self.slant.k_factor(self.window.dim());
        let sum: f64 = self
            .slant_sup_norms()
            .iter()
            .map(|&(j, sup)| weight.eval(j) * sup)
            .sum();
        k * sum
    }

    /// Tail K * sum over |j| >= m_width of the class sups; bounds every
    /// operator-norm truncation error of `truncate(m_width)`.
    pub fn truncation_tail(&self, m_width: i64) -> f64 {
        let k = self.slant.k_factor(self.window.dim());
        let sum: f64 = self
            .slant_sup_norms()
            .iter()
            .filter(|&&(j, _)| j.abs() >= m_width)
            .map(|&(_, sup)| sup)
            .sum();
        k * sum
    }

    /// Keep slant classes |j| < m_width, drop the rest.
    pub fn truncate(&self, m_width: i64) -> Result<Self> {
        if m_width < 1 {
            return Err(Error::InvalidParameter(
                "truncation width must be at least 1".into(),
            ));
        }
        let classes = self
            .classes
            .iter()
            .filter(|(j, _)| j.abs() < m_width)
            .map(|(&j, rows)| (j, rows.clone()))
            .collect();
        Ok(Self::from_parts(self.slant, self.window, classes))
    }

    /// Single slant class j as a matrix of the same slope.
    pub fn slant_extract(&self, j: i64) -> Self {
        let mut classes = BTreeMap::new();
        if let Some(rows) = self.classes.get(&j) {
            classes.insert(j, rows.clone());
        }
        Self::from_parts(self.slant, self.window, classes)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be finite, got {c}"
            )));
        }
        if c == 0.0 {
            return Self::zero(self.slant, self.window);
        }
        let classes = self
            .classes
            .iter()
            .map(|(&j, rows)| (j, rows.iter().map(|(&m, &v)| (m, c * v)).collect()))
            .collect();
        Ok(Self::from_parts(self.slant, self.window, classes))
    }

    /// Entrywise sum; both operands must share slant and window.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.slant != rhs.slant {
            return Err(Error::InvalidSlant(format!(
                "cannot add slants {} and {}",
                self.slant, rhs.slant
            )));
        }
        if self.window != rhs.window {
            return Err(Error::DimensionMismatch(
                "operands live on different windows".into(),
            ));
        }
        let mut classes = self.classes.clone();
        for (&j, rows) in &rhs.classes {
            let target = classes.entry(j).or_default();
            for (&m, &v) in rows {
                let slot = target.entry(m).or_insert(0.0);
                *slot += v;
                if *slot == 0.0 {
                    target.remove(&m);
                }
            }
        }
        classes.retain(|_, rows| !rows.is_empty());
        Ok(Self::from_parts(self.slant, self.window, classes))
    }

    /// Apply to a section vector, zero-extended outside the window.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.window.size() {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match window size {}",
                x.len(),
                self.window.size()
            )));
        }
        let mut y = vec![0.0; x.len()];
        for (&j, rows) in &self.classes {
            for (&m, &v) in rows {
                let n = self.slant.floor_mul(m) - j;
                let mi = self.window.index_of(m).expect("row inside window");
                let ni = self.window.index_of(n).expect("column inside window");
                y[mi] += v * x[ni];
            }
        }
        Ok(y)
    }

    /// Transpose. The result carries slant 1/alpha and the adjoint of the
    /// adjoint reproduces the original entries exactly.
    pub fn adjoint(&self) -> Self {
        let slant = self.slant.recip();
        let mut classes: BTreeMap<i64, BTreeMap<i64, f64>> = BTreeMap::new();
        for (m, n, v) in self.entries() {
            let j = slant.floor_mul(n) - m;
            let prev = classes.entry(j).or_default().insert(n, v);
            debug_assert!(prev.is_none(), "transpose produced a duplicate entry");
        }
        Self::from_parts(slant, self.window, classes)
    }

    /// Reflect rows m -> -m; the result carries slant -alpha. Composing two
    /// reflections gives back the original.
    pub fn flip_rows(&self) -> Self {
        let slant = self.slant.negate();
        let classes = self
            .classes
            .iter()
            .map(|(&j, rows)| {
                let flipped: BTreeMap<i64, f64> =
                    rows.iter().map(|(&m, &v)| (-m, v)).collect();
                (j, flipped)
            })
            .collect();
        Self::from_parts(slant, self.window, classes)
    }

    /// Product self * rhs on the shared window; the result carries slant
    /// alpha * alpha'. Entries match the dense product bit for bit because
    /// the inner sums accumulate in the same ascending-index order.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.window != rhs.window {
            return Err(Error::DimensionMismatch(
                "operands live on different windows".into(),
            ));
        }
        let slant = self.slant.checked_mul(&rhs.slant)?;
        let rhs_rows = rhs.rows_sorted();
        let mut acc: BTreeMap<(i64, i64), Vec<(i64, f64)>> = BTreeMap::new();
        for (m, k, va) in self.entries() {
            if let Some(row) = rhs_rows.get(&k) {
                for &(n, vb) in row {
                    acc.entry((m, n)).or_default().push((k, va * vb));
                }
            }
        }
        let mut classes: BTreeMap<i64, BTreeMap<i64, f64>> = BTreeMap::new();
        for ((m, n), mut terms) in acc {
            terms.sort_by_key(|&(k, _)| k);
            let sum = terms.iter().fold(0.0, |s, &(_, t)| s + t);
            if sum != 0.0 {
                let j = slant.floor_mul(m) - n;
                classes.entry(j).or_default().insert(m, sum);
            }
        }
        Ok(Self::from_parts(slant, self.window, classes))
    }

    fn rows_sorted(&self) -> BTreeMap<i64, Vec<(i64, f64)>> {
        let mut rows: BTreeMap<i64, Vec<(i64, f64)>> = BTreeMap::new();
        for (m, n, v) in self.entries() {
            rows.entry(m).or_default().push((n, v));
        }
        for cols in rows.values_mut() {
            cols.sort_by_key(|&(n, _)| n);
        }
        rows
    }

    /// Columns whose incoming band is entirely inside the window, so the
    /// section acts on them exactly like the bi-infinite extension. Requires
    /// slope in (0, 1]; steeper slopes skip columns outright. Conservative
    /// by one index at each end.
    pub fn covered_column_range(&self) -> Result<(i64, i64)> {
        if !self.slant.is_positive() || self.slant.num() > self.slant.den() {
            return Err(Error::InvalidSlant(format!(
                "covered columns need slope in (0, 1], got {}",
                self.slant
            )));
        }
        let l = self.window.half_width();
        if self.classes.is_empty() {
            return Ok((-l, l));
        }
        let j_min = *self.classes.keys().next().unwrap();
        let j_max = *self.classes.keys().next_back().unwrap();
        let lo = self.slant.floor_mul(-l) + 1 - j_min;
        let hi = self.slant.floor_mul(l) - 1 - j_max;
        Ok((lo.max(-l), hi.min(l)))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.serialize())?;
        Ok(())
    }

    fn serialize(&self) -> String {
        let mut list: Vec<(i64, i64, f64)> = self.entries().collect();
        list.sort_by_key(|&(m, n, _)| (m, n));
        let mut out = format!(
            "slanted v1 {} {} {} {}\n",
            self.slant.num(),
            self.slant.den(),
            self.window.dim(),
            self.window.half_width()
        );
        for (m, n, v) in list {
            out.push_str(&format!("{m} {n} {v}\n"));
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::deserialize(&text)
    }

    fn deserialize(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6 || fields[0] != "slanted" || fields[1] != "v1" {
            return Err(Error::Parse(format!("bad header line: {header:?}")));
        }
        let num: i64 = parse_field(fields[2], "slant numerator")?;
        let den: i64 = parse_field(fields[3], "slant denominator")?;
        let dim: u32 = parse_field(fields[4], "dimension")?;
        let half_width: i64 = parse_field(fields[5], "half-width")?;
        let slant = Slant::new(num, den)?;
        let window = IndexWindow::new(half_width, dim)?;
        let mut entries = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("bad entry line: {line:?}")));
            }
            let m: i64 = parse_field(fields[0], "row")?;
            let n: i64 = parse_field(fields[1], "column")?;
            let v: f64 = parse_field(fields[2], "value")?;
            entries.push((m, n, v));
        }
        Self::from_entries(slant, window, entries)
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("cannot parse {what} from {s:?}")))
}

impl fmt::Debug for SlantedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SlantedMatrix(slant {}, half-width {}, {} entries)",
            self.slant,
            self.window.half_width(),
            self.nnz()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(l: i64) -> IndexWindow {
        IndexWindow::line(l).unwrap()
    }

    fn shift(window: IndexWindow, offset: i64, value: f64) -> SlantedMatrix {
        let entries: Vec<_> = window
            .coords()
            .filter(|m| window.contains(m - offset))
            .map(|m| (m, m - offset, value))
            .collect();
        SlantedMatrix::from_entries(Slant::one(), window, entries).unwrap()
    }

    #[test]
    fn identity_lives_on_slant_zero() {
        let id = SlantedMatrix::identity(window(5)).unwrap();
        assert_eq!(id.occupied_slants().collect::<Vec<_>>(), vec![0]);
        assert_eq!(id.get(3, 3), 1.0);
        assert_eq!(id.get(3, 2), 0.0);
        assert_eq!(id.sup_norm(), 1.0);
        assert_eq!(id.class_width(), 1);
    }

    #[test]
    fn double_speed_diagonal_lives_on_slant_zero() {
        // a(m, 2m) = 1 under slope 2: j = floor(2m) - 2m = 0.
        let w = window(8);
        let slant = Slant::new(2, 1).unwrap();
        let entries: Vec<_> = (-4..=4).map(|m| (m, 2 * m, 1.0)).collect();
        let a = SlantedMatrix::from_entries(slant, w, entries).unwrap();
        assert_eq!(a.occupied_slants().collect::<Vec<_>>(), vec![0]);
        assert_eq!(a.nnz(), 9);
    }

    #[test]
    fn classes_partition_entries() {
        let w = window(6);
        let slant = Slant::new(3, 2).unwrap();
        let mut entries = Vec::new();
        for m in -6..=6_i64 {
            for n in -6..=6_i64 {
                entries.push((m, n, (m * 13 + n) as f64 / 7.0 + 0.1));
            }
        }
        let a = SlantedMatrix::from_entries(slant, w, entries.clone()).unwrap();
        assert_eq!(a.nnz(), entries.len());
        // Every entry is found in exactly the class its coordinates say.
        for &(m, n, v) in &entries {
            assert_eq!(a.get(m, n), v);
            let j = a.class_of(m, n);
            assert_eq!(a.slant_extract(j).get(m, n), v);
            assert_eq!(a.slant_extract(j + 1).get(m, n), 0.0);
        }
        let total: usize = a
            .occupied_slants()
            .map(|j| a.slant_extract(j).nnz())
            .sum();
        assert_eq!(total, a.nnz());
    }

    #[test]
    fn rejects_bad_entries() {
        let w = window(3);
        let s = Slant::one();
        assert!(SlantedMatrix::from_entries(s, w, vec![(4, 0, 1.0)]).is_err());
        assert!(SlantedMatrix::from_entries(s, w, vec![(0, 0, f64::NAN)]).is_err());
        assert!(
            SlantedMatrix::from_entries(s, w, vec![(0, 0, 1.0), (0, 0, 2.0)]).is_err()
        );
        let d2 = IndexWindow::new(3, 2).unwrap();
        assert!(SlantedMatrix::zero(s, d2).is_err());
    }

    #[test]
    fn adjoint_is_an_involution() {
        let w = window(7);
        let slant = Slant::new(-3, 2).unwrap();
        let entries: Vec<_> = (-7..=7_i64)
            .flat_map(|m| {
                let n = slant.floor_mul(m);
                [(m, n, 0.3 * m as f64 + 0.7), (m, n - 1, -1.25)]
            })
            .filter(|&(m, n, _)| w.contains(m) && w.contains(n))
            .collect();
        let a = SlantedMatrix::from_entries(slant, w, entries).unwrap();
        let at = a.adjoint();
        assert_eq!(at.slant(), slant.recip());
        for (m, n, v) in a.entries() {
            assert_eq!(at.get(n, m), v);
        }
        let back = at.adjoint();
        assert_eq!(back.slant(), slant);
        assert!(back == a, "adjoint twice must reproduce the matrix exactly");
    }

    #[test]
    fn compose_shifts_adds_offsets() {
        let w = window(10);
        let a = shift(w, 2, 1.0);
        let b = shift(w, 3, 1.0);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.slant(), Slant::one());
        // Interior rows see the offset-5 shift; edge rows are clipped.
        for m in -5..=10_i64 {
            assert_eq!(ab.get(m, m - 5), 1.0, "row {m}");
        }
        assert_eq!(ab.get(-6, -11), 0.0);
    }

    #[test]
    fn compose_tracks_slant_product() {
        let w = window(12);
        let a_slant = Slant::new(3, 2).unwrap();
        let b_slant = Slant::new(1, 3).unwrap();
        let a_entries: Vec<_> = w
            .coords()
            .map(|m| (m, a_slant.floor_mul(m), 1.5))
            .filter(|&(_, n, _)| w.contains(n))
            .collect();
        let b_entries: Vec<_> = w
            .coords()
            .map(|m| (m, b_slant.floor_mul(m) - 1, -0.5))
            .filter(|&(_, n, _)| w.contains(n))
            .collect();
        let a = SlantedMatrix::from_entries(a_slant, w, a_entries).unwrap();
        let b = SlantedMatrix::from_entries(b_slant, w, b_entries).unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.slant(), Slant::new(1, 2).unwrap());
        assert!(ab.nnz() > 0);
        // Derived band bound: |j| <= M1 ceil|alpha'| + M2 + ceil|alpha'| + 2.
        let bound = a.class_width() * b_slant.ceil_abs()
            + b.class_width()
            + b_slant.ceil_abs()
            + 2;
        assert!(ab.max_abs_slant() < bound);
    }

    #[test]
    fn apply_matches_hand_product() {
        let w = window(3);
        let a = shift(w, 1, 2.0);
        let x: Vec<f64> = (0..7).map(|i| i as f64).collect();
        let y = a.apply(&x).unwrap();
        assert_eq!(y, vec![0.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert!(a.apply(&x[..5]).is_err());
    }

    #[test]
    fn add_and_scale() {
        let w = window(4);
        let id = SlantedMatrix::identity(w).unwrap();
        let s = shift(w, 1, 1.0);
        let a = id.add(&s.scale(0.3).unwrap()).unwrap();
        assert_eq!(a.get(2, 2), 1.0);
        assert_eq!(a.get(2, 1), 0.3);
        assert_eq!(a.class_width(), 2);
        // Cancellation removes the stored entry entirely.
        let z = s.add(&s.scale(-1.0).unwrap()).unwrap();
        assert!(z.is_empty());
        let other = shift(w, 1, 1.0);
        let bad = SlantedMatrix::identity(window(5)).unwrap();
        assert!(other.add(&bad).is_err());
    }

    #[test]
    fn truncate_and_tail() {
        let w = window(6);
        let a = SlantedMatrix::identity(w)
            .unwrap()
            .add(&shift(w, 3, 0.25))
            .unwrap()
            .add(&shift(w, -2, 4.0))
            .unwrap();
        assert_eq!(a.class_width(), 4);
        let t = a.truncate(3).unwrap();
        assert_eq!(t.max_abs_slant(), 2);
        assert_eq!(t.get(0, -3), 0.0);
        assert_eq!(a.truncation_tail(3), 0.25);
        assert_eq!(a.truncation_tail(1), 4.25);
        assert!(a.truncate(0).is_err());
    }

    #[test]
    fn slant_norm_weights_classes() {
        let w = window(5);
        let slant = Slant::new(1, 2).unwrap();
        let entries = vec![(0, 0, 2.0), (1, 0, -3.0), (2, -1, 1.0)];
        // Classes: (0,0) -> j=0, (1,0) -> j=0, (2,-1) -> j=2.
        let a = SlantedMatrix::from_entries(slant, w, entries).unwrap();
        let sups = a.slant_sup_norms();
        assert_eq!(sups, vec![(0, 3.0), (2, 1.0)]);
        let poly = Weight::polynomial(1.0).unwrap();
        // K = ceil(2) = 2; 2 * (1*3 + 3*1) = 12.
        assert!((a.slant_norm(&poly) - 12.0).abs() < 1e-12);
        assert_eq!(a.slant_norm(&Weight::unit()), 8.0);
    }

    #[test]
    fn flip_rows_negates_slant() {
        let w = window(5);
        let slant = Slant::new(3, 2).unwrap();
        let entries: Vec<_> = (-3..=3_i64)
            .map(|m| (m, slant.floor_mul(m) - 1, m as f64 + 0.5))
            .filter(|&(_, n, _)| w.contains(n))
            .collect();
        let a = SlantedMatrix::from_entries(slant, w, entries).unwrap();
        let f = a.flip_rows();
        assert_eq!(f.slant(), slant.negate());
        for (m, n, v) in a.entries() {
            assert_eq!(f.get(-m, n), v);
        }
        assert!(f.flip_rows() == a);
    }

    #[test]
    fn covered_columns_interior() {
        let w = window(10);
        let slant = Slant::new(1, 2).unwrap();
        let entries: Vec<_> = w
            .coords()
            .flat_map(|m| {
                let base = slant.floor_mul(m);
                [(m, base, 1.0), (m, base - 1, 0.5)]
            })
            .filter(|&(_, n, _)| w.contains(n))
            .collect();
        let a = SlantedMatrix::from_entries(slant, w, entries).unwrap();
        let (lo, hi) = a.covered_column_range().unwrap();
        // Every column in the covered range receives the full band.
        for n in lo..=hi {
            let hits = a.entries().filter(|&(_, c, _)| c == n).count();
            assert!(hits >= 2, "column {n} missing band entries");
        }
        assert!(lo > -10 && hi < 10);
        let steep = shift(w, 0, 1.0);
        assert!(steep.covered_column_range().is_ok());
        let too_steep =
            SlantedMatrix::zero(Slant::new(2, 1).unwrap(), w).unwrap();
        assert!(too_steep.covered_column_range().is_err());
    }

    #[test]
    fn file_round_trip_is_exact() {
        let w = window(6);
        let slant = Slant::new(-3, 2).unwrap();
        let entries = vec![
            (0, 0, 0.1 + 0.2),
            (1, 1, 1.0 / 3.0),
            (-4, 5, -2.2692296759063756e-9),
            (6, -6, 1e300),
        ];
        let a = SlantedMatrix::from_entries(slant, w, entries).unwrap();
        let dir = std::env::temp_dir().join("slanted_matrix_io_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.mat");
        a.save(&path).unwrap();
        let b = SlantedMatrix::load(&path).unwrap();
        assert!(b == a, "decimal round trip must be exact");
        // Serialized form is deterministic.
        let first = std::fs::read(&path).unwrap();
        b.save(&path).unwrap();
        assert_eq!(first, std::fs::read(&path).unwrap());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn load_rejects_malformed_input() {
        assert!(SlantedMatrix::deserialize("").is_err());
        assert!(SlantedMatrix::deserialize("slanted v2 1 1 1 4\n").is_err());
        assert!(SlantedMatrix::deserialize("slanted v1 0 1 1 4\n").is_err());
        assert!(SlantedMatrix::deserialize("slanted v1 1 1 1 4\n1 2\n").is_err());
        assert!(
            SlantedMatrix::deserialize("slanted v1 1 1 1 4\n9 0 1.0\n").is_err()
        );
    }
}
