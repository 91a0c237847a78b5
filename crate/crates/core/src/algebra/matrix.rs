use std::fmt;

use super::{AlgebraError, Cyclo, CycloPoly};

/// Dense matrix over ℚ(ζ_n), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    order: u32,
    rows: usize,
    cols: usize,
    entries: Vec<Cyclo>,
}

impl ScalarMatrix {
    pub fn zeros(order: u32, rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            order,
            rows,
            cols,
            entries: vec![Cyclo::zero(order); rows * cols],
        }
    }

    pub fn identity(order: u32, n: usize) -> Self {
        let mut m = Self::zeros(order, n, n);
        for i in 0..n {
            m.set(i, i, Cyclo::one(order));
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length and all
    /// entries the same order.
    pub fn from_rows(order: u32, rows: Vec<Vec<Cyclo>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(AlgebraError::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for x in row {
                if x.order() != order {
                    return Err(AlgebraError::OrderMismatch {
                        left: order,
                        right: x.order(),
                    });
                }
                entries.push(x);
            }
        }
        Ok(ScalarMatrix {
            order,
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let cyclo = rows
            .iter()
            .map(|r| r.iter().map(|&x| Cyclo::from_int(1, x)).collect())
            .collect();
        Self::from_rows(1, cyclo).expect("integer rows form a matrix")
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Cyclo) {
        assert_eq!(x.order(), self.order, "cyclotomic order mismatch");
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Cyclo] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Cyclo>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.order, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn embed(&self, into: u32) -> Result<Self, AlgebraError> {
        let entries = self
            .entries
            .iter()
            .map(|x| x.embed(into))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ScalarMatrix {
            order: into,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    fn check_order(&self, other: &ScalarMatrix) -> Result<(), AlgebraError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(AlgebraError::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        }
    }

    pub fn mul(&self, other: &ScalarMatrix) -> Result<Self, AlgebraError> {
        self.check_order(other)?;
        if self.cols != other.rows {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.order, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ScalarMatrix) -> Result<Self, AlgebraError> {
        self.check_order(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ScalarMatrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        ScalarMatrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn block_diag(&self, other: &ScalarMatrix) -> Result<Self, AlgebraError> {
        self.check_order(other)?;
        let mut out = Self::zeros(self.order, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Result<Self, AlgebraError> {
        self.require_square()?;
        let mut acc = Self::identity(self.order, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    fn require_square(&self) -> Result<(), AlgebraError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn trace(&self) -> Result<Cyclo, AlgebraError> {
        self.require_square()?;
        Ok((0..self.rows).fold(Cyclo::zero(self.order), |acc, i| &acc + self.get(i, i)))
    }

    /// Inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Result<Option<Self>, AlgebraError> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(self.order, n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(None);
            };
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let s = a.get(c, c).inverse()?;
            for j in 0..n {
                a.set(c, j, a.get(c, j) * &s);
                inv.set(c, j, inv.get(c, j) * &s);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - &(&f * a.get(c, j)));
                    inv.set(r, j, inv.get(r, j) - &(&f * inv.get(c, j)));
                }
            }
        }
        Ok(Some(inv))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> Result<Cyclo, AlgebraError> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Cyclo::one(self.order);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(Cyclo::zero(self.order));
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv_inv = a.get(c, c).inverse()?;
            det = &det * a.get(c, c);
            for r in c + 1..n {
                if a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c) * &piv_inv;
                for j in c..n {
                    let v = a.get(r, j) - &(&f * a.get(c, j));
                    a.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial `det(xI - M)`, degree-ascending in `x`,
    /// via reduction to upper Hessenberg form.
    pub fn charpoly(&self) -> Result<Vec<Cyclo>, AlgebraError> {
        self.require_square()?;
        let n = self.rows;
        let order = self.order;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(p) = (m..n).find(|&r| !h.get(r, m - 1).is_zero()) else {
                continue;
            };
            h.swap_rows(p, m);
            h.swap_cols(p, m);
            let piv_inv = h.get(m, m - 1).inverse()?;
            for i in m + 1..n {
                if h.get(i, m - 1).is_zero() {
                    continue;
                }
                let t = h.get(i, m - 1) * &piv_inv;
                for j in 0..n {
                    let x = h.get(m, j);
                    if !x.is_zero() {
                        let v = h.get(i, j) - &(&t * x);
                        h.set(i, j, v);
                    }
                }
                for j in 0..n {
                    let x = h.get(j, i);
                    if !x.is_zero() {
                        let v = h.get(j, m) + &(&t * x);
                        h.set(j, m, v);
                    }
                }
            }
        }

        // p[m] = charpoly of the leading m×m block.
        let mut p: Vec<Vec<Cyclo>> = vec![vec![Cyclo::one(order)]];
        for m in 1..=n {
            let prev = &p[m - 1];
            let diag = h.get(m - 1, m - 1);
            let mut next = vec![Cyclo::zero(order); m + 1];
            for (k, c) in prev.iter().enumerate() {
                next[k + 1] = &next[k + 1] + c;
                next[k] = &next[k] - &(c * diag);
            }
            let mut t = Cyclo::one(order);
            for k in (1..m).rev() {
                t = &t * h.get(k, k - 1);
                if t.is_zero() {
                    break;
                }
                let f = &t * h.get(k - 1, m - 1);
                if f.is_zero() {
                    continue;
                }
                for (j, c) in p[k - 1].iter().enumerate() {
                    next[j] = &next[j] - &(&f * c);
                }
            }
            p.push(next);
        }
        Ok(p.pop().unwrap())
    }

    /// `det(I - u·M)` as an exact polynomial in `u`.
    pub fn det_one_minus_u(&self) -> Result<CycloPoly, AlgebraError> {
        let chi = self.charpoly()?;
        // det(I - uM) = u^n χ(1/u)
        Ok(CycloPoly::from_coeffs(
            self.order,
            chi.into_iter().rev().collect(),
        ))
    }
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dense matrix of polynomials (or truncated series) over ℚ(ζ_n).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloMatrix {
    order: u32,
    rows: usize,
    cols: usize,
    entries: Vec<CycloPoly>,
}

impl CycloMatrix {
    pub fn zeros(order: u32, rows: usize, cols: usize) -> Self {
        CycloMatrix {
            order,
            rows,
            cols,
            entries: vec![CycloPoly::zero(order); rows * cols],
        }
    }

    pub fn identity(order: u32, n: usize) -> Self {
        let mut m = Self::zeros(order, n, n);
        for i in 0..n {
            m.set(i, i, CycloPoly::one(order));
        }
        m
    }

    pub fn from_rows(order: u32, rows: Vec<Vec<CycloPoly>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(AlgebraError::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for x in row {
                if x.order() != order {
                    return Err(AlgebraError::OrderMismatch {
                        left: order,
                        right: x.order(),
                    });
                }
                entries.push(x);
            }
        }
        Ok(CycloMatrix {
            order,
            rows: r,
            cols: c,
            entries,
        })
    }

    /// Degree-0 embedding of a scalar matrix.
    pub fn from_scalar(m: &ScalarMatrix) -> Self {
        CycloMatrix {
            order: m.order(),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries.iter().cloned().map(CycloPoly::constant).collect(),
        }
    }

    /// `I - u·M`.
    pub fn identity_minus_u_times(m: &ScalarMatrix) -> Result<Self, AlgebraError> {
        m.require_square()?;
        let order = m.order();
        let mut out = Self::zeros(order, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let mut p = CycloPoly::monomial(-m.get(i, j), 1);
                if i == j {
                    p = &p + &CycloPoly::one(order);
                }
                out.set(i, j, p);
            }
        }
        Ok(out)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CycloPoly) {
        assert_eq!(x.order(), self.order, "cyclotomic order mismatch");
        self.entries[i * self.cols + j] = x;
    }

    /// Determinant: cofactor expansion up to 6×6, fraction-free (Bareiss)
    /// elimination beyond. Truncated entries are treated through their stored
    /// representatives and the result is truncated at the smallest bound.
    pub fn det(&self) -> Result<CycloPoly, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let trunc = self.entries.iter().filter_map(CycloPoly::truncation).min();
        let exact: Vec<CycloPoly> = self.entries.iter().map(CycloPoly::to_exact).collect();
        let det = if self.rows <= 6 {
            let idx: Vec<usize> = (0..self.rows).collect();
            cofactor(&exact, self.cols, self.order, 0, &idx)
        } else {
            bareiss(exact, self.rows, self.order)?
        };
        Ok(match trunc {
            Some(n) => det.truncate(n),
            None => det,
        })
    }
}

fn cofactor(a: &[CycloPoly], n: usize, order: u32, row: usize, cols: &[usize]) -> CycloPoly {
    if cols.is_empty() {
        return CycloPoly::one(order);
    }
    let mut acc = CycloPoly::zero(order);
    for (k, &c) in cols.iter().enumerate() {
        let x = &a[row * n + c];
        if x.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&j| j != c).collect();
        let term = x * &cofactor(a, n, order, row + 1, &rest);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn bareiss(mut a: Vec<CycloPoly>, n: usize, order: u32) -> Result<CycloPoly, AlgebraError> {
    let mut prev = CycloPoly::one(order);
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r * n + k].is_zero()) else {
            return Ok(CycloPoly::zero(order));
        };
        if p != k {
            for j in 0..n {
                a.swap(p * n + j, k * n + j);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let lead = a[i * n + k].clone();
            for j in k + 1..n {
                let num = &(&pivot * &a[i * n + j]) - &(&lead * &a[k * n + j]);
                a[i * n + j] = num.exact_div(&prev)?;
            }
            a[i * n + k] = CycloPoly::zero(order);
        }
        prev = pivot;
    }
    let det = a[n * n - 1].clone();
    Ok(if negate { -det } else { det })
}
