use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex band matrix with `kl` sub- and `ku` super-diagonals, factored in
/// place by Gaussian elimination with partial pivoting. Row `i` stores
/// columns `i − kl ..= i + kl + ku` (the extra `kl` hold pivoting fill-in).
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix {
            n,
            kl,
            ku,
            width,
            data: vec![ZERO; n * width],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn pos(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if j + self.kl < i || j > i + self.ku {
            return ZERO;
        }
        self.data[self.pos(i, j)]
    }

    /// Adds `v` at `(i, j)`; `j − i` must lie within `[−kl, ku]`.
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i},{j}) outside the band");
        let p = self.pos(i, j);
        self.data[p] += v;
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// LU factorization. Fails when the smallest pivot is below
    /// `1e-13` of the largest.
    pub fn factor(mut self) -> Result<BandLu, f64> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.pos(k, k)].norm();
            for i in k + 1..=last_row {
                let v = self.data[self.pos(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            let last_col = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (self.pos(k, j), self.pos(p, j));
                    self.data.swap(a, b);
                }
            }
            let d = self.data[self.pos(k, k)];
            if d == ZERO {
                return Err(0.0);
            }
            for i in k + 1..=last_row {
                let pik = self.pos(i, k);
                let l = self.data[pik] / d;
                self.data[pik] = l;
                if l == ZERO {
                    continue;
                }
                for j in k + 1..=last_col {
                    let kj = self.data[self.pos(k, j)];
                    let ij = self.pos(i, j);
                    self.data[ij] -= l * kj;
                }
            }
        }
        let diag: Vec<f64> = (0..n).map(|i| self.data[self.pos(i, i)].norm()).collect();
        let max = diag.iter().cloned().fold(0.0, f64::max);
        let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let ratio = if max > 0.0 { min / max } else { 0.0 };
        if ratio < 1e-13 {
            return Err(ratio);
        }
        Ok(BandLu { m: self, piv })
    }
}

/// Factored band matrix.
#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn n(&self) -> usize {
        self.m.n
    }

    /// Overwrites `b` with the solution.
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let a = &self.m;
        let n = a.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk == ZERO {
                continue;
            }
            for i in k + 1..=(k + a.kl).min(n - 1) {
                b[i] -= a.data[a.pos(i, k)] * bk;
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..=(i + a.kl + a.ku).min(n - 1) {
                s -= a.data[a.pos(i, j)] * b[j];
            }
            b[i] = s / a.data[a.pos(i, i)];
        }
    }
}
