//! Floating-point deficit band for large `n`.
//!
//! The same recurrence as the modular engine with marker `x^{m-1}`, carried
//! in block floating point: each cell is a vector of `f64` mantissas and one
//! shared binary exponent. All terms are positive, so the only rounding is
//! the usual accumulation error, far below the resolution the pmf needs.

#[derive(Clone, Debug)]
struct Block {
    exp: i64,
    c: Vec<f64>,
}

impl Block {
    fn empty() -> Self {
        Block { exp: i64::MIN, c: Vec::new() }
    }

    fn is_empty(&self) -> bool {
        self.c.is_empty() || self.exp == i64::MIN
    }

    fn normalize(mut self) -> Self {
        let max = self.c.iter().fold(0.0f64, |m, &x| m.max(x));
        if max == 0.0 {
            return Block::empty();
        }
        let shift = max.log2().floor() as i64;
        let scale = (-shift as f64).exp2();
        for x in &mut self.c {
            *x *= scale;
        }
        self.exp += shift;
        self
    }
}

/// Accumulates terms with differing exponents.
struct Acc {
    exp: i64,
    c: Vec<f64>,
}

impl Acc {
    fn new(len: usize) -> Self {
        Acc { exp: i64::MIN, c: vec![0.0; len] }
    }

    /// Rescale so that terms with exponent `e` can be added; returns the factor for them.
    fn align(&mut self, e: i64) -> f64 {
        if self.exp == i64::MIN {
            self.exp = e;
            return 1.0;
        }
        if e > self.exp {
            let s = ((self.exp - e).max(-1100) as f64).exp2();
            for x in &mut self.c {
                *x *= s;
            }
            self.exp = e;
            1.0
        } else {
            ((e - self.exp).max(-1100) as f64).exp2()
        }
    }

    fn finish(self) -> Block {
        if self.exp == i64::MIN {
            return Block::empty();
        }
        Block { exp: self.exp, c: self.c }.normalize()
    }
}

fn scalar(ln: f64) -> (i64, f64) {
    let l2 = ln / std::f64::consts::LN_2;
    let e = l2.floor();
    (e as i64, (l2 - e).exp2())
}

/// `ln(GTC_{n, n-1-d}/n!)` for `d < len`, rows `n = 0..=n_max` (`-∞` where zero).
pub fn deficit_band(n_max: usize, len: usize) -> Vec<Vec<f64>> {
    let ln_fact: Vec<f64> = {
        let mut v = vec![0.0f64; 2 * n_max + 2];
        for i in 1..v.len() {
            v[i] = v[i - 1] + (i as f64).ln();
        }
        v
    };
    // ln(L(m+q, q)/m!) with L(c, k) = (2c-2)!/(2^{c-1}(c-k-1)!)
    let ln_coef = |m: usize, q: usize| {
        let c = m + q;
        ln_fact[2 * c - 2] - (c - 1) as f64 * std::f64::consts::LN_2 - ln_fact[m - 1] - ln_fact[m]
    };
    let cell_len = |q: usize, s: usize| len.min(s + 1 - q.min(s));
    let mut g: Vec<Block> = vec![Block::empty(); n_max + 1];
    let mut sets: Vec<Vec<Block>> = vec![vec![Block::empty(); n_max + 1]; n_max + 1];
    sets[0][0] = Block { exp: 0, c: vec![1.0] };
    for n in 1..=n_max {
        let glen = len.min(n);
        if n == 1 {
            g[1] = Block { exp: 0, c: vec![1.0] };
        } else {
            let mut acc = Acc::new(glen);
            for m in 1..=n.min(glen) {
                for q in (if m == 1 { 1 } else { 0 })..=(n - m) {
                    let src = &sets[q][n - m];
                    if src.is_empty() {
                        continue;
                    }
                    let (e, mant) = scalar(ln_coef(m, q));
                    let s = acc.align(e + src.exp) * mant;
                    for (b, &v) in src.c.iter().enumerate().take(glen - (m - 1)) {
                        acc.c[m - 1 + b] += s * v;
                    }
                }
            }
            g[n] = acc.finish();
        }
        for q in 1..=n {
            let clen = cell_len(q, n);
            let mut acc = Acc::new(clen);
            for j in 1..=(n - q + 1) {
                let a = &g[j];
                let b = &sets[q - 1][n - j];
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                let s = acc.align(a.exp + b.exp);
                for (x, &av) in a.c.iter().enumerate().take(clen) {
                    let sa = s * av;
                    for (y, &bv) in b.c.iter().enumerate().take(clen - x) {
                        acc.c[x + y] += sa * bv;
                    }
                }
            }
            let mut blk = acc.finish();
            if !blk.is_empty() {
                let (e, mant) = scalar(-(q as f64).ln());
                blk.exp += e;
                for x in &mut blk.c {
                    *x *= mant;
                }
                blk = blk.normalize();
            }
            sets[q][n] = blk;
        }
    }
    g.iter()
        .map(|b| {
            if b.is_empty() {
                return Vec::new();
            }
            b.c.iter()
                .map(|&x| if x > 0.0 { x.ln() + b.exp as f64 * std::f64::consts::LN_2 } else { f64::NEG_INFINITY })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows_match_exact_counts() {
        let band = deficit_band(4, 4);
        // n = 4: deficits 0..3 are k = 3, 2, 1, 0 → 600, 768, 228, 15
        let want = [600.0f64, 768.0, 228.0, 15.0];
        for (d, w) in want.iter().enumerate() {
            let got = (band[4][d] + 24f64.ln()).exp();
            assert!((got - w).abs() < 1e-9 * w, "d = {d}: {got}");
        }
    }
}
