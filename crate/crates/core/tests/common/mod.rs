//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use telesigma::lambda::{rat, rat_frac};
use telesigma::useries::factorial;
use telesigma::{Rational, LP};

/// Weierstrass' recurrence for `σ(u) = Σ a_{m,n} (g2/2)^m (2 g3)^n u^{4m+6n+1} / (4m+6n+1)!`.
pub fn weierstrass(max_deg: u32, g2: &LP, g3: &LP) -> BTreeMap<u32, LP> {
    let mut a: BTreeMap<(i64, i64), Rational> = BTreeMap::from([((0, 0), rat(1))]);
    let get = |a: &BTreeMap<(i64, i64), Rational>, m: i64, n: i64| a.get(&(m, n)).cloned().unwrap_or_else(|| rat(0));
    let mut out = BTreeMap::new();
    for total in 0..=max_deg as i64 {
        for n in 0..=total / 6 {
            let rest = total - 6 * n;
            if rest % 4 != 0 {
                continue;
            }
            let m = rest / 4;
            if (m, n) != (0, 0) {
                let v = rat(3 * (m + 1)) * get(&a, m + 1, n - 1) + rat_frac(16, 3) * rat(n + 1) * get(&a, m - 2, n + 1)
                    - rat_frac((2 * m + 3 * n - 1) * (4 * m + 6 * n - 1), 3) * get(&a, m - 1, n);
                a.insert((m, n), v);
            }
        }
    }
    for (&(m, n), v) in &a {
        let d = (4 * m + 6 * n + 1) as u32;
        if d > max_deg {
            continue;
        }
        let c = &g2.scale(&rat_frac(1, 2)).pow(m as u32) * &g3.scale(&rat(2)).pow(n as u32);
        let c = c.scale(v).scale(&Rational::new(1.into(), factorial(d)));
        *out.entry(d).or_insert_with(LP::zero) += &c;
    }
    out
}

