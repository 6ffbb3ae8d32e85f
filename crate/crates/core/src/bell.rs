//! Partial Bell polynomials and executable checks of the identities they
//! satisfy.
//!
//! Argument sequences are passed as slices with `args[i - 1] = x_i`.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::algebra::{binomial, factorial, rat, MultiPoly, Rational, Series, Symbol};
use crate::error::{Error, Result};
use crate::report::Report;

/// Default largest `n` for set-partition enumeration.
pub const PARTITION_CUTOFF: usize = 12;

fn int(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

fn frac(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

/// Memoized `B_{n,k}` over one argument sequence.
#[derive(Clone, Debug)]
pub struct BellTable {
    args: Vec<MultiPoly>,
    memo: HashMap<(usize, usize), MultiPoly>,
}

impl BellTable {
    pub fn new(args: Vec<MultiPoly>) -> BellTable {
        BellTable {
            args,
            memo: HashMap::new(),
        }
    }

    /// Table over the formal symbols `name1, name2, ..., name{len}`.
    pub fn symbolic(name: &str, len: usize) -> BellTable {
        BellTable::new(formal_sequence(name, len))
    }

    pub fn args(&self) -> &[MultiPoly] {
        &self.args
    }

    /// `B_{n,k}(x_1, x_2, ...)` by the convolution recurrence
    /// `B_{n,k} = Σ_i C(n-1, i-1) x_i B_{n-i,k-1}`.
    pub fn get(&mut self, n: usize, k: usize) -> Result<MultiPoly> {
        if k > n {
            return Err(Error::Index(format!("B_{{{n},{k}}} has k > n")));
        }
        if n > 0 && k > 0 && n - k + 1 > self.args.len() {
            return Err(Error::Index(format!(
                "B_{{{n},{k}}} needs x_1..x_{} but only {} arguments are given",
                n - k + 1,
                self.args.len()
            )));
        }
        Ok(self.eval(n, k))
    }

    /// Like [`BellTable::get`] but `B_{n,k} = 0` for `k > n`.
    pub fn value(&mut self, n: usize, k: usize) -> Result<MultiPoly> {
        if k > n {
            return Ok(MultiPoly::zero());
        }
        self.get(n, k)
    }

    fn eval(&mut self, n: usize, k: usize) -> MultiPoly {
        if n == 0 && k == 0 {
            return MultiPoly::one();
        }
        if n == 0 || k == 0 || k > n {
            return MultiPoly::zero();
        }
        if let Some(v) = self.memo.get(&(n, k)) {
            return v.clone();
        }
        let mut acc = MultiPoly::zero();
        for i in 1..=n - k + 1 {
            let rest = self.eval(n - i, k - 1);
            if rest.is_zero() || self.args[i - 1].is_zero() {
                continue;
            }
            let c = int(binomial(n - 1, i - 1));
            acc += (&self.args[i - 1] * &rest).scale(&c);
        }
        self.memo.insert((n, k), acc.clone());
        acc
    }
}

/// Formal symbols `name1 .. name{len}` as polynomials.
pub fn formal_sequence(name: &str, len: usize) -> Vec<MultiPoly> {
    (1..=len)
        .map(|i| MultiPoly::var(Symbol::formal(&format!("{name}{i}")).expect("valid name")))
        .collect()
}

/// `(-1!a_1, -2!a_2, ..., -len!a_len)`.
pub fn negated_factorial_a(len: usize) -> Vec<MultiPoly> {
    (1..=len)
        .map(|i| MultiPoly::var(Symbol::a(i)).scale(&-int(factorial(i))))
        .collect()
}

/// One-shot `B_{n,k}(args)`.
pub fn bell(n: usize, k: usize, args: &[MultiPoly]) -> Result<MultiPoly> {
    BellTable::new(args.to_vec()).get(n, k)
}

/// Calls `visit` with the block sizes of every set partition of `{1..n}`
/// into exactly `k` blocks.
pub fn for_each_set_partition(n: usize, k: usize, visit: &mut impl FnMut(&[Vec<usize>])) {
    fn rec(
        next: usize,
        n: usize,
        k: usize,
        blocks: &mut Vec<Vec<usize>>,
        visit: &mut impl FnMut(&[Vec<usize>]),
    ) {
        if blocks.len() + (n + 1 - next) < k {
            return;
        }
        if next > n {
            if blocks.len() == k {
                visit(blocks);
            }
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(next);
            rec(next + 1, n, k, blocks, visit);
            blocks[i].pop();
        }
        if blocks.len() < k {
            blocks.push(vec![next]);
            rec(next + 1, n, k, blocks, visit);
            blocks.pop();
        }
    }
    rec(1, n, k, &mut Vec::new(), visit);
}

/// `B_{n,k}` as the literal sum over set partitions (oracle).
pub fn bell_by_partitions(n: usize, k: usize, args: &[MultiPoly]) -> Result<MultiPoly> {
    bell_by_partitions_with_cutoff(n, k, args, PARTITION_CUTOFF)
}

pub fn bell_by_partitions_with_cutoff(
    n: usize,
    k: usize,
    args: &[MultiPoly],
    cutoff: usize,
) -> Result<MultiPoly> {
    if k > n {
        return Err(Error::Index(format!("B_{{{n},{k}}} has k > n")));
    }
    if n > cutoff {
        return Err(Error::CutoffExceeded {
            what: "n",
            value: n,
            cutoff,
        });
    }
    if n == 0 {
        return Ok(MultiPoly::one());
    }
    if k > 0 && n - k + 1 > args.len() {
        return Err(Error::Index("argument sequence too short".into()));
    }
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    for_each_set_partition(n, k, &mut |blocks| {
        let mut sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable();
        *counts.entry(sizes).or_insert(0) += 1;
    });
    let mut keys: Vec<_> = counts.into_iter().collect();
    keys.sort();
    let mut acc = MultiPoly::zero();
    for (sizes, count) in keys {
        let term = sizes
            .iter()
            .fold(MultiPoly::one(), |p, &s| p * &args[s - 1]);
        acc += term.scale(&rat(count as i64));
    }
    Ok(acc)
}

/// `B_{n,k}` as `n!/k!` times the `t^n` coefficient of `(Σ x_j t^j / j!)^k`.
pub fn bell_by_composition(n: usize, k: usize, args: &[MultiPoly]) -> Result<MultiPoly> {
    if k > n {
        return Err(Error::Index(format!("B_{{{n},{k}}} has k > n")));
    }
    let mut base = vec![MultiPoly::zero()];
    for j in 1..=n {
        let x = args.get(j - 1).cloned().unwrap_or_default();
        base.push(x.scale(&frac(BigInt::from(1), factorial(j))));
    }
    let series = Series::from_coeffs(base, n).pow(k as u32);
    Ok(series
        .coeff(n)
        .scale(&frac(factorial(n), factorial(k))))
}

/// `b_n = Σ_{k=0}^{n-1} (n-1+k)!/(n-1)! · B_{n-1,k}(-1!a_1, -2!a_2, ...)`.
pub fn b_closed_form(n: usize) -> Result<MultiPoly> {
    if n == 0 {
        return Err(Error::Index("b_n is defined for n >= 1".into()));
    }
    let mut table = BellTable::new(negated_factorial_a(n.max(2)));
    let m = n - 1;
    let mut acc = MultiPoly::zero();
    for k in 0..=m {
        let c = frac(factorial(m + k), factorial(m));
        acc += table.value(m, k)?.scale(&c);
    }
    Ok(acc)
}

/// `b_1 .. b_max` from the closed form.
pub fn b_closed_forms(max: usize) -> Result<Vec<MultiPoly>> {
    (1..=max).map(b_closed_form).collect()
}

/// Falling factorial `z (z-1) ... (z-r+1)` = `C(z, r) r!`.
pub fn falling_factorial(z: &MultiPoly, r: usize) -> MultiPoly {
    (0..r).fold(MultiPoly::one(), |acc, i| acc * (z - &MultiPoly::int(i as i64)))
}

/// `B_{n,k}(1, x_2, x_3, ...) = Σ_j n!/((n-k)! j!) B_{n-k,k-j}(x_2/2, x_3/3, ...)`.
pub fn verify_shift(n: usize, k: usize) -> Result<Report> {
    if k > n {
        return Err(Error::Index(format!("shift identity needs k <= n, got ({n},{k})")));
    }
    let x = formal_sequence("y", n + 1);
    let mut lhs_args = x.clone();
    lhs_args[0] = MultiPoly::one();
    let lhs = BellTable::new(lhs_args).value(n, k)?;
    let shifted: Vec<MultiPoly> = (2..=n + 1)
        .map(|i| x[i - 1].scale(&frac(BigInt::from(1), BigInt::from(i))))
        .collect();
    let mut table = BellTable::new(shifted);
    let mut rhs = MultiPoly::zero();
    for j in 0..=k {
        if k - j > n - k {
            continue;
        }
        let c = frac(factorial(n), factorial(n - k) * factorial(j));
        rhs += table.value(n - k, k - j)?.scale(&c);
    }
    Ok(Report::new("bell.shift")
        .param("n", n)
        .param("k", k)
        .zero_check(&(lhs - rhs)))
}

/// The value bound to `λ` in the inverse-relation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lambda {
    Symbolic,
    Value(Rational),
}

impl std::fmt::Display for Lambda {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Lambda::Symbolic => f.write_str("lambda"),
            Lambda::Value(v) => write!(f, "{v}"),
        }
    }
}

/// Inverse relation between Bell polynomials with integer parameters
/// `a, b`: with `y_m = Σ_k C(am+bk, k-1)(k-1)! B_{m,k}(x)`, checks
/// `Σ_k C(λ,k-1)(k-1)! B_{m,k}(y) = Σ_k C(λ+am+bk,k-1)(k-1)! B_{m,k}(x)`
/// for every `m <= n`.
pub fn verify_bgw_inverse(a: i64, b: i64, lambda: &Lambda, n: usize) -> Result<Report> {
    if n == 0 {
        return Err(Error::Index("inverse relation needs n >= 1".into()));
    }
    let lam = match lambda {
        Lambda::Symbolic => MultiPoly::var(Symbol::formal("lambda").expect("valid name")),
        Lambda::Value(v) => MultiPoly::constant(v.clone()),
    };
    let mut xt = BellTable::symbolic("y", n);
    let mut y = Vec::with_capacity(n);
    for m in 1..=n {
        let mut acc = MultiPoly::zero();
        for k in 1..=m {
            let z = MultiPoly::int(a * m as i64 + b * k as i64);
            acc += falling_factorial(&z, k - 1) * xt.value(m, k)?;
        }
        y.push(acc);
    }
    let mut yt = BellTable::new(y);
    let mut parts = Vec::new();
    for m in 1..=n {
        let mut lhs = MultiPoly::zero();
        let mut rhs = MultiPoly::zero();
        for k in 1..=m {
            lhs += falling_factorial(&lam, k - 1) * yt.value(m, k)?;
            let shifted = &lam + &MultiPoly::int(a * m as i64 + b * k as i64);
            rhs += falling_factorial(&shifted, k - 1) * xt.value(m, k)?;
        }
        parts.push(Report::new("m").param("m", m).zero_check(&(lhs - rhs)));
    }
    Ok(Report::new("bell.bgw")
        .param("a", a)
        .param("b", b)
        .param("lambda", lambda)
        .param("n", n)
        .all(parts, "0"))
}

/// `B_{n,k} = n!/k Σ_s x_s/s! B_{n-s,k-1}/(n-s)!` and
/// `Σ_s s x_s/s! B_{n-s,k-1}/(n-s)! = B_{n,k}/(n-1)!`, sums over `s >= 1`.
pub fn verify_classical(n: usize, k: usize) -> Result<Report> {
    if k == 0 || k > n {
        return Err(Error::Index(format!("classical identities need 1 <= k <= n, got ({n},{k})")));
    }
    let mut t = BellTable::symbolic("y", n);
    let x = t.args().to_vec();
    let bnk = t.value(n, k)?;
    let mut plain = MultiPoly::zero();
    let mut weighted = MultiPoly::zero();
    for s in 1..=n {
        let term = (&x[s - 1] * &t.value(n - s, k - 1)?)
            .scale(&frac(BigInt::from(1), factorial(s) * factorial(n - s)));
        weighted += term.scale(&rat(s as i64));
        plain += term;
    }
    let first = &bnk - &plain.scale(&frac(factorial(n), BigInt::from(k)));
    let second = &weighted - &bnk.scale(&frac(BigInt::from(1), factorial(n - 1)));
    Ok(Report::new("bell.classical").param("n", n).param("k", k).all(
        [
            Report::new("first").zero_check(&first),
            Report::new("second").zero_check(&second),
        ],
        "0",
    ))
}

/// With `G = F^{k-1}`, `Σ_i (n(n-1) - k i (n-1)) f_i g_{n-i} = 0` for all
/// `n <= order`.
pub fn verify_fg(k: usize, order: usize) -> Result<Report> {
    if k == 0 || order == 0 {
        return Err(Error::Index("FG identity needs k >= 1 and N >= 1".into()));
    }
    let mut fc = vec![MultiPoly::zero()];
    fc.extend(formal_sequence("f", order));
    let f = Series::from_coeffs(fc, order);
    let g = f.pow(k as u32 - 1);
    let mut parts = Vec::new();
    for n in 0..=order {
        let mut acc = MultiPoly::zero();
        for i in 0..=n {
            let c = (n * n.saturating_sub(1)) as i64 - (k * i * n.saturating_sub(1)) as i64;
            if c != 0 {
                acc += (f.coeff(i) * g.coeff(n - i)).scale(&rat(c));
            }
        }
        parts.push(Report::new("n").param("n", n).zero_check(&acc));
    }
    Ok(Report::new("bell.fg")
        .param("k", k)
        .param("N", order)
        .all(parts, "0"))
}

/// Coefficient weights of the four product identities, indexed by form.
fn product_weight(form: usize, s: i64, n: i64, i: i64, j: i64) -> i64 {
    let s1 = s + 1;
    match form {
        0 => 2 * s1 * (i - j) * j + (n - i) * i,
        1 => 2 * (n - i) + s1 * i,
        2 => s1 * (i - j) * j * (i - 2) + (n - i) * (j * (j - 1) + (i - j) * (i - j - 1)),
        _ => s1 * i * (i - 1) + (n - i) * i - s1 * (j * (j - 1) + (i - j) * (i - j - 1)),
    }
}

/// Evaluates the four double sums `Σ_i Σ_j w(i,j) d_{n-i} c_{i-j} c_j`.
fn product_sums(s: i64, n: usize, c: &[MultiPoly], d: &[MultiPoly]) -> Vec<MultiPoly> {
    (0..4)
        .map(|form| {
            let mut acc = MultiPoly::zero();
            for i in 0..=n {
                for j in 0..=i {
                    let w = product_weight(form, s, n as i64, i as i64, j as i64);
                    if w == 0 {
                        continue;
                    }
                    acc += (&d[n - i] * &(&c[i - j] * &c[j])).scale(&rat(w));
                }
            }
            acc
        })
        .collect()
}

/// With `D = (1/(1-C))^{s+1}` and the convention `c_0 = -1`, the four
/// quadratic identities hold for every `n <= order`.
pub fn verify_ab(s: usize, order: usize) -> Result<Report> {
    if order == 0 {
        return Err(Error::Index("AB identities need N >= 1".into()));
    }
    let mut cc = vec![MultiPoly::zero()];
    cc.extend(formal_sequence("c", order));
    let cser = Series::from_coeffs(cc.clone(), order);
    let dser = cser.geometric().pow(s as u32 + 1);
    cc[0] = MultiPoly::int(-1);
    let d: Vec<MultiPoly> = (0..=order).map(|i| dser.coeff(i)).collect();
    let mut parts = Vec::new();
    for n in 0..=order {
        for (form, diff) in product_sums(s as i64, n, &cc, &d).into_iter().enumerate() {
            parts.push(
                Report::new("identity")
                    .param("form", form + 1)
                    .param("n", n)
                    .zero_check(&diff),
            );
        }
    }
    Ok(Report::new("bell.ab")
        .param("s", s)
        .param("N", order)
        .all(parts, "0"))
}

/// Bell-polynomial form of the four product identities with `x_0 = -1`.
pub fn verify_bellprod(s: usize, order: usize) -> Result<Report> {
    if order == 0 {
        return Err(Error::Index("product identities need N >= 1".into()));
    }
    let mut t = BellTable::symbolic("y", order);
    let mut xs = vec![MultiPoly::int(-1)];
    xs.extend(t.args().iter().cloned());
    let c: Vec<MultiPoly> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| x.scale(&frac(BigInt::from(1), factorial(i))))
        .collect();
    let mut inner = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut acc = MultiPoly::zero();
        for l in 0..=m {
            acc += t.value(m, l)?.scale(&frac(factorial(s + l), factorial(m)));
        }
        inner.push(acc);
    }
    let mut parts = Vec::new();
    for n in 0..=order {
        for (form, diff) in product_sums(s as i64, n, &c, &inner).into_iter().enumerate() {
            parts.push(
                Report::new("identity")
                    .param("form", form + 1)
                    .param("n", n)
                    .zero_check(&diff),
            );
        }
    }
    Ok(Report::new("bell.prod")
        .param("s", s)
        .param("N", order)
        .all(parts, "0"))
}

/// `Σ_s x_s/(s!(n-s)!) B_{n-s,k-1}(x) (n(n-1) - k s (n-1)) = 0`.
pub fn verify_bparts(n: usize, k: usize) -> Result<Report> {
    if k == 0 || k > n {
        return Err(Error::Index(format!("bparts needs 1 <= k <= n, got ({n},{k})")));
    }
    let mut t = BellTable::symbolic("y", n);
    let x = t.args().to_vec();
    let mut acc = MultiPoly::zero();
    for s in 1..=n - k + 1 {
        let w = (n * (n - 1)) as i64 - (k * s * (n - 1)) as i64;
        if w == 0 {
            continue;
        }
        let c = frac(BigInt::from(w), factorial(s) * factorial(n - s));
        acc += (&x[s - 1] * &t.value(n - s, k - 1)?).scale(&c);
    }
    Ok(Report::new("bell.bparts")
        .param("n", n)
        .param("k", k)
        .zero_check(&acc))
}

/// Builds `b` from the closed form and checks, for all `m > n >= 0` with
/// `m <= order`, that `B_{m,m-n}(b) = Σ_k (m-1+k)!/((m-1-n)! n!) B_{n,k}(-1!a_1, ...)`.
pub fn verify_equiv(order: usize) -> Result<Report> {
    if order == 0 {
        return Err(Error::Index("equivalence check needs N >= 1".into()));
    }
    let mut at = BellTable::new(negated_factorial_a(order));
    let mut b = Vec::with_capacity(order);
    for n in 0..order {
        let mut acc = MultiPoly::zero();
        for k in 0..=n {
            acc += at.value(n, k)?.scale(&frac(factorial(n + k), factorial(n)));
        }
        b.push(acc);
    }
    let mut bt = BellTable::new(b.clone());
    let mut parts = Vec::new();
    for m in 1..=order {
        for n in 0..m {
            let lhs = bt.value(m, m - n)?;
            let mut rhs = MultiPoly::zero();
            for k in 0..=n {
                let c = frac(factorial(m - 1 + k), factorial(m - 1 - n) * factorial(n));
                rhs += at.value(n, k)?.scale(&c);
            }
            parts.push(
                Report::new("forward")
                    .param("m", m)
                    .param("n", n)
                    .zero_check(&(lhs - rhs)),
            );
        }
        let back = &bt.value(m, 1)? - &b[m - 1];
        parts.push(Report::new("reverse").param("m", m).zero_check(&back));
    }
    Ok(Report::new("bell.equiv")
        .param("N", order)
        .all(parts, "0"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_values() {
        let x = formal_sequence("y", 6);
        assert_eq!(bell(0, 0, &x).unwrap(), MultiPoly::one());
        assert_eq!(bell(5, 1, &x).unwrap(), x[4]);
        assert_eq!(bell(4, 2, &x).unwrap(), p("3*y2^2 + 4*y1*y3"));
        assert_eq!(bell_by_partitions(3, 2, &x).unwrap(), p("3*y1*y2"));
        assert_eq!(bell_by_partitions(4, 4, &x).unwrap(), p("y1^4"));
        assert!(bell(2, 3, &x).is_err());
        assert!(bell_by_partitions(13, 2, &formal_sequence("y", 13)).is_err());
    }

    #[test]
    fn closed_form_b() {
        let expect = [
            "1",
            "-2*a1",
            "-6*a2 + 12*a1^2",
            "-24*a3 + 120*a1*a2 - 120*a1^3",
            "-120*a4 + 720*a1*a3 + 360*a2^2 - 2520*a1^2*a2 + 1680*a1^4",
        ];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(b_closed_form(i + 1).unwrap(), p(e), "b_{}", i + 1);
        }
    }

    #[test]
    fn identities_small() {
        assert!(verify_shift(1, 1).unwrap().is_pass());
        assert!(verify_shift(4, 2).unwrap().is_pass());
        assert!(verify_classical(5, 2).unwrap().is_pass());
        assert!(verify_bgw_inverse(0, 0, &Lambda::Value(rat(0)), 1).unwrap().is_pass());
        assert!(verify_bgw_inverse(1, 1, &Lambda::Symbolic, 4).unwrap().is_pass());
        assert!(verify_fg(3, 5).unwrap().is_pass());
        assert!(verify_ab(1, 5).unwrap().is_pass());
        assert!(verify_bellprod(2, 5).unwrap().is_pass());
        assert!(verify_bparts(5, 2).unwrap().is_pass());
        assert!(verify_equiv(5).unwrap().is_pass());
    }

    #[test]
    fn wrong_identity_fails_with_witness() {
        let mut t = BellTable::symbolic("y", 4);
        let diff = t.value(4, 2).unwrap() - t.value(4, 3).unwrap();
        let r = Report::new("probe").zero_check(&diff);
        assert!(!r.is_pass());
        assert!(!r.witness.is_empty());
    }
}
