//! Singular value decomposition of an upper bidiagonal matrix.
//!
//! This is an implicit zero-shift / shifted QR iteration in the style of the
//! classic Demmel–Kahan algorithm.  Every singular value, including ones many
//! orders of magnitude below `eps·‖B‖`, is computed to high *relative*
//! accuracy.  That matters here: the edge modes of a dimerized chain have
//! splittings of order `λ^(N/2)`, far below double-precision resolution of any
//! algorithm that works with absolute accuracy.
//!
//! Rotations are accumulated into caller-supplied `U0` (right-multiplied) and
//! `VT0` (left-multiplied) matrices.  Passing a few rows of the identity as
//! `U0` (or a few columns as `VT0`) yields only those components of the
//! singular vectors at `O(n)` cost per sweep.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON * 0.5;
const SAFE_MIN: f64 = f64::MIN_POSITIVE;
const MAX_ITER_FACTOR: usize = 6;

/// Result of [`bidiagonal_svd`]: `B = Q·diag(σ)·Pᵀ` with `u = U0·Q`, `vt = Pᵀ·VT0`.
#[derive(Debug, Clone)]
pub struct BidiagonalSvd {
    /// Singular values in descending order, all non-negative.
    pub singular_values: Vec<f64>,
    /// `U0·Q`; column `i` belongs to `singular_values[i]`.
    pub u: DMatrix<f64>,
    /// `Pᵀ·VT0`; row `i` belongs to `singular_values[i]`.
    pub vt: DMatrix<f64>,
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Plane rotation with `[c s; -s c]·[f; g] = [r; 0]`; `r` carries the sign of `f`.
#[inline]
pub(crate) fn givens(f: f64, g: f64) -> (f64, f64, f64) {
    if g == 0.0 {
        (1.0, 0.0, f)
    } else if f == 0.0 {
        (0.0, sign(1.0, g), g.abs())
    } else {
        let d = f.hypot(g);
        let r = sign(d, f);
        (f.abs() / d, g / r, r)
    }
}

/// Singular values `(σ_min, σ_max)` of `[f g; 0 h]`.
fn two_by_two_values(f: f64, g: f64, h: f64) -> (f64, f64) {
    let fa = f.abs();
    let ga = g.abs();
    let ha = h.abs();
    let fhmn = fa.min(ha);
    let fhmx = fa.max(ha);
    if fhmn == 0.0 {
        let ssmax = if fhmx == 0.0 {
            ga
        } else {
            let big = fhmx.max(ga);
            let small = fhmx.min(ga);
            big * (1.0 + (small / big).powi(2)).sqrt()
        };
        return (0.0, ssmax);
    }
    if ga < fhmx {
        let as_ = 1.0 + fhmn / fhmx;
        let at = (fhmx - fhmn) / fhmx;
        let au = (ga / fhmx).powi(2);
        let c = 2.0 / ((as_ * as_ + au).sqrt() + (at * at + au).sqrt());
        (fhmn * c, fhmx / c)
    } else {
        let au = fhmx / ga;
        if au == 0.0 {
            ((fhmn * fhmx) / ga, ga)
        } else {
            let as_ = 1.0 + fhmn / fhmx;
            let at = (fhmx - fhmn) / fhmx;
            let c = 1.0 / ((1.0 + (as_ * au).powi(2)).sqrt() + (1.0 + (at * au).powi(2)).sqrt());
            (2.0 * (fhmn * c) * au, ga / (c + c))
        }
    }
}

/// Full SVD of `[f g; 0 h]`.
///
/// Returns `(σ_min, σ_max, sin_r, cos_r, sin_l, cos_l)` with
/// `[cl sl; -sl cl]·[f g; 0 h]·[cr -sr; sr cr] = diag(σ_max, σ_min)`.
/// The returned singular values are signed.
fn two_by_two_svd(f: f64, g: f64, h: f64) -> (f64, f64, f64, f64, f64, f64) {
    let mut ft = f;
    let mut fa = ft.abs();
    let mut ht = h;
    let mut ha = h.abs();
    let mut pmax = 1;
    let swap = ha > fa;
    if swap {
        pmax = 3;
        std::mem::swap(&mut ft, &mut ht);
        std::mem::swap(&mut fa, &mut ha);
    }
    let gt = g;
    let ga = gt.abs();
    let (mut ssmin, mut ssmax, clt, crt, slt, srt);
    if ga == 0.0 {
        ssmin = ha;
        ssmax = fa;
        clt = 1.0;
        crt = 1.0;
        slt = 0.0;
        srt = 0.0;
    } else {
        let mut gasmal = true;
        let mut tmp = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        if ga > fa {
            pmax = 2;
            if fa / ga < EPS {
                gasmal = false;
                let smin = if ha > 1.0 { fa / (ga / ha) } else { (fa / ga) * ha };
                tmp = (smin, ga, 1.0, ft / gt, ht / gt, 1.0);
            }
        }
        if gasmal {
            let d = fa - ha;
            let mut l = if d == fa { 1.0 } else { d / fa };
            let m = gt / ft;
            let mut t = 2.0 - l;
            let mm = m * m;
            let tt = t * t;
            let s = (tt + mm).sqrt();
            let r = if l == 0.0 { m.abs() } else { (l * l + mm).sqrt() };
            let a = 0.5 * (s + r);
            let smin = ha / a;
            let smax = fa * a;
            if mm == 0.0 {
                t = if l == 0.0 {
                    sign(2.0, ft) * sign(1.0, gt)
                } else {
                    gt / sign(d, ft) + m / t
                };
            } else {
                t = (m / (s + t) + m / (r + l)) * (1.0 + a);
            }
            l = (t * t + 4.0).sqrt();
            let crt_ = 2.0 / l;
            let srt_ = t / l;
            let clt_ = (crt_ + srt_ * m) / a;
            let slt_ = (ht / ft) * srt_ / a;
            tmp = (smin, smax, clt_, crt_, slt_, srt_);
        }
        ssmin = tmp.0;
        ssmax = tmp.1;
        clt = tmp.2;
        crt = tmp.3;
        slt = tmp.4;
        srt = tmp.5;
    }
    let (csl, snl, csr, snr) = if swap {
        (srt, crt, slt, clt)
    } else {
        (clt, slt, crt, srt)
    };
    let tsign = match pmax {
        1 => sign(1.0, csr) * sign(1.0, csl) * sign(1.0, f),
        2 => sign(1.0, snr) * sign(1.0, csl) * sign(1.0, g),
        _ => sign(1.0, snr) * sign(1.0, snl) * sign(1.0, h),
    };
    ssmax = sign(ssmax, tsign);
    ssmin = sign(ssmin, tsign * sign(1.0, f) * sign(1.0, h));
    (ssmin, ssmax, snr, csr, snl, csl)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Backward,
}

/// Apply the plane rotations `(c[j], s[j])` to rows `start+j, start+j+1` of `a`.
fn rotate_rows(a: &mut DMatrix<f64>, start: usize, c: &[f64], s: &[f64], dir: Direction) {
    let ncols = a.ncols();
    if ncols == 0 {
        return;
    }
    let mut apply = |j: usize| {
        let (ct, st) = (c[j], s[j]);
        if ct == 1.0 && st == 0.0 {
            return;
        }
        for col in 0..ncols {
            let temp = a[(start + j + 1, col)];
            let aj = a[(start + j, col)];
            a[(start + j + 1, col)] = ct * temp - st * aj;
            a[(start + j, col)] = st * temp + ct * aj;
        }
    };
    match dir {
        Direction::Forward => (0..c.len()).for_each(&mut apply),
        Direction::Backward => (0..c.len()).rev().for_each(&mut apply),
    }
}

/// Apply the plane rotations `(c[j], s[j])` to columns `start+j, start+j+1` of `a`.
fn rotate_cols(a: &mut DMatrix<f64>, start: usize, c: &[f64], s: &[f64], dir: Direction) {
    let nrows = a.nrows();
    if nrows == 0 {
        return;
    }
    let mut apply = |j: usize| {
        let (ct, st) = (c[j], s[j]);
        if ct == 1.0 && st == 0.0 {
            return;
        }
        for row in 0..nrows {
            let temp = a[(row, start + j + 1)];
            let aj = a[(row, start + j)];
            a[(row, start + j + 1)] = ct * temp - st * aj;
            a[(row, start + j)] = st * temp + ct * aj;
        }
    };
    match dir {
        Direction::Forward => (0..c.len()).for_each(&mut apply),
        Direction::Backward => (0..c.len()).rev().for_each(&mut apply),
    }
}

fn rotate_pair_rows(a: &mut DMatrix<f64>, i: usize, j: usize, c: f64, s: f64) {
    for col in 0..a.ncols() {
        let x = a[(i, col)];
        let y = a[(j, col)];
        a[(i, col)] = c * x + s * y;
        a[(j, col)] = c * y - s * x;
    }
}

fn rotate_pair_cols(a: &mut DMatrix<f64>, i: usize, j: usize, c: f64, s: f64) {
    for row in 0..a.nrows() {
        let x = a[(row, i)];
        let y = a[(row, j)];
        a[(row, i)] = c * x + s * y;
        a[(row, j)] = c * y - s * x;
    }
}

/// SVD of the upper bidiagonal matrix with diagonal `d` and superdiagonal `e`.
///
/// `u0` must have `d.len()` columns and `vt0` must have `d.len()` rows; either
/// may have zero rows/columns when the corresponding vectors are not needed.
pub fn bidiagonal_svd(
    d: &[f64],
    e: &[f64],
    u0: DMatrix<f64>,
    vt0: DMatrix<f64>,
) -> Result<BidiagonalSvd> {
    let n = d.len();
    if n == 0 {
        return Err(Error::InvalidParameter("empty bidiagonal matrix".into()));
    }
    if e.len() + 1 != n {
        return Err(Error::InvalidParameter(format!(
            "bidiagonal matrix of order {n} needs {} superdiagonal entries, got {}",
            n - 1,
            e.len()
        )));
    }
    if u0.ncols() != n || vt0.nrows() != n {
        return Err(Error::InvalidParameter(
            "accumulator shapes do not match the bidiagonal order".into(),
        ));
    }
    if d.iter().chain(e).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite bidiagonal entry".into()));
    }

    let mut d = d.to_vec();
    let mut e = e.to_vec();
    let mut u = u0;
    let mut vt = vt0;

    if n > 1 {
        qr_iterate(&mut d, &mut e, &mut u, &mut vt)?;
    }

    for i in 0..n {
        if d[i] < 0.0 {
            d[i] = -d[i];
            for col in 0..vt.ncols() {
                vt[(i, col)] = -vt[(i, col)];
            }
        }
    }

    // Selection sort into descending order; n is small enough that the
    // O(n²) comparisons are irrelevant next to the iteration itself.
    for i in 0..n.saturating_sub(1) {
        let mut best = i;
        for j in i + 1..n {
            if d[j] > d[best] {
                best = j;
            }
        }
        if best != i {
            d.swap(i, best);
            vt.swap_rows(i, best);
            u.swap_columns(i, best);
        }
    }

    Ok(BidiagonalSvd {
        singular_values: d,
        u,
        vt,
    })
}

fn qr_iterate(
    d: &mut [f64],
    e: &mut [f64],
    u: &mut DMatrix<f64>,
    vt: &mut DMatrix<f64>,
) -> Result<()> {
    let n = d.len();
    let nf = n as f64;
    let tolmul = 10.0_f64.max(100.0_f64.min(EPS.powf(-0.125)));
    let tol = tolmul * EPS;

    // Lower bound on the smallest singular value, used for the absolute
    // deflation threshold.
    let mut sminoa = d[0].abs();
    if sminoa != 0.0 {
        let mut mu = sminoa;
        for i in 1..n {
            mu = d[i].abs() * (mu / (mu + e[i - 1].abs()));
            sminoa = sminoa.min(mu);
            if sminoa == 0.0 {
                break;
            }
        }
    }
    sminoa /= nf.sqrt();
    let thresh = (tol * sminoa).max(MAX_ITER_FACTOR as f64 * nf * nf * SAFE_MIN);

    let maxit = MAX_ITER_FACTOR * n * n;
    let mut iter = 0usize;
    let mut oldll: isize = -1;
    let mut oldm: isize = -1;
    let mut dir = Direction::Forward;

    let mut c1 = vec![0.0; n];
    let mut s1 = vec![0.0; n];
    let mut c2 = vec![0.0; n];
    let mut s2 = vec![0.0; n];

    let mut m = n - 1;
    'outer: while m > 0 {
        if iter >= maxit {
            return Err(Error::NoConvergence {
                routine: "bidiagonal SVD",
                detail: format!("order {n}, {iter} inner steps, {m} values unconverged"),
            });
        }

        // Find the bottom-most unreduced block d[ll..=m].
        let mut smax = d[m].abs();
        let mut ll = 0usize;
        let mut split = None;
        for l in (0..m).rev() {
            let abss = d[l].abs();
            let abse = e[l].abs();
            if abse <= thresh {
                split = Some(l);
                break;
            }
            smax = smax.max(abss).max(abse);
        }
        if let Some(l) = split {
            e[l] = 0.0;
            if l == m - 1 {
                m -= 1;
                continue 'outer;
            }
            ll = l + 1;
        }

        if ll == m - 1 {
            let (sigmn, sigmx, sinr, cosr, sinl, cosl) = two_by_two_svd(d[m - 1], e[m - 1], d[m]);
            d[m - 1] = sigmx;
            e[m - 1] = 0.0;
            d[m] = sigmn;
            rotate_pair_rows(vt, m - 1, m, cosr, sinr);
            rotate_pair_cols(u, m - 1, m, cosl, sinl);
            if m < 2 {
                break;
            }
            m -= 2;
            continue 'outer;
        }

        if ll as isize > oldm || (m as isize) < oldll {
            dir = if d[ll].abs() >= d[m].abs() {
                Direction::Forward
            } else {
                Direction::Backward
            };
        }

        // Relative convergence tests.
        let mut sminl;
        match dir {
            Direction::Forward => {
                if e[m - 1].abs() <= tol * d[m].abs() {
                    e[m - 1] = 0.0;
                    continue 'outer;
                }
                let mut mu = d[ll].abs();
                sminl = mu;
                for l in ll..m {
                    if e[l].abs() <= tol * mu {
                        e[l] = 0.0;
                        continue 'outer;
                    }
                    mu = d[l + 1].abs() * (mu / (mu + e[l].abs()));
                    sminl = sminl.min(mu);
                }
            }
            Direction::Backward => {
                if e[ll].abs() <= tol * d[ll].abs() {
                    e[ll] = 0.0;
                    continue 'outer;
                }
                let mut mu = d[m].abs();
                sminl = mu;
                for l in (ll..m).rev() {
                    if e[l].abs() <= tol * mu {
                        e[l] = 0.0;
                        continue 'outer;
                    }
                    mu = d[l].abs() * (mu / (mu + e[l].abs()));
                    sminl = sminl.min(mu);
                }
            }
        }
        oldll = ll as isize;
        oldm = m as isize;

        // Shift: zero when it would destroy relative accuracy.
        let mut shift = 0.0;
        if nf * tol * (sminl / smax) > EPS.max(0.01 * tol) {
            let sll;
            (shift, sll) = match dir {
                Direction::Forward => (two_by_two_values(d[m - 1], e[m - 1], d[m]).0, d[ll].abs()),
                Direction::Backward => (two_by_two_values(d[ll], e[ll], d[ll + 1]).0, d[m].abs()),
            };
            if sll > 0.0 && (shift / sll).powi(2) < EPS {
                shift = 0.0;
            }
        }

        iter += m - ll;
        let len = m - ll;

        match (shift == 0.0, dir) {
            (true, Direction::Forward) => {
                let mut cs = 1.0;
                let mut oldcs = 1.0;
                let mut oldsn = 0.0;
                for i in ll..m {
                    let (c, s, r) = givens(d[i] * cs, e[i]);
                    cs = c;
                    if i > ll {
                        e[i - 1] = oldsn * r;
                    }
                    let (oc, os, di) = givens(oldcs * r, d[i + 1] * s);
                    oldcs = oc;
                    oldsn = os;
                    d[i] = di;
                    let k = i - ll;
                    c1[k] = cs;
                    s1[k] = s;
                    c2[k] = oldcs;
                    s2[k] = oldsn;
                }
                let h = d[m] * cs;
                d[m] = h * oldcs;
                e[m - 1] = h * oldsn;
                rotate_rows(vt, ll, &c1[..len], &s1[..len], Direction::Forward);
                rotate_cols(u, ll, &c2[..len], &s2[..len], Direction::Forward);
                if e[m - 1].abs() <= thresh {
                    e[m - 1] = 0.0;
                }
            }
            (true, Direction::Backward) => {
                let mut cs = 1.0;
                let mut oldcs = 1.0;
                let mut oldsn = 0.0;
                for i in (ll + 1..=m).rev() {
                    let (c, s, r) = givens(d[i] * cs, e[i - 1]);
                    cs = c;
                    if i < m {
                        e[i] = oldsn * r;
                    }
                    let (oc, os, di) = givens(oldcs * r, d[i - 1] * s);
                    oldcs = oc;
                    oldsn = os;
                    d[i] = di;
                    let k = i - ll - 1;
                    c1[k] = cs;
                    s1[k] = -s;
                    c2[k] = oldcs;
                    s2[k] = -oldsn;
                }
                let h = d[ll] * cs;
                d[ll] = h * oldcs;
                e[ll] = h * oldsn;
                rotate_rows(vt, ll, &c2[..len], &s2[..len], Direction::Backward);
                rotate_cols(u, ll, &c1[..len], &s1[..len], Direction::Backward);
                if e[ll].abs() <= thresh {
                    e[ll] = 0.0;
                }
            }
            (false, Direction::Forward) => {
                let mut f = (d[ll].abs() - shift) * (sign(1.0, d[ll]) + shift / d[ll]);
                let mut g = e[ll];
                for i in ll..m {
                    let (cosr, sinr, r) = givens(f, g);
                    if i > ll {
                        e[i - 1] = r;
                    }
                    f = cosr * d[i] + sinr * e[i];
                    e[i] = cosr * e[i] - sinr * d[i];
                    g = sinr * d[i + 1];
                    d[i + 1] *= cosr;
                    let (cosl, sinl, r) = givens(f, g);
                    d[i] = r;
                    f = cosl * e[i] + sinl * d[i + 1];
                    d[i + 1] = cosl * d[i + 1] - sinl * e[i];
                    if i + 1 < m {
                        g = sinl * e[i + 1];
                        e[i + 1] *= cosl;
                    }
                    let k = i - ll;
                    c1[k] = cosr;
                    s1[k] = sinr;
                    c2[k] = cosl;
                    s2[k] = sinl;
                }
                e[m - 1] = f;
                rotate_rows(vt, ll, &c1[..len], &s1[..len], Direction::Forward);
                rotate_cols(u, ll, &c2[..len], &s2[..len], Direction::Forward);
                if e[m - 1].abs() <= thresh {
                    e[m - 1] = 0.0;
                }
            }
            (false, Direction::Backward) => {
                let mut f = (d[m].abs() - shift) * (sign(1.0, d[m]) + shift / d[m]);
                let mut g = e[m - 1];
                for i in (ll + 1..=m).rev() {
                    let (cosr, sinr, r) = givens(f, g);
                    if i < m {
                        e[i] = r;
                    }
                    f = cosr * d[i] + sinr * e[i - 1];
                    e[i - 1] = cosr * e[i - 1] - sinr * d[i];
                    g = sinr * d[i - 1];
                    d[i - 1] *= cosr;
                    let (cosl, sinl, r) = givens(f, g);
                    d[i] = r;
                    f = cosl * e[i - 1] + sinl * d[i - 1];
                    d[i - 1] = cosl * d[i - 1] - sinl * e[i - 1];
                    if i > ll + 1 {
                        g = sinl * e[i - 2];
                        e[i - 2] *= cosl;
                    }
                    let k = i - ll - 1;
                    c1[k] = cosr;
                    s1[k] = -sinr;
                    c2[k] = cosl;
                    s2[k] = -sinl;
                }
                e[ll] = f;
                if e[ll].abs() <= thresh {
                    e[ll] = 0.0;
                }
                rotate_rows(vt, ll, &c2[..len], &s2[..len], Direction::Backward);
                rotate_cols(u, ll, &c1[..len], &s1[..len], Direction::Backward);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense(d: &[f64], e: &[f64]) -> DMatrix<f64> {
        let n = d.len();
        let mut b = DMatrix::zeros(n, n);
        for i in 0..n {
            b[(i, i)] = d[i];
            if i + 1 < n {
                b[(i, i + 1)] = e[i];
            }
        }
        b
    }

    fn full(d: &[f64], e: &[f64]) -> BidiagonalSvd {
        let n = d.len();
        bidiagonal_svd(d, e, DMatrix::identity(n, n), DMatrix::identity(n, n)).unwrap()
    }

    #[test]
    fn one_by_one_sign_goes_to_vt() {
        let svd = full(&[-2.5], &[]);
        assert_eq!(svd.singular_values, vec![2.5]);
        assert_eq!(svd.vt[(0, 0)], -1.0);
        assert_eq!(svd.u[(0, 0)], 1.0);
    }

    #[test]
    fn two_by_two_known_values() {
        // [[1, 1], [0, 1]] has singular values golden ratio and its inverse.
        let svd = full(&[1.0, 1.0], &[1.0]);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((svd.singular_values[0] - phi).abs() < 1e-15);
        assert!((svd.singular_values[1] - 1.0 / phi).abs() < 1e-15);
    }

    #[test]
    fn tiny_singular_value_has_relative_accuracy() {
        // d = (λ, λ, ..., λ), e = (1, ..., 1): det = λ^n and the smallest
        // singular value is ≈ λ^n up to an O(1) factor; the product of all
        // singular values must reproduce |det| to working relative precision.
        let n = 40;
        let lambda: f64 = 0.1;
        let d = vec![lambda; n];
        let e = vec![1.0; n - 1];
        let svd = bidiagonal_svd(&d, &e, DMatrix::zeros(0, n), DMatrix::zeros(n, 0)).unwrap();
        let log_prod: f64 = svd.singular_values.iter().map(|s| s.ln()).sum();
        let expected = n as f64 * lambda.ln();
        assert!(((log_prod - expected) / expected).abs() < 1e-13);
        assert!(svd.singular_values[n - 1] < 1e-35);
    }

    #[test]
    fn selected_components_match_full_vectors() {
        let d = [0.3, 1.0, 0.2, 0.9, 0.05];
        let e = [0.7, 0.4, 1.1, 0.6];
        let n = d.len();
        let all = full(&d, &e);
        let mut u0 = DMatrix::zeros(1, n);
        u0[(0, n - 1)] = 1.0;
        let mut vt0 = DMatrix::zeros(n, 1);
        vt0[(0, 0)] = 1.0;
        let sel = bidiagonal_svd(&d, &e, u0, vt0).unwrap();
        for i in 0..n {
            assert_eq!(sel.singular_values[i], all.singular_values[i]);
            assert!((sel.u[(0, i)] - all.u[(n - 1, i)]).abs() < 1e-15);
            assert!((sel.vt[(i, 0)] - all.vt[(i, 0)]).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn reconstructs_and_matches_dense_svd(
            entries in proptest::collection::vec(-2.0f64..2.0, 1..24)
        ) {
            let n = entries.len().div_ceil(2);
            let d: Vec<f64> = entries.iter().take(n).copied().collect();
            let mut e: Vec<f64> = entries.iter().skip(n).copied().collect();
            e.resize(n - 1, 0.5);
            let b = dense(&d, &e);
            let svd = full(&d, &e);
            let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(svd.singular_values.clone()));
            let recon = &svd.u * sigma * &svd.vt;
            let scale = b.amax().max(1e-300);
            prop_assert!((recon - &b).amax() <= 1e-13 * scale);
            prop_assert!((svd.u.transpose() * &svd.u - DMatrix::identity(n, n)).amax() < 1e-13);
            prop_assert!((&svd.vt * svd.vt.transpose() - DMatrix::identity(n, n)).amax() < 1e-13);
            let mut reference: Vec<f64> = b.svd(false, false).singular_values.iter().copied().collect();
            reference.sort_by(|a, b| b.total_cmp(a));
            for (s, r) in svd.singular_values.iter().zip(&reference) {
                prop_assert!((s - r).abs() <= 1e-13 * scale);
            }
            for w in svd.singular_values.windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
        }
    }
}
