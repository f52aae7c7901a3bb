//! Resultant constructions: polynomials whose roots are sums, products and
//! images of roots of given polynomials.

use crate::exact::rational::{rat, Rational};
use crate::exact::{QMatrix, QPoly};
use num_traits::{One, Zero};

/// Newton interpolation through the points `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> QPoly {
    let n = xs.len();
    let mut dd: Vec<Rational> = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut acc = QPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        acc = &(&acc * &QPoly::linear_root(&xs[i])) + &QPoly::constant(dd[i].clone());
    }
    acc
}

/// `Res_y(a(y), b_z(y))` as a polynomial in `z`, where `b_at(z0)` gives the
/// specialisation of `b` at `z = z0`. The leading `y`-coefficient of `b` must
/// be constant in `z` and `degree_bound` must bound the result's degree.
fn resultant_in_z(a: &QPoly, b_at: impl Fn(&Rational) -> QPoly, degree_bound: usize) -> QPoly {
    let xs: Vec<Rational> = (0..=degree_bound as i64).map(rat).collect();
    let ys: Vec<Rational> = xs.iter().map(|z| a.resultant(&b_at(z))).collect();
    interpolate(&xs, &ys)
}

/// Monic polynomial whose roots are all `α + β` with `p(α) = 0`, `q(β) = 0`,
/// counted with multiplicity.
pub fn composed_sum(p: &QPoly, q: &QPoly) -> QPoly {
    let (dp, dq) = (p.deg(), q.deg());
    if dp == 0 || dq == 0 {
        return QPoly::one();
    }
    // q(z - y) as a polynomial in y.
    let b_at = |z: &Rational| q.compose(&QPoly::new(vec![z.clone(), rat(-1)]));
    resultant_in_z(p, b_at, dp * dq).monic()
}

/// Monic polynomial whose roots are all products `α·β`.
pub fn composed_product(p: &QPoly, q: &QPoly) -> QPoly {
    let v = q.x_valuation();
    if v > 0 {
        let rest = QPoly::new(q.coeffs()[v..].to_vec());
        return &composed_product(p, &rest) * &QPoly::monomial(Rational::one(), p.deg() * v);
    }
    let (dp, dq) = (p.deg(), q.deg());
    if dp == 0 || dq == 0 {
        return QPoly::one();
    }
    // y^dq · q(z / y) = Σ q_i z^i y^(dq - i).
    let b_at = |z: &Rational| {
        let mut c = vec![Rational::zero(); dq + 1];
        let mut zi = Rational::one();
        for i in 0..=dq {
            c[dq - i] = q.coeff(i) * &zi;
            zi *= z;
        }
        QPoly::new(c)
    };
    resultant_in_z(p, b_at, dp * dq).monic()
}

/// Monic polynomial whose roots are all quotients `α / β`. `q(0)` must be nonzero.
pub fn composed_quotient(p: &QPoly, q: &QPoly) -> QPoly {
    composed_product(p, &q.reverse())
}

/// Characteristic polynomial of multiplication by `g` on `Q[x]/m`: its roots
/// are `g(α)` over the roots `α` of `m`.
pub fn image_poly(g: &QPoly, m: &QPoly) -> QPoly {
    let d = m.deg();
    let mut mat = QMatrix::zero(d, d);
    for j in 0..d {
        let col = (g * &QPoly::monomial(Rational::one(), j)).rem(m);
        for i in 0..d {
            mat.set(i, j, col.coeff(i));
        }
    }
    mat.char_poly().expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = QPoly::from_ints(&[3, -1, 0, 2]);
        let xs: Vec<Rational> = (0..4).map(rat).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), p);
    }

    #[test]
    fn sqrt_sums_and_products() {
        let two = QPoly::from_ints(&[-2, 0, 1]);
        let three = QPoly::from_ints(&[-3, 0, 1]);
        // roots ±√2 ± √3: x^4 - 10x^2 + 1
        assert_eq!(composed_sum(&two, &three), QPoly::from_ints(&[1, 0, -10, 0, 1]));
        // roots ±√6 each twice: (x^2 - 6)^2
        assert_eq!(composed_product(&two, &three), QPoly::from_ints(&[-6, 0, 1]).pow(2));
        // ratios of ±√2: 1, 1, -1, -1
        assert_eq!(
            composed_quotient(&two, &two),
            QPoly::from_roots(&[rat(1), rat(1), rat(-1), rat(-1)])
        );
    }

    #[test]
    fn image_of_generator_square() {
        // x^2 on roots of x^2 - x - 1 gives φ^2 and ψ^2, with sum 3 and product 1
        let m = QPoly::from_ints(&[-1, -1, 1]);
        assert_eq!(image_poly(&QPoly::from_ints(&[0, 0, 1]), &m), QPoly::from_ints(&[1, -3, 1]));
        assert_eq!(image_poly(&QPoly::constant(ratio(1, 2)), &m), QPoly::from_roots(&[ratio(1, 2), ratio(1, 2)]));
    }
}
