//! Euclidean triangle quantities and the scalar special functions behind the
//! energy `E`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Edge lengths of a Euclidean triangle satisfying the sharp triangle inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleLengths {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Interior angles in radians; `alpha` is opposite `a`, and so on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl TriangleAngles {
    pub fn sum(&self) -> f64 {
        self.alpha + self.beta + self.gamma
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }
}

impl TriangleLengths {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if is_triangle(a, b, c) {
            Ok(TriangleLengths { a, b, c })
        } else {
            Err(Error::InvalidTriangle(a, b, c))
        }
    }

    pub fn from_array(l: [f64; 3]) -> Result<Self> {
        Self::new(l[0], l[1], l[2])
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Heron's formula in Kahan's cancellation-free arrangement.
    pub fn area(&self) -> f64 {
        kahan_area(self.a, self.b, self.c)
    }

    pub fn angles(&self) -> TriangleAngles {
        let four_area = 4.0 * self.area();
        let (a2, b2, c2) = (self.a * self.a, self.b * self.b, self.c * self.c);
        TriangleAngles {
            alpha: four_area.atan2(b2 + c2 - a2),
            beta: four_area.atan2(a2 + c2 - b2),
            gamma: four_area.atan2(a2 + b2 - c2),
        }
    }

    /// Cotangents of the angles opposite `a`, `b`, `c`, computed from lengths.
    pub fn cotangents(&self) -> [f64; 3] {
        let four_area = 4.0 * self.area();
        let (a2, b2, c2) = (self.a * self.a, self.b * self.b, self.c * self.c);
        [(b2 + c2 - a2) / four_area, (a2 + c2 - b2) / four_area, (a2 + b2 - c2) / four_area]
    }

    pub fn circumradius(&self) -> f64 {
        self.a * self.b * self.c / (4.0 * self.area())
    }
}

/// True when `(a, b, c)` are positive, finite and satisfy the sharp triangle
/// inequalities.
pub fn is_triangle(a: f64, b: f64, c: f64) -> bool {
    let finite = a.is_finite() && b.is_finite() && c.is_finite();
    if !finite || a <= 0.0 || b <= 0.0 || c <= 0.0 {
        return false;
    }
    let [x, y, z] = sorted_desc(a, b, c);
    z - (x - y) > 0.0
}

fn sorted_desc(a: f64, b: f64, c: f64) -> [f64; 3] {
    let mut s = [a, b, c];
    s.sort_by(|p, q| q.total_cmp(p));
    s
}

fn kahan_area(a: f64, b: f64, c: f64) -> f64 {
    // Normalise by the longest side so the fourfold product cannot underflow.
    let [x, y, z] = sorted_desc(a, b, c);
    let (y, z) = (y / x, z / x);
    let p = (1.0 + (y + z)) * (z - (1.0 - y)) * (z + (1.0 - y)) * (1.0 + (y - z));
    0.25 * p.max(0.0).sqrt() * x * x
}

pub fn triangle_angles(t: &TriangleLengths) -> TriangleAngles {
    t.angles()
}

pub fn triangle_area(t: &TriangleLengths) -> f64 {
    t.area()
}

pub fn circumradius(t: &TriangleLengths) -> f64 {
    t.circumradius()
}

/// Signed area of the part of a triangle between the circumcentre, one edge
/// midpoint and one endpoint of that edge: `ell^2 cot(alpha) / 8`, where
/// `alpha` is the angle opposite the edge. Negative for obtuse `alpha`.
pub fn corner_area(ell: f64, alpha_opposite: f64) -> f64 {
    ell * ell * alpha_opposite.cos() / (8.0 * alpha_opposite.sin())
}

/// `|B_2k| / (2k (2k+1)!)` for k = 1..30, the coefficients of the Clausen
/// series `Cl2(t) = t - t ln|t| + sum_k c_k t^(2k+1)`, valid for |t| < 2 pi.
const CLAUSEN_COEFFS: [f64; 30] = [
    0.013888888888888888,
    6.944444444444444e-05,
    7.873519778281683e-07,
    1.1482216343327455e-08,
    1.8978869988971e-10,
    3.387301370953521e-12,
    6.372636443183181e-14,
    1.2462059912950672e-15,
    2.5105444608999545e-17,
    5.178258806090623e-19,
    1.0887357368300849e-20,
    2.325744114302087e-22,
    5.03519521314739e-24,
    1.1026499294381215e-25,
    2.4386585509007344e-27,
    5.440142678856253e-29,
    1.2228340131217352e-30,
    2.767263468967951e-32,
    6.3000905918320136e-34,
    1.4420868388418476e-35,
    3.3170939991595428e-37,
    7.663913557920658e-39,
    1.7778714733830659e-40,
    4.1396058982341375e-42,
    9.671557036081102e-44,
    2.2667187016766123e-45,
    5.327956311328254e-47,
    1.2557248389564336e-48,
    2.967000542247094e-50,
    7.026787317600742e-52,
];

/// Clausen function `Cl2(t) = -int_0^t log|2 sin(s/2)| ds`.
pub fn clausen(t: f64) -> f64 {
    if !t.is_finite() {
        return f64::NAN;
    }
    // Reduce to [-pi, pi]; Cl2 is odd and 2 pi periodic.
    let two_pi = 2.0 * PI;
    let mut r = t.rem_euclid(two_pi);
    if r > PI {
        r -= two_pi;
    }
    if r == 0.0 {
        return 0.0;
    }
    let r2 = r * r;
    // Horner in r^2, highest order first.
    let tail = CLAUSEN_COEFFS.iter().rev().fold(0.0, |acc, &c| acc * r2 + c) * r2 * r;
    r - r * r.abs().ln() + tail
}

/// Milnor's Lobachevsky function `L(x) = -int_0^x log|2 sin t| dt`.
///
/// Odd and pi-periodic; evaluated as `Cl2(2x) / 2`.
pub fn lobachevsky(x: f64) -> f64 {
    0.5 * clausen(2.0 * x)
}

/// `f(x, y, z) = alpha x + beta y + gamma z + L(alpha) + L(beta) + L(gamma)` for
/// the triangle with edge lengths `(e^x, e^y, e^z)`.
///
/// Its partial derivatives are the angles `(alpha, beta, gamma)`.
pub fn f_energy(x: f64, y: f64, z: f64) -> Result<f64> {
    let t = TriangleLengths::new(x.exp(), y.exp(), z.exp())?;
    let ang = t.angles();
    Ok(ang.alpha * x
        + ang.beta * y
        + ang.gamma * z
        + lobachevsky(ang.alpha)
        + lobachevsky(ang.beta)
        + lobachevsky(ang.gamma))
}

/// Largest value of `L`, attained at `pi / 6`.
pub const LOBACHEVSKY_MAX_ARG: f64 = FRAC_PI_2 / 3.0;
