//! High-precision complex scalars built from two [`HPReal`] components.

use crate::numerics::real::HPReal;

#[derive(Debug, Clone)]
pub struct HPComplex {
    pub re: HPReal,
    pub im: HPReal,
}

impl HPComplex {
    pub fn new(re: HPReal, im: HPReal) -> Self {
        HPComplex { re, im }
    }

    pub fn from_real(re: HPReal) -> Self {
        let prec = re.prec();
        HPComplex { re, im: HPReal::zero(prec) }
    }

    pub fn zero(prec: u32) -> Self {
        HPComplex { re: HPReal::zero(prec), im: HPReal::zero(prec) }
    }

    pub fn add(&self, o: &Self) -> Self {
        HPComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        HPComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        HPComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn conj(&self) -> Self {
        HPComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sq(&self) -> HPReal {
        self.re.square().add(&self.im.square())
    }

    pub fn abs(&self) -> HPReal {
        self.norm_sq().sqrt()
    }

    pub fn div(&self, o: &Self) -> Self {
        let d = o.norm_sq();
        let n = self.mul(&o.conj());
        HPComplex { re: n.re.div(&d), im: n.im.div(&d) }
    }

    pub fn scale(&self, r: &HPReal) -> Self {
        HPComplex { re: self.re.mul(r), im: self.im.mul(r) }
    }

    pub fn neg(&self) -> Self {
        HPComplex { re: self.re.neg(), im: self.im.neg() }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let r = self.abs();
        let half = |x: HPReal| x.scale2(-1);
        let re = half(r.add(&self.re)).sqrt();
        let im_mag = half(r.sub(&self.re)).sqrt();
        let im = if self.im.is_positive_value() || self.im.is_zero_value() {
            im_mag
        } else {
            im_mag.neg()
        };
        HPComplex { re, im }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}
