use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::psd::{psd_check, PsdResult};
use crate::error::{Error, Result};
use crate::linopt::RatMatrix;
use crate::polyalg::{Exponent, Poly, SymPoly};
use crate::rational::{self, Rational};

/// `target = scale · v Q vᵀ`, lifted to the target's variable count when `v`
/// uses fewer variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SosCertificate {
    pub v: Vec<Exponent>,
    pub q: RatMatrix,
    pub scale: Rational,
}

/// Wire format: `{"v": [[exponents]...], "Q": [["p/q"...]...], "scale": "p/q"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SosCertificateJson {
    pub v: Vec<Vec<u32>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<String>>,
    pub scale: String,
}

impl SosCertificate {
    /// Number of variables the monomial vector lives in.
    pub fn n_vars(&self) -> usize {
        self.v.first().map_or(0, Vec::len)
    }

    /// `v Q vᵀ` as a polynomial.
    pub fn gram_polynomial(&self) -> Result<Poly> {
        let k = self.v.len();
        if self.q.rows() != k || self.q.cols() != k {
            return Err(Error::DimensionMismatch(format!("{} monomials but a {}x{} Gram matrix", k, self.q.rows(), self.q.cols())));
        }
        let m = self.n_vars();
        if self.v.iter().any(|e| e.len() != m) {
            return Err(Error::DimensionMismatch("monomials with different variable counts".into()));
        }
        let mut p = Poly::zero(m.max(1));
        for i in 0..k {
            for j in 0..k {
                let c = &self.q[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let e: Exponent = self.v[i].iter().zip(&self.v[j]).map(|(a, b)| a + b).collect();
                p.add_term(e, c.clone());
            }
        }
        Ok(p)
    }

    /// Explains the first failed check, if any.
    pub fn check(&self, target: &SymPoly) -> std::result::Result<(), String> {
        if !self.scale.is_positive() {
            return Err("scale must be positive".into());
        }
        if !self.q.is_symmetric() {
            return Err("Gram matrix is not symmetric".into());
        }
        let p = self.gram_polynomial().map_err(|e| e.to_string())?;
        let m = self.n_vars();
        let n = target.n_vars();
        if m > n {
            return Err(format!("certificate uses {m} variables, target only {n}"));
        }
        let mut p_sym = if p.is_zero() {
            SymPoly::zero(m, target.degree())
        } else {
            SymPoly::from_symmetric_poly(&p).map_err(|_| "v Q vᵀ is not symmetric".to_string())?
        };
        if m < n {
            p_sym = p_sym.lift(n).map_err(|e| e.to_string())?;
        }
        let lhs = p_sym.scale(&self.scale);
        if target.sub(&lhs).map_or(true, |r| !r.is_zero()) {
            return Err("scale · v Q vᵀ differs from the target".into());
        }
        match psd_check(&self.q).map_err(|e| e.to_string())? {
            PsdResult::Psd(w) if w.verify(&self.q) => Ok(()),
            PsdResult::Psd(_) => Err("LDL witness failed to verify".into()),
            PsdResult::NotPsd { value, .. } => Err(format!("Gram matrix is not PSD (direction with value {value})")),
        }
    }

    pub fn to_json(&self) -> SosCertificateJson {
        SosCertificateJson {
            v: self.v.clone(),
            q: self.q.to_rows().iter().map(|r| r.iter().map(rational::format).collect()).collect(),
            scale: rational::format(&self.scale),
        }
    }

    pub fn from_json(j: &SosCertificateJson) -> Result<SosCertificate> {
        let rows = j
            .q
            .iter()
            .map(|r| r.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let q = if rows.is_empty() { RatMatrix::zeros(0, 0) } else { RatMatrix::from_rows(rows)? };
        Ok(SosCertificate { v: j.v.clone(), q, scale: rational::parse(&j.scale)? })
    }
}

/// Exact check that `target = scale · v Q vᵀ` (after lifting) with `Q ⪰ 0`.
pub fn verify_sos(target: &SymPoly, cert: &SosCertificate) -> bool {
    cert.check(target).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::symmetrize_poly;
    use crate::rational::int;

    fn diff_sq() -> Poly {
        (&Poly::var(2, 0) - &Poly::var(2, 1)).pow(2)
    }

    #[test]
    fn examples() {
        let target = SymPoly::from_symmetric_poly(&diff_sq().scale(&int(2))).unwrap();
        let good = SosCertificate {
            v: vec![vec![1, 0], vec![0, 1]],
            q: RatMatrix::from_i64(&[&[2, -2], &[-2, 2]]),
            scale: int(1),
        };
        assert!(verify_sos(&target, &good));
        let wrong = SosCertificate { q: RatMatrix::from_i64(&[&[2, 0], &[0, 2]]), ..good.clone() };
        assert!(!verify_sos(&target, &wrong));
        // polynomial identity holds, matrix indefinite
        let t2 = SymPoly::from_symmetric_poly(&Poly::from_terms(2, [(vec![2, 0], int(1)), (vec![0, 2], int(1)), (vec![1, 1], int(4))])).unwrap();
        let indefinite = SosCertificate { v: good.v.clone(), q: RatMatrix::from_i64(&[&[1, 2], &[2, 1]]), scale: int(1) };
        assert!(indefinite.gram_polynomial().unwrap() == SymPoly::expand(&t2));
        assert!(!verify_sos(&t2, &indefinite));
    }

    #[test]
    fn lifted_certificate() {
        let t4 = symmetrize_poly(&diff_sq(), 4).unwrap();
        // Sym_2 of (x1-x2)^2 is 2(x1-x2)^2; lifting to 4 variables multiplies by 2!·C(2,0)... handled by lift
        let c = SosCertificate {
            v: vec![vec![1, 0], vec![0, 1]],
            q: RatMatrix::from_i64(&[&[2, -2], &[-2, 2]]),
            scale: int(1),
        };
        assert!(verify_sos(&t4, &c));
        let doubled = SosCertificate { scale: int(2), ..c };
        assert!(!verify_sos(&t4, &doubled));
    }

    #[test]
    fn json_round_trip() {
        let c = SosCertificate { v: vec![vec![1, 0], vec![0, 1]], q: RatMatrix::from_i64(&[&[2, -2], &[-2, 2]]), scale: int(3) };
        let s = serde_json::to_string(&c.to_json()).unwrap();
        assert_eq!(s, r#"{"v":[[1,0],[0,1]],"Q":[["2/1","-2/1"],["-2/1","2/1"]],"scale":"3/1"}"#);
        let back = SosCertificate::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
