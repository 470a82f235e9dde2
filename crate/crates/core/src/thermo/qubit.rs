//! Single-qubit closed form: a state is heat-detectable iff its Bloch radius
//! exceeds the largest radius on the octahedron slice `h . r = E0`.

use serde::Serialize;

use crate::error::{Error, Result};

const TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitVerdict {
    Certified,
    Inconclusive,
}

fn unit(v: f64) -> [[f64; 3]; 6] {
    let mut out = [[0.0; 3]; 6];
    for k in 0..3 {
        out[2 * k][k] = v;
        out[2 * k + 1][k] = -v;
    }
    out
}

/// `R*(E0)`: the maximal Bloch radius over octahedron points with `h . r = E0`.
/// Extreme points of the slice lie on edges `+-e_i -- +-e_j` or at vertices.
pub fn r_star(h_unit: [f64; 3], e0: f64) -> Result<f64> {
    let norm = h_unit.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidHamiltonian(format!("field must be a unit vector, |h| = {norm}")));
    }
    let vertices = unit(1.0);
    let energy = |r: &[f64; 3]| r.iter().zip(&h_unit).map(|(a, b)| a * b).sum::<f64>();
    let mut best: Option<f64> = None;
    let mut offer = |r: f64| best = Some(best.map_or(r, |b: f64| b.max(r)));
    for v in &vertices {
        if (energy(v) - e0).abs() <= TOL {
            offer(1.0);
        }
    }
    for (i, u) in vertices.iter().enumerate() {
        for v in &vertices[i + 1..] {
            // skip antipodal pairs, which are not edges
            if u.iter().zip(v).any(|(a, b)| a * b < 0.0) {
                continue;
            }
            let (eu, ev) = (energy(u), energy(v));
            if (eu - ev).abs() <= TOL {
                continue;
            }
            let t = (e0 - ev) / (eu - ev);
            if (-TOL..=1.0 + TOL).contains(&t) {
                let t = t.clamp(0.0, 1.0);
                offer((t * t + (1.0 - t) * (1.0 - t)).sqrt());
            }
        }
    }
    best.ok_or(Error::InfeasibleEnergy(e0))
}

/// Certified iff `|r| > R*(h . r)`, with energies outside the octahedron's
/// range certified outright.
pub fn detect_qubit(r: [f64; 3], h_unit: [f64; 3]) -> Result<QubitVerdict> {
    let radius = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if radius > 1.0 + 1e-12 {
        return Err(Error::InvalidDensity(format!("Bloch radius {radius} exceeds 1")));
    }
    let e0 = r.iter().zip(&h_unit).map(|(a, b)| a * b).sum::<f64>();
    match r_star(h_unit, e0) {
        Ok(rs) if radius <= rs + TOL => Ok(QubitVerdict::Inconclusive),
        Ok(_) | Err(Error::InfeasibleEnergy(_)) => Ok(QubitVerdict::Certified),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_values() {
        let s = 1.0 / 3f64.sqrt();
        assert!((r_star([s, s, s], 0.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        let expect = ((5.0 - 2.0 * 3f64.sqrt()) / 3.0).sqrt();
        assert!((r_star([0.0, 0.0, 1.0], s).unwrap() - expect).abs() < 1e-12);
        assert_eq!(r_star([0.0, 0.0, 1.0], 1.0).unwrap(), 1.0);
        assert!(r_star([0.0, 0.0, 1.0], 1.1).is_err());
    }

    #[test]
    fn mesh_oracle() {
        // dense mesh over the octahedron surface and interior
        let h = [0.48, -0.6, 0.64];
        for e0 in [-0.5, -0.1, 0.0, 0.3, 0.55] {
            let rs = r_star(h, e0).unwrap();
            let mut best: f64 = 0.0;
            let steps = 400;
            for i in 0..=steps {
                for j in 0..=steps - i {
                    let (a, b) = (i as f64 / steps as f64, j as f64 / steps as f64);
                    let c = 1.0 - a - b;
                    for signs in 0..8 {
                        let sg = |k: usize| if signs >> k & 1 == 1 { -1.0 } else { 1.0 };
                        let r = [sg(0) * a, sg(1) * b, sg(2) * c];
                        let e = r[0] * h[0] + r[1] * h[1] + r[2] * h[2];
                        if (e - e0).abs() < 2e-3 {
                            best = best.max((r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt());
                        }
                    }
                }
            }
            assert!(best <= rs + 5e-3 && best >= rs - 5e-3, "{e0}: mesh {best} vs {rs}");
        }
    }

    #[test]
    fn verdicts() {
        let s = 1.0 / 3f64.sqrt();
        assert_eq!(detect_qubit([s, s, s], [0.0, 0.0, 1.0]).unwrap(), QubitVerdict::Certified);
        for v in unit(1.0) {
            assert_eq!(detect_qubit(v, [s, s, s]).unwrap(), QubitVerdict::Inconclusive);
        }
        let h = [s, -s, -s];
        let l = 1.0 - 0.5f64.sqrt();
        let r = [(1.0 - l) * 0.5f64.sqrt(), 0.0, (1.0 - l) * 0.5f64.sqrt()];
        assert_eq!(detect_qubit(r, h).unwrap(), QubitVerdict::Inconclusive);
        let r = [(1.0 - l + 1e-6) * 0.5f64.sqrt(), 0.0, (1.0 - l + 1e-6) * 0.5f64.sqrt()];
        assert_eq!(detect_qubit(r, h).unwrap(), QubitVerdict::Certified);
    }
}
