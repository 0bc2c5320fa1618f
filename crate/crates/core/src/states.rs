//! Named states: GHZ, W, maximally mixed, Werner mixtures and the
//! fully inseparable but biseparably-derived three-qubit mixture.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, PureState, SubsystemSignature};

/// Weight of the pure component in a Werner mixture.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct WernerParams(f64);

impl WernerParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "mixing fraction {p} outside [0,1]"
            )));
        }
        Ok(Self(p))
    }

    pub fn p(self) -> f64 {
        self.0
    }
}

/// `(1/√d) Σ_k e^{iφ_k} |k⟩^{⊗n}` with `φ_0 = 0`; `phases` holds `φ_1..φ_{d−1}`.
pub fn ghz(n: usize, d: usize, phases: Option<&[f64]>) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "GHZ needs at least 2 parties, got {n}"
        )));
    }
    let signature = SubsystemSignature::uniform(n, d)?;
    if let Some(ph) = phases {
        if ph.len() != d - 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} phases, got {}",
                d - 1,
                ph.len()
            )));
        }
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); signature.total_dim()];
    for k in 0..d {
        let phi = match (k, phases) {
            (0, _) | (_, None) => 0.0,
            (k, Some(ph)) => ph[k - 1],
        };
        amps[signature.index(&vec![k; n])] = Complex64::from_polar(amp, phi);
    }
    PureState::new(signature, amps)
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`.
pub fn w3() -> PureState {
    let amp = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    for idx in [1, 2, 4] {
        amps[idx] = amp;
    }
    PureState::new(SubsystemSignature::qubits(3), amps).expect("W state is normalized")
}

pub fn maximally_mixed(signature: SubsystemSignature) -> DensityMatrix {
    DensityMatrix::maximally_mixed(signature)
}

/// `p|ψ⟩⟨ψ| + (1−p) ρ_MM`.
pub fn werner(pure: &PureState, p: WernerParams) -> DensityMatrix {
    let mm = DensityMatrix::maximally_mixed(pure.signature().clone());
    pure.to_density()
        .mix(p.p(), &mm)
        .expect("signatures match and p is in range")
}

/// Equal mixture of a Bell pair on each two-party subset with the third
/// party in `|0⟩`. Each reduced pair is separable yet every party is
/// entangled with the other two.
pub fn rho_insep() -> DensityMatrix {
    let sig = SubsystemSignature::qubits(3);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let pair = |a: usize, b: usize| {
        // Bell pair on parties (a, b), third party in |0⟩.
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        amps[0] = h;
        amps[(1 << (2 - a)) | (1 << (2 - b))] = h;
        PureState::new(sig.clone(), amps)
            .expect("normalized")
            .to_density()
    };
    DensityMatrix::mixture(&[(1.0, pair(0, 1)), (1.0, pair(1, 2)), (1.0, pair(0, 2))])
        .expect("components share a signature")
}

/// Built-in state names accepted on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    /// `ghz3` or `ghz(n,d)`.
    Ghz { n: usize, d: usize },
    /// `w3`.
    W3,
    /// `mm` (three qubits) or `mm(n)`.
    MaximallyMixed { n: usize },
    /// `insep`.
    Insep,
    /// `gw(p)`.
    GhzWerner(f64),
    /// `ww(p)`.
    WWerner(f64),
}

impl StateSpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        Ok(match *self {
            StateSpec::Ghz { n, d } => ghz(n, d, None)?.to_density(),
            StateSpec::W3 => w3().to_density(),
            StateSpec::MaximallyMixed { n } => {
                if n == 0 {
                    return Err(Error::InvalidParameter(
                        "mm needs at least one party".into(),
                    ));
                }
                maximally_mixed(SubsystemSignature::qubits(n))
            }
            StateSpec::Insep => rho_insep(),
            StateSpec::GhzWerner(p) => werner(&ghz(3, 2, None)?, WernerParams::new(p)?),
            StateSpec::WWerner(p) => werner(&w3(), WernerParams::new(p)?),
        })
    }

    pub fn parties(&self) -> usize {
        match *self {
            StateSpec::Ghz { n, .. } | StateSpec::MaximallyMixed { n } => n,
            _ => 3,
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::Parse(format!("unknown state `{s}`"));
        let (name, args) = match s.find('(') {
            Some(open) => {
                let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                (&s[..open], Some(inner))
            }
            None => (s.as_str(), None),
        };
        let nums = |inner: &str| -> Result<Vec<f64>> {
            inner
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
                .collect()
        };
        let count = |x: f64| -> Result<usize> {
            if x.fract() == 0.0 && x >= 0.0 {
                Ok(x as usize)
            } else {
                Err(bad())
            }
        };
        match (name, args) {
            ("ghz3", None) => Ok(StateSpec::Ghz { n: 3, d: 2 }),
            ("ghz", Some(a)) => match nums(a)?.as_slice() {
                [n] => Ok(StateSpec::Ghz {
                    n: count(*n)?,
                    d: 2,
                }),
                [n, d] => Ok(StateSpec::Ghz {
                    n: count(*n)?,
                    d: count(*d)?,
                }),
                _ => Err(bad()),
            },
            ("w3", None) => Ok(StateSpec::W3),
            ("mm", None) => Ok(StateSpec::MaximallyMixed { n: 3 }),
            ("mm", Some(a)) => match nums(a)?.as_slice() {
                [n] => Ok(StateSpec::MaximallyMixed { n: count(*n)? }),
                _ => Err(bad()),
            },
            ("insep", None) => Ok(StateSpec::Insep),
            ("gw", Some(a)) | ("ww", Some(a)) => match nums(a)?.as_slice() {
                [p] => {
                    WernerParams::new(*p)?;
                    Ok(if name == "gw" {
                        StateSpec::GhzWerner(*p)
                    } else {
                        StateSpec::WWerner(*p)
                    })
                }
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Ghz { n, d } => write!(f, "ghz({n},{d})"),
            StateSpec::W3 => write!(f, "w3"),
            StateSpec::MaximallyMixed { n } => write!(f, "mm({n})"),
            StateSpec::Insep => write!(f, "insep"),
            StateSpec::GhzWerner(p) => write!(f, "gw({p})"),
            StateSpec::WWerner(p) => write!(f, "ww({p})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ghz3_amplitudes() {
        let g = ghz(3, 2, None).unwrap();
        let a = g.amplitudes();
        assert_abs_diff_eq!(a[0].re, FRAC_1_SQRT_2);
        assert_abs_diff_eq!(a[7].re, FRAC_1_SQRT_2);
        assert_eq!(a.iter().filter(|z| z.norm() > 0.0).count(), 2);
    }

    #[test]
    fn ghz_qudit_and_bell() {
        let g = ghz(3, 4, None).unwrap();
        let sig = g.signature().clone();
        for k in 0..4 {
            assert_abs_diff_eq!(g.amplitudes()[sig.index(&[k, k, k])].re, 0.5);
        }
        let bell = ghz(2, 2, None).unwrap();
        assert_abs_diff_eq!(bell.amplitudes()[0].re, FRAC_1_SQRT_2);
        assert_abs_diff_eq!(bell.amplitudes()[3].re, FRAC_1_SQRT_2);
    }

    #[test]
    fn ghz_phase_count_checked() {
        assert!(ghz(3, 2, Some(&[0.1, 0.2])).is_err());
        let g = ghz(3, 2, Some(&[std::f64::consts::PI])).unwrap();
        assert_abs_diff_eq!(g.amplitudes()[7].re, -FRAC_1_SQRT_2, epsilon = 1e-15);
        assert!(ghz(1, 2, None).is_err());
    }

    #[test]
    fn w3_single_party_marginal() {
        let rho = w3().to_density();
        for party in 0..3 {
            let m = rho.partial_trace(&[party]).unwrap();
            assert_abs_diff_eq!(m.element(0, 0).re, 2.0 / 3.0, epsilon = 1e-15);
            assert_abs_diff_eq!(m.element(1, 1).re, 1.0 / 3.0, epsilon = 1e-15);
            assert_abs_diff_eq!(m.element(0, 1).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn w3_is_permutation_symmetric() {
        let w = w3();
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            assert_eq!(w.permute_parties(&perm).unwrap(), w);
        }
    }

    #[test]
    fn werner_endpoints_and_diagonal() {
        let g = ghz(3, 2, None).unwrap();
        let one = werner(&g, WernerParams::new(1.0).unwrap());
        assert!(one.matrix().max_abs_diff(g.to_density().matrix()) < 1e-15);
        let zero = werner(&g, WernerParams::new(0.0).unwrap());
        assert_eq!(
            zero,
            DensityMatrix::maximally_mixed(SubsystemSignature::qubits(3))
        );
        let p = 0.3;
        let rho = werner(&g, WernerParams::new(p).unwrap());
        assert_abs_diff_eq!(
            rho.element(0, 0).re,
            p / 2.0 + (1.0 - p) / 8.0,
            epsilon = 1e-15
        );
        assert!(WernerParams::new(1.5).is_err());
    }

    #[test]
    fn insep_is_valid_state() {
        let rho = rho_insep();
        let checked = DensityMatrix::new(rho.signature().clone(), rho.matrix().clone()).unwrap();
        assert_abs_diff_eq!(checked.matrix().trace().re, 1.0, epsilon = 1e-15);
        // |000⟩ collects 1/2 from each of the three components
        assert_abs_diff_eq!(rho.element(0, 0).re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(
            "ghz3".parse::<StateSpec>().unwrap(),
            StateSpec::Ghz { n: 3, d: 2 }
        );
        assert_eq!(
            "ghz(4,3)".parse::<StateSpec>().unwrap(),
            StateSpec::Ghz { n: 4, d: 3 }
        );
        assert_eq!(
            "GW(0.5)".parse::<StateSpec>().unwrap(),
            StateSpec::GhzWerner(0.5)
        );
        assert_eq!(
            "ww(1)".parse::<StateSpec>().unwrap(),
            StateSpec::WWerner(1.0)
        );
        assert_eq!(
            "mm".parse::<StateSpec>().unwrap(),
            StateSpec::MaximallyMixed { n: 3 }
        );
        assert_eq!(
            "mm(5)".parse::<StateSpec>().unwrap(),
            StateSpec::MaximallyMixed { n: 5 }
        );
        assert!("gw(2)".parse::<StateSpec>().is_err());
        assert!("ghz(2.5,2)".parse::<StateSpec>().is_err());
        assert!("bogus".parse::<StateSpec>().is_err());
        for s in ["ghz(3,2)", "w3", "mm(3)", "insep", "gw(0.25)", "ww(0.75)"] {
            let spec: StateSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }
}
