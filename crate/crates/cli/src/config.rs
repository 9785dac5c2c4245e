//! The JSON run configuration and its conversion to library inputs.

use serde::{Deserialize, Serialize};

use kmtheta::geometry::FrameConfig;
use kmtheta::{
    fixture, Coset, EvenLattice, Error, InnerProductSpace, QuadratureSpec, Result, TauPoint,
    ThetaContext, Vector,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gram: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    pub c: CVectors,
    /// One generator per row, in ambient coordinates.
    pub lattice_basis: Vec<Vec<f64>>,
    #[serde(default)]
    pub cosets: CosetSelection,
    pub tau: Tau,
    pub qmax: f64,
    #[serde(default)]
    pub tol: Tolerances,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CVectors {
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub c1p: Vec<f64>,
    pub c2p: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tau {
    pub re: f64,
    pub im: f64,
}

/// `series` bounds truncation tails and series residuals, `quadrature` the
/// surface-integral residuals, and `special` the error-function integrals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub series: f64,
    pub quadrature: f64,
    pub special: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            series: 1e-5,
            quadrature: 1e-7,
            special: 1e-12,
        }
    }
}

/// `"all"` or a list of cosets written as `"[a/b,c/d,...]"`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSelection", into = "RawSelection")]
pub enum CosetSelection {
    #[default]
    All,
    List(Vec<String>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawSelection {
    Word(String),
    List(Vec<String>),
}

impl TryFrom<RawSelection> for CosetSelection {
    type Error = String;

    fn try_from(raw: RawSelection) -> std::result::Result<Self, String> {
        match raw {
            RawSelection::Word(w) if w == "all" => Ok(CosetSelection::All),
            RawSelection::Word(w) => Err(format!("cosets must be \"all\" or a list, got \"{w}\"")),
            RawSelection::List(l) => Ok(CosetSelection::List(l)),
        }
    }
}

impl From<CosetSelection> for RawSelection {
    fn from(s: CosetSelection) -> Self {
        match s {
            CosetSelection::All => RawSelection::Word("all".into()),
            CosetSelection::List(l) => RawSelection::List(l),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if !(self.tau.im > 0.0) {
            return Err(Error::InvalidInput(format!("tau.im must be positive, got {}", self.tau.im)));
        }
        if !(self.qmax >= 0.0) || !self.qmax.is_finite() {
            return Err(Error::InvalidInput(format!("qmax must be finite and nonnegative, got {}", self.qmax)));
        }
        let t = self.tol;
        if [t.series, t.quadrature, t.special].iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// The canonical configuration: the seeded fixture in `diag(1,1,-1,-1)`
    /// with the lattice `√2 Z^4`.
    pub fn canonical() -> Self {
        let cfg = fixture::canonical_config();
        let l = fixture::fixture_lattice();
        let n = l.rank();
        let basis = l.basis();
        let sp = cfg.space();
        RunConfig {
            gram: (0..n).map(|i| (0..n).map(|j| sp.gram()[(i, j)]).collect()).collect(),
            c: CVectors {
                c1: cfg.c1.0.clone(),
                c2: cfg.c2.0.clone(),
                c1p: cfg.c1p.0.clone(),
                c2p: cfg.c2p.0.clone(),
            },
            lattice_basis: (0..n).map(|j| (0..n).map(|i| basis[(i, j)]).collect()).collect(),
            cosets: CosetSelection::All,
            tau: Tau { re: 0.3, im: 1.1 },
            qmax: 4.0,
            tol: Tolerances::default(),
            seed: fixture::CANONICAL_SEED,
        }
    }

    pub fn space(&self) -> Result<InnerProductSpace> {
        InnerProductSpace::from_rows(&self.gram)
    }

    pub fn vectors(&self) -> [Vector; 4] {
        [&self.c.c1, &self.c.c2, &self.c.c1p, &self.c.c2p].map(|v| Vector::new(v.clone()))
    }

    /// Looks up `c1`, `c2`, `c1p` or `c2p` by name.
    pub fn vector(&self, name: &str) -> Result<Vector> {
        let v = match name {
            "c1" => &self.c.c1,
            "c2" => &self.c.c2,
            "c1p" => &self.c.c1p,
            "c2p" => &self.c.c2p,
            _ => return Err(Error::InvalidInput(format!("unknown vector '{name}'"))),
        };
        Ok(Vector::new(v.clone()))
    }

    pub fn frame_config(&self) -> Result<FrameConfig> {
        let [c1, c2, c1p, c2p] = self.vectors();
        FrameConfig::new(self.space()?, c1, c2, c1p, c2p)
    }

    pub fn lattice(&self) -> Result<EvenLattice> {
        EvenLattice::from_rows(self.space()?, &self.lattice_basis)
    }

    pub fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            abs_tol: self.tol.special,
            ..QuadratureSpec::default()
        }
    }

    pub fn tau(&self) -> Result<TauPoint> {
        TauPoint::new(self.tau.re, self.tau.im)
    }

    pub fn context(&self) -> Result<ThetaContext> {
        ThetaContext::new(self.lattice()?, self.frame_config()?, self.spec())
    }

    /// The selected cosets, each checked to lie in the dual lattice.
    pub fn cosets(&self, ctx: &ThetaContext) -> Result<Vec<Coset>> {
        let list = match &self.cosets {
            CosetSelection::All => return ctx.cosets(),
            CosetSelection::List(l) => l,
        };
        let l = ctx.lattice();
        list.iter()
            .map(|s| {
                let mu: Coset = s.parse()?;
                if mu.mu.len() != l.rank() {
                    return Err(Error::DimensionMismatch {
                        expected: l.rank(),
                        got: mu.mu.len(),
                    });
                }
                if !mu.is_dual(l) {
                    return Err(Error::InvalidInput(format!("{s} is not in the dual lattice")));
                }
                Ok(mu)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut cfg = RunConfig::canonical();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
        cfg.cosets = CosetSelection::List(vec!["[1/2,0,0,1/2]".into()]);
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
    }

    #[test]
    fn canonical_builds() {
        let cfg = RunConfig::canonical();
        let ctx = cfg.context().unwrap();
        assert_eq!(cfg.cosets(&ctx).unwrap().len(), 16);
        assert_eq!(ctx.lattice(), &fixture::fixture_lattice());
    }

    #[test]
    fn rejects_bad_inputs() {
        let good = serde_json::to_value(RunConfig::canonical()).unwrap();
        let mut v = good.clone();
        v["tau"]["im"] = (-1.0).into();
        assert!(RunConfig::parse(&v.to_string()).is_err());
        let mut v = good.clone();
        v["cosets"] = "some".into();
        assert!(RunConfig::parse(&v.to_string()).is_err());
        let mut v = good;
        v.as_object_mut().unwrap().remove("seed");
        assert!(RunConfig::parse(&v.to_string()).is_err());
    }

    #[test]
    fn rejects_cosets_outside_the_dual() {
        let mut cfg = RunConfig::canonical();
        cfg.cosets = CosetSelection::List(vec!["[1/3,0,0,0]".into()]);
        let ctx = cfg.context().unwrap();
        assert!(cfg.cosets(&ctx).is_err());
    }
}
