//! Continuous piecewise-linear functions over a closed rational interval,
//! stored as breakpoints plus per-segment affine pieces in global
//! coordinates.

use crate::error::{Error, Result};
use crate::rat::Rat;

/// value(t) = intercept + slope * t
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub intercept: Rat,
    pub slope: Rat,
}

impl Affine {
    pub fn new(intercept: Rat, slope: Rat) -> Self {
        Affine { intercept, slope }
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        &self.intercept + &(&self.slope * t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinear {
    /// strictly increasing, one more entry than `segments`
    breakpoints: Vec<Rat>,
    segments: Vec<Affine>,
}

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<Rat>, segments: Vec<Affine>) -> Result<Self> {
        if breakpoints.len() != segments.len() + 1 || segments.is_empty() {
            return Err(Error::Validation(
                "piecewise-linear function needs n+1 breakpoints for n segments".into(),
            ));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Validation(
                    "piecewise-linear breakpoints must increase strictly".into(),
                ));
            }
        }
        for k in 1..segments.len() {
            let t = &breakpoints[k];
            if segments[k - 1].eval(t) != segments[k].eval(t) {
                return Err(Error::Validation(format!(
                    "piecewise-linear function discontinuous at t = {t}"
                )));
            }
        }
        Ok(PiecewiseLinear {
            breakpoints,
            segments,
        })
    }

    /// A single affine piece on [lo, hi].
    pub fn single(lo: Rat, hi: Rat, piece: Affine) -> Result<Self> {
        Self::new(vec![lo, hi], vec![piece])
    }

    pub fn domain(&self) -> (&Rat, &Rat) {
        (
            self.breakpoints.first().unwrap(),
            self.breakpoints.last().unwrap(),
        )
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Affine] {
        &self.segments
    }

    pub fn eval(&self, t: &Rat) -> Result<Rat> {
        let (lo, hi) = self.domain();
        if t < lo || t > hi {
            return Err(Error::SliceOutOfDomain {
                t: t.to_string(),
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        let k = self
            .breakpoints
            .windows(2)
            .position(|w| t >= &w[0] && t <= &w[1])
            .expect("t within domain");
        Ok(self.segments[k].eval(t))
    }

    /// (t, value) at every breakpoint.
    pub fn vertices(&self) -> Vec<(Rat, Rat)> {
        let mut out = Vec::with_capacity(self.breakpoints.len());
        out.push((
            self.breakpoints[0].clone(),
            self.segments[0].eval(&self.breakpoints[0]),
        ));
        for (k, seg) in self.segments.iter().enumerate() {
            let t = &self.breakpoints[k + 1];
            out.push((t.clone(), seg.eval(t)));
        }
        out
    }

    pub fn is_convex(&self) -> bool {
        self.segments
            .windows(2)
            .all(|w| w[0].slope <= w[1].slope)
    }

    pub fn is_concave(&self) -> bool {
        self.segments
            .windows(2)
            .all(|w| w[0].slope >= w[1].slope)
    }

    /// self(t) <= other(t) on the common domain (assumed equal). Both are
    /// piecewise affine, so checking at the union of breakpoints suffices.
    pub fn le(&self, other: &PiecewiseLinear) -> bool {
        let mut ts: Vec<&Rat> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .collect();
        ts.sort();
        ts.dedup();
        ts.iter().all(|t| match (self.eval(t), other.eval(t)) {
            (Ok(a), Ok(b)) => a <= b,
            _ => false,
        })
    }
}
