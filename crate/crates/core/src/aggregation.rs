//! Connective table and piecewise-linear interpolation.

use thiserror::Error;

use crate::model::{Connective, TruthFunction, TruthValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConnectiveError {
    #[error("{0} needs at least one operand")]
    Empty(Connective),
    #[error("complement is unary, got {0} operands")]
    ComplementArity(usize),
    #[error("operand {0} is outside [0, 1]")]
    Domain(f64),
}

impl Connective {
    /// Binary form of the connective. Complement ignores `y`.
    pub fn binary(self, x: f64, y: f64) -> f64 {
        let v = match self {
            Connective::Min => x.min(y),
            Connective::Max => x.max(y),
            Connective::Prod => x * y,
            Connective::Luka => (x + y - 1.0).max(0.0),
            Connective::DProd => x + y - x * y,
            Connective::DLuka => (x + y).min(1.0),
            Connective::Complement => 1.0 - x,
        };
        // rounding in dprod can step one ulp past the unit interval
        v.clamp(0.0, 1.0)
    }

    /// Applies the connective to `values`, folding binary forms from the
    /// left.
    pub fn apply(self, values: &[f64]) -> Result<TruthValue, ConnectiveError> {
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(ConnectiveError::Domain(bad));
        }
        let out = match (self, values) {
            (_, []) => return Err(ConnectiveError::Empty(self)),
            (Connective::Complement, [x]) => 1.0 - x,
            (Connective::Complement, _) => return Err(ConnectiveError::ComplementArity(values.len())),
            (_, [first, rest @ ..]) => rest.iter().fold(*first, |acc, &v| self.binary(acc, v)),
        };
        Ok(TruthValue::new(out).expect("connectives are closed on [0, 1]"))
    }

    pub fn is_t_norm(self) -> bool {
        matches!(self, Connective::Min | Connective::Prod | Connective::Luka)
    }

    pub fn is_t_conorm(self) -> bool {
        matches!(self, Connective::Max | Connective::DProd | Connective::DLuka)
    }
}

/// `x` lies outside the span of a truth function's points.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("{0} is outside the function domain")]
pub struct OutOfDomain(pub f64);

/// Evaluates a truth function at `x`.
///
/// Declared points are reproduced exactly; between points the value is
/// interpolated linearly. Outside `[first.x, last.x]` there is no value.
pub fn interpolate(func: &TruthFunction, x: f64) -> Result<TruthValue, OutOfDomain> {
    let points = func.points();
    let (first, last) = (points[0].0, points[points.len() - 1].0);
    if !(first..=last).contains(&x) {
        return Err(OutOfDomain(x));
    }
    // first index whose x is >= the query
    let hi = points.partition_point(|&(px, _)| px < x);
    let (x1, tv1) = points[hi];
    if x1 == x {
        return Ok(tv1);
    }
    let (x0, tv0) = points[hi - 1];
    let (y0, y1) = (tv0.value(), tv1.value());
    let y = y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
    Ok(TruthValue::new(y.clamp(y0.min(y1), y0.max(y1))).expect("interpolant stays between endpoints"))
}

impl TruthFunction {
    pub fn eval(&self, x: f64) -> Result<TruthValue, OutOfDomain> {
        interpolate(self, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tv(v: f64) -> TruthValue {
        TruthValue::new(v).unwrap()
    }

    fn teenager() -> TruthFunction {
        TruthFunction::new(
            "teenager",
            vec![(9.0, tv(0.0)), (10.0, tv(1.0)), (19.0, tv(1.0)), (20.0, tv(0.0))],
        )
        .unwrap()
    }

    #[test]
    fn connective_examples() {
        assert_eq!(Connective::Prod.apply(&[0.5, 0.5]).unwrap().value(), 0.25);
        assert!((Connective::Luka.apply(&[0.7, 0.6]).unwrap().value() - 0.3).abs() < 1e-12);
        assert_eq!(Connective::Min.apply(&[0.9]).unwrap().value(), 0.9);
        assert_eq!(Connective::Complement.apply(&[0.0]).unwrap().value(), 1.0);
        assert_eq!(Connective::DProd.apply(&[0.5, 0.5]).unwrap().value(), 0.75);
        assert_eq!(Connective::DLuka.apply(&[0.7, 0.6]).unwrap().value(), 1.0);
        assert_eq!(Connective::Max.apply(&[0.2, 0.7, 0.4]).unwrap().value(), 0.7);
    }

    #[test]
    fn connective_errors() {
        assert_eq!(Connective::Min.apply(&[]), Err(ConnectiveError::Empty(Connective::Min)));
        assert_eq!(
            Connective::Complement.apply(&[0.1, 0.2]),
            Err(ConnectiveError::ComplementArity(2))
        );
        assert_eq!(Connective::Prod.apply(&[0.5, 1.5]), Err(ConnectiveError::Domain(1.5)));
    }

    #[test]
    fn teenager_curve() {
        let f = teenager();
        assert_eq!(interpolate(&f, 15.0).unwrap().value(), 1.0);
        assert_eq!(interpolate(&f, 9.5).unwrap().value(), 0.5);
        assert_eq!(interpolate(&f, 19.5).unwrap().value(), 0.5);
        assert_eq!(interpolate(&f, 20.0).unwrap().value(), 0.0);
        assert_eq!(interpolate(&f, 9.0).unwrap().value(), 0.0);
        assert_eq!(interpolate(&f, 8.0), Err(OutOfDomain(8.0)));
        assert_eq!(interpolate(&f, 20.5), Err(OutOfDomain(20.5)));
        assert!(interpolate(&f, f64::NAN).is_err());
    }

    #[test]
    fn negative_and_fractional_abscissae() {
        let f = TruthFunction::new("cold", vec![(-10.5, tv(1.0)), (-0.5, tv(0.0))]).unwrap();
        assert_eq!(f.eval(-5.5).unwrap().value(), 0.5);
    }

    fn arb_function() -> impl Strategy<Value = TruthFunction> {
        prop::collection::vec((0.01f64..10.0, 0.0f64..=1.0), 2..8).prop_map(|steps| {
            let mut x = -5.0;
            let points = steps
                .into_iter()
                .map(|(dx, y)| {
                    x += dx;
                    (x, tv(y))
                })
                .collect();
            TruthFunction::new("f", points).unwrap()
        })
    }

    proptest! {
        #[test]
        fn declared_points_reproduced(f in arb_function()) {
            for &(x, y) in f.points() {
                prop_assert_eq!(interpolate(&f, x).unwrap(), y);
            }
        }

        #[test]
        fn interpolation_is_lipschitz(f in arb_function(), t in 0.0f64..1.0, eps in 1e-9f64..1e-3) {
            let pts = f.points();
            let lo = pts[0].0;
            let hi = pts[pts.len() - 1].0;
            let x = lo + t * (hi - lo - eps);
            let slope = pts
                .windows(2)
                .map(|w| (w[1].1.value() - w[0].1.value()).abs() / (w[1].0 - w[0].0))
                .fold(0.0, f64::max);
            let a = interpolate(&f, x).unwrap().value();
            let b = interpolate(&f, x + eps).unwrap().value();
            prop_assert!((a - b).abs() <= slope * eps + 1e-12);
        }

        #[test]
        fn closure_and_fold_order(vals in prop::collection::vec(0.0f64..=1.0, 1..6)) {
            for op in Connective::ALL.into_iter().filter(|c| *c != Connective::Complement) {
                let left = op.apply(&vals).unwrap().value();
                let right = vals.iter().rev().copied().reduce(|acc, v| op.binary(v, acc)).unwrap();
                prop_assert!((0.0..=1.0).contains(&left));
                prop_assert!((left - right).abs() < 1e-12);
            }
        }
    }
}
