//! Finite-dimensional Euclidean space.

use crate::scalar::Scalar;

pub(crate) fn distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + (*x - *y) * (*x - *y))
        .sqrt()
}

pub(crate) fn lerp<T: Scalar>(a: &[T], b: &[T], t: T) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| *x + t * (*y - *x)).collect()
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

#[cfg(test)]
mod tests {
    use crate::geometry::{check_cn_inequality, Point, Space};
    use approx::assert_abs_diff_eq;

    fn e(c: &[f64]) -> Point<f64> {
        Point::Euclidean(c.to_vec())
    }

    #[test]
    fn pythagoras_and_diagonal() {
        let r2 = Space::<f64>::euclidean(2).unwrap();
        assert_eq!(r2.distance(&e(&[0.0, 0.0]), &e(&[3.0, 4.0])).unwrap(), 5.0);
        assert_abs_diff_eq!(
            r2.distance(&e(&[0.0, 0.0]), &e(&[1.0, 1.0])).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn midpoint_and_quarter_point() {
        let r2 = Space::<f64>::euclidean(2).unwrap();
        let g = r2.geodesic(&e(&[0.0, 0.0]), &e(&[2.0, 0.0])).unwrap();
        assert_eq!(g.point_at(0.5).unwrap(), e(&[1.0, 0.0]));
        let r1 = Space::<f64>::euclidean(1).unwrap();
        let g = r1.geodesic(&e(&[0.0]), &e(&[4.0])).unwrap();
        assert_eq!(g.point_at(0.25).unwrap(), e(&[1.0]));
    }

    #[test]
    fn cn_residual_vanishes_in_flat_space() {
        let r3 = Space::<f64>::euclidean(3).unwrap();
        let rep = check_cn_inequality(
            &r3,
            &e(&[0.3, -1.0, 2.0]),
            &e(&[1.5, 0.25, -0.5]),
            &e(&[-2.0, 1.0, 0.75]),
            1e-9,
        )
        .unwrap();
        assert_abs_diff_eq!(rep.residual, 0.0, epsilon = 1e-12);
        assert!(rep.passes);
    }

    #[test]
    fn single_precision_instantiation() {
        let r2 = Space::<f32>::euclidean(2).unwrap();
        let d = r2
            .distance(&Point::Euclidean(vec![0.0f32, 0.0]), &Point::Euclidean(vec![3.0, 4.0]))
            .unwrap();
        assert_eq!(d, 5.0f32);
    }
}
