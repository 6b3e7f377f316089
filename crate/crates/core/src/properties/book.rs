use super::{Witness, WitnessKind};
use crate::error::{invalid, precondition, Result};
use crate::geometry::{Point, Space, ToleranceConfig};
use crate::scalar::Scalar;
use crate::spaces::book::{hypotenuse_midpoint, vertex_a, vertex_b, vertex_c};
use crate::topology::{in_elementary_set, Membership};

fn page_of<T>(p: &Point<T>) -> u32 {
    match p {
        Point::Book { page, .. } => *page,
        _ => 0,
    }
}

/// Finds the first apex `C_n` lying in every `U_A(D_j)` but outside
/// `U_P(B)`, where `P` is the midpoint of the hypotenuse of page 1. Such an
/// apex shows that the elementary sets around `A` do not shrink into
/// `U_P(B)`.
pub fn book_witness_tw_ne_tg<T: Scalar>(
    space: &Space<T>,
    probes: &[Point<T>],
    cfg: &ToleranceConfig<T>,
) -> Result<Witness<T>> {
    let Space::Book { pages, .. } = *space else {
        return Err(invalid("book witness needs a book space"));
    };
    if probes.is_empty() {
        return Err(invalid("probe list is empty"));
    }
    let a = vertex_a(space)?;
    let probes = probes.iter().map(|d| space.validate_point(d)).collect::<Result<Vec<_>>>()?;
    for (j, d) in probes.iter().enumerate() {
        if space.distance(&a, d)? <= cfg.tol_point {
            return Err(invalid(format!("probe {j} coincides with A")));
        }
    }
    let max_page = probes.iter().map(page_of).max().unwrap_or(1);
    if pages < max_page + 2 {
        return Err(invalid(format!(
            "book truncated at {pages} pages; use at least {} pages for these probes",
            max_page + 2
        )));
    }
    let (p, b) = (hypotenuse_midpoint(space, 1)?, vertex_b(space)?);
    for n in 1..=pages {
        let c = vertex_c(space, n)?;
        if let Some(w) = tw_record(space, &a, &p, &b, &c, &probes, cfg)? {
            return Ok(w);
        }
    }
    Err(precondition("no apex separates the probes from U_P(B)"))
}

fn tw_record<T: Scalar>(
    space: &Space<T>,
    a: &Point<T>,
    p: &Point<T>,
    b: &Point<T>,
    c: &Point<T>,
    probes: &[Point<T>],
    cfg: &ToleranceConfig<T>,
) -> Result<Option<Witness<T>>> {
    let outside = in_elementary_set(space, p, b, c, cfg)?;
    if outside.membership != Membership::Out {
        return Ok(None);
    }
    let mut w = Witness::new(WitnessKind::TwNeTgWitness, *space)
        .point("A", a.clone())
        .point("P", p.clone())
        .point("B", b.clone())
        .point("C_n", c.clone())
        .value("n", T::from_u32(page_of(c)).unwrap())
        .value("margin_P_B", outside.margin);
    for (j, d) in probes.iter().enumerate() {
        let q = in_elementary_set(space, a, d, c, cfg)?;
        if q.membership != Membership::In {
            return Ok(None);
        }
        w = w.point(format!("D_{}", j + 1), d.clone()).value(format!("margin_D_{}", j + 1), q.margin);
    }
    Ok(Some(w))
}

pub(crate) fn recheck_tw_ne_tg<T: Scalar>(w: &Witness<T>, cfg: &ToleranceConfig<T>) -> Result<Option<Witness<T>>> {
    let space = &w.space;
    let probes: Vec<Point<T>> = (1..)
        .map_while(|j| w.points.get(&format!("D_{j}")).cloned())
        .collect();
    let c = w.get_point("C_n")?;
    if c != &vertex_c(space, page_of(c))? {
        return Ok(None);
    }
    tw_record(space, w.get_point("A")?, w.get_point("P")?, w.get_point("B")?, c, &probes, cfg)
}

/// `g = [P, B]`, `x = C_2`, `y = C_3`: both ends project to `B` while their
/// midpoint `A` projects to `P`.
pub fn book_property_n_witness<T: Scalar>(space: &Space<T>, cfg: &ToleranceConfig<T>) -> Result<Witness<T>> {
    let Space::Book { pages, .. } = *space else {
        return Err(invalid("book witness needs a book space"));
    };
    if pages < 3 {
        return Err(invalid("the canonical witness uses pages 2 and 3"));
    }
    let g = space.geodesic(&hypotenuse_midpoint(space, 1)?, &vertex_b(space)?)?;
    let (x, y) = (vertex_c(space, 2)?, vertex_c(space, 3)?);
    let witness = super::checks::check_property_n(space, &g, &x, &y, 1, cfg)?;
    witness.ok_or_else(|| precondition("canonical book configuration did not violate (N)"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn n_of(w: &Witness<f64>) -> f64 {
        w.get_value("n").unwrap()
    }

    #[test]
    fn witness_indices_for_small_probe_sets() {
        let book = Space::book(6, 1.0).unwrap();
        let c = |n| vertex_c(&book, n).unwrap();
        let w = book_witness_tw_ne_tg(&book, &[c(1)], &cfg()).unwrap();
        assert_eq!(n_of(&w), 2.0);
        let w = book_witness_tw_ne_tg(&book, &[vertex_b(&book).unwrap()], &cfg()).unwrap();
        assert_eq!(n_of(&w), 2.0);
        let w = book_witness_tw_ne_tg(&book, &[c(2), c(3)], &cfg()).unwrap();
        assert_eq!(n_of(&w), 4.0);
        assert!(w.reverify(&cfg()).unwrap());
    }

    #[test]
    fn short_truncation_is_rejected() {
        let book = Space::book(4, 1.0).unwrap();
        let c3 = vertex_c(&book, 3).unwrap();
        assert!(matches!(
            book_witness_tw_ne_tg(&book, &[c3], &cfg()),
            Err(crate::Error::InvalidInput(_))
        ));
        assert!(book_witness_tw_ne_tg(&book, &[vertex_a(&book).unwrap()], &cfg()).is_err());
    }

    #[test]
    fn canonical_property_n_witness() {
        let book = Space::book(3, 1.0).unwrap();
        let w = book_property_n_witness(&book, &cfg()).unwrap();
        assert_eq!(w.get_value("t_x").unwrap(), 1.0);
        assert_eq!(w.get_value("t_y").unwrap(), 1.0);
        assert_eq!(w.get_value("t_m").unwrap(), 0.0);
        assert!(book.distance(w.get_point("m").unwrap(), &vertex_a(&book).unwrap()).unwrap() < 1e-12);
        assert!((w.get_value("excess").unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    }
}
