//! Named varieties.
//!
//! | name | n | form |
//! |---|---|---|
//! | `parabolic4` | 4 | `x0x1 + x2x3 + x4^2` |
//! | `rank3cone4` | 4 | `x0x1 + x2^2` |
//! | `rank4g2cone4` | 4 | `x0x1 + x2x3` |
//! | `rank4g1cone4` | 4 | `x0x1 + x2^2 + b x2x3 + c x3^2`, `(b, c)` smallest non-split |
//! | `hermitian4`, `hermitian3`, `hermitian2` | 4, 3, 2 | `sum x_i^(t+1)` |
//! | `hyperbolic3` | 3 | `x0x1 + x2x3` |
//! | `elliptic3` | 3 | `x0x1 + x2^2 + b x2x3 + c x3^2` |
//! | `cone3` | 3 | `x0x1 + x2^2` |
//! | `conic2` | 2 | `x0x1 + x2^2` |
//! | `hyperbolic-pair` | 4 | `x0x1` |
//! | `space4` | 4 | every point of PG(4) |

use crate::error::{Error, Result};
use crate::forms::{Form, HermitianForm, QuadraticForm};
use crate::gf::{Elem, Field};
use crate::proj::{PointSet, Space};

pub const PRESET_NAMES: &[&str] = &[
    "parabolic4",
    "rank3cone4",
    "rank4g2cone4",
    "rank4g1cone4",
    "hermitian4",
    "hermitian3",
    "hermitian2",
    "hyperbolic3",
    "elliptic3",
    "cone3",
    "conic2",
    "hyperbolic-pair",
    "space4",
];

/// A preset: either the zero set of a form or a whole space.
#[derive(Clone, Debug)]
pub enum Variety {
    Form(Form),
    Space(usize),
}

impl Variety {
    pub fn dim(&self) -> usize {
        match self {
            Variety::Form(f) => f.dim(),
            Variety::Space(n) => *n,
        }
    }

    pub fn form(&self) -> Option<&Form> {
        match self {
            Variety::Form(f) => Some(f),
            Variety::Space(_) => None,
        }
    }

    pub fn points(&self, space: &Space) -> Result<PointSet> {
        match self {
            Variety::Form(f) => crate::forms::variety_points(space, f),
            Variety::Space(_) => Ok(space.full_set()),
        }
    }
}

/// Smallest `(b, c)`, ordered by `b` then `c`, with `y^2 + b y + c` irreducible.
pub fn nonsplit_binary(field: &Field) -> (Elem, Elem) {
    for b in field.elements() {
        for c in field.elements() {
            let has_root = field
                .elements()
                .any(|y| field.sum([field.mul(y, y), field.mul(b, y), c]).is_zero());
            if !has_root {
                return (b, c);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}

fn quadric(field: &Field, n: usize, terms: &[(usize, usize, Elem)]) -> Form {
    Form::Quadric(QuadraticForm::from_terms(field, n, terms))
}

pub fn preset(name: &str, field: &Field) -> Result<Variety> {
    let one = Elem::ONE;
    let nonsplit = |n: usize| {
        let (b, c) = nonsplit_binary(field);
        quadric(field, n, &[(0, 1, one), (2, 2, one), (2, 3, b), (3, 3, c)])
    };
    let hermitian = |n: usize| -> Result<Variety> {
        Ok(Variety::Form(Form::Hermitian(HermitianForm::diagonal(
            field,
            &vec![one; n + 1],
        )?)))
    };
    Ok(Variety::Form(match name {
        "parabolic4" => quadric(field, 4, &[(0, 1, one), (2, 3, one), (4, 4, one)]),
        "rank3cone4" => quadric(field, 4, &[(0, 1, one), (2, 2, one)]),
        "rank4g2cone4" => quadric(field, 4, &[(0, 1, one), (2, 3, one)]),
        "rank4g1cone4" => nonsplit(4),
        "hermitian4" => return hermitian(4),
        "hermitian3" => return hermitian(3),
        "hermitian2" => return hermitian(2),
        "hyperbolic3" => quadric(field, 3, &[(0, 1, one), (2, 3, one)]),
        "elliptic3" => nonsplit(3),
        "cone3" => quadric(field, 3, &[(0, 1, one), (2, 2, one)]),
        "conic2" => quadric(field, 2, &[(0, 1, one), (2, 2, one)]),
        "hyperbolic-pair" => quadric(field, 4, &[(0, 1, one)]),
        "space4" => return Ok(Variety::Space(4)),
        other => return Err(Error::UnknownPreset(other.to_string())),
    }))
}
