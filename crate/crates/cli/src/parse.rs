//! Flag-value grammars.
//!
//! ```text
//! vector  := "" | scalar ("," scalar)*
//! vectors := vector (";" vector)*
//! matrix  := vectors            (rows separated by ';')
//! ```

use cdo_core::error::{Error, Result};
use cdo_core::levels::Level;
use cdo_core::rootdata::RootDatum;
use cdo_core::{Scalar, Q};

/// Split on `sep`, keeping byte offsets for diagnostics.
fn pieces(text: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == sep {
            out.push((start, &text[start..i]));
            start = i + c.len_utf8();
        }
    }
    out.push((start, &text[start..]));
    out
}

fn reposition(e: Error, text: &str, base: usize) -> Error {
    match e {
        Error::Parse { pos, msg, .. } => Error::parse(text, base + pos, msg),
        other => other,
    }
}

fn lead(piece: &str) -> usize {
    piece.len() - piece.trim_start().len()
}

fn scalar_at(text: &str, base: usize, piece: &str) -> Result<Scalar> {
    let s = piece.trim();
    if s.is_empty() {
        return Err(Error::parse(text, base, "expected a number"));
    }
    Scalar::parse(s).map_err(|e| reposition(e, text, base + lead(piece)))
}

pub fn scalars(text: &str) -> Result<Vec<Scalar>> {
    scalars_in(text, 0, text)
}

fn scalars_in(text: &str, base: usize, part: &str) -> Result<Vec<Scalar>> {
    if part.trim().is_empty() {
        return Ok(Vec::new());
    }
    pieces(part, ',').into_iter().map(|(o, p)| scalar_at(text, base + o, p)).collect()
}

fn rationals_in(text: &str, base: usize, part: &str) -> Result<Vec<Q>> {
    let ss = scalars_in(text, base, part)?;
    pieces(part, ',')
        .into_iter()
        .zip(ss)
        .map(|((o, p), s)| {
            s.as_rational()
                .ok_or_else(|| Error::parse(text, base + o + lead(p), format!("{} is not an exact rational", p.trim())))
        })
        .collect()
}

pub fn rationals(text: &str) -> Result<Vec<Q>> {
    rationals_in(text, 0, text)
}

pub fn integers(text: &str) -> Result<Vec<i64>> {
    let qs = rationals(text)?;
    let ps = pieces(text, ',');
    qs.iter()
        .zip(ps)
        .map(|(x, (o, p))| {
            if x.is_integer() {
                x.to_integer().try_into().map_err(|_| Error::parse(text, o + lead(p), "integer out of range"))
            } else {
                Err(Error::parse(text, o + lead(p), format!("{} is not an integer", p.trim())))
            }
        })
        .collect()
}

pub fn integer_lists(text: &str) -> Result<Vec<Vec<i64>>> {
    pieces(text, ';')
        .into_iter()
        .map(|(o, p)| integers(p).map_err(|e| reposition(e, text, o)))
        .collect()
}

pub fn matrix(text: &str) -> Result<Vec<Vec<Scalar>>> {
    let rows: Vec<Vec<Scalar>> = pieces(text, ';')
        .into_iter()
        .map(|(o, p)| scalars_in(text, o, p))
        .collect::<Result<_>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::parse(text, 0, "expected a square matrix (rows separated by ';')"));
    }
    Ok(rows)
}

pub fn rational_matrix(text: &str) -> Result<Vec<Vec<Q>>> {
    matrix(text)?
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| x.as_rational().ok_or_else(|| Error::parse(text, 0, "κ must be an exact rational matrix here")))
                .collect()
        })
        .collect()
}

/// Level from `--k` (every simple factor, and the center unless `--kappa`
/// is given) and `--kappa` (the center). Both absent: independent
/// indeterminates.
pub fn level(d: &RootDatum, k: Option<&str>, kappa: Option<&str>) -> Result<Level> {
    let generic = Level::generic(d);
    let simple = match k {
        Some(t) => vec![Scalar::parse(t)?; d.components().len()],
        None => generic.simple.clone(),
    };
    let abelian = match (kappa, k) {
        (Some(t), _) => matrix(t)?,
        (None, Some(t)) => Level::uniform(d, &Scalar::parse(t)?).abelian,
        (None, None) => generic.abelian,
    };
    Level::new(d, abelian, simple)
}

/// Coordinates in `X^*(T)` (or `X_*(T)`); absent means zero.
pub fn weight(d: &RootDatum, text: Option<&str>) -> Result<Vec<Q>> {
    match text {
        None => Ok(vec![Q::from_integer(0.into()); d.rank()]),
        Some(t) => {
            let v = rationals(t)?;
            if v.len() != d.rank() {
                return Err(Error::parse(t, 0, format!("expected {} coordinates", d.rank())));
            }
            Ok(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions() {
        match integers("1, x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        match integer_lists("1;2,1/2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(integer_lists("1,0;0,-1").unwrap(), vec![vec![1, 0], vec![0, -1]]);
        assert_eq!(integers("").unwrap(), Vec::<i64>::new());
    }

    #[test]
    fn matrices() {
        assert_eq!(matrix("2,1;1,3").unwrap().len(), 2);
        assert!(matrix("1,2").is_err());
    }
}
