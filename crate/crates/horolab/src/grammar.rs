//! Text forms of group elements and horosphere pieces.
//!
//! Points: `identity`, `iwasawa x y t` (`n_{x+iy} a_t`), `point x y r`
//! (the element `n_{x+iy} a_{ln r}` carrying `j` to `x + iy + rj`) and
//! `matrix ar ai br bi cr ci dr di`.
//!
//! Pieces: `square s`, `rectangle w h [x0 y0]` and `disk ρ [cx cy]`.

use horolab_core::boundary::{BoundaryCurve, Shape};
use horolab_core::{GroupElement, C64};

use crate::ConfigError;

fn numbers(word: &str, args: &[&str]) -> Result<Vec<f64>, ConfigError> {
    args.iter()
        .map(|a| {
            a.parse::<f64>()
                .map_err(|_| ConfigError::Grammar(format!("`{a}` in `{word}` is not a number")))
        })
        .collect()
}

fn arity(text: &str, got: usize, allowed: &[usize]) -> Result<(), ConfigError> {
    if allowed.contains(&got) {
        Ok(())
    } else {
        Err(ConfigError::Grammar(format!(
            "`{text}` has {got} numbers, expected {allowed:?}"
        )))
    }
}

pub fn parse_point(text: &str) -> Result<GroupElement, ConfigError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let Some((&head, rest)) = words.split_first() else {
        return Err(ConfigError::Grammar("empty point".into()));
    };
    let v = numbers(head, rest)?;
    match head {
        "identity" => {
            arity(text, v.len(), &[0])?;
            Ok(GroupElement::identity())
        }
        "iwasawa" => {
            arity(text, v.len(), &[3])?;
            Ok(GroupElement::n(C64::new(v[0], v[1])) * GroupElement::a(v[2]))
        }
        "point" => {
            arity(text, v.len(), &[3])?;
            if !(v[2] > 0.0) {
                return Err(ConfigError::Grammar(format!(
                    "height in `{text}` must be positive"
                )));
            }
            Ok(GroupElement::n(C64::new(v[0], v[1])) * GroupElement::a(v[2].ln()))
        }
        "matrix" => {
            arity(text, v.len(), &[8])?;
            let c = |i: usize| C64::new(v[2 * i], v[2 * i + 1]);
            GroupElement::new(c(0), c(1), c(2), c(3))
                .map_err(|e| ConfigError::Grammar(format!("`{text}`: {e}")))
        }
        _ => Err(ConfigError::Grammar(format!("unknown point form `{head}`"))),
    }
}

pub fn parse_piece(text: &str) -> Result<BoundaryCurve, ConfigError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let Some((&head, rest)) = words.split_first() else {
        return Err(ConfigError::Grammar("empty piece".into()));
    };
    let v = numbers(head, rest)?;
    let at = |i: usize| {
        if v.len() > i {
            C64::new(v[i], v[i + 1])
        } else {
            C64::new(0.0, 0.0)
        }
    };
    let shape = match head {
        "square" => {
            arity(text, v.len(), &[1, 3])?;
            Shape::Rectangle {
                w: v[0],
                h: v[0],
                corner: at(1),
            }
        }
        "rectangle" => {
            arity(text, v.len(), &[2, 4])?;
            Shape::Rectangle {
                w: v[0],
                h: v[1],
                corner: at(2),
            }
        }
        "disk" => {
            arity(text, v.len(), &[1, 3])?;
            Shape::Disk {
                radius: v[0],
                center: at(1),
            }
        }
        _ => return Err(ConfigError::Grammar(format!("unknown piece form `{head}`"))),
    };
    BoundaryCurve::from_shape(shape).map_err(|e| ConfigError::Grammar(format!("`{text}`: {e}")))
}
