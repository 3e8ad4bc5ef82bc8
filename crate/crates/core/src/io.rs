//! Map-definition files.
//!
//! ```json
//! {"p": [[i, j, "re_num/re_den", "im_num/im_den"], ...], "q": [...]}
//! ```
//!
//! Each entry is the coefficient of `X^i Y^j`. Output lists terms by
//! ascending `(i, j)` and always writes both parts as `num/den` in lowest
//! terms, so reading and writing a canonical file is the identity.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::ParseError;
use crate::map::ExactMap;
use crate::poly::ExactPoly;
use crate::scalar::{format_rational, parse_rational, GaussianRational};

#[derive(Serialize, Deserialize)]
struct MapFile {
    p: Vec<(u32, u32, String, String)>,
    q: Vec<(u32, u32, String, String)>,
}

fn parse_terms(raw: &Value, name: &str) -> Result<ExactPoly, ParseError> {
    let bad = |msg: String| ParseError::MapFile(format!("{name}: {msg}"));
    let entries = raw
        .as_array()
        .ok_or_else(|| bad("expected an array of terms".into()))?;
    let mut poly = ExactPoly::zero();
    let mut seen = std::collections::BTreeSet::new();
    for (k, e) in entries.iter().enumerate() {
        let parts = e
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| bad(format!("term {k} must be [i, j, re, im]")))?;
        let exp = |v: &Value| {
            v.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| bad(format!("term {k} has a bad exponent")))
        };
        let (i, j) = (exp(&parts[0])?, exp(&parts[1])?);
        let part = |v: &Value| {
            v.as_str()
                .ok_or_else(|| bad(format!("term {k}: coefficients must be strings")))
                .and_then(|s| parse_rational(s).map_err(|e| bad(format!("term {k}: {e}"))))
        };
        let c = GaussianRational::new(part(&parts[2])?, part(&parts[3])?);
        if !seen.insert((i, j)) {
            return Err(bad(format!("exponent ({i}, {j}) listed twice")));
        }
        poly.add_term(i, j, c);
    }
    Ok(poly)
}

pub fn map_from_json(s: &str) -> Result<ExactMap, ParseError> {
    let v: Value = serde_json::from_str(s)?;
    let obj = v
        .as_object()
        .ok_or_else(|| ParseError::MapFile("expected an object with keys p and q".into()))?;
    let get = |k: &str| {
        obj.get(k)
            .ok_or_else(|| ParseError::MapFile(format!("missing key {k:?}")))
    };
    Ok(ExactMap::new(parse_terms(get("p")?, "p")?, parse_terms(get("q")?, "q")?))
}

fn terms_of(p: &ExactPoly) -> Vec<(u32, u32, String, String)> {
    p.terms()
        .map(|((i, j), c)| (i, j, format_rational(&c.re), format_rational(&c.im)))
        .collect()
}

pub fn map_to_json(f: &ExactMap) -> String {
    let file = MapFile {
        p: terms_of(f.p()),
        q: terms_of(f.q()),
    };
    serde_json::to_string(&file).expect("map serializes")
}

pub fn read_map(path: &std::path::Path) -> Result<ExactMap, ParseError> {
    map_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_map(path: &std::path::Path, f: &ExactMap) -> Result<(), ParseError> {
    std::fs::write(path, map_to_json(f) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_files_round_trip_bit_exactly() {
        let text = r#"{"p":[[0,1,"1/1","0/1"]],"q":[[0,2,"1/1","0/1"],[1,0,"-1/1","0/1"]]}"#;
        let f = map_from_json(text).unwrap();
        assert_eq!(f, ExactMap::shear(&[0.into(), 0.into(), 1.into()]));
        assert_eq!(map_to_json(&f), text);
    }

    #[test]
    fn loose_input_is_canonicalized() {
        let f = map_from_json(r#"{"p": [[1, 0, "2/4", "0"]], "q": [[0, 1, "3", "-6/3"], [2, 0, "0", "0"]]}"#).unwrap();
        assert_eq!(
            map_to_json(&f),
            r#"{"p":[[1,0,"1/2","0/1"]],"q":[[0,1,"3/1","-2/1"]]}"#
        );
    }

    #[test]
    fn malformed_files() {
        for bad in [
            "not json",
            r#"{"p": []}"#,
            r#"{"p": [[0, 0, 1, "0"]], "q": []}"#,
            r#"{"p": [[0, 0, "1/0", "0"]], "q": []}"#,
            r#"{"p": [[-1, 0, "1", "0"]], "q": []}"#,
            r#"{"p": [[0, 0, "1", "0"], [0, 0, "2", "0"]], "q": []}"#,
            r#"{"p": [[0, 0, "1"]], "q": []}"#,
        ] {
            assert!(map_from_json(bad).is_err(), "{bad}");
        }
    }
}
