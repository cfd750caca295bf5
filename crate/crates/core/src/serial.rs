//! JSON forms of exact results. Rationals travel as `"num/den"` strings
//! (`"n"` for integers), so a parse of an emitted document reconstructs the
//! exact series.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coeffring::{Poly, Prefactor, QSeries, RatFunc};
use crate::error::{Error, Result};
use crate::genera::{CISpec, GenusKind, GenusResult};
use crate::scalar::Field;
use crate::series::ZLaurent;
use crate::theta::{cached_f_ratio_tail_keys, f_ratio_tail, prime_f_ratio_tail};

/// Version of the JSON schema; bumped on incompatible changes.
pub const SCHEMA_VERSION: u32 = 1;

pub fn ratio_string<K: Field>(x: &K) -> String {
    let (n, d) = x.to_ratio_parts();
    if d == BigInt::from(1) {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

pub fn parse_ratio<K: Field>(s: &str) -> Result<K> {
    let bad = || Error::Domain(format!("malformed rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    K::from_ratio_parts(n, d).ok_or_else(bad)
}

fn prefactor_triple(p: Prefactor) -> [i64; 3] {
    [p.i_pow() as i64, p.q8_pow, p.s_pow]
}

fn poly_strings<K: Field>(p: &Poly<K>) -> Vec<String> {
    p.coeffs().iter().map(ratio_string).collect()
}

fn parse_poly<K: Field>(cs: &[String]) -> Result<Poly<K>> {
    Ok(Poly::new(cs.iter().map(|c| parse_ratio(c)).collect::<Result<_>>()?))
}

/// A [`QSeries`] as `[u_exp, num_coeffs, den_coeffs]` rows plus its prefactor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeriesJson {
    /// `[i_pow, q8_pow, s_pow]`.
    pub prefactor: [i64; 3],
    pub u_order: u32,
    pub terms: Vec<(u32, Vec<String>, Vec<String>)>,
}

impl QSeriesJson {
    pub fn from_series<K: Field>(q: &QSeries<K>) -> Self {
        QSeriesJson {
            prefactor: prefactor_triple(q.prefactor()),
            u_order: q.order(),
            terms: q
                .terms()
                .map(|(k, c)| (k, poly_strings(c.num()), poly_strings(c.den())))
                .collect(),
        }
    }

    pub fn to_series<K: Field>(&self) -> Result<QSeries<K>> {
        let terms = self
            .terms
            .iter()
            .map(|(k, n, d)| Ok((*k, RatFunc::new(parse_poly(n)?, parse_poly(d)?)?)))
            .collect::<Result<Vec<_>>>()?;
        let [i, q8, s] = self.prefactor;
        Ok(QSeries::from_coeffs(terms, self.u_order).with_prefactor(Prefactor::new(i, q8, s)))
    }
}

/// `[s_exp, "num/den"]` pairs of a Laurent polynomial in `s`.
pub type LaurentJson = Vec<(i64, String)>;

pub fn laurent_json<K: Field>(c: &RatFunc<K>) -> Option<LaurentJson> {
    c.laurent_terms()
        .map(|ts| ts.iter().map(|(e, x)| (*e, ratio_string(x))).collect())
}

pub fn parse_laurent<K: Field>(terms: &LaurentJson) -> Result<RatFunc<K>> {
    let ts = terms
        .iter()
        .map(|(e, x)| Ok((*e, parse_ratio(x)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatFunc::from_laurent_terms(&ts))
}

/// A genus result. `coefficients` lists `[u_exp, [[s_exp, "num/den"], …]]`;
/// a body with a coefficient that is not a Laurent polynomial is carried in
/// `series` instead.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenusJson {
    pub schema: u32,
    pub spec: CISpec,
    pub kind: GenusKind,
    pub q_order: u32,
    pub u_order: u32,
    pub coefficients: Vec<(u32, LaurentJson)>,
    pub prefactor: [i64; 3],
    pub certificate: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<QSeriesJson>,
}

impl GenusJson {
    pub fn from_result<K: Field>(r: &GenusResult<K>) -> Self {
        let rows: Option<Vec<_>> = r
            .body
            .terms()
            .map(|(k, c)| laurent_json(c).map(|l| (k, l)))
            .collect();
        let (coefficients, series) = match rows {
            Some(rows) => (rows, None),
            None => (Vec::new(), Some(QSeriesJson::from_series(&r.body))),
        };
        GenusJson {
            schema: SCHEMA_VERSION,
            spec: r.spec.clone(),
            kind: r.kind,
            q_order: r.q_order,
            u_order: r.body.order(),
            coefficients,
            prefactor: prefactor_triple(r.body.prefactor()),
            certificate: r.certified,
            warnings: r.warnings.clone(),
            series,
        }
    }

    pub fn body<K: Field>(&self) -> Result<QSeries<K>> {
        if let Some(s) = &self.series {
            return s.to_series();
        }
        let terms = self
            .coefficients
            .iter()
            .map(|(k, l)| Ok((*k, parse_laurent(l)?)))
            .collect::<Result<Vec<_>>>()?;
        let [i, q8, s] = self.prefactor;
        Ok(QSeries::from_coeffs(terms, self.u_order).with_prefactor(Prefactor::new(i, q8, s)))
    }

    pub fn to_result<K: Field>(&self) -> Result<GenusResult<K>> {
        Ok(GenusResult {
            spec: self.spec.clone(),
            kind: self.kind,
            body: self.body()?,
            q_order: self.q_order,
            certified: self.certificate,
            warnings: self.warnings.clone(),
        })
    }
}

/// A [`ZLaurent`] as `[z_exp, series]` rows with its window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZLaurentJson {
    pub min_exp: i64,
    pub z_order: i64,
    pub u_order: u32,
    pub terms: Vec<(i64, QSeriesJson)>,
}

impl ZLaurentJson {
    pub fn from_series<K: Field>(z: &ZLaurent<K>) -> Self {
        ZLaurentJson {
            min_exp: z.min_exp(),
            z_order: z.z_order(),
            u_order: z.q_order(),
            terms: z
                .terms()
                .map(|(k, c)| (k, QSeriesJson::from_series(c)))
                .collect(),
        }
    }

    pub fn to_series<K: Field>(&self) -> Result<ZLaurent<K>> {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| Ok((*k, c.to_series()?)))
            .collect::<Result<Vec<_>>>()?;
        ZLaurent::new(terms, self.min_exp, self.z_order, self.u_order)
    }
}

/// On-disk memo of `f_ratio_tail` values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct MemoFile {
    version: u32,
    entries: Vec<MemoEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct MemoEntry {
    q_order: u32,
    z_order: i64,
    series: ZLaurentJson,
}

const MEMO_VERSION: u32 = 1;
const MEMO_FILE: &str = "f_ratio_tail.v1.json";

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

/// Load a memo written by [`save_memo`] into the in-process cache.
/// Returns the number of entries loaded; a missing file loads nothing.
pub fn load_memo<K: Field>(dir: &std::path::Path) -> Result<usize> {
    let path = dir.join(MEMO_FILE);
    if !path.exists() {
        return Ok(0);
    }
    let text = std::fs::read_to_string(&path).map_err(io_err)?;
    let memo: MemoFile = serde_json::from_str(&text).map_err(io_err)?;
    if memo.version != MEMO_VERSION {
        return Ok(0);
    }
    for e in &memo.entries {
        prime_f_ratio_tail(e.q_order, e.z_order, e.series.to_series::<K>()?);
    }
    Ok(memo.entries.len())
}

/// Write every cached `f_ratio_tail` value to `dir`.
pub fn save_memo<K: Field>(dir: &std::path::Path) -> Result<usize> {
    let entries: Vec<_> = cached_f_ratio_tail_keys::<K>()
        .into_iter()
        .map(|(q_order, z_order)| MemoEntry {
            q_order,
            z_order,
            series: ZLaurentJson::from_series(&f_ratio_tail::<K>(q_order, z_order)),
        })
        .collect();
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let n = entries.len();
    let memo = MemoFile {
        version: MEMO_VERSION,
        entries,
    };
    let tmp = dir.join(format!("{MEMO_FILE}.tmp"));
    std::fs::write(&tmp, serde_json::to_string(&memo).map_err(io_err)?).map_err(io_err)?;
    std::fs::rename(&tmp, dir.join(MEMO_FILE)).map_err(io_err)?;
    Ok(n)
}

pub fn to_json_string<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable value")
}

pub fn genus_to_json<K: Field>(r: &GenusResult<K>) -> String {
    to_json_string(&GenusJson::from_result(r))
}

pub fn genus_from_json<K: Field>(s: &str) -> Result<GenusResult<K>> {
    let j: GenusJson =
        serde_json::from_str(s).map_err(|e| Error::Domain(format!("invalid genus JSON: {e}")))?;
    j.to_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type K = BigRational;

    #[test]
    fn ratio_strings() {
        let x = K::new(BigInt::from(-3), BigInt::from(6));
        assert_eq!(ratio_string(&x), "-1/2");
        assert_eq!(parse_ratio::<K>("-1/2").unwrap(), x);
        assert_eq!(ratio_string(&K::from_int(-200)), "-200");
        assert_eq!(parse_ratio::<K>("7").unwrap(), K::from_int(7));
        assert!(parse_ratio::<K>("1/0").is_err());
        assert!(parse_ratio::<K>("0.5").is_err());
    }

    #[test]
    fn memo_round_trip() {
        let dir = std::env::temp_dir().join(format!("ellgen-memo-{}", std::process::id()));
        let tail = f_ratio_tail::<K>(2, 3);
        assert!(save_memo::<K>(&dir).unwrap() >= 1);
        let j = ZLaurentJson::from_series(&tail);
        assert_eq!(j.to_series::<K>().unwrap(), tail);
        assert!(load_memo::<K>(&dir).unwrap() >= 1);
        assert_eq!(f_ratio_tail::<K>(2, 3), tail);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn qseries_round_trip() {
        let a = RatFunc::<K>::new(Poly::from_ints(&[1, 2]), Poly::from_ints(&[3, 0, 1])).unwrap();
        let q = QSeries::from_coeffs([(0, a.clone()), (3, a.scale(&K::new(1.into(), 7.into())))], 5)
            .with_prefactor(Prefactor::new(1, -3, 2));
        let j = QSeriesJson::from_series(&q);
        let text = serde_json::to_string(&j).unwrap();
        let back: QSeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_series::<K>().unwrap(), q);
    }
}
