//! Text, LaTeX and JSON renderings of results.

use ellgen::coeffring::Prefactor;
use ellgen::genera::WittenValue;
use ellgen::serial::{laurent_json, ratio_string, GenusJson, LaurentJson};
use ellgen::{BigRat, CISpec, GenusKind, GenusResult, QSeries, RatFunc};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Text,
    Latex,
}

fn frac(x: &BigRat, style: Style) -> String {
    if x.is_integer() {
        return x.numer().to_string();
    }
    match style {
        Style::Text => format!("{}/{}", x.numer(), x.denom()),
        Style::Latex => {
            let sign = if x.is_negative() { "-" } else { "" };
            format!("{sign}\\frac{{{}}}{{{}}}", x.numer().abs(), x.denom())
        }
    }
}

/// `var^{num/den}` with the exponent reduced; empty for exponent 0.
fn power(var: &str, num: i64, den: i64, style: Style) -> String {
    let g = num_integer::gcd(num, den).max(1);
    let (n, d) = (num / g, den / g);
    let exp = if d == 1 { n.to_string() } else { format!("{n}/{d}") };
    match (n, style) {
        (0, _) => String::new(),
        (1, _) if d == 1 => var.to_string(),
        (_, Style::Latex) => format!("{var}^{{{exp}}}"),
        (_, Style::Text) if d == 1 && n > 0 => format!("{var}^{exp}"),
        (_, Style::Text) => format!("{var}^({exp})"),
    }
}

/// Join signed terms as `a + b - c` (text) or `a+b-c` (LaTeX).
fn join_terms(terms: &[(bool, String)], style: Style) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        let sep = match (i, neg, style) {
            (0, true, _) => "-",
            (0, false, _) => "",
            (_, true, Style::Text) => " - ",
            (_, false, Style::Text) => " + ",
            (_, true, Style::Latex) => "-",
            (_, false, Style::Latex) => "+",
        };
        out.push_str(sep);
        out.push_str(body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `c·var` as (negative, magnitude); a unit coefficient is dropped before a variable.
fn monomial(c: &BigRat, var: String, style: Style) -> (bool, String) {
    let mag = c.abs();
    let body = if var.is_empty() {
        frac(&mag, style)
    } else if mag.is_one() {
        var
    } else {
        format!("{}{var}", frac(&mag, style))
    };
    (c.is_negative(), body)
}

/// A Laurent polynomial in `s = y^{1/2}` written in `y`.
pub fn y_laurent(terms: &[(i64, BigRat)], style: Style) -> String {
    let parts: Vec<_> = terms
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| monomial(c, power("y", *e, 2, style), style))
        .collect();
    join_terms(&parts, style)
}

/// A coefficient of the body in `y`, or as a rational function of `s`.
fn coefficient(c: &RatFunc, style: Style) -> String {
    match c.laurent_terms() {
        Some(ts) => y_laurent(&ts, style),
        None => match style {
            Style::Text => format!("({c})"),
            Style::Latex => format!("\\left({c}\\right)"),
        },
    }
}

fn count_terms(c: &RatFunc) -> usize {
    c.laurent_terms().map_or(2, |t| t.len())
}

fn q_power(u_exp: u32, style: Style) -> String {
    power("q", u_exp as i64, 2, style)
}

/// `O(q^e)` for the first power of `q` past `u_order` (in `u = q^{1/2}`);
/// `half` allows half-integral `e`.
fn big_o(u_order: u32, half: bool, style: Style) -> String {
    let next = if half { u_order + 1 } else { u_order / 2 * 2 + 2 };
    format!("O({})", q_power(next, style))
}

fn big_o_for(body: &QSeries, style: Style) -> String {
    big_o(body.order(), body.terms().any(|(k, _)| k % 2 == 1), style)
}

pub fn prefactor_string(p: Prefactor, style: Style) -> String {
    let mut parts = Vec::new();
    let i = match style {
        Style::Text => "i",
        Style::Latex => "\\sqrt{-1}",
    };
    match p.i_pow() {
        0 => {}
        1 => parts.push(i.to_string()),
        2 => parts.push("(-1)".to_string()),
        _ => parts.push(format!("(-{i})")),
    }
    if p.q8_pow != 0 {
        parts.push(power("q", p.q8_pow, 8, style));
    }
    if p.s_pow != 0 {
        parts.push(power("y", p.s_pow, 2, style));
    }
    parts.join(match style {
        Style::Text => " ",
        Style::Latex => "",
    })
}

/// The q-expansion of a body, e.g. `2y^{-1}+20+2y+O(q)`.
pub fn series_line(body: &QSeries, style: Style) -> String {
    let mut out = String::new();
    for (k, c) in body.terms() {
        let coeff = coefficient(c, style);
        let q = q_power(k, style);
        let piece = if q.is_empty() {
            coeff
        } else if coeff == "1" {
            q
        } else if coeff == "-1" {
            format!("-{q}")
        } else if count_terms(c) > 1 {
            match style {
                Style::Text => format!("({coeff}){q}"),
                Style::Latex => format!("\\left({coeff}\\right){q}"),
            }
        } else {
            format!("{coeff}{q}")
        };
        if !out.is_empty() {
            if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(if style == Style::Text { " - " } else { "-" });
                out.push_str(rest);
                continue;
            }
            out.push_str(if style == Style::Text { " + " } else { "+" });
        }
        out.push_str(&piece);
    }
    if out.is_empty() {
        out.push('0');
    }
    let o = big_o_for(body, style);
    match style {
        Style::Text => format!("{out} + {o}"),
        Style::Latex if out == "0" => format!("0 + {o}"),
        Style::Latex => format!("{out}+{o}"),
    }
}

fn genus_symbol(spec: &CISpec, kind: GenusKind) -> String {
    match kind {
        GenusKind::Euler => format!("chi({spec})"),
        GenusKind::ChiY => format!("chi_y({spec})"),
        GenusKind::Elliptic => format!("chi({spec}; q, y)"),
        GenusKind::NsElliptic => format!("chi_NS({spec}; q, y)"),
    }
}

fn latex_spec(spec: &CISpec) -> String {
    let ds: Vec<String> = spec.degrees().iter().map(|d| d.to_string()).collect();
    format!("Y^{{{}}}_{{{}}}", spec.n(), ds.join(","))
}

/// Human-readable genus: one line for an empty body, otherwise a table by power of `q`.
pub fn genus_text(r: &GenusResult) -> String {
    let name = genus_symbol(&r.spec, r.kind);
    let pre = prefactor_string(r.body.prefactor(), Style::Text);
    let pre = if pre.is_empty() { String::new() } else { format!("{pre} * ") };
    let mut out = String::new();
    if r.body.is_zero() {
        out.push_str(&format!("{name} = {}\n", series_line(&r.body, Style::Text)));
    } else {
        let status = if r.certified { "certified" } else { "NOT certified" };
        out.push_str(&format!(
            "{name} = {pre}sum_k c_k q^k   (virtual genus, q-order {}, {status})\n",
            r.q_order
        ));
        for (k, c) in r.body.terms() {
            let q = match q_power(k, Style::Text) {
                s if s.is_empty() => "1".to_string(),
                s => s,
            };
            out.push_str(&format!("  {q:>8}: {}\n", coefficient(c, Style::Text)));
        }
        out.push_str(&format!("  {}\n", big_o_for(&r.body, Style::Text)));
    }
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

pub fn genus_latex(r: &GenusResult) -> String {
    let pre = prefactor_string(r.body.prefactor(), Style::Latex);
    let body = series_line(&r.body, Style::Latex);
    if pre.is_empty() {
        body
    } else {
        format!("{pre}\\left({body}\\right)")
    }
}

pub fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable value")
}

pub fn genus_json(r: &GenusResult) -> String {
    json(&GenusJson::from_result(r))
}

#[derive(Serialize)]
pub struct EulerJson<'a> {
    pub kind: &'static str,
    pub spec: &'a CISpec,
    pub value: String,
}

#[derive(Serialize)]
pub struct ChiYJson<'a> {
    pub kind: &'static str,
    pub spec: &'a CISpec,
    /// `[y_exp, "num/den"]`.
    pub coefficients: Vec<(i64, String)>,
}

/// χ_y as `[(y-exponent, coefficient)]`, from its form in `s`.
pub fn chi_y_terms(c: &RatFunc) -> Vec<(i64, BigRat)> {
    c.laurent_terms()
        .unwrap_or_default()
        .into_iter()
        .map(|(e, a)| (e / 2, a))
        .collect()
}

pub fn chi_y_text(spec: &CISpec, terms: &[(i64, BigRat)], style: Style) -> String {
    let parts: Vec<_> = terms
        .iter()
        .map(|(e, c)| monomial(c, power("y", *e, 1, style), style))
        .collect();
    let poly = join_terms(&parts, style);
    match style {
        Style::Text => format!("chi_y({spec}) = {poly}"),
        Style::Latex => poly,
    }
}

#[derive(Serialize)]
pub struct WittenJson<'a> {
    pub kind: &'static str,
    pub k: u8,
    pub spec: &'a CISpec,
    pub q_order: u32,
    pub u_order: u32,
    pub prefactor: [i64; 3],
    /// `[u_exp, "re", "im"]`.
    pub coefficients: Vec<(u32, String, String)>,
    pub tau: [f64; 2],
    pub value: [f64; 2],
}

pub fn witten_json<'a>(w: &WittenValue<BigRat>, spec: &'a CISpec, tau: [f64; 2]) -> WittenJson<'a> {
    WittenJson {
        kind: "witten",
        k: w.k,
        spec,
        q_order: w.q_order,
        u_order: 2 * w.q_order,
        prefactor: [w.prefactor.i_pow() as i64, w.prefactor.q8_pow, w.prefactor.s_pow],
        coefficients: w
            .body
            .iter()
            .map(|(j, re, im)| (*j, ratio_string(re), ratio_string(im)))
            .collect(),
        tau,
        value: [w.value.re, w.value.im],
    }
}

fn gaussian(re: &BigRat, im: &BigRat, style: Style) -> (bool, String) {
    let i = match style {
        Style::Text => "i",
        Style::Latex => "\\sqrt{-1}",
    };
    match (re.is_zero(), im.is_zero()) {
        (_, true) => monomial(re, String::new(), style),
        (true, false) => monomial(im, i.to_string(), style),
        (false, false) => {
            let (neg, imag) = monomial(im, i.to_string(), style);
            let sign = if neg { "-" } else { "+" };
            (false, format!("({}{sign}{imag})", frac(re, style)))
        }
    }
}

pub fn witten_text(w: &WittenValue<BigRat>, spec: &CISpec, tau: [f64; 2], style: Style) -> String {
    let mut parts = Vec::new();
    for (j, re, im) in &w.body {
        let (neg, c) = gaussian(re, im, style);
        let q = q_power(*j, style);
        let body = match (c.as_str(), q.is_empty()) {
            (_, true) => c,
            ("1", false) => q,
            _ => format!("{c}{q}"),
        };
        parts.push((neg, body));
    }
    let mut series = join_terms(&parts, style);
    let o = big_o(2 * w.q_order, w.body.iter().any(|(j, _, _)| j % 2 == 1), style);
    let pre = prefactor_string(w.prefactor, style);
    match style {
        Style::Text => {
            series = format!("{series} + {o}");
            let rhs = if pre.is_empty() { series } else { format!("{pre} * ({series})") };
            format!(
                "sigma_{}({spec}; q) = {rhs}\nvalue at tau = {}{:+}i: {} {:+}i",
                w.k, tau[0], tau[1], w.value.re, w.value.im
            )
        }
        Style::Latex => {
            series = format!("{series}+{o}");
            if pre.is_empty() {
                series
            } else {
                format!("{pre}\\left({series}\\right)")
            }
        }
    }
}

pub fn euler_latex(spec: &CISpec, value: &num_bigint::BigInt) -> String {
    format!("\\chi({}) = {value}", latex_spec(spec))
}

#[derive(Serialize)]
pub struct GenSeriesJson {
    pub kind: &'static str,
    pub degrees: Vec<u32>,
    pub t_order: u32,
    pub q_order: u32,
    /// `[t_exp, [[u_exp, [[s_exp, "num/den"], …]], …]]`; `t^{N-1}` holds the genus of `Y^N`.
    pub coefficients: Vec<(u32, Vec<(u32, LaurentJson)>)>,
}

pub fn genseries_json(degrees: &[u32], t_order: u32, q_order: u32, rows: &[(u32, QSeries)]) -> GenSeriesJson {
    GenSeriesJson {
        kind: "genseries",
        degrees: degrees.to_vec(),
        t_order,
        q_order,
        coefficients: rows
            .iter()
            .map(|(t, body)| {
                let cs = body
                    .terms()
                    .map(|(k, c)| (k, laurent_json(c).unwrap_or_default()))
                    .collect();
                (*t, cs)
            })
            .collect(),
    }
}
