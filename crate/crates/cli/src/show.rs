//! Plain-text rendering of scalars, subspaces and flags.

use padic_hodge::filtration::FilteredSpace;
use padic_hodge::linalg::{Matrix, Subspace};
use padic_hodge::padic::Padic;
use padic_hodge::rational::format_rational;
use padic_hodge::Rational;

pub fn scalar(x: &Padic) -> String {
    if x.is_exact_zero() {
        return "0".into();
    }
    if x.is_zero() {
        return format!("O(p^{})", x.precision());
    }
    match x.reconstruct() {
        Some(q) => format_rational(&q),
        None => {
            // leading p-adic digits of the unit part, least significant first
            let ds = x.unit_digits();
            let head: Vec<String> = ds.iter().take(8).map(u32::to_string).collect();
            let more = if ds.len() > 8 { " …" } else { "" };
            format!("p^{}·[{}{more}] + O(p^{})", x.valuation().unwrap(), head.join(" "), x.precision())
        }
    }
}

pub fn vector(v: &[Padic]) -> String {
    let xs: Vec<String> = v.iter().map(scalar).collect();
    format!("({})", xs.join(","))
}

pub fn subspace(s: &Subspace) -> String {
    let cols: Vec<String> = s.canonical_basis().columns().iter().map(|v| vector(v)).collect();
    format!("<{}>", cols.join(" "))
}

pub fn filtration(f: &FilteredSpace) -> Vec<String> {
    f.steps().iter().map(|(j, s)| format!("  F^{} = {}  (dim {})", format_rational(j), subspace(s), s.dim())).collect()
}

pub fn matrix(m: &Matrix) -> Vec<String> {
    (0..m.rows()).map(|i| format!("  [{}]", m.row(i).iter().map(scalar).collect::<Vec<_>>().join(", "))).collect()
}

pub fn matrix_inline(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows()).map(|i| format!("[{}]", m.row(i).iter().map(scalar).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", rows.join(","))
}

pub fn rationals(qs: &[Rational]) -> String {
    qs.iter().map(format_rational).collect::<Vec<_>>().join(",")
}
