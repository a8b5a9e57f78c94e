//! Reference formulas for the generic Walker metric `dt dy + dx² + f dy²`,
//! written with subscript shorthand (`f_ttx` is `∂t∂t∂x f`).

use crate::symexpr::Expr;
use crate::tensor::{build_metric, Chart, MetricChart, Signature};

pub fn walker_chart() -> Chart {
    Chart::txy().with_func("f", &["t", "x", "y"]).expect("valid declaration")
}

pub fn walker_metric() -> MetricChart {
    let c = walker_chart();
    let f = c.func("f").expect("declared");
    build_metric(
        &c,
        &[(0, 2, Expr::one()), (1, 1, Expr::one()), (2, 2, f)],
        Signature::LORENTZIAN,
    )
    .expect("walker metric is nonsingular")
}

/// Rewrites `f_txx` into nested `diff` calls.
pub fn expand_subscripts(src: &str) -> String {
    let chars: Vec<char> = src.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let boundary = i == 0 || !(chars[i - 1].is_alphanumeric() || chars[i - 1] == '_');
        if boundary && chars[i] == 'f' {
            let mut j = i + 1;
            let mut subs = String::new();
            if j < chars.len() && chars[j] == '_' {
                j += 1;
                while j < chars.len() && matches!(chars[j], 't' | 'x' | 'y') {
                    subs.push(chars[j]);
                    j += 1;
                }
            }
            let ends = j >= chars.len() || !(chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '(');
            if ends && (!subs.is_empty() || j == i + 1) {
                let mut e = "f(t,x,y)".to_string();
                for c in ['t', 'x', 'y'] {
                    let n = subs.chars().filter(|s| *s == c).count();
                    if n > 0 {
                        e = format!("diff({e},{c},{n})");
                    }
                }
                out.push_str(&e);
                i = j;
                continue;
            }
        }
        out.push(chars[i]);
        i += 1;
    }
    out
}

/// Parses shorthand over the generic Walker chart.
pub fn walker_expr(src: &str) -> Expr {
    walker_chart()
        .parse(&expand_subscripts(src))
        .unwrap_or_else(|e| panic!("bad reference formula `{src}`: {e}"))
}

fn table(rows: &[(&[usize], &str)]) -> Vec<(Vec<usize>, Expr)> {
    rows.iter().map(|(i, s)| (i.to_vec(), walker_expr(s))).collect()
}

/// Nonzero `Γ^k_ij` with `i ≤ j`, as `([k, i, j], value)`.
pub fn christoffel() -> Vec<(Vec<usize>, Expr)> {
    table(&[
        (&[0, 0, 2], "f_t/2"),
        (&[0, 1, 2], "f_x/2"),
        (&[0, 2, 2], "(f_y + f*f_t)/2"),
        (&[1, 2, 2], "-f_x/2"),
        (&[2, 2, 2], "-f_t/2"),
    ])
}

/// Nonzero `ρ_ij` with `i ≤ j`.
pub fn ricci() -> Vec<(Vec<usize>, Expr)> {
    table(&[
        (&[0, 2], "f_tt/2"),
        (&[1, 2], "f_tx/2"),
        (&[2, 2], "(f*f_tt - f_xx)/2"),
    ])
}

/// Nonzero `C̃_ij` with `i ≤ j`.
pub fn cotton2() -> Vec<(Vec<usize>, Expr)> {
    table(&[
        (&[0, 1], "-f_ttt/4"),
        (&[0, 2], "f_ttx/4"),
        (&[1, 1], "-f_ttx/2"),
        (&[1, 2], "(2*f_txx + f_tty - f*f_ttt)/4"),
        (&[2, 2], "(f_x*f_tt - 2*f_xxx - f_t*f_tx - 2*f_txy + 2*f*f_ttx)/4"),
    ])
}

/// The parallel-Cotton conditions: four derivative conditions followed by
/// the five remaining equations, in display order.
pub const PARALLEL_COTTON_LINES: [&str; 9] = [
    "f_tttt",
    "f_tttx",
    "f_ttxx",
    "f_txxx",
    "f_t*f_ttt - 2*f_ttty",
    "2*f_ttxy - f_x*f_ttt",
    "4*f_txxy + (2*f_txx + f_tty)*f_t + 2*f_ttyy - 3*f_x*f_ttx - f_y*f_ttt - 2*f*f_ttty",
    "f_tx^2 + 2*f_xxxx + f_t*f_txx + 2*f_txxy - f_xx*f_tt - 2*f_x*f_ttx",
    "f_tx*f_t^2 + (2*f_xxx + 3*f_txy)*f_t + 2*f_xxxy + f_ty*f_tx + 2*f_txyy - f_xy*f_tt \
     - (2*f_txx + f_t*f_tt + 2*f_tty)*f_x - (f_y + f*f_t)*f_ttx",
];

pub fn parallel_cotton() -> Vec<Expr> {
    PARALLEL_COTTON_LINES.iter().map(|s| walker_expr(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand() {
        assert_eq!(expand_subscripts("f_ttx"), "diff(diff(f(t,x,y),t,2),x,1)");
        assert_eq!(expand_subscripts("f*f_t"), "f(t,x,y)*diff(f(t,x,y),t,1)");
        assert_eq!(expand_subscripts("sin(f)"), "sin(f(t,x,y))");
    }
}
