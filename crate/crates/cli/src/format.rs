//! Fixed, locale-independent number formatting for CSV output.

use erkn::DriftRecord64;

pub const CSV_HEADER: &str = "t,H,I,dH,dI";
pub const SUMMARY_HEADER: &str = "method,omega,h,max_dH,max_dI,window_ratio_H,window_ratio_I";

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// exponent notation outside `1e-4 ≤ |x| < 1e17`.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (16 - exp) as usize)).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// The trajectory CSV: header plus one `t,H,I,dH,dI` row per record, `\n` terminated.
pub fn render_csv(records: &[DriftRecord64]) -> String {
    let mut out = String::with_capacity(96 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let row = [r.t, r.h_total, r.i_osc, r.dh, r.di].map(fmt_g17).join(",");
        out.push_str(&row);
        out.push('\n');
    }
    out
}
