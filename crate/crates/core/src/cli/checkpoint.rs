//! Text checkpoints.
//!
//! ```text
//! CAPWAVE1 N=<int> L=<%.17g> t=<%.17g> sigma=<%.17g> gravity=<0|1>
//! g_0 v_0
//! ...
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};
use crate::state::SurfaceState;

const MAGIC: &str = "CAPWAVE1";

/// C's `%.17g`: shortest of fixed or exponent notation at 17 significant
/// digits, trailing zeros removed.
pub fn fmt_g17(x: f64) -> String {
    const PRECISION: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..PRECISION).contains(&exp) {
        let fixed = format!("{:.*}", (PRECISION - 1 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub state: SurfaceState,
    pub sigma: f64,
    pub gravity: bool,
}

pub fn render(state: &SurfaceState, sigma: f64, gravity: bool) -> String {
    let grid = state.grid();
    let mut out = String::with_capacity(grid.len() * 48);
    let _ = writeln!(
        out,
        "{MAGIC} N={} L={} t={} sigma={} gravity={}",
        grid.len(),
        fmt_g17(grid.length()),
        fmt_g17(state.t),
        fmt_g17(sigma),
        u8::from(gravity)
    );
    for (g, v) in state.g.values().iter().zip(state.v.values()) {
        let _ = writeln!(out, "{} {}", fmt_g17(g.re), fmt_g17(v.re));
    }
    out
}

pub fn write(path: &Path, state: &SurfaceState, sigma: f64, gravity: bool) -> Result<()> {
    std::fs::write(path, render(state, sigma, gravity))?;
    Ok(())
}

fn header_value<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    let token = token.ok_or_else(|| Error::Format(format!("header is missing `{key}=`")))?;
    token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::Format(format!("expected `{key}=...`, found `{token}`")))
}

fn number(s: &str, what: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Format(format!("cannot parse {what} from `{s}`")))
}

/// Parses a checkpoint, building a grid with the given dealias fraction.
pub fn parse(text: &str, dealias: f64) -> Result<Checkpoint> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty checkpoint".into()))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some(MAGIC) {
        return Err(Error::Format(format!("first token must be {MAGIC}")));
    }
    let n: usize = header_value(tokens.next(), "N")?
        .parse()
        .map_err(|_| Error::Format("N must be an integer".into()))?;
    let length = number(header_value(tokens.next(), "L")?, "L")?;
    let t = number(header_value(tokens.next(), "t")?, "t")?;
    let sigma = number(header_value(tokens.next(), "sigma")?, "sigma")?;
    let gravity = match header_value(tokens.next(), "gravity")? {
        "0" => false,
        "1" => true,
        other => return Err(Error::Format(format!("gravity must be 0 or 1, got {other}"))),
    };
    if let Some(extra) = tokens.next() {
        return Err(Error::Format(format!("unexpected header token `{extra}`")));
    }
    let grid: Arc<Grid> = Grid::with_dealias(n, length, dealias)?;
    let mut g = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for (i, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
        let mut parts = line.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Format(format!("line {} must hold `g v`", i + 2)));
        };
        g.push(number(a, "g")?);
        v.push(number(b, "v")?);
    }
    if g.len() != n {
        return Err(Error::Format(format!("expected {n} data lines, found {}", g.len())));
    }
    let state = SurfaceState::new(
        t,
        Field::from_real(grid.clone(), g),
        Field::from_real(grid, v),
    )?;
    Ok(Checkpoint {
        state,
        sigma,
        gravity,
    })
}

pub fn read(path: &Path, dealias: f64) -> Result<Checkpoint> {
    let text = std::fs::read_to_string(path)?;
    parse(&text, dealias)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::DEFAULT_DEALIAS;
    use proptest::prelude::*;

    #[test]
    fn g17_matches_c() {
        let cases = [
            (0.1, "0.10000000000000001"),
            (1e-5, "1.0000000000000001e-05"),
            (0.0, "0"),
            (100.0, "100"),
            (1e20, "1e+20"),
            (-2.5, "-2.5"),
            (1e16, "10000000000000000"),
            (1e17, "1e+17"),
            (0.0001, "0.0001"),
            (std::f64::consts::PI, "3.1415926535897931"),
            (std::f64::consts::TAU, "6.2831853071795862"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g17(x), want, "{x}");
        }
    }

    proptest! {
        #[test]
        fn g17_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            prop_assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn checkpoint_round_trip() {
        let grid = Grid::periodic(16).unwrap();
        let s = SurfaceState::new(
            0.3,
            Field::from_fn_real(&grid, |x| 0.1 * x.sin()),
            Field::from_fn_real(&grid, |x| 1e-7 * x.cos()),
        )
        .unwrap();
        let text = render(&s, 0.5, true);
        assert!(text.starts_with("CAPWAVE1 N=16 L=6.2831853071795862 t=0.29999999999999999 sigma=0.5 gravity=1\n"));
        let back = parse(&text, DEFAULT_DEALIAS).unwrap();
        assert_eq!(back.state.g.real_values(), s.g.real_values());
        assert_eq!(back.state.v.real_values(), s.v.real_values());
        assert_eq!(back.state.t, 0.3);
        assert!(back.gravity);
        assert_eq!(render(&back.state, back.sigma, back.gravity), text);
    }

    #[test]
    fn malformed_checkpoints() {
        assert!(parse("", DEFAULT_DEALIAS).is_err());
        assert!(parse("CAPWAVE2 N=16 L=1 t=0 sigma=0 gravity=1", DEFAULT_DEALIAS).is_err());
        assert!(parse("CAPWAVE1 N=16 L=1 t=0 sigma=0 gravity=1\n0 0\n", DEFAULT_DEALIAS).is_err());
        assert!(parse("CAPWAVE1 N=16 L=1 t=0 sigma=0 gravity=2\n", DEFAULT_DEALIAS).is_err());
    }
}
