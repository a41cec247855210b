//! Text formats for diagrams, landscapes, transport plans and plot data.
//!
//! Diagram files hold one atom per line, `birth death [weight]`, weight 1 by
//! default. Landscape files are
//!
//! ```text
//! bands N
//! band a_lo a_hi M
//! t h        (M lines)
//! ```
//!
//! Every number is a decimal or `p/q` literal and is read exactly. Blank
//! lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::inversion::nu0_quadrant;
use crate::landscape::{Band, Landscape};
use crate::measure::{PersistenceMeasure, Point};
use crate::profile::Profile;
use crate::rational::Rational;
use crate::transport::{Site, TransportPlan};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            None
        } else {
            Some((i + 1, l.split_whitespace().collect()))
        }
    })
}

fn number(line: usize, tok: &str) -> Result<Rational> {
    tok.parse::<Rational>()
        .map_err(|e| parse_err(line, e.to_string()))
}

pub fn parse_diagram(text: &str) -> Result<PersistenceMeasure> {
    let mut atoms = Vec::new();
    for (line, toks) in content_lines(text) {
        if !(2..=3).contains(&toks.len()) {
            return Err(parse_err(
                line,
                format!("expected `birth death [weight]`, found {} fields", toks.len()),
            ));
        }
        let birth = number(line, toks[0])?;
        let death = number(line, toks[1])?;
        let weight = match toks.get(2) {
            Some(tok) => number(line, tok)?,
            None => Rational::one(),
        };
        let point = Point::new(birth, death).map_err(|e| parse_err(line, e.to_string()))?;
        if !weight.is_positive() {
            return Err(parse_err(line, Error::NonPositiveWeight(weight).to_string()));
        }
        atoms.push((point, weight));
    }
    PersistenceMeasure::from_atoms(atoms)
}

pub fn write_diagram(m: &PersistenceMeasure) -> String {
    let mut out = String::new();
    for (p, w) in m.atoms() {
        writeln!(out, "{} {} {}", p.birth(), p.death(), w).unwrap();
    }
    out
}

/// Structural checks applied when reading a landscape file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LandscapeSyntax {
    /// Unit slopes and contiguous bands from 0, as produced by landscapes
    /// of measures.
    Strict,
    /// Contiguous bands, any slopes (average landscapes).
    AnySlopes,
    /// Sorted, non-overlapping bands with any slopes, kept as written so
    /// that validation can inspect them.
    Raw,
}

pub fn parse_landscape(text: &str) -> Result<Landscape> {
    parse_landscape_with(text, LandscapeSyntax::Strict)
}

pub fn parse_landscape_with(text: &str, syntax: LandscapeSyntax) -> Result<Landscape> {
    let mut lines = content_lines(text);
    let count = |line: usize, tok: &str| -> Result<usize> {
        tok.parse::<usize>()
            .map_err(|_| parse_err(line, format!("expected a count, found `{tok}`")))
    };
    let (line, toks) = lines.next().ok_or_else(|| parse_err(1, "missing `bands N` header"))?;
    if toks.len() != 2 || toks[0] != "bands" {
        return Err(parse_err(line, "expected `bands N`"));
    }
    let n = count(line, toks[1])?;
    let mut bands = Vec::with_capacity(n);
    let mut last_line = line;
    for _ in 0..n {
        let (line, toks) = lines
            .next()
            .ok_or_else(|| parse_err(last_line + 1, "missing `band a_lo a_hi M` line"))?;
        if toks.len() != 4 || toks[0] != "band" {
            return Err(parse_err(line, "expected `band a_lo a_hi M`"));
        }
        let lo = number(line, toks[1])?;
        let hi = number(line, toks[2])?;
        let m = count(line, toks[3])?;
        let band_line = line;
        last_line = line;
        let mut points = Vec::with_capacity(m);
        for _ in 0..m {
            let (line, toks) = lines
                .next()
                .ok_or_else(|| parse_err(last_line + 1, "missing `t h` breakpoint"))?;
            if toks.len() != 2 {
                return Err(parse_err(line, "expected `t h`"));
            }
            points.push((number(line, toks[0])?, number(line, toks[1])?));
            last_line = line;
        }
        let profile = match syntax {
            LandscapeSyntax::Strict => Profile::new(points),
            _ => Profile::from_breakpoints(points),
        }
        .map_err(|e| parse_err(band_line, e.to_string()))?;
        bands.push(Band::new(lo, hi, profile).map_err(|e| parse_err(band_line, e.to_string()))?);
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "unexpected content after the last band"));
    }
    match syntax {
        LandscapeSyntax::Raw => Landscape::from_raw_bands(bands),
        _ => Landscape::new(bands),
    }
}

pub fn write_landscape(l: &Landscape) -> String {
    let mut out = String::new();
    writeln!(out, "bands {}", l.bands().len()).unwrap();
    for b in l.bands() {
        let pts = b.profile().breakpoints();
        writeln!(out, "band {} {} {}", b.lo(), b.hi(), pts.len()).unwrap();
        for (t, h) in pts {
            writeln!(out, "{t} {h}").unwrap();
        }
    }
    out
}

/// `steps + 1` equally spaced values from `lo` to `hi`.
pub fn linspace(lo: &Rational, hi: &Rational, steps: u32) -> Vec<Rational> {
    if steps == 0 {
        return vec![lo.clone()];
    }
    let step = (hi - lo) / Rational::from_integer(steps as i64);
    (0..=steps)
        .map(|i| lo + &(&step * &Rational::from_integer(i as i64)))
        .collect()
}

fn decimal(r: &Rational, precision: usize) -> String {
    format!("{:.*}", precision, r.to_f64())
}

/// Tab-separated `a t lambda(a, t)` rows over the product grid.
pub fn export_plot(l: &Landscape, a_values: &[Rational], t_values: &[Rational], precision: usize) -> Result<String> {
    if a_values.is_empty() || t_values.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut out = String::from("a\tt\tlambda\n");
    for a in a_values {
        for t in t_values {
            let v = l.evaluate(a, t)?;
            writeln!(
                out,
                "{}\t{}\t{}",
                decimal(a, precision),
                decimal(t, precision),
                decimal(&v, precision)
            )
            .unwrap();
        }
    }
    Ok(out)
}

/// Tab-separated `h nu0(Q_{t,h})` rows at a fixed `t`.
pub fn export_nu0(l: &Landscape, t: &Rational, h_values: &[Rational], precision: usize) -> Result<String> {
    if h_values.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut out = String::from("h\tnu0\n");
    for h in h_values {
        let v = nu0_quadrant(l, t, h)?;
        writeln!(out, "{}\t{}", decimal(h, precision), decimal(&v, precision)).unwrap();
    }
    Ok(out)
}

/// Flows as `src_birth src_death dst_birth dst_death mass`, `Δ` marking
/// the diagonal.
pub fn write_plan(plan: &TransportPlan) -> String {
    let site = |s: &Site| match s {
        Site::Point(p) => format!("{}\t{}", p.birth(), p.death()),
        Site::Diagonal => "Δ\tΔ".to_string(),
    };
    let mut out = String::from("src_birth\tsrc_death\tdst_birth\tdst_death\tmass\n");
    for f in plan.flows() {
        writeln!(out, "{}\t{}\t{}", site(&f.source), site(&f.target), f.mass).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::compute_landscape;
    use crate::rational::q;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn diagram_examples() {
        let m = parse_diagram("0 2 1").unwrap();
        assert_eq!(m, PersistenceMeasure::from_triples([(int(0), int(2), int(1))]).unwrap());
        let m = parse_diagram("# comment\n\n0.25 1/2 3/4\n").unwrap();
        assert_eq!(m, PersistenceMeasure::from_triples([(q(1, 4), q(1, 2), q(3, 4))]).unwrap());
        assert_eq!(parse_diagram(&write_diagram(&m)).unwrap(), m);
        match parse_diagram("0 1\n2 1 1") {
            Err(Error::Parse { line: 2, message }) => assert!(message.contains("birth must be < death")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_diagram("0 1 0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_diagram("0 1 x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_diagram("0"), Err(Error::Parse { line: 1, .. })));
        assert_eq!(parse_diagram("0 2\n0 2 2").unwrap().weight(&Point::new(int(0), int(2)).unwrap()), Some(&int(3)));
    }

    #[test]
    fn landscape_examples() {
        let m = PersistenceMeasure::from_triples([(int(0), int(2), int(1))]).unwrap();
        let l = compute_landscape(&m).unwrap();
        assert_eq!(write_landscape(&l), "bands 1\nband 0 1 3\n0 0\n1 1\n2 0\n");
        assert_eq!(parse_landscape(&write_landscape(&l)).unwrap(), l);
        let steep = "bands 1\nband 0 1 3\n0 0\n1 2\n2 0\n";
        assert!(matches!(parse_landscape(steep), Err(Error::Parse { line: 2, .. })));
        assert!(parse_landscape_with(steep, LandscapeSyntax::AnySlopes).is_ok());
        let gap = "bands 2\nband 0 1 3\n0 0\n1 1\n2 0\nband 2 3 3\n0 0\n1 1\n2 0\n";
        assert!(parse_landscape(gap).is_err());
        assert_eq!(parse_landscape_with(gap, LandscapeSyntax::Raw).unwrap().bands().len(), 2);
        // redundant breakpoints and equal neighbours are canonicalized
        let loose = "bands 2\nband 0 1/2 4\n0 0\n1/2 1/2\n1 1\n2 0\nband 0.5 1 3\n0 0\n1 1\n2 0\n";
        assert_eq!(parse_landscape(loose).unwrap(), l);
    }

    #[test]
    fn plot_examples() {
        let m = PersistenceMeasure::from_triples([(int(0), int(2), int(1))]).unwrap();
        let l = compute_landscape(&m).unwrap();
        let rows = export_plot(&l, &[int(1)], &linspace(&int(0), &int(2), 2), 3).unwrap();
        assert_eq!(rows, "a\tt\tlambda\n1.000\t0.000\t0.000\n1.000\t1.000\t1.000\n1.000\t2.000\t0.000\n");
        let rows = export_nu0(&l, &int(1), &[int(0), q(1, 2), int(1)], 1).unwrap();
        assert_eq!(rows, "h\tnu0\n0.0\t1.0\n0.5\t1.0\n1.0\t0.0\n");
        let rows = export_plot(&Landscape::empty(), &[int(1), int(2)], &[int(0)], 0).unwrap();
        assert_eq!(rows, "a\tt\tlambda\n1\t0\t0\n2\t0\t0\n");
        assert_eq!(export_plot(&l, &[], &[int(0)], 3), Err(Error::EmptyGrid));
    }
}
