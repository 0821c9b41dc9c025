//! Loader for line-oriented lattice definition files.
//!
//! ```text
//! lattice three
//! members: low, mid, high
//! bot: low
//! top: high
//! leq: low < mid < high
//! and godel(x, y): min(x, y)
//! or table/2: table
//!   low, low = low
//!   ...
//! end
//! ```

use std::sync::Arc;

use super::expr::{parse_comparison, parse_expr};
use super::{Carrier, Connective, ConnectiveKind, FiniteCarrier, Lattice, LatticeError, TruthFn};

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn syntax(line: usize, message: impl Into<String>) -> LatticeError {
    LatticeError::Syntax {
        line,
        message: message.into(),
    }
}

/// A connective header: kind, label, parameter names, body text.
struct ConnDecl<'a> {
    line: usize,
    kind: ConnectiveKind,
    label: String,
    params: Vec<String>,
    body: &'a str,
    table: Vec<Line<'a>>,
}

fn split_header(line: &Line<'_>) -> Result<(String, Vec<String>), LatticeError> {
    // `label(x, y)` or `label/2`
    let head = line.text;
    if let Some(open) = head.find('(') {
        let close = head
            .rfind(')')
            .ok_or_else(|| syntax(line.no, "missing ')' in connective header"))?;
        let label = head[..open].trim().to_string();
        let params: Vec<String> = head[open + 1..close]
            .split(',')
            .map(|p| p.trim().to_string())
            .filter(|p| !p.is_empty())
            .collect();
        Ok((label, params))
    } else if let Some((label, n)) = head.split_once('/') {
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| syntax(line.no, format!("bad arity '{}'", n.trim())))?;
        let params = (1..=n).map(|i| format!("x{i}")).collect();
        Ok((label.trim().to_string(), params))
    } else {
        Err(syntax(
            line.no,
            "connective header needs '(params)' or '/arity'",
        ))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a lattice definition.
pub fn parse_lattice(text: &str) -> Result<Lattice, LatticeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line {
            no: i + 1,
            text: l.split('#').next().unwrap_or("").trim(),
        })
        .filter(|l| !l.text.is_empty())
        .peekable();

    let mut name = String::from("custom");
    let mut members: Option<(usize, &str)> = None;
    let mut bot: Option<(usize, &str)> = None;
    let mut top: Option<(usize, &str)> = None;
    let mut leq_lines: Vec<(usize, Option<Vec<String>>, &str)> = Vec::new();
    let mut decls: Vec<ConnDecl<'_>> = Vec::new();

    while let Some(line) = lines.next() {
        if let Some(rest) = line.text.strip_prefix("lattice ") {
            name = rest.trim().to_string();
            continue;
        }
        let (key, value) = line
            .text
            .split_once(':')
            .ok_or_else(|| syntax(line.no, format!("expected ':' in '{}'", line.text)))?;
        let key = key.trim();
        let value = value.trim();
        let word = key.split_whitespace().next().unwrap_or("");
        match word {
            "members" => members = Some((line.no, value)),
            "bot" => bot = Some((line.no, value)),
            "top" => top = Some((line.no, value)),
            _ if key == "leq" => leq_lines.push((line.no, None, value)),
            _ if key.starts_with("leq") => {
                let (_, params) = split_header(&Line {
                    no: line.no,
                    text: key,
                })?;
                leq_lines.push((line.no, Some(params), value));
            }
            _ => {
                let kind = ConnectiveKind::from_keyword(word)
                    .ok_or_else(|| syntax(line.no, format!("unknown declaration '{word}'")))?;
                let header = Line {
                    no: line.no,
                    text: key[word.len()..].trim(),
                };
                let (label, params) = split_header(&header)?;
                if !is_identifier(&label) {
                    return Err(syntax(line.no, format!("bad connective label '{label}'")));
                }
                if params.is_empty() {
                    return Err(syntax(line.no, "connectives need at least one argument"));
                }
                let mut table = Vec::new();
                if value == "table" {
                    loop {
                        match lines.next() {
                            Some(l) if l.text == "end" => break,
                            Some(l) => table.push(l),
                            None => return Err(syntax(line.no, "table without 'end'")),
                        }
                    }
                }
                decls.push(ConnDecl {
                    line: line.no,
                    kind,
                    label,
                    params,
                    body: value,
                    table,
                });
            }
        }
    }

    let (members_line, members) = members.ok_or(LatticeError::MissingSection("members"))?;
    let (bot_line, bot) = bot.ok_or(LatticeError::MissingSection("bot"))?;
    let (top_line, top) = top.ok_or(LatticeError::MissingSection("top"))?;
    if leq_lines.is_empty() {
        return Err(LatticeError::MissingSection("leq"));
    }

    let unit = members.replace(' ', "") == "realin[0,1]";
    let mut lat = if unit {
        let mut lat = Lattice::unit_interval(name);
        let parse_bound = |line: usize, s: &str| {
            lat.parse_literal(s)
                .ok_or_else(|| syntax(line, format!("'{s}' is not a member")))
        };
        let b = parse_bound(bot_line, bot)?;
        let t = parse_bound(top_line, top)?;
        for (line, params, body) in &leq_lines {
            let params = params
                .clone()
                .ok_or_else(|| syntax(*line, "real carriers need 'leq(x, y): <comparison>'"))?;
            if params.len() != 2 {
                return Err(syntax(*line, "leq takes two parameters"));
            }
            let cmp = parse_comparison(body, &params).map_err(|m| syntax(*line, m))?;
            lat.set_unit_order(cmp);
        }
        lat.set_bounds(b, t);
        lat
    } else {
        let elements: Vec<Arc<str>> = members.split(',').map(|s| Arc::from(s.trim())).collect();
        for e in &elements {
            if !is_identifier(e) {
                return Err(syntax(members_line, format!("bad element name '{e}'")));
            }
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(syntax(members_line, format!("duplicate element '{e}'")));
            }
        }
        let index = |line: usize, s: &str| {
            elements
                .iter()
                .position(|e| &**e == s)
                .ok_or_else(|| syntax(line, format!("'{s}' is not a member")))
        };
        let mut pairs = Vec::new();
        for (line, params, body) in &leq_lines {
            if params.is_some() {
                return Err(syntax(*line, "finite carriers declare leq as 'leq: a < b'"));
            }
            if body.trim() == "none" {
                continue;
            }
            let chain: Vec<&str> = body.split('<').map(str::trim).collect();
            if chain.len() < 2 {
                return Err(syntax(*line, "expected 'a < b'"));
            }
            for w in chain.windows(2) {
                pairs.push((index(*line, w[0])?, index(*line, w[1])?));
            }
        }
        let b = index(bot_line, bot)?;
        let t = index(top_line, top)?;
        let fc = FiniteCarrier::new(elements, &pairs);
        validate_finite(&fc, b, t)?;
        Lattice::finite(name, fc, b, t)
    };

    for decl in decls {
        let func = build_fn(&lat, &decl)?;
        lat.register(Connective {
            kind: decl.kind,
            label: decl.label.as_str().into(),
            arity: decl.params.len(),
            func,
        });
    }
    Ok(lat)
}

fn validate_finite(fc: &FiniteCarrier, bot: usize, top: usize) -> Result<(), LatticeError> {
    let n = fc.elements().len();
    let name = |i: usize| fc.elements()[i].to_string();
    for a in 0..n {
        for b in 0..n {
            if a != b && fc.leq(a, b) && fc.leq(b, a) {
                return Err(LatticeError::NotALattice(format!(
                    "order cycle between '{}' and '{}'",
                    name(a),
                    name(b)
                )));
            }
            if fc.meet(a, b).is_none() || fc.join(a, b).is_none() {
                return Err(LatticeError::NotALattice(format!(
                    "'{}' and '{}' lack a meet or join",
                    name(a),
                    name(b)
                )));
            }
        }
        if !fc.leq(bot, a) || !fc.leq(a, top) {
            return Err(LatticeError::NotALattice(format!(
                "'{}' is not between bot and top",
                name(a)
            )));
        }
    }
    Ok(())
}

fn build_fn(lat: &Lattice, decl: &ConnDecl<'_>) -> Result<TruthFn, LatticeError> {
    let finite = match lat.carrier() {
        Carrier::Finite(fc) => Some(fc),
        Carrier::UnitInterval => None,
    };
    if decl.body != "table" {
        let e = parse_expr(decl.body, &decl.params, finite).map_err(|m| syntax(decl.line, m))?;
        return Ok(TruthFn::Expr(e));
    }
    let fc = finite.ok_or_else(|| syntax(decl.line, "truth tables need a finite carrier"))?;
    let n = fc.elements().len();
    let arity = decl.params.len();
    let size = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
    let mut table: Vec<Option<usize>> = vec![None; size];
    for row in &decl.table {
        let (args, result) = row
            .text
            .split_once('=')
            .ok_or_else(|| syntax(row.no, "table rows look like 'a, b = c'"))?;
        let lookup = |s: &str| {
            fc.index_of(s.trim())
                .ok_or_else(|| syntax(row.no, format!("'{}' is not a member", s.trim())))
        };
        let args: Vec<usize> = args.split(',').map(lookup).collect::<Result<_, _>>()?;
        if args.len() != arity {
            return Err(syntax(row.no, format!("expected {arity} argument(s)")));
        }
        let pos = args.iter().fold(0, |acc, &i| acc * n + i);
        table[pos] = Some(lookup(result)?);
    }
    let mut full = Vec::with_capacity(size);
    for (pos, entry) in table.iter().enumerate() {
        match entry {
            Some(v) => full.push(*v),
            None => {
                let mut digits = vec![0; arity];
                let mut p = pos;
                for d in digits.iter_mut().rev() {
                    *d = p % n;
                    p /= n;
                }
                let missing = digits
                    .iter()
                    .map(|&i| fc.elements()[i].to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(LatticeError::IncompleteTable {
                    label: decl.label.clone(),
                    missing,
                });
            }
        }
    }
    Ok(TruthFn::Table(full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{builtin_unit_interval, ConnectiveRef, TruthValue};

    const UNIT: &str = "\
lattice unit
members: real in [0,1]
bot: 0
top: 1
leq(x, y): x <= y
and prod(x, y): x * y
and godel(x, y): min(x, y)
and luka(x, y): max(x + y - 1, 0)
or prod(x, y): x + y - x * y
or godel(x, y): max(x, y)
or luka(x, y): min(x + y, 1)
agr aver(x, y): (x + y) / 2
agr very/1: x1 ^ 2
";

    fn el(s: &str) -> TruthValue {
        TruthValue::Elem(Arc::from(s))
    }

    #[test]
    fn unit_file_matches_builtin() {
        let file = parse_lattice(UNIT).unwrap();
        let builtin = builtin_unit_interval();
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        for conn in builtin.connectives() {
            let cref = ConnectiveRef::new(conn.kind, conn.label.clone());
            for &x in &grid {
                for &y in &grid {
                    let args: Vec<TruthValue> = [x, y][..conn.arity]
                        .iter()
                        .map(|&v| TruthValue::Real(v))
                        .collect();
                    let a = file.eval(&cref, &args).unwrap().as_real().unwrap();
                    let b = builtin.eval(&cref, &args).unwrap().as_real().unwrap();
                    assert!((a - b).abs() < 1e-12, "{cref} {x} {y}");
                }
            }
        }
        assert!(file
            .leq(&TruthValue::Real(0.2), &TruthValue::Real(0.3))
            .unwrap());
    }

    #[test]
    fn boolean_table() {
        let lat = parse_lattice(
            "members: false, true\nbot: false\ntop: true\nleq: false < true\n\
             and godel/2: table\n false, false = false\n false, true = false\n true, false = false\n true, true = true\nend\n",
        )
        .unwrap();
        let v = lat
            .eval(
                &ConnectiveRef::conjunction("godel"),
                &[el("true"), el("false")],
            )
            .unwrap();
        assert_eq!(v, el("false"));
    }

    #[test]
    fn three_chain_min() {
        let lat = parse_lattice(
            "lattice three\nmembers: low, mid, high\nbot: low\ntop: high\nleq: low < mid < high\nand godel(x,y): min(x,y)\n",
        )
        .unwrap();
        let v = lat
            .eval(
                &ConnectiveRef::conjunction("godel"),
                &[el("mid"), el("high")],
            )
            .unwrap();
        assert_eq!(v, el("mid"));
        // transitive closure of the declared pairs
        assert!(lat.leq(&el("low"), &el("high")).unwrap());
    }

    #[test]
    fn mandatory_sections() {
        let err = parse_lattice("members: a, b\nbot: a\nleq: a < b\n").unwrap_err();
        assert_eq!(err, LatticeError::MissingSection("top"));
        let err = parse_lattice("members: real in [0,1]\nbot: 0\ntop: 1\n").unwrap_err();
        assert_eq!(err, LatticeError::MissingSection("leq"));
    }

    #[test]
    fn bounds_must_be_members() {
        let err = parse_lattice("members: a, b\nbot: c\ntop: b\nleq: a < b\n").unwrap_err();
        assert!(matches!(err, LatticeError::Syntax { line: 2, .. }));
        let err = parse_lattice("members: real in [0,1]\nbot: 0\ntop: 2\nleq(x,y): x <= y\n")
            .unwrap_err();
        assert!(matches!(err, LatticeError::Syntax { line: 3, .. }));
    }

    #[test]
    fn unknown_operator() {
        let err = parse_lattice(
            "members: real in [0,1]\nbot: 0\ntop: 1\nleq(x,y): x <= y\nand f(x,y): sqrt(x)\n",
        )
        .unwrap_err();
        assert!(matches!(err, LatticeError::Syntax { line: 5, .. }));
    }

    #[test]
    fn incomplete_table() {
        let err = parse_lattice(
            "members: f, t\nbot: f\ntop: t\nleq: f < t\nand g/2: table\n f, f = f\n t, t = t\nend\n",
        )
        .unwrap_err();
        assert_eq!(
            err,
            LatticeError::IncompleteTable {
                label: "g".into(),
                missing: "f, t".into()
            }
        );
    }

    #[test]
    fn rejects_non_lattice() {
        // two maximal elements, no join
        let err = parse_lattice("members: b, x, y\nbot: b\ntop: x\nleq: b < x\nleq: b < y\n")
            .unwrap_err();
        assert!(matches!(err, LatticeError::NotALattice(_)));
    }
}
