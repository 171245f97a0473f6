//! SDPA sparse text format.
//!
//! SDPA solves min cᵀx s.t. Σ_i x_i F_i − F_0 ⪰ 0, which is the dual of
//! [`SdpProblem`] after x = y, c = −b, F_0 = −C and F_i = −A_i. Files
//! written here can be fed to SDPA or CSDP; their reported objective is the
//! negated optimum of this crate's primal.
//!
//! Layout: comment lines start with `"` or `*`; then the constraint count,
//! the block count, the block sizes, the vector c, and finally one line per
//! upper-triangle entry `matrix block row col value` (1-based; matrix 0 is F_0).

use std::fmt::Write as _;

use super::problem::{Constraint, SdpProblem, SparseSym};
use crate::error::{Error, Result};

pub fn write_sdpa(problem: &SdpProblem, comment: &str) -> String {
    let mut s = String::new();
    for line in comment.lines() {
        let _ = writeln!(s, "\"{line}");
    }
    let _ = writeln!(s, "{}", problem.constraints.len());
    let _ = writeln!(s, "{}", problem.block_sizes.len());
    let sizes: Vec<String> = problem.block_sizes.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(s, "{}", sizes.join(" "));
    let c: Vec<String> = problem.constraints.iter().map(|c| format!("{:e}", -c.rhs)).collect();
    let _ = writeln!(s, "{}", c.join(" "));
    let mut emit = |mat: usize, block: usize, a: &SparseSym| {
        for (i, j, v) in a.entries() {
            let _ = writeln!(s, "{} {} {} {} {:e}", mat, block + 1, i + 1, j + 1, -v);
        }
    };
    for (k, c) in problem.objective.iter().enumerate() {
        emit(0, k, c);
    }
    for (i, con) in problem.constraints.iter().enumerate() {
        for (k, a) in &con.terms {
            emit(i + 1, *k, a);
        }
    }
    s
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("SDPA line {line}: {msg}"))
}

pub fn read_sdpa(text: &str) -> Result<SdpProblem> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'));
    let mut header = |what: &str| lines.next().ok_or_else(|| Error::Parse(format!("SDPA file ends before {what}")));
    let (ln, l) = header("constraint count")?;
    let m: usize = l.split_whitespace().next().unwrap_or("").parse().map_err(|e| parse_err(ln, e))?;
    let (ln, l) = header("block count")?;
    let nb: usize = l.split_whitespace().next().unwrap_or("").parse().map_err(|e| parse_err(ln, e))?;
    let (ln, l) = header("block sizes")?;
    let sizes: Vec<usize> = l
        .split(|ch: char| ch.is_whitespace() || ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map(|v| v.unsigned_abs() as usize))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(ln, e))?;
    if sizes.len() != nb {
        return Err(parse_err(ln, format!("expected {nb} block sizes, found {}", sizes.len())));
    }
    let (ln, l) = header("objective vector")?;
    let cvec: Vec<f64> = l
        .split(|ch: char| ch.is_whitespace() || ch == ',' || ch == '{' || ch == '}')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(ln, e))?;
    if cvec.len() != m {
        return Err(parse_err(ln, format!("expected {m} objective entries, found {}", cvec.len())));
    }
    let mut objective: Vec<SparseSym> = sizes.iter().map(|&n| SparseSym::new(n)).collect();
    let mut terms: Vec<Vec<(usize, SparseSym)>> = vec![Vec::new(); m];
    for (ln, l) in lines {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 5 {
            return Err(parse_err(ln, "expected `matrix block row col value`"));
        }
        let idx = |s: &str| s.parse::<usize>().map_err(|e| parse_err(ln, e));
        let (mat, block, i, j) = (idx(t[0])?, idx(t[1])?, idx(t[2])?, idx(t[3])?);
        let v: f64 = t[4].parse().map_err(|e| parse_err(ln, e))?;
        if block == 0 || block > nb || i == 0 || j == 0 || i > sizes[block - 1] || j > sizes[block - 1] || mat > m {
            return Err(parse_err(ln, "index out of range"));
        }
        let (k, i, j) = (block - 1, i - 1, j - 1);
        if mat == 0 {
            objective[k].push(i, j, -v);
        } else {
            let list = &mut terms[mat - 1];
            match list.iter_mut().find(|(kk, _)| *kk == k) {
                Some((_, a)) => a.push(i, j, -v),
                None => {
                    let mut a = SparseSym::new(sizes[k]);
                    a.push(i, j, -v);
                    list.push((k, a));
                }
            }
        }
    }
    let constraints = terms
        .into_iter()
        .zip(cvec)
        .map(|(mut t, ci)| {
            t.sort_by_key(|(k, _)| *k);
            Constraint { terms: t, rhs: -ci }
        })
        .collect();
    Ok(SdpProblem { block_sizes: sizes, objective, constraints })
}
