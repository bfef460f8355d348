use serde::Serialize;

use super::ArithFormula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Win,
    Lose,
    Unknown,
}

/// Truth of the residual formula at position `(m, n)`, with Abelard's
/// variables ranging over `[0, bound]` and Eloise's over `[0, bound + 1]`.
pub fn bounded_truth(phi: &ArithFormula, z: &[u64], m: &mut Vec<u64>, n: &mut Vec<u64>, bound: u64) -> bool {
    if m.len() == phi.h {
        return phi.eval(z, m, n).map(|v| v == 0).unwrap_or(false);
    }
    (0..=bound + 1).any(|x| {
        m.push(x);
        let all = (0..=bound).all(|y| {
            n.push(y);
            let t = bounded_truth(phi, z, m, n, bound);
            n.pop();
            t
        });
        m.pop();
        all
    })
}

fn leading_tuples(g: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..g {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=bound).map(move |z| {
                    let mut w = v.clone();
                    w.push(z);
                    w
                })
            })
            .collect();
    }
    out
}

/// The G0 game with Abelard's moves restricted to `[0, bound]` and Eloise's
/// to `[0, bound + 1]`, from the history of former positions `history`
/// (empty means `{(), ()}`). The extra value lets Eloise outbid Abelard's
/// largest answer.
///
/// Eloise wins the restricted game exactly when the residual formula is
/// true (bounded) at one of the recorded positions, since Abelard's answers
/// at different positions are independent. Leading universal variables
/// also range over `[0, bound]`. `Lose` becomes `Unknown` when `strict` is
/// set, because a larger bound may change it.
pub fn truth_oracle_g0(
    phi: &ArithFormula,
    bound: u64,
    history: &[(Vec<u64>, Vec<u64>)],
    strict: bool,
) -> Verdict {
    let root = [(Vec::new(), Vec::new())];
    let history = if history.is_empty() { &root[..] } else { history };
    let win = leading_tuples(phi.g, bound).iter().all(|z| {
        history.iter().any(|(m, n)| {
            m.len() == n.len()
                && m.len() <= phi.h
                && bounded_truth(phi, z, &mut m.clone(), &mut n.clone(), bound)
        })
    });
    match (win, strict) {
        (true, _) => Verdict::Win,
        (false, false) => Verdict::Lose,
        (false, true) => Verdict::Unknown,
    }
}
