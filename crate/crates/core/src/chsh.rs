use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::table::{bit, parity, BoxTable};

/// `Σ_{x,y} Pr(a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ)` for `form = (α, β, γ)`.
pub fn chsh_form(table: &BoxTable, form: (u8, u8, u8)) -> Result<Dyadic> {
    if table.n_parties() != 2 {
        return Err(Error::PartyMismatch { left: 2, right: table.n_parties() });
    }
    let (alpha, beta, gamma) = (form.0 as usize & 1, form.1 as usize & 1, form.2 as usize & 1);
    Ok((0..4)
        .flat_map(|xy| {
            let (x, y) = (bit(xy, 0, 2), bit(xy, 1, 2));
            let target = (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma;
            (0..4).filter(move |&ab| parity(ab) == target).map(move |ab| (xy, ab))
        })
        .map(|(xy, ab)| table.get(xy, ab))
        .sum())
}

/// `Σ_{x,y} Pr(a ⊕ b = xy)`. Local boxes reach at most 3, no-signalling boxes 4.
pub fn chsh_value(table: &BoxTable) -> Result<Dyadic> {
    chsh_form(table, (0, 0, 0))
}

/// Largest value over the eight relabelled forms, with the first form
/// (in `(α, β, γ)` binary order) attaining it.
pub fn chsh_max(table: &BoxTable) -> Result<(Dyadic, (u8, u8, u8))> {
    let mut best: Option<(Dyadic, (u8, u8, u8))> = None;
    for code in 0..8u8 {
        let form = (code >> 2 & 1, code >> 1 & 1, code & 1);
        let v = chsh_form(table, form)?;
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, form));
        }
    }
    Ok(best.expect("eight forms"))
}
