use super::receive::EffectiveSystem;
use super::SncError;

/// Messages recovered at the central processor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovery {
    /// `messages[k]` is the estimate of transmitter `k`'s message vector.
    pub messages: Vec<Vec<u32>>,
    /// Set when a redundant equation contradicts the solution, which means
    /// some receiver demodulated a wrong network-coded symbol.
    pub detected_error: bool,
}

/// Solves the independent-row subsystem of `F b = forwarded` and splits the
/// solution per transmitter.
pub fn cp_recover(eff: &EffectiveSystem, forwarded: &[u32]) -> Result<Recovery, SncError> {
    let field = eff.field();
    if let Some(&bad) = forwarded.iter().find(|&&v| v >= field.q()) {
        return Err(SncError::Shape(format!(
            "forwarded symbol {bad} is not in {field}"
        )));
    }
    let sol = eff.f_gf().solve_subsystem(forwarded)?;
    let messages = (0..eff.transmitters())
        .map(|k| {
            let start = eff.stream_offset(k);
            sol.x[start..start + eff.streams(k)].to_vec()
        })
        .collect();
    Ok(Recovery {
        messages,
        detected_error: sol.first_inconsistent_row.is_some(),
    })
}
