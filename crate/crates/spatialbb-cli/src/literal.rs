//! Text literals for device sequences and monomial target sets.
//!
//! Sequences come either as a named cycle (`omega12`, `omega1234`,
//! `eightstep`, `identity`) or in the bracketed segment notation
//! `[m,E_m,...,2,E_2,1,E_1]`, which reads right to left: the device
//! after segment label `k` fires after segment `k`. Device tokens are the
//! quarter-turn names (`Pi`, `Pi1`, `G`, `Gd`, `PiG`, `PiGd`, `PiGPi1`,
//! `I`) plus the general forms `ps(a,b)` and `bs(t)` with angles as
//! rational multiples of pi (e.g. `ps(1/2,-3/4)`, `bs(1/4)`).
//!
//! Target sets are comma-separated family names (`linear`, `A`, `B`, `C`)
//! and explicit monomials `c(c1,c2)a(a1,a2)` giving the creation and
//! annihilation exponents per mode. Everything is case-insensitive and
//! whitespace-tolerant; duplicates collapse.

use anyhow::{anyhow, bail, Result};
use spatialbb::control::{Device, DeviceSequence};
use spatialbb::exact::RationalAngle;
use spatialbb::monomial::Monomial;
use std::collections::BTreeSet;

/// Splits on commas that sit outside parentheses.
fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(ch);
            }
            ',' if depth == 0 => {
                parts.push(current.trim().to_string());
                current = String::new();
            }
            _ => current.push(ch),
        }
    }
    parts.push(current.trim().to_string());
    parts
}

/// Parses `n` or `n/d` as a multiple of pi.
fn parse_angle(tok: &str) -> Result<RationalAngle> {
    let tok = tok.trim();
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (tok, "1"),
    };
    let num: i64 = num
        .parse()
        .map_err(|_| anyhow!("bad angle numerator `{num}` in `{tok}`"))?;
    let den: i64 = den
        .parse()
        .map_err(|_| anyhow!("bad angle denominator `{den}` in `{tok}`"))?;
    if den == 0 {
        bail!("angle denominator is zero in `{tok}`");
    }
    Ok(RationalAngle::new(num, den))
}

fn parse_device(tok: &str) -> Result<Device> {
    let raw = tok.trim();
    let lower = raw.to_lowercase();
    if let Some(inner) = lower.strip_prefix("ps(").and_then(|r| r.strip_suffix(')')) {
        let args = split_top_level(inner);
        if args.len() != 2 {
            bail!("ps(...) takes two angles, got `{raw}`");
        }
        return Ok(Device::phase_shifter(parse_angle(&args[0])?, parse_angle(&args[1])?));
    }
    if let Some(inner) = lower.strip_prefix("bs(").and_then(|r| r.strip_suffix(')')) {
        return Ok(Device::beam_splitter(parse_angle(inner)?));
    }
    Ok(match lower.as_str() {
        "pi" => Device::pi(),
        "pi1" => Device::pi1(),
        "g" | "gamma" => Device::gamma(),
        "gd" | "gammad" | "gammadagger" => Device::gamma_dagger(),
        "pig" => Device::pi_gamma(),
        "pigd" => Device::pi_gamma_dagger(),
        "pigpi1" => Device::pi_gamma_pi1(),
        "i" | "id" | "identity" => Device::identity(),
        _ => bail!("unknown device `{raw}`"),
    })
}

/// Parses a sequence literal: a named cycle or the bracketed form.
pub fn parse_sequence(s: &str) -> Result<DeviceSequence> {
    let trimmed = s.trim();
    match trimmed.to_lowercase().as_str() {
        "omega12" => return Ok(DeviceSequence::omega12()),
        "omega1234" => return Ok(DeviceSequence::omega1234()),
        "eightstep" | "eight_step" => return Ok(DeviceSequence::eight_step()),
        "identity" | "free" => return Ok(DeviceSequence::free()),
        _ => {}
    }
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| {
            anyhow!(
                "sequence `{trimmed}` is neither a named cycle \
                 (omega12, omega1234, eightstep, identity) nor `[m,E,...,1,E]`"
            )
        })?;
    let tokens = split_top_level(inner);
    if tokens.len() < 2 || tokens.len() % 2 != 0 {
        bail!("sequence literal needs label,device pairs, got {} tokens", tokens.len());
    }
    let cycle = tokens.len() / 2;
    // written right to left: labels count down from m to 1
    let mut devices_reversed = Vec::with_capacity(cycle);
    for (pair, chunk) in tokens.chunks(2).enumerate() {
        let expected = cycle - pair;
        let label: usize = chunk[0]
            .parse()
            .map_err(|_| anyhow!("expected segment label, got `{}`", chunk[0]))?;
        if label != expected {
            bail!("segment labels must count down; expected {expected}, got {label}");
        }
        devices_reversed.push(parse_device(&chunk[1])?);
    }
    devices_reversed.reverse();
    Ok(DeviceSequence::new(devices_reversed)?)
}

fn parse_monomial(tok: &str) -> Result<Monomial> {
    let compact: String = tok.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = compact.to_lowercase();
    let err = || anyhow!("bad monomial `{tok}`; expected c(c1,c2)a(a1,a2)");
    let rest = lower.strip_prefix("c(").ok_or_else(err)?;
    let (c_args, rest) = rest.split_once(')').ok_or_else(err)?;
    let rest = rest.strip_prefix("a(").ok_or_else(err)?;
    let a_args = rest.strip_suffix(')').ok_or_else(err)?;
    let parse_pair = |args: &str| -> Result<(u32, u32)> {
        let (x, y) = args.split_once(',').ok_or_else(err)?;
        Ok((x.parse().map_err(|_| err())?, y.parse().map_err(|_| err())?))
    };
    let (c1, c2) = parse_pair(c_args)?;
    let (a1, a2) = parse_pair(a_args)?;
    Ok(Monomial::new(c1, a1, c2, a2))
}

/// Parses a comma-separated target set of family names and explicit
/// monomials, returned sorted and deduplicated.
pub fn parse_terms(s: &str) -> Result<Vec<Monomial>> {
    let mut set = BTreeSet::new();
    for tok in split_top_level(s) {
        if tok.is_empty() {
            bail!("empty term in `{s}`");
        }
        if tok.contains('(') {
            set.insert(parse_monomial(&tok)?);
            continue;
        }
        let family = match tok.to_lowercase().as_str() {
            "linear" => Monomial::linear_set(),
            "a" => Monomial::set_a(),
            "b" => Monomial::set_b(),
            "c" => Monomial::set_c(),
            _ => bail!("unknown term family `{tok}` (expected linear, A, B, C, or c(..)a(..))"),
        };
        set.extend(family);
    }
    Ok(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_sequences_resolve() {
        assert_eq!(parse_sequence("omega12").unwrap(), DeviceSequence::omega12());
        assert_eq!(parse_sequence("OMEGA1234").unwrap(), DeviceSequence::omega1234());
        assert_eq!(parse_sequence(" eightstep ").unwrap(), DeviceSequence::eight_step());
        assert_eq!(parse_sequence("identity").unwrap(), DeviceSequence::free());
    }

    #[test]
    fn bracketed_form_reads_right_to_left() {
        assert_eq!(parse_sequence("[2,Pi,1,Pi]").unwrap(), DeviceSequence::omega12());
        assert_eq!(
            parse_sequence("[4,Pi,3,PiGd,2,Pi,1,PiG]").unwrap(),
            DeviceSequence::omega1234()
        );
        // E_1 is the last-listed device
        let seq = parse_sequence("[2,Pi1,1,Gd]").unwrap();
        assert_eq!(seq.devices(), &[Device::gamma_dagger(), Device::pi1()]);
    }

    #[test]
    fn general_device_forms_parse() {
        let seq = parse_sequence("[2,ps(1/2,-3/4),1,bs(1/4)]").unwrap();
        assert_eq!(
            seq.devices()[0],
            Device::beam_splitter(RationalAngle::new(1, 4))
        );
        assert_eq!(
            seq.devices()[1],
            Device::phase_shifter(RationalAngle::new(1, 2), RationalAngle::new(-3, 4))
        );
    }

    #[test]
    fn bad_sequences_are_rejected() {
        assert!(parse_sequence("omega13").is_err());
        assert!(parse_sequence("[2,Pi,1]").is_err());
        assert!(parse_sequence("[1,Pi,2,Pi]").is_err());
        assert!(parse_sequence("[2,Frob,1,Pi]").is_err());
        assert!(parse_sequence("[1,ps(1/0,0)]").is_err());
    }

    #[test]
    fn term_families_and_monomials() {
        assert_eq!(parse_terms("linear").unwrap().len(), 4);
        assert_eq!(parse_terms("A").unwrap().len(), 6);
        assert_eq!(parse_terms("b").unwrap().len(), 2);
        assert_eq!(parse_terms("C").unwrap().len(), 2);
        assert_eq!(parse_terms("linear,a,b").unwrap().len(), 12);
        let single = parse_terms("c(1,0)a(0,1)").unwrap();
        assert_eq!(single, vec![Monomial::new(1, 0, 0, 1)]);
        // duplicates collapse
        assert_eq!(parse_terms("b,c(0,0)a(1,1),B").unwrap().len(), 2);
    }

    #[test]
    fn bad_terms_are_rejected() {
        assert!(parse_terms("quartic").is_err());
        assert!(parse_terms("c(1,0)a(0)").is_err());
        assert!(parse_terms("linear,,b").is_err());
    }
}
