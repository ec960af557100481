//! String parsers turning short preset names (as used in config files and on
//! the command line) into birth profiles, kill measures, and pair laws.

use crate::{BirthFunction, Error, KillMeasure, PairDistribution, Result};

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::UnknownPreset(format!("bad number `{tok}`")))
        })
        .collect()
}

fn parse_usize(tok: &str) -> Result<usize> {
    tok.trim()
        .parse::<usize>()
        .map_err(|_| Error::UnknownPreset(format!("bad integer `{tok}`")))
}

/// Parses a birth profile:
/// `one`, `linear`, `indicator`, `power:E`, `poly:c0,c1,...`, or
/// `step:b1,...|v0,v1,...`.
pub fn parse_birth_preset(s: &str) -> Result<BirthFunction> {
    let s = s.trim();
    match s {
        "one" => return Ok(BirthFunction::one()),
        "linear" => return Ok(BirthFunction::linear()),
        "indicator" => return Ok(BirthFunction::indicator_positive()),
        _ => {}
    }
    if let Some(arg) = s.strip_prefix("power:") {
        return BirthFunction::power(parse_usize(arg)?);
    }
    if let Some(arg) = s.strip_prefix("poly:") {
        return BirthFunction::poly(parse_f64_list(arg)?);
    }
    if let Some(arg) = s.strip_prefix("step:") {
        let (breaks, values) = arg
            .split_once('|')
            .ok_or_else(|| Error::UnknownPreset(format!("step needs `breaks|values`: `{s}`")))?;
        return BirthFunction::step(parse_f64_list(breaks)?, parse_f64_list(values)?);
    }
    Err(Error::UnknownPreset(format!("birth profile `{s}`")))
}

/// Parses a kill measure:
/// `bbm` (all mass at `-inf`), `nbbm` (point mass at 0), `uniform`,
/// `dk:K`, `power:E` (CDF `x^E`), or `minus-inf:MASS` (atom at `-inf` plus
/// uniform remainder).
pub fn parse_kill_preset(s: &str) -> Result<KillMeasure> {
    let s = s.trim();
    match s {
        "bbm" => return Ok(KillMeasure::bbm()),
        "nbbm" => return Ok(KillMeasure::nbbm()),
        "uniform" => return Ok(KillMeasure::uniform()),
        _ => {}
    }
    if let Some(arg) = s.strip_prefix("dk:") {
        return KillMeasure::dk(parse_usize(arg)?);
    }
    if let Some(arg) = s.strip_prefix("power:") {
        return KillMeasure::power_cdf(parse_usize(arg)?);
    }
    if let Some(arg) = s.strip_prefix("minus-inf:") {
        let mass = arg
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::UnknownPreset(format!("bad mass `{arg}`")))?;
        return KillMeasure::minus_inf_plus_uniform(mass);
    }
    Err(Error::UnknownPreset(format!("kill measure `{s}`")))
}

/// Parses a pair law on sets of size `k`:
/// `adjacent-top`, `spread`, `uniform`, `delta:I,J`, or
/// `list:I-J:W;I-J:W;...`.
pub fn parse_pair_preset(k: usize, s: &str) -> Result<PairDistribution> {
    let s = s.trim();
    match s {
        "adjacent-top" => return PairDistribution::adjacent_top(k),
        "spread" => return PairDistribution::spread(k),
        "uniform" => return PairDistribution::uniform_all(k),
        _ => {}
    }
    if let Some(arg) = s.strip_prefix("delta:") {
        let (i, j) = arg
            .split_once(',')
            .ok_or_else(|| Error::UnknownPreset(format!("delta needs `I,J`: `{s}`")))?;
        return PairDistribution::delta(k, parse_usize(i)?, parse_usize(j)?);
    }
    if let Some(arg) = s.strip_prefix("list:") {
        let weights = arg
            .split(';')
            .map(|entry| {
                let mut parts = entry.split(':');
                let pair = parts
                    .next()
                    .ok_or_else(|| Error::UnknownPreset(format!("bad entry `{entry}`")))?;
                let w = parts
                    .next()
                    .ok_or_else(|| Error::UnknownPreset(format!("bad entry `{entry}`")))?;
                let (i, j) = pair
                    .split_once('-')
                    .ok_or_else(|| Error::UnknownPreset(format!("bad pair `{pair}`")))?;
                let w = w
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::UnknownPreset(format!("bad weight `{w}`")))?;
                Ok((parse_usize(i)?, parse_usize(j)?, w))
            })
            .collect::<Result<Vec<_>>>()?;
        return PairDistribution::new(k, weights);
    }
    Err(Error::UnknownPreset(format!("pair law `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn birth_presets_round_trip() {
        assert_eq!(parse_birth_preset("one").expect("ok"), BirthFunction::one());
        assert_eq!(
            parse_birth_preset("linear").expect("ok"),
            BirthFunction::linear()
        );
        assert_eq!(
            parse_birth_preset("indicator").expect("ok"),
            BirthFunction::indicator_positive()
        );
        assert_eq!(
            parse_birth_preset("power:2").expect("ok"),
            BirthFunction::power(2).expect("ok")
        );
        assert_eq!(
            parse_birth_preset("poly:0,1").expect("ok"),
            BirthFunction::linear()
        );
        let step = parse_birth_preset("step:0.5|1,2").expect("ok");
        assert_eq!(step.eval(0.25), 1.0);
        assert_eq!(step.eval(0.75), 2.0);
        assert!(parse_birth_preset("nope").is_err());
        assert!(parse_birth_preset("step:0.5").is_err());
    }

    #[test]
    fn kill_presets_round_trip() {
        assert_eq!(parse_kill_preset("bbm").expect("ok"), KillMeasure::bbm());
        assert_eq!(parse_kill_preset("nbbm").expect("ok"), KillMeasure::nbbm());
        assert_eq!(
            parse_kill_preset("uniform").expect("ok"),
            KillMeasure::uniform()
        );
        assert_eq!(
            parse_kill_preset("dk:4").expect("ok"),
            KillMeasure::dk(4).expect("ok")
        );
        assert_eq!(
            parse_kill_preset("minus-inf:0.5").expect("ok"),
            KillMeasure::minus_inf_plus_uniform(0.5).expect("ok")
        );
        assert!(parse_kill_preset("nope").is_err());
        assert!(parse_kill_preset("minus-inf:2.0").is_err());
    }

    #[test]
    fn pair_presets_round_trip() {
        assert_eq!(
            parse_pair_preset(3, "adjacent-top").expect("ok"),
            PairDistribution::adjacent_top(3).expect("ok")
        );
        assert_eq!(
            parse_pair_preset(4, "spread").expect("ok"),
            PairDistribution::spread(4).expect("ok")
        );
        assert_eq!(
            parse_pair_preset(3, "uniform").expect("ok"),
            PairDistribution::uniform_all(3).expect("ok")
        );
        assert_eq!(
            parse_pair_preset(2, "delta:1,2").expect("ok"),
            PairDistribution::delta(2, 1, 2).expect("ok")
        );
        let listed = parse_pair_preset(3, "list:1-2:0.5;2-3:0.5").expect("ok");
        assert_eq!(listed.weights().len(), 2);
        assert!(parse_pair_preset(3, "nope").is_err());
        assert!(parse_pair_preset(3, "delta:2,1").is_err());
    }
}
