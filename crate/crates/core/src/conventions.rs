//! Convention choices that the formulas leave implicit, plus their frozen defaults.

use std::fmt;

use serde::{Deserialize, Serialize};

/// How torus characters become weights on the localization side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalizationConventions {
    /// Read `q` as the second torus weight (eta) and `q'` as the first (1).
    pub swap_q: bool,
    /// Sign of the `q'` exponent when reducing `t_l` to `t_{l0}`: `+1` or `-1`.
    pub t_shift_sign: i8,
    /// Use the inverted character (all weights negated) for the tangent space.
    pub dual: bool,
}

impl Default for LocalizationConventions {
    fn default() -> Self {
        Self { swap_q: false, t_shift_sign: 1, dual: false }
    }
}

/// Potential terms of the Calogero-Moser operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalogeroVariant {
    /// Loop coefficient `mn((m+1)n+eta)/(n+eta)` and window coefficient `m(m+1)`.
    Verbatim,
    /// First-order operator acting on the trace of the intertwiner, conjugated back by
    /// `prod z^b * delta`.
    Conjugated,
    /// Window coefficient `m(m+1)` on every window and no loop term.
    NoLoop,
}

impl CalogeroVariant {
    pub const ALL: [CalogeroVariant; 3] =
        [CalogeroVariant::Verbatim, CalogeroVariant::Conjugated, CalogeroVariant::NoLoop];

    pub fn letter(self) -> char {
        match self {
            CalogeroVariant::Verbatim => 'A',
            CalogeroVariant::Conjugated => 'B',
            CalogeroVariant::NoLoop => 'C',
        }
    }
}

/// Which multiple of eta enters the Hamiltonian side (b_k, lambda and the `eta*D` term).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaScale {
    Unit,
    PerRank,
}

/// Central extension used for the affine algebra and the evaluation module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Cocycle `a * tr(XY) * c`; the evaluation module is the plain differential-operator one.
    Standard,
    /// Cocycle `a * (tr(XY) c + tr X tr Y k)` with a second central element `k` (1 on the
    /// Verma module, 0 on the evaluation module), and negative modes acting on the evaluation
    /// module in the opposite normal order.
    Geometric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ledger {
    pub localization: LocalizationConventions,
    pub calogero: CalogeroVariant,
    pub eta_scale: EtaScale,
    pub normalization: Normalization,
}

impl Default for Ledger {
    fn default() -> Self {
        Self {
            localization: LocalizationConventions::default(),
            calogero: CalogeroVariant::NoLoop,
            eta_scale: EtaScale::PerRank,
            normalization: Normalization::Geometric,
        }
    }
}

impl Ledger {
    /// Every combination of the ledger items.
    pub fn all() -> Vec<Ledger> {
        let mut out = Vec::new();
        for swap_q in [false, true] {
            for t_shift_sign in [1i8, -1] {
                for dual in [false, true] {
                    for calogero in CalogeroVariant::ALL {
                        for eta_scale in [EtaScale::Unit, EtaScale::PerRank] {
                            for normalization in [Normalization::Standard, Normalization::Geometric] {
                                out.push(Ledger {
                                    localization: LocalizationConventions { swap_q, t_shift_sign, dual },
                                    calogero,
                                    eta_scale,
                                    normalization,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Parses the compact form produced by `Display`, e.g. `q=1,t=+,tan=chi,cm=C,eta=1/n,alg=geo`.
    /// Missing keys keep their default.
    pub fn parse(s: &str) -> Result<Ledger, String> {
        let mut led = Ledger::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| format!("bad ledger item {part:?}"))?;
            match (k.trim(), v.trim()) {
                ("q", "1") => led.localization.swap_q = false,
                ("q", "eta") => led.localization.swap_q = true,
                ("t", "+") => led.localization.t_shift_sign = 1,
                ("t", "-") => led.localization.t_shift_sign = -1,
                ("tan", "chi") => led.localization.dual = false,
                ("tan", "dual") => led.localization.dual = true,
                ("cm", "A") => led.calogero = CalogeroVariant::Verbatim,
                ("cm", "B") => led.calogero = CalogeroVariant::Conjugated,
                ("cm", "C") => led.calogero = CalogeroVariant::NoLoop,
                ("eta", "1") => led.eta_scale = EtaScale::Unit,
                ("eta", "1/n") => led.eta_scale = EtaScale::PerRank,
                ("alg", "std") => led.normalization = Normalization::Standard,
                ("alg", "geo") => led.normalization = Normalization::Geometric,
                _ => return Err(format!("bad ledger item {part:?}")),
            }
        }
        Ok(led)
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={},t={},tan={},cm={},eta={},alg={}",
            if self.localization.swap_q { "eta" } else { "1" },
            if self.localization.t_shift_sign > 0 { "+" } else { "-" },
            if self.localization.dual { "dual" } else { "chi" },
            self.calogero.letter(),
            match self.eta_scale {
                EtaScale::Unit => "1",
                EtaScale::PerRank => "1/n",
            },
            match self.normalization {
                Normalization::Standard => "std",
                Normalization::Geometric => "geo",
            }
        )
    }
}
