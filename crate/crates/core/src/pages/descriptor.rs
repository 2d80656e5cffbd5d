use std::fmt;

use serde::{Deserialize, Serialize};

/// The coefficient module carried by one `E_n` lattice point on some page.
///
/// With `R = 𝔽_{2ⁿ}[[ū_1, …, ū_{n−1}]]` and `W = W(𝔽_{2ⁿ})[[ū_1, …, ū_{n−1}]]`:
///
/// | variant | module |
/// |---|---|
/// | `Zero` | 0 |
/// | `WittLevel(e)` | `2ᵉ·W` |
/// | `WittIdeal(m)` | the ideal `(2, ū_1, …, ū_{m−1}) ⊂ W`, `m ≥ 2` |
/// | `TorsLevel(k₀)` | `R/(ū_1, …, ū_{k₀−1}) = 𝔽_{2ⁿ}[[ū_{k₀}, …]]` |
/// | `TorsIdeal{k0, upto}` | the ideal `(ū_{k₀}, …, ū_{upto−1})` of `𝔽_{2ⁿ}[[ū_{k₀}, …]]` |
///
/// The ideal variants are the kernels left behind when a page-`k` arrow
/// leaves a source whose killed ideal is smaller than its target's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModuleDescriptor {
    Zero,
    WittLevel { e: u32 },
    WittIdeal { upto: u32 },
    TorsLevel { k0: u32 },
    TorsIdeal { k0: u32, upto: u32 },
}

use ModuleDescriptor::*;

impl ModuleDescriptor {
    pub fn witt_level(e: u32) -> Self {
        WittLevel { e }
    }

    /// `(2, ū_1, …, ū_{m−1})`; `m = 1` is `(2) = WittLevel(1)`.
    pub fn witt_ideal(upto: u32) -> Self {
        if upto <= 1 {
            WittLevel { e: 1 }
        } else {
            WittIdeal { upto }
        }
    }

    pub fn tors_level(k0: u32) -> Self {
        TorsLevel { k0 }
    }

    /// `(ū_{k₀}, …, ū_{upto−1})`; empty generator lists give zero.
    pub fn tors_ideal(k0: u32, upto: u32) -> Self {
        if upto <= k0 {
            Zero
        } else {
            TorsIdeal { k0, upto }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Zero)
    }

    pub fn is_witt(&self) -> bool {
        matches!(self, WittLevel { .. } | WittIdeal { .. })
    }

    pub fn is_torsion(&self) -> bool {
        matches!(self, TorsLevel { .. } | TorsIdeal { .. })
    }

    /// Is the additive group killed by 2?
    pub fn is_two_torsion(&self) -> bool {
        matches!(self, Zero | TorsLevel { .. } | TorsIdeal { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Zero => "zero",
            WittLevel { .. } => "witt",
            WittIdeal { .. } => "witt-ideal",
            TorsLevel { .. } => "tors",
            TorsIdeal { .. } => "tors-ideal",
        }
    }

    /// Short chart label: `2^e`, `(2,u1,u2)`, `k0=2`, `k0=1;(u1,u2)`.
    pub fn annotation(&self) -> String {
        let gens = |lo: u32, hi: u32| -> Vec<String> { (lo..hi).map(|i| format!("u{i}")).collect() };
        match *self {
            Zero => String::new(),
            WittLevel { e } => format!("2^{e}"),
            WittIdeal { upto } => {
                let mut g = vec!["2".to_string()];
                g.extend(gens(1, upto));
                format!("({})", g.join(","))
            }
            TorsLevel { k0 } => format!("k0={k0}"),
            TorsIdeal { k0, upto } => format!("k0={k0};({})", gens(k0, upto).join(",")),
        }
    }

    /// Inverse of (`kind`, `annotation`).
    pub fn from_kind_annotation(kind: &str, annot: &str) -> Option<Self> {
        let num = |s: &str| s.parse::<u32>().ok();
        match kind {
            "zero" => Some(Zero),
            "witt" => annot.strip_prefix("2^").and_then(num).map(|e| WittLevel { e }),
            "witt-ideal" => {
                let inner = annot.strip_prefix('(')?.strip_suffix(')')?;
                let upto = inner.split(',').count() as u32;
                Some(ModuleDescriptor::witt_ideal(upto))
            }
            "tors" => annot.strip_prefix("k0=").and_then(num).map(|k0| TorsLevel { k0 }),
            "tors-ideal" => {
                let (k, rest) = annot.split_once(';')?;
                let k0 = num(k.strip_prefix("k0=")?)?;
                let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
                let count = inner.split(',').count() as u32;
                Some(ModuleDescriptor::tors_ideal(k0, k0 + count))
            }
            _ => None,
        }
    }

    /// log₂ of the additive order of the module truncated to ū-degree
    /// `< d` with Witt precision `m`, at height `n` (`𝔽_{2ⁿ}` has
    /// 𝔽₂-dimension `n`).
    pub fn order_log2(&self, n: u32, d: u32, m: u32) -> u64 {
        let (n64, m64) = (u64::from(n), u64::from(m));
        let vars = n - 1;
        match *self {
            Zero => 0,
            WittLevel { e } => n64 * m64.saturating_sub(u64::from(e)) * monomials_below(vars, d),
            WittIdeal { upto } => {
                let all = monomials_below(vars, d);
                let outside = monomials_below(vars - (upto - 1), d);
                n64 * (m64 * (all - outside) + (m64 - 1) * outside)
            }
            TorsLevel { k0 } => n64 * monomials_below(n - k0, d),
            TorsIdeal { k0, upto } => {
                n64 * (monomials_below(n - k0, d) - monomials_below(n - upto, d))
            }
        }
    }

    /// Is `ū^series` (coefficient 1) a nonzero element of this module?
    /// `series[i]` is the exponent of `ū_{i+1}`.
    pub fn contains_unit_multiple(&self, series: &[i64]) -> bool {
        let uses = |i: u32| series.get(i as usize - 1).copied().unwrap_or(0) > 0;
        match *self {
            Zero => false,
            WittLevel { e } => e == 0,
            WittIdeal { upto } => (1..upto).any(uses),
            TorsLevel { k0 } => !(1..k0).any(uses),
            TorsIdeal { k0, upto } => !(1..k0).any(uses) && (k0..upto).any(uses),
        }
    }

    /// Human-readable group, e.g. `(2,u1)W[[u1,u2]]` or `F8[[u2]]`.
    pub fn describe_group(&self, n: u32) -> String {
        let vars = |lo: u32| -> String {
            let v: Vec<String> = (lo..n).map(|i| format!("u{i}")).collect();
            if v.is_empty() {
                String::new()
            } else {
                format!("[[{}]]", v.join(","))
            }
        };
        let field = format!("F{}", 1u64 << n);
        let witt = if n == 1 { "Z2".to_string() } else { format!("W(F{})", 1u64 << n) };
        match *self {
            Zero => "0".into(),
            WittLevel { e: 0 } => format!("{witt}{}", vars(1)),
            WittLevel { e } => format!("2^{e}{witt}{}", vars(1)),
            WittIdeal { .. } => format!("{}{witt}{}", self.annotation(), vars(1)),
            TorsLevel { k0 } => format!("{field}{}", vars(k0)),
            TorsIdeal { k0, upto } => {
                let g: Vec<String> = (k0..upto).map(|i| format!("u{i}")).collect();
                format!("({}){field}{}", g.join(","), vars(k0))
            }
        }
    }
}

impl fmt::Display for ModuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Zero => f.write_str("Zero"),
            WittLevel { e } => write!(f, "WittLevel({e})"),
            WittIdeal { upto } => write!(f, "WittIdeal({upto})"),
            TorsLevel { k0 } => write!(f, "TorsLevel({k0})"),
            TorsIdeal { k0, upto } => write!(f, "TorsIdeal({k0},{upto})"),
        }
    }
}

/// Number of monomials of total degree `< d` in `vars` variables.
pub fn monomials_below(vars: u32, d: u32) -> u64 {
    if d == 0 {
        return 0;
    }
    // C(d − 1 + vars, vars)
    binomial(u64::from(d) - 1 + u64::from(vars), u64::from(vars))
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
