use serde::Serialize;

use super::{Automorphism, GqParams, GroupElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FusionKind {
    Fused,
    InverseFused,
    Neither,
}

/// Outcome of [`are_fused`]. The witness `α` satisfies `α(x) = y` when fused
/// and `α(x⁻¹) = y` when inverse-fused.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionVerdict {
    pub kind: FusionKind,
    pub witness: Option<Automorphism>,
}

/// Searches the enumerated automorphisms (in enumeration order) for the
/// first fusing witness, then for the first inverse-fusing one.
pub fn are_fused(x: GroupElement, y: GroupElement, p: GqParams) -> FusionVerdict {
    let auts = Automorphism::enumerate(p);
    let find = |src: GroupElement| auts.iter().find(|a| a.apply_unchecked(src, p) == y).cloned();
    if let Some(w) = find(x) {
        return FusionVerdict {
            kind: FusionKind::Fused,
            witness: Some(w),
        };
    }
    if let Some(w) = find(p.inverse(x)) {
        return FusionVerdict {
            kind: FusionKind::InverseFused,
            witness: Some(w),
        };
    }
    FusionVerdict {
        kind: FusionKind::Neither,
        witness: None,
    }
}
