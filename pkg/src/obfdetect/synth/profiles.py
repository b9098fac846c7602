"""Generation profiles: controllable class-conditional distributions.

Tool styles are statistical caricatures of how different obfuscators shape
identifier names, strings and instruction mixes; they are not emulations of
the real products. Technique transforms compose on disjoint profile fields:
identifier renaming reshapes names, string encryption swaps the string
profile, control-flow modification inflates junk instructions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..errors import ProfileInfeasible
from ..labels import TechniqueSet

TOOL_STYLES = ("none", "proguard-like", "allatori-like", "dasho-like", "other-like")

LENGTH_BUCKETS = ("1", "2", "3", "4", ">4")

_NATURAL_LENGTHS = {"1": 0.0, "2": 0.02, "3": 0.06, "4": 0.12, ">4": 0.80}
_NATURAL_MIX = {"nop": 0.05, "goto": 0.4, "invoke": 3.0, "if": 1.2, "move": 1.8, "other": 4.0}


@dataclass(frozen=True)
class ProfileLabel:
    obfuscated: bool
    tool_style: str
    techniques: TechniqueSet


@dataclass(frozen=True)
class GenerationProfile:
    label: ProfileLabel
    n_classes: int = 12
    n_methods_per_class: int = 6
    n_fields_per_class: int = 4
    n_strings: int = 40
    name_length_distribution: dict[str, float] = field(
        default_factory=lambda: dict(_NATURAL_LENGTHS)
    )
    special_char_rate: float = 0.02
    numeric_rate: float = 0.04
    string_profile: str = "natural"  # or "encrypted-like"
    instruction_mix: dict[str, float] = field(default_factory=lambda: dict(_NATURAL_MIX))
    junk_instruction_rate: float = 0.0
    seed: int = 0

    def validate(self) -> None:
        if self.n_classes == 0 and (self.n_methods_per_class or self.n_fields_per_class):
            raise ProfileInfeasible("zero classes cannot carry methods or fields")
        if min(self.n_classes, self.n_methods_per_class, self.n_fields_per_class) < 0:
            raise ProfileInfeasible("counts must be non-negative")
        if self.n_strings < 0:
            raise ProfileInfeasible("n_strings must be non-negative")
        for name, dist in (
            ("name_length_distribution", self.name_length_distribution),
            ("instruction_mix", self.instruction_mix),
        ):
            if any(w < 0 for w in dist.values()):
                raise ProfileInfeasible(f"{name} has a negative weight")
            if not any(w > 0 for w in dist.values()):
                raise ProfileInfeasible(f"{name} has no positive weight")
        unknown = set(self.name_length_distribution) - set(LENGTH_BUCKETS)
        if unknown:
            raise ProfileInfeasible(f"unknown length buckets: {sorted(unknown)}")
        for rate_name in ("special_char_rate", "numeric_rate", "junk_instruction_rate"):
            rate = getattr(self, rate_name)
            if not 0.0 <= rate <= 1.0:
                raise ProfileInfeasible(f"{rate_name} must be in [0, 1], got {rate}")
        if self.string_profile not in ("natural", "encrypted-like"):
            raise ProfileInfeasible(f"unknown string profile {self.string_profile!r}")
        if self.label.tool_style not in TOOL_STYLES:
            raise ProfileInfeasible(f"unknown tool style {self.label.tool_style!r}")


def apply_technique_profile(base: GenerationProfile, t: TechniqueSet) -> GenerationProfile:
    """Shift a profile to exhibit the given techniques.

    Applying the empty set is the identity; transforms touch disjoint fields
    so application order never matters.
    """
    if not t:
        return replace(base)
    changes: dict = {}
    if t.ir:
        changes["name_length_distribution"] = {"1": 0.6, "2": 0.4}
        changes["special_char_rate"] = max(base.special_char_rate, 0.35)
        changes["numeric_rate"] = max(base.numeric_rate, 0.35)
    if t.se:
        changes["string_profile"] = "encrypted-like"
    if t.cf:
        changes["junk_instruction_rate"] = max(base.junk_instruction_rate, 0.35)
        mix = dict(base.instruction_mix)
        mix["nop"] = mix.get("nop", 0.0) + 2.0
        mix["goto"] = mix.get("goto", 0.0) + 1.5
        changes["instruction_mix"] = mix
    merged = TechniqueSet(
        ir=base.label.techniques.ir or t.ir,
        cf=base.label.techniques.cf or t.cf,
        se=base.label.techniques.se or t.se,
    )
    changes["label"] = ProfileLabel(
        obfuscated=base.label.obfuscated or bool(merged),
        tool_style=base.label.tool_style,
        techniques=merged,
    )
    return replace(base, **changes)


# Per-style knobs: how renamed identifiers look (length mix, char rates),
# the style's baseline instruction mix, junk level under CF, and encrypted
# string length range under SE.
_STYLE = {
    "proguard-like": {
        "ir_lengths": {"1": 0.7, "2": 0.3},
        "ir_special": 0.02,
        "ir_numeric": 0.02,
        "mix": dict(_NATURAL_MIX),
        "junk": 0.35,
        "enc_lengths": (8, 20),
        "default_techniques": TechniqueSet(ir=True),
        "supports": TechniqueSet(ir=True, cf=False, se=False),
    },
    "allatori-like": {
        "ir_lengths": {"1": 0.5, "2": 0.5},
        "ir_special": 0.85,
        "ir_numeric": 0.20,
        "mix": {"nop": 0.1, "goto": 1.2, "invoke": 2.2, "if": 1.0, "move": 1.6, "other": 3.5},
        "junk": 0.40,
        "enc_lengths": (8, 16),
        "default_techniques": TechniqueSet(ir=True, cf=True, se=True),
        "supports": TechniqueSet(ir=True, cf=True, se=True),
    },
    "dasho-like": {
        "ir_lengths": {"2": 0.45, "3": 0.55},
        "ir_special": 0.08,
        "ir_numeric": 0.85,
        "mix": {"nop": 0.05, "goto": 0.5, "invoke": 4.5, "if": 0.8, "move": 2.2, "other": 3.0},
        "junk": 0.30,
        "enc_lengths": (10, 20),
        "default_techniques": TechniqueSet(ir=True, cf=True, se=True),
        "supports": TechniqueSet(ir=True, cf=True, se=True),
    },
    "other-like": {
        "ir_lengths": {"3": 0.35, "4": 0.35, ">4": 0.3},
        "ir_special": 0.45,
        "ir_numeric": 0.45,
        "mix": {"nop": 0.15, "goto": 0.8, "invoke": 2.0, "if": 2.6, "move": 1.2, "other": 3.2},
        "junk": 0.50,
        "enc_lengths": (16, 28),
        "default_techniques": TechniqueSet(ir=True, cf=True, se=True),
        "supports": TechniqueSet(ir=True, cf=True, se=True),
    },
}


def tool_style_profile(
    tool_style: str,
    techniques: TechniqueSet | None = None,
    seed: int = 0,
    **overrides,
) -> GenerationProfile:
    """Build the generation profile of one (tool style, technique set) cell.

    Requesting a technique the style does not support (e.g. control flow
    modification from proguard-like) raises ProfileInfeasible.
    """
    if tool_style == "none":
        if techniques:
            raise ProfileInfeasible("style 'none' cannot carry techniques")
        profile = GenerationProfile(
            label=ProfileLabel(False, "none", TechniqueSet()), seed=seed, **overrides
        )
        profile.validate()
        return profile

    if tool_style not in _STYLE:
        raise ProfileInfeasible(f"unknown tool style {tool_style!r}")
    style = _STYLE[tool_style]
    t = techniques if techniques is not None else style["default_techniques"]
    supports: TechniqueSet = style["supports"]
    for name, wanted, ok in (
        ("IR", t.ir, supports.ir),
        ("CF", t.cf, supports.cf),
        ("SE", t.se, supports.se),
    ):
        if wanted and not ok:
            raise ProfileInfeasible(f"{tool_style} does not support {name}")
    if not t:
        raise ProfileInfeasible(f"{tool_style} is an obfuscated style; pick a technique")

    fields: dict = {
        "label": ProfileLabel(True, tool_style, t),
        "instruction_mix": dict(style["mix"]),
        "seed": seed,
    }
    if t.ir:
        fields["name_length_distribution"] = dict(style["ir_lengths"])
        fields["special_char_rate"] = style["ir_special"]
        fields["numeric_rate"] = style["ir_numeric"]
    if t.se:
        fields["string_profile"] = "encrypted-like"
    if t.cf:
        fields["junk_instruction_rate"] = style["junk"]
        mix = fields["instruction_mix"]
        mix["nop"] = mix.get("nop", 0.0) + 2.0
        mix["goto"] = mix.get("goto", 0.0) + 1.5
    fields.update(overrides)
    profile = GenerationProfile(**fields)
    profile.validate()
    return profile


def encrypted_length_range(tool_style: str) -> tuple[int, int]:
    """Length range of encrypted-like strings for a style (generic default
    for profiles built outside tool_style_profile)."""
    if tool_style in _STYLE:
        return _STYLE[tool_style]["enc_lengths"]
    return (8, 24)
