"""Scenario configuration: TOML files, named figure presets, canonical dump.

A config file is flat TOML with a few top-level keys and one table per
parameter block::

    scenario = "fig4"          # fig2..fig8 or custom
    kind = "map"               # custom only: map | detuning | length
    coefficients = "rederived" # or "as-printed"
    sign = "physical"          # or "as-printed"
    vortex_square = "hermitian"  # or "analytic"
    output_dir = "out"

    [atom]           gamma3, gamma4, gamma2
    [detuning]       delta_p, delta_c, delta_lg
    [beam]           omega, waist, l1, l2
    [standing_wave]  omega_c0
    [diffraction]    period_over_wavelength, slit_count, length_over_xi, max_order
    [grid]           half_extent, points_per_axis
    [sweep]          detuning_half_range, detuning_points, length_max,
                     length_points, point_r, point_phi, windings

Every key is optional except ``scenario``; missing keys take the preset's
value. Named presets pin the parameters stated for the corresponding figure;
changing one of those requires ``scenario = "custom"``.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from .atomic import AtomParams, CoefficientSource, DriveConfig, SignConvention, VortexSquare
from .diffraction import DiffractionConfig, Flags
from .errors import ParseError, ValidationError
from .fields import CompositeVortex, GridSpec, StandingWave

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCENARIO_NAMES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "custom")
KINDS = ("map", "detuning", "length")


@dataclass(frozen=True)
class SweepSpec:
    """Axes for detuning scans (fig2) and interaction-length sweeps (fig8).

    Detuning scans evaluate a single vortex term (winding ``l1`` only) at
    the polar point (point_r, point_phi); at the default point_r = 0 with
    l1 = 0 that is simply Omega_LG = Omega.
    """

    detuning_half_range: float = 3.0
    detuning_points: int = 121
    length_max: float = 100.0
    length_points: int = 501
    point_r: float = 1.0
    point_phi: float = math.pi / 4
    windings: tuple[int, ...] = (0, 1, 2)

    def __post_init__(self):
        if not self.detuning_half_range > 0:
            raise ValidationError("detuning_half_range must be > 0")
        if int(self.detuning_points) != self.detuning_points or self.detuning_points < 2:
            raise ValidationError("detuning_points must be an integer >= 2")
        if not self.length_max >= 0:
            raise ValidationError("length_max must be >= 0")
        if int(self.length_points) != self.length_points or self.length_points < 2:
            raise ValidationError("length_points must be an integer >= 2")
        if not self.point_r >= 0:
            raise ValidationError("point_r must be >= 0")
        if not self.windings or any(int(w) != w for w in self.windings):
            raise ValidationError("windings must be a non-empty list of integers")


@dataclass(frozen=True)
class Scenario:
    name: str
    kind: str
    atom: AtomParams = field(default_factory=AtomParams)
    detuning: DriveConfig = field(default_factory=DriveConfig)
    beam: CompositeVortex = field(default_factory=CompositeVortex)
    sw: StandingWave = field(default_factory=StandingWave)
    diffraction: DiffractionConfig = field(default_factory=DiffractionConfig)
    grid: GridSpec = field(default_factory=GridSpec)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    flags: Flags = field(default_factory=Flags)
    output_dir: str = "out"

    def __post_init__(self):
        if self.name not in SCENARIO_NAMES:
            raise ValidationError(f"unknown scenario {self.name!r}; expected one of {SCENARIO_NAMES}")
        if self.kind not in KINDS:
            raise ValidationError(f"unknown kind {self.kind!r}; expected one of {KINDS}")


def _preset(name, kind, *, dp=0.0, dc=0.0, dlg=0.0, omega, omega_c0, length=50.0, l1=0, l2=0,
            max_order=3, point_r=1.0):
    return Scenario(
        name=name,
        kind=kind,
        detuning=DriveConfig(delta_p=dp, delta_c=dc, delta_lg=dlg),
        beam=CompositeVortex(omega=omega, l1=l1, l2=l2),
        sw=StandingWave(omega_c0=omega_c0),
        diffraction=DiffractionConfig(length_over_xi=length, max_order=max_order),
        sweep=SweepSpec(point_r=point_r),
    )


PRESETS = {
    "fig2": _preset("fig2", "detuning", omega=1.5, omega_c0=0.5, point_r=0.0),
    "fig3": _preset("fig3", "map", dc=-1.0, dlg=2.0, omega=1.1, omega_c0=0.5, l1=4, l2=-1),
    "fig4": _preset("fig4", "map", omega=1.5, omega_c0=0.2, max_order=2),
    "fig5": _preset("fig5", "map", omega=1.5, omega_c0=0.2, l1=2, l2=-2, max_order=2),
    "fig6": _preset("fig6", "map", dc=-1.0, dlg=2.0, omega=1.5, omega_c0=0.5),
    "fig7": _preset("fig7", "map", dc=-1.0, dlg=2.0, omega=1.5, omega_c0=0.5, l1=2, l2=-2),
    "fig8": _preset("fig8", "length", omega=1.5, omega_c0=0.2),
    "custom": _preset("custom", "map", omega=1.5, omega_c0=0.2, max_order=2),
}

# parameters stated for each figure; presets refuse to change them
_PINNED_KEYS = {
    "detuning": ("delta_p", "delta_c", "delta_lg"),
    "beam": ("omega", "l1", "l2"),
    "standing_wave": ("omega_c0",),
    "diffraction": ("length_over_xi",),
}
_FIG8_PINNED = {"sweep": ("point_r", "point_phi")}

_SECTIONS = {
    "atom": ("atom", AtomParams),
    "detuning": ("detuning", DriveConfig),
    "beam": ("beam", CompositeVortex),
    "standing_wave": ("sw", StandingWave),
    "diffraction": ("diffraction", DiffractionConfig),
    "grid": ("grid", GridSpec),
    "sweep": ("sweep", SweepSpec),
}
_SECTION_KEYS = {
    "atom": ("gamma3", "gamma4", "gamma2"),
    "detuning": ("delta_p", "delta_c", "delta_lg"),
    "beam": ("omega", "waist", "l1", "l2"),
    "standing_wave": ("omega_c0",),
    "diffraction": ("period_over_wavelength", "slit_count", "length_over_xi", "max_order"),
    "grid": ("half_extent", "points_per_axis"),
    "sweep": (
        "detuning_half_range",
        "detuning_points",
        "length_max",
        "length_points",
        "point_r",
        "point_phi",
        "windings",
    ),
}
_INT_KEYS = {"l1", "l2", "slit_count", "max_order", "points_per_axis", "detuning_points", "length_points"}
_FLAG_KEYS = {
    "coefficients": ("coefficients", CoefficientSource),
    "sign": ("sign", SignConvention),
    "vortex_square": ("vortex", VortexSquare),
}
_TOP_KEYS = ("scenario", "kind", "output_dir", *_FLAG_KEYS)


def _coerce(section, key, value):
    if key == "windings":
        if not isinstance(value, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in value
        ):
            raise ValidationError(f"[{section}] windings must be a list of integers")
        return tuple(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"[{section}] {key} must be a number, got {value!r}")
    if key in _INT_KEYS:
        if not isinstance(value, int):
            raise ValidationError(f"[{section}] {key} must be an integer, got {value!r}")
        return value
    return float(value)


def scenario_from_mapping(data: dict, scenario_override: str | None = None) -> Scenario:
    name = scenario_override or data.get("scenario")
    if name is None:
        raise ValidationError("scenario missing: set scenario = \"fig2\"..\"fig8\" or \"custom\"")
    if not isinstance(name, str) or name not in PRESETS:
        raise ValidationError(f"unknown scenario {name!r}; expected one of {SCENARIO_NAMES}")
    for key, value in data.items():
        if isinstance(value, dict):
            if key not in _SECTIONS:
                raise ValidationError(f"unknown section [{key}]")
            for sub in value:
                if sub not in _SECTION_KEYS[key]:
                    raise ValidationError(f"unknown key {sub!r} in [{key}]")
        elif key not in _TOP_KEYS:
            raise ValidationError(f"unknown key {key!r}")

    base = PRESETS[name]
    kind = data.get("kind", base.kind)
    if name != "custom" and kind != base.kind:
        raise ValidationError(f"scenario {name} is a {base.kind} run; kind can only change for custom")

    changes = {"kind": kind}
    for section, (attr, cls) in _SECTIONS.items():
        given = data.get(section, {})
        if not given:
            continue
        current = getattr(base, attr)
        values = {k: _coerce(section, k, v) for k, v in given.items()}
        if name != "custom":
            fixed = _PINNED_KEYS.get(section, ())
            if name == "fig8":
                fixed = fixed + _FIG8_PINNED.get(section, ())
            for k in fixed:
                if k in values and values[k] != getattr(current, k):
                    raise ValidationError(
                        f"[{section}] {k} is fixed by the {name} preset "
                        f"({getattr(current, k)!r}); use scenario = \"custom\" to change it"
                    )
        try:
            changes[attr] = replace(current, **values)
        except TypeError as exc:  # pragma: no cover - keys are prevalidated
            raise ValidationError(str(exc)) from exc

    flag_values = {}
    for key, (attr, enum_cls) in _FLAG_KEYS.items():
        if key in data:
            try:
                flag_values[attr] = enum_cls(data[key])
            except ValueError:
                allowed = ", ".join(e.value for e in enum_cls)
                raise ValidationError(f"{key} must be one of: {allowed}") from None
    if flag_values:
        changes["flags"] = replace(base.flags, **flag_values)
    if "output_dir" in data:
        if not isinstance(data["output_dir"], str):
            raise ValidationError("output_dir must be a string")
        changes["output_dir"] = data["output_dir"]
    return replace(base, **changes)


def _location(exc, text):
    line = getattr(exc, "lineno", None)
    col = getattr(exc, "colno", None)
    if line is None:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        if m:
            line, col = int(m.group(1)), int(m.group(2))
    return line, col


def loads_config(text: str, scenario_override: str | None = None) -> Scenario:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line, col = _location(exc, text)
        msg = getattr(exc, "msg", str(exc))
        raise ParseError(msg, line, col) from None
    return scenario_from_mapping(data, scenario_override)


def load_config(path, scenario_override: str | None = None) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from exc
    return loads_config(text, scenario_override)


def _toml_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            raise ValidationError(f"cannot write non-finite value {v}")
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (tuple, list)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"unsupported value {v!r}")


def dump_config(s: Scenario) -> str:
    """Canonical TOML form; ``loads_config(dump_config(s)) == s``."""
    lines = [
        f"scenario = {_toml_value(s.name)}",
        f"kind = {_toml_value(s.kind)}",
        f"coefficients = {_toml_value(s.flags.coefficients.value)}",
        f"sign = {_toml_value(s.flags.sign.value)}",
        f"vortex_square = {_toml_value(s.flags.vortex.value)}",
        f"output_dir = {_toml_value(s.output_dir)}",
    ]
    for section, (attr, _) in _SECTIONS.items():
        obj = getattr(s, attr)
        lines.append("")
        lines.append(f"[{section}]")
        for key in _SECTION_KEYS[section]:
            value = getattr(obj, key)
            if key not in _INT_KEYS and key != "windings":
                value = float(value)
            lines.append(f"{key} = {_toml_value(value)}")
    return "\n".join(lines) + "\n"

