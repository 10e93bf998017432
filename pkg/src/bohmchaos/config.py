"""Flat ``key = value`` run configuration.

Unknown keys are rejected with the offending line number.  Ladder keys
take the form ``ladder.<param> = v1, v2, ...`` where ``<param>`` is one of
``A``, ``a``, ``a0``, ``a1``, ``lam``, ``mu`` or ``lam_mu``; the literal
``inf`` on an ``A``/``a`` ladder selects the limit-form field.
"""
from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass, field

from .dynamics import IntegratorConfig
from .errors import ConfigError
from .fields import KINDS, FieldModel

LADDER_PARAMS = ("A", "a", "a0", "a1", "lam", "mu", "lam_mu")

# documented default seeds; the figure captions give none
DEFAULT_SEEDS = {
    "harmonic": (1.98, 0.0),
    "isospectral": (1.98, 0.0),
    "harmonic_limit": (1.0, 0.0),
    "square_well": (math.pi / 2, math.pi / 2 - 0.3),
    "square_well_limit": (math.pi / 2, math.pi / 2 - 0.3),
}

LIMIT_OF = {"harmonic": "harmonic_limit", "square_well": "square_well_limit"}


@dataclass
class RunConfig:
    model: str = "harmonic"
    a0: float = 2.03
    a1: float = 1.97
    lam: float = math.inf
    mu: float = math.inf
    x0: float | None = None
    y0: float | None = None
    t_end: float = 50000.0
    dt: float = 1e-3
    strobe_align: bool = False
    max_speed: float = 1e3
    stride: int = 1
    d0: float = 1e-9
    renorm_interval: float = 1.0
    ensemble: int = 1
    ensemble_spread: float = 0.1
    seed: int = 0
    ratio0: float = 1.015
    ratio1: float = 0.985
    sweep_task: str = "strobe"
    svg_extent: float | None = None
    ladder: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.model not in KINDS:
            raise ConfigError(f"model: unknown variant {self.model!r} (choose from {', '.join(KINDS)})")
        if self.sweep_task not in ("strobe", "lyapunov", "both"):
            raise ConfigError("sweep_task: must be strobe, lyapunov or both")
        if self.ensemble < 1:
            raise ConfigError("ensemble: must be >= 1")
        for name in self.ladder:
            if name not in LADDER_PARAMS:
                raise ConfigError(f"ladder.{name}: not a ladder parameter ({', '.join(LADDER_PARAMS)})")
        try:
            self.field_model()
            self.integrator()
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def p0(self) -> tuple[float, float]:
        sx, sy = DEFAULT_SEEDS[self.model]
        return (sx if self.x0 is None else self.x0, sy if self.y0 is None else self.y0)

    def field_model(self) -> FieldModel:
        return FieldModel(self.model, self.a0, self.a1, self.lam, self.mu)

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(self.dt, self.t_end, self.strobe_align, self.max_speed, self.stride)

    def effective(self) -> "RunConfig":
        """Copy with defaulted seeds filled in."""
        x0, y0 = self.p0
        return dataclasses.replace(self, x0=x0, y0=y0, ladder=dict(self.ladder))

    def points(self) -> list[tuple[dict, "RunConfig | ConfigError"]]:
        """Expand the ladder into (ladder values, point config) pairs.

        A point whose parameters are invalid carries the ConfigError in
        place of its config so the rest of the ladder can still run.
        """
        if not self.ladder:
            return [({}, self)]
        names = list(self.ladder)
        out = []
        for combo in itertools.product(*(self.ladder[n] for n in names)):
            values = dict(zip(names, combo))
            try:
                out.append((values, self._apply(values)))
            except ConfigError as exc:
                out.append((values, exc))
        return out

    def _apply(self, values: dict) -> "RunConfig":
        kw: dict = {"ladder": {}}
        for name, v in values.items():
            if name == "A" or name == "a":
                r0, r1 = (self.ratio0, self.ratio1) if name == "A" else (1.0, 1.0)
                if math.isinf(v):
                    base = self.model.replace("_limit", "")
                    if base not in LIMIT_OF:
                        raise ConfigError(f"ladder.{name}: model {self.model} has no limit form")
                    s = math.copysign(1.0, v)
                    kw.update(model=LIMIT_OF[base], a0=s * r0, a1=s * r1)
                else:
                    kw.update(a0=r0 * v, a1=r1 * v)
            elif name == "lam_mu":
                kw.update(lam=v, mu=v)
            else:
                kw[name] = v
        if "model" in kw and self.x0 is None:
            # keep the seed of the family the ladder started from
            kw.update(x0=self.p0[0], y0=self.p0[1])
        return dataclasses.replace(self, **kw)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig) if f.name != "ladder"}


def _convert(name: str, raw: str):
    raw = raw.strip()
    kind = _FIELDS[name].type
    if raw.lower() in ("none", "") and "None" in kind:
        return None
    if kind.startswith("float"):
        return float(raw)
    if kind.startswith("int"):
        return int(raw)
    if kind == "bool":
        low = raw.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    return raw


def parse_ladder(raw: str) -> list[float]:
    vals = [float(tok) for tok in raw.replace(",", " ").split()]
    if not vals:
        raise ValueError("empty ladder")
    return vals


def parse_pairs(pairs, where="") -> dict:
    """Turn (line number or label, key, raw value) triples into RunConfig kwargs."""
    kw: dict = {"ladder": {}}
    for loc, key, raw in pairs:
        key = key.strip()
        prefix = f"{where}{loc}: " if loc is not None else ""
        try:
            if key.startswith("ladder."):
                kw["ladder"][key[len("ladder."):]] = parse_ladder(raw)
            elif key in _FIELDS:
                kw[key] = _convert(key, raw)
            else:
                raise ConfigError(f"unknown key {key!r}")
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"{prefix}{key}: {exc}") from None
    return kw


def read_pairs(text: str, where: str = "line "):
    pairs = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{where}{n}: expected 'key = value'")
        key, raw = line.split("=", 1)
        pairs.append((n, key, raw))
    return pairs


def load(text: str = "", overrides: list[str] = (), **extra) -> RunConfig:
    """Parse config text, then apply ``key=value`` overrides and ``extra``."""
    kw = parse_pairs(read_pairs(text), "line ")
    over = []
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key=value")
        k, v = item.split("=", 1)
        over.append(("--set", k, v))
    okw = parse_pairs([(None, k, v) for _, k, v in over])
    kw["ladder"].update(okw.pop("ladder"))
    kw.update(okw)
    kw.update({k: v for k, v in extra.items() if v is not None})
    try:
        return RunConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return "none"
    return str(v)


def dump(cfg: RunConfig) -> str:
    lines = [f"{name} = {_fmt(getattr(cfg, name))}" for name in _FIELDS]
    for name, vals in cfg.ladder.items():
        lines.append(f"ladder.{name} = " + ", ".join(repr(float(v)) for v in vals))
    return "\n".join(lines) + "\n"
