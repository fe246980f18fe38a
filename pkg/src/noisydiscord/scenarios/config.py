"""Run configuration and its flat ``key = value`` file format.

Example::

    # Phi+ under both global noises
    initial = bell:phi_plus
    gamma_delta = 0.05
    gamma_omega = 0.05
    topology = global
    t_end = 400
    record_every = 100

``initial`` takes ``product:<gg|ee|eg|ge>``, ``bell:<name>``,
``alpha:<family>:<alpha>``, ``beta:<beta>``, ``c_class:<plus|minus>:<c>``
(``c`` may be complex, e.g. ``0.1+0.05j``) or ``werner:<epsilon>``.
All physical quantities are in units of omega.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import qstate
from ..noisedyn import ConfigError, EvolutionConfig
from ..qstate import DomainError, HamiltonianParams, NoiseConfig, Topology


class ParseError(ConfigError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


class ValidationError(ConfigError):
    def __init__(self, fieldname: str, message: str):
        super().__init__(f"invalid {fieldname}: {message}")
        self.field = fieldname


@dataclass(frozen=True)
class InitialState:
    kind: str
    args: tuple = ()

    _KINDS = {
        "product": (qstate.make_product, (str,)),
        "bell": (qstate.make_bell, (str,)),
        "alpha": (qstate.make_alpha_state, (str, float)),
        "beta": (qstate.make_beta_state, (float,)),
        "c_class": (qstate.make_c_class, (str, complex)),
        "werner": (qstate.make_werner, (float,)),
    }

    @classmethod
    def parse(cls, text: str) -> "InitialState":
        kind, *raw = [t.strip() for t in text.split(":")]
        if kind not in cls._KINDS:
            raise ValidationError("initial", f"unknown state kind {kind!r}")
        types = cls._KINDS[kind][1]
        if len(raw) != len(types):
            raise ValidationError("initial", f"{kind} takes {len(types)} argument(s), got {len(raw)}")
        try:
            args = tuple(t(r.replace(" ", "")) for t, r in zip(types, raw))
        except ValueError as exc:
            raise ValidationError("initial", str(exc)) from None
        state = cls(kind, args)
        state.build()
        return state

    def build(self) -> np.ndarray:
        factory = self._KINDS[self.kind][0]
        try:
            return factory(*self.args)
        except DomainError as exc:
            raise ValidationError("initial", str(exc)) from None

    def __str__(self):
        return ":".join([self.kind, *map(str, self.args)])


@dataclass(frozen=True)
class RunConfig:
    initial_state: InitialState
    hamiltonian: HamiltonianParams = field(default_factory=HamiltonianParams)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    evolution: EvolutionConfig | None = None
    output_path: str | None = None


_FLOAT_KEYS = ("gamma_delta", "gamma_omega", "delta0", "omega0", "t_end", "dt")
KEYS = ("initial", "topology", "record_every", "output", *_FLOAT_KEYS)


def _to_float(name, text):
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(name, f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ValidationError(name, f"must be finite, got {text!r}")
    return value


def build_config(values: dict[str, str]) -> RunConfig:
    """Validate raw string values into a RunConfig."""
    unknown = set(values) - set(KEYS)
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown key")
    if "initial" not in values:
        raise ValidationError("initial", "missing required key")
    initial = InitialState.parse(values["initial"])
    num = {k: _to_float(k, values[k]) for k in _FLOAT_KEYS if k in values}

    for k in ("gamma_delta", "gamma_omega"):
        if num.get(k, 0.0) < 0:
            raise ValidationError(k, f"noise strength must be >= 0, got {num[k]}")
    topology = values.get("topology", "global")
    try:
        topology = Topology(topology)
    except ValueError:
        raise ValidationError("topology", f"expected 'global' or 'local', got {topology!r}") from None
    noise = NoiseConfig(num.get("gamma_delta", 0.0), num.get("gamma_omega", 0.0), topology)
    ham = HamiltonianParams(num.get("delta0", 0.0), num.get("omega0", 0.0))
    if topology is Topology.LOCAL and not ham.is_zero:
        raise ValidationError("delta0", "the local-noise model has no coherent term; use 0")

    evolution = None
    if "t_end" in num:
        every = values.get("record_every", "1")
        try:
            every = int(every)
        except ValueError:
            raise ValidationError("record_every", f"not an integer: {every!r}") from None
        try:
            evolution = EvolutionConfig(num["t_end"], num.get("dt"), every)
        except ValueError as exc:
            name = "t_end" if "t_end" in str(exc) else "dt" if "dt" in str(exc) else "record_every"
            raise ValidationError(name, str(exc)) from None
    elif "dt" in values or "record_every" in values:
        raise ValidationError("t_end", "required when dt or record_every is given")
    return RunConfig(initial, ham, noise, evolution, values.get("output"))


def parse_config(path) -> RunConfig:
    """Read a ``key = value`` file; ``#`` starts a comment."""
    path = Path(path)
    values: dict[str, str] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(path, lineno, f"expected 'key = value', got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in KEYS:
                raise ParseError(path, lineno, f"unknown key {key!r}")
            if key in values:
                raise ParseError(path, lineno, f"duplicate key {key!r}")
            if not value:
                raise ParseError(path, lineno, f"empty value for {key!r}")
            values[key] = value
    return build_config(values)
