"""Experiment description files.

A spec is a TOML document::

    kind = "power-sweep"        # power-sweep | size-sweep | threshold-sweep
    trials = 100000
    seed = 1

    [system]                    # SystemConfig fields
    nt = 4
    l = 20
    beta0 = 0.2
    ...

    [sweep]
    values = [0, 2, 4]          # or start / stop / step (inclusive)
    alphas = [0.1, 0.2]         # threshold-sweep only

    [output]
    path = "power.csv"
    gnuplot = false

TOML itself rejects duplicate keys. Unknown keys are rejected here.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from ..config import CONFIG_FIELDS, ConfigError, SystemConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 0

REQUIRED_SYSTEM_KEYS = ("nt", "beta0", "beta1", "beta2", "alpha", "alpha_f1", "alpha_f2")
_INT_FIELDS = ("nt", "l")
_GRID_FIELDS = ("psi1", "psi2")


class ExperimentKind(enum.Enum):
    POWER_SWEEP = "power-sweep"
    SIZE_SWEEP = "size-sweep"
    THRESHOLD_SWEEP = "threshold-sweep"

    @property
    def swept_field(self) -> str:
        return "l" if self is ExperimentKind.SIZE_SWEEP else "power_db"


@dataclass(frozen=True)
class ExperimentSpec:
    kind: ExperimentKind
    config: SystemConfig
    sweep_values: Tuple[float, ...]
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    output_path: Optional[Path] = None
    alphas: Optional[Tuple[float, ...]] = None
    gnuplot: bool = False

    def __post_init__(self):
        vals = tuple(self.sweep_values)
        if not vals:
            raise ConfigError("sweep.values", "must be nonempty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError("sweep.values", "must be strictly increasing")
        if self.kind is ExperimentKind.SIZE_SWEEP:
            if any(v != int(v) or v < 0 for v in vals):
                raise ConfigError("sweep.values", "RIS sizes must be nonnegative integers")
            vals = tuple(int(v) for v in vals)
        else:
            vals = tuple(float(v) for v in vals)
        object.__setattr__(self, "sweep_values", vals)
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise ConfigError("trials", f"must be a positive integer, got {self.trials!r}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not (0 <= self.seed < 2 ** 64):
            raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.alphas is not None:
            if self.kind is not ExperimentKind.THRESHOLD_SWEEP:
                raise ConfigError("sweep.alphas", "only valid for threshold-sweep")
            al = tuple(float(a) for a in self.alphas)
            if not al:
                raise ConfigError("sweep.alphas", "must be nonempty")
            for a in al:
                if not 0.0 <= a <= 1.0:
                    raise ConfigError("sweep.alphas", f"must lie in [0, 1], got {a!r}")
            object.__setattr__(self, "alphas", al)

    def config_at(self, value) -> SystemConfig:
        return self.config.replace(**{self.kind.swept_field: value})


def _number(key: str, v, integer: bool = False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(key, f"expected a number, got {v!r}")
    if integer and (not isinstance(v, int)):
        raise ConfigError(key, f"expected an integer, got {v!r}")
    return v


def _check_keys(section: str, table: dict, allowed) -> None:
    for key in table:
        if key not in allowed:
            where = f"{section}.{key}" if section else key
            raise ConfigError(where, "unknown key")


def system_from_table(table: dict, required=REQUIRED_SYSTEM_KEYS) -> SystemConfig:
    """Build a SystemConfig from a ``[system]`` table, naming bad keys on error."""
    _check_keys("system", table, CONFIG_FIELDS)
    for key in required:
        if key not in table:
            raise ConfigError(key, "missing required key")
    kwargs = {}
    for key, v in table.items():
        if key in _GRID_FIELDS:
            kwargs[key] = v
        else:
            kwargs[key] = _number(key, v, integer=key in _INT_FIELDS)
    return SystemConfig(**kwargs)


def _sweep_values(table: dict) -> Tuple[float, ...]:
    if "values" in table:
        if any(k in table for k in ("start", "stop", "step")):
            raise ConfigError("sweep.values", "give either values or start/stop/step")
        vals = table["values"]
        if not isinstance(vals, list):
            raise ConfigError("sweep.values", "expected a list")
        return tuple(_number("sweep.values", v) for v in vals)
    missing = [k for k in ("start", "stop", "step") if k not in table]
    if missing:
        raise ConfigError("sweep.values", "missing required key (or start/stop/step)")
    start, stop, step = (_number(f"sweep.{k}", table[k]) for k in ("start", "stop", "step"))
    if step <= 0:
        raise ConfigError("sweep.step", "must be positive")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    if n < 1:
        raise ConfigError("sweep.stop", "must not precede start")
    vals = [start + i * step for i in range(n)]
    if all(isinstance(x, int) for x in (start, step)):
        return tuple(int(v) for v in vals)
    return tuple(round(v, 12) for v in vals)


def parse_spec(doc: dict, kind: str | ExperimentKind | None = None, base_dir: Path | None = None) -> ExperimentSpec:
    _check_keys("", doc, ("kind", "trials", "seed", "system", "sweep", "output"))
    file_kind = doc.get("kind")
    if kind is not None:
        kind = ExperimentKind(kind) if not isinstance(kind, ExperimentKind) else kind
        if file_kind is not None and file_kind != kind.value:
            raise ConfigError("kind", f"file declares {file_kind!r}, command runs {kind.value!r}")
    elif file_kind is None:
        raise ConfigError("kind", "missing required key")
    else:
        try:
            kind = ExperimentKind(file_kind)
        except ValueError:
            raise ConfigError("kind", f"unknown experiment kind {file_kind!r}") from None

    system = doc.get("system", {})
    if not isinstance(system, dict):
        raise ConfigError("system", "expected a table")
    required = REQUIRED_SYSTEM_KEYS + tuple(
        k for k in ("l", "power_db") if k != kind.swept_field)
    system = dict(system)
    system.setdefault(kind.swept_field, 0 if kind is ExperimentKind.SIZE_SWEEP else 0.0)
    config = system_from_table(system, required)

    sweep = doc.get("sweep")
    if not isinstance(sweep, dict):
        raise ConfigError("sweep", "missing required key")
    _check_keys("sweep", sweep, ("values", "start", "stop", "step", "alphas"))
    alphas = sweep.get("alphas")
    if alphas is not None:
        if not isinstance(alphas, list):
            raise ConfigError("sweep.alphas", "expected a list")
        alphas = tuple(_number("sweep.alphas", a) for a in alphas)

    output = doc.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("output", "expected a table")
    _check_keys("output", output, ("path", "gnuplot"))
    path = output.get("path")
    if path is not None:
        if not isinstance(path, str):
            raise ConfigError("output.path", "expected a string")
        path = Path(path)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
    gnuplot = output.get("gnuplot", False)
    if not isinstance(gnuplot, bool):
        raise ConfigError("output.gnuplot", "expected true or false")

    return ExperimentSpec(
        kind=kind,
        config=config,
        sweep_values=_sweep_values(sweep),
        trials=_number("trials", doc.get("trials", DEFAULT_TRIALS), integer=True),
        seed=_number("seed", doc.get("seed", DEFAULT_SEED), integer=True),
        output_path=path,
        alphas=alphas,
        gnuplot=gnuplot,
    )


def read_toml(path) -> dict:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(path), f"parse error: {exc}") from None


def load_config(path, kind: str | ExperimentKind | None = None) -> ExperimentSpec:
    """Read and validate an experiment spec; relative output paths resolve against the file."""
    path = Path(path)
    return parse_spec(read_toml(path), kind=kind, base_dir=path.parent)


def load_system(path) -> SystemConfig:
    """Read only the ``[system]`` table of a spec file (sweep/output are ignored)."""
    doc = read_toml(path)
    _check_keys("", doc, ("kind", "trials", "seed", "system", "sweep", "output"))
    system = doc.get("system", {})
    if not isinstance(system, dict):
        raise ConfigError("system", "expected a table")
    return system_from_table(system)
