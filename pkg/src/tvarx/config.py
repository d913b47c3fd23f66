"""Run configuration: defaults, the key-value file format, and validation.

Config files are flat ``key = value`` lines; ``#`` starts a comment. Unknown
keys and out-of-range values are rejected with the offending line number.
The defaults reproduce the benchmark protocol: ARX(2, 2), horizon 160, noise
variance 0.01, 10th-order Butterworth input filter with cutoff 0.1, and a
20-point forgetting-factor grid spanning [0.1, 1].
"""

from dataclasses import dataclass, fields, replace

import numpy as np

from .exceptions import ConfigError

METHODS = ("RARX", "VF", "DI", "TC", "CS")

GRID_DEFAULT = tuple(np.linspace(0.1, 1.0, 20))


def default_grid():
    """Twenty evenly spaced forgetting factors on [0.1, 1]."""
    return np.asarray(GRID_DEFAULT)


@dataclass(frozen=True)
class RunConfig:
    """Everything a simulation or study needs besides seeds."""

    n: int = 2
    m: int = 2
    N: int = 160
    sigma2: float = 0.01
    filter_order: int = 10
    filter_cutoff: float = 0.4
    bank: str = "default"
    grid: tuple = GRID_DEFAULT
    runs: int = 50
    master_seed: int = 1
    methods: tuple = METHODS
    delta: float = 100.0
    jobs: int = 1

    def __post_init__(self):
        _validate(self)

    @property
    def grid_array(self):
        return np.asarray(self.grid, dtype=float)


def _validate(cfg):
    def fail(name, msg):
        raise ConfigError(f"{name}: {msg}")

    if cfg.n < 0 or cfg.m < 0 or cfg.n + cfg.m < 1:
        fail("n/m", f"orders must be non-negative with n + m >= 1, got n={cfg.n}, m={cfg.m}")
    if cfg.N < 16:
        fail("N", f"horizon must be at least 16, got {cfg.N}")
    if cfg.sigma2 < 0:
        fail("sigma2", f"noise variance must be non-negative, got {cfg.sigma2}")
    if cfg.filter_order < 2 or cfg.filter_order % 2:
        fail("filter_order", f"must be a positive even integer, got {cfg.filter_order}")
    if not (0.0 < cfg.filter_cutoff < 1.0):
        fail("filter_cutoff", f"must lie in (0, 1), got {cfg.filter_cutoff}")
    if cfg.bank not in ("default", "regenerate"):
        fail("bank", f"must be 'default' or 'regenerate', got {cfg.bank!r}")
    grid = np.asarray(cfg.grid, dtype=float)
    if grid.size == 0:
        fail("grid", "must not be empty")
    if np.any(grid <= 0.0) or np.any(grid > 1.0):
        fail("grid", f"values must lie in (0, 1], got {grid.tolist()}")
    if cfg.runs < 1:
        fail("runs", f"must be at least 1, got {cfg.runs}")
    unknown = [mth for mth in cfg.methods if mth not in METHODS]
    if unknown:
        fail("methods", f"unknown method(s) {unknown}; valid: {list(METHODS)}")
    if not cfg.methods:
        fail("methods", "must not be empty")
    if cfg.delta <= 0:
        fail("delta", f"must be positive, got {cfg.delta}")
    if cfg.jobs < 1:
        fail("jobs", f"must be at least 1, got {cfg.jobs}")


def parse_grid_spec(text):
    """Parse a grid flag: 'start:stop:count' or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            start_s, stop_s, count_s = text.split(":")
            start, stop, count = float(start_s), float(stop_s), int(count_s)
            if count < 1:
                raise ValueError("count must be >= 1")
            return tuple(np.linspace(start, stop, count))
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"grid: cannot parse {text!r} ({exc})") from None


def parse_methods_spec(text):
    methods = tuple(tok.strip().upper() for tok in text.split(",") if tok.strip())
    return methods


_INT_KEYS = {"n", "m", "N", "filter_order", "runs", "master_seed", "jobs"}
_FLOAT_KEYS = {"sigma2", "filter_cutoff", "delta"}


def parse_config_file(path):
    """Read a key-value config file into a RunConfig."""
    known = {f.name for f in fields(RunConfig)}
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                if key in _INT_KEYS:
                    values[key] = int(val)
                elif key in _FLOAT_KEYS:
                    values[key] = float(val)
                elif key == "grid":
                    values[key] = parse_grid_spec(val)
                elif key == "methods":
                    values[key] = parse_methods_spec(val)
                else:
                    values[key] = val
            except ConfigError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: cannot parse value for {key!r}: {val!r}") from None
    try:
        return RunConfig(**values)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def with_overrides(cfg, **overrides):
    """A copy of ``cfg`` with non-None overrides applied (re-validated)."""
    updates = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **updates) if updates else cfg
