"""Experiment configuration: scenario dimensions, presets, config files.

Config files are flat ``key = value`` text, one pair per line, ``#`` for
comments. Keys mirror the SystemConfig fields exactly; unknown keys are
rejected.
"""

import math
from dataclasses import dataclass, fields, replace

from .receivers import check_identifiability

RECEIVERS = ("tals", "etals", "etals_no_refine")
CHANNEL_MODELS = ("rayleigh", "geometric")
DESIGNS = ("dft", "random_phase")

PRESETS = ("fig4", "fig5", "fig7", "fig8", "fig11", "fig12", "fig13")

_DEFAULT_SNR_GRID = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)


@dataclass(frozen=True)
class SystemConfig:
    """Full description of one Monte Carlo experiment.

    M: BS antennas, L: UT antennas/streams, N: IRS elements, T: symbol
    periods per block, K: total blocks (split into K1 direct-only + K2
    assisted blocks for the two-stage receiver). alpha_db is the power gap
    of the direct link below the assisted link.
    """

    M: int
    L: int
    N: int
    T: int
    K: int
    K1: int = 0
    K2: int = 0
    snr_grid: tuple = _DEFAULT_SNR_GRID
    alpha_db: float = 0.0
    channel_model: str = "rayleigh"
    paths_h: int = 1
    paths_g: int = 1
    design: str = "dft"
    receiver: str = "tals"
    runs: int = 200
    base_seed: int = 1234
    delta: float = 1e-5
    max_iters: int = 1000

    @property
    def uses_direct_link(self):
        return self.receiver in ("etals", "etals_no_refine")

    @property
    def assisted_blocks(self):
        """Blocks of the IRS-assisted window (K2 for two-stage, else K)."""
        return self.K2 if self.uses_direct_link else self.K

    def validate(self):
        """Collect every problem; raise ValueError listing all of them."""
        problems = []
        for name in ("M", "L", "N", "T", "K"):
            if getattr(self, name) < 1:
                problems.append(f"{name} must be >= 1")
        if self.T < 2:
            problems.append("T must be >= 2 (row 0 of the symbol matrix is the pilot)")
        if self.receiver not in RECEIVERS:
            problems.append(f"receiver must be one of {RECEIVERS}, got {self.receiver!r}")
        if self.channel_model not in CHANNEL_MODELS:
            problems.append(
                f"channel_model must be one of {CHANNEL_MODELS}, got {self.channel_model!r}"
            )
        if self.design not in DESIGNS:
            problems.append(f"design must be one of {DESIGNS}, got {self.design!r}")
        if self.channel_model == "geometric" and (self.paths_h < 1 or self.paths_g < 1):
            problems.append("geometric model needs paths_h, paths_g >= 1")
        if not self.snr_grid:
            problems.append("snr_grid must not be empty")
        if not (self.alpha_db >= 0):
            problems.append("alpha_db must be >= 0")
        if self.uses_direct_link and not math.isfinite(self.alpha_db):
            problems.append("alpha_db must be finite for the two-stage receiver")
        if self.runs < 1:
            problems.append("runs must be >= 1")
        if self.delta <= 0:
            problems.append("delta must be > 0")
        if self.max_iters < 1:
            problems.append("max_iters must be >= 1")
        if self.uses_direct_link:
            if self.K1 + self.K2 != self.K:
                problems.append(
                    f"K1 + K2 must equal K ({self.K1} + {self.K2} != {self.K})"
                )
            if self.K1 < self.L:
                problems.append(f"K1 >= L required for stage one ({self.K1} < {self.L})")
            report = check_identifiability(
                self.M, self.L, self.N, self.T, self.K2, k1=self.K1
            )
        else:
            report = check_identifiability(self.M, self.L, self.N, self.T, self.K)
        problems.extend(report.violations)
        if problems:
            raise ValueError("invalid config:\n- " + "\n- ".join(problems))
        return self


def preset(name, runs=None):
    """Named parameter sets for the reference experiments, at desk scale
    (runs defaults to 200; pass `runs` to override)."""
    if name == "fig4":
        cfg = SystemConfig(
            M=5, L=2, N=64, T=5, K=128,
            channel_model="geometric", paths_h=1, paths_g=1,
            design="dft", receiver="tals",
        )
    elif name == "fig5":
        cfg = SystemConfig(
            M=5, L=2, N=64, T=2, K=128,
            channel_model="geometric", paths_h=1, paths_g=1,
            design="dft", receiver="tals",
        )
    elif name == "fig7":
        # Reduced-training regime: L*N exceeds K2, so the orthogonal design
        # is infeasible and the builder falls back to random phases.
        cfg = SystemConfig(
            M=5, L=2, N=64, T=5, K=80, K1=16, K2=64,
            channel_model="geometric", paths_h=3, paths_g=2,
            design="dft", receiver="etals_no_refine", alpha_db=0.0,
        )
    elif name == "fig8":
        cfg = SystemConfig(
            M=10, L=2, N=70, T=5, K=150, K1=10, K2=140,
            design="dft", receiver="etals", alpha_db=0.0,
        )
    elif name == "fig11":
        cfg = SystemConfig(
            M=10, L=2, N=50, T=5, K=150, K1=10, K2=140,
            design="dft", receiver="etals", alpha_db=20.0,
        )
    elif name == "fig12":
        cfg = SystemConfig(
            M=10, L=2, N=50, T=5, K=150, K1=10, K2=140,
            design="dft", receiver="etals", alpha_db=0.0,
        )
    elif name == "fig13":
        cfg = SystemConfig(
            M=5, L=2, N=16, T=5, K=64,
            design="random_phase", receiver="tals",
        )
    else:
        raise ValueError(f"unknown preset {name!r}; valid presets: {', '.join(PRESETS)}")
    if runs is not None:
        cfg = replace(cfg, runs=runs)
    return cfg


_FIELD_TYPES = {f.name: f.type for f in fields(SystemConfig)}
_INT_FIELDS = {"M", "L", "N", "T", "K", "K1", "K2", "paths_h", "paths_g",
               "runs", "base_seed", "max_iters"}
_FLOAT_FIELDS = {"alpha_db", "delta"}
_STR_FIELDS = {"channel_model", "design", "receiver"}


def parse_config_text(text):
    """Parse flat ``key = value`` config text into a SystemConfig."""
    values = {}
    errors = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {raw!r}")
            continue
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key in _INT_FIELDS:
            try:
                values[key] = int(val)
            except ValueError:
                errors.append(f"line {lineno}: {key} needs an integer, got {val!r}")
        elif key in _FLOAT_FIELDS:
            try:
                values[key] = float(val)
            except ValueError:
                errors.append(f"line {lineno}: {key} needs a number, got {val!r}")
        elif key in _STR_FIELDS:
            values[key] = val
        elif key == "snr_grid":
            try:
                values[key] = tuple(float(v) for v in val.split(",") if v.strip())
            except ValueError:
                errors.append(f"line {lineno}: snr_grid needs comma-separated numbers")
        else:
            errors.append(f"line {lineno}: unknown key {key!r}")
    if errors:
        raise ValueError("bad config file:\n- " + "\n- ".join(errors))
    missing = [k for k in ("M", "L", "N", "T", "K") if k not in values]
    if missing:
        raise ValueError("config file missing required keys: " + ", ".join(missing))
    return SystemConfig(**values)


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())
