"""Run configuration: a flat sectioned key-value format with full defaults.

Every field can also be set from the command line; flags win over the file.
The serialized form round-trips exactly (floats via repr).
"""

import configparser
import io
from dataclasses import dataclass, fields

from .errors import ConfigurationError

DEFAULT_STATES = "gauss:0,0,1;fock:0;fock:1;fock:2;fock:3;fockcat:0,1;gausscat:2,0.75"


@dataclass
class ExperimentConfig:
    # grid
    x_min: float = -12.0
    x_max: float = 12.0
    n_points: int = 1024
    hbar: float = 1.0
    # state command
    state: str = "gauss:0,0,1"
    # sweep
    states: str = DEFAULT_STATES
    directions: str = "auto:12"
    oversample: int = 8
    # protocol
    protocol: int = 1
    rounds: int = 50
    runs: int = 1
    seed: int = 20260810
    skeptic: str = "lln"
    skeptic_f: str = "z"
    skeptic_c: float = 15.0
    skeptic_depth: int = 4
    forecaster: str = "honest"
    reality: str = "faithful"
    # quadrature command
    a: float = 1.0
    b: float = 0.0
    # output
    out_dir: str = "out"

    _SECTIONS = {
        "grid": ("x_min", "x_max", "n_points", "hbar"),
        "state": ("state",),
        "sweep": ("states", "directions", "oversample"),
        "protocol": ("protocol", "rounds", "runs", "seed", "skeptic", "skeptic_f",
                     "skeptic_c", "skeptic_depth", "forecaster", "reality"),
        "quadrature": ("a", "b"),
        "output": ("out_dir",),
    }

    def to_ini(self) -> str:
        parser = configparser.ConfigParser()
        by_name = {f.name: getattr(self, f.name) for f in fields(self)}
        for section, names in self._SECTIONS.items():
            parser[section] = {name: repr(by_name[name]) if isinstance(by_name[name], float)
                               else str(by_name[name]) for name in names}
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text: str) -> "ExperimentConfig":
        parser = configparser.ConfigParser()
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigurationError(f"bad config file: {exc}") from exc
        kwargs = {}
        by_name = {"float": float, "int": int, "str": str}
        casts = {f.name: (f.type if isinstance(f.type, type) else by_name[str(f.type)])
                 for f in fields(cls)}
        known = {name for names in cls._SECTIONS.values() for name in names}
        for section in parser.sections():
            if section not in cls._SECTIONS:
                raise ConfigurationError(f"unknown config section [{section}]")
            for key, raw in parser[section].items():
                if key not in known:
                    raise ConfigurationError(f"unknown config key {key!r} in [{section}]")
                try:
                    kwargs[key] = casts[key](raw)
                except ValueError as exc:
                    raise ConfigurationError(f"bad value for {key!r}: {raw!r}") from exc
        return cls(**kwargs)

    def state_list(self) -> list[str]:
        specs = [s.strip() for s in self.states.split(";") if s.strip()]
        if not specs:
            raise ConfigurationError("empty state list")
        return specs

    def direction_list(self) -> list[tuple[float, float]]:
        from .verify import sweep_directions

        text = self.directions.strip()
        if text.startswith("auto:"):
            try:
                count = int(text.split(":", 1)[1])
            except ValueError as exc:
                raise ConfigurationError(f"bad direction sweep {text!r}") from exc
            if count < 1:
                raise ConfigurationError("direction count must be >= 1")
            return sweep_directions(count)
        pairs = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            parts = chunk.split(",")
            if len(parts) != 2:
                raise ConfigurationError(f"bad direction {chunk!r}; expected a,b")
            try:
                a, b = float(parts[0]), float(parts[1])
            except ValueError as exc:
                raise ConfigurationError(f"bad direction {chunk!r}") from exc
            if a == 0.0 and b == 0.0:
                raise ConfigurationError("direction (0, 0) is degenerate")
            pairs.append((a, b))
        if not pairs:
            raise ConfigurationError("empty direction list")
        return pairs


__all__ = ["ExperimentConfig", "DEFAULT_STATES"]
