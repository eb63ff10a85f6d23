"""Run configuration: the INI schema shared by the CLI and the dump headers.

Sections and keys (scenario keys are required when a file stands alone;
everything else has defaults):

    [scenario] environment={inh|umi} frequency_ghz={28|73} wall={side|opposite}
               tx=x,y,z rx=x,y,z ris=x,y,z elements=N
               spacing=<m, empty for lambda/2> direct_link={true|false}
    [run]      realizations seed format={csv|binary} out jobs
    [rate]     pt_dbw_start pt_dbw_stop pt_dbw_step noise_dbm
               profiles=off,random,optimal
    [heatmap]  x_min x_max nx y_min y_max ny rx_height profile pt_dbw
    [pathloss] los_exponent los_sigma_db nlos_exponent nlos_sigma_db
               los_force_height
    [clusters] poisson_mean subray_min subray_max
"""

from __future__ import annotations

import configparser
import dataclasses
import io
from dataclasses import dataclass

from .channel import ChannelConfig
from .clusters import ClusterStatistics
from .geometry import Environment, Point3, Scenario, WallPlacement
from .propagation import PathLossModel

_REQUIRED_SCENARIO_KEYS = (
    "environment",
    "frequency_ghz",
    "wall",
    "tx",
    "rx",
    "ris",
    "elements",
)


class ConfigError(ValueError):
    """A configuration problem attributable to a specific key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class RunConfig:
    """Everything a command-line run needs, in file order."""

    environment: str = "inh"
    frequency_ghz: float = 28.0
    wall: str = "side"
    tx: tuple[float, float, float] = (0.0, 25.0, 2.0)
    rx: tuple[float, float, float] = (38.0, 48.0, 1.0)
    ris: tuple[float, float, float] = (40.0, 50.0, 2.0)
    elements: int = 256
    spacing: float | None = None
    direct_link: bool = True

    realizations: int = 1000
    seed: int | None = None
    format: str = "csv"
    out: str | None = None
    jobs: int = 1

    pt_dbw_start: float = -20.0
    pt_dbw_stop: float = 10.0
    pt_dbw_step: float = 5.0
    noise_dbm: float = -100.0
    profiles: tuple[str, ...] = ("off", "random", "optimal")

    x_min: float = 10.0
    x_max: float = 90.0
    nx: int = 5
    y_min: float = 25.0
    y_max: float = 85.0
    ny: int = 5
    rx_height: float = 1.0
    profile: str = "optimal"
    pt_dbw: float = 0.0

    los_exponent: float | None = None
    los_sigma_db: float | None = None
    nlos_exponent: float | None = None
    nlos_sigma_db: float | None = None
    los_force_height: float | None = None

    poisson_mean: float | None = None
    subray_min: int | None = None
    subray_max: int | None = None

    def to_scenario(self) -> Scenario:
        try:
            environment = Environment(self.environment)
        except ValueError:
            raise ConfigError("scenario.environment", f"unknown environment {self.environment!r}")
        try:
            wall = WallPlacement(self.wall)
        except ValueError:
            raise ConfigError("scenario.wall", f"unknown wall placement {self.wall!r}")
        return Scenario(
            environment=environment,
            frequency_ghz=self.frequency_ghz,
            wall=wall,
            tx=Point3(*self.tx),
            rx=Point3(*self.rx),
            ris=Point3(*self.ris),
            n_elements=self.elements,
            element_spacing=self.spacing,
            direct_link_present=self.direct_link,
        )

    def resolved_seed(self, env_seed: str | None = None) -> int:
        if self.seed is not None:
            return self.seed
        if env_seed:
            try:
                return int(env_seed)
            except ValueError:
                raise ConfigError("SIMRIS_SEED", f"not an integer: {env_seed!r}")
        return 0

    def to_channel_config(self, seed: int) -> ChannelConfig:
        scenario = self.to_scenario()
        pathloss = PathLossModel.defaults(scenario.environment, scenario.frequency_ghz)
        overrides = {
            "los_exponent": self.los_exponent,
            "los_sigma_db": self.los_sigma_db,
            "nlos_exponent": self.nlos_exponent,
            "nlos_sigma_db": self.nlos_sigma_db,
        }
        set_overrides = {k: v for k, v in overrides.items() if v is not None}
        if set_overrides:
            pathloss = dataclasses.replace(pathloss, **set_overrides)
        cluster_overrides = {
            "poisson_mean": self.poisson_mean,
            "subray_min": self.subray_min,
            "subray_max": self.subray_max,
        }
        set_clusters = {k: v for k, v in cluster_overrides.items() if v is not None}
        clusters = ClusterStatistics(**set_clusters)
        return ChannelConfig(
            scenario=scenario,
            pathloss=pathloss,
            clusters=clusters,
            realizations=self.realizations,
            seed=seed,
            los_force_height=self.los_force_height,
            n_jobs=self.jobs,
        )

    def to_dict(self, seed: int | None = None) -> dict:
        """JSON-ready resolved configuration for output headers.

        The output destination and worker count are dropped: neither is
        part of the experiment, and results must stay byte-identical
        across output paths and thread counts.
        """
        data = dataclasses.asdict(self)
        if seed is not None:
            data["seed"] = seed
        data["out"] = None
        data["jobs"] = 1
        data["tx"] = list(self.tx)
        data["rx"] = list(self.rx)
        data["ris"] = list(self.ris)
        data["profiles"] = list(self.profiles)
        return data


_SECTIONS = {
    "scenario": (
        "environment", "frequency_ghz", "wall", "tx", "rx", "ris",
        "elements", "spacing", "direct_link",
    ),
    "run": ("realizations", "seed", "format", "out", "jobs"),
    "rate": ("pt_dbw_start", "pt_dbw_stop", "pt_dbw_step", "noise_dbm", "profiles"),
    "heatmap": (
        "x_min", "x_max", "nx", "y_min", "y_max", "ny",
        "rx_height", "profile", "pt_dbw",
    ),
    "pathloss": (
        "los_exponent", "los_sigma_db", "nlos_exponent", "nlos_sigma_db",
        "los_force_height",
    ),
    "clusters": ("poisson_mean", "subray_min", "subray_max"),
}

_FIELD_SECTION = {key: section for section, keys in _SECTIONS.items() for key in keys}

_POINT_FIELDS = {"tx", "rx", "ris"}
_INT_FIELDS = {"elements", "realizations", "jobs", "nx", "ny"}
_OPT_INT_FIELDS = {"seed", "subray_min", "subray_max"}
_BOOL_FIELDS = {"direct_link"}
_OPT_FLOAT_FIELDS = {
    "spacing", "los_exponent", "los_sigma_db", "nlos_exponent",
    "nlos_sigma_db", "los_force_height", "poisson_mean",
}
_OPT_STR_FIELDS = {"out"}
_TUPLE_FIELDS = {"profiles"}


def _parse_point(key: str, raw: str) -> tuple[float, float, float]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 3:
        raise ConfigError(key, f"expected x,y,z but got {raw!r}")
    try:
        return tuple(float(p) for p in parts)  # type: ignore[return-value]
    except ValueError:
        raise ConfigError(key, f"non-numeric coordinate in {raw!r}")


def _parse_value(name: str, raw: str, qualified: str):
    raw = raw.strip()
    if name in _POINT_FIELDS:
        return _parse_point(qualified, raw)
    if name in _BOOL_FIELDS:
        lowered = raw.lower()
        if lowered in ("true", "1", "yes", "on"):
            return True
        if lowered in ("false", "0", "no", "off"):
            return False
        raise ConfigError(qualified, f"expected a boolean, got {raw!r}")
    if name in _TUPLE_FIELDS:
        return tuple(p.strip() for p in raw.split(",") if p.strip())
    if name in _OPT_STR_FIELDS:
        return raw or None
    if name in _OPT_INT_FIELDS or name in _OPT_FLOAT_FIELDS:
        if raw == "":
            return None
    try:
        if name in _INT_FIELDS or name in _OPT_INT_FIELDS:
            return int(raw)
        if name in ("environment", "wall", "format", "profile"):
            return raw
        return float(raw)
    except ValueError:
        raise ConfigError(qualified, f"could not parse value {raw!r}")


def _format_value(name: str, value) -> str:
    if value is None:
        return ""
    if name in _POINT_FIELDS:
        return ",".join(repr(float(v)) for v in value)
    if name in _BOOL_FIELDS:
        return "true" if value else "false"
    if name in _TUPLE_FIELDS:
        return ",".join(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def read_items(text: str) -> dict[str, object]:
    """Parse INI text into {field: value} for the keys it actually sets."""
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("<config>", f"malformed config: {exc}")
    items: dict[str, object] = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(section, "unknown section")
        for name, raw in parser.items(section):
            if name not in _SECTIONS[section]:
                raise ConfigError(f"{section}.{name}", "unknown key")
            items[name] = _parse_value(name, raw, f"{section}.{name}")
    return items


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Build a RunConfig from INI text, overlaying onto ``base`` if given.

    A standalone file (no base) must define every [scenario] key; a file
    overlaid on a flag-derived base may be partial.
    """
    items = read_items(text)
    if base is None:
        missing = [k for k in _REQUIRED_SCENARIO_KEYS if k not in items]
        if missing:
            raise ConfigError(f"scenario.{missing[0]}", "required key missing")
        cfg = RunConfig()
    else:
        cfg = dataclasses.replace(base)
    for name, value in items.items():
        setattr(cfg, name, value)
    return cfg


def serialize_config(cfg: RunConfig) -> str:
    """Render a RunConfig as INI text; parse_config inverts this exactly."""
    parser = configparser.ConfigParser()
    for section, keys in _SECTIONS.items():
        parser[section] = {name: _format_value(name, getattr(cfg, name)) for name in keys}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
