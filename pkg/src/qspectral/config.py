"""Run configuration: a flat ``key = value`` file read with configparser.

Recognised keys: ``q_num, q_den, c_num, c_den, windows, suites``.  A section
header is optional.  Rationals are kept exact.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

SUITES = ("algebra", "representation", "dirac", "fredholm", "calculus", "l2", "sphere")
KEYS = ("q_num", "q_den", "c_num", "c_den", "windows", "suites")
_SECTION = "qspectral"


class ConfigError(ValueError):
    """Configuration could not be parsed or failed validation."""


@dataclass(frozen=True)
class RunConfig:
    q: Fraction = Fraction(1, 2)
    c: Fraction = Fraction(2)
    windows: tuple = (8, 16)
    suites: tuple = field(default=SUITES)

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ConfigError("q must lie in (0,1)")
        if self.c <= 0:
            raise ConfigError("c must be positive")
        if not self.windows or any(w < 4 for w in self.windows):
            raise ConfigError("windows must be a nonempty list of integers >= 4")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suites: {', '.join(unknown)}")
        if not self.suites:
            raise ConfigError("no suites selected")

    def as_dict(self) -> dict:
        return {"q": str(self.q), "c": str(self.c), "windows": list(self.windows), "suites": list(self.suites)}


def _int(raw: str, key: str) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw!r}") from None


def _list(raw: str) -> list[str]:
    return [x.strip() for x in raw.replace(";", ",").split(",") if x.strip()]


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser()
    if not text.lstrip().startswith("["):
        text = f"[{_SECTION}]\n" + text
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    if len(parser.sections()) != 1:
        raise ConfigError("config must contain exactly one section")
    sec = parser[parser.sections()[0]]
    extra = sorted(set(sec) - set(KEYS))
    if extra:
        raise ConfigError(f"unknown keys: {', '.join(extra)}")
    defaults = RunConfig()
    q_num = _int(sec.get("q_num", str(defaults.q.numerator)), "q_num")
    q_den = _int(sec.get("q_den", str(defaults.q.denominator)), "q_den")
    c_num = _int(sec.get("c_num", str(defaults.c.numerator)), "c_num")
    c_den = _int(sec.get("c_den", str(defaults.c.denominator)), "c_den")
    if q_den == 0 or c_den == 0:
        raise ConfigError("denominators must be nonzero")
    windows = tuple(_int(w, "windows") for w in _list(sec["windows"])) if "windows" in sec else defaults.windows
    suites = tuple(_list(sec["suites"])) if "suites" in sec else defaults.suites
    return RunConfig(Fraction(q_num, q_den), Fraction(c_num, c_den), windows, suites)


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


DEFAULT_CONFIG_TEXT = """\
q_num = 1
q_den = 2
c_num = 2
c_den = 1
windows = 8, 16
suites = algebra, representation, dirac, fredholm, calculus, l2, sphere
"""
