#
# Copyright © 2024 Mark Raynsford <code@io7m.com> https://www.io7m.com
#
# Permission to use, copy, modify, and/or distribute this software for any
# purpose with or without fee is hereby granted, provided that the above
# copyright notice and this permission notice appear in all copies.
#
# THE SOFTWARE IS PROVIDED "AS IS" AND THE AUTHOR DISCLAIMS ALL WARRANTIES
# WITH REGARD TO THIS SOFTWARE INCLUDING ALL IMPLIED WARRANTIES OF
# MERCHANTABILITY AND FITNESS. IN NO EVENT SHALL THE AUTHOR BE LIABLE FOR ANY
# SPECIAL, DIRECT, INDIRECT, OR CONSEQUENTIAL DAMAGES OR ANY DAMAGES
# WHATSOEVER RESULTING FROM LOSS OF USE, DATA OR PROFITS, WHETHER IN AN
# ACTION OF CONTRACT, NEGLIGENCE OR OTHER TORTIOUS ACTION, ARISING OUT OF OR
# IN CONNECTION WITH THE USE OR PERFORMANCE OF THIS SOFTWARE.
#

"""
Run configuration: built-in defaults, then the `[ballquot]` table of a
TOML file, then the BALLQUOT_DATA environment variable for the data
directory, then command-line flags.
"""

import sys
from collections.abc import Mapping
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ballquot.words import RELATOR_VARIANTS

DATA_ENVIRONMENT_VARIABLE = "BALLQUOT_DATA"
CONFIG_TABLE = "ballquot"


class OutputFormat(Enum):
    HUMAN = "human"
    JSON = "json"
    CSV = "csv"


class RunConfig:
    _precision: Fraction
    _max_cosets: int
    _hom_search_budget: int
    _data_dir: Path | None
    _output_format: OutputFormat
    _max_index: int
    _stretch: bool
    _stretch_deadline: float
    _relator_variant: str

    def __init__(
        self,
        precision: Fraction = Fraction(1, 10**6),
        max_cosets: int = 10**6,
        hom_search_budget: int = 50_000_000,
        data_dir: Path | None = None,
        output_format: OutputFormat = OutputFormat.HUMAN,
        max_index: int = 1000,
        stretch: bool = False,
        stretch_deadline: float = 600.0,
        relator_variant: str = "presentation",
    ):
        if not precision > 0:
            _error = f"Precision must be positive (received {precision})"
            raise ValueError(_error)
        for name, value in (
            ("max_cosets", max_cosets),
            ("hom_search_budget", hom_search_budget),
            ("max_index", max_index),
        ):
            if not value > 0:
                _error = f"{name} must be positive (received {value})"
                raise ValueError(_error)
        if not stretch_deadline > 0:
            _error = (
                "stretch_deadline must be positive "
                f"(received {stretch_deadline})"
            )
            raise ValueError(_error)
        if relator_variant not in RELATOR_VARIANTS:
            _error = f"Unknown relator variant {relator_variant!r}"
            raise ValueError(_error)
        self._precision = precision
        self._max_cosets = max_cosets
        self._hom_search_budget = hom_search_budget
        self._data_dir = data_dir
        self._output_format = output_format
        self._max_index = max_index
        self._stretch = stretch
        self._stretch_deadline = stretch_deadline
        self._relator_variant = relator_variant

    @property
    def precision(self) -> Fraction:
        return self._precision

    @property
    def max_cosets(self) -> int:
        return self._max_cosets

    @property
    def hom_search_budget(self) -> int:
        return self._hom_search_budget

    @property
    def data_dir(self) -> Path | None:
        return self._data_dir

    @property
    def output_format(self) -> OutputFormat:
        return self._output_format

    @property
    def max_index(self) -> int:
        return self._max_index

    @property
    def stretch(self) -> bool:
        return self._stretch

    @property
    def stretch_deadline(self) -> float:
        return self._stretch_deadline

    @property
    def relator_variant(self) -> str:
        return self._relator_variant

    def _fields(self) -> dict[str, Any]:
        return {
            "precision": self._precision,
            "max_cosets": self._max_cosets,
            "hom_search_budget": self._hom_search_budget,
            "data_dir": self._data_dir,
            "output_format": self._output_format,
            "max_index": self._max_index,
            "stretch": self._stretch,
            "stretch_deadline": self._stretch_deadline,
            "relator_variant": self._relator_variant,
        }

    def updated(self, values: Mapping[str, Any]) -> "RunConfig":
        """A copy with the given fields replaced; None values are ignored."""
        fields = self._fields()
        for key, value in values.items():
            if key not in fields:
                _error = f"Unknown configuration key {key!r}"
                raise ValueError(_error)
            if value is not None:
                fields[key] = _coerce(key, value)
        return RunConfig(**fields)

    def to_json(self) -> dict[str, Any]:
        return {
            "precision": str(self._precision),
            "maxCosets": self._max_cosets,
            "homSearchBudget": self._hom_search_budget,
            "dataDir": None if self._data_dir is None else str(self._data_dir),
            "outputFormat": self._output_format.value,
            "maxIndex": self._max_index,
            "stretch": self._stretch,
            "stretchDeadline": self._stretch_deadline,
            "relatorVariant": self._relator_variant,
        }


def _coerce(key: str, value: Any) -> Any:
    try:
        match key:
            case "precision":
                return Fraction(str(value))
            case "data_dir":
                return Path(value)
            case "output_format":
                return (
                    value
                    if isinstance(value, OutputFormat)
                    else OutputFormat(str(value))
                )
            case "stretch":
                if not isinstance(value, bool):
                    _error = f"stretch must be a boolean (received {value!r})"
                    raise ValueError(_error)
                return value
            case "stretch_deadline":
                return float(value)
            case "relator_variant":
                return str(value)
            case _:
                return int(value)
    except (TypeError, ZeroDivisionError) as e:
        _error = f"Invalid value for {key}: {value!r}"
        raise ValueError(_error) from e


def read_toml(path: Path) -> dict[str, Any]:
    with path.open("rb") as f:
        document = tomllib.load(f)
    table = document.get(CONFIG_TABLE, {})
    if not isinstance(table, dict):
        _error = f"{path}: [{CONFIG_TABLE}] must be a table"
        raise ValueError(_error)
    return table


def resolve_config(
    config_file: Path | None,
    environment: Mapping[str, str],
    flags: Mapping[str, Any],
) -> RunConfig:
    config = RunConfig()
    if config_file is not None:
        config = config.updated(read_toml(config_file))
    data = environment.get(DATA_ENVIRONMENT_VARIABLE)
    if data:
        config = config.updated({"data_dir": data})
    return config.updated(flags)
