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
Reports: ordered check results with provenance tags, rendered as a human
table, JSON or CSV. Timings are kept apart from the results so that the
rest of a report is reproducible.
"""

import csv
import io
import json
from collections.abc import Iterable
from enum import Enum
from typing import Any

from ballquot.__about__ import __version__
from ballquot.model import Provenance

SCHEMA_VERSION = 1


class CheckStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"
    ERROR = "error"
    INFO = "info"


class CheckResult:
    _name: str
    _status: CheckStatus
    _provenance: Provenance
    _expected: str
    _observed: str
    _detail: dict[str, Any]

    def __init__(
        self,
        name: str,
        status: CheckStatus,
        provenance: Provenance,
        expected: str,
        observed: str,
        detail: dict[str, Any] | None = None,
    ):
        self._name = name
        self._status = status
        self._provenance = provenance
        self._expected = expected
        self._observed = observed
        self._detail = detail or {}

    @staticmethod
    def compare(
        name: str,
        provenance: Provenance,
        expected: object,
        observed: object,
        detail: dict[str, Any] | None = None,
    ) -> "CheckResult":
        status = CheckStatus.PASS if expected == observed else CheckStatus.FAIL
        return CheckResult(
            name, status, provenance, str(expected), str(observed), detail
        )

    @property
    def name(self) -> str:
        return self._name

    @property
    def status(self) -> CheckStatus:
        return self._status

    @property
    def provenance(self) -> Provenance:
        return self._provenance

    @property
    def expected(self) -> str:
        return self._expected

    @property
    def observed(self) -> str:
        return self._observed

    @property
    def detail(self) -> dict[str, Any]:
        return self._detail

    @property
    def failed(self) -> bool:
        return self._status in (CheckStatus.FAIL, CheckStatus.ERROR)

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self._name,
            "status": self._status.value,
            "provenance": self._provenance.name,
            "expected": self._expected,
            "observed": self._observed,
            "detail": self._detail,
        }


class Report:
    _command: list[str]
    _config: dict[str, Any]
    _results: list[CheckResult]
    _timings: dict[str, float]

    def __init__(self, command: Iterable[str], config: dict[str, Any]):
        self._command = list(command)
        self._config = config
        self._results = []
        self._timings = {}

    @property
    def results(self) -> list[CheckResult]:
        return self._results

    @property
    def timings(self) -> dict[str, float]:
        return self._timings

    def add(self, result: CheckResult) -> None:
        self._results.append(result)

    def record_timing(self, item: str, seconds: float) -> None:
        self._timings[item] = round(seconds, 3)

    def result(self, name: str) -> CheckResult:
        for r in self._results:
            if r.name == name:
                return r
        _error = f"No check named {name!r}"
        raise KeyError(_error)

    @property
    def failed(self) -> bool:
        return any(r.failed for r in self._results)

    def to_json(self, timings: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schemaVersion": SCHEMA_VERSION,
            "version": __version__,
            "command": self._command,
            "config": self._config,
            "results": [r.to_json() for r in self._results],
            "passed": not self.failed,
        }
        if timings:
            out["timings"] = dict(self._timings)
        return out

    def render_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_json(timings), indent=2, sort_keys=True)

    def render_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(
            ["name", "status", "provenance", "expected", "observed"]
        )
        for r in self._results:
            writer.writerow(
                [
                    r.name,
                    r.status.value,
                    r.provenance.name,
                    r.expected,
                    r.observed,
                ]
            )
        return buffer.getvalue()

    def render_human(self) -> str:
        width = max((len(r.name) for r in self._results), default=4)
        lines = []
        for r in self._results:
            line = (
                f"{r.status.value.upper():7} [{r.provenance.name:7}] "
                f"{r.name.ljust(width)}  "
                f"expected {r.expected}, observed {r.observed}"
            )
            lines.append(line)
        verdict = "FAILED" if self.failed else "PASSED"
        lines.append(f"{verdict}: {len(self._results)} checks")
        return "\n".join(lines) + "\n"
