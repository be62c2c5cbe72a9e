"""Grid sweeps of exact RDP against the closed-form bound, as CSV."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, TextIO

from .accountant import SgmParams, compute_rdp
from .closed_form import closed_form_bound

CSV_HEADER = ("q", "sigma", "alpha", "eps_exact", "eps_bound",
              "cond_alpha1", "cond_alpha2", "cond_range")


def format_number(x: float) -> str:
    """Shortest round-trip decimal form of a double (at most 17 digits)."""
    return repr(float(x))


@dataclass(frozen=True)
class SweepSpec:
    q_values: Sequence[float]
    sigma_values: Sequence[float]
    orders: Sequence[float]

    def __post_init__(self):
        if not (self.q_values and self.sigma_values and self.orders):
            raise ValueError("sweep needs at least one q, sigma and order")
        for q in self.q_values:
            for s in self.sigma_values:
                SgmParams(q, s)
        if min(self.orders) <= 1.0:
            raise ValueError("all orders must exceed 1")


@dataclass(frozen=True)
class SweepRow:
    q: float
    sigma: float
    alpha: float
    eps_exact: float
    eps_bound: Optional[float]
    cond_alpha1: bool
    cond_alpha2: bool
    cond_range: bool

    def to_record(self) -> list[str]:
        return [
            format_number(self.q),
            format_number(self.sigma),
            format_number(self.alpha),
            format_number(self.eps_exact),
            "" if self.eps_bound is None else format_number(self.eps_bound),
            _fmt_bool(self.cond_alpha1),
            _fmt_bool(self.cond_alpha2),
            _fmt_bool(self.cond_range),
        ]


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def run_sweep(spec: SweepSpec) -> Iterator[SweepRow]:
    """Rows in q-outer, sigma-middle, alpha-inner order."""
    for q in spec.q_values:
        for sigma in spec.sigma_values:
            params = SgmParams(q, sigma)
            for alpha in spec.orders:
                rep = closed_form_bound(params, alpha)
                yield SweepRow(
                    float(q), float(sigma), float(alpha),
                    compute_rdp(params, alpha), rep.eps_bound,
                    rep.cond_alpha1, rep.cond_alpha2, rep.cond_range,
                )


def write_csv(rows: Iterable[SweepRow], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.to_record())


def read_csv(text: str) -> list[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    return [
        SweepRow(
            float(r["q"]), float(r["sigma"]), float(r["alpha"]), float(r["eps_exact"]),
            float(r["eps_bound"]) if r["eps_bound"] else None,
            r["cond_alpha1"] == "true", r["cond_alpha2"] == "true", r["cond_range"] == "true",
        )
        for r in reader
    ]
