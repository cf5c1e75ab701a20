"""Regenerates every numeric table of the source paper as ``(table, key, value)`` rows."""

from __future__ import annotations

from .accel import build_window_table
from .analytics import an_scan, gamma, zeta_series
from .codec import alpha_sequence, phi, tau, tau_image_lambda
from .levelsets import enumerate_lambda, level_set
from .orbit import curve_params, orbit, total_stopping_time


def _fmt_set(values) -> str:
    return "{" + ",".join(str(v) for v in values) + "}"


def paper_tables() -> list[tuple[str, str, str]]:
    rows: list[tuple[str, str, str]] = []

    def add(table: str, key, value) -> None:
        rows.append((table, str(key), str(value)))

    for n in (3, 7):
        add("iterates", n, ",".join(map(str, orbit(n).values[1:])))
    for n in range(2, 9):
        add("sigma", n, total_stopping_time(n))
    for k in range(1, 9):
        add("level_set", k, _fmt_set(level_set(k)))
    for n in range(2, 9):
        add("orbit", n, _fmt_set(orbit(n).values))
    for w in (1, 2, 3):
        t = build_window_table(w)
        for j in range(1 << w):
            add("window_map", f"f_{w},{j}", t.affine(j))
    t5 = build_window_table(5)
    for j in (10, 11):
        add("window_map", f"f_5,{j}", t5.affine(j))
    add("window_step", "f_5,11(11)", t5.apply(11))
    add("window_step", "f_5,10(10)", t5.apply(10))
    for m in range(4, 9):
        reps = sorted(enumerate_lambda(m), key=lambda p: (p[1].l, p[1].b))
        add("lambda_tuples", m, _fmt_set(str(r) for _, r in reps))
    for n in range(2, 9):
        i, j = curve_params(n)
        add("curve_params", n, f"({i},{j})")
    for n in range(1, 9):
        add("tau", n, tau(n))
    for m in range(0, 9):
        add("tau_lambda", m, _fmt_set(tau_image_lambda(m)))
    for m in range(1, 9):
        seq = alpha_sequence(m) + [0]
        add("alpha", m, f"{seq[0]},{seq[1]}")
    for n in range(1, 9):
        v = phi(n)
        add("phi", n, v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}")
    for k, rec in enumerate(an_scan(10**6), start=1):
        add("an_numbers", k, f"{rec.seed} {rec.gamma:.2f}")
    add("gamma", 100_759_293_214_567, f"{gamma(100_759_293_214_567):.2f}")
    series = zeta_series(20)
    for m in range(2, 21):
        add("zeta", m, series[m])
    return rows
