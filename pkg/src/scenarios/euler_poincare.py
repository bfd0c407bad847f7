"""
DefCoh - Euler-Poincaré Scenarios

ep-fuzz deforms seeded random complexes over QQ(h) and checks that χ is
unchanged while each dim H^n can only drop. chi-table evaluates the
bigraded characteristic of k[x,y] and, near the origin, recomputes it
from window cohomology.
"""

import logging

from ..core.eulerpoincare import (
    FiniteComplex,
    chi_bidegree_table,
    deform,
    fuzz,
    invariance_report,
    specialize,
)
from ..core.exceptions import NotADeformation
from .report import Outcome
from .session import ScenarioRun

logger = logging.getLogger(__name__)

CROSS_CHECK_BOUND = (1, 1)

FUZZ_CHECKS = [
    ("ep.chi-equality", "chi_d_equals_chi_h", "χ_d = χ_h on every random base complex", "ep-equality"),
    ("ep.chi-invariance", "chi_equal", "χ over QQ(h) equals χ of the base", "ep-invariance"),
    ("ep.dims-nonincreasing", "dims_nonincreasing", "dim H^n over QQ(h) <= dim H^n of the base", "ep-semicontinuity"),
    (
        "ep.generic-specialization",
        "generic_specialization",
        "a random specialization h = t0 reproduces the QQ(h) dimensions",
        "ep-semicontinuity",
    ),
]


def worked_example() -> Outcome:
    """0 -> k² -[h 0]-> k -> 0 and a square that refuses to deform."""
    base = FiniteComplex.from_lists((2, 1), [[[0, 0]]])
    D = deform(base, [[[[1, 0]]]])
    report = invariance_report(D)
    at_one = specialize(D, 1).cohomology_dims()
    at_zero = specialize(D, 0).cohomology_dims()
    expected = ([2, 1], [1, 0], [1, 0], [2, 1])
    found = (report.dims_base, report.dims_deformed, at_one, at_zero)
    if found != expected or not report.chi_equal:
        return Outcome.of(False, countercase=f"dims base/deformed/h=1/h=0 = {found}")

    line = FiniteComplex.from_lists((1, 1, 1), [[[0]], [[0]]])
    try:
        deform(line, [[[[1]]], [[[1]]]])
    except NotADeformation as exc:
        rejected = str(exc)
    else:
        return Outcome.of(False, countercase="h·[1] followed by h·[1] was accepted as a deformation")
    return Outcome.of(True, f"dims {found[0]} -> {found[1]}, χ = {report.chi_base}; rejected: {rejected}")


def run_ep_fuzz(run: ScenarioRun) -> None:
    params = run.scenario
    rows = fuzz(params.count, params.max_dim, params.max_len, params.seed, params.workers)

    def summarize(flag: str) -> Outcome:
        failed = [row.seed for row in rows if not row.flags[flag]]
        return Outcome.of(
            not failed,
            f"{len(rows)} seeds from {params.seed}, max_dim {params.max_dim}, max_len {params.max_len}",
            countercase=f"failing seeds {failed[:10]}",
        )

    for check_id, flag, statement, anchor in FUZZ_CHECKS:
        run.check(check_id, statement, anchor, lambda flag=flag: summarize(flag))
    run.check(
        "ep.worked-example",
        "a single perturbation kills a pair of classes and keeps χ",
        "ep-semicontinuity",
        worked_example,
    )


def run_chi_table(run: ScenarioRun) -> None:
    bound = run.bound
    check_bound = (min(bound[0], CROSS_CHECK_BOUND[0]), min(bound[1], CROSS_CHECK_BOUND[1]))
    table = chi_bidegree_table(bound, cross_check=True, check_bound=check_bound)

    def entries() -> Outcome:
        wrong = {k: v for k, v in table.entries.items() if v != (1 if k == (-1, -1) else 0)}
        return Outcome.of(
            not wrong,
            f"χ(-1,-1) = 1, χ = 0 at the other {len(table.entries) - 1} bidegrees",
            countercase=f"unexpected entries {sorted(wrong.items())}",
        )

    run.check("chi.table", "χ_(r,s) = 1 at (-1,-1) and 0 elsewhere", "chi-table", entries)
    run.check(
        "chi.total",
        "the total characteristic is 1",
        "chi-table",
        lambda: Outcome.of(table.total() == 1, f"Σ χ = {table.total()}"),
    )
    run.check(
        "chi.window-cross-check",
        "window cohomology reproduces (h0, h1, h2, 0) near the origin",
        "chi-table",
        lambda: Outcome.of(
            not table.mismatches,
            f"bidegrees up to {check_bound} agree",
            countercase=f"mismatches at {table.mismatches}",
        ),
    )
