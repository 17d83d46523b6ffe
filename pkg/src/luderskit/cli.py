"""Command-line verification front end.

Three subcommands: `spin` certifies the SU(2) channel (spectrum law,
unique fixed point, harmonic damping), `fock` cross-checks the disk-grid
particle channel against analytic disk-limit predictions and the exact
symbolic map, and `order` runs the exact ordering engine on an operator
expression.  Exit status 0 means every check passed; 1 means a check
failed; 2 means the invocation itself was invalid (bad sizing, malformed
expression or override).

Grid tolerances in `fock` were fixed by oracle runs at the default
sizing (dim=40, radius=3): comparisons against disk-limit predictions
are tight (1e-9), while rows labelled *_gap quantify the irreducible
distance between the radius-3 disk and the infinite plane and carry
correspondingly coarse tolerances.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, fock, ordering, spin
from .channel import apply_channel, build_luders_channel, channel_spectrum
from .expr import ParseError
from .reports import ReportDocument, ReportSchemaError
from .spin import SpinSpace

USAGE_ERROR = 2
CHECK_FAILURE = 1

_RNG_SEED = 20030815


class UsageError(ValueError):
    pass


def _random_hermitian(rng, dim):
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (raw + raw.conj().T) / 2


class _CheckRunner:
    """Accumulates checks, applying tolerance overrides by name."""

    def __init__(self, report: ReportDocument, overrides: dict):
        self.report = report
        self.overrides = dict(overrides)
        self.seen = set()

    def numeric(self, name, expected, actual, tolerance):
        tolerance = self.overrides.get(name, tolerance)
        self.seen.add(name)
        passed = abs(float(actual) - float(expected)) <= float(tolerance)
        self.report.add(name, expected, actual, tolerance, passed)

    def textual(self, name, expected, actual):
        self.seen.add(name)
        if name in self.overrides:
            raise UsageError(f"check {name!r} has no numeric tolerance to override")
        self.report.add(name, expected, actual, 0, expected == actual)

    def finish(self):
        unknown = set(self.overrides) - self.seen
        if unknown:
            raise UsageError(
                f"tolerance override for unknown check(s): {', '.join(sorted(unknown))}"
            )


# --- spin ----------------------------------------------------------------------

def cmd_spin(two_s: int, overrides: dict) -> ReportDocument:
    if not 1 <= two_s <= 50:
        raise UsageError(f"--two-s must lie in 1..50, got {two_s}")
    space = SpinSpace(two_s)
    grid = spin.sphere_quadrature(space)
    report = ReportDocument(
        command="spin",
        parameters={
            "two_s": two_s,
            "n_theta": two_s + 1,
            "n_phi": 2 * two_s + 1,
            "seed": _RNG_SEED,
        },
        version=__version__,
    )
    run = _CheckRunner(report, overrides)

    family = spin.projector_family(space, grid)
    resolution = (family.states.T * family.weights) @ family.states.conj()
    run.numeric("resolution_of_unity", 0.0,
                np.abs(resolution - np.eye(space.dim)).max(), 1e-12)

    chan = build_luders_channel(family)
    spectral = channel_spectrum(chan)
    expected = spin.expected_spectrum(space)
    run.numeric("spectrum_law", 0.0,
                np.abs(spectral.eigenvalues.real - expected).max(), 1e-9)
    run.numeric("fixed_space_dim", 1, spectral.fixed_space_dim, 0)

    fixed = spectral.fixed_basis[0]
    residual = fixed - (np.trace(fixed) / space.dim) * np.eye(space.dim)
    run.numeric("fixed_point_identity", 0.0, np.abs(residual).max(), 1e-9)

    rng = np.random.default_rng(_RNG_SEED)
    taus = {l: spin.tau_spin(space, l) for l in range(two_s + 1)}
    worst = 0.0
    for _ in range(20):
        operator = _random_hermitian(rng, space.dim)
        before = spin.harmonic_coefficients(
            spin.q_symbol_spin(space, operator, grid), grid, space)
        after = spin.harmonic_coefficients(
            spin.q_symbol_spin(space, apply_channel(chan, operator), grid), grid, space)
        for (l, m), value in before.coeffs.items():
            worst = max(worst, abs(after[(l, m)] - taus[l] * value))
    run.numeric("harmonic_damping", 0.0, worst, 1e-9)

    run.finish()
    return report


# --- fock ----------------------------------------------------------------------

def cmd_fock(dim: int, radius: float, overrides: dict) -> ReportDocument:
    if not 8 <= dim <= 200:
        raise UsageError(f"--dim must lie in 8..200, got {dim}")
    if not 0 < radius <= np.sqrt(dim) / 2:
        raise UsageError(
            f"--radius must lie in (0, sqrt(dim)/2 = {np.sqrt(dim) / 2:.3f}], got {radius}"
        )
    space = fock.FockSpace(dim)
    quad = fock.plane_quadrature(space, radius=radius)
    beta = 1.0
    report = ReportDocument(
        command="fock",
        parameters={
            "dim": dim,
            "radius": radius,
            "n_radial": fock.DEFAULT_N_RADIAL,
            "n_angular": fock.DEFAULT_N_ANGULAR,
            "beta": beta,
            "seed": _RNG_SEED,
        },
        version=__version__,
    )
    run = _CheckRunner(report, overrides)

    run.numeric("quadrature_mass", radius**2, quad.weights.sum(), 1e-10)

    psi = fock.coherent_state_matrix(space, quad)
    resolution = (psi.T * quad.weights) @ psi.conj()
    run.numeric("resolution_of_unity_disk", 0.0,
                np.abs(resolution - fock.disk_identity_matrix(space, radius)).max(),
                1e-9)

    rng = np.random.default_rng(_RNG_SEED)
    worst = 0.0
    for _ in range(50):
        a_pt = rng.uniform(0, 2) * np.exp(2j * np.pi * rng.uniform())
        b_pt = rng.uniform(0, 2) * np.exp(2j * np.pi * rng.uniform())
        va = fock.fock_coherent_state(space, a_pt)
        vb = fock.fock_coherent_state(space, b_pt)
        worst = max(worst, abs(abs(np.vdot(va, vb)) ** 2
                               - np.exp(-abs(a_pt - b_pt) ** 2)))
    run.numeric("coherent_overlap_law", 0.0, worst, 1e-9)

    worst = 0.0
    for m in range(5):
        for n in range(5 - m):
            image = fock.grid_channel_apply(
                space, quad,
                np.linalg.matrix_power(space.adag, m) @ np.linalg.matrix_power(space.a, n))
            prediction = fock.disk_monomial_image(space, m, n, radius)
            worst = max(worst, np.abs(image - prediction).max())
    run.numeric("grid_vs_symbolic_disk", 0.0, worst, 1e-9)

    lam_q2 = ordering.luders_symbolic(ordering.normal_order("q^2"))
    target = ordering.normal_order("q^2 + 1/2")
    defect = max(
        (abs(complex(lam_q2.coefficient(*k) - target.coefficient(*k)))
         for k in set(lam_q2.terms) | set(target.terms)),
        default=0.0,
    )
    run.numeric("lambda_q2_symbolic", 0.0, defect, 0)

    q_op = (space.a + space.adag) / 2
    grid_image = fock.grid_channel_apply(space, quad, q_op @ q_op)
    disk_pred = (
        fock.disk_monomial_image(space, 2, 0, radius)
        + fock.disk_monomial_image(space, 0, 2, radius)
        + 2 * fock.disk_monomial_image(space, 1, 1, radius)
        + fock.disk_identity_matrix(space, radius)
    ) / 4
    run.numeric("lambda_q2_grid_disk", 0.0, np.abs(grid_image - disk_pred).max(), 1e-9)

    vb = fock.fock_coherent_state(space, beta)
    proj = np.outer(vb, vb.conj())
    q_image = fock.q_symbol_fock(space, fock.grid_channel_apply(space, quad, proj), quad)
    gaussian = 0.5 * np.exp(-np.abs(quad.alphas - beta) ** 2 / 2)
    window = np.abs(quad.alphas) <= 2.0
    run.numeric("q_projector_symbol", 0.0,
                np.abs(q_image - gaussian)[window].max(), 2e-3)

    worst = 0.0
    for _ in range(50):
        a_pt = rng.uniform(0, 2) * np.exp(2j * np.pi * rng.uniform())
        b_pt = rng.uniform(0, 2) * np.exp(2j * np.pi * rng.uniform())
        va = fock.fock_coherent_state(space, a_pt)
        vb2 = fock.fock_coherent_state(space, b_pt)
        proj_a = np.outer(va, va.conj())
        lhs = np.vdot(vb2, (q_op @ proj_a - proj_a @ q_op) @ vb2)
        rhs = 0.5 * ((a_pt - np.conj(a_pt)) - (b_pt - np.conj(b_pt))) \
            * np.exp(-abs(a_pt - b_pt) ** 2)
        worst = max(worst, abs(lhs - rhs))
    run.numeric("commutator_formula", 0.0, worst, 1e-8)

    damping = fock.verify_damping(space, proj, quad)
    run.numeric("damping_ratio_gap", 0.0, damping.max_deviation, 0.75)

    run.finish()
    return report


# --- order ---------------------------------------------------------------------

def cmd_order(expression: str, fixed_space: int | None, overrides: dict) -> ReportDocument:
    poly = ordering.normal_order(expression)  # ParseError propagates to main
    anti = ordering.anti_normal_order(poly)
    luders = ordering.luders_symbolic(poly)
    well = ordering.is_well_ordered(poly)
    report = ReportDocument(
        command="order",
        parameters={
            "expression": expression,
            "normal_form": poly.to_source(),
            "anti_normal_form": anti.to_source(),
            "luders_image": luders.to_source(),
            "well_ordered": "true" if well else "false",
            "fixed_space": "-" if fixed_space is None else fixed_space,
        },
        version=__version__,
    )
    run = _CheckRunner(report, overrides)

    reparsed = ordering.normal_order(poly.to_source())
    run.textual("parse_round_trip", poly.to_source(), reparsed.to_source())

    round_trip = anti.to_normal()
    defect = max(
        (abs(complex(round_trip.coefficient(*k) - poly.coefficient(*k)))
         for k in set(round_trip.terms) | set(poly.terms)),
        default=0.0,
    )
    run.numeric("ordering_round_trip", 0.0, defect, 0)

    run.textual("well_ordered_luders_consistency",
                "true" if well else "false",
                "true" if luders == poly else "false")

    if fixed_space is not None:
        if not 0 <= fixed_space <= ordering.MAX_FIXED_SPACE_DEGREE:
            raise UsageError(
                f"--fixed-space must lie in 0..{ordering.MAX_FIXED_SPACE_DEGREE}"
            )
        result = ordering.luders_fixed_space(fixed_space)
        run.numeric("fixed_space_dimension", 2 * fixed_space + 1, result.dimension, 0)

    run.finish()
    return report


# --- driver ----------------------------------------------------------------------

def _parse_overrides(pairs) -> dict:
    overrides = {}
    for pair in pairs or []:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise UsageError(f"--tol-override expects NAME=VALUE, got {pair!r}")
        try:
            overrides[name] = float(value)
        except ValueError:
            raise UsageError(f"tolerance override {pair!r} is not a number") from None
    return overrides


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="luderskit",
        description="Verify Lüders channels of coherent-state POVMs.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", metavar="PATH", help="write the JSON report here")
        p.add_argument("--csv", metavar="PATH", help="write the flat check table here")
        p.add_argument("--tol-override", action="append", metavar="NAME=VALUE",
                       help="replace a named check tolerance (repeatable)")

    p_spin = sub.add_parser("spin", help="certify the SU(2) channel")
    p_spin.add_argument("--two-s", type=int, required=True, help="twice the spin, 1..50")
    common(p_spin)

    p_fock = sub.add_parser("fock", help="cross-check the particle grid channel")
    p_fock.add_argument("--dim", type=int, default=fock.DEFAULT_DIM, help="Fock levels, 8..200")
    p_fock.add_argument("--radius", type=float, default=fock.DEFAULT_RADIUS,
                        help="phase-space disk radius, at most sqrt(dim)/2")
    common(p_fock)

    p_order = sub.add_parser("order", help="run the exact ordering engine")
    p_order.add_argument("expression", help="operator expression, e.g. 'q^2 - p^2'")
    p_order.add_argument("--fixed-space", type=int, metavar="N",
                         help="also enumerate the invariant space of degree <= N")
    common(p_order)
    return parser


def _emit(report: ReportDocument, args) -> int:
    print(f"luderskit {report.command} " +
          " ".join(f"{k}={v}" for k, v in report.parameters.items()
                   if k in ("two_s", "dim", "radius", "expression")))
    for key in ("normal_form", "anti_normal_form", "luders_image", "well_ordered"):
        if key in report.parameters:
            print(f"  {key}: {report.parameters[key]}")
    for result in report.results:
        flag = "PASS" if result.passed else "FAIL"
        print(f"  [{flag}] {result.name}: actual={result.actual} "
              f"expected={result.expected} tolerance={result.tolerance}")
    n_pass = sum(r.passed for r in report.results)
    print(f"{n_pass}/{len(report.results)} checks passed")
    if args.json:
        report.write_json(args.json)
    if args.csv:
        report.write_csv(args.csv)
    return 0 if report.all_passed else CHECK_FAILURE


def run(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = _parse_overrides(args.tol_override)
        if args.command == "spin":
            report = cmd_spin(args.two_s, overrides)
        elif args.command == "fock":
            report = cmd_fock(args.dim, args.radius, overrides)
        else:
            report = cmd_order(args.expression, args.fixed_space, overrides)
        return _emit(report, args)
    except ParseError as exc:
        print(f"error: cannot parse expression: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (UsageError, ReportSchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
