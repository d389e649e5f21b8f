"""Series solvers for the jump statistics, with verification.

Five series are produced, all as truncated power series in x with exact
polynomial coefficients in the markers t (rightmost-leaf depth) and q:

* ``solve_catalan`` — f, the plain tree counter (no markers).
* ``solve_F``       — F, trees weighted t^depth * q^jumps.
* ``solve_H``       — H = F at t=1, trees weighted q^jumps.
* ``solve_Jdepth``  — J, trees weighted t^depth (jumps ignored).
* ``solve_K``       — K, trees weighted q^jumpdist.

Each series satisfies an algebraic identity with a square-root term.  The
verifiers never divide by marker-bearing denominators: every identity is
cross-multiplied into the form (polynomial)*series + (polynomial + radical)
= 0 and checked coefficient by coefficient, which is exact at any order.

``verify_theorem`` runs the identity for one of the ids 0..6 and returns a
machine-readable Verdict; the solvers for H, J, and K also run their own
identity internally and raise SelfCheckError on failure, so a corrupted
series can never leak into the moment pipeline.

Verdict ids:

* 0 — f: fixed point f = 1 + x*f^2 and radical 2x*f - 1 + sqrt(1-4x) = 0.
* 1 — F equals the exhaustive enumerator up to the oracle cap.
* 2 — F: cross-multiplied closed form (with radical), including the check
      that the printed radicand equals t^2 * (the t-free inner radicand).
* 3 — H: cross-multiplied closed form 2qx*H + (-qx + R + x - 1) = 0 where
      R = sqrt(q^2x^2 - 2qx^2 - 2qx + x^2 - 2x + 1).
* 4 — J: functional equation J = 1 + x*t*J(x,1)*J(x,t).
* 5 — J: cross-multiplied closed form (t*sqrt(1-4x) - t + 2)*J = 2.
* 6 — K: cross-multiplied closed form (sqrt(1-4qx) - 1 + 2q)*K = 2q.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import Poly2, Series, fixed_point_solve
from .trees import brute_force_enumerator

DEFAULT_ORACLE_CAP = 12

_T = Poly2.term(1, et=1)
_Q = Poly2.term(1, eq=1)

THEOREM_IDS = ("0", "1", "2", "3", "4", "5", "6")


class SelfCheckError(RuntimeError):
    """A solver's own verification failed: the series is corrupt."""


@dataclass(frozen=True)
class FirstFailure:
    """Lowest x-index where an identity's residual is nonzero."""

    n: int
    residual: Poly2

    def to_json(self) -> dict:
        return {"n": self.n, "residual_terms": self.residual.to_json_terms()}


@dataclass(frozen=True)
class Verdict:
    theorem: str
    order: int
    passed: bool
    first_failure: FirstFailure | None = None

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "order": self.order,
            "pass": self.passed,
            "first_failure":
                self.first_failure.to_json() if self.first_failure else None,
        }


def verdict_from_residual(theorem: str, order: int, residual: Series) -> Verdict:
    """Pass iff the residual series is identically zero."""
    hit = residual.first_nonzero()
    if hit is None:
        return Verdict(theorem, order, True)
    n, poly = hit
    return Verdict(theorem, order, False, FirstFailure(n, poly))


# --- radicals ---------------------------------------------------------------

def _x_poly(coeffs: list, order: int) -> Series:
    """Literal x-polynomial as a series; terms above the order are cut."""
    return Series.from_x_coefficients(coeffs[: order + 1], order)


def catalan_radical(order: int) -> Series:
    """sqrt(1 - 4x)."""
    return _x_poly([1, -4], order).sqrt()


def jumps_radical(order: int) -> Series:
    """sqrt(1 - 2(q+1)x + (q-1)^2 x^2), the t-free inner radicand's root."""
    return inner_radicand(order).sqrt()


def inner_radicand(order: int) -> Series:
    """1 - 2(q+1)x + (q-1)^2 x^2; times t^2 this is the printed radicand."""
    lin = Poly2({(0, 0): -2, (0, 1): -2})           # -2(q+1)
    quad = Poly2({(0, 0): 1, (0, 1): -2, (0, 2): 1})  # (q-1)^2
    return _x_poly([Poly2.one(), lin, quad], order)


def printed_radicand(order: int) -> Series:
    """q^2t^2x^2 - 2qt^2x^2 - 2qt^2x + t^2x^2 - 2t^2x + t^2, transcribed
    term by term so the factorization t^2 * inner_radicand is an assertion
    about the formula, not an assumption."""
    c0 = Poly2({(2, 0): 1})                               # t^2
    c1 = Poly2({(2, 1): -2, (2, 0): -2})                  # -2qt^2x - 2t^2x
    c2 = Poly2({(2, 2): 1, (2, 1): -2, (2, 0): 1})        # (q^2-2q+1)t^2x^2
    return _x_poly([c0, c1, c2], order)


def jumpdist_radical(order: int) -> Series:
    """sqrt(1 - 4qx)."""
    return _x_poly([Poly2.one(), Poly2.term(-4, eq=1)], order).sqrt()


# --- solvers ----------------------------------------------------------------

@lru_cache(maxsize=8)
def solve_catalan(order: int) -> Series:
    """f = 1 + x*f^2, the tree counter.  Coefficients are plain integers."""
    one = Series.one(order)
    return fixed_point_solve(lambda f: one + (f * f).shift_x(), order)


@lru_cache(maxsize=4)
def solve_F(order: int) -> Series:
    """F(x,t,q) = 1 + xt*F(x,0,q)*F(x,t,q) + xtq*(F(x,1,q) - F(x,0,q))*F(x,t,q).

    The two specializations are recomputed from the current iterate on
    every application, so the fixed point is taken in all three variables
    at once.  (F(x,0,q) = 1: only the leaf has rightmost-leaf depth 0, but
    that falls out of the iteration rather than being assumed.)
    """
    one = Series.one(order)

    def step(F: Series) -> Series:
        at0 = F.substitute("t", 0)
        at1 = F.substitute("t", 1)
        left = (at0 * F).shift_x() * _T
        jumped = ((at1 - at0) * F).shift_x() * (_T * _Q)
        return one + left + jumped

    return fixed_point_solve(step, order)


def verify_F_closed_form(order: int, F: Series | None = None) -> Verdict:
    """Cross-multiplied closed form for F:

        2*(qtx + t^2x - tx - t + 1)*F + (-qtx + tx + t - 2) + t*R = 0,
        R = sqrt(inner radicand).

    Also asserts, by exact expansion, that the printed radicand equals
    t^2 * inner radicand; a mismatch there fails the verdict at the first
    differing x-index.
    """
    if F is None:
        F = solve_F(order)
    elif F.order < order:
        raise ValueError(f"series order {F.order} is below requested {order}")
    factor_diff = printed_radicand(order) - inner_radicand(order) * Poly2({(2, 0): 1})
    hit = factor_diff.first_nonzero()
    if hit is not None:
        return Verdict("2", order, False, FirstFailure(hit[0], hit[1]))
    # 2*(qtx + t^2x - tx - t + 1): x^0 -> 2 - 2t, x^1 -> 2qt + 2t^2 - 2t
    den = _x_poly(
        [Poly2({(0, 0): 2, (1, 0): -2}),
         Poly2({(1, 1): 2, (2, 0): 2, (1, 0): -2})], order)
    # -qtx + tx + t - 2: x^0 -> t - 2, x^1 -> t - qt
    lin = _x_poly(
        [Poly2({(1, 0): 1, (0, 0): -2}),
         Poly2({(1, 0): 1, (1, 1): -1})], order)
    residual = den * F + lin + jumps_radical(order) * _T
    return verdict_from_residual("2", order, residual)


def _theorem3_residual(H: Series, order: int) -> Series:
    # 2qx*H + (-qx + R + x - 1), R = sqrt(inner radicand) at t=1
    two_qx = _x_poly([Poly2.zero(), Poly2.term(2, eq=1)], order)
    lin = _x_poly(
        [Poly2.constant(-1), Poly2({(0, 0): 1, (0, 1): -1})], order)
    return two_qx * H + lin + jumps_radical(order)


@lru_cache(maxsize=4)
def solve_H(order: int) -> Series:
    """H(x,q) = F(x,1,q), trees weighted q^jumps.

    Verified against its own closed form before being returned; failure
    means the solver stack is broken, so it raises instead of returning.
    """
    H = solve_F(order).substitute("t", 1)
    hit = _theorem3_residual(H, order).first_nonzero()
    if hit is not None:
        raise SelfCheckError(
            f"jumps series failed its closed form at x^{hit[0]}: {hit[1]}")
    return H


def _theorem5_residual(J: Series, order: int) -> Series:
    # (t*sqrt(1-4x) - t + 2)*J - 2
    front = catalan_radical(order) * _T + Series.constant(
        Poly2({(1, 0): -1, (0, 0): 2}), order)
    return front * J - 2


@lru_cache(maxsize=4)
def solve_Jdepth(order: int) -> Series:
    """J(x,t), trees weighted t^depth: the inverse of 1 - x*t*f(x).

    Verified against its closed form before being returned.
    """
    f = solve_catalan(order)
    J = (1 - (f * _T).shift_x()).inverse().truncate(order)
    hit = _theorem5_residual(J, order).first_nonzero()
    if hit is not None:
        raise SelfCheckError(
            f"depth series failed its closed form at x^{hit[0]}: {hit[1]}")
    return J


def _theorem6_residual(K: Series, order: int) -> Series:
    # (sqrt(1-4qx) - 1 + 2q)*K - 2q
    front = jumpdist_radical(order) + Series.constant(
        Poly2({(0, 0): -1, (0, 1): 2}), order)
    return front * K - Series.constant(Poly2.term(2, eq=1), order)


@lru_cache(maxsize=4)
def solve_K(order: int) -> Series:
    """K(x,q), trees weighted q^jumpdist.

    Built from the depth series by the complement rule
    jumpdist = internal - depth: the x^n coefficient sum(a_d * t^d) of J
    becomes sum(a_d * q^(n-d)).  Exponents out of range mean the depth
    series is corrupt.  Verified against its closed form before return.
    """
    J = solve_Jdepth(order)
    coeffs = []
    for n, poly in enumerate(J.coefficients()):
        acc = {}
        for (et, eq), v in poly.items():
            if eq != 0 or et > n:
                raise SelfCheckError(
                    f"depth series coefficient x^{n} has a bad term "
                    f"t^{et}*q^{eq}")
            acc[(0, n - et)] = v
        coeffs.append(Poly2(acc))
    K = Series(coeffs)
    hit = _theorem6_residual(K, order).first_nonzero()
    if hit is not None:
        raise SelfCheckError(
            f"jump-distance series failed its closed form at x^{hit[0]}: {hit[1]}")
    return K


# --- verdicts ---------------------------------------------------------------

def verify_theorem(theorem: int | str, order: int,
                   oracle_cap: int = DEFAULT_ORACLE_CAP) -> Verdict:
    """Run one identity check and report a Verdict (never raises on a
    failed identity; raises only on unknown ids or bad arguments).

    For id 1 the exhaustive enumeration is compared up to
    min(order, oracle_cap); everything else runs at the full order.
    """
    tid = str(theorem)
    if tid not in THEOREM_IDS:
        raise ValueError(f"unknown theorem id {theorem!r}, expected 0..6")
    if order < 0:
        raise ValueError("order must be >= 0")

    if tid == "0":
        f = solve_catalan(order)
        fixed = f - (1 + (f * f).shift_x())
        radical = f.shift_x() * 2 - 1 + catalan_radical(order)
        for residual in (fixed, radical):
            hit = residual.first_nonzero()
            if hit is not None:
                return Verdict(tid, order, False, FirstFailure(hit[0], hit[1]))
        return Verdict(tid, order, True)

    if tid == "1":
        upto = min(order, oracle_cap)
        # the cap was asked for explicitly, so it doubles as the refusal cap
        oracle = brute_force_enumerator(upto, cap=upto)
        F = solve_F(order)
        for n in range(upto + 1):
            diff = F.coefficient(n) - oracle.coefficient(n)
            if not diff.is_zero():
                return Verdict(tid, order, False, FirstFailure(n, diff))
        return Verdict(tid, order, True)

    if tid == "2":
        return verify_F_closed_form(order)

    if tid == "3":
        H = solve_F(order).substitute("t", 1)
        return verdict_from_residual(tid, order, _theorem3_residual(H, order))

    if tid == "4":
        J = solve_Jdepth(order)
        at1 = J.substitute("t", 1)
        residual = J - 1 - (at1 * J).shift_x() * _T
        return verdict_from_residual(tid, order, residual)

    if tid == "5":
        J = solve_Jdepth(order)
        return verdict_from_residual(tid, order, _theorem5_residual(J, order))

    K = solve_K(order)
    return verdict_from_residual("6", order, _theorem6_residual(K, order))
