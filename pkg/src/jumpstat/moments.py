"""Exact moment tables for the jump statistics, and their closed forms.

For a statistic with weight series sum(c_n(q) * x^n), applying the
operator q*d/dq a total of r times and then setting q=1 turns the x^n
coefficient into sum(value^r) over all trees of size n.  Dividing by the
tree count gives the raw moment m_r; moments about the mean follow from
the binomial transform

    mu_r = sum(binomial(r, k) * (-m_1)^(r-k) * m_k, k=0..r).

Scaled moments divide by the appropriate power of the variance: even
orders as mu_2k / mu_2^k, odd orders as the pair (sign of mu_r,
mu_r^2 / mu_2^r) so everything stays rational.  Rows where mu_2 = 0
(sizes 0 and 1) mark the scaled columns undefined.

``REFERENCE_FORMULAS`` holds the nine closed forms the tables are checked
against, tagged 7.1-7.5 (jumps) and 8.1-8.4 (jump distance).  The odd one
out is 8.3: it is stored squared, and the underlying quantity is negative
at n=3, so its sign is only required to be positive from n=4 on.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .algebra import Poly2, Series
from .genfunc import SelfCheckError, solve_H, solve_K
from .guess import RationalFunctionN
from .trees import catalan

DEFAULT_MAX_MOMENT = 4
DEFAULT_N_MAX = 60

STATS = ("jumps", "jumpdist")

_Q = Poly2.term(1, eq=1)


def q_log_derivative_power(series: Series, r: int) -> Series:
    """Apply (q * d/dq) to every coefficient, r times.

    The input must be free of the t marker (take it out first by
    substitution); anything else is an upstream mistake worth an error.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    for n, c in enumerate(series.coefficients()):
        if c.degree_t() > 0:
            raise ValueError(
                f"series still carries the t marker at x^{n}: {c}")
    out = series
    for _ in range(r):
        out = Series([c.q_derivative() * _Q for c in out.coefficients()])
    return out


@dataclass(frozen=True)
class MomentRow:
    n: int
    count: int
    raw: tuple[Fraction, ...]                       # m_1 .. m_R
    central: tuple[Fraction, ...]                   # mu_2 .. mu_R
    scaled_even: dict[int, Fraction]                # r -> mu_r / mu_2^(r/2)
    scaled_odd_squared: dict[int, tuple[int, Fraction]]  # r -> (sign, value)
    variance_defined: bool

    def raw_moment(self, r: int) -> Fraction:
        if not 1 <= r <= len(self.raw):
            raise IndexError(f"raw moment {r} not tabulated")
        return self.raw[r - 1]

    def central_moment(self, r: int) -> Fraction:
        if not 2 <= r <= len(self.central) + 1:
            raise IndexError(f"central moment {r} not tabulated")
        return self.central[r - 2]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "b_n": self.count,
            "raw": [str(v) for v in self.raw],
            "central": [str(v) for v in self.central],
            "scaled_even": {str(r): str(v)
                            for r, v in sorted(self.scaled_even.items())},
            "scaled_odd_squared": {
                str(r): {"sign": s, "value": str(v)}
                for r, (s, v) in sorted(self.scaled_odd_squared.items())},
            "variance_defined": self.variance_defined,
        }


@dataclass(frozen=True)
class MomentTable:
    stat: str
    max_moment: int
    n_max: int
    rows: tuple[MomentRow, ...]   # index == n, 0..n_max

    def row(self, n: int) -> MomentRow:
        return self.rows[n]

    def to_json(self) -> dict:
        return {"stat": self.stat, "max_moment": self.max_moment,
                "n_max": self.n_max,
                "rows": [row.to_json() for row in self.rows]}

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def to_csv(self) -> str:
        """One row per size; exact values as p/q strings, blanks where a
        scaled column is undefined."""
        header = ["n", "b_n"]
        header += [f"m_{r}" for r in range(1, self.max_moment + 1)]
        header += [f"mu_{r}" for r in range(2, self.max_moment + 1)]
        for r in range(2, self.max_moment + 1):
            if r % 2 == 0:
                header.append(f"scaled_{r}")
            else:
                header += [f"scaled_{r}_sign", f"scaled_{r}_sq"]
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in self.rows:
            record = [row.n, row.count]
            record += [str(v) for v in row.raw]
            record += [str(v) for v in row.central]
            for r in range(2, self.max_moment + 1):
                if r % 2 == 0:
                    v = row.scaled_even.get(r)
                    record.append("" if v is None else str(v))
                else:
                    sv = row.scaled_odd_squared.get(r)
                    record += ["", ""] if sv is None else [sv[0], str(sv[1])]
            writer.writerow(record)
        return out.getvalue()


def moment_table(stat: str, max_moment: int = DEFAULT_MAX_MOMENT,
                 n_max: int = DEFAULT_N_MAX) -> MomentTable:
    """Exact moments of one statistic for every size 0..n_max.

    The underlying series is solved at order n_max (and so runs through
    its own closed-form verification); the tree counts it implies are
    additionally cross-checked against the direct binomial formula.
    """
    if stat not in STATS:
        raise ValueError(f"unknown statistic {stat!r}, expected one of {STATS}")
    if max_moment < 1:
        raise ValueError("max_moment must be >= 1")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    series = solve_H(n_max) if stat == "jumps" else solve_K(n_max)

    def at_one(s: Series) -> list[Fraction]:
        return [c.substitute("q", 1).constant_value()
                for c in s.coefficients()]

    sums = [at_one(series)]           # sums[r][n] = sum of value^r over trees
    cur = series
    for _ in range(max_moment):
        cur = q_log_derivative_power(cur, 1)
        sums.append(at_one(cur))

    rows = []
    for n in range(n_max + 1):
        count = sums[0][n]
        if count != catalan(n):
            raise SelfCheckError(
                f"series tree count at x^{n} is {count}, expected {catalan(n)}")
        b = Fraction(count)
        m = [Fraction(1)] + [sums[r][n] / b for r in range(1, max_moment + 1)]
        central = []
        for r in range(2, max_moment + 1):
            mu = sum((comb(r, k) * (-m[1]) ** (r - k) * m[k]
                      for k in range(r + 1)), Fraction(0))
            central.append(mu)
        mu2 = central[0] if central else Fraction(0)
        scaled_even: dict[int, Fraction] = {}
        scaled_odd: dict[int, tuple[int, Fraction]] = {}
        if mu2 > 0:
            for r in range(2, max_moment + 1):
                mu_r = central[r - 2]
                if r % 2 == 0:
                    scaled_even[r] = mu_r / mu2 ** (r // 2)
                else:
                    sign = (mu_r > 0) - (mu_r < 0)
                    scaled_odd[r] = (sign, mu_r ** 2 / mu2 ** r)
        rows.append(MomentRow(
            n=n, count=int(count), raw=tuple(m[1:]), central=tuple(central),
            scaled_even=scaled_even, scaled_odd_squared=scaled_odd,
            variance_defined=mu2 > 0))
    return MomentTable(stat=stat, max_moment=max_moment, n_max=n_max,
                       rows=tuple(rows))


# --- reference closed forms ---------------------------------------------------

@dataclass(frozen=True)
class ReferenceFormula:
    """One tabulated closed form for a moment column.

    kind is "raw", "central", "scaled" (even r, mu_r / mu_2^(r/2)) or
    "scaled_squared" (odd r, the square of the scaled moment).  For
    "scaled_squared", sign_positive_from gives the size from which the
    unsquared quantity must be positive.
    """

    tag: str
    stat: str
    kind: str
    r: int
    formula: RationalFunctionN
    sign_positive_from: int | None = None

    def to_json(self) -> dict:
        return {"theorem": self.tag, "stat": self.stat, "kind": self.kind,
                "r": self.r, "formula": self.formula.to_json(),
                "limit": self.formula.limit_at_infinity().to_json()}


REFERENCE_FORMULAS: tuple[ReferenceFormula, ...] = (
    ReferenceFormula("7.1", "jumps", "raw", 1,
                     RationalFunctionN((-1, 1), (2,))),
    ReferenceFormula("7.2", "jumps", "central", 2,
                     RationalFunctionN((-1, 0, 1), (-4, 8))),
    ReferenceFormula("7.3", "jumps", "scaled", 4,
                     RationalFunctionN((3, -2, -11, 6), (3, -2, -3, 2))),
    ReferenceFormula("7.4", "jumps", "scaled", 6,
                     RationalFunctionN((15, -16, -82, -20, 391, -300, 60),
                                       (15, -16, -26, 32, 7, -16, 4))),
    ReferenceFormula("7.5", "jumps", "scaled", 8,
                     RationalFunctionN(
                         (105, -142, -1167, 3178, -6937, 23070, -38933,
                          27006, -7980, 840),
                         (105, -142, -255, 418, 135, -402, 75, 118, -60, 8))),
    ReferenceFormula("8.1", "jumpdist", "raw", 1,
                     RationalFunctionN((0, -1, 1), (2, 1))),
    ReferenceFormula("8.2", "jumpdist", "central", 2,
                     RationalFunctionN((0, -2, -2, 4), (12, 16, 7, 1))),
    ReferenceFormula("8.3", "jumpdist", "scaled_squared", 3,
                     RationalFunctionN((0, 108, -72, -9, 9),
                                       (-32, -48, 46, 30, 4)),
                     sign_positive_from=4),
    ReferenceFormula("8.4", "jumpdist", "scaled", 4,
                     RationalFunctionN((-48, -172, -34, -45, 58, 25),
                                       (0, -40, -58, 60, 34, 4))),
)


@dataclass(frozen=True)
class FormulaCheck:
    """Outcome of comparing one reference formula against a table."""

    tag: str
    passed: bool
    checked_from: int
    checked_to: int
    first_mismatch_n: int | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"theorem": self.tag, "pass": self.passed,
                "checked_from": self.checked_from,
                "checked_to": self.checked_to,
                "first_mismatch_n": self.first_mismatch_n,
                "detail": self.detail}


def _table_value(row: MomentRow, ref: ReferenceFormula):
    if ref.kind == "raw":
        return row.raw_moment(ref.r)
    if ref.kind == "central":
        return row.central_moment(ref.r)
    if ref.kind == "scaled":
        return row.scaled_even.get(ref.r)
    return row.scaled_odd_squared.get(ref.r)


def check_closed_forms(table: MomentTable, n_from: int = 2) -> list[FormulaCheck]:
    """Compare every applicable reference formula against the table.

    Applicable means: same statistic and moment order within the table.
    Comparison runs over n_from..n_max and is exact; for 8.3 both the
    squared value (everywhere) and the sign (from its threshold on) are
    required to agree.
    """
    n_from = max(n_from, 2)
    checks = []
    for ref in REFERENCE_FORMULAS:
        if ref.stat != table.stat or ref.r > table.max_moment:
            continue
        passed = True
        mismatch = None
        detail = ""
        for n in range(n_from, table.n_max + 1):
            expected = ref.formula.evaluate(n)
            got = _table_value(table.row(n), ref)
            if ref.kind == "scaled_squared":
                if got is None:
                    passed, mismatch = False, n
                    detail = "scaled moment undefined"
                    break
                sign, value = got
                if value != expected:
                    passed, mismatch = False, n
                    detail = f"squared value {value} != {expected}"
                    break
                if (ref.sign_positive_from is not None
                        and n >= ref.sign_positive_from and sign != 1):
                    passed, mismatch = False, n
                    detail = f"sign {sign} where positive is required"
                    break
            else:
                if got is None or got != expected:
                    passed, mismatch = False, n
                    detail = f"value {got} != {expected}"
                    break
        checks.append(FormulaCheck(ref.tag, passed, n_from, table.n_max,
                                   mismatch, detail))
    return checks
