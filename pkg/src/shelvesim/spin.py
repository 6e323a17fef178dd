"""Angular-momentum coefficients and operators.

Wigner 3j symbols are evaluated with the Racah sum over exact integer
factorial ratios (``fractions.Fraction``), so the only rounding is the final
square root.  Half-integer arguments are stored as doubled integers.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .operators import OperatorMatrix

__all__ = ["ThreeJArgs", "wigner3j", "angular_momentum_ops", "zeeman_x_coupling"]


def _doubled(x, name: str) -> int:
    two = 2 * x
    rounded = int(round(two))
    if abs(two - rounded) > 1e-9:
        raise ValueError(f"{name} = {x} is not on the half-integer grid")
    return rounded


@dataclass(frozen=True)
class ThreeJArgs:
    """Arguments of a 3j symbol, stored as doubled integers."""

    two_j1: int
    two_j2: int
    two_j3: int
    two_m1: int
    two_m2: int
    two_m3: int

    @classmethod
    def of(cls, j1, j2, j3, m1, m2, m3) -> "ThreeJArgs":
        vals = {"j1": j1, "j2": j2, "j3": j3, "m1": m1, "m2": m2, "m3": m3}
        doubled = {k: _doubled(v, k) for k, v in vals.items()}
        for jk, mk in (("j1", "m1"), ("j2", "m2"), ("j3", "m3")):
            if doubled[jk] < 0:
                raise ValueError(f"{jk} must be nonnegative, got {vals[jk]}")
            if abs(doubled[mk]) > doubled[jk]:
                raise ValueError(f"|{mk}| exceeds {jk}: {vals[mk]} vs {vals[jk]}")
            if (doubled[jk] - doubled[mk]) % 2 != 0:
                raise ValueError(f"{jk} and {mk} are not on the same half-integer grid")
        return cls(
            doubled["j1"], doubled["j2"], doubled["j3"],
            doubled["m1"], doubled["m2"], doubled["m3"],
        )


def _selection_rules_pass(a: ThreeJArgs) -> bool:
    if a.two_m1 + a.two_m2 + a.two_m3 != 0:
        return False
    # triangle condition and integer total angular momentum
    if (a.two_j1 + a.two_j2 + a.two_j3) % 2 != 0:
        return False
    if a.two_j3 < abs(a.two_j1 - a.two_j2) or a.two_j3 > a.two_j1 + a.two_j2:
        return False
    return True


def wigner3j(j1, j2=None, j3=None, m1=None, m2=None, m3=None) -> float:
    """Wigner 3j symbol via the Racah closed-form sum.

    Accepts either six half-integers or a single :class:`ThreeJArgs`.
    Selection-rule violations (triangle condition, m-sum) return 0 by
    definition.  Arguments off the half-integer grid raise ``ValueError``.
    """
    args = j1 if isinstance(j1, ThreeJArgs) else ThreeJArgs.of(j1, j2, j3, m1, m2, m3)
    if not _selection_rules_pass(args):
        return 0.0

    # All factorial arguments below are integers once the selection rules hold.
    tj1, tj2, tj3 = args.two_j1, args.two_j2, args.two_j3
    tm1, tm2, tm3 = args.two_m1, args.two_m2, args.two_m3

    def f(two_n: int) -> int:
        return math.factorial(two_n // 2)

    delta2 = Fraction(
        f(tj1 + tj2 - tj3) * f(tj1 - tj2 + tj3) * f(-tj1 + tj2 + tj3),
        f(tj1 + tj2 + tj3 + 2),
    )
    prod = (
        f(tj1 + tm1) * f(tj1 - tm1)
        * f(tj2 + tm2) * f(tj2 - tm2)
        * f(tj3 + tm3) * f(tj3 - tm3)
    )

    k_min = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    k_max = min(
        (tj1 + tj2 - tj3) // 2,
        (tj1 - tm1) // 2,
        (tj2 + tm2) // 2,
    )
    total = Fraction(0)
    for k in range(k_min, k_max + 1):
        denom = (
            math.factorial(k)
            * f(tj1 + tj2 - tj3 - 2 * k)
            * f(tj1 - tm1 - 2 * k)
            * f(tj2 + tm2 - 2 * k)
            * f(tj3 - tj2 + tm1 + 2 * k)
            * f(tj3 - tj1 - tm2 + 2 * k)
        )
        total += Fraction((-1) ** k, denom)
    if total == 0:
        return 0.0

    sign = (-1) ** ((tj1 - tj2 - tm3) // 2) * (1 if total > 0 else -1)
    value2 = delta2 * prod * total * total  # exact rational square
    return sign * math.sqrt(float(value2))


def angular_momentum_ops(f):
    """Standard angular momentum matrices for total spin ``f``.

    Returns ``(Fx, Fy, Fz, Fplus, Fminus)`` in the ``|f, m>`` basis ordered
    ``m = -f ... +f``.
    """
    two_f = _doubled(f, "f")
    if two_f < 0:
        raise ValueError(f"f must be nonnegative, got {f}")
    dim = two_f + 1
    ms = np.array([(-two_f + 2 * k) / 2 for k in range(dim)])
    fp = np.zeros((dim, dim), dtype=np.complex128)
    fval = two_f / 2
    for k in range(dim - 1):
        m = ms[k]
        fp[k + 1, k] = math.sqrt(fval * (fval + 1) - m * (m + 1))
    fm = fp.conj().T
    fx = (fp + fm) / 2
    fy = (fp - fm) / (2j)
    fz = np.diag(ms).astype(np.complex128)
    return tuple(OperatorMatrix(a) for a in (fx, fy, fz, fp, fm))


def zeeman_x_coupling(f) -> OperatorMatrix:
    """x-component of the spin operator assembled from 3j symbols.

    Uses the Wigner-Eckart theorem with reduced matrix element
    ``sqrt(f (f+1) (2f+1))`` and the covariant spherical components
    ``F_{+-1} = -+ (Fx +- i Fy) / sqrt(2)``, so that the result equals the
    ladder-built ``Fx`` from :func:`angular_momentum_ops`.
    """
    two_f = _doubled(f, "f")
    dim = two_f + 1
    fval = two_f / 2
    reduced = math.sqrt(fval * (fval + 1) * (2 * fval + 1))
    ms = [(-two_f + 2 * k) / 2 for k in range(dim)]
    out = np.zeros((dim, dim), dtype=np.complex128)
    for i, mi in enumerate(ms):
        for j, mj in enumerate(ms):
            # Fx = (F_{-1} - F_{+1}) / sqrt(2)
            elem = 0.0
            for q, weight in ((-1, 1 / math.sqrt(2)), (+1, -1 / math.sqrt(2))):
                elem += weight * reduced * (-1) ** (fval - mi) * wigner3j(
                    fval, 1, fval, -mi, q, mj
                )
            out[i, j] = elem
    return OperatorMatrix(out)
