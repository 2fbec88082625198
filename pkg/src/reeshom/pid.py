"""Exact linear algebra over k[t] and k[t, 1/t]: Smith normal forms with
recorded unimodular transforms, and the two injective models of the graded
category of k[t] (the graded fraction ring J, and the t-torsion divisible
module supported at the graded maximal ideal).

Univariate polynomials are coefficient tuples over the field; a Laurent
element is a t-power valuation together with a polynomial of nonzero
constant term.  Units of the Laurent ring are exactly c * t^k, so canonical
invariant factors are monic with nonzero constant term there.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import inf

from .errors import InternalError, ValidationError
from .homalg import FPModule
from .poly import Field


# ---------------------------------------------------------------------------
# dense univariate polynomials as coefficient tuples (index = exponent)

def _trim(coeffs):
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


def u_zero():
    return ()


def u_const(field: Field, c):
    return (c,) if c else ()


def u_var(field: Field):
    return (field.zero, field.one)


def u_deg(a):
    return len(a) - 1 if a else -1


def u_add(field, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else field.zero
        y = b[i] if i < len(b) else field.zero
        out.append(field.add(x, y))
    return _trim(out)


def u_neg(field, a):
    return tuple(field.neg(c) for c in a)


def u_sub(field, a, b):
    return u_add(field, a, u_neg(field, b))


def u_mul(field, a, b):
    if not a or not b:
        return ()
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = field.add(out[i + j], field.mul(x, y))
    return _trim(out)


def u_scale(field, a, c):
    if not c:
        return ()
    return _trim([field.mul(x, c) for x in a])


def u_shift(a, k, field):
    """Multiply by t^k (k >= 0)."""
    if not a:
        return ()
    return (field.zero,) * k + tuple(a)


def u_divmod(field, a, b):
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    q = [field.zero] * max(0, len(a) - len(b) + 1)
    r = list(a)
    inv_lead = field.inv(b[-1])
    while len(r) >= len(b):
        if not r[-1]:
            r.pop()
            continue
        shift = len(r) - len(b)
        factor = field.mul(r[-1], inv_lead)
        q[shift] = factor
        for i, c in enumerate(b):
            r[shift + i] = field.sub(r[shift + i], field.mul(factor, c))
        r.pop()
    return _trim(q), _trim(r)


def u_monic(field, a):
    if not a:
        return field.one, ()
    lead = a[-1]
    if lead == field.one:
        return field.one, tuple(a)
    return lead, u_scale(field, a, field.inv(lead))


def u_gcd(field, a, b):
    while b:
        _, a = u_divmod(field, a, b)
        a, b = b, a
    return u_monic(field, a)[1]


def u_valuation(a):
    """Largest k with t^k dividing a; 0 for a = 0 by convention here."""
    if not a:
        return 0
    k = 0
    while not a[k]:
        k += 1
    return k


def u_from_poly(p) -> tuple:
    """Convert a one-variable Polynomial into a coefficient tuple."""
    if p.ring.nvars != 1:
        raise ValidationError("expected a univariate polynomial")
    out = [p.ring.field.zero] * (
        (max(e[0] for e, _ in p.terms) + 1) if p.terms else 0
    )
    for (e,), c in p.terms:
        out[e] = c
    return _trim(out)


def u_str(a, name="t"):
    if not a:
        return "0"
    parts = []
    for e in range(len(a) - 1, -1, -1):
        c = a[e]
        if not c:
            continue
        if e == 0:
            parts.append(f"{c}")
        elif e == 1:
            parts.append(f"{c}*{name}" if c != 1 else name)
        else:
            parts.append(f"{c}*{name}^{e}" if c != 1 else f"{name}^{e}")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# the two Euclidean coefficient rings

class PIDRing:
    """k[t] ('poly') or k[t, 1/t] ('laurent'); elements are (valuation, coeffs)
    pairs in the Laurent case and plain coefficient tuples otherwise."""

    __slots__ = ("field", "laurent")

    def __init__(self, field: Field, laurent: bool):
        self.field = field
        self.laurent = laurent

    def zero(self):
        return (0, ()) if self.laurent else ()

    def one(self):
        return (0, (self.field.one,)) if self.laurent else (self.field.one,)

    def from_upoly(self, a):
        a = _trim(a)
        if not self.laurent:
            return a
        if not a:
            return (0, ())
        v = u_valuation(a)
        return (v, _trim(a[v:]))

    def is_zero(self, x):
        return not x[1] if self.laurent else not x

    def add(self, x, y):
        f = self.field
        if not self.laurent:
            return u_add(f, x, y)
        (va, a), (vb, b) = x, y
        if not a:
            return (vb, b)
        if not b:
            return (va, a)
        v = min(va, vb)
        s = u_add(f, u_shift(a, va - v, f), u_shift(b, vb - v, f))
        if not s:
            return (0, ())
        vs = u_valuation(s)
        return (v + vs, _trim(s[vs:]))

    def neg(self, x):
        if not self.laurent:
            return u_neg(self.field, x)
        return (x[0], u_neg(self.field, x[1]))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        f = self.field
        if not self.laurent:
            return u_mul(f, x, y)
        return (x[0] + y[0], u_mul(f, x[1], y[1])) if x[1] and y[1] else (0, ())

    def size(self, x):
        """Euclidean size: degree, ignoring t-power units in the Laurent case."""
        if self.is_zero(x):
            return -1
        return u_deg(x[1]) if self.laurent else u_deg(x)

    def is_unit(self, x):
        return self.size(x) == 0

    def divmod(self, x, y):
        f = self.field
        if not self.laurent:
            return u_divmod(f, x, y)
        (va, a), (vb, b) = x, y
        if not b:
            raise ZeroDivisionError("Laurent division by zero")
        if not a:
            return (0, ()), (0, ())
        # x = t^(va-vb) q * y + t^va r  with size(r) < size(y)
        q, r = u_divmod(f, a, b)
        quotient = (va - vb, q) if q else (0, ())
        if not r:
            return quotient, (0, ())
        vr = u_valuation(r)
        return quotient, (va + vr, _trim(r[vr:]))

    def normalize(self, x):
        """Return (unit, canonical) with x = unit * canonical; canonical is
        monic (and of zero valuation in the Laurent case)."""
        f = self.field
        if self.is_zero(x):
            return self.one(), self.zero()
        if not self.laurent:
            lead, mon = u_monic(f, x)
            return u_const(f, lead), mon
        v, a = x
        lead, mon = u_monic(f, a)
        return (v, (lead,)), (0, mon)

    def to_str(self, x):
        if not self.laurent:
            return u_str(x)
        v, a = x
        if not a:
            return "0"
        body = u_str(a)
        if v == 0:
            return body
        return f"t^{v}*({body})"


@dataclass
class PIDMatrix:
    ring: PIDRing
    entries: list  # list of rows

    @property
    def nrows(self):
        return len(self.entries)

    @property
    def ncols(self):
        return len(self.entries[0]) if self.entries else 0

    @staticmethod
    def from_upolys(ring: PIDRing, rows):
        return PIDMatrix(ring, [[ring.from_upoly(x) for x in row] for row in rows])


@dataclass
class SmithForm:
    """U * A * V = D diagonal, with the invariant factors in a divisibility
    chain and units normalized away."""

    invariant_factors: list
    diagonal: list
    U: list
    V: list


def _identity(ring: PIDRing, n):
    return [
        [ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)
    ]


def smith_normal_form(matrix: PIDMatrix) -> SmithForm:
    ring = matrix.ring
    D = [list(row) for row in matrix.entries]
    m = matrix.nrows
    n = matrix.ncols
    U = _identity(ring, m)
    V = _identity(ring, n)

    def row_op(i1, i2, q):
        """row i2 -= q * row i1"""
        for j in range(n):
            D[i2][j] = ring.sub(D[i2][j], ring.mul(q, D[i1][j]))
        for j in range(m):
            U[i2][j] = ring.sub(U[i2][j], ring.mul(q, U[i1][j]))

    def col_op(j1, j2, q):
        for i in range(m):
            D[i][j2] = ring.sub(D[i][j2], ring.mul(q, D[i][j1]))
        for i in range(n):
            V[i][j2] = ring.sub(V[i][j2], ring.mul(q, V[i][j1]))

    def row_swap(i1, i2):
        D[i1], D[i2] = D[i2], D[i1]
        U[i1], U[i2] = U[i2], U[i1]

    def col_swap(j1, j2):
        for i in range(m):
            D[i][j1], D[i][j2] = D[i][j2], D[i][j1]
        for i in range(n):
            V[i][j1], V[i][j2] = V[i][j2], V[i][j1]

    for k in range(min(m, n)):
        while True:
            pivot = None
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    if not ring.is_zero(D[i][j]):
                        s = ring.size(D[i][j])
                        if best is None or s < best:
                            best = s
                            pivot = (i, j)
            if pivot is None:
                break
            i, j = pivot
            if i != k:
                row_swap(k, i)
            if j != k:
                col_swap(k, j)
            dirty = False
            for i in range(k + 1, m):
                if ring.is_zero(D[i][k]):
                    continue
                q, r = ring.divmod(D[i][k], D[k][k])
                row_op(k, i, q)
                if not ring.is_zero(r):
                    dirty = True
            for j in range(k + 1, n):
                if ring.is_zero(D[k][j]):
                    continue
                q, r = ring.divmod(D[k][j], D[k][k])
                col_op(k, j, q)
                if not ring.is_zero(r):
                    dirty = True
            if dirty:
                continue
            if any(not ring.is_zero(D[i][k]) for i in range(k + 1, m)) or any(
                not ring.is_zero(D[k][j]) for j in range(k + 1, n)
            ):
                continue
            # enforce divisibility of the remaining block by the pivot
            offender = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if ring.is_zero(D[i][j]):
                        continue
                    _, r = ring.divmod(D[i][j], D[k][k])
                    if not ring.is_zero(r):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(offender, k, ring.neg(ring.one()))  # row k += row offender

    diagonal = []
    factors = []
    for k in range(min(m, n)):
        unit, _ = ring.normalize(D[k][k])
        if not ring.is_zero(D[k][k]):
            # scale row k by unit^{-1}: with units c*t^v this is exact
            inv_unit = _unit_inverse(ring, unit)
            for j in range(n):
                D[k][j] = ring.mul(inv_unit, D[k][j])
            for j in range(m):
                U[k][j] = ring.mul(inv_unit, U[k][j])
        diagonal.append(D[k][k])
        if not ring.is_zero(D[k][k]):
            factors.append(D[k][k])
    return SmithForm(factors, diagonal, U, V)


def _unit_inverse(ring: PIDRing, unit):
    field = ring.field
    if ring.laurent:
        v, a = unit
        if u_deg(a) != 0:
            raise InternalError("Laurent unit must be c * t^v")
        return (-v, (field.inv(a[0]),))
    if u_deg(unit) != 0:
        raise InternalError("polynomial unit must be a constant")
    return (field.inv(unit[0]),)


def matrix_product(ring: PIDRing, A, B):
    rows = len(A)
    mid = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ring.zero()
            for k in range(mid):
                acc = ring.add(acc, ring.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(row)
    return out


def determinant(ring: PIDRing, A):
    n = len(A)
    if n == 0:
        return ring.one()
    if n == 1:
        return A[0][0]
    acc = ring.zero()
    sign = False
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = ring.mul(A[0][j], determinant(ring, minor))
        acc = ring.sub(acc, term) if sign else ring.add(acc, term)
        sign = not sign
    return acc


# ---------------------------------------------------------------------------
# module decomposition over k[t] and the injective models

def module_decomposition(module: FPModule):
    """Invariant factors (as k[t] coefficient tuples, monic, nonunit) and the
    free rank of a finitely presented module over a one-variable ring."""
    ring = module.ring
    if ring.nvars != 1:
        raise ValidationError("decomposition requires a one-variable ring")
    pid = PIDRing(ring.field, laurent=False)
    rows = [
        [u_from_poly(p) for p in row] for row in module.presentation.entries
    ]
    m = module.ambient.rank
    if not rows or not rows[0]:
        return [], m
    snf = smith_normal_form(PIDMatrix.from_upolys(pid, rows))
    factors = []
    zero_diag = 0
    for d in snf.diagonal:
        if pid.is_zero(d):
            zero_diag += 1
        elif not pid.is_unit(d):
            factors.append(d)
    free_rank = m - (len(snf.diagonal) - zero_diag)
    return factors, free_rank


class InjectiveModel:
    """Intensional model of a graded-injective k[t]-module.

    'J' is the graded fraction ring k[t, 1/t]: one-dimensional in every
    degree, with t acting bijectively.  'TorsionAtZero' is k[t, 1/t]/k[t]:
    one-dimensional in every negative degree, killed by high powers of t and
    t-divisible.  'FreeControl' models k[t] itself and is only used as the
    deliberately failing control in the graded Baer check.
    """

    KINDS = ("J", "TorsionAtZero", "FreeControl")

    def __init__(self, which: str):
        if which not in self.KINDS:
            raise ValidationError(f"unknown injective model {which!r}")
        self.which = which

    def piece_dim(self, degree: int) -> int:
        if self.which == "J":
            return 1
        if self.which == "TorsionAtZero":
            return 1 if degree < 0 else 0
        return 1 if degree >= 0 else 0

    def t_power_surjective(self, n: int, degree: int) -> bool:
        """Is t^n : piece(degree) -> piece(degree+n) onto?  Exact by the
        model's action rules on the one-dimensional pieces."""
        src = self.piece_dim(degree)
        tgt = self.piece_dim(degree + n)
        if tgt == 0:
            return True
        if src == 0:
            return False
        if self.which == "J":
            return True  # t^n maps the basis vector t^d to t^(d+n)
        if self.which == "TorsionAtZero":
            # t^n kills t^{-j} for j <= n; the image piece must come from
            # degree-(d) basis vector with d + n < 0
            return degree + n < 0
        return True  # FreeControl with src == tgt == 1


def ext_against_injective_model(module: FPModule, model: InjectiveModel, q: int):
    """dim_k Ext^q(module, model) over k[t]; exact via Smith normal form.

    The model is not finitely presented, but Hom and Ext out of a cyclic
    piece k[t]/(d) only see d acting on the model: for J the cokernel has
    dimension deg(d with its t-power stripped) and the kernel vanishes; for
    the divisible torsion model the cokernel vanishes and the kernel has
    dimension val_t(d).
    """
    if model.which == "FreeControl":
        raise ValidationError("the free control is only for the Baer check")
    if q < 0:
        raise ValidationError("Ext index must be nonnegative")
    factors, free_rank = module_decomposition(module)
    field = module.ring.field
    if q >= 2:
        return 0
    if q == 0:
        if free_rank > 0:
            return inf  # Hom(k[t], model) is the model itself
        total = 0
        for d in factors:
            if model.which == "TorsionAtZero":
                total += u_valuation(d)
            # J is torsion free: Hom(k[t]/(d), J) = 0
        return total
    total = 0
    for d in factors:
        v = u_valuation(d)
        stripped = _trim(d[v:])
        if model.which == "J":
            total += u_deg(stripped)
        else:
            # TorsionAtZero is divisible: certified by t-divisibility (shift)
            # plus invertibility of the stripped factor on each t-torsion
            # layer, which needs exactly a nonzero constant term
            if not stripped or not stripped[0]:
                raise InternalError("stripped invariant factor lost its unit part")
    return total


def graded_baer_check(nmax: int, model: InjectiveModel, window: int = 10):
    """Graded Baer criterion over k[t] against the graded ideals (t^n).

    A degree-i map (t^n) -> X extends to k[t] iff the i-th graded piece of X
    maps onto the (n+i)-th under t^n.  Returns (passed, first_failure).
    """
    if nmax < 1:
        raise ValidationError("nmax must be at least 1")
    for n in range(1, nmax + 1):
        for degree in range(-window, window + 1):
            if not model.t_power_surjective(n, degree):
                return False, {"n": n, "degree": degree}
    return True, None


def graded_baer_check_J(nmax: int, window: int = 10):
    passed, failure = graded_baer_check(nmax, InjectiveModel("J"), window)
    return passed


def ungraded_injectivity_probe(model: InjectiveModel, probes):
    """Per-probe Ext^1 and Ext^2 dimensions against the model."""
    table = []
    for name, module in probes:
        ext1 = ext_against_injective_model(module, model, 1)
        ext2 = ext_against_injective_model(module, model, 2)
        table.append({"probe": name, "ext1": ext1, "ext2": ext2})
    return table
