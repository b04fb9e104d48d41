"""Independent character-table oracle for GL(2) over a small finite field.

The cuspidal characters of GL_2(F_q) are computed exactly inside prime
fields Z/P chosen so that P = 1 mod q^2-1 and P exceeds the group order:
a fixed element zeta of multiplicative order q^2-1 plays the role of a
primitive root of unity, every character value is a residue, and any
integer eventually extracted (a dimension, a sign) lifts unambiguously.
Every table is built in two independent contexts and all certified
identities must agree between them, so a soundness failure would require
the same accident modulo two unrelated primes.

The elliptic values -(theta(x) + theta(x^q)) are the anchor; the central,
unipotent and split values are the classical ones and are never trusted
bare: they are gated by the orthonormality, degree and cuspidality
certificates before a table is usable.

No character-level formula from the parameter side enters here: that is
the point.  Sums over subgroups are evaluated element by element through
conjugacy-class identification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy

from .arith import check_width, prime_power_parts
from .errors import InvariantViolation, OracleFailure

DEFAULT_MAX_Q = 13


@dataclass(frozen=True)
class GL2Class:
    """A conjugacy class of GL_2(F_q).

    kind/data: ("central", s) and ("unipotent", s) carry the index s of the
    eigenvalue in F_q^* (embedded in the big cyclic group as s*(q+1));
    ("split", (sa, sb)) carries the unordered pair of distinct eigenvalue
    indices; ("elliptic", t) carries the exponent of the eigenvalue in the
    cyclic group of order q^2-1, canonicalized to min(t, t*q mod q^2-1).
    """

    kind: str
    data: tuple
    size: int


def conjugacy_classes(q: int) -> list[GL2Class]:
    """The four class families, with cardinalities summing to |GL_2(F_q)|."""
    _validate_q(q)
    m = q * q - 1
    classes: list[GL2Class] = []
    for s in range(q - 1):
        classes.append(GL2Class("central", (s,), 1))
    for s in range(q - 1):
        classes.append(GL2Class("unipotent", (s,), m))
    for sa in range(q - 1):
        for sb in range(sa + 1, q - 1):
            classes.append(GL2Class("split", (sa, sb), q * (q + 1)))
    seen: set[int] = set()
    for t in range(m):
        if t % (q + 1) == 0:  # lies in F_q
            continue
        canon = min(t, t * q % m)
        if canon in seen:
            continue
        seen.add(canon)
        classes.append(GL2Class("elliptic", (canon,), q * (q - 1)))
    total = sum(c.size for c in classes)
    if total != (q * q - 1) * (q * q - q):
        raise OracleFailure(f"class sizes sum to {total}, not |GL_2(F_{q})|")
    return classes


def _validate_q(q: int) -> None:
    p, _ = prime_power_parts(q)
    if p == 2:
        raise InvariantViolation(f"q = {q} must be odd")
    check_width(q**4)


def _find_context_prime(q: int, skip: frozenset[int]) -> tuple[int, int]:
    m = q * q - 1
    group_order = (q * q - 1) * (q * q - q)
    prime_divisors = [int(r) for r in sympy.primefactors(m)]
    k = group_order // m + 1
    while True:
        candidate = k * m + 1
        k += 1
        if candidate in skip or not sympy.isprime(candidate):
            continue
        for g in range(2, candidate):
            zeta = pow(g, (candidate - 1) // m, candidate)
            if zeta == 1:
                continue
            if all(pow(zeta, m // r, candidate) != 1 for r in prime_divisors):
                return candidate, zeta
        raise AssertionError  # pragma: no cover


@dataclass(frozen=True)
class SplittingContext:
    """Two independent modular splitting fields for exact character values."""

    q: int
    prime: int
    zeta: int
    prime2: int
    zeta2: int

    def __post_init__(self) -> None:
        m = self.q**2 - 1
        group_order = (self.q**2 - 1) * (self.q**2 - self.q)
        for prime, zeta in ((self.prime, self.zeta), (self.prime2, self.zeta2)):
            if prime % m != 1 or prime <= group_order:
                raise InvariantViolation(
                    f"context prime {prime} is not admissible for q={self.q}"
                )
            order = 1
            x = zeta
            while x != 1:
                x = x * zeta % prime
                order += 1
            if order != m:
                raise InvariantViolation(
                    f"zeta has order {order}, expected {m}, mod {prime}"
                )
        if self.prime == self.prime2:
            raise InvariantViolation("the two context primes must differ")

    @classmethod
    def default(cls, q: int) -> "SplittingContext":
        _validate_q(q)
        p1, z1 = _find_context_prime(q, frozenset())
        p2, z2 = _find_context_prime(q, frozenset({p1}))
        return cls(q=q, prime=p1, zeta=z1, prime2=p2, zeta2=z2)

    def pairs(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.prime, self.zeta), (self.prime2, self.zeta2)


def _lift(residue: int, prime: int) -> int:
    """Centered lift of a residue to Z; valid whenever |value| < prime/2."""
    return residue if residue <= prime // 2 else residue - prime


@dataclass(frozen=True)
class GL2CuspidalCharacter:
    """One cuspidal character, value tables in both splitting contexts."""

    q: int
    exponent: int  # canonical orbit representative of theta, mod q^2-1
    ctx: SplittingContext
    values: tuple[tuple[int, ...], tuple[int, ...]]  # per context, per class

    @property
    def degree(self) -> int:
        return self.q - 1

    def is_selfdual(self) -> bool:
        """theta trivial on F_q^*, i.e. (q-1) | exponent."""
        return self.exponent % (self.q - 1) == 0


def _value(kind: str, data: tuple, e: int, q: int, prime: int, zpow) -> int:
    m = q * q - 1
    if kind == "central":
        return (q - 1) * zpow[e * data[0] * (q + 1) % m] % prime
    if kind == "unipotent":
        return -zpow[e * data[0] * (q + 1) % m] % prime
    if kind == "split":
        return 0
    t = data[0]
    return -(zpow[e * t % m] + zpow[e * t * q % m]) % prime


def _power_table(zeta: int, m: int, prime: int) -> list[int]:
    table = [1] * m
    for j in range(1, m):
        table[j] = table[j - 1] * zeta % prime
    return table


def regular_exponents(q: int) -> list[int]:
    """Canonical representatives of the regular character orbits mod q^2-1."""
    m = q * q - 1
    out = []
    for e in range(m):
        if e * q % m == e:  # fixed by Frobenius: not regular
            continue
        if e * q % m < e:  # not the canonical representative
            continue
        out.append(e)
    return out


def cuspidal_table(
    q: int,
    ctx: SplittingContext | None = None,
    max_q: int = DEFAULT_MAX_Q,
) -> list[GL2CuspidalCharacter]:
    """Build and certify the full cuspidal character family of GL_2(F_q).

    Raises OracleFailure naming the first failing identity; the returned
    table has passed degree, cuspidality, elliptic-trace and orthonormality
    certificates in both contexts.
    """
    report = certify_table(q, ctx=ctx, max_q=max_q)
    for identity in report.identities:
        if not identity[1]:
            raise OracleFailure(f"certificate failed: {identity[0]} (q={q})")
    return report.characters


@dataclass(frozen=True)
class DiagonalTorus:
    """The split maximal torus, i.e. the Levi GL_1 x GL_1."""


@dataclass(frozen=True)
class RationalForm:
    """GL_2 over the index-2 subfield; requires q = q0**2."""

    q0: int


def invariant_dim(chi: GL2CuspidalCharacter, subgroup) -> int:
    """Average of chi over the subgroup: the dimension of its fixed vectors.

    Each subgroup element is classified into the ambient class structure;
    the two modular contexts must agree on the lifted integer.
    """
    results = []
    for ctx_index, (prime, zeta) in enumerate(chi.ctx.pairs()):
        acc, order = _invariant_sum(chi, subgroup, ctx_index, prime, zeta)
        results.append(acc * pow(order, -1, prime) % prime)
    lifted = [_lift(r, p) for r, p in zip(results, (chi.ctx.prime, chi.ctx.prime2))]
    if lifted[0] != lifted[1]:
        raise OracleFailure(
            f"contexts disagree on invariant dimension: {lifted}"
        )
    if not 0 <= lifted[0] <= chi.degree:
        raise OracleFailure(f"invariant dimension {lifted[0]} out of range")
    return lifted[0]


def _invariant_sum(
    chi: GL2CuspidalCharacter, subgroup, ctx_index: int, prime: int, zeta: int
) -> tuple[int, int]:
    q, e = chi.q, chi.exponent
    m = q * q - 1
    zpow = _power_table(zeta, m, prime)
    if isinstance(subgroup, DiagonalTorus):
        acc = 0
        for sa in range(q - 1):
            for sb in range(q - 1):
                if sa == sb:
                    acc += _value("central", (sa,), e, q, prime, zpow)
                else:
                    acc += _value("split", (sa, sb), e, q, prime, zpow)
        return acc % prime, (q - 1) ** 2
    if isinstance(subgroup, RationalForm):
        q0 = subgroup.q0
        if q0 * q0 != q:
            raise InvariantViolation(f"rational form needs q = q0^2, got {q}, {q0}")
        step = m // (q0 - 1)  # embeds F_{q0}^* into the big cyclic group
        acc = 0
        for s in range(q0 - 1):
            # central elements of the subgroup stay central
            acc += _value_at_exponent(e * s * step % m, "central", q, prime, zpow)
            # non-semisimple classes (size q0^2-1) stay non-semisimple
            acc += (q0 * q0 - 1) * _value_at_exponent(
                e * s * step % m, "unipotent", q, prime, zpow
            )
        # split-over-subfield and elliptic-over-subfield elements are split
        # in GL_2(F_q) (distinct eigenvalues in F_q), so they contribute 0.
        order = (q0 * q0 - 1) * (q0 * q0 - q0)
        return acc % prime, order
    raise InvariantViolation(f"unsupported subgroup {subgroup!r}")


def _value_at_exponent(te: int, kind: str, q: int, prime: int, zpow) -> int:
    if kind == "central":
        return (q - 1) * zpow[te] % prime
    return -zpow[te] % prime


def twisted_sign(chi: GL2CuspidalCharacter) -> int:
    """Average of chi over the coset (block swap) * (diagonal torus).

    Each swapped element has trace zero and determinant -ab, so its class
    is decided by whether ab is a square: split (value 0) when it is, and
    the elliptic class of a square root otherwise.  The lifted result must
    be an exact sign, equal in both contexts.
    """
    if not chi.is_selfdual():
        raise InvariantViolation("the twisted sign needs a selfdual character")
    q, e = chi.q, chi.exponent
    m = q * q - 1
    results = []
    for prime, zeta in chi.ctx.pairs():
        zpow = _power_table(zeta, m, prime)
        acc = 0
        for sa in range(q - 1):
            for sb in range(q - 1):
                if (sa + sb) % 2 == 0:
                    continue  # ab is a square: split class, value 0
                t = (q + 1) * (sa + sb) // 2 % m
                acc += -(zpow[e * t % m] + zpow[e * t * q % m])
        results.append(acc % prime * pow((q - 1) ** 2, -1, prime) % prime)
    lifted = [_lift(r, p) for r, p in zip(results, (chi.ctx.prime, chi.ctx.prime2))]
    if lifted[0] != lifted[1] or lifted[0] not in (-1, 1):
        raise OracleFailure(f"twisted sum is not a consistent sign: {lifted}")
    return lifted[0]


@dataclass(frozen=True)
class CertificateReport:
    q: int
    prime: int
    prime2: int
    identities: tuple[tuple[str, bool], ...]
    dims: tuple[int, ...]
    signs: tuple[tuple[int, int], ...]  # (exponent, sign) for selfdual chars
    characters: tuple[GL2CuspidalCharacter, ...]

    @property
    def all_pass(self) -> bool:
        return all(ok for _, ok in self.identities)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "P": self.prime,
            "P_prime": self.prime2,
            "identities": [{"name": n, "pass": ok} for n, ok in self.identities],
            "dims": list(self.dims),
            "signs": [{"exponent": e, "sign": s} for e, s in self.signs],
        }


def certify_table(
    q: int,
    ctx: SplittingContext | None = None,
    max_q: int = DEFAULT_MAX_Q,
) -> CertificateReport:
    """Run every table invariant in both contexts; failures are reported,
    not raised."""
    _validate_q(q)
    if q > max_q:
        raise InvariantViolation(
            f"oracle scope is capped at q <= {max_q} (got q={q}); raise max_q "
            f"explicitly if the larger table is wanted"
        )
    if ctx is None:
        ctx = SplittingContext.default(q)
    m = q * q - 1
    classes = conjugacy_classes(q)
    exponents = regular_exponents(q)
    identities: list[tuple[str, bool]] = []

    counts = {
        "central": q - 1,
        "unipotent": q - 1,
        "split": (q - 1) * (q - 2) // 2,
        "elliptic": q * (q - 1) // 2,
    }
    by_kind: dict[str, int] = {}
    for c in classes:
        by_kind[c.kind] = by_kind.get(c.kind, 0) + 1
    identities.append(("class-family-counts", by_kind == counts))
    identities.append(("character-count", len(exponents) == q * (q - 1) // 2))

    value_tables = []
    for prime, zeta in ctx.pairs():
        zpow = _power_table(zeta, m, prime)
        table = np.array(
            [
                [_value(c.kind, c.data, e, q, prime, zpow) for c in classes]
                for e in exponents
            ],
            dtype=np.int64,
        )
        value_tables.append(table)

    chars = tuple(
        GL2CuspidalCharacter(
            q=q,
            exponent=e,
            ctx=ctx,
            values=(
                tuple(int(v) for v in value_tables[0][i]),
                tuple(int(v) for v in value_tables[1][i]),
            ),
        )
        for i, e in enumerate(exponents)
    )

    one_index = next(
        i for i, c in enumerate(classes) if c.kind == "central" and c.data == (0,)
    )
    unip_one_index = next(
        i for i, c in enumerate(classes) if c.kind == "unipotent" and c.data == (0,)
    )

    degree_ok = all(
        _lift(int(value_tables[k][i][one_index]), prime) == q - 1
        for k, (prime, _) in enumerate(ctx.pairs())
        for i in range(len(exponents))
    )
    identities.append(("degree-is-q-minus-1", degree_ok))

    cuspidality_ok = all(
        (value_tables[k][i][one_index] + (q - 1) * value_tables[k][i][unip_one_index])
        % prime
        == 0
        for k, (prime, _) in enumerate(ctx.pairs())
        for i in range(len(exponents))
    )
    identities.append(("cuspidality-unipotent-sum-vanishes", cuspidality_ok))

    elliptic_ok = True
    for k, (prime, zeta) in enumerate(ctx.pairs()):
        zpow = _power_table(zeta, m, prime)
        for i, e in enumerate(exponents):
            for j, c in enumerate(classes):
                if c.kind != "elliptic":
                    continue
                t = c.data[0]
                expected = -(zpow[e * t % m] + zpow[e * t * q % m]) % prime
                if int(value_tables[k][i][j]) != expected:
                    elliptic_ok = False
    identities.append(("elliptic-trace-values", elliptic_ok))

    sizes = np.array([c.size for c in classes], dtype=np.int64)
    group_order = (q * q - 1) * (q * q - q)
    ortho_ok = True
    for k, (prime, zeta) in enumerate(ctx.pairs()):
        zpow = _power_table(zeta, m, prime)
        conj = np.array(
            [
                [_value(c.kind, c.data, (-e) % m, q, prime, zpow) for c in classes]
                for e in exponents
            ],
            dtype=np.int64,
        )
        weighted = value_tables[k] * sizes % prime
        gram = weighted @ conj.T % prime
        expected = np.zeros_like(gram)
        np.fill_diagonal(expected, group_order % prime)
        if not np.array_equal(gram, expected):
            ortho_ok = False
    identities.append(("orthonormality", ortho_ok))

    dims = tuple(invariant_dim(chi, DiagonalTorus()) for chi in chars)
    dims_ok = all(
        dim == (1 if chi.is_selfdual() else 0) for dim, chi in zip(dims, chars)
    )
    identities.append(("torus-dimension-zero-or-one", all(d in (0, 1) for d in dims)))
    identities.append(("torus-dimension-matches-selfduality", dims_ok))

    signs = tuple(
        (chi.exponent, twisted_sign(chi)) for chi in chars if chi.is_selfdual()
    )

    return CertificateReport(
        q=q,
        prime=ctx.prime,
        prime2=ctx.prime2,
        identities=tuple(identities),
        dims=dims,
        signs=signs,
        characters=chars,
    )
