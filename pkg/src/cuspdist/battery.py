"""Grid verification battery: twelve properties cross-validating the
decision procedures against brute-force oracles.

P1   counting: the divisor-sum orbit count equals exhaustive enumeration
P2   reduction is a bijection onto modular cuspidals; lifts invert it
P3   the support multiplicity matches the Steinberg cuspidality shape
P4   rank-2 distinction and swap signs agree with the GL(2) table oracle
P5   the quadratic-Steinberg sign formula matches lift-derived signs
P6   the unramified lift criterion equals brute-force lift enumeration
P7   the ramified lift criterion equals brute-force lift enumeration,
     including the sign-matched refinement at the level-0 layer
P8   even multiplicity in odd characteristic forces q^(n/2) = -1 mod ell
P9   a distinguished lift implies distinction
P10  odd multiplicity: never both plainly and kappa-distinguished
P11  selfdual data obey the degree/multiplicity parity rule
P12  level-0 reduction commutes with tame twisting

Every property is independently skippable, records the exact cell it ran
on, and on failure stores a re-runnable witness, shrunk to the least
failing cell (smaller n first, then smaller ell, then least exponent).
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import __version__ as ENGINE_VERSION
from .angles import HALF_ANGLE, ZERO_ANGLE, RationalAngle
from .arith import QuadExtension, regular_orbit_count, split_prime_part
from .characters import (
    CyclicCharacter,
    canonical_orbit_exponent,
    character_modulus,
    frobenius_orbit,
    inflate_along_norm,
    is_regular,
    lifts,
    reduce_mod,
)
from .cuspidal import (
    CuspidalRep,
    block_swap_sign,
    enumerate_distinguished_lifts,
    is_distinguished as finite_is_distinguished,
    is_sigma_selfdual as finite_sigma_selfdual,
    lift_decision_ramified,
    lift_decision_unramified,
    quadratic_steinberg_swap_sign,
    st_cuspidal,
    steinberg_is_cuspidal,
    supercuspidal_support,
    support_multiplicity,
)
from .errors import InputFormatError, InvariantViolation
from .level0 import (
    EndoClassData,
    GeneralCuspidalDatum,
    LevelZeroCuspidalDatum,
    TameCharacter,
    classify,
    has_distinguished_lift,
    is_distinguished as level0_is_distinguished,
    is_sigma_selfdual,
    kappa_distinguished,
    level_zero_avatar,
    transport_twist,
    twist_by_tame,
    twist_general,
)
from . import gl2

ALL_PROPERTIES = tuple(f"P{i}" for i in range(1, 13))


@dataclass(frozen=True)
class GridSpec:
    """The verification grid: base residue cardinalities, ranks, coefficient
    characteristics and extension types to sweep."""

    q0_values: tuple[int, ...] = (3, 5, 7, 9)
    n_max: int = 6
    ell_values: tuple[int, ...] = (2, 3, 5, 7, 13)
    extensions: tuple[str, ...] = ("ramified", "unramified")
    oracle: bool = True
    parallelism: int = 1
    char0_scan_cap: int = 6_000_000
    modular_scan_cap: int = 600_000
    oracle_max_q: int = 13

    def __post_init__(self) -> None:
        for kind in self.extensions:
            if kind not in ("ramified", "unramified"):
                raise InputFormatError(f"unknown extension type {kind!r}")
        if self.parallelism < 1:
            raise InputFormatError("parallelism must be >= 1")
        for q0 in self.q0_values:
            QuadExtension(q0, True)  # validates odd prime power

    def exts(self) -> list[QuadExtension]:
        return [
            QuadExtension(q0, kind == "ramified")
            for q0 in sorted(self.q0_values)
            for kind in sorted(self.extensions)
        ]

    def ells_for(self, ext: QuadExtension) -> list[int]:
        return [ell for ell in sorted(self.ell_values) if ell != ext.p]

    def to_json(self) -> dict:
        return {
            "q0_values": sorted(self.q0_values),
            "n_max": self.n_max,
            "ell_values": sorted(self.ell_values),
            "extensions": sorted(self.extensions),
            "oracle": self.oracle,
            "parallelism": self.parallelism,
            "char0_scan_cap": self.char0_scan_cap,
            "modular_scan_cap": self.modular_scan_cap,
            "oracle_max_q": self.oracle_max_q,
        }


@dataclass(frozen=True)
class PropertyReport:
    property_id: str
    cell: dict
    status: str  # pass | fail | skipped
    checked: int = 0
    reason: str = ""
    witness: dict | None = None

    def to_json(self) -> dict:
        doc = {
            "property": self.property_id,
            "cell": self.cell,
            "status": self.status,
            "checked": self.checked,
        }
        if self.reason:
            doc["reason"] = self.reason
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc


# ---------------------------------------------------------------------------
# brute-force enumeration oracles


def count_regular_orbits_bruteforce(q: int, n: int) -> int:
    """Exhaustive count of full-size Frobenius orbits mod q^n - 1.

    Deliberately independent of the divisor-sum formula: walks every
    exponent and tests freeness directly.
    """
    m = q**n - 1
    e = np.arange(m, dtype=np.int64)
    cur = e.copy()
    regular = np.ones(m, dtype=bool)
    canonical = e.copy()
    for _ in range(1, n):
        cur = cur * q % m
        regular &= cur != e
        np.minimum(canonical, cur, out=canonical)
    return int(np.count_nonzero(regular & (canonical == e)))


def char0_cuspidal_exponents(q: int, n: int) -> list[int]:
    """Canonical exponents of all characteristic-0 cuspidal parameters."""
    m = q**n - 1
    e = np.arange(m, dtype=np.int64)
    cur = e.copy()
    regular = np.ones(m, dtype=bool)
    canonical = e.copy()
    for _ in range(1, n):
        cur = cur * q % m
        regular &= cur != e
        np.minimum(canonical, cur, out=canonical)
    return [int(x) for x in np.flatnonzero(regular & (canonical == e))]


def _irregularity_moduli(q: int, n: int) -> list[int]:
    """Moduli f such that an exponent mod q^n - 1 is fixed by a nontrivial
    Frobenius power exactly when f divides it (one per maximal proper
    divisor of n)."""
    m = q**n - 1
    out = []
    for p in _prime_factors(n):
        d = n // p
        out.append(m // int(np.gcd(m, q**d - 1)))
    return out


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _canonical_mask(modulus: int, q: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """For exponents mod ``modulus``: the canonical-representative mask and
    the orbit size of each exponent under multiplication by q."""
    e = np.arange(modulus, dtype=np.int64)
    canon = e.copy()
    size = np.full(modulus, n, dtype=np.int64)
    cur = e.copy()
    for j in range(1, n):
        cur = cur * q % modulus
        np.minimum(canon, cur, out=canon)
        hit = (cur == e) & (size == n)
        size[hit] = j
    return canon == e, size


def modular_cuspidal_exponents(q: int, n: int, ell: int) -> list[int]:
    """Canonical exponents of all modular cuspidal parameters (orbits mod
    the ell-free part admitting a regular characteristic-0 lift)."""
    m = q**n - 1
    a, nprime = split_prime_part(m, ell)
    ell_part = ell**a
    is_canon, _ = _canonical_mask(nprime, q, n)
    has_lift = _regular_lift_mask(q, n, ell)
    del m, ell_part
    return [int(x) for x in np.flatnonzero(is_canon & has_lift)]


def _regular_lift_mask(q: int, n: int, ell: int) -> np.ndarray:
    """Boolean mask over exponents mod the ell-free part: admits a regular
    characteristic-0 lift."""
    m = q**n - 1
    a, nprime = split_prime_part(m, ell)
    ell_part = ell**a
    e = np.arange(nprime, dtype=np.int64)
    base = e * (ell_part % nprime) % nprime
    if n == 1:
        return np.ones(nprime, dtype=bool)
    fix = _irregularity_moduli(q, n)
    has_lift = np.zeros(nprime, dtype=bool)
    for t in range(ell_part):
        candidate = base + t * nprime
        ok = np.ones(nprime, dtype=bool)
        for f in fix:
            ok &= candidate % f != 0
        has_lift |= ok
    return has_lift


def selfdual_cuspidal_reps(
    ext: QuadExtension, n: int, ell: int | None
) -> tuple[CuspidalRep, ...]:
    """All cuspidal representations whose conjugate-dual parameter lies in
    the parameter orbit, found through the divisor subgroups that contain
    them (no full scan of the modulus needed)."""
    return _selfdual_cuspidal_reps_cached(ext, n, ell)


@lru_cache(maxsize=None)
def _selfdual_cuspidal_reps_cached(
    ext: QuadExtension, n: int, ell: int | None
) -> tuple[CuspidalRep, ...]:
    q = ext.q
    modulus = character_modulus(q, n, ell)
    dual_factor = 1 if ext.ramified else ext.q0
    pieces = []
    for j in range(n):
        c = (pow(q, j, modulus) + dual_factor) % modulus
        d = int(np.gcd(modulus, c)) if c else modulus
        step = modulus // d
        pieces.append(np.arange(0, modulus, step, dtype=np.int64))
    cands = np.unique(np.concatenate(pieces))
    # keep canonical orbit representatives only
    canon = cands.copy()
    cur = cands.copy()
    for _ in range(1, n):
        cur = cur * q % modulus
        np.minimum(canon, cur, out=canon)
    cands = cands[canon == cands]
    # keep exponents with a regular characteristic-0 lift
    if n > 1:
        m = q**n - 1
        ell_part = 1 if ell is None else ell ** split_prime_part(m, ell)[0]
        fix = _irregularity_moduli(q, n)
        base = cands * (ell_part % modulus) % modulus
        ok = np.zeros(len(cands), dtype=bool)
        for t in range(ell_part):
            lift_val = base + t * modulus
            good = np.ones(len(cands), dtype=bool)
            for f in fix:
                good &= lift_val % f != 0
            ok |= good
        cands = cands[ok]
    reps = []
    for e in cands:
        rep = CuspidalRep.from_parameter(CyclicCharacter(q, n, int(e), ell))
        assert finite_sigma_selfdual(rep, ext)
        reps.append(rep)
    return tuple(reps)


def admissible_central_angles(
    rep: CuspidalRep, ext: QuadExtension
) -> list[RationalAngle]:
    """Central-character angles making a level-0 datum sigma-selfdual."""
    if ext.ramified:
        t = -rep.parameter.angle_at_minus_one()
        first = RationalAngle.of(t.numerator, 2 * t.denominator)
    else:
        first = ZERO_ANGLE
    pair = [first, first + HALF_ANGLE]
    ell = rep.ell
    return [a for a in pair if ell is None or a.coprime_to(ell)]


@lru_cache(maxsize=None)
def selfdual_level0_data(
    ext: QuadExtension, n: int, ell: int | None
) -> tuple[LevelZeroCuspidalDatum, ...]:
    out = []
    for rep in selfdual_cuspidal_reps(ext, n, ell):
        for angle in admissible_central_angles(rep, ext):
            dat = LevelZeroCuspidalDatum(ext, rep, angle)
            assert is_sigma_selfdual(dat)
            out.append(dat)
    return tuple(out)


# ---------------------------------------------------------------------------
# results cache


class ResultsCache:
    """Content-addressed append-only store of verdict bundles (JSON lines).

    The key is the hash of the canonical datum document; identical keys
    must carry identical verdicts, which ``verify_sample`` spot-checks by
    recomputation.
    """

    def __init__(self, path: str):
        self.path = path
        self.entries: dict[str, dict] = {}
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    record = json.loads(line)
                    self.entries[record["key"]] = record

    @staticmethod
    def key_for(datum_doc: dict) -> str:
        canonical = json.dumps(datum_doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def get(self, key: str) -> dict | None:
        record = self.entries.get(key)
        return None if record is None else record["verdicts"]

    def put(self, key: str, datum_doc: dict, verdicts: dict) -> None:
        existing = self.entries.get(key)
        if existing is not None:
            if existing["verdicts"] != verdicts:
                raise InvariantViolation(
                    f"cache coherence violation for key {key}"
                )
            return
        record = {
            "key": key,
            "datum": datum_doc,
            "verdicts": verdicts,
            "engine_version": ENGINE_VERSION,
        }
        self.entries[key] = record
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    def verify_sample(self, k: int = 10) -> int:
        """Recompute up to k deterministically chosen entries and compare."""
        from .level0 import datum_from_json

        keys = sorted(self.entries)
        if not keys:
            return 0
        stride = max(1, len(keys) // k)
        checked = 0
        for key in keys[::stride][:k]:
            record = self.entries[key]
            recomputed = _classify_with_kappa(datum_from_json(record["datum"]))
            if recomputed != record["verdicts"]:
                raise InvariantViolation(f"cache entry {key} is stale")
            checked += 1
        return checked


@lru_cache(maxsize=None)
def _classify_with_kappa(dat) -> dict:
    from .level0 import kappa_distinguished

    bundle = classify(dat)
    level0 = dat.avatar if isinstance(dat, GeneralCuspidalDatum) else dat
    bundle["kappa_distinguished"] = kappa_distinguished(level0).to_json()
    return bundle


def _classified(dat: LevelZeroCuspidalDatum, cache: ResultsCache | None) -> dict:
    doc = dat.to_json()
    if cache is None:
        return _classify_with_kappa(dat)
    key = ResultsCache.key_for(doc)
    hit = cache.get(key)
    if hit is not None:
        return hit
    bundle = _classify_with_kappa(dat)
    cache.put(key, doc, bundle)
    return bundle


# ---------------------------------------------------------------------------
# property implementations.  Each returns (status, checked, reason, witness).


def _p1(cell: dict, spec: GridSpec, cache) -> tuple[str, int, str, dict | None]:
    q, n = cell["q"], cell["n"]
    formula = regular_orbit_count(q, n)
    if q**n - 1 > spec.char0_scan_cap:
        return "skipped", 0, f"q^n-1 = {q ** n - 1} beyond exhaustive cap", None
    brute = count_regular_orbits_bruteforce(q, n)
    if formula == brute:
        return "pass", brute, "", None
    return "fail", brute, "", {"formula": formula, "bruteforce": brute}


def _p2(cell: dict, spec: GridSpec, cache):
    q, n, ell = cell["q"], cell["n"], cell["ell"]
    m = q**n - 1
    a, nprime = split_prime_part(m, ell)
    if m > spec.char0_scan_cap or nprime > spec.modular_scan_cap:
        return "skipped", 0, "modulus beyond scan caps", None
    char0 = np.array(char0_cuspidal_exponents(q, n), dtype=np.int64)
    modular = np.array(modular_cuspidal_exponents(q, n, ell), dtype=np.int64)
    # image of reduction, canonicalized mod the ell-free part
    inv = pow(ell**a, -1, nprime) if nprime > 1 else 0
    reduced = char0 * inv % nprime
    canon = reduced.copy()
    cur = reduced.copy()
    for _ in range(1, n):
        cur = cur * q % nprime
        np.minimum(canon, cur, out=canon)
    images = np.unique(canon)
    if not np.array_equal(images, modular):
        both = set(int(x) for x in images) ^ set(int(x) for x in modular)
        return "fail", len(char0), "", {"set_mismatch": sorted(both)[:5]}
    # fiber identities, spot-checked through the character API
    for e in modular[:48]:
        chibar = CyclicCharacter(q, n, int(e), ell)
        ups = lifts(chibar)
        if len(ups) != ell**a:
            return "fail", len(char0), "", {"exponent": int(e), "lift_count": len(ups)}
        for lift in ups:
            if reduce_mod(lift, ell) != chibar:
                return "fail", len(char0), "", {
                    "exponent": int(e),
                    "bad_lift": lift.exponent,
                }
    return "pass", int(len(char0) + len(modular)), "", None


def _st_shape_ok(q: int, f: int, u: int, ell: int) -> bool:
    """Multiplicity u on a rank-f supercuspidal gives a cuspidal: u = 1 or
    u = (order of q^f mod ell) * ell^v."""
    if u == 1:
        return True
    from .arith import mult_order

    while u % ell == 0:
        u //= ell
    return u == mult_order(q**f, ell)


def _p3_api_route(q: int, n: int, ell: int, exponents) -> dict | None:
    """The object-level route, exercised on a bounded sample: support
    factorization, cuspidality shape, and the inflation round trip."""
    for e in exponents:
        rep = CuspidalRep.from_parameter(CyclicCharacter(q, n, int(e), ell))
        r = support_multiplicity(rep)
        support = supercuspidal_support(rep)
        ok = steinberg_is_cuspidal(support.scusp, r, ell) and (
            inflate_along_norm(support.scusp.parameter, n).exponent
            in frobenius_orbit(rep.parameter)
        )
        if not ok:
            return {"q": q, "n": n, "ell": ell, "exponent": int(e)}
    return None


def _p3(cell: dict, spec: GridSpec, cache):
    q, n, ell = cell["q"], cell["n"], cell["ell"]
    nprime = character_modulus(q, n, ell)
    if nprime > spec.modular_scan_cap:
        ext = QuadExtension(q, True)
        exponents = [
            rep.parameter.exponent for rep in selfdual_cuspidal_reps(ext, n, ell)
        ]
        reason = "restricted to the selfdual family (modulus beyond scan cap)"
        witness = _p3_api_route(q, n, ell, exponents)
        if witness is not None:
            return "fail", len(exponents), reason, witness
        return "pass", len(exponents), reason, None
    # bulk check in vector arithmetic: the orbit size of a cuspidal exponent
    # determines f; the factorization through the degree-f norm must exist
    # and the multiplicity shape must be a cuspidal one
    is_canon, size = _canonical_mask(nprime, q, n)
    cusp = is_canon & _regular_lift_mask(q, n, ell)
    exponents_all = np.arange(nprime, dtype=np.int64)
    checked = int(np.count_nonzero(cusp))
    for f in sorted({int(s) for s in np.unique(size[cusp])}):
        sub = cusp & (size == f)
        ratio = nprime // character_modulus(q, f, ell)
        bad = np.flatnonzero(sub & (exponents_all % ratio != 0))
        if bad.size:
            return "fail", checked, "", {
                "q": q, "n": n, "ell": ell,
                "exponent": int(bad[0]),
                "defect": "no-factorization-through-norm",
            }
        if not _st_shape_ok(q, f, n // f, ell):
            first = int(np.flatnonzero(sub)[0])
            return "fail", checked, "", {
                "q": q, "n": n, "ell": ell,
                "exponent": first,
                "defect": "multiplicity-shape-not-cuspidal",
            }
    witness = _p3_api_route(q, n, ell, np.flatnonzero(cusp)[:40])
    if witness is not None:
        return "fail", checked, "", witness
    return "pass", checked, "", None


def _p4(cell: dict, spec: GridSpec, cache):
    q = cell["q"]
    if not spec.oracle:
        return "skipped", 0, "oracle disabled", None
    if q > spec.oracle_max_q:
        return "skipped", 0, f"q beyond oracle cap {spec.oracle_max_q}", None
    if cell.get("rational_form"):
        q0 = cell["q0"]
        table = gl2.cuspidal_table(q, max_q=max(spec.oracle_max_q, q))
        ext = QuadExtension(q0, False)
        selfduals = selfdual_cuspidal_reps(ext, 2, None)
        checked = 0
        for chi in table:
            checked += 1
            if gl2.invariant_dim(chi, gl2.RationalForm(q0)) != 0:
                return "fail", checked, "", {"q": q, "exponent": chi.exponent}
        if selfduals:
            return "fail", checked, "", {
                "unexpected_selfdual": [r.parameter.exponent for r in selfduals]
            }
        return "pass", checked, "", None
    ext = QuadExtension(q, True)
    table = gl2.cuspidal_table(q, max_q=spec.oracle_max_q)
    checked = 0
    for chi in table:
        rep = CuspidalRep.from_parameter(CyclicCharacter(q, 2, chi.exponent))
        verdict = finite_is_distinguished(rep, ext)
        dim = gl2.invariant_dim(chi, gl2.DiagonalTorus())
        checked += 1
        if dim != (1 if verdict.is_yes else 0):
            return "fail", checked, "", {"exponent": chi.exponent, "dim": dim}
        if dim == 1:
            param_sign = block_swap_sign(rep, ext).as_sign()
            if gl2.twisted_sign(chi) != param_sign:
                return "fail", checked, "", {
                    "exponent": chi.exponent,
                    "oracle_sign": gl2.twisted_sign(chi),
                    "parameter_sign": param_sign,
                }
    return "pass", checked, "", None


def _quadratic_characters(q: int, ell: int) -> list[CuspidalRep]:
    out = [CuspidalRep.from_parameter(CyclicCharacter(q, 1, 0, ell))]
    if ell != 2:
        legendre = reduce_mod(CyclicCharacter(q, 1, (q - 1) // 2), ell)
        if not legendre.is_trivial:
            out.append(CuspidalRep.from_parameter(legendre))
    return out


def _p5(cell: dict, spec: GridSpec, cache):
    q, n, ell = cell["q"], cell["n"], cell["ell"]
    ext = QuadExtension(q, True)
    checked = 0
    for varrho in _quadratic_characters(q, ell):
        if not steinberg_is_cuspidal(varrho, n, ell):
            continue
        rep = st_cuspidal(varrho, n)
        if not finite_is_distinguished(rep, ext).is_yes:
            continue
        formula = quadratic_steinberg_swap_sign(rep, ext)
        witness_base = {"q": q, "n": n, "ell": ell, "varrho": varrho.parameter.exponent}
        if ell == 2:
            checked += 1
            if formula != ZERO_ANGLE:
                return "fail", checked, "", witness_base
            continue
        derived = block_swap_sign(rep, ext)
        lift_signs = {
            block_swap_sign(lift, ext)
            for lift in enumerate_distinguished_lifts(rep, ext)
        }
        checked += 1
        if formula != derived or lift_signs != {formula}:
            return "fail", checked, "", {
                **witness_base,
                "formula": str(formula),
                "derived": str(derived),
                "lift_signs": sorted(str(s) for s in lift_signs),
            }
    if checked == 0:
        return "skipped", 0, "no distinguished quadratic Steinberg at this cell", None
    return "pass", checked, "", None


def _p6(cell: dict, spec: GridSpec, cache):
    q0, n, ell = cell["q0"], cell["n"], cell["ell"]
    ext = QuadExtension(q0, False)
    checked = 0
    for rep in selfdual_cuspidal_reps(ext, n, ell):
        decision = lift_decision_unramified(rep, ext)
        enumerated = enumerate_distinguished_lifts(rep, ext)
        checked += 1
        if decision != bool(enumerated):
            return "fail", checked, "", {
                "q0": q0,
                "n": n,
                "ell": ell,
                "exponent": rep.parameter.exponent,
                "decision": decision,
                "enumerated": len(enumerated),
            }
        for angle in admissible_central_angles(rep, ext):
            dat = LevelZeroCuspidalDatum(ext, rep, angle)
            padic = has_distinguished_lift(dat).value
            finite_side = bool(enumerated) and angle == ZERO_ANGLE
            checked += 1
            if padic != finite_side:
                return "fail", checked, "", {
                    "datum": dat.to_json(),
                    "padic": padic,
                    "finite_side": finite_side,
                }
    return "pass", checked, "", None


def _p7(cell: dict, spec: GridSpec, cache):
    q, n, ell = cell["q"], cell["n"], cell["ell"]
    ext = QuadExtension(q, True)
    checked = 0
    for rep in selfdual_cuspidal_reps(ext, n, ell):
        decision = lift_decision_ramified(rep, ext)
        enumerated = enumerate_distinguished_lifts(rep, ext)
        checked += 1
        if decision != bool(enumerated):
            return "fail", checked, "", {
                "q": q,
                "n": n,
                "ell": ell,
                "exponent": rep.parameter.exponent,
                "decision": decision,
                "enumerated": len(enumerated),
            }
        for angle in admissible_central_angles(rep, ext):
            dat = LevelZeroCuspidalDatum(ext, rep, angle)
            padic = has_distinguished_lift(dat).value
            if ell == 2 or n == 1:
                # no sign constraint: in characteristic 2 the only sign is
                # the unit, and a rank-1 lift is trivial at both square
                # classes of uniformizers at once
                finite_side = bool(enumerated)
            else:
                finite_side = any(
                    block_swap_sign(lift, ext) == angle for lift in enumerated
                )
            checked += 1
            if padic != finite_side:
                return "fail", checked, "", {
                    "datum": dat.to_json(),
                    "padic": padic,
                    "finite_side": finite_side,
                }
    return "pass", checked, "", None


def _p8(cell: dict, spec: GridSpec, cache):
    ext = _cell_ext(cell)
    n, ell = cell["n"], cell["ell"]
    checked = 0
    for dat in selfdual_level0_data(ext, n, ell):
        if cache is not None:
            _classified(dat, cache)  # populate + coherence-check the store
        checked += 1
        r = support_multiplicity(dat.finite_param)
        if ell != 2 and r >= 2 and r % 2 == 0:
            if pow(ext.q, n // 2, ell) != ell - 1:
                return "fail", checked, "", {"datum": dat.to_json()}
    return "pass", checked, "", None


def _p9(cell: dict, spec: GridSpec, cache):
    ext = _cell_ext(cell)
    n, ell = cell["n"], cell["ell"]
    checked = 0
    for dat in selfdual_level0_data(ext, n, ell):
        checked += 1
        if has_distinguished_lift(dat).value and not level0_is_distinguished(dat).is_yes:
            return "fail", checked, "", {
                "datum": dat.to_json(),
                "distinguished": level0_is_distinguished(dat).to_json(),
            }
    return "pass", checked, "", None


def _p10(cell: dict, spec: GridSpec, cache):
    ext = _cell_ext(cell)
    n, ell = cell["n"], cell["ell"]
    checked = 0
    if ell == 2:
        return "skipped", 0, "disjunction needs odd coefficient characteristic", None
    for dat in selfdual_level0_data(ext, n, ell):
        r = support_multiplicity(dat.finite_param)
        if r % 2 == 0:
            continue
        checked += 1
        if level0_is_distinguished(dat).is_yes and kappa_distinguished(dat).is_yes:
            return "fail", checked, "", {"datum": dat.to_json()}
    return "pass", checked, "", None


def _p11(cell: dict, spec: GridSpec, cache):
    ext = _cell_ext(cell)
    n, ell = cell["n"], cell["ell"]
    checked = 0
    for dat in selfdual_level0_data(ext, n, ell):
        checked += 1
        ratio = n // support_multiplicity(dat.finite_param)
        ok = (ratio == 1 or ratio % 2 == 0) if ext.ramified else ratio % 2 == 1
        if not ok:
            return "fail", checked, "", {"datum": dat.to_json(), "n_over_r": ratio}
    return "pass", checked, "", None


def _p12(cell: dict, spec: GridSpec, cache):
    ext = _cell_ext(cell)
    q = ext.q
    shapes = [
        EndoClassData(1, 1, 1, ext.ramified),
        EndoClassData(2, 2, 1, False),
        EndoClassData(2, 1, 2, True),
    ]
    chis = [
        TameCharacter(CyclicCharacter(q, 1, 0), ZERO_ANGLE),
        TameCharacter(CyclicCharacter(q, 1, 1), RationalAngle.of(1, 4)),
        TameCharacter(CyclicCharacter(q, 1, 0), RationalAngle.of(1, 3)),
    ]
    checked = 0
    for endo in shapes:
        avatar_ext = (
            ext
            if endo.residue_degree == 1 and endo.t_ramified == ext.ramified
            else _avatar_ext(q, endo)
        )
        for m in (1, 2):
            avatar_param = _some_char0_cuspidal(avatar_ext.q, m)
            if avatar_param is None:
                continue
            avatar = LevelZeroCuspidalDatum(avatar_ext, avatar_param, ZERO_ANGLE)
            g = GeneralCuspidalDatum(ext, endo, m, avatar)
            for chi in chis:
                left = level_zero_avatar(twist_general(g, chi))
                right = twist_by_tame(level_zero_avatar(g), transport_twist(g, chi))
                checked += 1
                if left != right:
                    return "fail", checked, "", {
                        "general": g.to_json(),
                        "twist": chi.to_json(),
                    }
    return "pass", checked, "", None


def _avatar_ext(q: int, endo: EndoClassData) -> QuadExtension:
    q_t = q**endo.residue_degree
    if endo.t_ramified:
        return QuadExtension(q_t, True)
    root = int(round(q_t**0.5))
    if root * root != q_t:
        raise InvariantViolation("unramified avatar needs a square cardinality")
    return QuadExtension(root, False)


def _some_char0_cuspidal(q: int, n: int) -> CuspidalRep | None:
    for e in range(q**n - 1):
        chi = CyclicCharacter(q, n, e)
        if is_regular(chi) and canonical_orbit_exponent(chi) == e:
            return CuspidalRep.from_parameter(chi)
    return None


def _cell_ext(cell: dict) -> QuadExtension:
    return QuadExtension(cell["q0"], cell["ramified"])


# ---------------------------------------------------------------------------
# cell generation


def _cells_for(pid: str, spec: GridSpec) -> list[dict]:
    cells: list[dict] = []
    if pid == "P1":
        seen = set()
        for ext in spec.exts():
            for n in range(1, spec.n_max + 1):
                key = (ext.q, n)
                if key not in seen:
                    seen.add(key)
                    cells.append({"q": ext.q, "n": n})
    elif pid in ("P2", "P3"):
        seen = set()
        for ext in spec.exts():
            for n in range(1, spec.n_max + 1):
                for ell in spec.ells_for(ext):
                    key = (ext.q, n, ell)
                    if key not in seen:
                        seen.add(key)
                        cells.append({"q": ext.q, "n": n, "ell": ell})
    elif pid == "P4":
        seen = set()
        for ext in spec.exts():
            if ext.ramified and ext.q not in seen and spec.n_max >= 2:
                seen.add(ext.q)
                cells.append({"q": ext.q})
            if not ext.ramified and ("rf", ext.q0) not in seen and spec.n_max >= 2:
                seen.add(("rf", ext.q0))
                cells.append({"q": ext.q, "q0": ext.q0, "rational_form": True})
    elif pid == "P5":
        seen = set()
        for ext in spec.exts():
            if not ext.ramified:
                continue
            for n in range(2, spec.n_max + 1, 2):
                for ell in spec.ells_for(ext):
                    key = (ext.q, n, ell)
                    if key not in seen:
                        seen.add(key)
                        cells.append({"q": ext.q, "n": n, "ell": ell})
    elif pid == "P6":
        for ext in spec.exts():
            if ext.ramified:
                continue
            for n in range(1, spec.n_max + 1):
                for ell in spec.ells_for(ext):
                    cells.append({"q0": ext.q0, "n": n, "ell": ell})
    elif pid == "P7":
        for ext in spec.exts():
            if not ext.ramified:
                continue
            for n in range(1, spec.n_max + 1):
                for ell in spec.ells_for(ext):
                    cells.append({"q": ext.q, "n": n, "ell": ell})
    elif pid in ("P8", "P9", "P10", "P11"):
        for ext in spec.exts():
            for n in range(1, spec.n_max + 1):
                for ell in spec.ells_for(ext):
                    cells.append(
                        {"q0": ext.q0, "ramified": ext.ramified, "n": n, "ell": ell}
                    )
    elif pid == "P12":
        for ext in spec.exts():
            cells.append({"q0": ext.q0, "ramified": ext.ramified})
    else:
        raise InputFormatError(f"unknown property {pid!r}")
    return cells


_RUNNERS = {
    "P1": _p1,
    "P2": _p2,
    "P3": _p3,
    "P4": _p4,
    "P5": _p5,
    "P6": _p6,
    "P7": _p7,
    "P8": _p8,
    "P9": _p9,
    "P10": _p10,
    "P11": _p11,
    "P12": _p12,
}


def _shrink(pid: str, cell: dict, spec: GridSpec, cache) -> dict:
    """Move a failing cell to the least failing one: n first, then ell."""
    from .arith import prime_power_parts

    runner = _RUNNERS[pid]
    best = dict(cell)
    p = prime_power_parts(best.get("q", best.get("q0", 3)))[0]
    if "n" in best:
        for n in range(1, best["n"]):
            trial = {**best, "n": n}
            if runner(trial, spec, cache)[0] == "fail":
                best = trial
                break
    if "ell" in best:
        for ell in sorted(spec.ell_values):
            if ell >= best["ell"]:
                break
            if ell == p:
                continue
            trial = {**best, "ell": ell}
            if runner(trial, spec, cache)[0] == "fail":
                best = trial
                break
    return best


def run_battery(
    spec: GridSpec,
    properties: tuple[str, ...] | None = None,
    cache: ResultsCache | None = None,
) -> list[PropertyReport]:
    """Evaluate every selected property on every applicable cell.

    Deterministic: cells are generated in sorted order and runners iterate
    exponents ascending, so identical grids give identical reports.
    """
    selected = properties or ALL_PROPERTIES
    for pid in selected:
        if pid not in _RUNNERS:
            raise InputFormatError(f"unknown property {pid!r}")
    reports: list[PropertyReport] = []
    for pid in sorted(selected, key=lambda s: int(s[1:])):
        runner = _RUNNERS[pid]
        for cell in _cells_for(pid, spec):
            status, checked, reason, witness = runner(cell, spec, cache)
            final_cell = cell
            if status == "fail":
                final_cell = _shrink(pid, cell, spec, cache)
                if final_cell != cell:
                    status, checked, reason, witness = runner(final_cell, spec, cache)
            reports.append(
                PropertyReport(
                    property_id=pid,
                    cell=final_cell,
                    status=status,
                    checked=checked,
                    reason=reason,
                    witness=witness,
                )
            )
    return reports


def battery_counts(reports: list[PropertyReport]) -> dict:
    counts: dict[str, dict[str, int]] = {}
    for report in reports:
        per = counts.setdefault(report.property_id, {"pass": 0, "fail": 0, "skipped": 0})
        per[report.status] += 1
    ordered = {pid: counts[pid] for pid in sorted(counts, key=lambda s: int(s[1:]))}
    totals = {
        "pass": sum(c["pass"] for c in counts.values()),
        "fail": sum(c["fail"] for c in counts.values()),
        "skipped": sum(c["skipped"] for c in counts.values()),
    }
    return {"per_property": ordered, "total": totals}


def emit_report(
    reports: list[PropertyReport],
    fmt: str = "json",
    spec: GridSpec | None = None,
    timestamp: str | None = None,
) -> str:
    """Serialize battery results with a stable field order.

    The timestamp is the only unstable field and sits alone at the top
    level, so consumers diffing two runs can drop that single key.
    """
    if fmt == "json":
        doc = {
            "engine_version": ENGINE_VERSION,
            "generated_at": timestamp or "",
            "grid": spec.to_json() if spec else None,
            "counts": battery_counts(reports),
            "reports": [r.to_json() for r in reports],
        }
        return json.dumps(doc, indent=2, sort_keys=False)
    if fmt == "csv":
        lines = ["property,status,checked,cell,reason,witness"]
        for r in reports:
            cell = json.dumps(r.cell, sort_keys=True).replace('"', "'")
            witness = (
                json.dumps(r.witness, sort_keys=True).replace('"', "'")
                if r.witness is not None
                else ""
            )
            reason = r.reason.replace(",", ";")
            lines.append(
                f"{r.property_id},{r.status},{r.checked},\"{cell}\",{reason},\"{witness}\""
            )
        return "\n".join(lines) + "\n"
    raise InputFormatError(f"unknown report format {fmt!r}")
