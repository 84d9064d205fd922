"""Three sufficient conditions for a pair (R, M) to admit no bipartite GRR.

Each condition forces a non-identity automorphism ``phi`` of ``R`` with
``g^phi`` in ``{g, g^-1}`` on ``R \\ M`` (a half-inverting automorphism);
such a ``phi`` preserves every inverse-closed ``S`` inside ``R \\ M``.  The
checks return explicit witnesses and the builders turn a witness into the
automorphism.  Witness choices always take the smallest element ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from bigrr.automorphisms import GroupAutomorphism, find_half_inverting_automorphism
from bigrr.errors import ConditionNotMetError, GroupValidationError, IdentityResultError, VerificationError
from bigrr.groups import (
    FiniteGroup,
    Subgroup,
    center,
    closure,
    derived_subgroup,
    index2_subgroups,
    is_generalized_dihedral_on,
)

COND1, COND2, COND3 = "Cond1", "Cond2", "Cond3"


@dataclass(frozen=True)
class ObstructionWitness:
    """Which condition holds (``None`` if none) and the data proving it.

    ``also_holds`` lists the later conditions that hold as well.
    """

    condition: str | None
    Z: Subgroup | None = None
    a: int | None = None
    m: int | None = None
    also_holds: tuple[str, ...] = field(default=())

    @property
    def obstructed(self) -> bool:
        return self.condition is not None

    def to_json(self) -> dict[str, Any]:
        return {
            "condition": self.condition,
            "Z": list(self.Z.members) if self.Z is not None else None,
            "a": self.a,
            "m": self.m,
            "also_holds": list(self.also_holds),
        }


def _require_index2(R: FiniteGroup, M: Subgroup) -> None:
    if M.parent is not R or M.index != 2:
        raise GroupValidationError("M must be an index-2 subgroup of R")


def check_condition_1(R: FiniteGroup, M: Subgroup) -> bool:
    """M abelian and R not generalized dihedral on M."""
    _require_index2(R, M)
    return M.is_abelian and not is_generalized_dihedral_on(R, M)


def _abelian_index2_of(M: Subgroup) -> list[Subgroup]:
    R = M.parent
    H, lift = M.as_group()
    out = []
    for K in index2_subgroups(H):
        Z = Subgroup(R, [lift[k] for k in K.members])
        if Z.is_abelian:
            out.append(Z)
    return sorted(out, key=lambda Z: Z.members)


def _cond2_clauses(R: FiniteGroup, Z: Subgroup, a: int) -> bool:
    a2 = R.mul(a, a)
    if a2 == 0 or a2 not in Z.memberset:
        return False
    if any(not R.commute(a2, g) for g in R.elements()):
        return False
    inv = R.inv
    return all(R.conj(z, a) == inv[z] for z in Z.members)


def check_condition_2(R: FiniteGroup, M: Subgroup) -> ObstructionWitness | None:
    """Abelian ``Z`` of index 2 in ``M`` and ``a`` outside ``M`` with ``a^2 != 1``,
    ``a^2`` central and in ``Z``, and ``a`` inverting ``Z``."""
    _require_index2(R, M)
    outside = M.complement()
    for Z in _abelian_index2_of(M):
        for a in outside:
            if _cond2_clauses(R, Z, a):
                m = min(g for g in M.members if g not in Z.memberset)
                return ObstructionWitness(COND2, Z=Z, a=a, m=m)
    return None


def _cond3_m(R: FiniteGroup, M: Subgroup, Z: Subgroup, a: int) -> int | None:
    """Smallest ``m`` in ``M \\ Z`` with ``o(am) != 2``, if ``a`` meets the other clauses."""
    if R.orders[a] != 4:
        return None
    a2 = R.mul(a, a)
    if closure(R, [a2]) != list(derived_subgroup_of(M).members):
        return None
    inv = R.inv
    if any(R.conj(z, a) != inv[z] for z in Z.members):
        return None
    for m in M.members:
        if m not in Z.memberset and R.orders[R.mul(a, m)] != 2:
            return m
    return None


def derived_subgroup_of(M: Subgroup) -> Subgroup:
    H, lift = M.as_group()
    return Subgroup(M.parent, [lift[g] for g in derived_subgroup(H).members])


def center_of(M: Subgroup) -> Subgroup:
    H, lift = M.as_group()
    return Subgroup(M.parent, [lift[g] for g in center(H).members])


def check_condition_3(R: FiniteGroup, M: Subgroup) -> ObstructionWitness | None:
    """``|M : Z(M)| = 4`` and one ``a`` outside ``M`` of order 4 with
    ``gamma_2(M) = <a^2>``, ``a`` inverting ``Z(M)`` and ``o(am) != 2`` for
    some ``m`` in ``M \\ Z(M)``."""
    _require_index2(R, M)
    Z = center_of(M)
    if M.order != 4 * Z.order:
        return None
    for a in M.complement():
        m = _cond3_m(R, M, Z, a)
        if m is not None:
            return ObstructionWitness(COND3, Z=Z, a=a, m=m)
    return None


def obstruction_status(R: FiniteGroup, M: Subgroup) -> ObstructionWitness:
    """First condition that holds (in order 1, 2, 3) with its witness."""
    c1 = check_condition_1(R, M)
    w2 = check_condition_2(R, M)
    w3 = check_condition_3(R, M)
    hits = [c for c, ok in ((COND1, c1), (COND2, w2 is not None), (COND3, w3 is not None)) if ok]
    if not hits:
        return ObstructionWitness(None)
    rest = tuple(hits[1:])
    if c1:
        return ObstructionWitness(COND1, a=min(M.complement()), also_holds=rest)
    w = w2 if w2 is not None else w3
    assert w is not None
    return ObstructionWitness(w.condition, Z=w.Z, a=w.a, m=w.m, also_holds=rest)


# ---------------------------------------------------------------- builders


def _finish(R: FiniteGroup, M: Subgroup, image: list[int]) -> GroupAutomorphism:
    try:
        phi = GroupAutomorphism(R, tuple(image))
    except GroupValidationError as exc:
        raise VerificationError(f"constructed map is not an automorphism: {exc}") from exc
    if phi.is_identity:
        raise VerificationError("constructed map is the identity")
    inv = R.inv
    if any(image[g] != g and image[g] != inv[g] for g in M.complement()):
        raise VerificationError("constructed map is not half-inverting on R \\ M")
    return phi


def build_automorphism_cond1(R: FiniteGroup, M: Subgroup) -> GroupAutomorphism:
    """``phi = psi iota_a`` with ``m^psi = m^-1`` and ``(ma)^psi = m^-1 a^-1``.

    ``phi`` inverts every element of ``R \\ M``; it is the identity exactly
    when ``R`` is generalized dihedral on ``M``.
    """
    _require_index2(R, M)
    if not M.is_abelian:
        raise ConditionNotMetError("M is not abelian")
    t, inv = R.table, R.inv
    a = min(M.complement())
    ai = inv[a]
    psi = [0] * R.order
    for g in range(R.order):
        if g in M.memberset:
            psi[g] = inv[g]
        else:
            m = t[g][ai]
            psi[g] = t[inv[m]][ai]
    image = [t[t[ai][psi[g]]][a] for g in range(R.order)]
    if all(x == g for g, x in enumerate(image)):
        raise IdentityResultError("R is generalized dihedral on M, so psi iota_a is the identity")
    if is_generalized_dihedral_on(R, M):
        raise VerificationError("non-identity result although R is generalized dihedral on M")
    return _finish(R, M, image)


def build_automorphism_cond2(R: FiniteGroup, M: Subgroup, witness: ObstructionWitness) -> GroupAutomorphism:
    """Identity on ``Z`` and ``Zam``, inversion on ``Za``, ``g -> a^2 g`` on ``Zm``."""
    _require_index2(R, M)
    Z, a = witness.Z, witness.a
    if Z is None or a is None:
        raise ConditionNotMetError("witness lacks Z or a")
    if not (Z.is_abelian and Z.is_subgroup_of(M) and M.order == 2 * Z.order and a not in M):
        raise ConditionNotMetError("Z must be abelian of index 2 in M and a must lie outside M")
    if not _cond2_clauses(R, Z, a):
        raise ConditionNotMetError("a fails a^2 != 1, a^2 in Z and Z(R), or inversion of Z")
    t, inv = R.table, R.inv
    m = min(g for g in M.members if g not in Z.memberset)
    a2 = t[a][a]
    am = t[a][m]

    def in_coset(g: int, x: int) -> bool:
        return t[g][inv[x]] in Z.memberset

    image = [0] * R.order
    for g in range(R.order):
        if g in Z.memberset or in_coset(g, am):
            image[g] = g
        elif in_coset(g, a):
            image[g] = inv[g]
        else:  # Zm
            image[g] = t[a2][g]
    return _finish(R, M, image)


def build_automorphism_cond3(R: FiniteGroup, M: Subgroup, witness: ObstructionWitness) -> GroupAutomorphism:
    """``a^-1 g^-1 a^-1`` on ``M \\ Z``, identity on ``Z`` and ``Za``, inversion
    on the other three ``Z``-cosets outside ``M``, where ``Z = Z(M)``."""
    _require_index2(R, M)
    a = witness.a
    if a is None or a in M:
        raise ConditionNotMetError("witness needs a outside M")
    Z = center_of(M)
    if M.order != 4 * Z.order:
        raise ConditionNotMetError("|M : Z(M)| != 4")
    if _cond3_m(R, M, Z, a) is None:
        raise ConditionNotMetError("a fails o(a) = 4, gamma_2(M) = <a^2>, inversion of Z(M) or o(am) != 2")
    t, inv = R.table, R.inv
    ai = inv[a]
    image = [0] * R.order
    for g in range(R.order):
        if g in Z.memberset:
            image[g] = g
        elif g in M.memberset:
            image[g] = t[t[ai][inv[g]]][ai]
        elif t[g][ai] in Z.memberset:  # Za
            image[g] = g
        else:  # Z m_i a, i = 1, 2, 3
            image[g] = inv[g]
    return _finish(R, M, image)


def coset_representatives(M: Subgroup, Z: Subgroup) -> list[int]:
    """Smallest id in each right coset ``Zx`` of ``Z`` in ``M``, ordered by that id."""
    R = M.parent
    t, inv = R.table, R.inv
    reps: list[int] = []
    for g in M.members:
        if all(t[g][inv[r]] not in Z.memberset for r in reps):
            reps.append(g)
    return reps


def build_automorphism(R: FiniteGroup, M: Subgroup, witness: ObstructionWitness | None = None) -> GroupAutomorphism:
    """Builder for the condition recorded in ``witness`` (default: the status)."""
    w = witness if witness is not None else obstruction_status(R, M)
    if w.condition == COND1:
        return build_automorphism_cond1(R, M)
    if w.condition == COND2:
        return build_automorphism_cond2(R, M, w)
    if w.condition == COND3:
        return build_automorphism_cond3(R, M, w)
    raise ConditionNotMetError("no obstruction condition holds")


def theorem11_equivalence(R: FiniteGroup, M: Subgroup, cap: int = 64) -> bool:
    """Does the condition test agree with brute-force search for a
    half-inverting automorphism?"""
    status = obstruction_status(R, M)
    found = find_half_inverting_automorphism(R, M, cap=cap)
    return status.obstructed == (found is not None)
