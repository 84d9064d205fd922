"""Group constructors: cyclic, abelian, generalized dihedral, dicyclic,
direct and semidirect products, and table files.

Every constructor records a canonical generator tuple on the result:

* ``cyclic(n)``            -> ``(1,)``; element ``k`` is ``x^k``
* ``abelian([n1, ...])``   -> one generator per cyclic factor
* ``gendihedral(A)``       -> ``A``'s generators, then the involution ``|A|``;
  element ``e*|A| + a`` is ``a * iota^e``
* ``dicyclic(n)``          -> ``(x, y) = (1, 2n)``; element ``e*2n + k`` is ``x^k y^e``
* ``direct(A, B)``         -> ``A``'s generators then ``B``'s; ``(a, b)`` is ``a*|B| + b``
* ``semidirect(N, H, ..)`` -> ``N``'s generators then ``H``'s; ``(n, h)`` is ``h*|N| + n``

In a semidirect product ``h n h^-1 = act(h)(n)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from bigrr.automorphisms import hom_from_generators, is_automorphism
from bigrr.errors import GroupValidationError, InvalidSpecError
from bigrr.groups import MAX_ORDER, FiniteGroup, load_group_file

KINDS = ("cyclic", "abelian", "dihedral", "gendihedral", "dicyclic", "direct", "semidirect", "table")


@dataclass(frozen=True)
class GroupSpec:
    """A recipe for a finite group.

    ``args`` depends on ``kind``:

    * cyclic / dihedral / dicyclic: ``(n,)``
    * abelian: the invariant list
    * gendihedral: ``(spec,)``
    * direct: ``(spec, spec, ...)``
    * semidirect: ``(normal_spec, acting_spec, action)`` where ``action`` holds,
      for each canonical generator of the acting group, the images of the
      normal subgroup's canonical generators as words (see :func:`eval_word`)
      over ``normal_names``
    * table: ``(path,)``
    """

    kind: str
    args: tuple = ()
    normal_names: tuple[str, ...] = field(default=())

    def to_json(self) -> Any:
        k, a = self.kind, self.args
        if k in ("cyclic", "dihedral", "dicyclic"):
            return {k: a[0]}
        if k == "abelian":
            return {k: list(a)}
        if k == "gendihedral":
            return {k: a[0].to_json()}
        if k == "direct":
            return {k: [s.to_json() for s in a]}
        if k == "semidirect":
            return {
                k: {
                    "normal": a[0].to_json(),
                    "acting": a[1].to_json(),
                    "normal_names": list(self.normal_names),
                    "action": [list(imgs) for imgs in a[2]],
                }
            }
        if k == "table":
            return {k: str(a[0])}
        raise InvalidSpecError(f"unknown kind {k!r}")

    @classmethod
    def from_json(cls, obj: Any) -> "GroupSpec":
        if not isinstance(obj, dict) or len(obj) != 1:
            raise InvalidSpecError(f"group spec must be a one-key object, got {obj!r}")
        (k, v), = obj.items()
        if k in ("cyclic", "dihedral", "dicyclic"):
            if not isinstance(v, int):
                raise InvalidSpecError(f"{k} expects an integer")
            return cls(k, (v,))
        if k == "abelian":
            if not isinstance(v, list) or not all(isinstance(x, int) for x in v):
                raise InvalidSpecError("abelian expects a list of integers")
            return cls(k, tuple(v))
        if k == "gendihedral":
            return cls(k, (cls.from_json(v),))
        if k == "direct":
            if not isinstance(v, list) or len(v) < 2:
                raise InvalidSpecError("direct expects a list of at least two specs")
            return cls(k, tuple(cls.from_json(s) for s in v))
        if k == "semidirect":
            try:
                normal, acting = cls.from_json(v["normal"]), cls.from_json(v["acting"])
                names = tuple(v.get("normal_names", ()))
                action = tuple(tuple(imgs) for imgs in v["action"])
            except (KeyError, TypeError) as exc:
                raise InvalidSpecError(f"bad semidirect spec: {exc}") from exc
            return cls(k, (normal, acting, action), normal_names=names)
        if k == "table":
            return cls(k, (str(v),))
        raise InvalidSpecError(f"unknown group kind {k!r}")


def cyclic(n: int) -> GroupSpec:
    return GroupSpec("cyclic", (n,))


def abelian(*invariants: int) -> GroupSpec:
    return GroupSpec("abelian", tuple(invariants))


def dihedral(n: int) -> GroupSpec:
    return GroupSpec("dihedral", (n,))


def gendihedral(A: GroupSpec) -> GroupSpec:
    return GroupSpec("gendihedral", (A,))


def dicyclic(n: int) -> GroupSpec:
    return GroupSpec("dicyclic", (n,))


def direct(*factors: GroupSpec) -> GroupSpec:
    return GroupSpec("direct", tuple(factors))


def semidirect(
    N: GroupSpec, H: GroupSpec, action: Sequence[Sequence[str]], normal_names: Sequence[str]
) -> GroupSpec:
    return GroupSpec("semidirect", (N, H, tuple(tuple(a) for a in action)), tuple(normal_names))


def table_file(path: str | Path) -> GroupSpec:
    return GroupSpec("table", (str(path),))


# ------------------------------------------------------------------ builders


def spec_order(spec: GroupSpec) -> int:
    """Order of the group a spec describes, computed without building it."""
    k, a = spec.kind, spec.args
    if k == "cyclic":
        return a[0]
    if k == "abelian":
        out = 1
        for x in a:
            out *= x
        return out
    if k == "dihedral":
        return 2 * a[0]
    if k == "gendihedral":
        return 2 * spec_order(a[0])
    if k == "dicyclic":
        return 4 * a[0]
    if k == "direct":
        out = 1
        for s in a:
            out *= spec_order(s)
        return out
    if k == "semidirect":
        return spec_order(a[0]) * spec_order(a[1])
    if k == "table":
        return load_group_file(a[0]).order
    raise InvalidSpecError(f"unknown kind {k!r}")


def build_group(spec: GroupSpec, name: str | None = None) -> FiniteGroup:
    if spec.kind not in KINDS:
        raise InvalidSpecError(f"unknown kind {spec.kind!r}")
    _check_params(spec)
    n = spec_order(spec)
    if n > MAX_ORDER:
        raise InvalidSpecError(f"order {n} exceeds cap {MAX_ORDER}")
    try:
        G = _build(spec)
    except GroupValidationError as exc:
        raise InvalidSpecError(str(exc)) from exc
    if name is not None:
        G = FiniteGroup(G.table, name=name, generators=G.generators)
    return G


def _check_params(spec: GroupSpec) -> None:
    k, a = spec.kind, spec.args
    if k in ("cyclic", "dihedral", "dicyclic"):
        if len(a) != 1 or not isinstance(a[0], int) or a[0] < 1:
            raise InvalidSpecError(f"{k} needs a positive integer")
    elif k == "abelian":
        if not a or any(not isinstance(x, int) or x < 1 for x in a):
            raise InvalidSpecError("abelian needs positive integer invariants")
    elif k in ("gendihedral", "direct"):
        for s in a:
            _check_params(s)
    elif k == "semidirect":
        _check_params(a[0])
        _check_params(a[1])


def _build(spec: GroupSpec) -> FiniteGroup:
    k, a = spec.kind, spec.args
    if k == "cyclic":
        return _cyclic(a[0])
    if k == "abelian":
        G = _cyclic(a[0])
        for m in a[1:]:
            G = _direct(G, _cyclic(m))
        return FiniteGroup(G.table, name="x".join(f"C{m}" for m in a), generators=G.generators)
    if k == "dihedral":
        return _gendihedral(_cyclic(a[0]), name=f"D{a[0]}")
    if k == "gendihedral":
        return _gendihedral(_build(a[0]))
    if k == "dicyclic":
        return _dicyclic(a[0])
    if k == "direct":
        G = _build(a[0])
        for s in a[1:]:
            G = _direct(G, _build(s))
        return G
    if k == "semidirect":
        N, H = _build(a[0]), _build(a[1])
        return _semidirect(N, H, _action_from_words(N, H, a[2], spec.normal_names))
    if k == "table":
        return load_group_file(a[0])
    raise InvalidSpecError(f"unknown kind {k!r}")


def _cyclic(n: int) -> FiniteGroup:
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return FiniteGroup(table, name=f"C{n}", generators=(1,) if n > 1 else ())


def _direct(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    na, nb = A.order, B.order
    ta, tb = A.table, B.table
    table = tuple(
        tuple(ta[i // nb][j // nb] * nb + tb[i % nb][j % nb] for j in range(na * nb))
        for i in range(na * nb)
    )
    gens = tuple(g * nb for g in A.generators) + tuple(B.generators)
    name = f"{A.name}x{B.name}" if A.name and B.name else None
    return FiniteGroup(table, name=name, generators=gens)


def _semidirect(N: FiniteGroup, H: FiniteGroup, act: Sequence[Sequence[int]]) -> FiniteGroup:
    """``(n1, h1)(n2, h2) = (n1 * act[h1][n2], h1 h2)``."""
    nn, nh = N.order, H.order
    tn, th = N.table, H.table
    rows = []
    for i in range(nn * nh):
        h1, n1 = divmod(i, nn)
        a = act[h1]
        rows.append(
            tuple(th[h1][j // nn] * nn + tn[n1][a[j % nn]] for j in range(nn * nh))
        )
    gens = tuple(N.generators) + tuple(h * nn for h in H.generators)
    return FiniteGroup(tuple(rows), name=None, generators=gens)


def _gendihedral(A: FiniteGroup, name: str | None = None) -> FiniteGroup:
    if not A.is_abelian:
        raise InvalidSpecError("generalized dihedral needs an abelian base")
    C2 = _cyclic(2)
    act = [tuple(range(A.order)), A.inv]
    G = _semidirect(A, C2, act)
    name = name or (f"Dih({A.name})" if A.name else None)
    return FiniteGroup(G.table, name=name, generators=G.generators)


def _dicyclic(n: int) -> FiniteGroup:
    m = 2 * n

    def mul(i: int, j: int) -> int:
        e, a = divmod(i, m)
        f, b = divmod(j, m)
        # y x^b = x^-b y and y^2 = x^n
        k = (a + (b if e == 0 else -b)) % m
        if e and f:
            return (k + n) % m
        return (e ^ f) * m + k

    table = tuple(tuple(mul(i, j) for j in range(2 * m)) for i in range(2 * m))
    return FiniteGroup(table, name=f"Dic{n}", generators=(1, m))


def action_from_generator_images(
    N: FiniteGroup, H: FiniteGroup, images: Sequence[Sequence[int]]
) -> list[tuple[int, ...]]:
    """Extend ``H``'s canonical generators' actions to a homomorphism ``H -> Aut(N)``.

    ``images[i]`` lists the images of ``N.generators`` under generator ``i`` of
    ``H``.  The result maps each element of ``H`` to an image tuple on ``N``.
    """
    if len(images) != len(H.generators):
        raise InvalidSpecError("need one action entry per acting generator")
    autos = []
    for imgs in images:
        phi = hom_from_generators(N, N, N.generators, imgs)
        if phi is None or not is_automorphism(N, phi):
            raise InvalidSpecError("action generator is not an automorphism of N")
        autos.append(phi)
    ident = tuple(range(N.order))
    act: list[tuple[int, ...] | None] = [None] * H.order
    act[0] = ident
    frontier = [0]
    th = H.table
    while frontier:
        nxt = []
        for h in frontier:
            ah = act[h]
            for g, ag in zip(H.generators, autos):
                hg = th[h][g]
                # left action: act(h g)(x) = act(h)(act(g)(x))
                comp = tuple(ah[ag[x]] for x in range(N.order))
                if act[hg] is None:
                    act[hg] = comp
                    nxt.append(hg)
                elif act[hg] != comp:
                    raise InvalidSpecError("action is not a homomorphism into Aut(N)")
        frontier = nxt
    if any(x is None for x in act):
        raise InvalidSpecError("acting group generators do not generate it")
    return act  # type: ignore[return-value]


def _action_from_words(
    N: FiniteGroup, H: FiniteGroup, action: Sequence[Sequence[Any]], names: Sequence[str]
) -> list[tuple[int, ...]]:
    names = list(names) or [f"n{i}" for i in range(len(N.generators))]
    if len(names) != len(N.generators):
        raise InvalidSpecError("normal_names must name every generator of the normal factor")
    env = dict(zip(names, N.generators))
    images = []
    for imgs in action:
        if len(imgs) != len(N.generators):
            raise InvalidSpecError("each action entry must give one image per normal generator")
        images.append([w if isinstance(w, int) else eval_word(N, w, env) for w in imgs])
    return action_from_generator_images(N, H, images)


def eval_word(G: FiniteGroup, word: str, env: dict[str, int]) -> int:
    """Evaluate a word such as ``"x^2 y"``, ``"xy"`` or ``"x^-1"``.

    Generator names in ``env`` are single letters optionally followed by
    digits; ``"1"`` and the empty word denote the identity.
    """
    w = word.replace("*", " ").strip()
    if w in ("", "1", "e"):
        return 0
    acc = 0
    pos = 0
    pat = re.compile(r"\s*([A-Za-z][0-9]*)(?:\^(-?\d+))?")
    while pos < len(w):
        m = pat.match(w, pos)
        if not m or m.end() == pos:
            raise InvalidSpecError(f"cannot parse word {word!r}")
        sym, exp = m.group(1), m.group(2)
        if sym not in env:
            raise InvalidSpecError(f"unknown generator {sym!r} in {word!r}")
        acc = G.table[acc][G.power(env[sym], int(exp) if exp else 1)]
        pos = m.end()
        while pos < len(w) and w[pos] == " ":
            pos += 1
    return acc
