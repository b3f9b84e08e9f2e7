"""Motivic decompositions of isotropic flag varieties and correspondence algebra.

A Tits index with circled vertex set C cuts the Hasse diagram of X: every
edge whose label lies in C is erased, and the connected components of what
remains are the Chow-motive summands (twisted motives of anisotropic-kernel
varieties).  Singleton components are Lefschetz motives; components whose
profile is divisible by 1 + t^3 refine into twisted Rost motives when the
kernel is a strongly inner D4.

Correspondences are finite sums of product cycles a x b on X x X with
mod-p coefficients; composition contracts the middle factor through the
Poincaré pairing, so no general intersection products are needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import univar
from .errors import UsageError
from .rootdata import DynkinType, RootSystem, root_subsystem
from .schubert import ChowClass, _ring_modulus
from .weyl import coset_reps, hasse_diagram


@dataclass(frozen=True)
class MotiveSummand:
    """One connected component of the cut diagram."""

    vertices: tuple        # rep indices
    twist: int             # minimal codimension in the component
    profile: tuple         # vertex counts per codimension offset from twist
    kernel_type: DynkinType

    @property
    def is_lefschetz(self) -> bool:
        return len(self.vertices) == 1


def decompose(rs: RootSystem, theta, circled) -> list:
    """Cut the Hasse diagram along circled labels and collect components."""
    theta = tuple(sorted(set(theta)))
    circled = set(circled)
    for i in circled:
        if not 1 <= i <= rs.rank:
            raise UsageError(f"circled vertex {i} out of range")
    ct = coset_reps(rs, theta)
    h = hasse_diagram(ct)
    adj = {v: [] for v in h.vertices}
    for a, b, label in h.edges:
        if label not in circled:
            adj[a].append(b)
            adj[b].append(a)
    kernel = root_subsystem(rs, sorted(set(range(1, rs.rank + 1)) - circled)).type
    seen = set()
    out = []
    for start in h.vertices:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        codims = sorted(ct.codim(v) for v in comp)
        twist = codims[0]
        profile = [0] * (codims[-1] - twist + 1)
        for c in codims:
            profile[c - twist] += 1
        out.append(
            MotiveSummand(
                vertices=tuple(sorted(comp)),
                twist=twist,
                profile=tuple(profile),
                kernel_type=kernel,
            )
        )
    out.sort(key=lambda s: (s.twist, s.profile, s.vertices))
    return out


def decomposition_profile_sum(rs: RootSystem, theta, summands) -> tuple:
    """Sum of t^twist * profile over summands; must equal g(X)."""
    total = univar.ZERO
    for s in summands:
        total = univar.add(total, univar.shift(s.profile, s.twist))
    return total


def refine_rost(summands) -> list:
    """Rost twists replacing the non-singleton components.

    Each non-singleton profile must be divisible by 1 + t^3 (strongly inner
    D4 kernel); the quotient's exponents (with multiplicity) shifted by the
    component twist are the twists of the Rost summands R(i).
    """
    twists = []
    rost = (1, 0, 0, 1)
    for s in summands:
        if s.is_lefschetz:
            continue
        quot, rem = univar.divide(s.profile, rost)
        if rem != univar.ZERO:
            raise UsageError(
                f"component profile {list(s.profile)} is not divisible by 1+t^3"
            )
        for i, c in enumerate(quot):
            if c < 0:
                raise UsageError("negative multiplicity in Rost refinement")
            twists.extend([s.twist + i] * c)
    return sorted(twists)


def singleton_components(rs: RootSystem, theta, circled) -> list:
    """The isolated vertices of the cut diagram as (canonical word, codim)."""
    ct = coset_reps(rs, tuple(sorted(set(theta))))
    out = []
    for s in decompose(rs, theta, circled):
        if s.is_lefschetz:
            v = s.vertices[0]
            out.append((ct.reps[v].word, ct.codim(v)))
    return sorted(out, key=lambda t: (t[1], t[0]))


def decomposition_to_json(rs, theta, circled, rost=False) -> str:
    summands = decompose(rs, theta, circled)
    ct = coset_reps(rs, tuple(sorted(set(theta))))
    payload = {
        "type": rs.type.name(),
        "theta": sorted(set(theta)),
        "circled": sorted(set(circled)),
        "kernel": summands[0].kernel_type.name() if summands else "1",
        "summands": [
            {
                "twist": s.twist,
                "profile": list(s.profile),
                "kernel_type": s.kernel_type.name() if not s.is_lefschetz else "1",
                "vertices": [list(ct.reps[v].word) for v in s.vertices],
            }
            for s in summands
        ],
    }
    if rost:
        payload["rost_twists"] = refine_rost(summands)
    return json.dumps(payload, sort_keys=True)


def decomposition_to_dot(rs, theta, circled) -> str:
    """Cut Hasse diagram with one color per component."""
    ct = coset_reps(rs, tuple(sorted(set(theta))))
    h = hasse_diagram(ct)
    summands = decompose(rs, theta, circled)
    colors = ["red", "blue", "green", "orange", "purple", "brown", "cyan",
              "magenta", "gray", "olive", "pink", "navy"]
    color_of = {}
    for n, s in enumerate(summands):
        for v in s.vertices:
            color_of[v] = colors[n % len(colors)]
    circled = set(circled)
    lines = ["digraph motive {"]
    for v in h.vertices:
        w = ct.reps[v]
        lines.append(
            f'  n{v} [label="{list(w.word)} ({w.length})", color={color_of[v]}];'
        )
    for a, b, label in h.edges:
        if label in circled:
            lines.append(f'  n{a} -> n{b} [label="{label}", style=dotted];')
        else:
            lines.append(f'  n{a} -> n{b} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Correspondences


@dataclass
class Correspondence:
    """A sum of product cycles sum_i a_i x b_i on X x X over Z/p."""

    type_name: str
    theta: tuple
    ring: str
    pairs: tuple              # tuple of (ChowClass, ChowClass)

    def __post_init__(self):
        if _ring_modulus(self.ring) is None:
            raise UsageError("correspondences require a finite coefficient ring Z/p")
        for a, b in self.pairs:
            if a.ring != self.ring or b.ring != self.ring:
                raise UsageError("component classes must match the correspondence ring")

    def normalized(self, ct) -> dict:
        """Collapse to a matrix {(i, j): coeff} over basis pairs."""
        out = {}
        p = _ring_modulus(self.ring)
        for a, b in self.pairs:
            for i, ca in a.coeffs.items():
                for j, cb in b.coeffs.items():
                    v = (out.get((i, j), 0) + ca * cb) % p
                    if v:
                        out[(i, j)] = v
                    else:
                        out.pop((i, j), None)
        return out

    def codimension(self, ct) -> set:
        """Total codimensions present (homogeneous correspondences have one)."""
        return {ct.codim(i) + ct.codim(j) for (i, j) in self.normalized(ct)}


def _ct_of(q: Correspondence):
    from .rootdata import build_root_system

    rs = build_root_system(q.type_name)
    return rs, coset_reps(rs, q.theta)


def _from_matrix(type_name, theta, ring, matrix) -> Correspondence:
    pairs = []
    for (i, j), c in sorted(matrix.items()):
        pairs.append(
            (
                ChowClass(type_name, theta, ring, {i: c}),
                ChowClass(type_name, theta, ring, {j: 1}),
            )
        )
    return Correspondence(type_name, theta, ring, tuple(pairs))


def compose(q1: Correspondence, q2: Correspondence) -> Correspondence:
    """q1 o q2: with q1 = sum c x d and q2 = sum a x b, returns sum deg(b.c) (a x d).

    deg is the point-class coefficient: nonzero only for complementary
    codimensions, where it is the Poincaré pairing.
    """
    if (q1.type_name, q1.theta, q1.ring) != (q2.type_name, q2.theta, q2.ring):
        raise UsageError("correspondences are not composable")
    rs, ct = _ct_of(q1)
    p = _ring_modulus(q1.ring)
    dim = ct.max_length
    m1 = q1.normalized(ct)
    m2 = q2.normalized(ct)
    out = {}
    for (a, b), c2 in m2.items():
        for (c, d), c1 in m1.items():
            if ct.codim(b) + ct.codim(c) != dim:
                continue
            if ct.dual_index(b) != c:
                continue
            v = (out.get((a, d), 0) + c1 * c2) % p
            if v:
                out[(a, d)] = v
            else:
                out.pop((a, d), None)
    return _from_matrix(q1.type_name, q1.theta, q1.ring, out)


def diagonal(type_name, theta, ring="Z/2") -> Correspondence:
    """Delta_X = sum_w [X_w] x [Z_w], the identity of composition."""
    from .rootdata import build_root_system

    rs = build_root_system(type_name)
    ct = coset_reps(rs, tuple(sorted(set(theta))))
    pairs = []
    for k in range(len(ct)):
        pairs.append(
            (
                ChowClass(type_name, ct.theta, ring, {k: 1}),
                ChowClass(type_name, ct.theta, ring, {ct.dual_index(k): 1}),
            )
        )
    return Correspondence(type_name, ct.theta, ring, tuple(pairs))


def idempotent_power(q: Correspondence):
    """Least n with q^(2n) = q^n, found by cycle detection on powers of q."""
    rs, ct = _ct_of(q)
    seen = {}
    powers = []
    cur = q
    k = 1
    while True:
        key = tuple(sorted(cur.normalized(ct).items()))
        if key in seen:
            start = seen[key]       # powers repeat with period k - start
            period = k - start
            # least n >= start divisible by the period satisfies q^(2n) = q^n
            n = ((start + period - 1) // period) * period
            return n, powers[n - 1]
        seen[key] = k
        powers.append(cur)
        cur = compose(cur, q)
        k += 1


def projector_rank(q: Correspondence) -> int:
    """Coefficient of pt x pt in q . q^t: the rank of the realization."""
    rs, ct = _ct_of(q)
    p = _ring_modulus(q.ring)
    dim = ct.max_length
    m = q.normalized(ct)
    total = 0
    # q^t = sum d x c; (a x b).(d x c) = (a.d) x (b.c), so the pt x pt
    # coefficient needs dual(a) = d and dual(b) = c
    for (a, b), c1 in m.items():
        for (c, d), c2 in m.items():
            if ct.codim(a) + ct.codim(d) != dim or ct.codim(b) + ct.codim(c) != dim:
                continue
            if ct.dual_index(a) == d and ct.dual_index(b) == c:
                total += c1 * c2
    return total % p
