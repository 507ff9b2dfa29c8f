"""Integer weights that order trajectories consistently with a preference.

Each preference node gets a weight and a strict upper bound ``max``:

=================  ==============================  =====================
node               weight                          max
=================  ==============================  =====================
desire             1 if satisfied else 0           2
d1 <| ... <| dk    sum of 2**(k-r) * w_r           2**k
p & q, p | q       w_p + w_q                       max_p + max_q
!!p                max_p - 1 - w_p                 max_p
p <| q             max_q * w_p + w_q               max_q * max_p + max_q
=================  ==============================  =====================

Longer general chains are folded to the right before weighting.  Every
weight is strictly below its bound, which is what keeps ``<|`` lexicographic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ArithmeticOverflow, SoundnessViolation
from .planner import Trajectory
from .pp import Atomic, Chain, Conj, Desire, Disj, Neg, Preference, as_preference, format_preference
from .semantics import Comparison, compare_values, leaf_values

__all__ = ["WeightReport", "NodeWeight", "weight", "weight_from_values", "max_weight", "check_admissible", "AdmissibilityReport"]

INT64_MAX = 2**63 - 1
FLOAT_EXACT = 2**53


class PrecisionWarning(UserWarning):
    """A bound exceeds 2**53 and will not survive a round trip through a double."""


def _checked(value: int) -> int:
    if not 0 <= value <= INT64_MAX:
        raise ArithmeticOverflow(f"weight arithmetic left the signed 64-bit range: {value}")
    return value


@dataclass(frozen=True)
class NodeWeight:
    path: str
    label: str
    weight: int
    max_bound: int


@dataclass
class WeightReport:
    weight: int
    max_bound: int
    nodes: dict = field(default_factory=dict)  # path -> NodeWeight, preorder

    def explain(self) -> str:
        lines = []
        for node in self.nodes.values():
            depth = node.path.count(".")
            lines.append(f"{'  ' * depth}{node.label}: w={node.weight} max={node.max_bound}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {n.path: {"label": n.label, "w": n.weight, "max": n.max_bound} for n in self.nodes.values()}


def _fold(parts: Sequence[Preference]) -> Preference:
    """Right-fold a chain into nested binary chains."""
    if len(parts) == 1:
        return parts[0]
    return Chain((parts[0], _fold(parts[1:])))


def _short(text: str, limit: int = 60) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _eval(p: Preference, values, pos: int, path: str, nodes: dict | None):
    """Return ``(weight, max, next leaf position)``."""
    if isinstance(p, Atomic):
        k = len(p.chain)
        w = 0
        if nodes is not None:
            nodes[path] = None
        for r, d in enumerate(p.chain):
            bit = int(bool(values[pos + r])) if values is not None else 0
            w = _checked(w + (bit << (k - 1 - r)))
            if nodes is not None and k > 1:
                nodes[f"{path}.{r}"] = NodeWeight(f"{path}.{r}", "desire " + _short(format_preference(d)), bit, 2)
        bound = _checked(2**k)
        if nodes is not None:
            label = ("desire " if k == 1 else "chain ") + _short(format_preference(p))
            nodes[path] = NodeWeight(path, label, w, bound)
        return w, bound, pos + k
    if nodes is not None:
        nodes[path] = None  # reserve the preorder slot
    if isinstance(p, (Conj, Disj)):
        w1, m1, pos = _eval(p.left, values, pos, path + ".0", nodes)
        w2, m2, pos = _eval(p.right, values, pos, path + ".1", nodes)
        w, bound = _checked(w1 + w2), _checked(m1 + m2)
        label = "&" if isinstance(p, Conj) else "|"
    elif isinstance(p, Neg):
        w1, m1, pos = _eval(p.body, values, pos, path + ".0", nodes)
        w, bound = _checked(m1 - 1 - w1), m1
        label = "!!"
    elif isinstance(p, Chain):
        if len(p.parts) > 2:
            p = _fold(p.parts)
        w1, m1, pos = _eval(p.parts[0], values, pos, path + ".0", nodes)
        w2, m2, pos = _eval(p.parts[1], values, pos, path + ".1", nodes)
        w = _checked(_checked(m2 * w1) + w2)
        bound = _checked(_checked(m2 * m1) + m2)
        label = "<|"
    else:
        raise TypeError(f"not a preference: {p!r}")
    if nodes is not None:
        nodes[path] = NodeWeight(path, label, w, bound)
    return w, bound, pos


def weight_from_values(values: Sequence[bool], p: Preference | Desire, explain: bool = False) -> WeightReport:
    p = as_preference(p)
    nodes: dict | None = {} if explain else None
    w, bound, _ = _eval(p, values, 0, "r", nodes)
    if w >= bound:
        raise SoundnessViolation(f"weight {w} is not below its bound {bound}")
    if nodes is not None:
        for node in nodes.values():
            if node.weight >= node.max_bound:
                raise SoundnessViolation(f"node {node.path}: weight {node.weight} >= bound {node.max_bound}")
    return WeightReport(w, bound, nodes or {})


def weight(t: Trajectory, p: Preference | Desire, explain: bool = True) -> WeightReport:
    """Weight of ``t`` under ``p`` with the per-node breakdown."""
    return weight_from_values(leaf_values(t, p), p, explain=explain)


def max_weight(p: Preference | Desire) -> int:
    """The strict upper bound of ``p``; warns when it exceeds 2**53."""
    _, bound, _ = _eval(as_preference(p), None, 0, "r", None)
    if bound > FLOAT_EXACT:
        warnings.warn(f"max weight {bound} exceeds 2**53", PrecisionWarning, stacklevel=2)
    return bound


@dataclass
class AdmissibilityReport:
    ok: bool
    pairs_checked: int
    violation: tuple | None = None  # (i, j, comparison, w_i, w_j)

    def __str__(self) -> str:
        if self.ok:
            return f"admissible over {self.pairs_checked} ordered pairs"
        i, j, c, wi, wj = self.violation
        return f"violation: trajectories {i} and {j} compare {c.value} but weigh {wi} and {wj}"


def check_admissible(trajs: Sequence[Trajectory], p: Preference | Desire) -> AdmissibilityReport:
    """Check that preferred implies heavier and indistinguishable implies equal weight."""
    values = [leaf_values(t, p) for t in trajs]
    weights = [weight_from_values(v, p, explain=True).weight for v in values]
    pairs = 0
    for i, vi in enumerate(values):
        for j, vj in enumerate(values):
            pairs += 1
            c = compare_values(vi, vj, p)
            bad = (c is Comparison.LEFT and not weights[i] > weights[j]) or (
                c is Comparison.INDISTINGUISHABLE and weights[i] != weights[j]
            )
            if bad:
                return AdmissibilityReport(False, pairs, (i, j, c, weights[i], weights[j]))
    return AdmissibilityReport(True, pairs)
