"""Lusztig-Bedard sequences (J_i, w_i) and their limits.

Elements carry their length-zero part, so ``w = x tau`` with ``x`` in the
affine Weyl group.  Under this convention ``^x(tau sigma(J)) = w J w^{-1}``
and ``x in ^J W_a^{tau sigma(J)}`` becomes ``w in ^J W~^J``.

A sequence is pinned down by its target ``x in ^{J_0} W~`` (the bijection
with ``^J W_a``): ``w_i`` is the minimal element of ``W_{J_i} x W_{J_i}``,
i.e. the relative position at step ``i``, and

    J_{i+1} = J_i  cap  w_i J_i w_i^{-1}.

Each step re-checks that ``w_{i+1}`` lies in ``W_{J_{i+1}} w_i W_{J_i}``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .weyl import AffineWeylGroup, IwahoriWeylElement


class InvalidStateError(ValueError):
    pass


@dataclass(frozen=True)
class LBState:
    j: frozenset
    w: IwahoriWeylElement
    target: IwahoriWeylElement
    step: int = 0
    # True once some w_i differs from w_0, i.e. condition (c) left room and the target decided
    choice_made: bool = False


def start(group: AffineWeylGroup, j0, w: IwahoriWeylElement) -> LBState:
    """Initial state; ``w`` is first reduced to its minimal element of ``W_{J_0} w``."""
    j0 = frozenset(j0)
    target = group.min_double_coset_rep(w, j0, ())
    return LBState(j0, group.min_double_coset_rep(target, j0, j0), target)


def is_valid(group: AffineWeylGroup, state: LBState) -> bool:
    return (
        group.is_minimal_double_coset_rep(state.w, state.j, state.j)
        and group.is_minimal_double_coset_rep(state.target, state.j, ())
        and group.min_double_coset_rep(state.target, state.j, state.j) == state.w
    )


def lb_step(group: AffineWeylGroup, state: LBState) -> LBState:
    if not is_valid(group, state):
        raise InvalidStateError("w is not the minimal double coset representative for J")
    j_next = state.j & group.conjugate_nodes(state.w, state.j)
    w_next = group.min_double_coset_rep(state.target, j_next, j_next)
    lhs = group.min_double_coset_rep(w_next, j_next, state.j)
    if lhs != group.min_double_coset_rep(state.w, j_next, state.j):
        raise InvalidStateError("successor leaves the double coset W_{J_{i+1}} w_i W_{J_i}")
    return LBState(j_next, w_next, state.target, state.step + 1, state.choice_made or w_next != state.w)


def lb_sequence(group: AffineWeylGroup, j0, w: IwahoriWeylElement) -> list[LBState]:
    state = start(group, j0, w)
    seq = [state]
    for _ in range(len(state.j) + 2):
        nxt = lb_step(group, state)
        if nxt.j == state.j and nxt.w == state.w:
            return seq
        seq.append(nxt)
        state = nxt
    raise RuntimeError("Lusztig-Bedard sequence failed to stabilize")


def lb_limit(group: AffineWeylGroup, j0, w: IwahoriWeylElement) -> tuple[frozenset, IwahoriWeylElement]:
    last = lb_sequence(group, j0, w)[-1]
    return last.j, last.w


def lb_iterations(group: AffineWeylGroup, j0, w: IwahoriWeylElement) -> int:
    return len(lb_sequence(group, j0, w)) - 1
