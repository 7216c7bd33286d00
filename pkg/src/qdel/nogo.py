"""Unitarity obstruction to deleting copies of non-orthogonal states.

A unitary acting on two copies drawn from {psi1, psi2} and required to
delete the second copy would have to preserve every pairwise inner product
of the four declared transformations

    psi1 psi1 -> psi1 sigma      psi1 psi2 -> psi1 psi2
    psi2 psi2 -> psi2 sigma      psi2 psi1 -> psi2 psi1

(sigma is the blank). Spelling those out gives five scalar conditions in
s = <psi1|psi2>; they hold simultaneously only in the trivial case
psi1 = psi2 = sigma. This module evaluates the conditions numerically for
concrete states and sweeps them over the overlap range, and provides a
Gram-matrix preservation check for arbitrary machines and alphabets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import ShapeError
from .hilbert import Ket, basis_ket, inner, ket, tensor
from .machines import BasisActionMachine, apply

__all__ = [
    "Constraint",
    "ConstraintReport",
    "GramReport",
    "nonorthogonal_constraints",
    "sweep_overlap",
    "gram_preservation_check",
    "ideal_deletion_map",
]

_SAT_TOL = 1e-10


@dataclass(frozen=True)
class Constraint:
    """One inner-product preservation condition, with its generating rule pair."""

    label: str
    lhs: complex
    rhs: complex

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


@dataclass(frozen=True)
class ConstraintReport:
    """The five preservation conditions for a two-state alphabet."""

    overlap_s: complex
    constraints: tuple[Constraint, ...]
    satisfiable: bool
    trivial_only: bool

    def __post_init__(self) -> None:
        if len(self.constraints) != 5:
            raise ValueError(f"expected exactly 5 constraints, got {len(self.constraints)}")
        if self.satisfiable != all(c.residual < _SAT_TOL for c in self.constraints):
            raise ValueError("satisfiable flag is inconsistent with the residuals")

    @property
    def max_residual(self) -> float:
        return max(c.residual for c in self.constraints)


@dataclass(frozen=True)
class GramReport:
    max_gram_residual: float


def nonorthogonal_constraints(psi1: Ket, psi2: Ket, sigma: Ket) -> ConstraintReport:
    """Evaluate the five conditions for deleting copies of {psi1, psi2}.

    Labels record which pair of transformation rules generates each
    condition (11 = psi1 psi1 -> psi1 sigma, 12 = psi1 psi2 pass-through,
    and so on).
    """
    for name, state in (("psi1", psi1), ("psi2", psi2), ("sigma", sigma)):
        if state.dims != (2,):
            raise ShapeError(f"{name} must be a single qubit, got dims {state.dims}")
        state.require_normalized()
    s = inner(psi1, psi2)
    s1 = inner(sigma, psi1)
    s2 = inner(sigma, psi2)
    constraints = (
        Constraint("s^2 = s  [11|22]", s * s, s),
        Constraint("s = <sigma|psi2>  [11|12]", s, s2),
        Constraint("<sigma|psi2> = 1  [22|12]", s2, 1.0),
        Constraint("<sigma|psi1> = 1  [11|21]", s1, 1.0),
        Constraint("<psi2|psi1> = <sigma|psi1>  [22|21]", inner(psi2, psi1), s1),
    )
    satisfiable = all(c.residual < _SAT_TOL for c in constraints)
    trivial = satisfiable and min(abs(s), abs(s1), abs(s2)) > 1.0 - _SAT_TOL
    return ConstraintReport(
        overlap_s=s, constraints=constraints, satisfiable=satisfiable, trivial_only=trivial
    )


def sweep_overlap(n_points: int, phase: float = 0.0) -> list[ConstraintReport]:
    """Constraint reports for psi2 = s e^{i phase}|0> + sqrt(1-s^2)|1> on an s grid.

    psi1 = sigma = |0>, s running over [0, 1]. The max residual vanishes only
    at s = 1 (for phase 0); a nonzero phase breaks even that endpoint, since
    s^2 = s has no non-real solutions.
    """
    if n_points < 2:
        raise ValueError("need at least 2 grid points")
    psi1 = basis_ket([2], 0)
    sigma = basis_ket([2], 0)
    out = []
    for s in np.linspace(0.0, 1.0, n_points):
        c = complex(np.cos(phase), np.sin(phase)) * s
        psi2 = ket([c, np.sqrt(max(1.0 - s * s, 0.0))], [2])
        out.append(nonorthogonal_constraints(psi1, psi2, sigma))
    return out


MachineLike = Union[BasisActionMachine, Callable[[Ket], Ket]]


def gram_preservation_check(machine: MachineLike, alphabet: Sequence[Ket]) -> GramReport:
    """Compare input and output Gram matrices over identical-copy inputs.

    For every alphabet pair (i, j): input_i = psi_i psi_i (with the ancilla
    attached when the machine has one), output_i = machine(input_i); reports
    the largest |<in_i|in_j> - <out_i|out_j>|. Isometries give 0.
    """
    if not alphabet:
        raise ValueError("alphabet must not be empty")
    inputs = []
    if isinstance(machine, BasisActionMachine):
        dims = machine.input_shape.dims
        if len(dims) not in (2, 3) or dims[0] != dims[1]:
            raise ShapeError(f"expected a [d, d] or [d, d, m] machine, got {dims}")
        for psi in alphabet:
            if psi.dims != (dims[0],):
                raise ShapeError(
                    f"alphabet state dims {psi.dims} do not match machine copies ({dims[0]},)"
                )
            pair = tensor(psi, psi)
            if len(dims) == 3:
                pair = tensor(pair, basis_ket([dims[2]], 0))
            inputs.append(pair)
        outputs = [apply(machine, v) for v in inputs]
    else:
        inputs = [tensor(psi, psi) for psi in alphabet]
        outputs = [machine(v) for v in inputs]

    worst = 0.0
    for i in range(len(alphabet)):
        for j in range(i + 1, len(alphabet)):
            gin = inner(inputs[i], inputs[j])
            gout = inner(outputs[i], outputs[j])
            worst = max(worst, abs(gin - gout))
    return GramReport(max_gram_residual=worst)


def ideal_deletion_map(alphabet: Sequence[Ket], sigma: Ket) -> Callable[[Ket], Ket]:
    """The postulated (non-linear) exact deleter on an alphabet, as a plain map.

    Inputs recognized as psi_i psi_i go to psi_i sigma; anything else passes
    through unchanged. Useful for feeding `gram_preservation_check` the
    transformation a unitary deleter would have to implement.
    """
    frozen = [psi.require_normalized() for psi in alphabet]
    sigma.require_normalized()

    def mapping(state: Ket) -> Ket:
        for psi in frozen:
            pair = tensor(psi, psi)
            if pair.dims == state.dims and abs(inner(pair, state)) > 1.0 - 1e-9:
                return tensor(psi, sigma)
        return state

    return mapping
