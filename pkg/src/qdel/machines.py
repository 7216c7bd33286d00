"""Deletion machines as linear maps declared on basis product states.

A machine is fixed by its action on every computational basis state of its
input space and extended to superpositions by linearity. That single
extension rule is the engine behind every "actual output" computed in this
package, and it is what makes perfect deletion of unknown states impossible:
declaring |i,i> -> |i,blank> on the basis forces a quadratic, not linear,
dependence on the input amplitudes.

Machines are immutable and all checks are pure functions; concurrent use is
safe. `classify_deleter` draws its samples deterministically from a seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np

from .errors import InvalidStateError, ShapeError
from .hilbert import (
    ALGEBRAIC_TOL,
    DensityMatrix,
    Ket,
    SpaceShape,
    as_shape,
    basis_ket,
    complex_pair,
    density_of,
    haar_ket,
    ket,
    partial_trace,
    tensor,
    trace_distance,
)

__all__ = [
    "BLANK_INDEX",
    "BasisActionMachine",
    "AncillaConfig",
    "IsometryReport",
    "DeleterKind",
    "DeleterVerdict",
    "apply",
    "check_isometry",
    "qudit_pair_deleter",
    "conditional_deleter",
    "swap_deleter",
    "deletion_residual",
    "classify_deleter",
    "machine_to_json",
    "machine_from_json",
]

# The blank state |Sigma> is basis state 0 of the relevant subsystem; any
# fixed basis state is equivalent up to relabeling.
BLANK_INDEX = 0

_RULE_NORM_TOL = ALGEBRAIC_TOL


@dataclass(frozen=True, eq=False)
class BasisActionMachine:
    """Linear map given by one output ket per input basis product state.

    `rules[i]` is the image of input basis state `i` (row-major flat index).
    With `strict=True` (the default) every rule image must be normalized
    within 1e-12; `strict=False` admits arbitrary user-supplied rules so they
    can be inspected and rejected by the verification tools instead of at
    construction time.
    """

    input_shape: SpaceShape
    output_shape: SpaceShape
    rules: tuple[Ket, ...]
    strict: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        in_shape = as_shape(self.input_shape)
        out_shape = as_shape(self.output_shape)
        rules = tuple(self.rules)
        if len(rules) != in_shape.dim:
            raise ShapeError(
                f"need exactly one rule per input basis state: "
                f"{in_shape.dim} expected, {len(rules)} given"
            )
        for i, r in enumerate(rules):
            if r.dims != out_shape.dims:
                raise ShapeError(
                    f"rule {i} lives on {r.dims}, machine output is {out_shape.dims}"
                )
            if self.strict and not r.is_normalized(_RULE_NORM_TOL):
                raise InvalidStateError(f"rule {i} image is not normalized")
        matrix = np.column_stack([r.amplitudes for r in rules])
        matrix.setflags(write=False)
        object.__setattr__(self, "input_shape", in_shape)
        object.__setattr__(self, "output_shape", out_shape)
        object.__setattr__(self, "rules", rules)
        object.__setattr__(self, "_matrix", matrix)

    @property
    def matrix(self) -> np.ndarray:
        """Output-dim x input-dim matrix whose columns are the rule images."""
        return self._matrix  # type: ignore[attr-defined]

    def rule_norms_ok(self, tol: float = _RULE_NORM_TOL) -> bool:
        return all(r.is_normalized(tol) for r in self.rules)


@dataclass(frozen=True)
class AncillaConfig:
    """Ancilla bookkeeping for machines of shape [d, d, dim].

    `initial_index` is the basis state the ancilla starts in; `final_indices`
    maps an input-state label to the ancilla state it is left in after a
    successful deletion (a basis index or an explicit ket).
    """

    dim: int
    initial_index: int = 0
    final_indices: Mapping[str, Union[int, Ket]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError("ancilla dimension must be >= 2")
        if not 0 <= self.initial_index < self.dim:
            raise ValueError(
                f"initial ancilla index {self.initial_index} out of range for dim {self.dim}"
            )
        object.__setattr__(self, "final_indices", dict(self.final_indices))
        for label, state in self.final_indices.items():
            if isinstance(state, Ket):
                if state.dims != (self.dim,):
                    raise ShapeError(f"final ancilla state {label!r} has wrong dims")
                state.require_normalized()
            elif not 0 <= int(state) < self.dim:
                raise ValueError(f"final ancilla index {state} out of range for {label!r}")

    def final_ket(self, label: str) -> Ket:
        state = self.final_indices[label]
        if isinstance(state, Ket):
            return state
        return basis_ket([self.dim], int(state))


@dataclass(frozen=True)
class IsometryReport:
    is_isometry: bool
    max_gram_deviation: float


class DeleterKind(enum.Enum):
    SWAP_LIKE = "SwapLike"
    APPROXIMATE_DELETER = "ApproximateDeleter"
    NOT_LINEAR_CONSISTENT = "NotLinearConsistent"


@dataclass(frozen=True)
class DeleterVerdict:
    """Outcome of sampling a candidate deleter on Haar-random inputs.

    residual_stats: per-sample distance of the output from the ideal-deletion
        subspace |psi>|blank>(x)ancilla.
    ancilla_errors: per-sample trace distance between the reduced ancilla and
        the state predicted by carrying the input amplitudes onto the ancilla
        images of the identical-basis rules.
    ancilla_dependence: max pairwise trace distance between reduced ancilla
        states; large values mean the ancilla retains the input state.
    """

    kind: DeleterKind
    residual_stats: tuple[float, ...]
    ancilla_dependence: float
    ancilla_errors: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is DeleterKind.APPROXIMATE_DELETER and not self.residual_stats:
            raise ValueError("an approximate-deleter verdict needs residual samples")


def apply(machine: BasisActionMachine, state: Ket) -> Ket:
    """Extend the machine's basis action to `state` by linearity.

    The output is sum_i <basis_i|state> * rules[i]; it is normalized only when
    the machine is an isometry.
    """
    if state.dims != machine.input_shape.dims:
        raise ShapeError(
            f"input lives on {state.dims}, machine expects {machine.input_shape.dims}"
        )
    return Ket(machine.output_shape, machine.matrix @ state.amplitudes)


def check_isometry(machine: BasisActionMachine, tol: float = ALGEBRAIC_TOL) -> IsometryReport:
    """Compare the Gram matrix of all rule images against the identity."""
    m = machine.matrix
    gram = m.conj().T @ m
    dev = float(np.max(np.abs(gram - np.eye(machine.input_shape.dim))))
    return IsometryReport(is_isometry=dev <= tol, max_gram_deviation=dev)


def qudit_pair_deleter(
    d: int,
    garbage: Optional[Mapping[tuple[int, int], Ket]] = None,
) -> BasisActionMachine:
    """Two-copy deleter on shape [d, d], no ancilla.

    Identical basis inputs are deleted, |i>|i> -> |i>|blank>; distinct inputs
    |i>|j> go to an arbitrary garbage state, by default the identity
    pass-through |i>|j>. A custom `garbage` map must cover every pair i != j.
    """
    if d < 2:
        raise ValueError("qudit dimension must be >= 2")
    shape = SpaceShape((d, d))
    if garbage is not None:
        missing = [(i, j) for i in range(d) for j in range(d) if i != j and (i, j) not in garbage]
        if missing:
            raise ValueError(f"garbage map is missing pairs {missing}")
    rules = []
    for i in range(d):
        for j in range(d):
            if i == j:
                rules.append(basis_ket(shape, (i, BLANK_INDEX)))
            elif garbage is not None:
                g = garbage[(i, j)]
                if g.dims != shape.dims:
                    raise ShapeError(f"garbage state for {(i, j)} has dims {g.dims}")
                rules.append(g.require_normalized())
            else:
                rules.append(basis_ket(shape, (i, j)))
    return BasisActionMachine(shape, shape, tuple(rules))


_DEFAULT_ANCILLA = AncillaConfig(dim=3, initial_index=0, final_indices={"0": 1, "1": 2})


def conditional_deleter(ancilla: AncillaConfig = _DEFAULT_ANCILLA) -> BasisActionMachine:
    """Two-qubit deleter with ancilla, shape [2, 2, ancilla.dim].

    Identical input qubits are deleted and the ancilla records which state
    was seen; distinct inputs pass through untouched:

        |0 0 A> -> |0 blank A_0>     |0 1 A> -> |0 1 A>
        |1 1 A> -> |1 blank A_1>     |1 0 A> -> |1 0 A>

    Rules for input ancilla states other than |A> are a fixed orthonormal
    completion (Gram-Schmidt over the output basis in index order), which
    makes the whole machine a well-defined isometry.
    """
    m = ancilla.dim
    if m < 3:
        raise ValueError("the conditional deleter needs an ancilla of dimension >= 3")
    shape = SpaceShape((2, 2, m))
    a_init = ancilla.initial_index
    declared: dict[int, Ket] = {}
    for i in (0, 1):
        final = ancilla.final_ket(str(i))
        image = tensor(basis_ket([2], i), basis_ket([2], BLANK_INDEX), final)
        declared[shape.flat_index((i, i, a_init))] = image
    for i, j in ((0, 1), (1, 0)):
        declared[shape.flat_index((i, j, a_init))] = basis_ket(shape, (i, j, a_init))

    rules = _complete_to_isometry(shape, declared)
    return BasisActionMachine(shape, shape, rules)


def _complete_to_isometry(
    shape: SpaceShape, declared: Mapping[int, Ket]
) -> tuple[Ket, ...]:
    """Fill undeclared rules with a deterministic orthonormal completion.

    Walks the output basis in index order and Gram-Schmidt-orthogonalizes each
    candidate against everything already assigned.
    """
    dim = shape.dim
    assigned: dict[int, np.ndarray] = {
        idx: k.amplitudes.copy() for idx, k in declared.items()
    }
    used = list(assigned.values())
    candidate = 0
    for in_index in range(dim):
        if in_index in assigned:
            continue
        while True:
            if candidate >= dim:
                raise RuntimeError("ran out of basis vectors while completing the isometry")
            v = np.zeros(dim, dtype=complex)
            v[candidate] = 1.0
            candidate += 1
            for u in used:
                v = v - np.vdot(u, v) * u
            n = np.linalg.norm(v)
            if n > 1e-6:
                v = v / n
                assigned[in_index] = v
                used.append(v)
                break
    return tuple(Ket(shape, assigned[i]) for i in range(dim))


def swap_deleter(d: int) -> BasisActionMachine:
    """Machine on [d, d, d] that swaps the second copy into the ancilla.

    |i>|j>|k> -> |i>|k>|j>: after application the ancilla holds the former
    second copy. This "deletes" perfectly on identical inputs but only hides
    the state; the information is recoverable by undoing the swap.
    """
    if d < 2:
        raise ValueError("qudit dimension must be >= 2")
    shape = SpaceShape((d, d, d))
    rules = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                rules.append(basis_ket(shape, (i, k, j)))
    return BasisActionMachine(shape, shape, tuple(rules))


def deletion_residual(machine: BasisActionMachine, psi: Ket) -> float:
    """Failure of the machine, fed |psi>|psi>(|A>), to land in the ideal-deletion subspace.

    Returns 1 - ||(<psi| (x) <blank| (x) I) out|| with the output normalized
    first, so the value is 0 exactly for perfect deletion and grows toward 1
    as the output leaves the subspace spanned by |psi>|blank>(x)ancilla.
    """
    dims = machine.input_shape.dims
    if len(dims) not in (2, 3) or dims[0] != dims[1]:
        raise ShapeError(f"expected a [d, d] or [d, d, m] machine, got {dims}")
    if psi.dims != (dims[0],):
        raise ShapeError(f"input state has dims {psi.dims}, machine copies are {dims[0]}-level")
    psi.require_normalized()
    if len(dims) == 2:
        state = tensor(psi, psi)
    else:
        state = tensor(psi, psi, basis_ket([dims[2]], BLANK_INDEX))
    out = apply(machine, state)
    norm = out.norm()
    if norm < 1e-15:
        return 1.0
    arr = out.amplitudes.reshape(dims)
    kept = np.einsum("a,a...->...", psi.amplitudes.conj(), arr)
    weight = float(np.linalg.norm(np.atleast_1d(kept[BLANK_INDEX])))
    return 1.0 - weight / norm


def classify_deleter(
    machine: BasisActionMachine, samples: int, seed: int
) -> DeleterVerdict:
    """Sample the machine on Haar-random inputs and classify its behavior.

    SwapLike: every sampled residual vanishes and the reduced ancilla
    reconstructs the input state. ApproximateDeleter: residuals are positive.
    NotLinearConsistent: the declared rules themselves are not normalized.
    """
    if samples < 1:
        raise ValueError("samples must be a positive integer")
    dims = machine.input_shape.dims
    if len(dims) != 3 or dims[0] != dims[1] or dims[2] < dims[0]:
        raise ShapeError(
            f"classification needs an ancilla machine of shape [d, d, m] with m >= d, got {dims}"
        )
    d, m = dims[0], dims[2]

    if not machine.rule_norms_ok():
        return DeleterVerdict(
            kind=DeleterKind.NOT_LINEAR_CONSISTENT,
            residual_stats=(),
            ancilla_dependence=0.0,
        )

    # Ancilla images of the identical-basis rules; the machine must delete
    # identical basis inputs, |i i A> -> |i blank a_i> with ||a_i|| = 1.
    ancilla_images = np.zeros((d, m), dtype=complex)
    a_init = BLANK_INDEX
    for i in range(d):
        rule = machine.rules[machine.input_shape.flat_index((i, i, a_init))]
        block = rule.amplitudes.reshape(d, d, m)[i, BLANK_INDEX, :]
        if abs(np.linalg.norm(block) - 1.0) > 1e-9:
            raise InvalidStateError(
                f"machine does not delete the identical basis input |{i}>|{i}>"
            )
        ancilla_images[i] = block

    rng = np.random.default_rng(seed)
    residuals: list[float] = []
    ancilla_errors: list[float] = []
    reduced: list[DensityMatrix] = []
    for _ in range(samples):
        psi = haar_ket(d, rng)
        state = tensor(psi, psi, basis_ket([m], a_init))
        out = apply(machine, state)
        norm = out.norm()
        arr = out.amplitudes.reshape(d, d, m)
        kept = np.einsum("a,abc->bc", psi.amplitudes.conj(), arr)[BLANK_INDEX]
        residuals.append(1.0 - float(np.linalg.norm(kept)) / norm)

        rho_c = partial_trace(density_of(out.normalized()), keep={2})
        reduced.append(rho_c)
        predicted = psi.amplitudes @ ancilla_images
        pnorm = np.linalg.norm(predicted)
        if pnorm < 1e-12:
            ancilla_errors.append(1.0)
        else:
            target = density_of(ket(predicted / pnorm, [m]))
            ancilla_errors.append(trace_distance(rho_c, target))

    dependence = 0.0
    for i in range(len(reduced)):
        for j in range(i + 1, len(reduced)):
            dependence = max(dependence, trace_distance(reduced[i], reduced[j]))

    if max(residuals) <= 1e-10 and max(ancilla_errors) <= 1e-8:
        kind = DeleterKind.SWAP_LIKE
    else:
        kind = DeleterKind.APPROXIMATE_DELETER
    return DeleterVerdict(
        kind=kind,
        residual_stats=tuple(residuals),
        ancilla_dependence=dependence,
        ancilla_errors=tuple(ancilla_errors),
    )


# --- machine wire format -----------------------------------------------------


def machine_to_json(machine: BasisActionMachine) -> dict:
    return {
        "input_dims": list(machine.input_shape.dims),
        "output_dims": list(machine.output_shape.dims),
        "rules": [
            {
                "in_index": i,
                "out_amplitudes": [complex_pair(z) for z in r.amplitudes],
            }
            for i, r in enumerate(machine.rules)
        ],
    }


def machine_from_json(obj: Mapping, strict: bool = True) -> BasisActionMachine:
    in_shape = as_shape(obj["input_dims"])
    out_shape = as_shape(obj["output_dims"])
    entries = {int(r["in_index"]): r["out_amplitudes"] for r in obj["rules"]}
    if sorted(entries) != list(range(in_shape.dim)):
        raise ShapeError(
            f"rules must cover in_index 0..{in_shape.dim - 1} exactly once, got {sorted(entries)}"
        )
    rules = tuple(
        ket([complex(re, im) for re, im in entries[i]], out_shape)
        for i in range(in_shape.dim)
    )
    return BasisActionMachine(in_shape, out_shape, rules, strict=strict)
