"""Finite-dimensional Hilbert-space primitives.

State vectors over declared tensor-product structures, density matrices,
partial traces, and the standard distance/fidelity measures used by the
deletion analyses. All values are immutable after construction and every
operation is a pure function, so they can be shared freely across threads.

Conventions:
    * the leftmost tensor factor is subsystem 0,
    * basis product states are flattened row-major
      (flat index = sum_k i_k * prod_{j>k} d_j),
    * kets are compared amplitude-exact; global phase is ignored only where
      a test says so explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidStateError, ShapeError

# 1e-12 for algebraic identities, 1e-10 for eigenvalue-based checks; dense
# double precision on total dimensions <= 4096 supports nothing tighter.
ALGEBRAIC_TOL = 1e-12
EIGEN_TOL = 1e-10

__all__ = [
    "ALGEBRAIC_TOL",
    "EIGEN_TOL",
    "SpaceShape",
    "Ket",
    "DensityMatrix",
    "as_shape",
    "ket",
    "basis_ket",
    "bloch_ket",
    "tensor",
    "inner",
    "density_of",
    "partial_trace",
    "trace_distance",
    "state_fidelity",
    "haar_qubit",
    "haar_ket",
    "complex_pair",
    "ket_to_json",
    "ket_from_json",
    "density_to_json",
    "density_from_json",
]


@dataclass(frozen=True)
class SpaceShape:
    """Ordered subsystem dimensions of a tensor-product space."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise ValueError("a space needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")

    @property
    def dim(self) -> int:
        """Total dimension (product of subsystem dimensions)."""
        out = 1
        for d in self.dims:
            out *= d
        return out

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def flat_index(self, indices: Sequence[int]) -> int:
        """Row-major flat index of the basis product state |i_0, i_1, ...>."""
        if len(indices) != len(self.dims):
            raise ShapeError(f"expected {len(self.dims)} indices, got {len(indices)}")
        flat = 0
        for i, d in zip(indices, self.dims):
            if not 0 <= i < d:
                raise ValueError(f"basis index {i} out of range for dimension {d}")
            flat = flat * d + i
        return flat


ShapeLike = Union[SpaceShape, Sequence[int]]


def as_shape(shape: ShapeLike) -> SpaceShape:
    if isinstance(shape, SpaceShape):
        return shape
    return SpaceShape(tuple(shape))


@dataclass(frozen=True, eq=False)
class Ket:
    """Complex amplitude vector over a declared product of subsystems.

    Amplitudes are stored read-only; the vector need not be normalized
    (machine outputs, in particular, are not in general).
    """

    shape: SpaceShape
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        shape = as_shape(self.shape)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != shape.dim:
            raise ShapeError(
                f"amplitude vector of length {amps.size} does not match "
                f"total dimension {shape.dim} of {shape.dims}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape.dims

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = ALGEBRAIC_TOL) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def normalized(self) -> "Ket":
        n = self.norm()
        if n < 1e-15:
            raise InvalidStateError("cannot normalize a zero vector")
        return Ket(self.shape, self.amplitudes / n)

    def require_normalized(self, tol: float = ALGEBRAIC_TOL) -> "Ket":
        if not self.is_normalized(tol):
            raise InvalidStateError(
                f"state is not normalized: |psi|^2 = {self.norm() ** 2!r}"
            )
        return self


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix over a product space."""

    shape: SpaceShape
    entries: np.ndarray

    def __post_init__(self) -> None:
        shape = as_shape(self.shape)
        mat = np.array(self.entries, dtype=complex)
        d = shape.dim
        if mat.shape != (d, d):
            raise ShapeError(f"expected a {d}x{d} matrix for {shape.dims}, got {mat.shape}")
        herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_dev > ALGEBRAIC_TOL:
            raise InvalidStateError(f"matrix is not Hermitian (deviation {herm_dev:.3e})")
        tr_dev = abs(complex(np.trace(mat)) - 1.0)
        if tr_dev > ALGEBRAIC_TOL:
            raise InvalidStateError(f"trace differs from 1 by {tr_dev:.3e}")
        min_eig = float(np.min(np.linalg.eigvalsh(mat)))
        if min_eig < -EIGEN_TOL:
            raise InvalidStateError(f"matrix has negative eigenvalue {min_eig:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "entries", mat)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape.dims


def ket(amplitudes: Iterable[complex], dims: ShapeLike) -> Ket:
    """Build a Ket from raw amplitudes over the given subsystem dimensions."""
    return Ket(as_shape(dims), np.asarray(list(amplitudes), dtype=complex))


def basis_ket(dims: ShapeLike, index: Union[int, Sequence[int]]) -> Ket:
    """Computational basis state, addressed by flat index or per-subsystem indices."""
    shape = as_shape(dims)
    flat = shape.flat_index(index) if not isinstance(index, (int, np.integer)) else int(index)
    if not 0 <= flat < shape.dim:
        raise ValueError(f"basis index {flat} out of range for dimension {shape.dim}")
    amps = np.zeros(shape.dim, dtype=complex)
    amps[flat] = 1.0
    return Ket(shape, amps)


def bloch_ket(theta: float, phi: float = 0.0) -> Ket:
    """Qubit cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return ket(
        [math.cos(theta / 2.0), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2.0)],
        [2],
    )


def tensor(*factors: Ket) -> Ket:
    """Kronecker product of kets, in the declared subsystem order.

    The result's shape is the concatenation of the factor shapes. Bilinear in
    every slot; norms multiply, so unnormalized factors are accepted.
    """
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    amps = factors[0].amplitudes
    dims: tuple[int, ...] = factors[0].dims
    for f in factors[1:]:
        amps = np.kron(amps, f.amplitudes)
        dims = dims + f.dims
    return Ket(SpaceShape(dims), amps)


def inner(a: Ket, b: Ket) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dims != b.dims:
        raise ShapeError(f"shape mismatch: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def density_of(psi: Ket) -> DensityMatrix:
    """Rank-one projector |psi><psi| of a normalized state."""
    psi.require_normalized()
    return DensityMatrix(psi.shape, np.outer(psi.amplitudes, psi.amplitudes.conj()))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in `keep`.

    The kept subsystems stay in their original order; the trace is preserved.
    """
    keep_set = sorted(set(int(k) for k in keep))
    n = rho.shape.n_subsystems
    if not keep_set:
        raise ValueError("must keep at least one subsystem")
    if keep_set[0] < 0 or keep_set[-1] >= n:
        raise ValueError(f"keep indices {keep_set} out of range for {n} subsystems")

    dims = list(rho.dims)
    work = rho.entries.reshape(dims + dims)
    for idx in sorted(set(range(n)) - set(keep_set), reverse=True):
        work = np.trace(work, axis1=idx, axis2=idx + len(dims))
        dims.pop(idx)
    side = 1
    for d in dims:
        side *= d
    return DensityMatrix(SpaceShape(tuple(dims)), work.reshape(side, side))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(1/2) sum of |eigenvalues| of rho - sigma.

    The difference of Hermitian matrices is Hermitian, so a Hermitian
    eigendecomposition is exact here.
    """
    if rho.dims != sigma.dims:
        raise ShapeError(f"shape mismatch: {rho.dims} vs {sigma.dims}")
    eigs = np.linalg.eigvalsh(rho.entries - sigma.entries)
    return 0.5 * float(np.sum(np.abs(eigs)))


def state_fidelity(rho: DensityMatrix, psi: Ket) -> float:
    """Overlap <psi|rho|psi> of a mixed state with a pure target, in [0, 1]."""
    if rho.dims != psi.dims:
        raise ShapeError(f"shape mismatch: {rho.dims} vs {psi.dims}")
    v = psi.amplitudes
    val = float(np.real(np.vdot(v, rho.entries @ v)))
    # eigenvalue slack of the PSD check can push the quadratic form epsilon out of range
    return min(max(val, 0.0), 1.0)


def haar_qubit(rng: np.random.Generator) -> Ket:
    """Haar-random qubit via theta = arccos(1 - 2u), phi = 2 pi v."""
    theta = math.acos(1.0 - 2.0 * rng.random())
    phi = 2.0 * math.pi * rng.random()
    return bloch_ket(theta, phi)


def haar_ket(dim: int, rng: np.random.Generator) -> Ket:
    """Haar-random state of one `dim`-level system (normalized complex Gaussian)."""
    if dim == 2:
        return haar_qubit(rng)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return ket(v / np.linalg.norm(v), [dim])


# --- JSON wire format: complex numbers as [re, im], matrices row-major ------


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def ket_to_json(psi: Ket) -> dict:
    return {
        "dims": list(psi.dims),
        "amplitudes": [complex_pair(z) for z in psi.amplitudes],
    }


def ket_from_json(obj: dict) -> Ket:
    amps = [complex(re, im) for re, im in obj["amplitudes"]]
    return ket(amps, obj["dims"])


def density_to_json(rho: DensityMatrix) -> dict:
    return {
        "dims": list(rho.dims),
        "entries": [[complex_pair(z) for z in row] for row in rho.entries],
    }


def density_from_json(obj: dict) -> DensityMatrix:
    mat = np.array(
        [[complex(re, im) for re, im in row] for row in obj["entries"]], dtype=complex
    )
    return DensityMatrix(as_shape(obj["dims"]), mat)
