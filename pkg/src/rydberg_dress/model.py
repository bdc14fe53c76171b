"""Container for a time-dependent Lindblad problem.

``H(t) = static + Σ_k c_k(t) G_k`` where every coefficient function maps an
array of times to complex values. Hermiticity is the builder's job: a
non-Hermitian generator must appear together with its adjoint and the
conjugate coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

Coefficient = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class LindbladModel:
    static: np.ndarray
    terms: tuple[tuple[np.ndarray, Coefficient], ...]
    jumps: tuple[np.ndarray, ...]
    dims: tuple[int, ...]
    labels: tuple[tuple[str, ...], ...]  # level labels for each atom
    t_final: float

    @property
    def dim(self) -> int:
        return self.static.shape[0]

    def hamiltonian(self, t: float) -> np.ndarray:
        h = self.static.copy()
        for gen, coef in self.terms:
            h = h + complex(np.asarray(coef(np.asarray([t]))).ravel()[0]) * gen
        return h

    def monitors(self) -> tuple[list[tuple[int, str]], np.ndarray]:
        """Weights mapping ``diag(ρ)`` onto single-atom level populations.

        Returns the ``(atom, label)`` keys and a ``(n_keys, dim)`` 0/1 matrix.
        """
        keys: list[tuple[int, str]] = []
        rows = []
        grids = np.indices(self.dims).reshape(len(self.dims), -1)
        for atom, names in enumerate(self.labels):
            for level, name in enumerate(names):
                keys.append((atom, name))
                rows.append((grids[atom] == level).astype(float))
        return keys, np.array(rows)


def lift(op: np.ndarray, atom: int, dims: Sequence[int]) -> np.ndarray:
    """Embed a single-atom operator into the tensor-product space."""
    out = np.ones((1, 1), dtype=np.complex128)
    for k, d in enumerate(dims):
        out = np.kron(out, op if k == atom else np.eye(d))
    return out


def ket_bra(dim: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[i, j] = 1.0
    return m
