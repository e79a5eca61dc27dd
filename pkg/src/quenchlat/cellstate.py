"""Unit-cell initial states and their two-point functions.

A :class:`CellState` is a superposition of Fock monomials
``c^dag_{a_1} ... c^dag_{a_N} |0>`` inside one unit cell; the full initial state
is its tensor product over all cells. Its within-cell two-point function
``G[n, m] = <c^dag_n c_m>`` is computed by brute force in the 2^|nu| dimensional
cell Fock space, so all fermionic signs come from Jordan-Wigner bookkeeping
rather than from hand-derived phases.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CellTooLarge, NotGaussian, ZeroNorm
from .lattice import TWO_PI, QuenchConfig, as_momenta, cell_sites, kshifts, reduce_momentum, site_index

MAX_CELL_SITES = 16


@dataclass(frozen=True)
class CellState:
    """Superposition of Fock monomials within one unit cell.

    Parameters
    ----------
    nu : tuple of int
        Cell extents.
    terms : sequence of (amplitude, sites)
        ``sites`` lists flat (lexicographic) site indices or d-vectors; the
        monomial is ``c^dag_{sites[0]} c^dag_{sites[1]} ... |0>``.
    """

    nu: tuple[int, ...]
    terms: tuple[tuple[complex, tuple[int, ...]], ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        nu = tuple(int(n) for n in np.atleast_1d(self.nu))
        object.__setattr__(self, "nu", nu)
        vol = int(np.prod(nu))
        norm_terms = []
        for amp, sites in self.terms:
            flat = tuple(_flat_site(nu, s) for s in sites)
            if any(not 0 <= s < vol for s in flat):
                raise ValueError(f"site out of cell {nu}: {sites}")
            if len(set(flat)) != len(flat):
                raise ZeroNorm(f"repeated site in term {sites}")
            norm_terms.append((complex(amp), flat))
        if not norm_terms:
            raise ValueError("a cell state needs at least one term")
        counts = {len(s) for _, s in norm_terms}
        if len(counts) != 1:
            raise ValueError("all terms must have the same particle number")
        N = counts.pop()
        if not 1 <= N <= vol:
            raise ValueError(f"particle number {N} outside [1, {vol}]")
        object.__setattr__(self, "terms", tuple(norm_terms))

    @property
    def config(self) -> QuenchConfig:
        return QuenchConfig(self.nu)

    @property
    def d(self) -> int:
        return len(self.nu)

    @property
    def volume(self) -> int:
        return int(np.prod(self.nu))

    @property
    def N(self) -> int:
        return len(self.terms[0][1])

    @property
    def is_classical(self) -> bool:
        return len(self.terms) == 1

    @property
    def occupied(self) -> tuple[int, ...]:
        """Occupied flat sites of a classical configuration."""
        if not self.is_classical:
            raise ValueError("state is a superposition")
        return tuple(sorted(self.terms[0][1]))


def _flat_site(nu, s) -> int:
    if np.ndim(s) == 0:
        return int(s)
    return site_index(nu, s)


def classical(nu, sites: Sequence, label: str = "") -> CellState:
    """Fermions at fixed positions of the cell."""
    return CellState(nu, ((1.0, tuple(sites)),), label=label)


def superposition(nu, terms, label: str = "") -> CellState:
    return CellState(nu, tuple((a, tuple(s)) for a, s in terms), label=label)


def from_labels(nu, labels: Sequence[int]) -> list:
    """Convert diagram labels to site vectors.

    Diagram labels run along the first axis fastest (``label = x + nu_x * y``
    in 2D), which is how cells are drawn row by row.
    """
    nu = tuple(np.atleast_1d(nu))
    out = []
    for lab in labels:
        vec = []
        for n in nu:
            vec.append(int(lab) % n)
            lab = int(lab) // n
        out.append(tuple(vec))
    return out


def named_state(name: str, alpha: float | None = None) -> CellState:
    """Named states used throughout the examples and tests.

    ``"1d:0"``, ``"1d:0,1"``, ``"1d:0,2"`` are nu=4 chains; ``"2d:0"``,
    ``"2d:0,2"``, ``"2d:0,3"`` are nu=(2,2) cells with diagram labels;
    ``"phi4"`` and ``"phi22"`` are the superpositions
    ``|0,1> + alpha|0,2>`` (1D) and ``|0,2> + alpha|0,3>`` (2D).
    """
    if name == "phi4":
        a = 0.5 if alpha is None else alpha
        return superposition((4,), [(1.0, (0, 1)), (a, (0, 2))], label=f"phi4(alpha={a:g})")
    if name == "phi22":
        a = 0.5 if alpha is None else alpha
        nu = (2, 2)
        return superposition(
            nu, [(1.0, from_labels(nu, (0, 2))), (a, from_labels(nu, (0, 3)))], label=f"phi22(alpha={a:g})"
        )
    dim, _, labels = name.partition(":")
    labs = [int(x) for x in labels.split(",")]
    if dim == "1d":
        return classical((4,), labs, label=name)
    if dim == "2d":
        return classical((2, 2), from_labels((2, 2), labs), label=name)
    raise KeyError(name)


CLASSICAL_EXAMPLES = ("1d:0", "1d:0,1", "1d:0,2", "2d:0", "2d:0,3", "2d:0,2")


# -- Fock space oracle -------------------------------------------------------


def _apply_create(basis: int, site: int):
    if basis >> site & 1:
        return None, 0
    sign = -1 if bin(basis & ((1 << site) - 1)).count("1") % 2 else 1
    return basis | (1 << site), sign


def _apply_annihilate(basis: int, site: int):
    if not basis >> site & 1:
        return None, 0
    sign = -1 if bin(basis & ((1 << site) - 1)).count("1") % 2 else 1
    return basis & ~(1 << site), sign


def fock_vector(state: CellState) -> dict[int, complex]:
    """Normalized cell state as a sparse map ``bitmask -> amplitude``."""
    if state.volume > MAX_CELL_SITES:
        raise CellTooLarge(f"|nu| = {state.volume} exceeds {MAX_CELL_SITES}")
    vec: dict[int, complex] = {}
    for amp, sites in state.terms:
        basis, coef = 0, amp
        for s in reversed(sites):
            basis, sign = _apply_create(basis, s)
            coef *= sign
        vec[basis] = vec.get(basis, 0.0) + coef
    norm = np.sqrt(sum(abs(a) ** 2 for a in vec.values()))
    if norm < 1e-14:
        raise ZeroNorm("state vanishes after antisymmetrization")
    return {b: a / norm for b, a in vec.items() if a != 0}


@dataclass(frozen=True)
class CellGreen:
    """Within-cell two-point function ``G[n, m] = <c^dag_n c_m>``."""

    nu: tuple[int, ...]
    G: np.ndarray
    N: int

    @property
    def volume(self) -> int:
        return int(np.prod(self.nu))


def cell_green(state: CellState, check_gaussian: bool = True) -> CellGreen:
    """Exact two-point function of a cell state by Fock-space evaluation.

    Raises
    ------
    CellTooLarge
        For cells with more than 16 sites.
    ZeroNorm
        If the superposition vanishes.
    NotGaussian
        If ``check_gaussian`` and G is not a projector (the state is not a
        single Slater determinant, so Wick factorization would fail).
    """
    vec = fock_vector(state)
    n = state.volume
    G = np.zeros((n, n), dtype=complex)
    for b, amp in vec.items():
        for m in range(n):
            b1, s1 = _apply_annihilate(b, m)
            if b1 is None:
                continue
            for k in range(n):
                b2, s2 = _apply_create(b1, k)
                if b2 is None or b2 not in vec:
                    continue
                G[k, m] += np.conj(vec[b2]) * s1 * s2 * amp
    if check_gaussian and np.max(np.abs(G @ G - G)) > 1e-8:
        raise NotGaussian("cell state is not a Slater determinant")
    return CellGreen(state.nu, G, state.N)


def _phase_matrix(nu, q) -> np.ndarray:
    """``exp(i q . n)`` for cell sites n, shape (..., |nu|)."""
    sites = cell_sites(nu).astype(float)
    q = np.asarray(q, dtype=float)
    if q.ndim == 0:
        q = q.reshape(1)
    return np.exp(1j * np.tensordot(q, sites, axes=([-1], [1])))


def multiplet_correlation(g: CellGreen, p) -> np.ndarray:
    """Mode correlation matrix of the multiplet at reduced momentum ``p``.

    ``C[k, k'] = (1/|nu|) sum_{n,m} exp(-i(p+k).n) G[n,m] exp(i(p+k').m)``
    with k, k' in kshift order. ``p`` of shape (d,) gives one (|nu|, |nu|)
    matrix; shape (P, d) gives a stack of P matrices.
    """
    cfg = QuenchConfig(g.nu)
    p, shape = as_momenta(p, cfg.d)
    q = p[:, None, :] + kshifts(cfg)[None, :, :]  # (P, K, d)
    E = _phase_matrix(g.nu, q)  # (P, K, n) = exp(i q_k . n)
    C = np.einsum("pkn,nm,plm->pkl", E.conj(), g.G, E) / g.volume
    return C.reshape(shape + C.shape[1:])


def occupation(g: CellGreen, k) -> np.ndarray:
    """Occupation ``n(k) = <c~^dag_k c~_k>`` of the full-zone momentum ``k``."""
    k, shape = as_momenta(reduce_momentum(k), len(g.nu))
    E = _phase_matrix(g.nu, k)  # (P, n)
    n = np.einsum("pn,nm,pm->p", E.conj(), g.G, E).real / g.volume
    return n.reshape(shape)


def reduce_full_momentum(nu, k):
    """Split a full-zone momentum into (reduced p, kshift index)."""
    nu_arr = np.asarray(nu, dtype=float)
    k = reduce_momentum(np.atleast_1d(k))
    width = TWO_PI / nu_arr
    shift = np.floor(k / width).astype(int)
    p = k - shift * width
    return p, site_index(nu, shift)
