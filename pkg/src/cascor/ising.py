"""Ising model representation, energy evaluation, gauges, and exhaustive oracles.

Energy convention: E(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j over spins
s_i in {+1, -1}, with +1 encoding boolean true.  Coefficients are kept as
Python numbers, so models with integer coefficients produce exact integer
energies.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .compiler import PenaltyLayout
    from .sat import Assignment

__all__ = [
    "IsingModel",
    "SpinState",
    "Gauge",
    "energy",
    "apply_gauge",
    "ungauge_sample",
    "enumerate_ground_states",
    "min_energy_over_ancillas",
]

SpinState = tuple[int, ...]
Gauge = tuple[int, ...]

ENUMERATION_QUBIT_LIMIT = 26
_CHUNK_BITS = 20  # enumerate in blocks of 2^20 states


@dataclass(frozen=True)
class IsingModel:
    """Linear fields h and symmetric pairwise couplings J over num_qubits spins.

    Both maps are sparse: absent entries are zero, stored entries are nonzero.
    Pair keys are canonical (i, j) with i < j.
    """

    num_qubits: int
    h: Mapping[int, float] = field(default_factory=dict)
    J: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.num_qubits < 0:
            raise ValueError("num_qubits must be >= 0")
        for q, v in self.h.items():
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"field on qubit {q} outside [0, {self.num_qubits})")
            if v == 0:
                raise ValueError(f"zero field stored for qubit {q}")
        for (i, j), v in self.J.items():
            if i == j:
                raise ValueError(f"self-coupling on qubit {i}")
            if not (0 <= i < j < self.num_qubits):
                raise ValueError(f"coupling key ({i}, {j}) not canonical/in range")
            if v == 0:
                raise ValueError(f"zero coupling stored for pair ({i}, {j})")

    @classmethod
    def from_terms(
        cls,
        num_qubits: int,
        h: Mapping[int, float],
        J: Mapping[tuple[int, int], float],
    ) -> "IsingModel":
        """Build a model, canonicalizing pair keys and dropping zero coefficients."""
        clean_h = {q: v for q, v in h.items() if v != 0}
        clean_j: dict[tuple[int, int], float] = {}
        for (i, j), v in J.items():
            if v == 0:
                continue
            key = (i, j) if i < j else (j, i)
            clean_j[key] = clean_j.get(key, 0) + v
            if clean_j[key] == 0:
                del clean_j[key]
        return cls(num_qubits, clean_h, clean_j)

    def is_integral(self) -> bool:
        return all(float(v).is_integer() for v in self.h.values()) and all(
            float(v).is_integer() for v in self.J.values()
        )

    def dense_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(h_vec, pair_i, pair_j, pair_val) with integer dtype when exact."""
        dtype = np.int64 if self.is_integral() else np.float64
        h_vec = np.zeros(self.num_qubits, dtype=dtype)
        for q, v in self.h.items():
            h_vec[q] = v
        pairs = sorted(self.J.items())
        pair_i = np.array([k[0] for k, _ in pairs], dtype=np.intp)
        pair_j = np.array([k[1] for k, _ in pairs], dtype=np.intp)
        pair_v = np.array([v for _, v in pairs], dtype=dtype)
        return h_vec, pair_i, pair_j, pair_v

    def coupling_matrix(self) -> np.ndarray:
        """Dense symmetric coupling matrix with zero diagonal (float64)."""
        mat = np.zeros((self.num_qubits, self.num_qubits), dtype=np.float64)
        for (i, j), v in self.J.items():
            mat[i, j] = v
            mat[j, i] = v
        return mat


def _check_spins(num_qubits: int, spins: SpinState, what: str = "spin state") -> None:
    if len(spins) != num_qubits:
        raise ValueError(f"{what} length {len(spins)} != num_qubits {num_qubits}")
    if any(s not in (-1, 1) for s in spins):
        raise ValueError(f"{what} entries must be +1 or -1")


def energy(model: IsingModel, spins: SpinState) -> float:
    """Exact energy of one spin state (integer result for integer models)."""
    _check_spins(model.num_qubits, spins)
    total = sum(v * spins[q] for q, v in model.h.items())
    total += sum(v * spins[i] * spins[j] for (i, j), v in model.J.items())
    return total


def energies_of_states(model: IsingModel, spins: np.ndarray) -> np.ndarray:
    """Vectorized energies for a (num_states, num_qubits) array of +/-1 spins."""
    h_vec, pi, pj, pv = model.dense_arrays()
    s = np.asarray(spins)
    e = s @ h_vec
    if len(pv):
        e = e + (s[:, pi] * s[:, pj]) @ pv
    return e


def apply_gauge(model: IsingModel, gauge: Gauge) -> IsingModel:
    """Spin-reversal transform: h_i -> g_i h_i, J_ij -> g_i g_j J_ij.

    The spectrum is preserved under the relabeling s -> g * s, so the gauged
    model has the same ground-state solutions up to that relabeling.
    """
    _check_spins(model.num_qubits, gauge, "gauge")
    h = {q: gauge[q] * v for q, v in model.h.items()}
    J = {(i, j): gauge[i] * gauge[j] * v for (i, j), v in model.J.items()}
    return IsingModel(model.num_qubits, h, J)


def ungauge_sample(spins: SpinState, gauge: Gauge) -> SpinState:
    """Map a sample of the gauged model back to the original frame (self-inverse)."""
    if len(spins) != len(gauge):
        raise ValueError(f"spin length {len(spins)} != gauge length {len(gauge)}")
    return tuple(s * g for s, g in zip(spins, gauge))


def _spins_for_indices(indices: np.ndarray, num_qubits: int) -> np.ndarray:
    # Bit q of the state index holds qubit q; bit 1 -> spin +1.
    bits = (indices[:, None] >> np.arange(num_qubits, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


def _side_energies(
    spins: np.ndarray, offset: int, model: IsingModel, dtype
) -> np.ndarray:
    """Energies of h and J terms that live entirely on qubits [offset, offset+w)."""
    w = spins.shape[1]
    e = np.zeros(len(spins), dtype=dtype)
    for q, v in model.h.items():
        if offset <= q < offset + w:
            e += dtype(v) * spins[:, q - offset]
    for (i, j), v in model.J.items():
        if offset <= i < offset + w and offset <= j < offset + w:
            e += dtype(v) * spins[:, i - offset] * spins[:, j - offset]
    return e


def enumerate_ground_states(
    model: IsingModel, limit: int = ENUMERATION_QUBIT_LIMIT
) -> tuple[float, set[SpinState]]:
    """Scan all 2^N states; return the exact minimum energy and every attaining state.

    Intended as a verification oracle, so it refuses models above ``limit``
    qubits rather than approximating.  The scan splits the qubits into a low
    and a high half so the cross terms become one matrix product per block;
    integer models are evaluated in float32, which is exact for the small
    coefficient sums involved (all intermediates stay far below 2**24).
    """
    n = model.num_qubits
    if n > limit:
        raise ValueError(f"{n} qubits exceeds enumeration limit {limit}")
    if n == 0:
        return 0, {()}

    dtype = np.float32 if model.is_integral() else np.float64
    lo_bits = min(n, _CHUNK_BITS // 2 + 3)  # low half; index bit q <-> qubit q
    hi_bits = n - lo_bits
    lo_spins = _spins_for_indices(np.arange(1 << lo_bits, dtype=np.int64), lo_bits)
    lo = lo_spins.astype(dtype)
    e_lo = _side_energies(lo, 0, model, dtype)

    if hi_bits == 0:
        energies = e_lo
        best = energies.min()
        attained = np.nonzero(energies == best)[0].astype(np.int64)
    else:
        hi_spins = _spins_for_indices(np.arange(1 << hi_bits, dtype=np.int64), hi_bits)
        hi = hi_spins.astype(dtype)
        e_hi = _side_energies(hi, lo_bits, model, dtype)
        cross = np.zeros((lo_bits, hi_bits), dtype=dtype)
        for (i, j), v in model.J.items():
            if i < lo_bits <= j:
                cross[i, j - lo_bits] = v
        lo_cross = lo @ cross  # (2^lo_bits, hi_bits)

        best = None
        attained_parts: list[np.ndarray] = []
        block = max(1, (1 << _CHUNK_BITS) >> lo_bits)
        for start in range(0, 1 << hi_bits, block):
            stop = min(start + block, 1 << hi_bits)
            grid = lo_cross @ hi[start:stop].T  # (2^lo_bits, stop-start)
            grid += e_lo[:, None]
            grid += e_hi[None, start:stop]
            block_min = grid.min()
            if best is None or block_min < best:
                best = block_min
                attained_parts = []
            if block_min == best:
                lo_idx, hi_idx = np.nonzero(grid == best)
                attained_parts.append(
                    lo_idx.astype(np.int64) | ((hi_idx + start).astype(np.int64) << lo_bits)
                )
        attained = np.concatenate(attained_parts)

    states = {tuple(row) for row in _spins_for_indices(attained, n).tolist()}
    min_energy = best.item()
    if model.is_integral():
        min_energy = int(min_energy)
    return min_energy, states


def min_energy_over_ancillas(
    model: IsingModel, layout: "PenaltyLayout", assignment: "Assignment"
) -> float:
    """Minimum model energy with variable qubits clamped to an assignment.

    Ancillas of different clauses never share a coupling, so each clause's
    ancilla block is minimized independently; the result equals
    layout.ground_bound exactly when the assignment satisfies the source CNF.
    """
    for var in layout.var_to_qubit:
        if var - 1 >= len(assignment):
            raise ValueError(f"assignment does not cover mapped variable {var}")

    spin_of: dict[int, int] = {
        q: (1 if assignment[var - 1] else -1) for var, q in layout.var_to_qubit.items()
    }
    clause_of_ancilla: dict[int, int] = {}
    for c, ancillas in enumerate(layout.clause_ancillas):
        for q in ancillas:
            clause_of_ancilla[q] = c

    # Split the Hamiltonian into a clamped part and per-clause ancilla blocks.
    fixed = 0.0
    lin: dict[int, dict[int, float]] = {}  # clause -> ancilla -> coefficient
    quad: dict[int, dict[tuple[int, int], float]] = {}
    for q, v in model.h.items():
        if q in spin_of:
            fixed += v * spin_of[q]
        else:
            c = clause_of_ancilla[q]
            lin.setdefault(c, {})[q] = lin.get(c, {}).get(q, 0) + v
    for (i, j), v in model.J.items():
        i_anc, j_anc = i in clause_of_ancilla, j in clause_of_ancilla
        if not i_anc and not j_anc:
            fixed += v * spin_of[i] * spin_of[j]
        elif i_anc and j_anc:
            ci, cj = clause_of_ancilla[i], clause_of_ancilla[j]
            if ci != cj:
                raise ValueError(f"coupling ({i}, {j}) spans clauses {ci} and {cj}")
            quad.setdefault(ci, {})[(i, j)] = v
        else:
            anc, other = (i, j) if i_anc else (j, i)
            c = clause_of_ancilla[anc]
            lin.setdefault(c, {})
            lin[c][anc] = lin[c].get(anc, 0) + v * spin_of[other]

    total = fixed
    for c, ancillas in enumerate(layout.clause_ancillas):
        if not ancillas:
            continue
        c_lin = lin.get(c, {})
        c_quad = quad.get(c, {})
        best = None
        for mask in range(1 << len(ancillas)):
            s = {q: (1 if (mask >> p) & 1 else -1) for p, q in enumerate(ancillas)}
            e = sum(v * s[q] for q, v in c_lin.items())
            e += sum(v * s[i] * s[j] for (i, j), v in c_quad.items())
            if best is None or e < best:
                best = e
        total += best
    return total
