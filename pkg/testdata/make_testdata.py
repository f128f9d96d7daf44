"""Regenerate the state files in this directory.

    python testdata/make_testdata.py
"""
from pathlib import Path

import numpy as np

from luequiv import apply_tuple, ghz_state, make_state, random_local_tuple, w_state
from luequiv.io import write_state

HERE = Path(__file__).resolve().parent
ALPHA, BETA = np.sqrt(0.3), np.sqrt(0.1)
GHZ_ROTATION_SEED = 2024


def qutrit_pair():
    dims = (3, 3, 3)
    psi = np.zeros(27, dtype=complex)
    for idx in [(0, 0, 1), (0, 1, 0), (1, 0, 0)]:
        psi[np.ravel_multi_index(idx, dims)] = ALPHA
    psi[np.ravel_multi_index((2, 2, 2), dims)] = BETA
    phi = np.zeros(27, dtype=complex)
    phi[np.ravel_multi_index((0, 0, 0), dims)] = np.sqrt(2) * ALPHA
    phi[np.ravel_multi_index((1, 1, 1), dims)] = ALPHA
    phi[np.ravel_multi_index((2, 2, 2), dims)] = BETA
    return make_state(dims, psi), make_state(dims, phi)


def main():
    psi, phi = qutrit_pair()
    write_state(psi, HERE / "psi.json", label="alpha W + beta |222>, alpha^2=0.3, beta^2=0.1")
    write_state(phi, HERE / "phi.json", label="sqrt2 alpha |000> + alpha |111> + beta |222>")
    ghz = ghz_state((2, 2, 2))
    write_state(ghz, HERE / "ghz.json", label="GHZ")
    rot = apply_tuple(ghz, random_local_tuple((2, 2, 2), GHZ_ROTATION_SEED))
    write_state(rot, HERE / "ghz_rotated.json", label=f"GHZ rotated, seed {GHZ_ROTATION_SEED}")
    write_state(w_state((2, 2, 2)), HERE / "w.json", label="W")


if __name__ == "__main__":
    main()
