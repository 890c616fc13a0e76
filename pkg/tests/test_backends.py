import numpy as np
import pytest

from stigmasim import SimConfig, run_sim
from stigmasim.backend import available_backends, get_kernel

CONFIGS = [
    SimConfig(grid_width=20, grid_height=20, n_per_group=40, n_cops=4,
              max_ticks=150, seed=13),
    # partial arrest probability exercises the combined-draw path
    SimConfig(grid_width=24, grid_height=16, n_per_group=60, n_cops=5,
              arrest_rate=0.7, stigma_follow=0.6, crime_rate=0.05,
              max_ticks=150, seed=14),
    SimConfig(grid_width=20, grid_height=20, n_per_group=40, n_cops=4,
              cop_rule="sequential", max_ticks=150, seed=15),
]


def test_numpy_backend_always_available():
    assert "numpy" in available_backends()


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        get_kernel("fortran")


@pytest.mark.skipif("numba" not in available_backends(),
                    reason="numba not installed")
@pytest.mark.parametrize("cfg", CONFIGS)
def test_backends_bit_identical(cfg):
    """The jit kernel is a statement-for-statement mirror of the numpy one;
    logs, stigma, and positions must match exactly, not approximately."""
    log_np, state_np = run_sim(cfg, backend="numpy")
    log_nb, state_nb = run_sim(cfg, backend="numba")
    assert np.array_equal(log_np.array, log_nb.array)
    assert np.array_equal(state_np.stigma, state_nb.stigma)
    assert np.array_equal(state_np.civ_x, state_nb.civ_x)
    assert np.array_equal(state_np.civ_y, state_nb.civ_y)
    assert np.array_equal(state_np.cop_x, state_nb.cop_x)
    assert np.array_equal(state_np.cop_y, state_nb.cop_y)


def test_env_flag_selects_backend(monkeypatch):
    monkeypatch.setenv("STIGMASIM_BACKEND", "numpy")
    kernel = get_kernel()
    from stigmasim import _kernels_numpy
    assert kernel is _kernels_numpy.run_chunk
    monkeypatch.setenv("STIGMASIM_BACKEND", "nope")
    with pytest.raises(ValueError):
        get_kernel()
