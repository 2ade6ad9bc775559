import numpy as np
import pytest

from leadrank import ReturnPanel


@pytest.fixture
def rng():
    return np.random.default_rng(20110103)


def make_noise_panel(n_tickers: int, n_periods: int, seed: int) -> ReturnPanel:
    """Mutually independent white-noise return rows, no missing cells."""
    gen = np.random.default_rng(seed)
    return ReturnPanel(
        tickers=tuple(f"s{i}" for i in range(n_tickers)),
        periods=tuple(str(j) for j in range(n_periods)),
        returns=gen.normal(0.0, 0.02, size=(n_tickers, n_periods)),
    )


def make_chain_panel(n_periods: int = 400, seed: int = 5, noise: float = 0.0) -> ReturnPanel:
    """Three rows where s1 lags s0 by 1 and s2 lags s1 by 1."""
    gen = np.random.default_rng(seed)
    base = gen.normal(0.0, 0.02, size=n_periods + 2)
    rows = np.stack([base[2:], base[1:-1], base[:-2]])
    if noise > 0.0:
        rows = rows + gen.normal(0.0, noise, size=rows.shape)
    return ReturnPanel(
        tickers=("s0", "s1", "s2"),
        periods=tuple(str(j) for j in range(n_periods)),
        returns=rows,
    )
