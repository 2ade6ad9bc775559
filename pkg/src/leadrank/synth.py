"""Synthetic panels with known lead structure, for testing and benchmarks.

Each leader is a log-price random walk with i.i.d. normal increments.
Each follower repeats its leader's return series shifted by a fixed lag,
plus independent noise; the pre-lag head of a follower comes from the
leader's pre-history, so the shift relation holds on every period. With
zero noise the follower's returns equal the leader's shifted returns
exactly, and the lagged correlation at the true lag is 1.

Generation is deterministic per seed, using a counter-based generator
keyed by the single 64-bit seed with a fixed draw order.
"""

import datetime
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .panel import PricePanel

START_DATE = datetime.date(2011, 1, 3)
BASE_PRICE = 100.0


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic panel.

    ``lags`` gives each follower's lag behind its leader and is shared
    across leaders; ``length`` is the number of return periods, so the
    price panel spans length + 1 days. ``noise_sigma`` is the standard
    deviation of follower noise and ``leader_sigma`` that of leader
    return increments, both in return units.
    """

    n_leaders: int = 1
    followers_per_leader: int = 3
    lags: tuple[int, ...] = (1, 2, 3)
    noise_sigma: float = 0.0
    length: int = 500
    seed: int = 0
    leader_sigma: float = 0.02

    def __post_init__(self):
        object.__setattr__(self, "lags", tuple(int(h) for h in self.lags))
        if self.n_leaders < 1:
            raise ValidationError(f"n_leaders must be >= 1, got {self.n_leaders}")
        if self.followers_per_leader < 0:
            raise ValidationError(
                f"followers_per_leader must be >= 0, got {self.followers_per_leader}"
            )
        if len(self.lags) != self.followers_per_leader:
            raise ValidationError(
                f"need one lag per follower: {len(self.lags)} lags for "
                f"{self.followers_per_leader} followers"
            )
        if any(h < 1 for h in self.lags):
            raise ValidationError(f"lags must be >= 1, got {self.lags}")
        max_lag = max(self.lags, default=0)
        if self.length <= max_lag + 10:
            raise ValidationError(
                f"length must exceed max lag + 10 = {max_lag + 10}, got {self.length}"
            )
        if self.noise_sigma < 0.0:
            raise ValidationError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.leader_sigma <= 0.0:
            raise ValidationError(f"leader_sigma must be > 0, got {self.leader_sigma}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValidationError(f"seed must fit in 64 bits, got {self.seed}")

    def to_dict(self) -> dict:
        return {
            "n_leaders": self.n_leaders,
            "followers_per_leader": self.followers_per_leader,
            "lags": list(self.lags),
            "noise_sigma": self.noise_sigma,
            "length": self.length,
            "seed": self.seed,
            "leader_sigma": self.leader_sigma,
        }


def generate_synthetic(spec: SynthSpec) -> tuple[PricePanel, dict]:
    """Build the panel and return it with its ground-truth labeling.

    The truth dict lists the leader tickers and, per follower, its
    leader and lag. Prices start at 100.0 and compound the generated
    returns; dates are consecutive ISO days.
    """
    rng = np.random.Generator(np.random.Philox(key=int(spec.seed)))
    head = max(spec.lags, default=0)
    T = spec.length
    returns: dict[str, np.ndarray] = {}
    truth: dict = {"leaders": [], "followers": {}, "spec": spec.to_dict()}
    for li in range(1, spec.n_leaders + 1):
        leader = f"L{li}"
        # pre-history of length `head` feeds the followers' early periods
        increments = rng.normal(0.0, spec.leader_sigma, size=T + head)
        returns[leader] = increments[head:]
        truth["leaders"].append(leader)
        for fi, lag in enumerate(spec.lags, start=1):
            follower = f"L{li}F{fi}"
            shifted = increments[head - lag: head - lag + T]
            noise = rng.normal(0.0, spec.noise_sigma, size=T) if spec.noise_sigma > 0.0 else 0.0
            returns[follower] = shifted + noise
            truth["followers"][follower] = {"leader": leader, "lag": lag}
    tickers = tuple(sorted(returns))
    dates = tuple(
        (START_DATE + datetime.timedelta(days=i)).isoformat() for i in range(T + 1)
    )
    prices = np.empty((len(tickers), T + 1))
    for i, t in enumerate(tickers):
        prices[i, 0] = BASE_PRICE
        prices[i, 1:] = BASE_PRICE * np.exp(np.cumsum(returns[t]))
    panel = PricePanel(tickers=tickers, dates=dates, prices=prices)
    return panel, truth
