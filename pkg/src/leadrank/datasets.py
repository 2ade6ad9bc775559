"""Bundled reference data: 21 A-share coal-sector stocks, 2011.

Twenty-one coal-industry stocks with their reported firm covariates
(amounts in 10^4 CNY), the reference lead scores computed on that year's
daily log returns, and the reference four-layer stratification. The raw
price data behind the scores is not redistributable, so the scores and
layers ship as fixed tables; they are the standing validation target for
the regression stage.

Source-table quirks are preserved verbatim: one firm's reported revenue
is implausibly small next to its peers, one reports total profit below
net profit, and the smallest firm's amounts sit orders of magnitude
under the rest. Ticker spellings are canonicalized to one form where the
source tables disagree.
"""

from .panel import FirmRecord
from .rank import LayerAssignment, ScoreVector

# ticker -> (total_assets, revenue, net_profit, total_profit), 10^4 CNY
_FIRM_TABLE = (
    ("中国神华", 33926800.0, 1520630.0, 3718700.0, 5330400.0),
    ("冀中能源", 2522857.0, 3028916.0, 239616.0, 332108.0),
    ("平煤股份", 1842066.0, 2290456.0, 184991.0, 236509.0),
    ("西山煤电", 2895275.0, 169435.0, 264437.0, 383696.0),
    ("中煤能源", 12081508.0, 7126842.0, 690898.0, 1022161.0),
    ("开滦股份", 1605333.0, 1515407.0, 86885.0, 114392.0),
    ("潞安环能", 2936369.0, 2142768.0, 343673.0, 412881.0),
    ("阳泉煤业", 2225847.0, 2794063.0, 241246.0, 332102.0),
    ("大同煤业", 1696706.0, 1045381.0, 128700.0, 281800.0),
    ("兖州煤业", 7282854.0, 2484439.0, 900862.0, 1211383.0),
    ("山煤国际", 2165550.0, 3864418.0, 75577.0, 196320.0),
    ("露天煤业", 746356.0, 567233.0, 145559.0, 180056.0),
    ("神火股份", 2466769.0, 1690263.0, 115884.0, 152147.0),
    ("恒源煤电", 1181217.0, 699025.0, 95107.0, 12733.0),
    ("昊华能源", 883794.0, 404717.0, 87256.0, 117460.0),
    ("安源股份", 222757.0, 119907.0, 4244.0, 9940.0),
    ("兰花科创", 1356165.0, 581157.0, 131423.0, 171423.0),
    ("盘江股份", 829375.0, 546924.0, 134522.0, 159216.0),
    ("国投新集", 1945922.0, 700853.0, 125109.0, 171421.0),
    ("平庄能源", 519028.0, 322624.0, 64775.0, 76074.0),
    ("大有能源", 36022.0, 24296.0, 509.0, 2109.0),
)

_SCORE_TABLE = (
    ("中国神华", 1.6637),
    ("冀中能源", 1.3142),
    ("平煤股份", 0.754),
    ("西山煤电", 1.2397),
    ("中煤能源", 2.0636),
    ("开滦股份", 1.2397),
    ("潞安环能", 1.0342),
    ("阳泉煤业", 0.6651),
    ("大同煤业", 0.8353),
    ("兖州煤业", 1.6961),
    ("山煤国际", 0.9742),
    ("露天煤业", 0.9321),
    ("神火股份", 1.6541),
    ("恒源煤电", 0.4401),
    ("昊华能源", 1.0396),
    ("安源股份", 0.4178),
    ("兰花科创", 0.4062),
    ("盘江股份", 0.356),
    ("国投新集", 0.8299),
    ("平庄能源", 1.4444),
    ("大有能源", 0.3252),
)

_LAYER_TABLE = (
    ("中国神华", "中煤能源", "兖州煤业", "冀中能源"),
    ("平煤股份", "神火股份", "国投新集", "西山煤电", "大同煤业",
     "开滦股份", "山煤国际", "潞安环能", "露天煤业", "昊华能源"),
    ("阳泉煤业", "兰花科创", "恒源煤电", "平庄能源"),
    ("大有能源", "盘江股份", "安源股份"),
)

COAL_TICKERS = tuple(row[0] for row in _FIRM_TABLE)


def load_coal_firms() -> list[FirmRecord]:
    """The 21 firm covariate records, table order preserved."""
    return [FirmRecord(*row) for row in _FIRM_TABLE]


def load_coal_scores() -> ScoreVector:
    """Reference lead scores for the 21 stocks (damping 0.85)."""
    return ScoreVector(
        labels=tuple(t for t, _ in _SCORE_TABLE),
        scores=[s for _, s in _SCORE_TABLE],
        alpha=None,
        method="reference",
    )


def load_coal_layers() -> LayerAssignment:
    """Reference four-layer stratification of the 21 stocks."""
    return LayerAssignment(layers=_LAYER_TABLE, snapshots=(),
                           params={"source": "reference"})
