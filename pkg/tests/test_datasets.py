from leadrank import datasets


def test_firm_table_has_21_rows():
    firms = datasets.load_coal_firms()
    assert len(firms) == 21
    assert [f.ticker for f in firms] == list(datasets.COAL_TICKERS)


def test_score_table_aligns_with_firms():
    scores = datasets.load_coal_scores()
    assert len(scores.labels) == 21
    assert set(scores.labels) == set(datasets.COAL_TICKERS)
    assert scores.as_dict()["中煤能源"] == 2.0636
    assert scores.as_dict()["大有能源"] == 0.3252


def test_layer_table_partitions_the_set():
    layers = datasets.load_coal_layers()
    assert layers.n_layers == 4
    assert sorted(layers.tickers()) == sorted(datasets.COAL_TICKERS)
    assert set(layers.layers[0]) == {"中国神华", "中煤能源", "兖州煤业", "冀中能源"}
    assert [len(layer) for layer in layers.layers] == [4, 10, 4, 3]
