import json
from pathlib import Path

import pytest

from ftrfading import metrics
from ftrfading.presets import FIGURES, TABLE1, figure

CAPTIONS = json.loads((Path(__file__).parent / "data" / "figure_captions.json").read_text())


def test_table1_rows():
    assert [list(r) for r in TABLE1] == CAPTIONS["table1"]


@pytest.mark.parametrize("name", ["1", "2", "3a", "3b", "4", "5"])
def test_figure_matches_caption(name):
    fig, cap = figure(name), CAPTIONS[name]
    assert fig.metric == cap["metric"]
    for i, key in enumerate(("m", "K", "delta")):
        values = sorted({c[i] for c in fig.curves})
        if key not in cap:
            continue
        expected = cap[key] if isinstance(cap[key], list) else [cap[key]]
        assert values == pytest.approx(sorted(expected))
    if "modulation" in cap:
        assert fig.modulation == cap["modulation"]
        assert metrics.modulation(fig.modulation) is metrics.BPSK
    if "avg_snr" in cap:
        assert fig.avg_snr == cap["avg_snr"]


def test_ber_figures_carry_asymptote():
    assert {n for n, f in FIGURES.items() if f.asymptote} == {"4", "5"}


def test_axes():
    assert figure("1").axis[0] == 0.0 and figure("1").axis[-1] == 5.0
    assert figure("2").axis == tuple(float(v) for v in range(-10, 35, 5))
    assert figure("4").axis == tuple(float(v) for v in range(0, 45, 5))


def test_unknown_figure():
    with pytest.raises(KeyError):
        figure("6")
