"""Parameter sets behind the published figures and KS table.

Caption values (K, delta, the listed m or K series) are fixed; the SNR and
x grids are chosen to cover the plotted axes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# (m, K, delta) rows of the KS validation table, average SNR 1
TABLE1 = (
    (5.5, 15.0, 0.4),
    (8.5, 5.0, 0.35),
    (9.2, 3.0, 1.0),
    (10.0, 10.0, 0.5),
    (15.0, 20.0, 0.2),
    (20.0, 5.0, 0.43),
)


@dataclass(frozen=True)
class FigurePreset:
    """One figure: a family of curves over a common axis.

    ``curves`` lists the (m, K, delta) of each curve; for snr-axis figures
    ``axis`` holds average SNR in dB, for the PDF figure it holds x at
    ``avg_snr``.
    """

    name: str
    metric: str
    curves: tuple
    axis: tuple
    axis_name: str
    avg_snr: float = 1.0
    asymptote: bool = False
    modulation: str = "bpsk"


def _grid(start, stop, step):
    return tuple(float(v) for v in np.arange(start, stop + step / 2, step))


FIGURES = {
    "1": FigurePreset("1", "pdf", ((1.5, 15.0, 0.5), (2.0, 15.0, 0.5)),
                      tuple(float(v) for v in np.round(np.linspace(0.0, 5.0, 101), 10)), "x"),
    "2": FigurePreset("2", "capacity", ((0.3, 10.0, 0.5), (10.3, 10.0, 0.5)),
                      _grid(-10, 30, 5), "avg_snr_db"),
    "3a": FigurePreset("3a", "capacity", ((25.5, 1.0, 0.9), (25.5, 10.0, 0.9)),
                       _grid(-10, 30, 5), "avg_snr_db"),
    "3b": FigurePreset("3b", "capacity", ((25.5, 1.0, 1.0), (25.5, 10.0, 1.0)),
                       _grid(-10, 30, 5), "avg_snr_db"),
    # the caption does not list m; a heavy-to-light spread is used
    "4": FigurePreset("4", "ber_exact", ((0.5, 30.0, 0.45), (1.5, 30.0, 0.45), (5.5, 30.0, 0.45), (10.5, 30.0, 0.45)),
                      _grid(0, 40, 5), "avg_snr_db", asymptote=True),
    "5": FigurePreset("5", "ber_exact", ((10.5, 10.0, 0.35), (10.5, 25.0, 0.35)),
                      _grid(0, 40, 5), "avg_snr_db", asymptote=True),
}


def figure(name: str) -> FigurePreset:
    try:
        return FIGURES[str(name)]
    except KeyError:
        raise KeyError(f"unknown figure {name!r}; choose from {sorted(FIGURES)}") from None
