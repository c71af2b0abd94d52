"""
FTR fading curves
=================

Capacity and BER along the preset figure axes, with the high-SNR
asymptote next to the exact BER.
"""

import numpy as np

from ftrfading import BPSK, FtrParams, ber_asymptotic, ber_exact, build_coefficients, capacity, ftr_pdf
from ftrfading.cli import CLI_CONTROL
from ftrfading.presets import figure

# the CLI series control converges every preset fully
ctl = CLI_CONTROL

# PDF at unit average SNR: m = 1.5 against m = 2
fig1 = figure("1")
x = np.array(fig1.axis)
for m, K, delta in fig1.curves:
    table = build_coefficients(FtrParams(m, K, delta, fig1.avg_snr), ctl)
    pdf = ftr_pdf(x, table)
    print(f"m={m:<4} K={K:<4} delta={delta}: peak f={pdf.max():.4f} at x={x[pdf.argmax()]:.2f}, {len(table)} terms")

# ergodic capacity, bits/s/Hz
for name in ("2", "3a", "3b"):
    fig = figure(name)
    print(f"\ncapacity, figure {name}")
    print("snr_db " + " ".join(f"{str(c):>18}" for c in fig.curves))
    for db in fig.axis:
        row = [capacity(build_coefficients(FtrParams.from_db(*c, db), ctl)).value for c in fig.curves]
        print(f"{db:6.0f} " + " ".join(f"{v:18.6f}" for v in row))

# BPSK BER with its asymptote
fig4 = figure("4")
print("\nBPSK BER, figure 4 (exact / asymptote)")
for db in fig4.axis[::2]:
    cells = []
    for c in fig4.curves:
        p = FtrParams.from_db(*c, db)
        cells.append(f"{ber_exact(build_coefficients(p, ctl), BPSK).value:.3e}/{ber_asymptotic(p, BPSK):.3e}")
    print(f"{db:6.0f} " + "  ".join(cells))
