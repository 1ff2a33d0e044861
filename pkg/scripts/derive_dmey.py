"""Project the published discrete Meyer table onto the orthonormal filters.

Prints a Python literal for ``DMEY_ORTHO``; paste it into
``src/creephar/_tables.py``.
"""
import numpy as np

from creephar._tables import DMEY_TABLE


def constraints(h):
    n = len(h)
    rows, vals = [], []
    for m in range(n // 2):
        vals.append(h[: n - 2 * m] @ h[2 * m:] - (1.0 if m == 0 else 0.0))
        g = np.zeros(n)
        g[: n - 2 * m] += h[2 * m:]
        g[2 * m:] += h[: n - 2 * m]
        rows.append(g)
    alt = (-1.0) ** np.arange(n)
    vals.append(alt @ h)
    rows.append(alt)
    return np.array(vals), np.array(rows)


def project(h0, iters=8):
    # minimum-norm Newton steps; the tiny edge taps make the last few
    # constraints ill-conditioned, so stop once the residual stalls
    h = np.array(h0, dtype=float)
    for _ in range(iters):
        c, J = constraints(h)
        h = h - J.T @ np.linalg.lstsq(J @ J.T, c, rcond=None)[0]
    return h


if __name__ == "__main__":
    h = project(DMEY_TABLE)
    c, _ = constraints(h)
    print(f"# max constraint residual {np.abs(c).max():.3e}, "
          f"max change {np.abs(h - np.array(DMEY_TABLE)).max():.3e}")
    print("DMEY_ORTHO = (")
    for i in range(0, len(h), 3):
        print("    " + ", ".join(repr(float(v)) for v in h[i:i + 3]) + ",")
    print(")")
