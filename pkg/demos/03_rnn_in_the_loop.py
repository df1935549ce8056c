"""Fly both transitions with the trained networks as estimators.

The networks run alongside the plant, driven by the previous step's
thrust and virtual control; their predicted accelerations, minus the
known input terms, stand in for ``h1`` and ``h2``. The tracking errors are
compared against the oracle run.

    python demos/03_rnn_in_the_loop.py [weights_dir]
"""

import math
import sys
from pathlib import Path

import numpy as np

from tailsitter import ScenarioConfig, h1, h2, run_transition


def main(weights_dir="."):
    weights = Path(weights_dir)
    pair = (str(weights / "weights_u.csv"), str(weights / "weights_w.csv"))
    if not all(Path(p).exists() for p in pair):
        sys.exit("run 02_train_estimators.py first (or pass its output directory)")
    for mode in ("hc", "ch"):
        rnn = run_transition(ScenarioConfig(mode=mode, rnn_weights=pair))
        oracle = run_transition(ScenarioConfig(mode=mode))
        true_h1 = np.array([h1((u, w), q) for u, w, q in zip(rnn["u"], rnn["w"], rnn["q"])])
        true_h2 = np.array([h2((u, w), q) for u, w, q in zip(rnn["u"], rnn["w"], rnn["q"])])
        late = rnn["t"] >= 15.0
        print(f"\n{mode}:")
        print(f"  mean |h1_hat - h1| = {np.mean(np.abs(rnn['h1_hat'] - true_h1)):.2e}, "
              f"mean |h2_hat - h2| = {np.mean(np.abs(rnn['h2_hat'] - true_h2)):.2e} m/s^2")
        for name, log in (("oracle", oracle), ("rnn", rnn)):
            print(f"  {name:6s} t>=15 s: max|e_u|={np.max(np.abs(log['e_u'][late])):.2e}  "
                  f"max|e_w|={np.max(np.abs(log['e_w'][late])):.2e}  "
                  f"max|e_theta|={math.degrees(np.max(np.abs(log['e_theta'][late]))):.2e} deg")


if __name__ == "__main__":
    main(*sys.argv[1:])
