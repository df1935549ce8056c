"""Collect excitation data and train the two estimator networks.

Each channel plant is driven open-loop by random held inputs (thrust for
``u``, the virtual control for ``w``); a small recurrent network learns to
reproduce the velocity. The script reports the training curve endpoints,
the error on a run the network has not seen, and saves the weights used
by ``03_rnn_in_the_loop.py``.

    python demos/02_train_estimators.py [out_dir]
"""

import sys
from pathlib import Path

import numpy as np

from tailsitter import VehicleParams, save_weights
from tailsitter.training import ExcitationConfig, collect_dataset, mse, network_for, predict, train_offline


def main(out_dir="."):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    vp = VehicleParams()
    for channel in ("u", "w"):
        data = collect_dataset(ExcitationConfig(channel=channel, seed=0), vp)
        net, report = train_offline(data, network_for(data, vp))
        first, last = report.epoch_mse[0][1], report.final_mse
        print(f"channel {channel}: {len(data)} samples, velocity range "
              f"[{data.output.min():.2f}, {data.output.max():.2f}] m/s")
        print(f"  MSE epoch 1 {first:.4g} -> best {last:.4g} (lr {report.learning_rate:g})")
        for seed in (1000, 1001, 1002):
            held = collect_dataset(ExcitationConfig(channel=channel, seed=seed), vp)
            ratio = mse(held.output, predict(net, held)) / np.var(held.output)
            print(f"  held-out run seed {seed}: MSE = {100 * ratio:.2f}% of output variance")
        save_weights(net, out / f"weights_{channel}.csv")
        report.to_csv(out / f"report_{channel}.csv")
        data.to_csv(out / f"data_{channel}.csv")
    print(f"\nweights, reports and datasets written to {out.resolve()}")


if __name__ == "__main__":
    main(*sys.argv[1:])
