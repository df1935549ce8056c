import time

import numpy as np
import pytest

from tailsitter import VehicleParams
from tailsitter.training import ExcitationConfig, collect_dataset, mse, network_for, predict, train_offline

# training run and held-out run of the estimator networks
TRAIN_SEED = 0
HELDOUT_SEED = 1000

_CRITERIA = {}


def record_criterion(number, passed, detail):
    _CRITERIA[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")


class TrainedChannel:
    def __init__(self, channel, vp):
        self.channel = channel
        self.data = collect_dataset(ExcitationConfig(channel=channel, seed=TRAIN_SEED), vp)
        start = time.perf_counter()
        self.net, self.report = train_offline(self.data, network_for(self.data, vp, seed=TRAIN_SEED))
        self.seconds = time.perf_counter() - start
        self.heldout = collect_dataset(ExcitationConfig(channel=channel, seed=HELDOUT_SEED), vp)
        self.heldout_mse = mse(self.heldout.output, predict(self.net, self.heldout))
        self.heldout_ratio = self.heldout_mse / float(np.var(self.heldout.output))


@pytest.fixture(scope="session")
def trained():
    """Both estimator networks trained with the default pipeline."""
    vp = VehicleParams()
    return {ch: TrainedChannel(ch, vp) for ch in ("u", "w")}


@pytest.fixture(scope="session")
def trained_networks(trained):
    return trained["u"].net, trained["w"].net
