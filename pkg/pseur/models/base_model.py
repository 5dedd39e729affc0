# ------------------------------------------------------------------------
# Modified from BasicSR (https://github.com/xinntao/BasicSR)
# Copyright 2018-2020 BasicSR Authors
# ------------------------------------------------------------------------
import importlib
import logging
from collections import OrderedDict
from copy import deepcopy
from scipy import linalg

from pseur.ops import NumericalError

logger = logging.getLogger('pseur')
metric_module = importlib.import_module('pseur.metrics')

# failures of a single trial; anything else aborts the run
TRIAL_ERRORS = (NumericalError, ValueError, linalg.LinAlgError)


class BaseBeamformer():
    """Base beamformer model."""

    def __init__(self, opt):
        self.opt = opt
        self.name = opt.get('name', self.__class__.__name__)
        self.batch = None
        self.output = None

    def feed_data(self, batch):
        self.batch = batch
        self.output = None

    def test(self):
        pass

    def get_current_weights(self):
        return self.output

    def calculate_metrics(self):
        """Evaluate the configured metrics on the current weights.

        Returns:
            OrderedDict: Metric name -> value.
        """
        results = OrderedDict()
        for name, opt_ in deepcopy(self.opt.get('metrics', {})).items():
            metric_type = opt_.pop('type')
            results[name] = getattr(metric_module,
                                    metric_type)(self.output, self.batch,
                                                 **opt_)
        return results

    def evaluate(self, batch):
        """Weights and metrics of one trial.

        Returns:
            OrderedDict | None: Metric values, None when the trial failed.
        """
        self.feed_data(batch)
        try:
            self.test()
            return self.calculate_metrics()
        except TRIAL_ERRORS as err:
            logger.warning(f'[{self.name}] trial failed: {err}')
            return None
