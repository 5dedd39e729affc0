import logging

from pseur.models.archs import define_reconstructor
from .base_model import BaseBeamformer

logger = logging.getLogger('pseur')


class MVDRBeamformer(BaseBeamformer):
    """MVDR beamformer built on a pluggable IPN covariance estimator.

    Args:
        opt (dict): Config. It contains the following keys:
            name (str): Method tag.
            reconstructor (dict): Reconstructor options with its ``type``.
            metrics (dict, optional): Metric options, each with a ``type``
                naming a ``pseur.metrics`` function.
    """

    def __init__(self, opt):
        super(MVDRBeamformer, self).__init__(opt)
        self.reconstructor = define_reconstructor(opt['reconstructor'])
        logger.debug(f'[{self.name}] {self.reconstructor!r}')

    def test(self):
        self.output = self.reconstructor.weights(self.batch)
