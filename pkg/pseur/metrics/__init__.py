from .beampattern import Beampattern, beampattern, notch_prediction
from .sinr import calculate_deviation, calculate_optimal_sinr, calculate_sinr

__all__ = [
    'calculate_sinr', 'calculate_optimal_sinr', 'calculate_deviation',
    'Beampattern', 'beampattern', 'notch_prediction'
]
