# ------------------------------------------------------------------------
# Modified from BasicSR (https://github.com/xinntao/BasicSR)
# Copyright 2018-2020 BasicSR Authors
# ------------------------------------------------------------------------
import datetime
import logging
import time


class MessageLogger():
    """Message logger for sweep progress.

    Args:
        opt (dict): Config. It contains the following keys:
            name (str): Exp name.
            sweep (dict): Contains 'values' (list) for the sweep points.
        start_point (int): Index of the first sweep point. Default: 0.
    """

    def __init__(self, opt, start_point=0):
        self.exp_name = opt['name']
        self.num_points = len(opt['sweep']['values'])
        self.axis = opt['sweep']['axis']
        self.start_point = start_point
        self.start_time = time.time()
        self.logger = get_root_logger()

    def __call__(self, log_vars):
        """Format logging message.

        Args:
            log_vars (dict): It contains the following keys:
                point (int): Index of the current sweep point.
                value (float): Sweep value.
                rows (list[ResultRow]): Aggregated rows of this point.
        """
        point = log_vars.pop('point')
        value = log_vars.pop('value')
        rows = log_vars.pop('rows')

        message = (f'[{self.exp_name[:5]}..][{self.axis}: {value:g}, '
                   f'point:{point + 1:3d}/{self.num_points}] ')

        total_time = time.time() - self.start_time
        time_sec_avg = total_time / (point - self.start_point + 1)
        eta_sec = time_sec_avg * (self.num_points - point - 1)
        eta_str = str(datetime.timedelta(seconds=int(eta_sec)))
        message += f'[eta: {eta_str}, time: {total_time:.1f}s] '

        for row in rows:
            message += (f'{row.method}: {row.mean_sinr_db:.3f} dB '
                        f'(dev {row.mean_dev_db:.3f}) ')
            if row.failures:
                message += f'[{row.failures} failed] '
        self.logger.info(message.rstrip())


def get_root_logger(logger_name='pseur',
                    log_level=logging.INFO,
                    log_file=None):
    """Get the root logger.

    The logger will be initialized if it has not been initialized. By default a
    StreamHandler will be added. If `log_file` is specified, a FileHandler will
    also be added.

    Args:
        logger_name (str): root logger name. Default: 'pseur'.
        log_file (str | None): The log filename. If specified, a FileHandler
            will be added to the root logger.
        log_level (int): The root logger level.

    Returns:
        logging.Logger: The root logger.
    """
    logger = logging.getLogger(logger_name)
    # if the logger has been initialized, just return it
    if logger.hasHandlers() and (log_file is None or any(
            isinstance(h, logging.FileHandler) for h in logger.handlers)):
        return logger

    format_str = '%(asctime)s %(levelname)s: %(message)s'
    logging.basicConfig(format=format_str, level=log_level)
    logger.setLevel(log_level)
    if log_file is not None:
        file_handler = logging.FileHandler(log_file, 'w')
        file_handler.setFormatter(logging.Formatter(format_str))
        file_handler.setLevel(log_level)
        logger.addHandler(file_handler)

    return logger


def get_env_info():
    """Get environment information.

    Currently, only log the software version.
    """
    import numpy
    import scipy

    from pseur.version import __version__
    msg = r"""
      ____  ____  _____ _   _ ____
     |  _ \/ ___|| ____| | | |  _ \
     | |_) \___ \|  _| | | | | |_) |
     |  __/ ___) | |___| |_| |  _ <
     |_|   |____/|_____|\___/|_| \_\
    """
    msg += ('\nVersion Information: '
            f'\n\tpseur: {__version__}'
            f'\n\tNumPy: {numpy.__version__}'
            f'\n\tSciPy: {scipy.__version__}')
    return msg
