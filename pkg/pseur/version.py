# GENERATED VERSION FILE
__version__ = '0.1.0'
short_version = '0.1.0'
version_info = (0, 1, 0)
