#!/usr/bin/env python

from setuptools import find_packages, setup

import os

version_file = 'pseur/version.py'


def readme():
    with open('readme.md', encoding='utf-8') as f:
        content = f.read()
    return content


def write_version_py():
    content = """# GENERATED VERSION FILE
__version__ = '{}'
short_version = '{}'
version_info = ({})
"""
    with open('VERSION', 'r') as f:
        short_version = f.read().strip()
    version_info = ', '.join(short_version.split('.'))
    with open(version_file, 'w') as f:
        f.write(content.format(short_version, short_version, version_info))
    return short_version


def get_requirements(filename='requirements.txt'):
    here = os.path.dirname(os.path.realpath(__file__))
    with open(os.path.join(here, filename), 'r') as f:
        requires = [
            line.strip() for line in f.readlines()
            if line.strip() and line.strip() != 'yapf'
        ]
    return requires


if __name__ == '__main__':
    version = write_version_py()
    setup(
        name='pseur',
        version=version,
        description='Robust adaptive beamforming by interference-plus-noise '
        'covariance reconstruction',
        long_description=readme(),
        long_description_content_type='text/markdown',
        keywords='array signal processing, adaptive beamforming, MVDR, MUSIC',
        packages=find_packages(
            exclude=('options', 'tests', 'results', 'examples')),
        classifiers=[
            'Development Status :: 4 - Beta',
            'License :: OSI Approved :: Apache Software License',
            'Operating System :: OS Independent',
            'Programming Language :: Python :: 3',
            'Programming Language :: Python :: 3.8',
            'Programming Language :: Python :: 3.9',
        ],
        license='Apache License 2.0',
        python_requires='>=3.8',
        install_requires=get_requirements(),
        extras_require={'tests': ['pytest']},
        entry_points={'console_scripts': ['pseur = pseur.cli:main']},
        zip_safe=False)
