from setuptools import setup

__version__ = "0.0.0"

setup(version=__version__)
