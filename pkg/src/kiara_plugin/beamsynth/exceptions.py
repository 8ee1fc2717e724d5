# -*- coding: utf-8 -*-

"""Exceptions raised by the ``kiara_plugin.beamsynth`` package.

All of them derive from [KiaraException][kiara.exceptions.KiaraException], so they surface nicely inside *kiara*
jobs. The ``exit_code`` class attribute is what the ``beamsynth`` command-line interface returns when one of them
escapes a command: ``2`` for problems with what the caller asked for, ``1`` for numeric or data failures.
"""

from kiara.exceptions import KiaraException


class BeamsynthException(KiaraException):

    exit_code: int = 1


class DimensionError(BeamsynthException):
    """Vector or matrix sizes don't line up (e.g. excitation vs. geometry)."""

    exit_code = 2


class InvalidArgumentError(BeamsynthException):

    exit_code = 2


class ResolutionError(BeamsynthException):
    """The angle grid is too coarse to resolve a pattern feature."""

    exit_code = 1


class UnsupportedConfigurationError(BeamsynthException):

    exit_code = 2


class ConfigurationError(BeamsynthException):

    exit_code = 2


class DataIntegrityError(BeamsynthException):
    """A bundled table or an input file failed a checksum or invariant check."""

    exit_code = 1


class OutOfDomainError(BeamsynthException):
    """A steering request falls outside the range a network was trained on."""

    exit_code = 2


class NumericalError(BeamsynthException):

    exit_code = 1
