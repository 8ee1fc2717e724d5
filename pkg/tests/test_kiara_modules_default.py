#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for `kiara_plugin.beamsynth` package."""

import pytest  # noqa

import kiara_plugin.beamsynth


def test_assert():

    assert kiara_plugin.beamsynth.get_version() is not None


def test_synthesis_methods_registered():

    from kiara_plugin.beamsynth.utils.synthesis import (
        SYNTHESIS_METHODS,
        available_synthesis_methods,
    )

    assert sorted(SYNTHESIS_METHODS) == available_synthesis_methods()


def test_unknown_method():

    from kiara_plugin.beamsynth.exceptions import ConfigurationError
    from kiara_plugin.beamsynth.utils.synthesis import get_synthesis_method_cls

    with pytest.raises(ConfigurationError):
        get_synthesis_method_cls("least-squares")
