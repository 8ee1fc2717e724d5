# -*- coding: utf-8 -*-

"""Top-level package for kiara_plugin.beamsynth."""


import os

from kiara.utils.class_loading import (
    KiaraEntryPointItem,
    find_kiara_model_classes_under,
    find_kiara_modules_under,
)

__author__ = """Markus Binsteiner"""
__email__ = "markus@frkl.io"


KIARA_METADATA = {
    "authors": [{"name": __author__, "email": __email__}],
    "description": "Kiara modules for: phased-array pattern synthesis",
    "references": {
        "source_repo": {
            "desc": "The module package git repository.",
            "url": "https://github.com/DHARPA-Project/kiara_plugin.beamsynth",
        },
        "documentation": {
            "desc": "The url for the module package documentation.",
            "url": "https://DHARPA-Project.github.io/kiara_plugin.beamsynth/",
        },
    },
    "tags": ["beamsynth", "antenna", "beamforming"],
    "labels": {"package": "kiara_plugin.beamsynth"},
}

find_modules: KiaraEntryPointItem = (
    find_kiara_modules_under,
    "kiara_plugin.beamsynth.modules",
)
find_model_classes: KiaraEntryPointItem = (
    find_kiara_model_classes_under,
    "kiara_plugin.beamsynth.models",
)


def get_version() -> str:
    """Return the installed distribution version, or the one written by setuptools_scm."""

    from importlib.metadata import PackageNotFoundError, version

    try:
        return version(__name__)
    except PackageNotFoundError:
        pass

    version_file = os.path.join(os.path.dirname(__file__), "version.txt")
    if not os.path.exists(version_file):
        return "unknown"

    with open(version_file, encoding="utf-8") as vf:
        return vf.read().strip() or "unknown"
