# -*- coding: utf-8 -*-

"""Generate the 'Package contents' pages (module types, operations, model classes) for the beamsynth plugin."""

import builtins

from kiara.context import Kiara, KiaraContextInfo
from kiara.doc.gen_info_pages import generate_detail_pages

PKG_NAME = "kiara_plugin.beamsynth"

kiara: Kiara = Kiara.instance()
context_info = KiaraContextInfo.create_from_kiara_instance(
    kiara=kiara, package_filter=PKG_NAME
)

generate_detail_pages(context_info=context_info)

builtins.plugin_package_context_info = context_info
