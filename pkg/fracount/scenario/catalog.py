# -*- coding: utf-8 -*-
# File: catalog.py

import os
from tabulate import tabulate

from .config import load_scenario

__all__ = ['SCENARIO_DIR', 'bundled_scenarios', 'resolve_config', 'list_scenarios']

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'scenarios')


def bundled_scenarios():
    """
    Returns:
        list[(str, str)]: name and path of every bundled scenario, sorted by name.
    """
    return [(f[:-5], os.path.join(SCENARIO_DIR, f))
            for f in sorted(os.listdir(SCENARIO_DIR)) if f.endswith('.json')]


def resolve_config(name_or_path):
    """
    A scenario file path, or the name of a bundled scenario (with or without ``.json``).
    """
    if os.path.isfile(name_or_path):
        return name_or_path
    name = os.path.basename(name_or_path)
    if name.endswith('.json'):
        name = name[:-5]
    for k, path in bundled_scenarios():
        if k == name:
            return path
    return name_or_path


def list_scenarios():
    """
    Returns:
        str: a table of the bundled scenarios with their process and description.
    """
    data = []
    for name, path in bundled_scenarios():
        s = load_scenario(path, output_dir=os.curdir)
        checks = sorted({c['name'] for c in s.checks})
        data.append([name, s.process.family, ', '.join(checks), s.description])
    return tabulate(data, headers=['scenario', 'process', 'checks', 'description'])
