# -*- coding: utf-8 -*-
from kiara.interfaces.python_api.models.job import JobTest

"""Runs the job descriptions in 'tests/resources/jobs' through kiara.

Checks for a job live in a subfolder of 'tests/job_tests' named like the job file (minus the extension). Python files in
there are collected, and each function in them is called with the arguments it names: 'kiara_api', 'outputs' (the
whole result ValueMap), or the name of a single output field (e.g. 'metrics', 'report', 'comparison').
"""


def test_job_desc(example_job_test: JobTest):

    example_job_test.run_tests()
