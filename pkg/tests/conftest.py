import json
from pathlib import Path

import pytest

from proofminer.features import PLAIN_COQ, SSREFLECT, build_library
from proofminer.parsing import read_trace_file

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def initial_traces():
    return read_trace_file(FIXTURES / "Initial.trace")


@pytest.fixture(scope="session")
def bigop_traces():
    return read_trace_file(FIXTURES / "bigop.trace")


@pytest.fixture(scope="session")
def partial_trace():
    return read_trace_file(FIXTURES / "sum_first_n_partial.trace")[0]


@pytest.fixture(scope="session")
def initial_library(initial_traces):
    return build_library(initial_traces, PLAIN_COQ, "Initial")


@pytest.fixture(scope="session")
def bigop_library(bigop_traces):
    return build_library(bigop_traces, SSREFLECT, "bigop")


@pytest.fixture(scope="session")
def suggest_config():
    return json.loads((FIXTURES / "suggest_config.json").read_text())


def trace_by_name(traces, name):
    for trace in traces:
        if trace.lemma_name == name:
            return trace
    raise KeyError(name)
