import json
import random
from importlib import resources

import pytest
from hypothesis import settings

from tomoghost import TomographyError, validate_direction_set

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repro")


def random_direction_set(rng, d, m, max_entry=4):
    while True:
        vecs = [[rng.randint(-max_entry, max_entry) for _ in range(d)] for _ in range(m)]
        if any(not any(v) for v in vecs):
            continue
        try:
            return validate_direction_set(vecs, d)
        except TomographyError:
            continue


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def schema():
    def load(name):
        text = resources.files("tomoghost").joinpath("schemas", f"{name}.schema.json").read_text()
        return json.loads(text)

    return load
