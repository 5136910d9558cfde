import pathlib

import pytest
from fastapi.testclient import TestClient

from model_server import create_app, load_served_model

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def linear_model():
    return load_served_model(FIXTURES / "tiny_linear.json", max_batch=8)


@pytest.fixture(scope="session")
def nb_model():
    return load_served_model(FIXTURES / "tiny_nb.json", max_batch=8)


@pytest.fixture(scope="session")
def client(linear_model):
    return TestClient(create_app(linear_model))
