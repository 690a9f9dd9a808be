import pytest
from fastapi.testclient import TestClient

from xxchain.service import create_app


@pytest.fixture(scope="session")
def client():
    with TestClient(create_app()) as c:
        yield c
