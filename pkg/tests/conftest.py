from __future__ import annotations

import warnings

import pytest
from starlette.testclient import TestClient

from huntboard.server import ServiceConfig, create_app

from helpers import fresh_board

warnings.filterwarnings(
    "ignore", message="Using `httpx` with `starlette.testclient`"
)


@pytest.fixture
def board():
    return fresh_board()


@pytest.fixture
def client():
    """In-memory service with a deterministic clock."""
    app = create_app(ServiceConfig(clock="logical"))
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def wall_client():
    app = create_app(ServiceConfig())
    with TestClient(app) as test_client:
        yield test_client
