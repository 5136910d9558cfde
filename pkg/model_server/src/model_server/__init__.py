"""HTTP serving layer for saved bag-of-words classifiers.

Loads a classifier saved as JSON and exposes it over a small wire
protocol: POST /v1/predict maps a batch of texts to class probability
rows, GET /v1/health reports readiness and the serving limits.
"""

from model_server.app import create_app
from model_server.models import ModelLoadError, ServedModel, load_served_model

__all__ = [
    "ModelLoadError",
    "ServedModel",
    "create_app",
    "load_served_model",
]
