"""Wire protocol for serving class probabilities over HTTP.

POST /v1/predict takes {"texts": [...]} and answers with
{"num_classes": C, "probabilities": [[...], ...]}, one row per text in
request order.  Malformed bodies get a 400 with {"error": ...}; batches
larger than the configured limit get a 413.  GET /v1/health reports
{"status": "ok"} together with the class count and the batch limit, so
clients can discover the serving limits without negotiation.

Request bodies are parsed by hand instead of through a request model:
the protocol promises a 400 with an "error" key for every bad body, and
framework-side validation would answer 422 with a different shape.
"""

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse


def _bad_request(message):
    return JSONResponse({"error": message}, status_code=400)


def create_app(model):
    """Build the serving app around a loaded ServedModel."""
    app = FastAPI(title=f"model-server ({model.name})", docs_url=None, redoc_url=None)

    @app.get("/v1/health")
    def health():
        return {
            "status": "ok",
            "num_classes": model.num_classes,
            "max_batch": model.max_batch,
        }

    @app.post("/v1/predict")
    async def predict(request: Request):
        body = await request.body()
        try:
            payload = json.loads(body)
        except (UnicodeDecodeError, json.JSONDecodeError):
            return _bad_request("request body must be valid JSON")
        if not isinstance(payload, dict):
            return _bad_request("request body must be a JSON object")
        if "texts" not in payload:
            return _bad_request("request body must have a 'texts' field")
        texts = payload["texts"]
        if not isinstance(texts, list) or not texts:
            return _bad_request("'texts' must be a non-empty list")
        if not all(isinstance(t, str) for t in texts):
            return _bad_request("'texts' entries must all be strings")
        if len(texts) > model.max_batch:
            return JSONResponse(
                {
                    "error": f"batch of {len(texts)} exceeds max batch "
                    f"{model.max_batch}"
                },
                status_code=413,
            )
        probs = model.predict_proba(texts)
        return {
            "num_classes": model.num_classes,
            "probabilities": probs.tolist(),
        }

    return app
