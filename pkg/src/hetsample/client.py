"""Client for the sampling service.

By default the service app is instantiated in-process and driven through an
ASGI test transport, so CLI commands work with no server running; pass a
base URL to talk to a remote instance instead.  Service error payloads are
translated back into the toolkit's exception types.
"""

from __future__ import annotations

import httpx

from .errors import (
    ConfigError,
    DataMismatchError,
    GraphFormatError,
    GraphLookupError,
    HetSampleError,
    MetricDomainError,
)

_KIND_TO_ERROR = {
    "not-found": GraphLookupError,
    "mismatch": DataMismatchError,
    "config": ConfigError,
    "domain": MetricDomainError,
    "data": GraphFormatError,
}


class ServiceClient:
    def __init__(self, server: str | None = None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=httpx.Timeout(600.0))
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import create_app

            self._client = TestClient(create_app())

    def close(self):
        self._client.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _call(self, method: str, url: str, payload: dict | None = None) -> dict:
        resp = self._client.request(method, url, json=payload)
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail")
            except ValueError:
                detail = None
            if isinstance(detail, dict) and "error" in detail:
                klass = _KIND_TO_ERROR.get(detail["error"], HetSampleError)
                raise klass(detail.get("message", "service error"))
            # fastapi request-validation errors arrive as a list of issues
            raise ConfigError(f"service rejected request ({resp.status_code}): {detail}")
        return resp.json()

    # -- endpoints ------------------------------------------------------

    def health(self) -> dict:
        return self._call("GET", "/health")

    def upload_graph(self, nodes_tsv: str, edges_tsv: str, schema_doc: dict) -> dict:
        return self._call(
            "POST",
            "/graphs",
            {"nodes_tsv": nodes_tsv, "edges_tsv": edges_tsv, "schema_doc": schema_doc},
        )

    def synthesize(self, params: dict) -> dict:
        return self._call("POST", "/graphs/synthetic", params)

    def graph_info(self, gid: str) -> dict:
        return self._call("GET", f"/graphs/{gid}")

    def graph_files(self, gid: str) -> dict:
        return self._call("GET", f"/graphs/{gid}/files")

    def delete_graph(self, gid: str) -> dict:
        return self._call("DELETE", f"/graphs/{gid}")

    def sample(self, gid: str, **payload) -> dict:
        return self._call("POST", f"/graphs/{gid}/sample", payload)

    def evaluate(self, gid: str, **payload) -> dict:
        return self._call("POST", f"/graphs/{gid}/evaluate", payload)

    def run_cell(self, gid: str, **payload) -> dict:
        return self._call("POST", f"/graphs/{gid}/run", payload)

    def bench(self, gid: str, **payload) -> dict:
        return self._call("POST", f"/graphs/{gid}/bench", payload)
