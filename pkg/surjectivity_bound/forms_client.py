"""
REST client for remote eigenform datasets with a checksummed local cache.

Endpoint: ``GET {base}/forms/{field_label}?level_norm_le={N}&weight=2``.
Responses are validated and stored in canonical form next to a sidecar
recording their sha256, source URL and retrieval time. A warm cache entry
is served without any network access.
"""

import hashlib
import json
import logging
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Optional, Tuple

import requests

from . import forms
from .exceptions import CacheIntegrityError, DatasetError, RemoteFetchError, RemoteUnavailableError
from .forms import FormDataset
from .numfield import NumberField

DEFAULT_TIMEOUT = 60

_locks: Dict[str, threading.Lock] = {}
_locks_guard = threading.Lock()


def _lock_for(key: str) -> threading.Lock:
    with _locks_guard:
        return _locks.setdefault(key, threading.Lock())


class FormsClient:
    """
    Fetches datasets from a remote endpoint and caches them on disk.
    """

    def __init__(self, base_url: str, cache_dir: str, timeout: int = DEFAULT_TIMEOUT):
        """
        Initialize the client.

        Args:
            base_url: Endpoint root, without trailing slash
            cache_dir: Directory for cached datasets
            timeout: Request timeout in seconds
        """
        self.base_url = base_url.rstrip("/")
        self.source_tag = hashlib.sha256(self.base_url.encode("utf-8")).hexdigest()[:12]
        self.cache_dir = Path(cache_dir)
        self.timeout = timeout
        self.logger = logging.getLogger(__name__)

    def url_for(self, field_label: str) -> str:
        return f"{self.base_url}/forms/{field_label}"

    def cache_paths(self, field_label: str, level_norm_bound: int) -> Tuple[Path, Path]:
        """Cache entries are keyed by base URL, field, level bound and weight."""
        stem = f"{field_label}__N{level_norm_bound}__w2__{self.source_tag}"
        return self.cache_dir / f"{stem}.json", self.cache_dir / f"{stem}.sha256"

    def fetch(self, field_label: str, level_norm_bound: int, K: Optional[NumberField] = None) -> FormDataset:
        """
        Dataset of weight-2 forms with level norm at most ``level_norm_bound``.

        Args:
            field_label: Base field label
            level_norm_bound: Upper bound on level norms
            K: Base field used to validate the payload

        Returns:
            FormDataset, served from cache when possible

        Raises:
            RemoteUnavailableError: Network failure on a cache miss
            RemoteFetchError: Non-200 answer other than 404
            CacheIntegrityError: Corrupted cache entry that cannot be refetched
            DatasetError: Payload fails validation
        """
        data_path, sidecar_path = self.cache_paths(field_label, level_norm_bound)
        with _lock_for(str(data_path)):
            corrupted = False
            if data_path.exists() and sidecar_path.exists():
                cached = self._read_cache(data_path, sidecar_path, K)
                if cached is not None:
                    self.logger.debug(f"Cache hit for {field_label} (N <= {level_norm_bound})")
                    return cached
                corrupted = True
                self.logger.warning(f"Checksum mismatch for cached {data_path.name}, refetching")
            try:
                return self._fetch_and_store(field_label, level_norm_bound, K, data_path, sidecar_path)
            except RemoteUnavailableError:
                if corrupted:
                    raise CacheIntegrityError(
                        "cached dataset is corrupted and the remote is unavailable", {"path": str(data_path)}
                    )
                raise

    def _read_cache(self, data_path: Path, sidecar_path: Path, K: Optional[NumberField]) -> Optional[FormDataset]:
        raw = data_path.read_bytes()
        try:
            sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            return None
        if hashlib.sha256(raw).hexdigest() != sidecar.get("sha256"):
            return None
        provenance = {
            "source": sidecar.get("url", ""),
            "retrieved_at": sidecar.get("retrieved_at", ""),
            "cache": str(data_path),
        }
        return forms.dataset_from_dict(json.loads(raw.decode("utf-8")), K, provenance)

    def _fetch_and_store(
        self, field_label: str, level_norm_bound: int, K: Optional[NumberField], data_path: Path, sidecar_path: Path
    ) -> FormDataset:
        url = self.url_for(field_label)
        params = {"level_norm_le": level_norm_bound, "weight": 2}
        try:
            self.logger.info(f"Fetching forms from {url} (level norm <= {level_norm_bound})")
            response = requests.get(url, params=params, timeout=self.timeout)
        except requests.RequestException as e:
            self.logger.error(f"Remote unavailable: {str(e)}")
            raise RemoteUnavailableError("remote unavailable; supply a local dataset with --forms", {"url": url}) from e

        if response.status_code == 404:
            self.logger.info(f"No forms published for {field_label}; caching an empty dataset")
            document = {"field": field_label, "forms": []}
        elif response.status_code != 200:
            raise RemoteFetchError("unexpected HTTP status", {"url": url, "status": response.status_code})
        else:
            try:
                document = response.json()
            except ValueError as e:
                raise DatasetError("payload is not JSON", {"url": url}) from e

        retrieved_at = datetime.now(timezone.utc).isoformat()
        dataset = forms.dataset_from_dict(document, K, {"source": url, "retrieved_at": retrieved_at})
        text = forms.dump_dataset(dataset).encode("utf-8")
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        data_path.write_bytes(text)
        sidecar = {"sha256": hashlib.sha256(text).hexdigest(), "url": url, "retrieved_at": retrieved_at}
        sidecar_path.write_text(json.dumps(sidecar, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        self.logger.info(f"Cached {len(dataset.records)} form(s) at {data_path}")
        return dataset


def fetch_remote(
    base_url: str, field_label: str, level_norm_bound: int, cache_dir: str, K: Optional[NumberField] = None
) -> FormDataset:
    """Convenience wrapper around ``FormsClient.fetch``."""
    return FormsClient(base_url, cache_dir).fetch(field_label, level_norm_bound, K)
