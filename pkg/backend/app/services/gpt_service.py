# app/services/gpt_service.py

import os
from pathlib import Path
from typing import Any, Dict, Optional
import logging

import requests
from tenacity import (
    before_sleep_log,
    retry,
    retry_if_exception,
    stop_after_attempt,
    wait_exponential,
)

from app.exceptions import ConfigurationError, OracleError
from app.schemas.settings import OracleSettings
from app.services.oracle.base_oracle import OracleClient

logger = logging.getLogger(__name__)

RETRYABLE_STATUS = 429


def is_transient(error: BaseException) -> bool:
    """Connection drops, timeouts, 5xx and 429 are worth another attempt; everything else is final"""
    if isinstance(error, (requests.exceptions.ConnectionError, requests.exceptions.Timeout)):
        return True
    if isinstance(error, requests.exceptions.HTTPError) and error.response is not None:
        status = error.response.status_code
        return status == RETRYABLE_STATUS or status >= 500
    return False


class GPTService(OracleClient):
    """Live chat-completion client"""

    def __init__(
        self,
        settings: OracleSettings,
        api_key: Optional[str] = None,
        run_log_path: Optional[Path] = None,
        retry_backoff: float = 1.0,
    ):
        super().__init__(run_log_path)
        self.settings = settings
        self.api_url = settings.endpoint
        self.model_name = settings.model
        self.retry_backoff = retry_backoff
        self.api_key = api_key or os.environ.get(settings.api_key_env, "")
        if not self.api_key:
            raise ConfigurationError(
                f"Missing oracle credential: set the {settings.api_key_env} environment variable"
            )
        self._post = retry(
            stop=stop_after_attempt(settings.transport_retries),
            wait=wait_exponential(multiplier=retry_backoff, max=30),
            retry=retry_if_exception(is_transient),
            before_sleep=before_sleep_log(logger, logging.WARNING),
            reraise=True,
        )(self._post_once)

    def _post_once(self, headers: Dict[str, str], payload: Dict[str, Any]) -> requests.Response:
        logger.debug(f"Sending request to {self.api_url}")
        response = requests.post(self.api_url, headers=headers, json=payload, timeout=self.settings.timeout)
        response.raise_for_status()
        return response

    def _complete(self, system: str, user: str) -> str:
        headers = {
            "Authorization": f"Bearer {self.api_key}",
            "Content-Type": "application/json",
        }
        payload = {
            "model": self.settings.model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
            "temperature": self.settings.temperature,
            "max_tokens": self.settings.max_tokens,
        }

        try:
            response = self._post(headers, payload)
        except requests.exceptions.RequestException as e:
            if is_transient(e):
                raise OracleError(
                    f"Chat completion failed after {self.settings.transport_retries} attempts: {str(e)}"
                ) from e
            raise OracleError(f"Chat completion request rejected: {str(e)}") from e

        try:
            result = response.json()
            return result["choices"][0]["message"]["content"].strip()
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise OracleError(f"Unexpected chat completion response shape: {str(e)}") from e
