# app/utils/json_handler.py

from typing import List, Optional, Sequence
import json
import logging
import re

logger = logging.getLogger(__name__)

_FENCE = re.compile(r"^```[a-zA-Z]*\s*|\s*```$")


class JSONHandler:
    """Helper class for the quoted-string lists the oracle answers with"""

    @staticmethod
    def extract_string_list(response: str) -> Optional[List[str]]:
        """Parse a response that must be a single top-level list of double-quoted strings.

        Surrounding whitespace and a markdown code fence are tolerated; anything else
        (prose, objects, numbers, trailing text) is a format failure and yields None.
        """
        cleaned = _FENCE.sub("", response.strip()).strip()
        if not (cleaned.startswith("[") and cleaned.endswith("]")):
            logger.debug(f"Response is not a bare list: {response!r}")
            return None
        try:
            parsed = json.loads(cleaned)
        except json.JSONDecodeError as e:
            logger.debug(f"Error parsing list: {str(e)}")
            return None
        if not isinstance(parsed, list) or not all(isinstance(item, str) for item in parsed):
            logger.debug(f"List contains non-string items: {parsed!r}")
            return None
        return parsed

    @staticmethod
    def dump_string_list(items: Sequence[str]) -> str:
        return json.dumps(list(items), indent=2, ensure_ascii=False)
