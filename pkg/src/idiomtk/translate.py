"""Translation routing and a provider abstraction with an offline cache.

Only the sentence containing the MWE is ever translated.  With a fully
populated cache the whole pipeline is network-free; a provider is queried
only on cache misses and its output is written back to the cache.
"""

from __future__ import annotations

import os
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from . import tsvio
from .corpus import Instance
from .errors import DataError, ProviderError

DEFAULT_ROUTES: Mapping[str, str] = {"EN": "IT", "PT": "EN", "GL": "EN"}


def route_target_language(source_lang: str, routes: Mapping[str, str] | None = None) -> str:
    """Translation target for a source language (EN->IT, PT/GL->EN by default)."""
    table = DEFAULT_ROUTES if routes is None else routes
    try:
        return table[source_lang]
    except KeyError:
        raise DataError(f"no translation route for source language {source_lang!r}") from None


@dataclass(frozen=True)
class TranslationRecord:
    instance_id: str
    target_language: str
    translated_target_sentence: str


class TranslationProvider(Protocol):
    def translate(self, text: str, source_lang: str, target_lang: str) -> str: ...


@dataclass
class ReplayProvider:
    """In-memory provider keyed by (text, source, target); counts its calls."""

    responses: dict[tuple[str, str, str], str] = field(default_factory=dict)
    calls: int = 0

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        self.calls += 1
        try:
            return self.responses[(text, source_lang, target_lang)]
        except KeyError:
            raise ProviderError(
                f"no replay response for {source_lang}->{target_lang} text {text!r}"
            ) from None


class HttpJsonProvider:
    """POSTs ``{"text", "source", "target"}`` and expects ``{"translation"}``.

    The credential is read from the environment variable named at
    construction time, never from an implicit default.
    """

    def __init__(self, endpoint: str, credential_env: str | None = None, timeout: float = 30.0):
        self.endpoint = endpoint
        self.credential_env = credential_env
        self.timeout = timeout

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        import requests

        headers = {}
        if self.credential_env:
            credential = os.environ.get(self.credential_env)
            if not credential:
                raise ProviderError(
                    f"credential environment variable {self.credential_env!r} is not set"
                )
            headers["Authorization"] = f"Bearer {credential}"
        try:
            response = requests.post(
                self.endpoint,
                json={"text": text, "source": source_lang, "target": target_lang},
                headers=headers,
                timeout=self.timeout,
            )
            response.raise_for_status()
            payload = response.json()
        except requests.RequestException as exc:
            raise ProviderError(f"translation request failed: {exc}") from exc
        translation = payload.get("translation")
        if not translation:
            raise ProviderError(f"provider returned no translation for {text!r}")
        return translation


class TranslationCache:
    """(instance_id, target_language) -> translated sentence, at most one entry."""

    def __init__(self) -> None:
        self._entries: dict[tuple[str, str], str] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, instance_id: str, target_lang: str) -> str | None:
        return self._entries.get((instance_id, target_lang))

    def put(self, instance_id: str, target_lang: str, sentence: str) -> None:
        if not sentence:
            raise DataError(f"empty translation for instance {instance_id!r}")
        key = (instance_id, target_lang)
        existing = self._entries.get(key)
        if existing is not None and existing != sentence:
            raise DataError(
                f"conflicting translation for instance {instance_id!r} into {target_lang}"
            )
        self._entries[key] = sentence

    @classmethod
    def load(cls, path: str | Path) -> "TranslationCache":
        cache = cls()
        for lineno, (instance_id, target_lang, sentence) in tsvio.read_rows(path, 3):
            if not sentence:
                raise DataError(f"{path}:{lineno}: empty translation")
            try:
                cache.put(instance_id, target_lang, sentence)
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
        return cache

    def items(self) -> list[tuple[str, str, str]]:
        """(instance_id, target_language, sentence) rows, sorted."""
        return sorted((iid, lang, text) for (iid, lang), text in self._entries.items())

    def save(self, path: str | Path, *, provenance: Sequence[str] | None = None) -> None:
        tsvio.write_rows(path, self.items(), provenance=provenance)


def translate_instance(
    instance: Instance,
    cache: TranslationCache,
    provider: TranslationProvider | None = None,
    routes: Mapping[str, str] | None = None,
) -> TranslationRecord:
    """Translate the target sentence, hitting the cache first.

    A cache miss with no provider is an error naming the instance; provider
    results are written back so a second pass makes no provider calls.
    """
    target_lang = route_target_language(instance.language, routes)
    cached = cache.get(instance.id, target_lang)
    if cached is not None:
        return TranslationRecord(instance.id, target_lang, cached)
    if provider is None:
        raise ProviderError(
            f"no cached {target_lang} translation for instance {instance.id!r} "
            "and no provider configured"
        )
    try:
        translated = provider.translate(instance.target, instance.language, target_lang)
    except ProviderError as exc:
        raise ProviderError(f"instance {instance.id!r}: {exc}") from exc
    if not translated:
        raise ProviderError(f"instance {instance.id!r}: provider returned an empty translation")
    cache.put(instance.id, target_lang, translated)
    return TranslationRecord(instance.id, target_lang, translated)
