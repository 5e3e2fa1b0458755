#!/usr/bin/env python3

__all__ = (
    "GenerationParams", "PromptTemplate",
    "HttpLlmClient", "ExtractiveMockClient",
    "render_prompt", "http_generate", "extractive_mock_generate",
)

"""
Prompt templates and text generation: a client for chat-style completion servers, and a deterministic extractive
mock that answers from the prompt's own context.
"""

import logging
import re
from collections import Counter
from typing import Any, Dict, Tuple, Union

from ._http import JsonClient
from .abc import LlmClient, MissingPlaceholder, ProtocolError
from .metrics import tokenize

logger = logging.getLogger("kgrag.llm")

_SENTENCE_END = re.compile(r"[.!?]")
_PLACEHOLDER = re.compile(r"(<context>|<query>)")


class GenerationParams:
    """
    Decoding parameters sent to the backend. A temperature of 0 asks for greedy decoding.
    """

    __slots__ = ("max_tokens", "temperature", "repetition_penalty", "seed")

    def __init__(
            self,
            max_tokens: int = 128,
            temperature: float = 0.0,
            repetition_penalty: float = 1.1,
            seed: Union[int, None] = None,
    ) -> None:
        if not isinstance(max_tokens, int) or isinstance(max_tokens, bool) or max_tokens < 1:
            raise ValueError("max_tokens must be a positive integer, got %r." % (max_tokens,))
        if temperature < 0.0:
            raise ValueError("temperature must be non-negative, got %r." % temperature)
        if repetition_penalty < 1.0:
            raise ValueError("repetition_penalty must be at least 1, got %r." % repetition_penalty)
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
            raise ValueError("seed must be an integer, got %r." % (seed,))

        self.max_tokens = max_tokens
        self.temperature = float(temperature)
        self.repetition_penalty = float(repetition_penalty)
        self.seed = seed

    def __repr__(self) -> str:
        return "<GenerationParams(max_tokens=%i, temperature=%s, repetition_penalty=%s, seed=%r) at %x>" % (
            self.max_tokens, self.temperature, self.repetition_penalty, self.seed, id(self),
        )

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is GenerationParams and
            other.max_tokens == self.max_tokens and
            other.temperature == self.temperature and
            other.repetition_penalty == self.repetition_penalty and
            other.seed == self.seed
        )

    def __hash__(self) -> int:
        return hash((self.max_tokens, self.temperature, self.repetition_penalty, self.seed))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_tokens": self.max_tokens,
            "temperature": self.temperature,
            "repetition_penalty": self.repetition_penalty,
            "seed": self.seed,
        }


class PromptTemplate:
    """
    A prompt with exactly one "<context>" and one "<query>" placeholder.
    """

    __slots__ = ("template",)

    CONTEXT = "<context>"
    QUERY = "<query>"

    DEFAULT: "PromptTemplate"

    @property
    def context_first(self) -> bool:
        return self.template.index(PromptTemplate.CONTEXT) < self.template.index(PromptTemplate.QUERY)

    @property
    def parts(self) -> Tuple[str, str, str]:
        """
        :return: The text before, between and after the two placeholders.
        """

        prefix, _, infix, _, suffix = _PLACEHOLDER.split(self.template)
        return prefix, infix, suffix

    def __init__(self, template: str) -> None:
        for placeholder in (PromptTemplate.CONTEXT, PromptTemplate.QUERY):
            count = template.count(placeholder)
            if count != 1:
                raise MissingPlaceholder(
                    "Template must contain %s exactly once, found %i in %r." % (placeholder, count, template),
                )
        self.template = template

    def __repr__(self) -> str:
        return "<PromptTemplate(template=%r) at %x>" % (self.template, id(self))

    def __str__(self) -> str:
        return self.template

    def __eq__(self, other: Any) -> bool:
        return other.__class__ is PromptTemplate and other.template == self.template

    def __hash__(self) -> int:
        return hash(self.template)

    def render(self, context: str, query: str) -> str:
        """
        Substitutes the placeholders literally, leaving any placeholder-like text in the values alone.
        """

        values = {PromptTemplate.CONTEXT: context, PromptTemplate.QUERY: query}
        return "".join(values.get(part, part) for part in _PLACEHOLDER.split(self.template))

    def unrender(self, prompt: str) -> Union[Tuple[str, str], None]:
        """
        Recovers the context and query from a prompt rendered with this template.

        :return: The (context, query), or None if the prompt doesn't fit this template.
        """

        prefix, infix, suffix = self.parts
        if len(prompt) < len(prefix) + len(infix) + len(suffix):
            return None
        if not prompt.startswith(prefix) or not prompt.endswith(suffix):
            return None
        middle = prompt[len(prefix): len(prompt) - len(suffix)]

        if self.context_first:
            index = middle.rfind(infix)
            if index < 0:
                return None
            return middle[:index], middle[index + len(infix):]
        index = middle.find(infix)
        if index < 0:
            return None
        return middle[index + len(infix):], middle[:index]


PromptTemplate.DEFAULT = PromptTemplate(
    "Retrieve the answer from the knowledge graph <context> and generate a concise response to the <query>",
)


def render_prompt(template: Union[PromptTemplate, str], context: str, query: str) -> str:
    """
    :param template: The template, or its text (which is validated).
    :param context: The retrieved context.
    :param query: The user's question.
    :return: The prompt.
    """

    if not isinstance(template, PromptTemplate):
        template = PromptTemplate(template)
    return template.render(context, query)


# ------------------------------ HTTP client ------------------------------ #

def _parse_completion(body: Any) -> str:
    if not isinstance(body, dict) or not isinstance(body.get("choices"), list):
        raise ProtocolError("Expected an object with a 'choices' array.")
    if not body["choices"]:
        raise ProtocolError("Backend returned zero choices.")

    choice = body["choices"][0]
    message = choice.get("message") if isinstance(choice, dict) else None
    content = message.get("content") if isinstance(message, dict) else None
    if not isinstance(content, str):
        raise ProtocolError("First choice has no message content.")
    return content


def http_generate(
        endpoint: Union[str, JsonClient],
        prompt: str,
        params: GenerationParams,
        token: Union[str, None] = None,
        model: Union[str, None] = None,
) -> str:
    """
    Generates an answer with a chat completion server, passing the prompt as a single user message.

    :param endpoint: The server URL (or an existing client for it).
    :param prompt: The rendered prompt.
    :param params: The generation parameters.
    :param token: A bearer token, if any.
    :param model: The model name to request, passed through as is.
    :return: The first choice's content, stripped, without the prompt if the backend echoed it.
    """

    body: Dict[str, Any] = {"messages": [{"role": "user", "content": prompt}]}
    body.update(params.to_dict())
    if model:
        body["model"] = model

    if isinstance(endpoint, JsonClient):
        content = _parse_completion(endpoint.post(body)).strip()
    else:
        client = JsonClient(endpoint, token)
        try:
            content = _parse_completion(client.post(body)).strip()
        finally:
            client.close()

    if prompt and content.startswith(prompt):
        content = content[len(prompt):].strip()
    return content


class HttpLlmClient(LlmClient):
    """
    A client for a chat completion server.
    """

    __slots__ = ("client", "_model")

    def __init__(
            self, endpoint: str, token: Union[str, None] = None, model: Union[str, None] = None, timeout: float = 120.0,
    ) -> None:
        self.client = JsonClient(endpoint, token, timeout)
        self._model = model

    def __repr__(self) -> str:
        return "<HttpLlmClient(endpoint=%r, model=%r) at %x>" % (self.client.endpoint, self._model, id(self))

    @property
    def model(self) -> str:
        return self._model or self.client.endpoint

    def generate(self, prompt: str, params: GenerationParams) -> str:
        return http_generate(self.client, prompt, params, model=self._model)

    def close(self) -> None:
        self.client.close()


# ------------------------------ Extractive mock ------------------------------ #

def _overlap(a: "Counter[str]", b: "Counter[str]") -> int:
    return sum((a & b).values())


def extractive_mock_generate(
        prompt: str, params: Union[GenerationParams, None] = None, template: PromptTemplate = PromptTemplate.DEFAULT,
) -> str:
    """
    Answers with the context sentence that shares the most tokens with the query, the earliest one on ties.

    :param prompt: A prompt rendered with `template`.
    :param params: Ignored, accepted for parity with real backends.
    :param template: The template the prompt was rendered with, used to find the context and query.
    :return: The chosen sentence, stripped, or "I don't know." if the context is empty.
    """

    split = template.unrender(prompt)
    if split is None:
        logger.warning("Prompt doesn't match template %r, answering from the whole prompt.", template.template)
        context = query = prompt
    else:
        context, query = split

    sentences = [sentence.strip() for sentence in _SENTENCE_END.split(context)]
    sentences = [sentence for sentence in sentences if sentence]
    if not sentences:
        return ExtractiveMockClient.FALLBACK

    query_counts = Counter(tokenize(query))
    best = sentences[0]
    best_overlap = _overlap(Counter(tokenize(best)), query_counts)
    for sentence in sentences[1:]:
        overlap = _overlap(Counter(tokenize(sentence)), query_counts)
        if overlap > best_overlap:
            best = sentence
            best_overlap = overlap
    return best


class ExtractiveMockClient(LlmClient):
    """
    The deterministic offline stand-in for an LLM.
    """

    __slots__ = ("template",)

    FALLBACK = "I don't know."

    def __init__(self, template: PromptTemplate = PromptTemplate.DEFAULT) -> None:
        self.template = template

    def __repr__(self) -> str:
        return "<ExtractiveMockClient(template=%r) at %x>" % (self.template.template, id(self))

    @property
    def model(self) -> str:
        return "extractive-mock"

    def generate(self, prompt: str, params: GenerationParams) -> str:
        return extractive_mock_generate(prompt, params, self.template)
