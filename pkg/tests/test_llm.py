#!/usr/bin/env python3

import json
import unittest
from typing import Any
from unittest import mock

import requests

from kgrag.abc import BackendError, MissingPlaceholder, ProtocolError, TransportError
from kgrag.llm import (
    ExtractiveMockClient, GenerationParams, HttpLlmClient, PromptTemplate,
    extractive_mock_generate, http_generate, render_prompt,
)

ENDPOINT = "http://llm.invalid/v1/chat/completions"

CONTEXT = "Alex has event Raksha Bandhan on 2024-08-19. Alex has event Team Meeting on 2024-01-15."
QUERY = "What is the event on August 19th, 2024?"


def _completion(*contents: str, status: int = 200) -> mock.Mock:
    body = {"choices": [{"index": index, "message": {"role": "assistant", "content": content}} for index, content in enumerate(contents)]}
    return mock.Mock(status_code=status, text=json.dumps(body), json=mock.Mock(return_value=body))


class TestTemplate(unittest.TestCase):

    def test_render(self) -> None:
        self.assertEqual("A. Q: B?", render_prompt("<context> Q: <query>", "A.", "B?"))
        self.assertEqual(
            "Retrieve the answer from the knowledge graph Alex has event X. and generate a concise response to the "
            "What is X?",
            render_prompt(PromptTemplate.DEFAULT, "Alex has event X.", "What is X?"),
        )

    def test_render_literal(self) -> None:
        prompt = render_prompt("<context> Q: <query>", "<query> \\1 $0", "<context>")

        self.assertEqual("<query> \\1 $0 Q: <context>", prompt)
        self.assertEqual(("<query> \\1 $0", "<context>"), PromptTemplate("<context> Q: <query>").unrender(prompt))

    def test_contains_inputs(self) -> None:
        for template in ("<context> Q: <query>", "Q: <query>\nFacts: <context>", str(PromptTemplate.DEFAULT)):
            prompt = render_prompt(template, CONTEXT, QUERY)
            self.assertIn(CONTEXT, prompt)
            self.assertIn(QUERY, prompt)

    def test_missing_placeholder(self) -> None:
        for template in ("Answer <context>", "Answer <query>", "<context><context><query>", ""):
            with self.subTest(template=template), self.assertRaises(MissingPlaceholder):
                PromptTemplate(template)
        with self.assertRaises(MissingPlaceholder):
            render_prompt("<context> only", "A.", "B?")

    def test_unrender(self) -> None:
        template = PromptTemplate("Q: <query>\nFacts: <context>")

        self.assertFalse(template.context_first)
        self.assertEqual(("Q: ", "\nFacts: ", ""), template.parts)
        self.assertEqual((CONTEXT, QUERY), template.unrender(template.render(CONTEXT, QUERY)))
        self.assertIsNone(template.unrender("something else entirely"))


class TestMock(unittest.TestCase):

    def test_overlap(self) -> None:
        prompt = render_prompt(PromptTemplate.DEFAULT, CONTEXT, QUERY)
        self.assertEqual("Alex has event Raksha Bandhan on 2024-08-19", extractive_mock_generate(prompt))

    def test_best_sentence(self) -> None:
        context = "Alex has event Team Meeting on 2024-01-15.\nAlex has event Raksha Bandhan on 2024-08-19."
        prompt = render_prompt(PromptTemplate.DEFAULT, context, "When is Raksha Bandhan?")
        self.assertEqual("Alex has event Raksha Bandhan on 2024-08-19", extractive_mock_generate(prompt))

    def test_empty_context(self) -> None:
        for context in ("", "  ", "...\n"):
            prompt = render_prompt(PromptTemplate.DEFAULT, context, QUERY)
            self.assertEqual("I don't know.", extractive_mock_generate(prompt))

    def test_single_sentence(self) -> None:
        prompt = render_prompt(PromptTemplate.DEFAULT, "Sam booked the cabin", "Who likes pizza?")
        self.assertEqual("Sam booked the cabin", extractive_mock_generate(prompt))

    def test_query_first(self) -> None:
        template = PromptTemplate("Q: <query>\nFacts: <context>")
        client = ExtractiveMockClient(template)

        answer = client.generate(template.render(CONTEXT, "When is the Team Meeting?"), GenerationParams())
        self.assertEqual("Alex has event Team Meeting on 2024-01-15", answer)
        self.assertEqual("extractive-mock", client.model)

    def test_substring_of_context(self) -> None:
        for query in (QUERY, "team meeting", "nothing in common", ""):
            answer = extractive_mock_generate(render_prompt(PromptTemplate.DEFAULT, CONTEXT, query))
            self.assertIn(answer, CONTEXT)

    def test_unmatched_prompt(self) -> None:
        with self.assertLogs("kgrag.llm", "WARNING"):
            answer = extractive_mock_generate("Alex has event X. Sam has event Y.")
        self.assertEqual("Alex has event X", answer)


class TestParams(unittest.TestCase):

    def test_defaults(self) -> None:
        self.assertEqual(
            {"max_tokens": 128, "temperature": 0.0, "repetition_penalty": 1.1, "seed": None},
            GenerationParams().to_dict(),
        )

    def test_validation(self) -> None:
        for kwargs in (
                {"max_tokens": 0}, {"max_tokens": True}, {"max_tokens": 1.5},
                {"temperature": -0.1}, {"repetition_penalty": 0.9}, {"seed": "7"}, {"seed": True},
        ):
            with self.subTest(**kwargs), self.assertRaises(ValueError):
                GenerationParams(**kwargs)


@mock.patch.object(requests.Session, "post")
class TestHttp(unittest.TestCase):

    def test_first_choice(self, post: mock.Mock) -> None:
        post.return_value = _completion("  Raksha Bandhan.\n", "Something else.")
        self.assertEqual("Raksha Bandhan.", http_generate(ENDPOINT, "prompt", GenerationParams()))

    def test_zero_choices(self, post: mock.Mock) -> None:
        post.return_value = _completion()
        with self.assertRaises(ProtocolError):
            http_generate(ENDPOINT, "prompt", GenerationParams())

    def test_malformed(self, post: mock.Mock) -> None:
        for body in ({}, {"choices": [{}]}, {"choices": [{"message": {"content": 3}}]}, "text"):
            with self.subTest(body=body):
                post.return_value = mock.Mock(status_code=200, json=mock.Mock(return_value=body))
                with self.assertRaises(ProtocolError):
                    http_generate(ENDPOINT, "prompt", GenerationParams())

    def test_backend_error(self, post: mock.Mock) -> None:
        post.return_value = mock.Mock(status_code=503, text="overloaded")
        with self.assertRaises(BackendError) as context:
            http_generate(ENDPOINT, "prompt", GenerationParams())

        self.assertEqual(503, context.exception.status)
        self.assertIn("overloaded", str(context.exception))

    def test_echo_stripped(self, post: mock.Mock) -> None:
        prompt = render_prompt(PromptTemplate.DEFAULT, CONTEXT, QUERY)
        post.return_value = _completion(prompt + "\n Raksha Bandhan.")
        self.assertEqual("Raksha Bandhan.", http_generate(ENDPOINT, prompt, GenerationParams()))

    def test_body(self, post: mock.Mock) -> None:
        post.return_value = _completion("ok")
        http_generate(ENDPOINT, "the prompt", GenerationParams(64, 0.2, 1.2, 7), model="llama-2-7b-chat")

        self.assertEqual(
            {
                "messages": [{"role": "user", "content": "the prompt"}],
                "max_tokens": 64,
                "temperature": 0.2,
                "repetition_penalty": 1.2,
                "seed": 7,
                "model": "llama-2-7b-chat",
            },
            json.loads(post.call_args.kwargs["data"]),
        )

        http_generate(ENDPOINT, "the prompt", GenerationParams())
        self.assertNotIn("model", json.loads(post.call_args.kwargs["data"]))

    def test_retry(self, post: mock.Mock) -> None:
        post.side_effect = [requests.Timeout("slow"), _completion("Raksha Bandhan.")]
        params = GenerationParams(seed=3)

        self.assertEqual("Raksha Bandhan.", http_generate(ENDPOINT, "prompt", params))
        self.assertEqual(2, post.call_count)
        first, second = post.call_args_list
        self.assertEqual(first.kwargs["data"], second.kwargs["data"])
        self.assertEqual(GenerationParams(seed=3), params)

    def test_transport_error(self, post: mock.Mock) -> None:
        post.side_effect = requests.ConnectionError("refused")
        with self.assertRaises(TransportError):
            http_generate(ENDPOINT, "prompt", GenerationParams())
        self.assertEqual(3, post.call_count)

    def test_client(self, post: mock.Mock) -> None:
        post.return_value = _completion("Raksha Bandhan.")
        client = HttpLlmClient(ENDPOINT, "secret", "llama-2-13b-chat")

        self.assertEqual("Raksha Bandhan.", client.generate("prompt", GenerationParams()))
        self.assertEqual("llama-2-13b-chat", client.model)
        self.assertEqual("llama-2-13b-chat", json.loads(post.call_args.kwargs["data"])["model"])
        self.assertEqual("Bearer secret", client.client.session.headers["Authorization"])
        self.assertEqual(ENDPOINT, HttpLlmClient(ENDPOINT).model)

    def test_close(self, post: mock.Mock) -> None:
        post.return_value = _completion("Raksha Bandhan.")
        client = HttpLlmClient(ENDPOINT)
        client.generate("prompt", GenerationParams())

        with mock.patch.object(requests.Session, "close") as close:
            client.close()
            self.assertEqual(1, close.call_count)
            client.close()
            self.assertEqual(1, close.call_count)

            http_generate(ENDPOINT, "prompt", GenerationParams())
            self.assertEqual(2, close.call_count)

        self.assertEqual("Raksha Bandhan.", client.generate("prompt", GenerationParams()))


if __name__ == "__main__":
    unittest.main()
