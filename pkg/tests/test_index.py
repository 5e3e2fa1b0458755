#!/usr/bin/env python3

import os
import random
import tempfile
import unittest
from typing import List

import numpy as np

from kgrag.abc import DataError, DimensionMismatch, DuplicateChunkId, FileNotFound, InvalidChunkParams
from kgrag.dataset import FileOffset
from kgrag.embed import EmbeddingVector, HashEmbedder, hash_embed
from kgrag.index import (
    ChunkKind, DocumentChunk, IndexHeader, VectorIndex, build_index, chunk_documents, read_index, top_k, write_index,
)

WORDS = ("alex", "team", "meeting", "dinner", "on", "the", "calendar", "august", "raksha", "bandhan", "a", "trip")


def _document(length: int, seed: int = 0) -> str:
    rng = random.Random(seed)
    text = ""
    while len(text) < length:
        text += rng.choice(WORDS) + rng.choice((" ", " ", "  ", "\n"))
    text = text[:length]
    if text[-1].isspace():
        text = text[:-1] + "x"
    return text


def _reconstruct(chunks: List[DocumentChunk]) -> str:
    text = chunks[0].text
    for previous, chunk in zip(chunks, chunks[1:]):
        overlap = previous.end - chunk.start
        assert overlap >= 0
        assert chunk.text[:overlap] == previous.text[len(previous.text) - overlap:]
        text += chunk.text[overlap:]
    return text


def _chunks(count: int) -> List[DocumentChunk]:
    return [DocumentChunk("c%i" % index, "chunk %i" % index, ChunkKind.RAW, "doc") for index in range(count)]


class TestChunking(unittest.TestCase):

    def test_single(self) -> None:
        text = _document(100)
        chunks = chunk_documents([(text, "January")])

        self.assertEqual(1, len(chunks))
        self.assertEqual(DocumentChunk("January#0", text, ChunkKind.RAW, "January", 0, 100), chunks[0])

    def test_empty(self) -> None:
        self.assertEqual([], chunk_documents([]))
        self.assertEqual([], chunk_documents([("", "a"), ("  \n ", "b")]))

    def test_reconstruction(self) -> None:
        text = _document(1000)
        chunks = chunk_documents([(text, "doc")], 400, 50)

        self.assertGreater(len(chunks), 2)
        self.assertEqual(text, _reconstruct(chunks))
        for index, chunk in enumerate(chunks):
            self.assertEqual("doc#%i" % index, chunk.chunk_id)
            self.assertLessEqual(len(chunk.text), 400)
            self.assertEqual(text[chunk.start: chunk.end], chunk.text)

    def test_reconstruction_many(self) -> None:
        for seed in range(20):
            for max_chars, overlap in ((64, 0), (64, 63), (100, 30), (512, 64)):
                with self.subTest(seed=seed, max_chars=max_chars, overlap=overlap):
                    text = _document(600 + seed * 37, seed)
                    chunks = chunk_documents([(text, "doc")], max_chars, overlap)
                    self.assertEqual(text, _reconstruct(chunks))
                    self.assertTrue(all(len(chunk.text) <= max_chars for chunk in chunks))

    def test_word_boundaries(self) -> None:
        text = _document(1000, 3)
        chunks = chunk_documents([(text, "doc")], 128, 32)

        for chunk in chunks[:-1]:
            self.assertTrue(chunk.end == len(text) or text[chunk.end].isspace())

    def test_hard_split(self) -> None:
        chunks = chunk_documents([("x" * 200, "doc")], 64, 10)
        self.assertEqual([(0, 64), (64, 128), (128, 192), (192, 200)], [(chunk.start, chunk.end) for chunk in chunks])

    def test_counters(self) -> None:
        chunks = chunk_documents(
            [(_document(300, 1), "a"), ("short", "b"), (_document(300, 2), "a")], 128, 16, ChunkKind.KG,
        )
        ids = [chunk.chunk_id for chunk in chunks]

        self.assertEqual(len(ids), len(set(ids)))
        self.assertIn("b#0", ids)
        self.assertEqual(["a#%i" % index for index in range(len(ids) - 1)], [id_ for id_ in ids if id_ != "b#0"])
        self.assertTrue(all(chunk.kind is ChunkKind.KG for chunk in chunks))

    def test_invalid_params(self) -> None:
        for max_chars, overlap in ((63, 0), (64, 64), (100, -1), (100, 200)):
            with self.subTest(max_chars=max_chars, overlap=overlap), self.assertRaises(InvalidChunkParams):
                chunk_documents([("text", "doc")], max_chars, overlap)

    def test_chunk_validation(self) -> None:
        with self.assertRaises(ValueError):
            DocumentChunk("a#0", "", ChunkKind.RAW, "a")
        with self.assertRaises(ValueError):
            DocumentChunk("a#0", "text", ChunkKind.RAW, "a", 0, 10)


class TestIndex(unittest.TestCase):

    def test_build_empty(self) -> None:
        index = build_index([], HashEmbedder(64))

        self.assertEqual(0, len(index))
        self.assertEqual(64, index.dimension)
        self.assertEqual([], top_k(index, hash_embed("query", 64), 3))

    def test_build_order(self) -> None:
        chunks = _chunks(5)
        index = build_index(chunks, HashEmbedder(32), {"mode": "kg"})

        self.assertEqual(("c0", "c1", "c2", "c3", "c4"), index.chunk_ids)
        self.assertEqual([vector for vector, _ in index.entries], HashEmbedder(32).embed_batch([c.text for c in chunks]))
        self.assertEqual(chunks[3], index.chunks["c3"])
        self.assertEqual("hash-32", index.provider_name)
        self.assertEqual("kg", index.config["mode"])

    def test_build_duplicate(self) -> None:
        chunks = _chunks(3) + [DocumentChunk("c1", "again", ChunkKind.RAW, "doc")]
        with self.assertRaises(DuplicateChunkId) as context:
            build_index(chunks, HashEmbedder(32))
        self.assertEqual("c1", context.exception.chunk_id)

    def test_top_k_oracle(self) -> None:
        rng = np.random.default_rng(42)
        dimension = 32
        vectors = [EmbeddingVector.normalise(row) for row in rng.standard_normal((1000, dimension))]
        index = VectorIndex(dimension, _chunks(1000), vectors)
        matrix = index.matrix.astype(np.float64)

        for _ in range(50):
            query = EmbeddingVector.normalise(rng.standard_normal(dimension))
            scores = matrix @ query.values.astype(np.float64)
            ranking = sorted(range(1000), key=lambda position: (-scores[position], position))
            for k in (1, 5, 50):
                expected = [("c%i" % position, float(scores[position])) for position in ranking[:k]]
                self.assertEqual(expected, top_k(index, query, k))

    def test_self_similarity(self) -> None:
        chunks = [DocumentChunk("e%i" % i, text, ChunkKind.KG, "January") for i, text in enumerate((
            "Alex has event Team Meeting on 2024-01-15.",
            "Alex has event Family Dinner on 2024-01-20.",
            "Alex has event Raksha Bandhan on 2024-08-19.",
        ))]
        index = build_index(chunks, HashEmbedder())
        results = top_k(index, hash_embed(chunks[2].text), 10)

        self.assertEqual(3, len(results))
        self.assertEqual("e2", results[0][0])
        self.assertAlmostEqual(1.0, results[0][1], delta=1e-5)
        self.assertEqual(sorted((score for _, score in results), reverse=True), [score for _, score in results])

    def test_ties(self) -> None:
        vector = EmbeddingVector.normalise([1.0, 1.0, 0.0])
        other = EmbeddingVector.normalise([0.0, 0.0, 1.0])
        index = VectorIndex(3, _chunks(4), [other, vector, vector, vector])

        self.assertEqual(["c1", "c2", "c3"], [chunk_id for chunk_id, _ in top_k(index, vector, 3)])
        self.assertEqual(["c1", "c2", "c3", "c0"], [chunk_id for chunk_id, _ in top_k(index, vector, 10)])

    def test_errors(self) -> None:
        index = build_index(_chunks(2), HashEmbedder(32))

        with self.assertRaises(DimensionMismatch):
            top_k(index, hash_embed("chunk", 64), 1)
        with self.assertRaises(ValueError):
            top_k(index, hash_embed("chunk", 32), 0)
        with self.assertRaises(DimensionMismatch):
            VectorIndex(3, _chunks(1), [EmbeddingVector.normalise([1.0, 0.0])])
        with self.assertRaises(ValueError):
            VectorIndex(2, _chunks(2), [EmbeddingVector.normalise([1.0, 0.0])])


class TestStore(unittest.TestCase):

    def setUp(self) -> None:
        self._directory = tempfile.TemporaryDirectory()
        self.directory = os.path.join(self._directory.name, "kg")
        self.index = build_index(
            chunk_documents([(_document(900, 4), "January"), ("Alex has event X.", "March")], 256, 32),
            HashEmbedder(32),
            {"mode": "kg", "max_chars": 256},
        )
        write_index(self.index, self.directory)

    def tearDown(self) -> None:
        self._directory.cleanup()

    def test_round_trip(self) -> None:
        index = read_index(self.directory)

        self.assertEqual(self.index, index)
        self.assertEqual("hash-32", index.provider_name)
        self.assertIsNone(index.provider)
        self.assertEqual({"mode": "kg", "max_chars": 256}, dict(index.config))

        provider = HashEmbedder(32)
        self.assertIs(provider, read_index(self.directory, provider).provider)

    def test_vectors_file(self) -> None:
        path = os.path.join(self.directory, "vectors.bin")
        with open(path, "rb") as stream:
            data = stream.read()

        self.assertEqual(b"KGRAGIDX", data[:8])
        self.assertEqual(IndexHeader.SIZE + len(self.index) * 32 * 4, len(data))

    def test_bad_magic(self) -> None:
        path = os.path.join(self.directory, "vectors.bin")
        with open(path, "r+b") as stream:
            stream.write(b"NOTANIDX")

        with self.assertRaises(DataError) as context:
            read_index(self.directory)
        self.assertEqual(FileOffset(path, 0), context.exception.source)

    def test_truncated(self) -> None:
        path = os.path.join(self.directory, "vectors.bin")
        with open(path, "r+b") as stream:
            stream.truncate(IndexHeader.SIZE + 10)

        with self.assertRaises(DataError):
            read_index(self.directory)

    def test_dimension_mismatch(self) -> None:
        with self.assertRaises(DimensionMismatch):
            read_index(self.directory, HashEmbedder(64))

    def test_missing(self) -> None:
        with self.assertRaises(FileNotFound):
            read_index(os.path.join(self._directory.name, "nothing"))

        os.remove(os.path.join(self.directory, "vectors.bin"))
        with self.assertRaises(FileNotFound):
            read_index(self.directory)


if __name__ == "__main__":
    unittest.main()
