"""Graph semantics, blank-node isomorphism, skolemization."""

import pytest

from oakit import BlankNode, Graph, Iri, Literal, isomorphic, skolemize
from oakit.vocab import OA, RDF

A = Iri("http://example.org/a")
B = Iri("http://example.org/b")
P = Iri("http://example.org/p")
Q = Iri("http://example.org/q")


def test_duplicate_triples_deduplicate():
    g = Graph([(A, P, B), (A, P, B)])
    assert len(g) == 1


def test_insertion_order_is_kept():
    g = Graph([(A, P, Literal("1")), (A, P, Literal("2")), (A, Q, B)])
    assert g.objects(A, P) == (Literal("1"), Literal("2"))


def test_equality_is_set_based():
    g1 = Graph([(A, P, B), (A, Q, B)])
    g2 = Graph([(A, Q, B), (A, P, B)])
    assert g1 == g2


def test_rejects_malformed_triples():
    with pytest.raises(TypeError):
        Graph([(Literal("x"), P, B)])
    with pytest.raises(TypeError):
        Graph([(A, BlankNode("b"), B)])


class TestIsomorphic:
    def test_renamed_blanks_are_isomorphic(self):
        g1 = Graph([(BlankNode("x"), P, A), (BlankNode("x"), Q, BlankNode("y"))])
        g2 = Graph([(BlankNode("m"), P, A), (BlankNode("m"), Q, BlankNode("n"))])
        assert isomorphic(g1, g2)

    def test_changed_literal_is_not(self):
        g1 = Graph([(BlankNode("x"), OA.start, Literal("488"))])
        g2 = Graph([(BlankNode("x"), OA.start, Literal("489"))])
        assert not isomorphic(g1, g2)

    def test_blank_vs_skolemized_is_not(self):
        g = Graph([(BlankNode("x"), P, A)])
        assert not isomorphic(g, skolemize(g, "http://example.org/genid/"))

    def test_structure_must_match(self):
        g1 = Graph([(BlankNode("x"), P, BlankNode("y")), (BlankNode("y"), P, A)])
        g2 = Graph([(BlankNode("x"), P, BlankNode("y")), (BlankNode("x"), P, A)])
        assert not isomorphic(g1, g2)

    def test_swapped_roles_need_real_bijection(self):
        g1 = Graph([
            (BlankNode("x"), P, Literal("1")),
            (BlankNode("y"), P, Literal("2")),
            (BlankNode("x"), Q, BlankNode("y")),
        ])
        g2 = Graph([
            (BlankNode("y"), P, Literal("1")),
            (BlankNode("x"), P, Literal("2")),
            (BlankNode("y"), Q, BlankNode("x")),
        ])
        assert isomorphic(g1, g2)
        g3 = Graph([
            (BlankNode("y"), P, Literal("1")),
            (BlankNode("x"), P, Literal("2")),
            (BlankNode("x"), Q, BlankNode("y")),
        ])
        assert not isomorphic(g1, g3)

    def test_ground_triples_compare_exactly(self):
        assert not isomorphic(Graph([(A, P, B)]), Graph([(A, Q, B)]))
        assert isomorphic(Graph([(A, P, B)]), Graph([(A, P, B)]))


class TestSkolemize:
    def test_blanks_are_replaced(self):
        g = Graph([(BlankNode("b2"), RDF.type, OA.TimeState), (A, P, BlankNode("b2"))])
        sk = skolemize(g, "http://example.org/genid/")
        assert not any(
            isinstance(t, BlankNode) for triple in sk for t in (triple[0], triple[2])
        )
        nodes = {s for s, _, _ in sk}
        assert Iri("http://example.org/genid/genid0") in nodes

    def test_shape_is_preserved(self):
        g = Graph([(BlankNode("b2"), P, A), (B, Q, BlankNode("b2"))])
        sk = skolemize(g, "http://example.org/genid/")
        (new_node,) = {s for s, _, _ in sk} - {B}
        assert (new_node, P, A) in sk
        assert (B, Q, new_node) in sk

    def test_no_blanks_is_identity(self):
        g = Graph([(A, P, B)])
        assert skolemize(g, "http://example.org/genid/") == g

    def test_idempotent(self):
        g = Graph([(BlankNode("x"), P, A), (BlankNode("y"), Q, BlankNode("x"))])
        once = skolemize(g, "http://example.org/genid/")
        assert skolemize(once, "http://example.org/genid/") == once

    def test_deterministic_given_label_order(self):
        g1 = Graph([(BlankNode("a"), P, A), (BlankNode("b"), Q, B)])
        g2 = Graph([(BlankNode("b"), Q, B), (BlankNode("a"), P, A)])
        assert skolemize(g1, "http://example.org/genid/") == skolemize(
            g2, "http://example.org/genid/"
        )

    def test_base_must_end_with_slash(self):
        with pytest.raises(ValueError):
            skolemize(Graph(), "http://example.org/genid")
