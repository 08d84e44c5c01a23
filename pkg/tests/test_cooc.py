"""Co-occurrence graph construction, merging, and persistence tests."""

import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from agftopics.cooc import (
    CoocGraph,
    build_batch_graph,
    load_cooc_graph,
    merge_post,
    post_graph,
    save_cooc_graph,
)


def brute_force_graph(posts):
    """Independent oracle: count everything by direct scans."""
    vocab = sorted({w for p in posts for w in p})
    tf = {w: sum(p.count(w) for p in posts) for w in vocab}
    df = {w: sum(1 for p in posts if w in p) for w in vocab}
    edges = {}
    for x, y in combinations(vocab, 2):
        count = sum(1 for p in posts if x in p and y in p)
        if count:
            edges[(x, y)] = count
    return tf, df, edges


def assert_matches_brute_force(graph, posts):
    tf, df, edges = brute_force_graph(posts)
    assert graph.tf == tf
    assert graph.df == df
    assert graph.edges == edges


class TestPostGraph:
    def test_repeated_words_post(self):
        graph = post_graph(["a", "b", "c", "a", "c"])
        assert graph.tf == {"a": 2, "b": 1, "c": 2}
        assert graph.df == {"a": 1, "b": 1, "c": 1}
        assert graph.edges == {("a", "b"): 1, ("a", "c"): 1, ("b", "c"): 1}

    def test_single_word_post(self):
        graph = post_graph(["only"])
        assert graph.tf == {"only": 1}
        assert graph.edges == {}

    def test_empty_post(self):
        graph = post_graph([])
        assert graph.tf == {} and graph.df == {} and graph.edges == {}

    def test_cooc_is_binary_per_post(self):
        # Multiplicity raises tf but never the pair weight.
        graph = post_graph(["a", "a", "b", "b", "b"])
        assert graph.cooc("a", "b") == 1

    def test_cooc_accessor_symmetric(self):
        graph = post_graph(["x", "y"])
        assert graph.cooc("x", "y") == graph.cooc("y", "x") == 1
        assert graph.cooc("x", "x") == 0
        assert graph.cooc("x", "absent") == 0


class TestMergePost:
    def test_shared_word_accumulates(self):
        batch = post_graph(["w", "a"])
        merge_post(batch, post_graph(["w", "w", "b"]))
        assert batch.tf["w"] == 3
        assert batch.df["w"] == 2

    def test_disjoint_posts_union(self):
        batch = post_graph(["a", "b"])
        merge_post(batch, post_graph(["c", "d"]))
        assert batch.tf == {"a": 1, "b": 1, "c": 1, "d": 1}
        assert batch.edges == {("a", "b"): 1, ("c", "d"): 1}

    def test_merging_same_post_twice_doubles(self):
        single = post_graph(["a", "b", "a"])
        batch = post_graph(["a", "b", "a"])
        merge_post(batch, post_graph(["a", "b", "a"]))
        assert batch.tf == {w: 2 * v for w, v in single.tf.items()}
        assert batch.df == {w: 2 * v for w, v in single.df.items()}
        assert batch.edges == {e: 2 * v for e, v in single.edges.items()}

    def test_merge_order_irrelevant(self):
        posts = [["a", "b"], ["b", "c"], ["c", "a", "a"]]
        forward = build_batch_graph(posts)
        backward = build_batch_graph(posts[::-1])
        assert forward.tf == backward.tf
        assert forward.df == backward.df
        assert forward.edges == backward.edges


class TestBuildBatchGraph:
    def test_two_post_accumulation(self):
        graph = build_batch_graph([["a", "b", "c"], ["b", "c", "d"]])
        assert graph.tf == {"a": 1, "b": 2, "c": 2, "d": 1}
        assert graph.df == {"a": 1, "b": 2, "c": 2, "d": 1}
        assert graph.cooc("b", "c") == 2
        assert graph.cooc("a", "d") == 0
        assert graph.batch_size == 2

    def test_repeated_pair_weight(self):
        graph = build_batch_graph([["a", "b"]] * 7)
        assert graph.cooc("a", "b") == 7
        assert graph.df == {"a": 7, "b": 7}

    def test_small_random_batch_matches_brute_force(self):
        rng = random.Random(5)
        vocab = list("abcdef")
        posts = [rng.choices(vocab, k=rng.randint(1, 6)) for _ in range(5)]
        assert_matches_brute_force(build_batch_graph(posts), posts)

    def test_batch_size_counts_empty_posts_by_default(self):
        posts = [["a"], [], ["b"]]
        assert build_batch_graph(posts).batch_size == 3
        assert build_batch_graph(posts, count_empty_posts=False).batch_size == 2

    def test_empty_batch(self):
        graph = build_batch_graph([])
        assert graph.tf == {} and graph.batch_size == 0

    @given(
        st.lists(
            st.lists(st.sampled_from("abcde"), min_size=0, max_size=6),
            min_size=0,
            max_size=10,
        )
    )
    def test_property_matches_brute_force(self, posts):
        graph = build_batch_graph(posts)
        assert_matches_brute_force(graph, posts)

    def test_edge_keys_canonical(self):
        graph = build_batch_graph([["z", "a"], ["m", "z"]])
        assert all(x <= y for x, y in graph.edges)


class TestPersistence:
    def test_round_trip(self, tmp_path):
        graph = build_batch_graph([["b", "a", "a"], ["b", "c"], []])
        nodes = str(tmp_path / "nodes.tsv")
        edges = str(tmp_path / "edges.tsv")
        save_cooc_graph(graph, 7, nodes, edges)
        loaded, window_index = load_cooc_graph(nodes, edges)
        assert window_index == 7
        assert loaded.batch_size == graph.batch_size
        assert loaded.tf == graph.tf
        assert loaded.df == graph.df
        assert loaded.edges == graph.edges

    def test_header_carries_batch_size_and_window(self, tmp_path):
        graph = CoocGraph(tf={"a": 1}, df={"a": 1}, edges={}, batch_size=12)
        nodes = str(tmp_path / "nodes.tsv")
        edges = str(tmp_path / "edges.tsv")
        save_cooc_graph(graph, 3, nodes, edges)
        with open(nodes, encoding="utf-8") as fh:
            header = fh.readline()
        assert header == "# batch_size=12\twindow=3\n"

    def test_missing_header_rejected(self, tmp_path):
        nodes = tmp_path / "nodes.tsv"
        nodes.write_text("a\t1\t1\n", encoding="utf-8")
        edges = tmp_path / "edges.tsv"
        edges.write_text("", encoding="utf-8")
        with pytest.raises(ValueError, match="header"):
            load_cooc_graph(str(nodes), str(edges))
