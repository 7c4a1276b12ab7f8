"""Shared fixtures: the small labeled graphs and vines used throughout."""

import pytest

from matvines import LabeledGraph


def path_graph_k4():
    """Complete graph on v1..v4 whose label-1 edges form the path
    v1-v2-v3-v4 (the one with a path-shaped bottom tree)."""
    return LabeledGraph.build(
        ["v1", "v2", "v3", "v4"],
        [("v1", "v2", 1), ("v2", "v3", 1), ("v3", "v4", 1),
         ("v1", "v3", 2), ("v2", "v4", 2), ("v1", "v4", 3)])


def star_graph_k4():
    """Complete graph on v1..v4 whose label-1 edges form the star at v1."""
    return LabeledGraph.build(
        ["v1", "v2", "v3", "v4"],
        [("v1", "v2", 1), ("v1", "v3", 1), ("v1", "v4", 1),
         ("v2", "v3", 2), ("v2", "v4", 2), ("v3", "v4", 3)])


def five_vertex_graph():
    """The 5-vertex non-complete valid labeled graph used as the running
    truncation example."""
    return LabeledGraph.build(
        ["v1", "v2", "v3", "v4", "v5"],
        [("v1", "v4", 1), ("v2", "v4", 1), ("v3", "v4", 1), ("v4", "v5", 1),
         ("v1", "v3", 2), ("v2", "v3", 2), ("v3", "v5", 2)])


def seven_vertex_graph():
    """The 7-vertex valid labeled graph whose vine illustrates upper
    truncation."""
    return LabeledGraph.build(
        ["v1", "v2", "v3", "v4", "v5", "v6", "v7"],
        [("v1", "v3", 2), ("v3", "v5", 2), ("v2", "v3", 2), ("v4", "v6", 2),
         ("v6", "v7", 2), ("v1", "v2", 3), ("v2", "v5", 3), ("v4", "v5", 1),
         ("v5", "v6", 1), ("v5", "v7", 1), ("v1", "v4", 1), ("v2", "v4", 1),
         ("v3", "v4", 1)])


@pytest.fixture
def d4_graph():
    return path_graph_k4()


@pytest.fixture
def c4_graph():
    return star_graph_k4()


@pytest.fixture
def lrv_graph():
    return five_vertex_graph()
