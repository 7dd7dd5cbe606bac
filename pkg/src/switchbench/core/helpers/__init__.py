from .registry import GRAPH_BUILDERS, register_graph

__all__ = ["GRAPH_BUILDERS", "register_graph"]
