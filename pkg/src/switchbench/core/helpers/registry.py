from switchbench.contracts.enums import GraphKind

# This will hold the mapping
GRAPH_BUILDERS = {}


def register_graph(kind: GraphKind):
    """
    A decorator to register the function building one kind of representation graph.
    """
    def decorator(builder):
        if kind in GRAPH_BUILDERS:
            raise ValueError(f"Graph kind '{kind.value}' is already registered!")
        GRAPH_BUILDERS[kind] = builder
        return builder
    return decorator
